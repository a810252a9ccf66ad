#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "teeshield/graph.hpp"

namespace teeshield {

// Measured or synthetic per-tensor execution costs (seconds).
struct TensorCost {
    double t_ree_cpu = 0.0;
    double t_ree_gpu = 0.0;
    double t_tee_cpu = 0.0;
    double t_deobf = 0.0;
    double t_mask = 0.0;       // masking including the later unmasking
    uint64_t mem_bytes = 0;    // TEE residency footprint of the tensor
};

struct HardwareProfile {
    double t_switch = 0.0;           // one TEE<->REE world change
    uint64_t tee_memory_bytes = 0;   // TEE budget M
    std::map<std::string, TensorCost> tensors;

    const TensorCost& at(const std::string& tensor_id) const;
    bool fits_tee(const std::string& tensor_id) const;
    void validate() const;
};

// Multiply-accumulate count of one linear tensor's forward pass, used by the
// synthetic profile to shape CPU/GPU affinity.
uint64_t tensor_macs(const ModelGraph& graph, const std::string& tensor_id);

// Seeded synthetic profile: CPU favours small tensors, GPU amortizes large
// ones past a fixed-overhead crossover; TEE CPU runs at a constant factor
// over REE CPU; deobfuscation and masking scale with the output size.
HardwareProfile synthetic_profile(const ModelGraph& graph, uint64_t seed);

std::string profile_to_json_text(const HardwareProfile& p);
HardwareProfile profile_from_json_text(const std::string& text, const std::string& origin);
void save_profile(const HardwareProfile& p, const std::string& path);
HardwareProfile load_profile(const std::string& path);

}  // namespace teeshield
