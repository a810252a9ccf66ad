#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "teeshield/graph.hpp"
#include "teeshield/placement.hpp"

namespace teeshield {

// Random invertible output-side mix for one linear tensor: R spans the
// output channels (conv) or output units (dense). Draws with an infinity-
// norm condition number above the cap are rejected and resampled.
struct ObfuscationKey {
    std::string tensor_id;
    Tensor r;      // [out, out]
    Tensor r_inv;  // explicit inverse
    uint64_t seed = 0;
};

inline constexpr double kObfConditionCap = 1e3;
inline constexpr double kObfInverseTol = 1e-9;

// ||R * R_inv - I||_max, the key's invertibility residual.
double key_residual(const ObfuscationKey& key);

// One key per OBF-placed tensor, deterministic per seed. Throws NumericError
// if a well-conditioned draw is not found within 16 resamples.
std::map<std::string, ObfuscationKey> keygen(const PlacementPlan& plan, const ModelGraph& graph,
                                             uint64_t seed);

ObfuscationKey make_key(const ModelGraph& graph, const std::string& tensor_id, uint64_t seed);

// Output-side mixing: W_obf = R*W (conv: R mixes output channels), b_obf = R*b.
// The plaintext weights never enter REE state.
struct ObfuscatedParams {
    Tensor weight;
    Tensor bias;
};
ObfuscatedParams obfuscate(const Tensor& weight, const Tensor& bias, const ObfuscationKey& key);

// y = R_inv * y_obf, applied per spatial position for conv outputs.
// `batched` layout: [B, out, ...spatial] or [B, out].
Tensor deobfuscate_output(const Tensor& y_obf, const ObfuscationKey& key);

}  // namespace teeshield
