#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "teeshield/dataset.hpp"
#include "teeshield/graph.hpp"
#include "teeshield/optimizer.hpp"
#include "teeshield/serialize.hpp"

namespace teeshield {

// Per-tensor criticality: score = intrinsic * transition.
struct TensorCriticality {
    std::string tensor_id;
    double intrinsic = 0.0;   // >= 0
    double transition = 0.0;  // in [0,1]
    double score = 0.0;
    size_t param_count = 0;
};

struct CriticalityConfig {
    size_t probe_count = 16;
    uint64_t probe_seed = 0;
    // One-shot fallback: delta = victim - public, gradients from a single
    // probe batch at the victim, instead of the recorded fine-tune replay.
    bool one_shot = false;
};

struct CriticalityReport {
    std::vector<TensorCriticality> entries;  // descending score, ties by node order
    size_t replay_epochs = 0;
    size_t probe_count = 0;
    uint64_t probe_seed = 0;
    bool one_shot = false;

    std::vector<std::string> ranking() const;
};

// Intrinsic tensor importance: per-epoch loss-reduction contribution of the
// tensor's updates, normalized by parameter count, clamped at zero and
// accumulated over the replay:
//     sum_e max(0, -(1/n) * sum_i g_i * dw_i)
double intrinsic_importance(const ReplayLog& replay, const std::string& tensor_id);

// Attention transition: mean over probes of 1 - cos(map_vic, map_pub).
// If exactly one of the two maps is all-zero the per-probe value is 1;
// if both are zero it is 0.
double attention_transition(const ModelGraph& victim, const ModelGraph& pub,
                            const std::string& tensor_id, const std::vector<Sample>& probes);

// Scores every linear tensor of the graph. Probes are drawn from `probe_pool`
// (the attacker-visible query split) with the config's seed.
CriticalityReport criticality_scores(const ModelGraph& structure, const Checkpoint& victim,
                                     const Checkpoint& pub, const ReplayLog& replay,
                                     const std::vector<Sample>& probe_pool,
                                     const CriticalityConfig& cfg);

std::string criticality_report_to_json_text(const CriticalityReport& report);
CriticalityReport criticality_report_from_json_text(const std::string& text,
                                                    const std::string& origin);
void save_criticality_report(const CriticalityReport& report, const std::string& path);
CriticalityReport load_criticality_report(const std::string& path);

}  // namespace teeshield
