#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "teeshield/graph.hpp"
#include "teeshield/profile.hpp"

namespace teeshield {

// Execution options per linear tensor. The option index is the tie-break
// order for the solvers.
enum class PlacementOption : int {
    ReeCpu = 0,
    ReeGpu = 1,
    ReeCpuObf = 2,
    ReeGpuObf = 3,
    TeeCpu = 4,
};

enum class World { Ree, Tee };

const char* option_name(PlacementOption o);
PlacementOption option_from_name(const std::string& s);
World option_world(PlacementOption o);
bool option_obfuscated(PlacementOption o);
const char* world_name(World w);

enum class EventCategory { Cal, Comm, Mask, Deobf, Switch };
const char* category_name(EventCategory c);

// One priced step of the execution schedule. `feature_id` names the padded
// transmission for Mask steps; `unit_id` is the executing node (Cal), the
// obfuscated tensor (Deobf), the pricing consumer (Mask), or the destination
// node (Switch).
struct ScheduleStep {
    EventCategory category = EventCategory::Cal;
    std::string unit_id;
    World world = World::Ree;
    double seconds = 0.0;
    std::string feature_id;
};

// Deterministic execution schedule derived from per-tensor options: node
// worlds, switch points, mask and deobfuscation service steps. Both the
// predicted latency and the secure simulator consume this, which makes the
// two accountings identical by construction.
struct Schedule {
    std::vector<ScheduleStep> steps;
    std::map<std::string, World> worlds;         // every node
    std::set<std::string> boundary_features;     // features crossing TEE<->REE
    std::vector<std::string> zero_priced_masks;  // masked crossings into plain REE consumers
    size_t executed_units = 0;                   // nodes + TEE service visits
    double total_seconds = 0.0;
};

Schedule derive_schedule(const ModelGraph& graph,
                         const std::map<std::string, PlacementOption>& options,
                         const std::set<std::string>& masked, const HardwareProfile& profile);

struct PlacementPlan {
    std::map<std::string, PlacementOption> options;  // per linear tensor
    std::map<std::string, World> worlds;             // derived, every node
    std::set<std::string> boundary_features;         // derived
    std::set<std::string> critical;                  // snapshot of the inputs
    std::set<std::string> masked;
    double predicted_latency = 0.0;
    // Set when an OBF tensor skipped t_mask because its input transmission is
    // not in the masked set (the cost table charges masking unconditionally).
    bool selective_mask_deviation = false;
    std::vector<std::string> zero_priced_masks;
};

// Cost of executing one tensor under one option:
//   ReeCpu       t_ree_cpu
//   ReeGpu       t_ree_gpu
//   ReeCpuObf    t_ree_cpu + t_deobf + (t_mask if feature_is_masked)
//   ReeGpuObf    t_ree_gpu + t_deobf + (t_mask if feature_is_masked)
//   TeeCpu       t_tee_cpu
// Throws ValidationError for an option outside the tensor's legal set.
double option_cost(const std::string& tensor_id, PlacementOption option,
                   const HardwareProfile& profile, bool feature_is_masked,
                   bool is_critical);

// Legal options: critical tensors run shielded (TEE if the tensor fits the
// TEE memory budget, or obfuscated in the REE); non-critical tensors run
// plainly in the REE.
std::vector<PlacementOption> legal_options(const std::string& tensor_id, bool is_critical,
                                           const HardwareProfile& profile);

// Builds the plan record (derived worlds, boundary, latency) for an explicit
// option assignment.
PlacementPlan finalize_plan(const ModelGraph& graph,
                            const std::map<std::string, PlacementOption>& options,
                            const std::set<std::string>& critical,
                            const std::set<std::string>& masked, const HardwareProfile& profile);

// Per-tensor argmin of option_cost, ignoring switch costs during the choice
// (they are still part of predicted_latency). Ties break to the lowest
// option index.
PlacementPlan plan_relaxed(const ModelGraph& graph, const HardwareProfile& profile,
                           const std::set<std::string>& critical,
                           const std::set<std::string>& masked);

// Exact minimizer of the full objective (option costs plus switch costs)
// via a dynamic program over (tensor index, option, pad-pending) states.
// Ties break to the lexicographically smallest option sequence.
PlacementPlan plan_exact(const ModelGraph& graph, const HardwareProfile& profile,
                         const std::set<std::string>& critical,
                         const std::set<std::string>& masked);

// Empty iff the plan satisfies every structural rule. Violations name the
// rule and the offending tensor.
std::vector<std::string> validate_plan(const PlacementPlan& plan, const ModelGraph& graph,
                                       const std::set<std::string>& critical,
                                       const std::set<std::string>& masked,
                                       const HardwareProfile& profile);

// Recomputes the schedule total for the plan's options.
double predicted_latency(const PlacementPlan& plan, const ModelGraph& graph,
                         const HardwareProfile& profile);

std::string plan_to_json_text(const PlacementPlan& plan);
PlacementPlan plan_from_json_text(const std::string& text, const std::string& origin);
void save_plan(const PlacementPlan& plan, const std::string& path);
PlacementPlan load_plan(const std::string& path);

}  // namespace teeshield
