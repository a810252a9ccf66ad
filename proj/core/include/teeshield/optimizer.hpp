#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "teeshield/dataset.hpp"
#include "teeshield/engine.hpp"
#include "teeshield/graph.hpp"

namespace teeshield {

using ParamMap = std::map<std::string, std::map<std::string, Tensor>>;

struct SgdConfig {
    double lr = 0.1;
    double momentum = 0.5;
    double weight_decay = 5e-4;
};

// SGD with momentum and weight decay:
//   g' = g + wd*w,  v <- mu*v + g',  w <- w - lr*v
// step() returns the exact per-parameter deltas (w_after - w_before).
class SgdOptimizer {
public:
    explicit SgdOptimizer(SgdConfig cfg) : cfg_(cfg) {}

    ParamMap step(ModelGraph& graph, const GradientBundle& grads);

    double lr() const { return cfg_.lr; }
    void set_lr(double lr) { cfg_.lr = lr; }

private:
    SgdConfig cfg_;
    ParamMap velocity_;
};

// Per-epoch replay entry for update attribution: the mean gradient across
// the epoch's optimizer steps and the net weight change over the epoch,
// for every linear node.
struct ReplayEpoch {
    ParamMap grads;
    ParamMap deltas;
};

struct ReplayLog {
    uint64_t structure_hash = 0;
    std::vector<ReplayEpoch> epochs;

    bool has_tensor(const std::string& node_id) const;
};

struct TrainConfig {
    size_t epochs = 100;
    size_t batch_size = 64;  // 0 = full batch
    SgdConfig sgd;
    uint64_t seed = 0;
    size_t lr_decay_every = 0;  // 0 = constant lr
    double lr_decay_factor = 0.1;
    bool record_replay = false;
};

struct TrainResult {
    std::vector<double> loss_per_epoch;
    ReplayLog replay;  // empty unless record_replay
};

// In-place minibatch training. Deterministic for a fixed seed (seeded
// shuffles, sequential reductions). Throws NumericError carrying the epoch
// index if the loss diverges.
TrainResult train(ModelGraph& graph, const std::vector<Sample>& data, const TrainConfig& cfg);

}  // namespace teeshield
