#pragma once

#include <cstdint>

#include "teeshield/dataset.hpp"
#include "teeshield/optimizer.hpp"
#include "teeshield/serialize.hpp"

namespace teeshield {

struct PretrainConfig {
    uint64_t seed = 7;
    size_t public_epochs = 40;
    size_t finetune_epochs = 20;
    size_t batch_size = 64;
    SgdConfig public_sgd{0.05, 0.5, 5e-4};
    SgdConfig finetune_sgd{0.02, 0.5, 5e-4};
};

struct PretrainResult {
    Checkpoint public_ckpt;
    Checkpoint victim_ckpt;
    ReplayLog replay;  // finetune_epochs entries, feeds update attribution
    std::vector<double> public_loss;
    std::vector<double> victim_loss;
};

// Trains the public model on an auxiliary distribution (shifted parameters of
// the same task family), then fine-tunes it on the bundle's members with
// per-epoch (gradient, delta) recording. Deterministic per seed.
PretrainResult make_public_and_victim(const ModelGraph& structure, const DatasetBundle& bundle,
                                      const PretrainConfig& cfg);

}  // namespace teeshield
