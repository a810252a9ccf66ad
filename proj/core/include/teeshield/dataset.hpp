#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "teeshield/graph.hpp"
#include "teeshield/tensor.hpp"

namespace teeshield {

struct Sample {
    Tensor x;
    int y = 0;
};

// Labeled splits for the privacy experiments:
//   members     train the victim,
//   nonmembers  same distribution, held out,
//   test        disjoint evaluation set,
//   query       the attacker's pseudo-label pool, capped at 1% of members.
struct DatasetBundle {
    size_t num_classes = 0;
    std::vector<size_t> image_shape;
    std::vector<Sample> members;
    std::vector<Sample> nonmembers;
    std::vector<Sample> test;
    std::vector<Sample> query;

    // Disjointness (content hashes) and the query budget cap.
    void validate() const;
};

enum class DatasetVariant {
    Primary,    // the victim's task
    Auxiliary,  // shifted parameters, used to pre-train the public model
};

struct DatasetParams {
    uint64_t seed = 1;
    size_t num_classes = 4;
    size_t per_class = 400;  // members per class
    std::vector<size_t> image_shape{1, 16, 16};
    DatasetVariant variant = DatasetVariant::Primary;
};

// Noisy parametric textures (oriented gratings, checkerboards), class-
// balanced and deterministic per seed. nonmembers/test are per_class/4 each;
// |query| = floor(0.01 * |members|).
DatasetBundle generate_synthetic_dataset(const DatasetParams& params);

Tensor make_batch(const std::vector<Sample>& samples, size_t begin, size_t count);
std::vector<int> batch_labels(const std::vector<Sample>& samples, size_t begin, size_t count);

double accuracy(const ModelGraph& graph, const std::vector<Sample>& samples,
                size_t batch_size = 64);

}  // namespace teeshield
