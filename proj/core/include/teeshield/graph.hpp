#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "teeshield/tensor.hpp"

namespace teeshield {

enum class LayerKind { Conv2d, Dense, Relu, MaxPool2x2, GlobalAvgPool, Flatten };

const char* kind_name(LayerKind k);
LayerKind kind_from_name(const std::string& name);
bool kind_is_linear(LayerKind k);

struct ConvHyper {
    size_t in_channels = 0;
    size_t out_channels = 0;
    size_t kernel = 3;
    size_t stride = 1;
    size_t padding = 0;
};

struct DenseHyper {
    size_t in_features = 0;
    size_t out_features = 0;
};

// One node of the sequential graph. Linear kinds (conv2d, dense) carry
// "weight" and "bias" parameter tensors; non-linear kinds carry none.
struct LayerNode {
    std::string id;
    LayerKind kind = LayerKind::Relu;
    ConvHyper conv;
    DenseHyper dense;
    std::map<std::string, Tensor> params;

    bool linear() const { return kind_is_linear(kind); }
    size_t param_count() const;
};

// Output shape of `node` for a per-sample input shape (no batch dim).
// Throws ValidationError naming the node when the shapes are incompatible.
std::vector<size_t> node_output_shape(const LayerNode& node, const std::vector<size_t>& in);

// Ordered chain of layers. The same structure backs the public, victim and
// surrogate checkpoints; parameters are swapped in and out of `params`.
class ModelGraph {
public:
    std::vector<size_t> input_shape;  // per-sample, e.g. [1,16,16]
    size_t num_classes = 0;
    std::vector<LayerNode> nodes;

    // Chain-compatibility of all shapes; unique ids; final logits length.
    void validate() const;

    const LayerNode& node(const std::string& id) const;
    LayerNode& node(const std::string& id);
    bool has_node(const std::string& id) const;
    size_t node_index(const std::string& id) const;

    std::vector<std::string> linear_ids() const;
    size_t total_param_count() const;

    // Hash of the architecture (ids, kinds, hyperparameters, shapes),
    // independent of parameter values.
    uint64_t structure_hash() const;

    // He-style fan-in initialization from a per-node named stream.
    void init_params(uint64_t seed);
};

// The default desk-scale chain: three conv blocks and a three-layer dense
// head, six linear tensors in total.
ModelGraph default_desk_graph(std::vector<size_t> input_shape, size_t num_classes);

}  // namespace teeshield
