#pragma once

#include <map>
#include <string>
#include <vector>

#include "teeshield/graph.hpp"
#include "teeshield/tensor.hpp"

namespace teeshield {

// Forward-pass record: every node's batched output, in graph order.
// `logits` aliases the last node's output.
struct Activations {
    std::map<std::string, Tensor> outputs;
    Tensor logits;
};

// Reverse-pass record. param_grads[node][param] matches the parameter
// shapes; activation_grads[node] matches the node's output.
struct GradientBundle {
    std::map<std::string, std::map<std::string, Tensor>> param_grads;
    std::map<std::string, Tensor> activation_grads;
    Tensor input_grad;
};

// Deterministic forward pass over a batch shaped [B] + input_shape.
Activations forward(const ModelGraph& graph, const Tensor& batch);

struct LossGrad {
    double loss = 0.0;
    Tensor dlogits;
};

// Mean softmax cross-entropy over the batch, with the gradient w.r.t.
// logits. Numerically stable (shift-invariant) form.
LossGrad softmax_cross_entropy(const Tensor& logits, const std::vector<int>& labels);

// Row-wise softmax of [B, K] logits.
Tensor softmax(const Tensor& logits);

// Reverse pass seeded with an arbitrary gradient at the logits.
GradientBundle backward_from(const ModelGraph& graph, const Tensor& batch,
                             const Activations& acts, const Tensor& dlogits);

struct BackwardResult {
    double loss = 0.0;
    GradientBundle grads;
    Activations acts;
};

// forward + softmax-CE + reverse pass in one call.
BackwardResult backward(const ModelGraph& graph, const Tensor& batch,
                        const std::vector<int>& labels);

std::vector<int> argmax_rows(const Tensor& logits);

}  // namespace teeshield
