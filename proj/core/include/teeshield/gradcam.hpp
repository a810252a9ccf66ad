#pragma once

#include <string>
#include <vector>

#include "teeshield/dataset.hpp"
#include "teeshield/graph.hpp"

namespace teeshield {

// Attention heatmap for one linear tensor on one probe input.
// Non-negative by construction; L2-normalized unless all-zero.
struct AttentionMap {
    std::string tensor_id;
    std::string probe_id;
    std::vector<double> map;
    bool all_zero = false;
};

// Class-attention map of `tensor_id`'s output for the model's own predicted
// class on the probe.
//
// conv tensors:  per-channel weights a_c = spatial mean of d(logit)/dA_c over
//                the tensor's output activation A; map = ReLU(sum_c a_c A_c),
//                flattened and L2-normalized.
// dense tensors: |activation * gradient| of the layer output, L2-normalized
//                (no spatial structure to pool over).
AttentionMap grad_cam(const ModelGraph& model, const std::string& tensor_id,
                      const Sample& probe, const std::string& probe_id);

// Cosine similarity of two maps of equal length. Bitwise-equal maps return
// exactly 1. Zero-map conventions are handled by the caller.
double attention_cosine(const AttentionMap& a, const AttentionMap& b);

}  // namespace teeshield
