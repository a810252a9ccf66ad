#include "teeshield/gradcam.hpp"

#include <algorithm>
#include <cmath>

#include "teeshield/engine.hpp"
#include "teeshield/errors.hpp"

namespace teeshield {

namespace {

void l2_normalize(std::vector<double>& v, bool& all_zero) {
    double norm2 = 0.0;
    for (double x : v) norm2 += x * x;
    if (norm2 <= 0.0) {
        all_zero = true;
        return;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : v) x *= inv;
    all_zero = false;
}

}  // namespace

AttentionMap grad_cam(const ModelGraph& model, const std::string& tensor_id,
                      const Sample& probe, const std::string& probe_id) {
    const LayerNode& node = model.node(tensor_id);
    if (!node.linear())
        throw ValidationError("grad_cam: '" + tensor_id + "' is not a linear tensor");

    std::vector<size_t> bshape{1};
    bshape.insert(bshape.end(), probe.x.shape().begin(), probe.x.shape().end());
    const Tensor batch = probe.x.reshaped(std::move(bshape));

    Activations acts = forward(model, batch);
    const int target = argmax_rows(acts.logits)[0];

    // Seed the reverse pass with the gradient of the predicted-class logit.
    Tensor dlogits(acts.logits.shape());
    dlogits[static_cast<size_t>(target)] = 1.0;
    GradientBundle grads = backward_from(model, batch, acts, dlogits);

    const Tensor& a = acts.outputs.at(tensor_id);
    const Tensor& g = grads.activation_grads.at(tensor_id);

    AttentionMap out;
    out.tensor_id = tensor_id;
    out.probe_id = probe_id;

    if (node.kind == LayerKind::Conv2d) {
        const size_t C = a.dim(1), H = a.dim(2), W = a.dim(3);
        std::vector<double> alpha(C, 0.0);
        for (size_t c = 0; c < C; ++c) {
            double acc = 0.0;
            for (size_t k = 0; k < H * W; ++k) acc += g[c * H * W + k];
            alpha[c] = acc / static_cast<double>(H * W);
        }
        out.map.assign(H * W, 0.0);
        for (size_t k = 0; k < H * W; ++k) {
            double acc = 0.0;
            for (size_t c = 0; c < C; ++c) acc += alpha[c] * a[c * H * W + k];
            out.map[k] = acc > 0.0 ? acc : 0.0;
        }
    } else {
        const size_t O = a.dim(1);
        out.map.assign(O, 0.0);
        for (size_t k = 0; k < O; ++k) out.map[k] = std::fabs(a[k] * g[k]);
    }
    l2_normalize(out.map, out.all_zero);
    return out;
}

double attention_cosine(const AttentionMap& a, const AttentionMap& b) {
    if (a.map.size() != b.map.size())
        throw ValidationError("attention_cosine: map size mismatch for tensor '" + a.tensor_id + "'");
    if (a.map == b.map) return 1.0;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.map.size(); ++i) {
        dot += a.map[i] * b.map[i];
        na += a.map[i] * a.map[i];
        nb += b.map[i] * b.map[i];
    }
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    const double c = dot / std::sqrt(na * nb);
    return std::clamp(c, 0.0, 1.0);
}

}  // namespace teeshield
