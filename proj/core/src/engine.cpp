#include "teeshield/engine.hpp"

#include <algorithm>
#include <cmath>

#include "teeshield/errors.hpp"

namespace teeshield {

namespace {

#ifdef NDEBUG
constexpr bool kDebugChecks = false;
#else
constexpr bool kDebugChecks = true;
#endif

std::vector<size_t> batched(const std::vector<size_t>& per_sample, size_t b) {
    std::vector<size_t> s{b};
    s.insert(s.end(), per_sample.begin(), per_sample.end());
    return s;
}

// ---------------------------------------------------------------------------
// Per-kind forward kernels. All loops are plain and sequential; determinism
// comes from the fixed iteration order.
// ---------------------------------------------------------------------------

Tensor conv2d_forward(const LayerNode& n, const Tensor& x) {
    const auto& h = n.conv;
    const size_t B = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
    const size_t OH = (H + 2 * h.padding - h.kernel) / h.stride + 1;
    const size_t OW = (W + 2 * h.padding - h.kernel) / h.stride + 1;
    const Tensor& wt = n.params.at("weight");
    const Tensor& bias = n.params.at("bias");
    Tensor y({B, h.out_channels, OH, OW});
    const long pad = static_cast<long>(h.padding);
    for (size_t b = 0; b < B; ++b) {
        for (size_t o = 0; o < h.out_channels; ++o) {
            for (size_t i = 0; i < OH; ++i) {
                for (size_t j = 0; j < OW; ++j) {
                    double acc = bias[o];
                    for (size_t c = 0; c < C; ++c) {
                        for (size_t u = 0; u < h.kernel; ++u) {
                            const long ii = static_cast<long>(i * h.stride + u) - pad;
                            if (ii < 0 || ii >= static_cast<long>(H)) continue;
                            const double* xrow = x.data() + ((b * C + c) * H + ii) * W;
                            const double* wrow = wt.data() + ((o * C + c) * h.kernel + u) * h.kernel;
                            for (size_t v = 0; v < h.kernel; ++v) {
                                const long jj = static_cast<long>(j * h.stride + v) - pad;
                                if (jj < 0 || jj >= static_cast<long>(W)) continue;
                                acc += wrow[v] * xrow[jj];
                            }
                        }
                    }
                    y[((b * h.out_channels + o) * OH + i) * OW + j] = acc;
                }
            }
        }
    }
    return y;
}

Tensor dense_forward(const LayerNode& n, const Tensor& x) {
    const size_t B = x.dim(0), F = x.dim(1), O = n.dense.out_features;
    const Tensor& wt = n.params.at("weight");
    const Tensor& bias = n.params.at("bias");
    Tensor y({B, O});
    for (size_t b = 0; b < B; ++b) {
        const double* xr = x.data() + b * F;
        for (size_t o = 0; o < O; ++o) {
            const double* wr = wt.data() + o * F;
            double acc = bias[o];
            for (size_t f = 0; f < F; ++f) acc += wr[f] * xr[f];
            y[b * O + o] = acc;
        }
    }
    return y;
}

Tensor relu_forward(const Tensor& x) {
    Tensor y = x;
    for (size_t i = 0; i < y.numel(); ++i) y[i] = y[i] > 0.0 ? y[i] : 0.0;
    return y;
}

Tensor maxpool_forward(const Tensor& x) {
    const size_t B = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
    Tensor y({B, C, H / 2, W / 2});
    size_t idx = 0;
    for (size_t b = 0; b < B; ++b)
        for (size_t c = 0; c < C; ++c) {
            const double* plane = x.data() + (b * C + c) * H * W;
            for (size_t i = 0; i < H / 2; ++i)
                for (size_t j = 0; j < W / 2; ++j) {
                    // First maximum in scan order wins on ties.
                    double m = plane[(2 * i) * W + 2 * j];
                    m = std::max(m, plane[(2 * i) * W + 2 * j + 1]);
                    m = std::max(m, plane[(2 * i + 1) * W + 2 * j]);
                    m = std::max(m, plane[(2 * i + 1) * W + 2 * j + 1]);
                    y[idx++] = m;
                }
        }
    return y;
}

Tensor gap_forward(const Tensor& x) {
    const size_t B = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
    Tensor y({B, C});
    for (size_t b = 0; b < B; ++b)
        for (size_t c = 0; c < C; ++c) {
            const double* plane = x.data() + (b * C + c) * H * W;
            double acc = 0.0;
            for (size_t k = 0; k < H * W; ++k) acc += plane[k];
            y[b * C + c] = acc / static_cast<double>(H * W);
        }
    return y;
}

Tensor node_forward(const LayerNode& n, const Tensor& x) {
    switch (n.kind) {
        case LayerKind::Conv2d: return conv2d_forward(n, x);
        case LayerKind::Dense: return dense_forward(n, x);
        case LayerKind::Relu: return relu_forward(x);
        case LayerKind::MaxPool2x2: return maxpool_forward(x);
        case LayerKind::GlobalAvgPool: return gap_forward(x);
        case LayerKind::Flatten: {
            std::vector<size_t> s{x.dim(0), x.numel() / x.dim(0)};
            return x.reshaped(std::move(s));
        }
    }
    throw ValidationError("unhandled kind in forward");
}

// ---------------------------------------------------------------------------
// Per-kind backward kernels: given dL/dy and the forward input x, produce
// dL/dx (returned) and parameter gradients (written into `grads`).
// ---------------------------------------------------------------------------

Tensor conv2d_backward(const LayerNode& n, const Tensor& x, const Tensor& dy,
                       std::map<std::string, Tensor>& grads) {
    const auto& h = n.conv;
    const size_t B = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
    const size_t OH = dy.dim(2), OW = dy.dim(3);
    const Tensor& wt = n.params.at("weight");
    Tensor dw(wt.shape());
    Tensor db({h.out_channels});
    Tensor dx(x.shape());
    const long pad = static_cast<long>(h.padding);
    for (size_t b = 0; b < B; ++b) {
        for (size_t o = 0; o < h.out_channels; ++o) {
            for (size_t i = 0; i < OH; ++i) {
                for (size_t j = 0; j < OW; ++j) {
                    const double g = dy[((b * h.out_channels + o) * OH + i) * OW + j];
                    if (g == 0.0) continue;
                    db[o] += g;
                    for (size_t c = 0; c < C; ++c) {
                        for (size_t u = 0; u < h.kernel; ++u) {
                            const long ii = static_cast<long>(i * h.stride + u) - pad;
                            if (ii < 0 || ii >= static_cast<long>(H)) continue;
                            const double* xrow = x.data() + ((b * C + c) * H + ii) * W;
                            double* dxrow = dx.data() + ((b * C + c) * H + ii) * W;
                            const double* wrow = wt.data() + ((o * C + c) * h.kernel + u) * h.kernel;
                            double* dwrow = dw.data() + ((o * C + c) * h.kernel + u) * h.kernel;
                            for (size_t v = 0; v < h.kernel; ++v) {
                                const long jj = static_cast<long>(j * h.stride + v) - pad;
                                if (jj < 0 || jj >= static_cast<long>(W)) continue;
                                dwrow[v] += g * xrow[jj];
                                dxrow[jj] += g * wrow[v];
                            }
                        }
                    }
                }
            }
        }
    }
    grads["weight"] = std::move(dw);
    grads["bias"] = std::move(db);
    return dx;
}

Tensor dense_backward(const LayerNode& n, const Tensor& x, const Tensor& dy,
                      std::map<std::string, Tensor>& grads) {
    const size_t B = x.dim(0), F = x.dim(1), O = n.dense.out_features;
    const Tensor& wt = n.params.at("weight");
    Tensor dw({O, F});
    Tensor db({O});
    Tensor dx({B, F});
    for (size_t b = 0; b < B; ++b) {
        const double* xr = x.data() + b * F;
        double* dxr = dx.data() + b * F;
        for (size_t o = 0; o < O; ++o) {
            const double g = dy[b * O + o];
            if (g == 0.0) continue;
            db[o] += g;
            const double* wr = wt.data() + o * F;
            double* dwr = dw.data() + o * F;
            for (size_t f = 0; f < F; ++f) {
                dwr[f] += g * xr[f];
                dxr[f] += g * wr[f];
            }
        }
    }
    grads["weight"] = std::move(dw);
    grads["bias"] = std::move(db);
    return dx;
}

Tensor relu_backward(const Tensor& x, const Tensor& dy) {
    Tensor dx(x.shape());
    for (size_t i = 0; i < x.numel(); ++i) dx[i] = x[i] > 0.0 ? dy[i] : 0.0;
    return dx;
}

Tensor maxpool_backward(const Tensor& x, const Tensor& dy) {
    const size_t B = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
    Tensor dx(x.shape());
    size_t idx = 0;
    for (size_t b = 0; b < B; ++b)
        for (size_t c = 0; c < C; ++c) {
            const double* plane = x.data() + (b * C + c) * H * W;
            double* dplane = dx.data() + (b * C + c) * H * W;
            for (size_t i = 0; i < H / 2; ++i)
                for (size_t j = 0; j < W / 2; ++j) {
                    const size_t cand[4] = {(2 * i) * W + 2 * j, (2 * i) * W + 2 * j + 1,
                                            (2 * i + 1) * W + 2 * j, (2 * i + 1) * W + 2 * j + 1};
                    size_t best = cand[0];
                    for (int k = 1; k < 4; ++k)
                        if (plane[cand[k]] > plane[best]) best = cand[k];
                    dplane[best] += dy[idx++];
                }
        }
    return dx;
}

Tensor gap_backward(const Tensor& x, const Tensor& dy) {
    const size_t B = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
    Tensor dx(x.shape());
    for (size_t b = 0; b < B; ++b)
        for (size_t c = 0; c < C; ++c) {
            const double g = dy[b * C + c] / static_cast<double>(H * W);
            double* dplane = dx.data() + (b * C + c) * H * W;
            for (size_t k = 0; k < H * W; ++k) dplane[k] += g;
        }
    return dx;
}

}  // namespace

Activations forward(const ModelGraph& graph, const Tensor& batch) {
    if (batch.rank() != graph.input_shape.size() + 1 || batch.dim(0) == 0)
        throw ValidationError("batch must be [B]+" + shape_str(graph.input_shape) +
                              ", got " + shape_str(batch.shape()));
    std::vector<size_t> per_sample(batch.shape().begin() + 1, batch.shape().end());
    if (per_sample != graph.input_shape)
        throw ValidationError("batch sample shape " + shape_str(per_sample) +
                              " != graph input shape " + shape_str(graph.input_shape));

    Activations acts;
    const Tensor* cur = &batch;
    for (const auto& n : graph.nodes) {
        // Shape-check against the declared rule before running the kernel.
        std::vector<size_t> in_shape(cur->shape().begin() + 1, cur->shape().end());
        const auto out_shape = node_output_shape(n, in_shape);
        Tensor y = node_forward(n, *cur);
        if (std::vector<size_t>(y.shape().begin() + 1, y.shape().end()) != out_shape)
            throw ValidationError("node '" + n.id + "' produced unexpected shape");
        if (kDebugChecks) y.check_finite(n.id.c_str());
        auto [it, ok] = acts.outputs.emplace(n.id, std::move(y));
        cur = &it->second;
    }
    acts.logits = *cur;
    return acts;
}

Tensor softmax(const Tensor& logits) {
    const size_t B = logits.dim(0), K = logits.dim(1);
    Tensor p(logits.shape());
    for (size_t b = 0; b < B; ++b) {
        const double* row = logits.data() + b * K;
        double m = row[0];
        for (size_t k = 1; k < K; ++k) m = std::max(m, row[k]);
        double z = 0.0;
        for (size_t k = 0; k < K; ++k) z += std::exp(row[k] - m);
        for (size_t k = 0; k < K; ++k) p[b * K + k] = std::exp(row[k] - m) / z;
    }
    return p;
}

LossGrad softmax_cross_entropy(const Tensor& logits, const std::vector<int>& labels) {
    const size_t B = logits.dim(0), K = logits.dim(1);
    if (labels.size() != B) throw ValidationError("labels/batch size mismatch");
    LossGrad out;
    out.dlogits = Tensor(logits.shape());
    double total = 0.0;
    for (size_t b = 0; b < B; ++b) {
        const int y = labels[b];
        if (y < 0 || static_cast<size_t>(y) >= K)
            throw ValidationError("label " + std::to_string(y) + " out of range [0," +
                                  std::to_string(K) + ")");
        const double* row = logits.data() + b * K;
        double m = row[0];
        for (size_t k = 1; k < K; ++k) m = std::max(m, row[k]);
        double z = 0.0;
        for (size_t k = 0; k < K; ++k) z += std::exp(row[k] - m);
        total += std::log(z) - (row[y] - m);
        for (size_t k = 0; k < K; ++k) {
            const double p = std::exp(row[k] - m) / z;
            out.dlogits[b * K + k] = (p - (static_cast<size_t>(y) == k ? 1.0 : 0.0)) /
                                     static_cast<double>(B);
        }
    }
    out.loss = total / static_cast<double>(B);
    return out;
}

GradientBundle backward_from(const ModelGraph& graph, const Tensor& batch,
                             const Activations& acts, const Tensor& dlogits) {
    GradientBundle g;
    Tensor dy = dlogits;
    for (size_t i = graph.nodes.size(); i-- > 0;) {
        const LayerNode& n = graph.nodes[i];
        const Tensor& x = (i == 0) ? batch : acts.outputs.at(graph.nodes[i - 1].id);
        g.activation_grads[n.id] = dy;
        Tensor dx;
        switch (n.kind) {
            case LayerKind::Conv2d: dx = conv2d_backward(n, x, dy, g.param_grads[n.id]); break;
            case LayerKind::Dense: dx = dense_backward(n, x, dy, g.param_grads[n.id]); break;
            case LayerKind::Relu: dx = relu_backward(x, dy); break;
            case LayerKind::MaxPool2x2: dx = maxpool_backward(x, dy); break;
            case LayerKind::GlobalAvgPool: dx = gap_backward(x, dy); break;
            case LayerKind::Flatten: dx = dy.reshaped(x.shape()); break;
        }
        if (kDebugChecks) dx.check_finite(n.id.c_str());
        dy = std::move(dx);
    }
    g.input_grad = std::move(dy);
    return g;
}

BackwardResult backward(const ModelGraph& graph, const Tensor& batch,
                        const std::vector<int>& labels) {
    BackwardResult r;
    r.acts = forward(graph, batch);
    LossGrad lg = softmax_cross_entropy(r.acts.logits, labels);
    r.loss = lg.loss;
    r.grads = backward_from(graph, batch, r.acts, lg.dlogits);
    return r;
}

std::vector<int> argmax_rows(const Tensor& logits) {
    const size_t B = logits.dim(0), K = logits.dim(1);
    std::vector<int> out(B);
    for (size_t b = 0; b < B; ++b) {
        const double* row = logits.data() + b * K;
        size_t best = 0;
        for (size_t k = 1; k < K; ++k)
            if (row[k] > row[best]) best = k;
        out[b] = static_cast<int>(best);
    }
    return out;
}

}  // namespace teeshield
