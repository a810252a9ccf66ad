#include "teeshield/optimizer.hpp"

#include <cmath>
#include <numeric>

#include "teeshield/errors.hpp"
#include "teeshield/rng.hpp"

namespace teeshield {

ParamMap SgdOptimizer::step(ModelGraph& graph, const GradientBundle& grads) {
    ParamMap deltas;
    for (auto& node : graph.nodes) {
        if (!node.linear()) continue;
        auto git = grads.param_grads.find(node.id);
        if (git == grads.param_grads.end())
            throw ValidationError("gradients missing for node '" + node.id + "'");
        for (auto& [pname, w] : node.params) {
            const Tensor& g = git->second.at(pname);
            if (!g.same_shape(w))
                throw ValidationError("gradient shape mismatch for '" + node.id + "." + pname + "'");
            Tensor& v = velocity_[node.id]
                            .try_emplace(pname, Tensor(w.shape()))
                            .first->second;
            Tensor before = w;
            for (size_t i = 0; i < w.numel(); ++i) {
                const double geff = g[i] + cfg_.weight_decay * w[i];
                v[i] = cfg_.momentum * v[i] + geff;
                w[i] -= cfg_.lr * v[i];
            }
            Tensor d(w.shape());
            for (size_t i = 0; i < w.numel(); ++i) d[i] = w[i] - before[i];
            deltas[node.id][pname] = std::move(d);
        }
    }
    return deltas;
}

bool ReplayLog::has_tensor(const std::string& node_id) const {
    for (const auto& e : epochs)
        if (!e.grads.count(node_id)) return false;
    return !epochs.empty();
}

namespace {

void accumulate(ParamMap& acc, const ParamMap& inc, double scale) {
    for (const auto& [nid, params] : inc)
        for (const auto& [pname, t] : params) {
            auto& slot = acc[nid].try_emplace(pname, Tensor(t.shape())).first->second;
            axpy(scale, t, slot);
        }
}

ParamMap snapshot_params(const ModelGraph& g) {
    ParamMap out;
    for (const auto& n : g.nodes)
        if (n.linear()) out[n.id] = n.params;
    return out;
}

}  // namespace

TrainResult train(ModelGraph& graph, const std::vector<Sample>& data, const TrainConfig& cfg) {
    if (data.empty()) throw ValidationError("train: empty dataset");
    TrainResult result;
    result.replay.structure_hash = graph.structure_hash();

    SgdOptimizer opt(cfg.sgd);
    Rng shuffle_rng(cfg.seed, "train/shuffle");
    std::vector<size_t> order(data.size());
    std::iota(order.begin(), order.end(), size_t{0});

    const size_t bs = cfg.batch_size == 0 ? data.size() : std::min(cfg.batch_size, data.size());

    for (size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        if (cfg.lr_decay_every > 0 && epoch > 0 && epoch % cfg.lr_decay_every == 0)
            opt.set_lr(opt.lr() * cfg.lr_decay_factor);

        shuffle_rng.shuffle(order);

        ParamMap epoch_start;
        ParamMap grad_sum;
        size_t steps = 0;
        if (cfg.record_replay) epoch_start = snapshot_params(graph);

        double loss_sum = 0.0;
        size_t seen = 0;
        for (size_t off = 0; off < data.size(); off += bs) {
            const size_t count = std::min(bs, data.size() - off);
            std::vector<size_t> bshape{count};
            bshape.insert(bshape.end(), data[0].x.shape().begin(), data[0].x.shape().end());
            Tensor batch(std::move(bshape));
            std::vector<int> labels(count);
            const size_t sample_len = data[0].x.numel();
            for (size_t k = 0; k < count; ++k) {
                const Sample& s = data[order[off + k]];
                std::copy(s.x.data(), s.x.data() + sample_len, batch.data() + k * sample_len);
                labels[k] = s.y;
            }
            BackwardResult br = backward(graph, batch, labels);
            if (!std::isfinite(br.loss))
                throw NumericError("training loss diverged", static_cast<long>(epoch));
            loss_sum += br.loss * static_cast<double>(count);
            seen += count;
            if (cfg.record_replay) {
                accumulate(grad_sum, br.grads.param_grads, 1.0);
                ++steps;
            }
            opt.step(graph, br.grads);
        }
        result.loss_per_epoch.push_back(loss_sum / static_cast<double>(seen));

        if (cfg.record_replay) {
            ReplayEpoch entry;
            // Mean gradient across the epoch's steps; net delta over the epoch.
            for (auto& [nid, params] : grad_sum)
                for (auto& [pname, t] : params) {
                    Tensor mean(t.shape());
                    for (size_t i = 0; i < t.numel(); ++i)
                        mean[i] = t[i] / static_cast<double>(steps);
                    entry.grads[nid][pname] = std::move(mean);
                }
            ParamMap now = snapshot_params(graph);
            for (auto& [nid, params] : now)
                for (auto& [pname, t] : params) {
                    Tensor d(t.shape());
                    const Tensor& w0 = epoch_start.at(nid).at(pname);
                    for (size_t i = 0; i < t.numel(); ++i) d[i] = t[i] - w0[i];
                    entry.deltas[nid][pname] = std::move(d);
                }
            result.replay.epochs.push_back(std::move(entry));
        }
    }
    return result;
}

}  // namespace teeshield
