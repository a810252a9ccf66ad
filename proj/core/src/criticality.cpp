#include "teeshield/criticality.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "teeshield/engine.hpp"
#include "teeshield/errors.hpp"
#include "teeshield/gradcam.hpp"
#include "teeshield/rng.hpp"

namespace teeshield {

using nlohmann::json;

std::vector<std::string> CriticalityReport::ranking() const {
    std::vector<std::string> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.tensor_id);
    return out;
}

double intrinsic_importance(const ReplayLog& replay, const std::string& tensor_id) {
    if (replay.epochs.empty())
        throw ValidationError("intrinsic_importance: empty replay log");
    double total = 0.0;
    for (size_t e = 0; e < replay.epochs.size(); ++e) {
        const auto& epoch = replay.epochs[e];
        auto git = epoch.grads.find(tensor_id);
        auto dit = epoch.deltas.find(tensor_id);
        if (git == epoch.grads.end() || dit == epoch.deltas.end())
            throw ValidationError("replay log has no tensor '" + tensor_id + "' at epoch " +
                                  std::to_string(e));
        double acc = 0.0;
        size_t n = 0;
        for (const auto& [pname, g] : git->second) {
            const Tensor& d = dit->second.at(pname);
            acc += dot(g, d);
            n += g.numel();
        }
        if (n == 0) throw ValidationError("replay entry for '" + tensor_id + "' has no parameters");
        // g*dw is negative when the update reduced the loss; keep the
        // non-negative loss-reduction contribution.
        const double contrib = -acc / static_cast<double>(n);
        if (contrib > 0.0) total += contrib;
    }
    return total;
}

double attention_transition(const ModelGraph& victim, const ModelGraph& pub,
                            const std::string& tensor_id, const std::vector<Sample>& probes) {
    if (probes.empty()) throw ValidationError("attention_transition: need at least one probe");
    double acc = 0.0;
    for (size_t i = 0; i < probes.size(); ++i) {
        const std::string pid = "probe" + std::to_string(i);
        AttentionMap mv = grad_cam(victim, tensor_id, probes[i], pid);
        AttentionMap mp = grad_cam(pub, tensor_id, probes[i], pid);
        double t;
        if (mv.all_zero && mp.all_zero) {
            t = 0.0;
        } else if (mv.all_zero || mp.all_zero) {
            t = 1.0;
        } else {
            t = 1.0 - attention_cosine(mv, mp);
        }
        acc += t;
    }
    return acc / static_cast<double>(probes.size());
}

namespace {

std::vector<Sample> pick_probes(const std::vector<Sample>& pool, size_t count, uint64_t seed) {
    if (pool.empty()) throw ValidationError("criticality: empty probe pool");
    const size_t n = std::min(count, pool.size());
    std::vector<size_t> idx(pool.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Rng rng(seed, "criticality/probes");
    rng.shuffle(idx);
    std::vector<Sample> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) out.push_back(pool[idx[i]]);
    return out;
}

// One-shot attribution: delta = victim - public, gradient from one probe
// batch evaluated at the victim.
ReplayLog one_shot_replay(const ModelGraph& structure, const Checkpoint& victim,
                          const Checkpoint& pub, const std::vector<Sample>& probes) {
    ModelGraph vic = with_checkpoint(structure, victim);
    Tensor batch = make_batch(probes, 0, probes.size());
    std::vector<int> labels = batch_labels(probes, 0, probes.size());
    BackwardResult br = backward(vic, batch, labels);

    ReplayLog log;
    log.structure_hash = structure.structure_hash();
    ReplayEpoch epoch;
    for (const auto& [nid, params] : victim.params) {
        for (const auto& [pname, wv] : params) {
            const Tensor& wp = pub.params.at(nid).at(pname);
            Tensor d(wv.shape());
            for (size_t i = 0; i < d.numel(); ++i) d[i] = wv[i] - wp[i];
            epoch.deltas[nid][pname] = std::move(d);
            epoch.grads[nid][pname] = br.grads.param_grads.at(nid).at(pname);
        }
    }
    log.epochs.push_back(std::move(epoch));
    return log;
}

}  // namespace

CriticalityReport criticality_scores(const ModelGraph& structure, const Checkpoint& victim,
                                     const Checkpoint& pub, const ReplayLog& replay,
                                     const std::vector<Sample>& probe_pool,
                                     const CriticalityConfig& cfg) {
    if (victim.structure_hash != structure.structure_hash() ||
        pub.structure_hash != structure.structure_hash())
        throw ValidationError("criticality_scores: checkpoint/graph structure mismatch");
    if (!cfg.one_shot && replay.structure_hash != structure.structure_hash())
        throw ValidationError("criticality_scores: replay/graph structure mismatch");

    std::vector<Sample> probes = pick_probes(probe_pool, cfg.probe_count, cfg.probe_seed);

    ModelGraph vic = with_checkpoint(structure, victim);
    ModelGraph pb = with_checkpoint(structure, pub);

    const ReplayLog* log = &replay;
    ReplayLog oneshot;
    if (cfg.one_shot) {
        oneshot = one_shot_replay(structure, victim, pub, probes);
        log = &oneshot;
    }

    CriticalityReport report;
    report.replay_epochs = log->epochs.size();
    report.probe_count = probes.size();
    report.probe_seed = cfg.probe_seed;
    report.one_shot = cfg.one_shot;

    for (const auto& id : structure.linear_ids()) {
        TensorCriticality tc;
        tc.tensor_id = id;
        tc.intrinsic = intrinsic_importance(*log, id);
        tc.transition = attention_transition(vic, pb, id, probes);
        tc.score = tc.intrinsic * tc.transition;
        tc.param_count = structure.node(id).param_count();
        report.entries.push_back(std::move(tc));
    }
    // Descending score; stable keeps node order on ties.
    std::stable_sort(report.entries.begin(), report.entries.end(),
                     [](const TensorCriticality& a, const TensorCriticality& b) {
                         return a.score > b.score;
                     });
    return report;
}

std::string criticality_report_to_json_text(const CriticalityReport& report) {
    json j;
    j["replay_epochs"] = report.replay_epochs;
    j["probe_count"] = report.probe_count;
    j["probe_seed"] = report.probe_seed;
    j["one_shot"] = report.one_shot;
    j["entries"] = json::array();
    for (const auto& e : report.entries) {
        j["entries"].push_back({{"tensor_id", e.tensor_id},
                                {"intrinsic", e.intrinsic},
                                {"transition", e.transition},
                                {"score", e.score},
                                {"param_count", e.param_count}});
    }
    return j.dump(2) + "\n";
}

CriticalityReport criticality_report_from_json_text(const std::string& text,
                                                    const std::string& origin) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw ValidationError("criticality report '" + origin + "' is not valid JSON");
    try {
        CriticalityReport r;
        r.replay_epochs = j.at("replay_epochs").get<size_t>();
        r.probe_count = j.at("probe_count").get<size_t>();
        r.probe_seed = j.at("probe_seed").get<uint64_t>();
        r.one_shot = j.at("one_shot").get<bool>();
        for (const auto& e : j.at("entries")) {
            TensorCriticality tc;
            tc.tensor_id = e.at("tensor_id").get<std::string>();
            tc.intrinsic = e.at("intrinsic").get<double>();
            tc.transition = e.at("transition").get<double>();
            tc.score = e.at("score").get<double>();
            tc.param_count = e.at("param_count").get<size_t>();
            r.entries.push_back(std::move(tc));
        }
        return r;
    } catch (const json::exception& e) {
        throw ValidationError("criticality report '" + origin + "': " + e.what());
    }
}

void save_criticality_report(const CriticalityReport& report, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot open '" + path + "' for writing");
    os << criticality_report_to_json_text(report);
}

CriticalityReport load_criticality_report(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open criticality report '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return criticality_report_from_json_text(ss.str(), path);
}

}  // namespace teeshield
