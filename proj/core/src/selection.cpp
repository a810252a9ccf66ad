#include "teeshield/selection.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "teeshield/errors.hpp"

namespace teeshield {

using nlohmann::json;

namespace {

// Mean per-epoch loss reduction over the first m epochs.
double early_rate(const MSCurve& c, size_t m) {
    if (c.loss.empty()) return 0.0;
    const size_t span = std::min(m, c.loss.size());
    return (c.initial_loss - c.loss[span - 1]) / static_cast<double>(span);
}

}  // namespace

size_t SelectionResult::selected_param_count(const ModelGraph& g) const {
    size_t n = 0;
    for (const auto& id : selected) n += g.node(id).param_count();
    return n;
}

SelectionResult select_critical_tensors(const CriticalityReport& report,
                                        const AttackSimulator& simulate, double ms_threshold,
                                        const SelectionConfig& cfg) {
    if (report.entries.empty())
        throw ValidationError("select_critical_tensors: empty criticality report");

    const std::vector<std::string> ranking = report.ranking();
    const std::set<std::string> all(ranking.begin(), ranking.end());

    SelectionResult res;
    res.threshold = ms_threshold;

    // Baselines bound the reachable range.
    MSCurve noshield = simulate({}, cfg.baseline_epochs);
    MSCurve allshield = simulate(all, cfg.baseline_epochs);
    res.noshield_accuracy = noshield.final_accuracy;
    res.allshield_accuracy = allshield.final_accuracy;
    res.trail.push_back({"baseline", 0, noshield.initial_loss, early_rate(noshield, cfg.m),
                         noshield.final_accuracy, false});
    res.trail.push_back({"baseline", ranking.size(), allshield.initial_loss,
                         early_rate(allshield, cfg.m), allshield.final_accuracy, false});

    if (ms_threshold >= noshield.final_accuracy) {
        // Nothing to protect.
        res.satisfiable = true;
        res.achieved_ms_accuracy = noshield.final_accuracy;
        res.best_accuracy = noshield.final_accuracy;
        return res;
    }
    if (ms_threshold < allshield.final_accuracy) {
        // The all-shield accuracy is the lower bound of what shielding can do.
        res.satisfiable = false;
        res.best_accuracy = allshield.final_accuracy;
        res.achieved_ms_accuracy = allshield.final_accuracy;
        res.selected = all;
        return res;
    }

    const double loss_floor = (1.0 - cfg.tau) * allshield.initial_loss;
    const double rate_ceiling = (1.0 + cfg.tau) * early_rate(allshield, cfg.m);

    std::set<std::string> confirmed;
    double confirmed_acc = allshield.final_accuracy;
    bool have_confirmed = false;
    double best_acc = noshield.final_accuracy;

    for (size_t k = 1; k <= ranking.size(); ++k) {
        std::set<std::string> prefix(ranking.begin(), ranking.begin() + k);

        // Screening: m-epoch run must look as hard as the all-shield baseline.
        MSCurve screen = simulate(prefix, cfg.m);
        const double rate = early_rate(screen, cfg.m);
        const bool looks_shielded =
            screen.initial_loss >= loss_floor && rate <= rate_ceiling;
        res.trail.push_back({"screen", k, screen.initial_loss, rate, -1.0, looks_shielded});
        if (!looks_shielded && k < ranking.size()) continue;

        // Confirmation at full length.
        MSCurve confirm = simulate(prefix, cfg.confirm_epochs);
        best_acc = std::min(best_acc, confirm.final_accuracy);
        const bool ok = confirm.final_accuracy <= ms_threshold;
        res.trail.push_back({"confirm", k, confirm.initial_loss, early_rate(confirm, cfg.m),
                             confirm.final_accuracy, ok});
        if (ok) {
            confirmed = std::move(prefix);
            confirmed_acc = confirm.final_accuracy;
            have_confirmed = true;
            break;
        }
    }

    if (!have_confirmed) {
        res.satisfiable = false;
        res.best_accuracy = best_acc;
        res.achieved_ms_accuracy = best_acc;
        res.selected = all;
        return res;
    }

    // Refinement: drop the lowest-score member while confirmation holds.
    auto score_of = [&](const std::string& id) {
        for (const auto& e : report.entries)
            if (e.tensor_id == id) return e.score;
        return 0.0;
    };
    while (confirmed.size() > 1) {
        auto lowest = std::min_element(confirmed.begin(), confirmed.end(),
                                       [&](const std::string& a, const std::string& b) {
                                           return score_of(a) < score_of(b);
                                       });
        std::set<std::string> candidate = confirmed;
        candidate.erase(*lowest);
        MSCurve confirm = simulate(candidate, cfg.confirm_epochs);
        const bool ok = confirm.final_accuracy <= ms_threshold;
        res.trail.push_back({"refine", candidate.size(), confirm.initial_loss,
                             early_rate(confirm, cfg.m), confirm.final_accuracy, ok});
        if (!ok) break;
        confirmed = std::move(candidate);
        confirmed_acc = confirm.final_accuracy;
    }

    res.satisfiable = true;
    res.selected = std::move(confirmed);
    res.achieved_ms_accuracy = confirmed_acc;
    res.best_accuracy = std::min(best_acc, confirmed_acc);
    return res;
}

std::string selection_result_to_json_text(const SelectionResult& r) {
    json j;
    j["satisfiable"] = r.satisfiable;
    j["selected"] = std::vector<std::string>(r.selected.begin(), r.selected.end());
    j["achieved_ms_accuracy"] = r.achieved_ms_accuracy;
    j["best_accuracy"] = r.best_accuracy;
    j["noshield_accuracy"] = r.noshield_accuracy;
    j["allshield_accuracy"] = r.allshield_accuracy;
    j["threshold"] = r.threshold;
    j["trail"] = json::array();
    for (const auto& s : r.trail)
        j["trail"].push_back({{"action", s.action},
                              {"k", s.k},
                              {"initial_loss", s.initial_loss},
                              {"rate", s.rate},
                              {"accuracy", s.accuracy},
                              {"accepted", s.accepted}});
    return j.dump(2) + "\n";
}

SelectionResult selection_result_from_json_text(const std::string& text,
                                                const std::string& origin) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ValidationError("selection result '" + origin + "' is not valid JSON");
    try {
        SelectionResult r;
        r.satisfiable = j.at("satisfiable").get<bool>();
        for (const auto& id : j.at("selected")) r.selected.insert(id.get<std::string>());
        r.achieved_ms_accuracy = j.at("achieved_ms_accuracy").get<double>();
        r.best_accuracy = j.at("best_accuracy").get<double>();
        r.noshield_accuracy = j.at("noshield_accuracy").get<double>();
        r.allshield_accuracy = j.at("allshield_accuracy").get<double>();
        r.threshold = j.at("threshold").get<double>();
        for (const auto& s : j.at("trail")) {
            SelectionStep step;
            step.action = s.at("action").get<std::string>();
            step.k = s.at("k").get<size_t>();
            step.initial_loss = s.at("initial_loss").get<double>();
            step.rate = s.at("rate").get<double>();
            step.accuracy = s.at("accuracy").get<double>();
            step.accepted = s.at("accepted").get<bool>();
            r.trail.push_back(std::move(step));
        }
        return r;
    } catch (const json::exception& e) {
        throw ValidationError("selection result '" + origin + "': " + e.what());
    }
}

}  // namespace teeshield
