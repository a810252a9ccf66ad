#include "teeshield/placement.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "teeshield/errors.hpp"

namespace teeshield {

using nlohmann::json;

const char* option_name(PlacementOption o) {
    switch (o) {
        case PlacementOption::ReeCpu: return "REE_CPU";
        case PlacementOption::ReeGpu: return "REE_GPU";
        case PlacementOption::ReeCpuObf: return "REE_CPU_OBF";
        case PlacementOption::ReeGpuObf: return "REE_GPU_OBF";
        case PlacementOption::TeeCpu: return "TEE_CPU";
    }
    return "?";
}

PlacementOption option_from_name(const std::string& s) {
    if (s == "REE_CPU") return PlacementOption::ReeCpu;
    if (s == "REE_GPU") return PlacementOption::ReeGpu;
    if (s == "REE_CPU_OBF") return PlacementOption::ReeCpuObf;
    if (s == "REE_GPU_OBF") return PlacementOption::ReeGpuObf;
    if (s == "TEE_CPU") return PlacementOption::TeeCpu;
    throw ValidationError("unknown placement option '" + s + "'");
}

World option_world(PlacementOption o) {
    return o == PlacementOption::TeeCpu ? World::Tee : World::Ree;
}

bool option_obfuscated(PlacementOption o) {
    return o == PlacementOption::ReeCpuObf || o == PlacementOption::ReeGpuObf;
}

const char* world_name(World w) { return w == World::Tee ? "TEE" : "REE"; }

const char* category_name(EventCategory c) {
    switch (c) {
        case EventCategory::Cal: return "cal";
        case EventCategory::Comm: return "comm";
        case EventCategory::Mask: return "mask";
        case EventCategory::Deobf: return "deobf";
        case EventCategory::Switch: return "switch";
    }
    return "?";
}

double option_cost(const std::string& tensor_id, PlacementOption option,
                   const HardwareProfile& profile, bool feature_is_masked, bool is_critical) {
    const TensorCost& c = profile.at(tensor_id);
    const bool critical_option = option_obfuscated(option) || option == PlacementOption::TeeCpu;
    if (is_critical != critical_option)
        throw ValidationError(std::string("option ") + option_name(option) + " is illegal for " +
                              (is_critical ? "critical" : "non-critical") + " tensor '" + tensor_id + "'");
    switch (option) {
        case PlacementOption::ReeCpu: return c.t_ree_cpu;
        case PlacementOption::ReeGpu: return c.t_ree_gpu;
        case PlacementOption::ReeCpuObf:
            return c.t_ree_cpu + c.t_deobf + (feature_is_masked ? c.t_mask : 0.0);
        case PlacementOption::ReeGpuObf:
            return c.t_ree_gpu + c.t_deobf + (feature_is_masked ? c.t_mask : 0.0);
        case PlacementOption::TeeCpu: return c.t_tee_cpu;
    }
    throw ValidationError("unhandled option");
}

std::vector<PlacementOption> legal_options(const std::string& tensor_id, bool is_critical,
                                           const HardwareProfile& profile) {
    if (!is_critical) return {PlacementOption::ReeCpu, PlacementOption::ReeGpu};
    std::vector<PlacementOption> out{PlacementOption::ReeCpuObf, PlacementOption::ReeGpuObf};
    if (profile.fits_tee(tensor_id)) out.push_back(PlacementOption::TeeCpu);
    // Ascending option index is the tie-break order.
    std::sort(out.begin(), out.end(),
              [](PlacementOption a, PlacementOption b) { return static_cast<int>(a) < static_cast<int>(b); });
    return out;
}

namespace {

using OptionResolver = std::function<PlacementOption(const std::string&)>;

struct ChainIndex {
    std::vector<int> prev_linear;       // nearest linear strictly before i, -1 if none
    std::vector<int> next_at_or_after;  // nearest linear at or after i, -1 if none

    explicit ChainIndex(const ModelGraph& g) {
        const size_t n = g.nodes.size();
        prev_linear.assign(n, -1);
        next_at_or_after.assign(n, -1);
        int last = -1;
        for (size_t i = 0; i < n; ++i) {
            prev_linear[i] = last;
            if (g.nodes[i].linear()) last = static_cast<int>(i);
        }
        int next = -1;
        for (size_t i = n; i-- > 0;) {
            if (g.nodes[i].linear()) next = static_cast<int>(i);
            next_at_or_after[i] = next;
        }
    }
};

double base_time(const TensorCost& c, PlacementOption o) {
    switch (o) {
        case PlacementOption::ReeCpu:
        case PlacementOption::ReeCpuObf: return c.t_ree_cpu;
        case PlacementOption::ReeGpu:
        case PlacementOption::ReeGpuObf: return c.t_ree_gpu;
        case PlacementOption::TeeCpu: return c.t_tee_cpu;
    }
    return 0.0;
}

// Sequential derivation of the execution schedule. One instance walks a
// node range with explicit state, so the exact solver can price segments
// with the very same rules that produce the full schedule.
class ScheduleWalker {
public:
    struct State {
        World cur = World::Ree;
        bool started = false;
        bool pending_pad = false;
        bool pending_deobf = false;
        std::string deobf_tensor;
    };

    ScheduleWalker(const ModelGraph& g, const ChainIndex& idx, const OptionResolver& opt,
                   const std::set<std::string>& masked, const HardwareProfile& profile)
        : g_(g), idx_(idx), opt_(opt), masked_(masked), profile_(profile) {}

    void set_state(State s) { st_ = std::move(s); }
    const State& state() const { return st_; }

    void process(size_t i) {
        const LayerNode& n = g_.nodes[i];
        World target;
        double cal_sec = 0.0;
        if (n.linear()) {
            const PlacementOption o = opt_(n.id);
            target = option_world(o);
            cal_sec = base_time(profile_.at(n.id), o);
            // An R-mixed value cannot feed another REE tensor; route it
            // through the TEE for deobfuscation first.
            if (st_.pending_deobf && target == World::Ree) tee_service(n.id, i);
            // An OBF tensor with a masked input transmission always receives
            // its input from the TEE, so the pad is applied (and priced).
            const std::string owner = owner_before(i);
            if (option_obfuscated(o) && !owner.empty() && masked_.count(owner) &&
                st_.started && st_.cur == World::Ree) {
                tee_service(n.id, i);
            }
        } else {
            target = nonlinear_world(i);
        }
        cross_to(target, i);
        if (!n.linear() && (st_.pending_pad || st_.pending_deobf))
            throw Error("schedule derivation bug: non-linear unit '" + n.id +
                        "' reached with a pending pad or R-mix");
        emit(EventCategory::Cal, n.id, target, cal_sec);
        sch_.worlds[n.id] = target;
        if (n.linear() && option_obfuscated(opt_(n.id))) {
            st_.pending_deobf = true;
            st_.deobf_tensor = n.id;
        }
    }

    // Trailing TEE visit when the final value still carries an R-mix or pad.
    void flush() {
        if (st_.pending_deobf || st_.pending_pad) {
            for (size_t i = g_.nodes.size(); i-- > 0;) {
                if (g_.nodes[i].linear()) {
                    sch_.boundary_features.insert(g_.nodes[i].id);
                    break;
                }
            }
            tee_service("output", g_.nodes.size());
        }
    }

    Schedule take(size_t node_count) {
        sch_.executed_units = node_count + service_visits_;
        return std::move(sch_);
    }

    double seconds() const { return sch_.total_seconds; }

private:
    std::string owner_before(size_t i) const {
        const int p = i < idx_.prev_linear.size() ? idx_.prev_linear[i] : -1;
        return p < 0 ? std::string{} : g_.nodes[p].id;
    }

    const LayerNode* consumer_at_or_after(size_t i) const {
        if (i >= idx_.next_at_or_after.size()) return nullptr;
        const int c = idx_.next_at_or_after[i];
        return c < 0 ? nullptr : &g_.nodes[c];
    }

    World nonlinear_world(size_t i) {
        const int p = idx_.prev_linear[i];
        if (p < 0) return World::Ree;
        const PlacementOption po = opt_(g_.nodes[p].id);
        if (option_obfuscated(po) || po == PlacementOption::TeeCpu) return World::Tee;
        if (st_.pending_pad) return World::Tee;  // pad correction point
        const int c = idx_.next_at_or_after[i];  // i is non-linear: strictly after
        if (c >= 0) {
            const PlacementOption co = opt_(g_.nodes[c].id);
            if (option_obfuscated(co) && masked_.count(g_.nodes[p].id)) return World::Tee;
        }
        return World::Ree;
    }

    void emit(EventCategory cat, std::string unit, World w, double sec, std::string feat = {}) {
        sch_.total_seconds += sec;
        sch_.steps.push_back({cat, std::move(unit), w, sec, std::move(feat)});
    }

    // Switch to TEE outside a unit boundary: deobfuscate and absorb any
    // pending pad (the unmask is priced inside the original mask step).
    void tee_service(const std::string& toward, size_t node_idx) {
        emit(EventCategory::Switch, toward, World::Tee, profile_.t_switch);
        ++service_visits_;
        if (node_idx < g_.nodes.size()) {
            const std::string owner = owner_before(node_idx);
            if (!owner.empty()) sch_.boundary_features.insert(owner);
        }
        if (st_.pending_deobf) {
            emit(EventCategory::Deobf, st_.deobf_tensor, World::Tee,
                 profile_.at(st_.deobf_tensor).t_deobf);
            st_.pending_deobf = false;
        }
        st_.pending_pad = false;
        st_.cur = World::Tee;
        st_.started = true;
    }

    void cross_to(World target, size_t node_idx) {
        const LayerNode& n = g_.nodes[node_idx];
        if (!st_.started) {
            st_.cur = target;
            st_.started = true;
            return;
        }
        if (st_.cur == target) return;
        const std::string owner = owner_before(node_idx);
        if (!owner.empty()) sch_.boundary_features.insert(owner);
        if (st_.cur == World::Tee) {
            // Leaving the TEE: a masked transmission gets a fresh pad here.
            if (!owner.empty() && masked_.count(owner)) {
                const LayerNode* consumer = n.linear() ? &n : consumer_at_or_after(node_idx);
                double sec = 0.0;
                std::string priced_by = consumer ? consumer->id : n.id;
                if (consumer && option_obfuscated(opt_(consumer->id))) {
                    sec = profile_.at(consumer->id).t_mask;
                } else {
                    sch_.zero_priced_masks.push_back(owner);
                }
                emit(EventCategory::Mask, priced_by, World::Tee, sec, owner);
                st_.pending_pad = true;
            }
            emit(EventCategory::Switch, n.id, World::Ree, profile_.t_switch);
            st_.cur = World::Ree;
        } else {
            emit(EventCategory::Switch, n.id, World::Tee, profile_.t_switch);
            if (st_.pending_deobf) {
                emit(EventCategory::Deobf, st_.deobf_tensor, World::Tee,
                     profile_.at(st_.deobf_tensor).t_deobf);
                st_.pending_deobf = false;
            }
            st_.pending_pad = false;
            st_.cur = World::Tee;
        }
    }

    const ModelGraph& g_;
    const ChainIndex& idx_;
    const OptionResolver& opt_;
    const std::set<std::string>& masked_;
    const HardwareProfile& profile_;
    State st_;
    Schedule sch_;
    size_t service_visits_ = 0;
};

void check_options_cover(const ModelGraph& graph,
                         const std::map<std::string, PlacementOption>& options) {
    const auto ids = graph.linear_ids();
    if (options.size() != ids.size())
        throw ValidationError("plan must assign exactly one option per linear tensor");
    for (const auto& id : ids)
        if (!options.count(id))
            throw ValidationError("plan has no option for linear tensor '" + id + "'");
}

}  // namespace

Schedule derive_schedule(const ModelGraph& graph,
                         const std::map<std::string, PlacementOption>& options,
                         const std::set<std::string>& masked, const HardwareProfile& profile) {
    check_options_cover(graph, options);
    ChainIndex idx(graph);
    OptionResolver resolver = [&](const std::string& id) { return options.at(id); };
    ScheduleWalker walker(graph, idx, resolver, masked, profile);
    for (size_t i = 0; i < graph.nodes.size(); ++i) walker.process(i);
    walker.flush();
    return walker.take(graph.nodes.size());
}

PlacementPlan finalize_plan(const ModelGraph& graph,
                            const std::map<std::string, PlacementOption>& options,
                            const std::set<std::string>& critical,
                            const std::set<std::string>& masked, const HardwareProfile& profile) {
    Schedule sch = derive_schedule(graph, options, masked, profile);
    PlacementPlan plan;
    plan.options = options;
    plan.worlds = std::move(sch.worlds);
    plan.boundary_features = std::move(sch.boundary_features);
    plan.critical = critical;
    plan.masked = masked;
    plan.predicted_latency = sch.total_seconds;
    plan.zero_priced_masks = std::move(sch.zero_priced_masks);

    ChainIndex idx(graph);
    for (size_t i = 0; i < graph.nodes.size(); ++i) {
        const auto& n = graph.nodes[i];
        if (!n.linear() || !option_obfuscated(options.at(n.id))) continue;
        const int p = idx.prev_linear[i];
        const bool masked_input = p >= 0 && masked.count(graph.nodes[p].id) > 0;
        if (!masked_input) plan.selective_mask_deviation = true;
    }
    return plan;
}

PlacementPlan plan_relaxed(const ModelGraph& graph, const HardwareProfile& profile,
                           const std::set<std::string>& critical,
                           const std::set<std::string>& masked) {
    ChainIndex idx(graph);
    std::map<std::string, PlacementOption> options;
    for (size_t i = 0; i < graph.nodes.size(); ++i) {
        const auto& n = graph.nodes[i];
        if (!n.linear()) continue;
        const bool is_critical = critical.count(n.id) > 0;
        const int p = idx.prev_linear[i];
        const bool masked_input = p >= 0 && masked.count(graph.nodes[p].id) > 0;
        double best = std::numeric_limits<double>::infinity();
        PlacementOption pick = PlacementOption::ReeCpu;
        for (PlacementOption o : legal_options(n.id, is_critical, profile)) {
            const double cost = option_cost(n.id, o, profile, masked_input, is_critical);
            if (cost < best) {
                best = cost;
                pick = o;
            }
        }
        options[n.id] = pick;
    }
    return finalize_plan(graph, options, critical, masked, profile);
}

PlacementPlan plan_exact(const ModelGraph& graph, const HardwareProfile& profile,
                         const std::set<std::string>& critical,
                         const std::set<std::string>& masked) {
    ChainIndex idx(graph);
    std::vector<size_t> lin;
    for (size_t i = 0; i < graph.nodes.size(); ++i)
        if (graph.nodes[i].linear()) lin.push_back(i);
    if (lin.empty()) throw ValidationError("plan_exact: graph has no linear tensors");

    const size_t K = lin.size();
    std::vector<std::vector<PlacementOption>> legal(K);
    for (size_t k = 0; k < K; ++k) {
        const auto& id = graph.nodes[lin[k]].id;
        legal[k] = legal_options(id, critical.count(id) > 0, profile);
    }

    // Walk a node range starting from the state right after linear k's cal.
    // Option lookups resolve to the fixed pair (opt_k for the segment's
    // producer, opt_next for its consumer); other ids cannot occur inside
    // the segment.
    auto segment = [&](size_t k, PlacementOption opt_k, bool pad_k, PlacementOption opt_next,
                       bool& pad_out) -> double {
        const std::string& id_k = graph.nodes[lin[k]].id;
        const std::string& id_n = graph.nodes[lin[k + 1]].id;
        OptionResolver resolver = [&](const std::string& id) {
            if (id == id_k) return opt_k;
            if (id == id_n) return opt_next;
            throw Error("plan_exact: segment resolver asked for '" + id + "'");
        };
        ScheduleWalker w(graph, idx, resolver, masked, profile);
        ScheduleWalker::State st;
        st.cur = option_world(opt_k);
        st.started = true;
        st.pending_pad = pad_k;
        st.pending_deobf = option_obfuscated(opt_k);
        st.deobf_tensor = id_k;
        w.set_state(st);
        for (size_t i = lin[k] + 1; i <= lin[k + 1]; ++i) w.process(i);
        pad_out = w.state().pending_pad;
        return w.seconds();
    };

    auto prefix_cost = [&](PlacementOption opt0) -> double {
        const std::string& id0 = graph.nodes[lin[0]].id;
        OptionResolver resolver = [&](const std::string& id) {
            if (id == id0) return opt0;
            throw Error("plan_exact: prefix resolver asked for '" + id + "'");
        };
        ScheduleWalker w(graph, idx, resolver, masked, profile);
        for (size_t i = 0; i <= lin[0]; ++i) w.process(i);
        return w.seconds();
    };

    auto tail_cost = [&](PlacementOption optK, bool padK) -> double {
        const std::string& idK = graph.nodes[lin[K - 1]].id;
        OptionResolver resolver = [&](const std::string& id) {
            if (id == idK) return optK;
            throw Error("plan_exact: tail resolver asked for '" + id + "'");
        };
        ScheduleWalker w(graph, idx, resolver, masked, profile);
        ScheduleWalker::State st;
        st.cur = option_world(optK);
        st.started = true;
        st.pending_pad = padK;
        st.pending_deobf = option_obfuscated(optK);
        st.deobf_tensor = idK;
        w.set_state(st);
        for (size_t i = lin[K - 1] + 1; i < graph.nodes.size(); ++i) w.process(i);
        w.flush();
        return w.seconds();
    };

    // Suffix DP over (linear index, option, pad-pending).
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::array<std::array<double, 2>, 5> unreachable;
    for (auto& a : unreachable) a = {kInf, kInf};
    std::vector<std::array<std::array<double, 2>, 5>> suffix(K, unreachable);

    for (PlacementOption o : legal[K - 1])
        for (int pad = 0; pad < 2; ++pad)
            suffix[K - 1][static_cast<int>(o)][pad] = tail_cost(o, pad == 1);

    for (size_t k = K - 1; k-- > 0;) {
        for (PlacementOption o : legal[k]) {
            for (int pad = 0; pad < 2; ++pad) {
                double best = kInf;
                for (PlacementOption on : legal[k + 1]) {
                    bool pad_out = false;
                    const double seg = segment(k, o, pad == 1, on, pad_out);
                    const double rest = suffix[k + 1][static_cast<int>(on)][pad_out ? 1 : 0];
                    best = std::min(best, seg + rest);
                }
                suffix[k][static_cast<int>(o)][pad] = best;
            }
        }
    }

    // Greedy reconstruction front-to-back; ascending option index keeps the
    // lexicographically smallest sequence among ties.
    const double eps = 1e-12;
    std::map<std::string, PlacementOption> options;
    double best_total = kInf;
    PlacementOption pick0 = legal[0][0];
    for (PlacementOption o : legal[0]) {
        const double total = prefix_cost(o) + suffix[0][static_cast<int>(o)][0];
        if (total < best_total - eps) {
            best_total = total;
            pick0 = o;
        }
    }
    options[graph.nodes[lin[0]].id] = pick0;
    PlacementOption cur = pick0;
    bool pad = false;
    for (size_t k = 0; k + 1 < K; ++k) {
        const double target = suffix[k][static_cast<int>(cur)][pad ? 1 : 0];
        PlacementOption next = legal[k + 1][0];
        bool next_pad = false;
        bool found = false;
        for (PlacementOption on : legal[k + 1]) {
            bool pad_out = false;
            const double seg = segment(k, cur, pad, on, pad_out);
            const double rest = suffix[k + 1][static_cast<int>(on)][pad_out ? 1 : 0];
            if (seg + rest <= target + eps) {
                next = on;
                next_pad = pad_out;
                found = true;
                break;
            }
        }
        if (!found) throw Error("plan_exact: reconstruction failed");
        options[graph.nodes[lin[k + 1]].id] = next;
        cur = next;
        pad = next_pad;
    }
    return finalize_plan(graph, options, critical, masked, profile);
}

std::vector<std::string> validate_plan(const PlacementPlan& plan, const ModelGraph& graph,
                                       const std::set<std::string>& critical,
                                       const std::set<std::string>& masked,
                                       const HardwareProfile& profile) {
    std::vector<std::string> v;
    const auto ids = graph.linear_ids();
    for (const auto& id : ids)
        if (!plan.options.count(id))
            v.push_back("coverage: no option assigned to linear tensor '" + id + "'");
    for (const auto& [id, o] : plan.options) {
        if (!graph.has_node(id) || !graph.node(id).linear()) {
            v.push_back("coverage: option assigned to non-linear or unknown tensor '" + id + "'");
            continue;
        }
        const bool is_critical = critical.count(id) > 0;
        if (is_critical && !(option_obfuscated(o) || o == PlacementOption::TeeCpu))
            v.push_back("criticality: critical tensor '" + id + "' uses plain option " + option_name(o));
        if (!is_critical && (option_obfuscated(o) || o == PlacementOption::TeeCpu))
            v.push_back("criticality: non-critical tensor '" + id + "' uses shielded option " +
                        option_name(o));
        if (o == PlacementOption::TeeCpu && !profile.fits_tee(id))
            v.push_back("memory: tensor '" + id + "' exceeds the TEE budget under TEE_CPU");
    }
    if (!v.empty()) return v;  // world checks need a coherent option map

    // Non-linear unit immediately after an obfuscated tensor must sit in TEE.
    for (size_t i = 0; i + 1 < graph.nodes.size(); ++i) {
        const auto& n = graph.nodes[i];
        const auto& next = graph.nodes[i + 1];
        if (n.linear() && option_obfuscated(plan.options.at(n.id)) && !next.linear()) {
            auto it = plan.worlds.find(next.id);
            if (it == plan.worlds.end() || it->second != World::Tee)
                v.push_back("obfuscation: non-linear unit '" + next.id +
                            "' after obfuscated tensor '" + n.id + "' is not in TEE");
        }
    }

    // Derived worlds and boundary must match a fresh derivation.
    Schedule sch = derive_schedule(graph, plan.options, masked, profile);
    for (const auto& [id, w] : sch.worlds) {
        auto it = plan.worlds.find(id);
        if (it == plan.worlds.end() || it->second != w)
            v.push_back("worlds: unit '" + id + "' world differs from the derived schedule");
    }
    if (plan.boundary_features != sch.boundary_features)
        v.push_back("boundary: feature set differs from the derived schedule");
    return v;
}

double predicted_latency(const PlacementPlan& plan, const ModelGraph& graph,
                         const HardwareProfile& profile) {
    return derive_schedule(graph, plan.options, plan.masked, profile).total_seconds;
}

std::string plan_to_json_text(const PlacementPlan& plan) {
    json j;
    j["options"] = json::object();
    for (const auto& [id, o] : plan.options) j["options"][id] = option_name(o);
    j["worlds"] = json::object();
    for (const auto& [id, w] : plan.worlds) j["worlds"][id] = world_name(w);
    j["boundary_features"] =
        std::vector<std::string>(plan.boundary_features.begin(), plan.boundary_features.end());
    j["critical"] = std::vector<std::string>(plan.critical.begin(), plan.critical.end());
    j["masked"] = std::vector<std::string>(plan.masked.begin(), plan.masked.end());
    j["predicted_latency"] = plan.predicted_latency;
    j["selective_mask_deviation"] = plan.selective_mask_deviation;
    j["zero_priced_masks"] = plan.zero_priced_masks;
    return j.dump(2) + "\n";
}

PlacementPlan plan_from_json_text(const std::string& text, const std::string& origin) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ValidationError("plan '" + origin + "' is not valid JSON");
    try {
        PlacementPlan p;
        for (const auto& [id, o] : j.at("options").items())
            p.options[id] = option_from_name(o.get<std::string>());
        for (const auto& [id, w] : j.at("worlds").items())
            p.worlds[id] = w.get<std::string>() == "TEE" ? World::Tee : World::Ree;
        for (const auto& f : j.at("boundary_features"))
            p.boundary_features.insert(f.get<std::string>());
        for (const auto& c : j.at("critical")) p.critical.insert(c.get<std::string>());
        for (const auto& m : j.at("masked")) p.masked.insert(m.get<std::string>());
        p.predicted_latency = j.at("predicted_latency").get<double>();
        p.selective_mask_deviation = j.at("selective_mask_deviation").get<bool>();
        for (const auto& z : j.at("zero_priced_masks")) p.zero_priced_masks.push_back(z.get<std::string>());
        return p;
    } catch (const json::exception& e) {
        throw ValidationError("plan '" + origin + "': " + e.what());
    }
}

void save_plan(const PlacementPlan& plan, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot open '" + path + "' for writing");
    os << plan_to_json_text(plan);
}

PlacementPlan load_plan(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open plan '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return plan_from_json_text(ss.str(), path);
}

}  // namespace teeshield
