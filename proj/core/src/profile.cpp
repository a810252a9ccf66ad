#include "teeshield/profile.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "teeshield/errors.hpp"
#include "teeshield/rng.hpp"

namespace teeshield {

using nlohmann::json;

const TensorCost& HardwareProfile::at(const std::string& tensor_id) const {
    auto it = tensors.find(tensor_id);
    if (it == tensors.end())
        throw ValidationError("hardware profile has no entry for tensor '" + tensor_id + "'");
    return it->second;
}

bool HardwareProfile::fits_tee(const std::string& tensor_id) const {
    return at(tensor_id).mem_bytes <= tee_memory_bytes;
}

void HardwareProfile::validate() const {
    if (t_switch < 0.0) throw ValidationError("profile: t_switch must be >= 0");
    if (tee_memory_bytes == 0) throw ValidationError("profile: tee_memory_bytes must be > 0");
    for (const auto& [id, c] : tensors) {
        for (double v : {c.t_ree_cpu, c.t_ree_gpu, c.t_tee_cpu, c.t_deobf, c.t_mask})
            if (!(v >= 0.0) || !std::isfinite(v))
                throw ValidationError("profile: negative or non-finite time for tensor '" + id + "'");
    }
}

uint64_t tensor_macs(const ModelGraph& graph, const std::string& tensor_id) {
    // Walk shapes up to the node to recover its output spatial size.
    std::vector<size_t> shape = graph.input_shape;
    for (const auto& n : graph.nodes) {
        std::vector<size_t> out = node_output_shape(n, shape);
        if (n.id == tensor_id) {
            if (n.kind == LayerKind::Conv2d)
                return static_cast<uint64_t>(out[1]) * out[2] * n.conv.out_channels *
                       n.conv.in_channels * n.conv.kernel * n.conv.kernel;
            if (n.kind == LayerKind::Dense)
                return static_cast<uint64_t>(n.dense.in_features) * n.dense.out_features;
            throw ValidationError("tensor_macs: '" + tensor_id + "' is not a linear tensor");
        }
        shape = std::move(out);
    }
    throw ValidationError("tensor_macs: no node '" + tensor_id + "'");
}

namespace {

size_t output_numel(const ModelGraph& graph, const std::string& tensor_id) {
    std::vector<size_t> shape = graph.input_shape;
    for (const auto& n : graph.nodes) {
        shape = node_output_shape(n, shape);
        if (n.id == tensor_id) return shape_numel(shape);
    }
    throw ValidationError("output_numel: no node '" + tensor_id + "'");
}

}  // namespace

HardwareProfile synthetic_profile(const ModelGraph& graph, uint64_t seed) {
    HardwareProfile p;
    p.t_switch = 2e-4;
    p.tee_memory_bytes = 16ull << 20;

    // CPU: high rate start, low fixed cost. GPU: much higher throughput but a
    // launch overhead, so small tensors run faster on the CPU.
    const double cpu_rate = 2.0e8;   // MACs/s
    const double gpu_rate = 4.0e9;
    const double cpu_fixed = 2e-5;
    const double gpu_fixed = 6e-4;
    const double tee_factor = 1.6;   // same CPU inside the enclave, world overheads
    const double elem_rate = 5.0e7;  // per-element rate for deobf/mask work

    for (const auto& id : graph.linear_ids()) {
        Rng rng(seed, "profile/" + id);
        auto jitter = [&] { return 1.0 + 0.1 * (rng.uniform() - 0.5); };
        const double macs = static_cast<double>(tensor_macs(graph, id));
        const auto& node = graph.node(id);
        const size_t out_elems = output_numel(graph, id);
        const size_t out_dim = node.kind == LayerKind::Conv2d ? node.conv.out_channels
                                                              : node.dense.out_features;
        TensorCost c;
        c.t_ree_cpu = (cpu_fixed + macs / cpu_rate) * jitter();
        c.t_ree_gpu = (gpu_fixed + macs / gpu_rate) * jitter();
        c.t_tee_cpu = tee_factor * (cpu_fixed + macs / cpu_rate) * jitter();
        // Deobfuscation applies an out_dim x out_dim mix per spatial position.
        c.t_deobf = (static_cast<double>(out_elems) * static_cast<double>(out_dim) / elem_rate +
                     1e-5) * jitter();
        c.t_mask = (2.0 * static_cast<double>(out_elems) / elem_rate + 1e-5) * jitter();
        c.mem_bytes = static_cast<uint64_t>(node.param_count()) * sizeof(double);
        p.tensors[id] = c;
    }
    p.validate();
    return p;
}

std::string profile_to_json_text(const HardwareProfile& p) {
    json j;
    j["t_switch"] = p.t_switch;
    j["tee_memory_bytes"] = p.tee_memory_bytes;
    j["tensors"] = json::object();
    for (const auto& [id, c] : p.tensors) {
        j["tensors"][id] = {{"t_ree_cpu", c.t_ree_cpu}, {"t_ree_gpu", c.t_ree_gpu},
                            {"t_tee_cpu", c.t_tee_cpu}, {"t_deobf", c.t_deobf},
                            {"t_mask", c.t_mask},       {"mem_bytes", c.mem_bytes}};
    }
    return j.dump(2) + "\n";
}

HardwareProfile profile_from_json_text(const std::string& text, const std::string& origin) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ValidationError("profile '" + origin + "' is not valid JSON");
    try {
        HardwareProfile p;
        p.t_switch = j.at("t_switch").get<double>();
        p.tee_memory_bytes = j.at("tee_memory_bytes").get<uint64_t>();
        for (const auto& [id, c] : j.at("tensors").items()) {
            TensorCost tc;
            tc.t_ree_cpu = c.at("t_ree_cpu").get<double>();
            tc.t_ree_gpu = c.at("t_ree_gpu").get<double>();
            tc.t_tee_cpu = c.at("t_tee_cpu").get<double>();
            tc.t_deobf = c.at("t_deobf").get<double>();
            tc.t_mask = c.at("t_mask").get<double>();
            tc.mem_bytes = c.at("mem_bytes").get<uint64_t>();
            p.tensors[id] = tc;
        }
        p.validate();
        return p;
    } catch (const json::exception& e) {
        throw ValidationError("profile '" + origin + "': " + e.what());
    }
}

void save_profile(const HardwareProfile& p, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot open '" + path + "' for writing");
    os << profile_to_json_text(p);
}

HardwareProfile load_profile(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open profile '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return profile_from_json_text(ss.str(), path);
}

}  // namespace teeshield
