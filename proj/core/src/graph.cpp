#include "teeshield/graph.hpp"

#include <algorithm>
#include <set>

#include "teeshield/errors.hpp"
#include "teeshield/hash.hpp"
#include "teeshield/rng.hpp"

namespace teeshield {

const char* kind_name(LayerKind k) {
    switch (k) {
        case LayerKind::Conv2d: return "conv2d";
        case LayerKind::Dense: return "dense";
        case LayerKind::Relu: return "relu";
        case LayerKind::MaxPool2x2: return "maxpool2x2";
        case LayerKind::GlobalAvgPool: return "globalavgpool";
        case LayerKind::Flatten: return "flatten";
    }
    return "?";
}

LayerKind kind_from_name(const std::string& name) {
    if (name == "conv2d") return LayerKind::Conv2d;
    if (name == "dense") return LayerKind::Dense;
    if (name == "relu") return LayerKind::Relu;
    if (name == "maxpool2x2") return LayerKind::MaxPool2x2;
    if (name == "globalavgpool") return LayerKind::GlobalAvgPool;
    if (name == "flatten") return LayerKind::Flatten;
    throw ValidationError("unknown layer kind '" + name + "'");
}

bool kind_is_linear(LayerKind k) {
    return k == LayerKind::Conv2d || k == LayerKind::Dense;
}

size_t LayerNode::param_count() const {
    size_t n = 0;
    for (const auto& [name, t] : params) n += t.numel();
    return n;
}

std::vector<size_t> node_output_shape(const LayerNode& node, const std::vector<size_t>& in) {
    auto fail = [&](const std::string& why) -> std::vector<size_t> {
        throw ValidationError("node '" + node.id + "' (" + kind_name(node.kind) + "): " + why +
                              ", input shape " + shape_str(in));
    };
    switch (node.kind) {
        case LayerKind::Conv2d: {
            if (in.size() != 3) return fail("expects [C,H,W] input");
            const auto& h = node.conv;
            if (in[0] != h.in_channels) return fail("in_channels mismatch");
            if (h.stride == 0) return fail("stride must be positive");
            const size_t hp = in[1] + 2 * h.padding;
            const size_t wp = in[2] + 2 * h.padding;
            if (hp < h.kernel || wp < h.kernel) return fail("kernel larger than padded input");
            if ((hp - h.kernel) % h.stride != 0 || (wp - h.kernel) % h.stride != 0)
                return fail("stride does not tile the padded input");
            return {h.out_channels, (hp - h.kernel) / h.stride + 1, (wp - h.kernel) / h.stride + 1};
        }
        case LayerKind::Dense: {
            if (in.size() != 1) return fail("expects flat [F] input");
            if (in[0] != node.dense.in_features) return fail("in_features mismatch");
            return {node.dense.out_features};
        }
        case LayerKind::Relu:
            return in;
        case LayerKind::MaxPool2x2: {
            if (in.size() != 3) return fail("expects [C,H,W] input");
            if (in[1] % 2 != 0 || in[2] % 2 != 0) return fail("spatial dims must be even");
            return {in[0], in[1] / 2, in[2] / 2};
        }
        case LayerKind::GlobalAvgPool: {
            if (in.size() != 3) return fail("expects [C,H,W] input");
            return {in[0]};
        }
        case LayerKind::Flatten: {
            size_t n = 1;
            for (size_t d : in) n *= d;
            return {n};
        }
    }
    return fail("unhandled kind");
}

void ModelGraph::validate() const {
    if (nodes.empty()) throw ValidationError("graph has no nodes");
    if (num_classes < 2) throw ValidationError("graph needs num_classes >= 2");
    std::set<std::string> ids;
    for (const auto& n : nodes) {
        if (n.id.empty()) throw ValidationError("node with empty id");
        if (!ids.insert(n.id).second) throw ValidationError("duplicate node id '" + n.id + "'");
        if (!n.linear() && !n.params.empty())
            throw ValidationError("non-linear node '" + n.id + "' must not carry parameters");
    }
    std::vector<size_t> shape = input_shape;
    for (const auto& n : nodes) {
        shape = node_output_shape(n, shape);
        // Parameter shapes, when present, must agree with the hyperparameters.
        if (n.kind == LayerKind::Conv2d && !n.params.empty()) {
            const auto& w = n.params.at("weight");
            std::vector<size_t> expect{n.conv.out_channels, n.conv.in_channels, n.conv.kernel, n.conv.kernel};
            if (w.shape() != expect)
                throw ValidationError("node '" + n.id + "': weight shape " + shape_str(w.shape()) +
                                      " != " + shape_str(expect));
            if (n.params.at("bias").shape() != std::vector<size_t>{n.conv.out_channels})
                throw ValidationError("node '" + n.id + "': bias shape mismatch");
        }
        if (n.kind == LayerKind::Dense && !n.params.empty()) {
            const auto& w = n.params.at("weight");
            std::vector<size_t> expect{n.dense.out_features, n.dense.in_features};
            if (w.shape() != expect)
                throw ValidationError("node '" + n.id + "': weight shape " + shape_str(w.shape()) +
                                      " != " + shape_str(expect));
            if (n.params.at("bias").shape() != std::vector<size_t>{n.dense.out_features})
                throw ValidationError("node '" + n.id + "': bias shape mismatch");
        }
    }
    if (shape != std::vector<size_t>{num_classes})
        throw ValidationError("final node produces " + shape_str(shape) + ", expected [" +
                              std::to_string(num_classes) + "] logits");
}

const LayerNode& ModelGraph::node(const std::string& id) const {
    for (const auto& n : nodes)
        if (n.id == id) return n;
    throw ValidationError("no node '" + id + "' in graph");
}

LayerNode& ModelGraph::node(const std::string& id) {
    for (auto& n : nodes)
        if (n.id == id) return n;
    throw ValidationError("no node '" + id + "' in graph");
}

bool ModelGraph::has_node(const std::string& id) const {
    for (const auto& n : nodes)
        if (n.id == id) return true;
    return false;
}

size_t ModelGraph::node_index(const std::string& id) const {
    for (size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].id == id) return i;
    throw ValidationError("no node '" + id + "' in graph");
}

std::vector<std::string> ModelGraph::linear_ids() const {
    std::vector<std::string> out;
    for (const auto& n : nodes)
        if (n.linear()) out.push_back(n.id);
    return out;
}

size_t ModelGraph::total_param_count() const {
    size_t n = 0;
    for (const auto& node : nodes) n += node.param_count();
    return n;
}

uint64_t ModelGraph::structure_hash() const {
    uint64_t h = kFnvOffset;
    for (size_t d : input_shape) h = fnv1a64_u64(d, h);
    h = fnv1a64_u64(num_classes, h);
    for (const auto& n : nodes) {
        h = fnv1a64(n.id, h);
        h = fnv1a64(kind_name(n.kind), h);
        if (n.kind == LayerKind::Conv2d) {
            for (size_t v : {n.conv.in_channels, n.conv.out_channels, n.conv.kernel, n.conv.stride, n.conv.padding})
                h = fnv1a64_u64(v, h);
        }
        if (n.kind == LayerKind::Dense) {
            h = fnv1a64_u64(n.dense.in_features, h);
            h = fnv1a64_u64(n.dense.out_features, h);
        }
    }
    return h;
}

void ModelGraph::init_params(uint64_t seed) {
    for (auto& n : nodes) {
        if (!n.linear()) continue;
        size_t fan_in = 0;
        std::vector<size_t> wshape, bshape;
        if (n.kind == LayerKind::Conv2d) {
            fan_in = n.conv.in_channels * n.conv.kernel * n.conv.kernel;
            wshape = {n.conv.out_channels, n.conv.in_channels, n.conv.kernel, n.conv.kernel};
            bshape = {n.conv.out_channels};
        } else {
            fan_in = n.dense.in_features;
            wshape = {n.dense.out_features, n.dense.in_features};
            bshape = {n.dense.out_features};
        }
        Rng rng(seed, n.id + "/weight");
        const double scale = std::sqrt(2.0 / static_cast<double>(fan_in));
        Tensor w(wshape);
        for (size_t i = 0; i < w.numel(); ++i) w[i] = scale * rng.normal();
        n.params["weight"] = std::move(w);
        n.params["bias"] = Tensor(bshape);
    }
}

ModelGraph default_desk_graph(std::vector<size_t> input_shape, size_t num_classes) {
    if (input_shape.size() != 3) throw ValidationError("default graph expects [C,H,W] input");
    const size_t c = input_shape[0];
    const size_t h = input_shape[1];
    const size_t w = input_shape[2];
    if (h % 4 != 0 || w % 4 != 0) throw ValidationError("default graph needs H,W divisible by 4");

    ModelGraph g;
    g.input_shape = input_shape;
    g.num_classes = num_classes;

    auto conv = [](std::string id, size_t in, size_t out) {
        LayerNode n;
        n.id = std::move(id);
        n.kind = LayerKind::Conv2d;
        n.conv = {in, out, 3, 1, 1};
        return n;
    };
    auto dense = [](std::string id, size_t in, size_t out) {
        LayerNode n;
        n.id = std::move(id);
        n.kind = LayerKind::Dense;
        n.dense = {in, out};
        return n;
    };
    auto plain = [](std::string id, LayerKind k) {
        LayerNode n;
        n.id = std::move(id);
        n.kind = k;
        return n;
    };

    g.nodes.push_back(conv("conv1", c, 8));
    g.nodes.push_back(plain("relu1", LayerKind::Relu));
    g.nodes.push_back(plain("pool1", LayerKind::MaxPool2x2));
    g.nodes.push_back(conv("conv2", 8, 12));
    g.nodes.push_back(plain("relu2", LayerKind::Relu));
    g.nodes.push_back(plain("pool2", LayerKind::MaxPool2x2));
    g.nodes.push_back(conv("conv3", 12, 16));
    g.nodes.push_back(plain("relu3", LayerKind::Relu));
    g.nodes.push_back(plain("flat", LayerKind::Flatten));
    g.nodes.push_back(dense("dense1", 16 * (h / 4) * (w / 4), 64));
    g.nodes.push_back(plain("relu4", LayerKind::Relu));
    g.nodes.push_back(dense("dense2", 64, 32));
    g.nodes.push_back(plain("relu5", LayerKind::Relu));
    g.nodes.push_back(dense("dense3", 32, num_classes));
    g.validate();
    return g;
}

}  // namespace teeshield
