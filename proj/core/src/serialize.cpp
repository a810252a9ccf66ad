#include "teeshield/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "teeshield/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

namespace teeshield {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Little-endian binary reader/writer with byte-offset error reporting.
// ---------------------------------------------------------------------------

class Writer {
public:
    explicit Writer(const std::string& path) : path_(path), os_(path, std::ios::binary) {
        if (!os_) throw ValidationError("cannot open '" + path + "' for writing");
    }
    void bytes(const void* p, size_t n) { os_.write(static_cast<const char*>(p), n); }
    void u8(uint8_t v) { bytes(&v, 1); }
    void u16(uint16_t v) { bytes(&v, 2); }
    void u32(uint32_t v) { bytes(&v, 4); }
    void u64(uint64_t v) { bytes(&v, 8); }
    void str(const std::string& s) {
        if (s.size() > UINT16_MAX) throw ValidationError("string too long for format");
        u16(static_cast<uint16_t>(s.size()));
        bytes(s.data(), s.size());
    }
    void doubles(const double* p, size_t n) { bytes(p, n * sizeof(double)); }
    void tensor(const Tensor& t) {
        u8(static_cast<uint8_t>(t.rank()));
        for (size_t d : t.shape()) u64(d);
        doubles(t.data(), t.numel());
    }
    void close() {
        os_.close();
        if (!os_) throw ValidationError("write to '" + path_ + "' failed");
    }

private:
    std::string path_;
    std::ofstream os_;
};

class Reader {
public:
    Reader(const std::string& path, const char* what) : path_(path), what_(what) {
        std::ifstream is(path, std::ios::binary);
        if (!is) throw ValidationError(std::string("cannot open ") + what + " '" + path + "'");
        std::ostringstream ss;
        ss << is.rdbuf();
        buf_ = ss.str();
    }
    size_t offset() const { return pos_; }
    void bytes(void* p, size_t n, const char* field) {
        if (pos_ + n > buf_.size())
            throw ValidationError(std::string(what_) + " '" + path_ + "' truncated at byte offset " +
                                  std::to_string(pos_) + " while reading field '" + field + "'");
        std::memcpy(p, buf_.data() + pos_, n);
        pos_ += n;
    }
    uint8_t u8(const char* f) { uint8_t v; bytes(&v, 1, f); return v; }
    uint16_t u16(const char* f) { uint16_t v; bytes(&v, 2, f); return v; }
    uint32_t u32(const char* f) { uint32_t v; bytes(&v, 4, f); return v; }
    uint64_t u64(const char* f) { uint64_t v; bytes(&v, 8, f); return v; }
    std::string str(const char* f) {
        const uint16_t n = u16(f);
        std::string s(n, '\0');
        bytes(s.data(), n, f);
        return s;
    }
    Tensor tensor(const char* f) {
        const uint8_t rank = u8(f);
        if (rank > 8)
            throw ValidationError(std::string(what_) + " '" + path_ + "': implausible tensor rank at offset " +
                                  std::to_string(pos_ - 1) + " in field '" + f + "'");
        std::vector<size_t> shape(rank);
        for (auto& d : shape) d = u64(f);
        const size_t n = shape_numel(shape);
        if (n > (1u << 28))
            throw ValidationError(std::string(what_) + " '" + path_ + "': implausible tensor size in field '" +
                                  std::string(f) + "'");
        std::vector<double> data(n);
        bytes(data.data(), n * sizeof(double), f);
        return Tensor(std::move(shape), std::move(data));
    }
    void expect_magic(const char* magic) {
        char got[9] = {0};
        bytes(got, 8, "magic");
        if (std::memcmp(got, magic, 8) != 0)
            throw ValidationError(std::string(what_) + " '" + path_ + "': bad magic at byte offset 0, expected " +
                                  magic);
    }
    void expect_end() {
        if (pos_ != buf_.size())
            throw ValidationError(std::string(what_) + " '" + path_ + "': " +
                                  std::to_string(buf_.size() - pos_) + " trailing bytes at offset " +
                                  std::to_string(pos_));
    }

private:
    std::string path_;
    const char* what_;
    std::string buf_;
    size_t pos_ = 0;
};

json parse_json_file(const std::string& path, const char* what) {
    std::ifstream is(path);
    if (!is) throw ValidationError(std::string("cannot open ") + what + " '" + path + "'");
    json j = json::parse(is, nullptr, false);
    if (j.is_discarded())
        throw ValidationError(std::string(what) + " '" + path + "' is not valid JSON");
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot open '" + path + "' for writing");
    os << text;
    os.close();
    if (!os) throw ValidationError("write to '" + path + "' failed");
}

}  // namespace

// ---------------------------------------------------------------------------
// Model spec
// ---------------------------------------------------------------------------

std::string model_spec_to_json_text(const ModelGraph& graph) {
    json j;
    j["input_shape"] = graph.input_shape;
    j["num_classes"] = graph.num_classes;
    j["nodes"] = json::array();
    for (const auto& n : graph.nodes) {
        json node;
        node["id"] = n.id;
        node["kind"] = kind_name(n.kind);
        if (n.kind == LayerKind::Conv2d) {
            node["in_channels"] = n.conv.in_channels;
            node["out_channels"] = n.conv.out_channels;
            node["kernel"] = n.conv.kernel;
            node["stride"] = n.conv.stride;
            node["padding"] = n.conv.padding;
        }
        if (n.kind == LayerKind::Dense) {
            node["in_features"] = n.dense.in_features;
            node["out_features"] = n.dense.out_features;
        }
        j["nodes"].push_back(node);
    }
    return j.dump(2) + "\n";
}

ModelGraph model_spec_from_json_text(const std::string& text, const std::string& origin) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ValidationError("model spec '" + origin + "' is not valid JSON");
    try {
        ModelGraph g;
        g.input_shape = j.at("input_shape").get<std::vector<size_t>>();
        g.num_classes = j.at("num_classes").get<size_t>();
        for (const auto& node : j.at("nodes")) {
            LayerNode n;
            n.id = node.at("id").get<std::string>();
            n.kind = kind_from_name(node.at("kind").get<std::string>());
            if (n.kind == LayerKind::Conv2d) {
                n.conv.in_channels = node.at("in_channels").get<size_t>();
                n.conv.out_channels = node.at("out_channels").get<size_t>();
                n.conv.kernel = node.value("kernel", size_t{3});
                n.conv.stride = node.value("stride", size_t{1});
                n.conv.padding = node.value("padding", size_t{0});
            }
            if (n.kind == LayerKind::Dense) {
                n.dense.in_features = node.at("in_features").get<size_t>();
                n.dense.out_features = node.at("out_features").get<size_t>();
            }
            g.nodes.push_back(std::move(n));
        }
        g.validate();
        return g;
    } catch (const json::exception& e) {
        throw ValidationError("model spec '" + origin + "': " + e.what());
    }
}

ModelGraph load_model_spec(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open model spec '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return model_spec_from_json_text(ss.str(), path);
}

void save_model_spec(const ModelGraph& graph, const std::string& path) {
    write_text_file(path, model_spec_to_json_text(graph));
}

// ---------------------------------------------------------------------------
// Checkpoint
// ---------------------------------------------------------------------------

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::Public: return "public";
        case Provenance::Victim: return "victim";
        case Provenance::Surrogate: return "surrogate";
    }
    return "?";
}

bool Checkpoint::operator==(const Checkpoint& o) const {
    if (structure_hash != o.structure_hash || provenance != o.provenance) return false;
    if (params.size() != o.params.size()) return false;
    for (const auto& [nid, ps] : params) {
        auto it = o.params.find(nid);
        if (it == o.params.end() || it->second.size() != ps.size()) return false;
        for (const auto& [pname, t] : ps) {
            auto pit = it->second.find(pname);
            if (pit == it->second.end() || !t.bitwise_equal(pit->second)) return false;
        }
    }
    return true;
}

Checkpoint checkpoint_from(const ModelGraph& graph, Provenance provenance) {
    Checkpoint c;
    c.structure_hash = graph.structure_hash();
    c.provenance = provenance;
    for (const auto& n : graph.nodes)
        if (n.linear()) c.params[n.id] = n.params;
    return c;
}

void apply_checkpoint(ModelGraph& graph, const Checkpoint& ckpt) {
    if (ckpt.structure_hash != graph.structure_hash())
        throw ValidationError("checkpoint structure hash does not match graph");
    for (auto& n : graph.nodes) {
        if (!n.linear()) continue;
        auto it = ckpt.params.find(n.id);
        if (it == ckpt.params.end())
            throw ValidationError("checkpoint missing parameters for node '" + n.id + "'");
        n.params = it->second;
    }
}

ModelGraph with_checkpoint(const ModelGraph& base, const Checkpoint& ckpt) {
    ModelGraph g = base;
    apply_checkpoint(g, ckpt);
    return g;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    Writer w(path);
    w.bytes("TSCKPT01", 8);
    w.u32(1);
    w.u64(ckpt.structure_hash);
    w.u8(static_cast<uint8_t>(ckpt.provenance));
    uint32_t entries = 0;
    for (const auto& [nid, ps] : ckpt.params) entries += static_cast<uint32_t>(ps.size());
    w.u32(entries);
    for (const auto& [nid, ps] : ckpt.params)
        for (const auto& [pname, t] : ps) {
            w.str(nid);
            w.str(pname);
            w.tensor(t);
        }
    w.close();
}

Checkpoint load_checkpoint(const std::string& path) {
    Reader r(path, "checkpoint");
    r.expect_magic("TSCKPT01");
    const uint32_t version = r.u32("version");
    if (version != 1)
        throw ValidationError("checkpoint '" + path + "': unsupported version " + std::to_string(version));
    Checkpoint c;
    c.structure_hash = r.u64("structure_hash");
    const uint8_t prov = r.u8("provenance");
    if (prov > 2) throw ValidationError("checkpoint '" + path + "': bad provenance tag");
    c.provenance = static_cast<Provenance>(prov);
    const uint32_t entries = r.u32("entry_count");
    for (uint32_t i = 0; i < entries; ++i) {
        const std::string nid = r.str("node_id");
        const std::string pname = r.str("param_name");
        c.params[nid][pname] = r.tensor("param_data");
    }
    r.expect_end();
    return c;
}

// ---------------------------------------------------------------------------
// Dataset
// ---------------------------------------------------------------------------

namespace {

void write_split(Writer& w, const std::vector<Sample>& split) {
    w.u32(static_cast<uint32_t>(split.size()));
    for (const auto& s : split) {
        w.doubles(s.x.data(), s.x.numel());
        w.u16(static_cast<uint16_t>(s.y));
    }
}

std::vector<Sample> read_split(Reader& r, const std::vector<size_t>& shape, const char* name) {
    const uint32_t n = r.u32(name);
    if (n > (1u << 24)) throw ValidationError("dataset split implausibly large");
    std::vector<Sample> out;
    out.reserve(n);
    const size_t len = shape_numel(shape);
    for (uint32_t i = 0; i < n; ++i) {
        std::vector<double> data(len);
        r.bytes(data.data(), len * sizeof(double), name);
        Sample s;
        s.x = Tensor(shape, std::move(data));
        s.y = static_cast<int>(r.u16(name));
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

void save_dataset(const DatasetBundle& bundle, const std::string& path) {
    Writer w(path);
    w.bytes("TSDATA01", 8);
    w.u32(1);
    w.u32(static_cast<uint32_t>(bundle.num_classes));
    w.u8(static_cast<uint8_t>(bundle.image_shape.size()));
    for (size_t d : bundle.image_shape) w.u64(d);
    write_split(w, bundle.members);
    write_split(w, bundle.nonmembers);
    write_split(w, bundle.test);
    write_split(w, bundle.query);
    w.close();
}

DatasetBundle load_dataset(const std::string& path) {
    Reader r(path, "dataset");
    r.expect_magic("TSDATA01");
    if (r.u32("version") != 1) throw ValidationError("dataset '" + path + "': unsupported version");
    DatasetBundle b;
    b.num_classes = r.u32("num_classes");
    const uint8_t rank = r.u8("shape_rank");
    if (rank != 3) throw ValidationError("dataset '" + path + "': expected rank-3 image shape");
    b.image_shape.resize(rank);
    for (auto& d : b.image_shape) d = r.u64("image_shape");
    b.members = read_split(r, b.image_shape, "members");
    b.nonmembers = read_split(r, b.image_shape, "nonmembers");
    b.test = read_split(r, b.image_shape, "test");
    b.query = read_split(r, b.image_shape, "query");
    r.expect_end();
    b.validate();
    return b;
}

// ---------------------------------------------------------------------------
// Replay log
// ---------------------------------------------------------------------------

namespace {

void write_param_map(Writer& w, const ParamMap& m) {
    uint32_t entries = 0;
    for (const auto& [nid, ps] : m) entries += static_cast<uint32_t>(ps.size());
    w.u32(entries);
    for (const auto& [nid, ps] : m)
        for (const auto& [pname, t] : ps) {
            w.str(nid);
            w.str(pname);
            w.tensor(t);
        }
}

ParamMap read_param_map(Reader& r, const char* field) {
    const uint32_t entries = r.u32(field);
    ParamMap m;
    for (uint32_t i = 0; i < entries; ++i) {
        const std::string nid = r.str(field);
        const std::string pname = r.str(field);
        m[nid][pname] = r.tensor(field);
    }
    return m;
}

}  // namespace

void save_replay(const ReplayLog& log, const std::string& path) {
    Writer w(path);
    w.bytes("TSRPLY01", 8);
    w.u32(1);
    w.u64(log.structure_hash);
    w.u32(static_cast<uint32_t>(log.epochs.size()));
    for (const auto& e : log.epochs) {
        write_param_map(w, e.grads);
        write_param_map(w, e.deltas);
    }
    w.close();
}

ReplayLog load_replay(const std::string& path) {
    Reader r(path, "replay log");
    r.expect_magic("TSRPLY01");
    if (r.u32("version") != 1) throw ValidationError("replay '" + path + "': unsupported version");
    ReplayLog log;
    log.structure_hash = r.u64("structure_hash");
    const uint32_t epochs = r.u32("epoch_count");
    if (epochs > 100000) throw ValidationError("replay '" + path + "': implausible epoch count");
    for (uint32_t i = 0; i < epochs; ++i) {
        ReplayEpoch e;
        e.grads = read_param_map(r, "grads");
        e.deltas = read_param_map(r, "deltas");
        log.epochs.push_back(std::move(e));
    }
    r.expect_end();
    return log;
}

}  // namespace teeshield
