#include "teeshield/dataset.hpp"

#include <cmath>
#include <set>

#include "teeshield/engine.hpp"
#include "teeshield/errors.hpp"
#include "teeshield/hash.hpp"
#include "teeshield/rng.hpp"

namespace teeshield {

void DatasetBundle::validate() const {
    if (num_classes < 2) throw ValidationError("bundle needs >= 2 classes");
    if (members.empty()) throw ValidationError("bundle has no members");
    if (query.size() * 100 > members.size())
        throw ValidationError("query budget exceeded: |query|=" + std::to_string(query.size()) +
                              " > 1% of |members|=" + std::to_string(members.size()));
    // Pairwise disjointness via content hashes (samples are continuous draws,
    // collisions indicate actual duplication).
    std::set<uint64_t> seen;
    auto check = [&](const std::vector<Sample>& split, const char* name) {
        for (const auto& s : split) {
            uint64_t h = fnv1a64(s.x.data(), s.x.numel() * sizeof(double));
            h = fnv1a64_u64(static_cast<uint64_t>(s.y), h);
            if (!seen.insert(h).second)
                throw ValidationError(std::string("duplicate sample across splits in ") + name);
        }
    };
    check(members, "members");
    check(nonmembers, "nonmembers");
    check(test, "test");
    check(query, "query");
}

namespace {

// One sample of class `cls`: an oriented grating / checkerboard texture with
// per-sample frequency and phase jitter plus pixel noise. The Auxiliary
// variant shifts the base frequencies and noise so the public model trains
// on a related but distinct task.
Tensor render_sample(Rng& rng, size_t cls, const std::vector<size_t>& shape,
                     DatasetVariant variant) {
    const size_t C = shape[0], H = shape[1], W = shape[2];
    const bool aux = variant == DatasetVariant::Auxiliary;
    const double base_freq = aux ? 0.55 : 0.85;
    const double noise_sd = aux ? 0.35 : 0.30;

    const double freq = base_freq * (1.0 + 0.25 * (rng.uniform() - 0.5));
    const double phase1 = rng.uniform(0.0, 6.283185307179586);
    const double phase2 = rng.uniform(0.0, 6.283185307179586);
    const double amp = 1.0 + 0.3 * (rng.uniform() - 0.5);
    const double dc = 0.2 * (rng.uniform() - 0.5);

    Tensor x(std::vector<size_t>{C, H, W});
    for (size_t c = 0; c < C; ++c) {
        const double chan_gain = 1.0 - 0.15 * static_cast<double>(c);
        for (size_t i = 0; i < H; ++i) {
            for (size_t j = 0; j < W; ++j) {
                double v = 0.0;
                const double fi = freq * static_cast<double>(i);
                const double fj = freq * static_cast<double>(j);
                switch (cls % 4) {
                    case 0: v = std::sin(fi + phase1); break;                        // horizontal
                    case 1: v = std::sin(fj + phase1); break;                        // vertical
                    case 2: v = std::sin((fi + fj) * 0.7071067811865476 + phase1); break;  // diagonal
                    case 3: v = std::sin(fi + phase1) * std::sin(fj + phase2); break;      // checker
                }
                // Classes beyond 4 reuse the pattern family at double frequency.
                if (cls >= 4) v = std::sin(2.0 * fi + phase1) * (cls % 4 == 3 ? std::sin(2.0 * fj + phase2) : 1.0);
                x[(c * H + i) * W + j] = chan_gain * (amp * v + dc) + noise_sd * rng.normal();
            }
        }
    }
    return x;
}

std::vector<Sample> draw_split(Rng& rng, size_t num_classes, size_t per_class,
                               const std::vector<size_t>& shape, DatasetVariant variant) {
    std::vector<Sample> out;
    out.reserve(num_classes * per_class);
    // Interleave classes so any prefix is near-balanced.
    for (size_t k = 0; k < per_class; ++k)
        for (size_t cls = 0; cls < num_classes; ++cls)
            out.push_back({render_sample(rng, cls, shape, variant), static_cast<int>(cls)});
    return out;
}

}  // namespace

DatasetBundle generate_synthetic_dataset(const DatasetParams& params) {
    if (params.num_classes < 2) throw ValidationError("num_classes must be >= 2");
    if (params.image_shape.size() != 3) throw ValidationError("image_shape must be [C,H,W]");
    const size_t members_total = params.num_classes * params.per_class;
    const size_t query_total = members_total / 100;
    const size_t held_per_class = std::max<size_t>(1, params.per_class / 4);
    if (query_total == 0)
        throw ValidationError("per_class too small to fill splits: need >= 100 members total "
                              "for a non-empty query split, got " + std::to_string(members_total));

    DatasetBundle b;
    b.num_classes = params.num_classes;
    b.image_shape = params.image_shape;

    Rng rng(params.seed, params.variant == DatasetVariant::Auxiliary ? "dataset/aux"
                                                                     : "dataset/primary");
    b.members = draw_split(rng, params.num_classes, params.per_class, params.image_shape, params.variant);
    b.nonmembers = draw_split(rng, params.num_classes, held_per_class, params.image_shape, params.variant);
    b.test = draw_split(rng, params.num_classes, held_per_class, params.image_shape, params.variant);

    // Query pool: fresh same-distribution draws, capped at the 1% budget.
    b.query.reserve(query_total);
    for (size_t k = 0; k < query_total; ++k) {
        const size_t cls = k % params.num_classes;
        b.query.push_back({render_sample(rng, cls, params.image_shape, params.variant),
                           static_cast<int>(cls)});
    }
    b.validate();
    return b;
}

Tensor make_batch(const std::vector<Sample>& samples, size_t begin, size_t count) {
    if (begin + count > samples.size() || count == 0)
        throw ValidationError("make_batch: bad range");
    std::vector<size_t> shape{count};
    shape.insert(shape.end(), samples[begin].x.shape().begin(), samples[begin].x.shape().end());
    Tensor batch(std::move(shape));
    const size_t len = samples[begin].x.numel();
    for (size_t k = 0; k < count; ++k)
        std::copy(samples[begin + k].x.data(), samples[begin + k].x.data() + len,
                  batch.data() + k * len);
    return batch;
}

std::vector<int> batch_labels(const std::vector<Sample>& samples, size_t begin, size_t count) {
    std::vector<int> out(count);
    for (size_t k = 0; k < count; ++k) out[k] = samples[begin + k].y;
    return out;
}

double accuracy(const ModelGraph& graph, const std::vector<Sample>& samples, size_t batch_size) {
    if (samples.empty()) throw ValidationError("accuracy: empty sample set");
    size_t correct = 0;
    for (size_t off = 0; off < samples.size(); off += batch_size) {
        const size_t count = std::min(batch_size, samples.size() - off);
        Activations acts = forward(graph, make_batch(samples, off, count));
        auto pred = argmax_rows(acts.logits);
        for (size_t k = 0; k < count; ++k)
            if (pred[k] == samples[off + k].y) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(samples.size());
}

}  // namespace teeshield
