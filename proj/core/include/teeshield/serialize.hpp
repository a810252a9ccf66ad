#pragma once

#include <cstdint>
#include <string>

#include "teeshield/dataset.hpp"
#include "teeshield/graph.hpp"
#include "teeshield/optimizer.hpp"

namespace teeshield {

// ---------------------------------------------------------------------------
// Model spec: JSON document listing nodes in order with kind and
// hyperparameters. Parameters are not part of the spec (see Checkpoint).
// ---------------------------------------------------------------------------
ModelGraph load_model_spec(const std::string& path);
void save_model_spec(const ModelGraph& graph, const std::string& path);
ModelGraph model_spec_from_json_text(const std::string& text, const std::string& origin);
std::string model_spec_to_json_text(const ModelGraph& graph);

// ---------------------------------------------------------------------------
// Checkpoint: binary container of little-endian float64 parameter tensors
// with a table-of-contents header (node id / param name -> shape, offset).
// Round-trips are bit exact.
// ---------------------------------------------------------------------------
enum class Provenance : uint8_t { Public = 0, Victim = 1, Surrogate = 2 };
const char* provenance_name(Provenance p);

struct Checkpoint {
    uint64_t structure_hash = 0;
    Provenance provenance = Provenance::Public;
    ParamMap params;

    bool operator==(const Checkpoint& o) const;
};

Checkpoint checkpoint_from(const ModelGraph& graph, Provenance provenance);

// Overwrites graph parameters; the structure hash must match.
void apply_checkpoint(ModelGraph& graph, const Checkpoint& ckpt);

// Graph with this checkpoint's parameters applied (structure from `base`).
ModelGraph with_checkpoint(const ModelGraph& base, const Checkpoint& ckpt);

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

// ---------------------------------------------------------------------------
// Dataset container: header (magic, version, counts, shape) + raw
// little-endian samples + label arrays, split by split.
// ---------------------------------------------------------------------------
void save_dataset(const DatasetBundle& bundle, const std::string& path);
DatasetBundle load_dataset(const std::string& path);

// ---------------------------------------------------------------------------
// Replay log: per-epoch (gradient, delta) tensors for every linear node.
// ---------------------------------------------------------------------------
void save_replay(const ReplayLog& log, const std::string& path);
ReplayLog load_replay(const std::string& path);

}  // namespace teeshield
