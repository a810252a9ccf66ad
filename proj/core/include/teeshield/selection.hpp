#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "teeshield/criticality.hpp"

namespace teeshield {

// What the selection procedure needs from one simulated stealing run.
struct MSCurve {
    double initial_loss = 0.0;
    std::vector<double> loss;  // per-epoch, length == epochs
    double final_accuracy = 0.0;
};

// Runs a stealing attack with the given tensors shielded and returns the
// loss curve and final accuracy. Provided by the attack harness.
using AttackSimulator = std::function<MSCurve(const std::set<std::string>& shielded, size_t epochs)>;

struct SelectionConfig {
    size_t m = 20;                  // early-window epochs
    size_t baseline_epochs = 100;   // no-shield / all-shield baselines
    size_t confirm_epochs = 100;    // full confirmation runs
    double tau = 0.05;              // acceptance slack
};

// One row of the procedure's audit trail, for the report.
struct SelectionStep {
    std::string action;  // "baseline", "screen", "confirm", "refine"
    size_t k = 0;
    double initial_loss = 0.0;
    double rate = 0.0;
    double accuracy = -1.0;  // -1 when not measured
    bool accepted = false;
};

struct SelectionResult {
    bool satisfiable = false;
    std::set<std::string> selected;
    double achieved_ms_accuracy = 1.0;  // confirmed accuracy of `selected`
    double best_accuracy = 1.0;         // best (lowest) seen, meaningful when unsatisfiable
    double noshield_accuracy = 0.0;
    double allshield_accuracy = 0.0;
    double threshold = 0.0;
    std::vector<SelectionStep> trail;

    size_t selected_param_count(const ModelGraph& g) const;
};

// Convergence-speed top-k selection over the report's score-descending
// ranking:
//   1. measure no-shield / all-shield baselines,
//   2. screen prefixes with m-epoch runs (initial loss and early loss-
//      reduction rate against the all-shield baseline, slack tau),
//   3. confirm accepted prefixes with a full-length run against the
//      threshold, growing k on failure,
//   4. refine by dropping the lowest-score member while the confirmation
//      still holds.
SelectionResult select_critical_tensors(const CriticalityReport& report,
                                        const AttackSimulator& simulate, double ms_threshold,
                                        const SelectionConfig& cfg);

std::string selection_result_to_json_text(const SelectionResult& r);
SelectionResult selection_result_from_json_text(const std::string& text,
                                                const std::string& origin);

}  // namespace teeshield
