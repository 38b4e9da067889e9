#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tpsqli/technique.hpp"

namespace tpsqli {

// One technique's result against one target: whether it ever exploited the
// target and how many seconds it spent until it first did (for failures the
// time is bookkeeping only and never contributes to a weight).
struct TechniqueOutcome {
    Technique technique = Technique::BooleanBlind;
    bool succeeded = false;
    double exploit_seconds = 0.0;

    bool operator==(const TechniqueOutcome&) const = default;
};

// Per-technique weight scores for one target. Failed techniques carry weight
// exactly 0; when at least one technique succeeded the weights of the
// successes sum to the technique count, with faster exploits weighing more.
struct WeightVector {
    std::map<Technique, double> weights;

    double at(Technique t) const;
    double sum() const;
    bool all_zero() const;

    // Techniques sorted by descending weight; equal weights fall back to the
    // fixed default order.
    std::vector<Technique> descending_order() const;

    static WeightVector zeros();  // all six techniques at 0

    bool operator==(const WeightVector&) const = default;
};

// Turns one outcome per technique into the weight vector. technique_count must
// equal outcomes.size(); it is 6 throughout this tool but kept explicit so the
// formula can be exercised on smaller instances.
//
// Rules: a failed technique scores 0; a successful technique i with time S_i
// scores (1/S_i) * technique_count / sum_k(1/S_k) over the successes; the
// final score is the maximum of the two (which is the success score when the
// technique succeeded and 0 otherwise). All failures -> all zeros.
//
// Throws ValidationError on duplicate/missing techniques, on a success with
// nonpositive time, or on any negative time.
WeightVector compute_weights(const std::vector<TechniqueOutcome>& outcomes, int technique_count);

// Collapses several rounds into one outcome list per technique: the time is
// the arithmetic mean over all rounds (successful or not) and the technique
// counts as succeeded when it succeeded in at least one round.
//
// Every round must cover the same technique set exactly once per technique.
// Throws ValidationError on an empty rounds list or inconsistent coverage.
std::vector<TechniqueOutcome> aggregate_rounds(
    const std::vector<std::vector<TechniqueOutcome>>& rounds);

// Round-record file: CSV with header "round,technique,succeeded,seconds", one
// row per (round, technique). Rounds are returned in ascending round order.
std::vector<std::vector<TechniqueOutcome>> read_round_records(std::istream& in);
std::vector<std::vector<TechniqueOutcome>> read_round_records_file(const std::string& path);
void write_round_records(std::ostream& out,
                         const std::vector<std::vector<TechniqueOutcome>>& rounds);

}  // namespace tpsqli
