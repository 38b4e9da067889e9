#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tpsqli/corpus.hpp"
#include "tpsqli/technique.hpp"
#include "tpsqli/weights.hpp"

namespace tpsqli {

// Learned state for one injection point, persisted between rounds.
//
// weights   : the learned per-technique weight vector (round output).
// scores    : working copy used for payload selection; decremented on failures
//             during a round and allowed to go negative.
// exploit_seconds / exploited : per-technique time bookkeeping of the last
//             round - seconds accumulated until the technique first exploited,
//             and whether it did.
// payload_risks : persistent per-payload risk levels in {1,2,3}.
struct TargetProfile {
    std::string target_id;
    WeightVector weights;
    std::map<Technique, double> scores;
    std::map<Technique, double> exploit_seconds;
    std::map<Technique, bool> exploited;
    std::map<std::string, int> payload_risks;

    static TargetProfile fresh(std::string target_id);

    bool operator==(const TargetProfile&) const = default;
};

enum class Outcome { Exploited, NotExploited, TransportError };

std::string_view outcome_name(Outcome o);

// One payload execution. Timestamps are monotonic seconds; the injector that
// produced the record is the time authority, which keeps rounds replayable
// with scripted injectors.
struct TrialRecord {
    std::string payload_id;
    Technique technique = Technique::BooleanBlind;
    double start_time = 0.0;
    double end_time = 0.0;
    Outcome outcome = Outcome::NotExploited;
    std::string evidence;  // non-empty whenever outcome == Exploited

    double duration() const { return end_time - start_time; }
};

// A trial plus the selection state around it, enough to replay the round
// decision by decision.
struct ExecutedTrial {
    TrialRecord record;
    double score_before = 0.0;  // selected technique's score at selection time
    int risk_before = 2;
    int risk_after = 2;
};

struct FoundVulnerability {
    std::string point;  // injection point id
    std::string payload_id;
    Technique technique = Technique::BooleanBlind;
};

struct RoundResult {
    std::vector<ExecutedTrial> trials;  // every corpus payload exactly once
    TargetProfile updated_profile;
    std::vector<Technique> order_trace;  // techniques in first-execution order
    std::vector<FoundVulnerability> vulnerabilities;
    std::vector<std::string> warnings;
};

// Executes one payload against one injection point and returns the record.
using Injector = std::function<TrialRecord(const Payload&)>;

// Starting selection scores: a copy of the profile's weight vector when a
// profile exists, otherwise 1.0 everywhere (ties then resolve to the fixed
// default order, i.e. the cold start runs BEUSTQ).
std::map<Technique, double> initial_scores(const std::optional<TargetProfile>& prior);

// Decrements the technique's working score by exactly 1, leaving every other
// field untouched. Scores may go negative; the relative ordering is what
// drives selection.
TargetProfile decrement_score(TargetProfile profile, Technique technique);

// Runs one full prioritized round against one injection point:
//
//   Phase 1  re-tests unused risk-3 payloads, highest-scoring technique first;
//            a failure demotes the payload to risk 1, a success keeps risk 3.
//   Phase 2  repeatedly executes the first unused payload of the
//            highest-scoring technique (ties: default order, then corpus
//            order). Failures accumulate the trial duration into the
//            technique's exploit time while it has not exploited yet and
//            always cost the technique one score point. Successes promote the
//            payload to risk 3 and freeze the technique's exploit time.
//
// Afterwards the weight vector is recomputed from the accumulated times and
// exploit flags. Transport errors count as failures; when every trial failed
// at the transport level the result carries a warning and all-zero weights.
RoundResult run_round(const std::string& point_id, const PayloadCorpus& corpus,
                      const std::optional<TargetProfile>& prior, const Injector& injector);

// Baseline scanner: executes technique blocks in the given fixed order with no
// re-testing, scoring or risk dynamics. Produces the same bookkeeping so the
// two methods can be compared trial for trial.
RoundResult run_fixed_order(const std::string& point_id, const PayloadCorpus& corpus,
                            const std::vector<Technique>& order, const Injector& injector);

// Order-trace log, one line per trial:
// seq,technique,payload_id,risk_before,risk_after,score_before,duration_ms,outcome
void write_trace_csv(std::ostream& out, const std::vector<ExecutedTrial>& trials);

}  // namespace tpsqli
