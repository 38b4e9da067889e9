#include "tpsqli/executor.hpp"

#include <algorithm>
#include <ostream>

#include "tpsqli/errors.hpp"

namespace tpsqli {

TargetProfile TargetProfile::fresh(std::string target_id) {
    TargetProfile p;
    p.target_id = std::move(target_id);
    p.weights = WeightVector::zeros();
    for (Technique t : kDefaultOrder) {
        p.scores[t] = 0.0;
        p.exploit_seconds[t] = 0.0;
        p.exploited[t] = false;
    }
    return p;
}

std::string_view outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Exploited: return "Exploited";
        case Outcome::NotExploited: return "NotExploited";
        case Outcome::TransportError: return "TransportError";
    }
    return "?";
}

std::map<Technique, double> initial_scores(const std::optional<TargetProfile>& prior) {
    std::map<Technique, double> scores;
    for (Technique t : kDefaultOrder) {
        scores[t] = prior ? prior->weights.at(t) : 1.0;
    }
    return scores;
}

TargetProfile decrement_score(TargetProfile profile, Technique technique) {
    auto it = profile.scores.find(technique);
    if (it == profile.scores.end()) {
        throw ValidationError(std::string("profile has no score for technique ") +
                              technique_letter(technique));
    }
    it->second -= 1.0;
    return profile;
}

namespace {

struct RoundState {
    const PayloadCorpus* corpus = nullptr;
    std::map<Technique, double> scores;
    std::map<Technique, double> exploit_seconds;
    std::map<Technique, bool> exploited;
    std::map<std::string, int> risks;
    std::vector<bool> used;  // parallel to corpus->payloads

    explicit RoundState(const PayloadCorpus& c, const std::optional<TargetProfile>& prior)
        : corpus(&c), scores(initial_scores(prior)), used(c.payloads.size(), false) {
        for (Technique t : kDefaultOrder) {
            exploit_seconds[t] = 0.0;
            exploited[t] = false;
        }
        for (const Payload& p : c.payloads) {
            risks[p.id] = p.risk;
            if (prior) {
                auto it = prior->payload_risks.find(p.id);
                if (it != prior->payload_risks.end()) risks[p.id] = it->second;
            }
        }
    }

    // First unused payload of the technique, in corpus order. want_risk3
    // restricts the search to risk-3 payloads (phase 1). Returns corpus index
    // or npos.
    std::size_t first_unused(Technique t, bool want_risk3) const {
        for (std::size_t i = 0; i < corpus->payloads.size(); ++i) {
            const Payload& p = corpus->payloads[i];
            if (used[i] || p.technique != t) continue;
            if (want_risk3 && risks.at(p.id) != 3) continue;
            return i;
        }
        return static_cast<std::size_t>(-1);
    }

    // Highest-scoring technique that still has a matching unused payload.
    // Equal scores resolve to the fixed default order.
    std::optional<Technique> select_technique(bool want_risk3) const {
        std::optional<Technique> best;
        for (Technique t : kDefaultOrder) {
            if (first_unused(t, want_risk3) == static_cast<std::size_t>(-1)) continue;
            if (!best || scores.at(t) > scores.at(*best)) best = t;
        }
        return best;
    }
};

TrialRecord run_injector(const Injector& injector, const Payload& p) {
    TrialRecord rec = injector(p);
    // Identity fields are owned by the executor, not the injector.
    rec.payload_id = p.id;
    rec.technique = p.technique;
    if (rec.end_time < rec.start_time) {
        throw ValidationError("injector returned end_time < start_time for payload '" + p.id + "'");
    }
    return rec;
}

void note_first_execution(std::vector<Technique>& order_trace, Technique t) {
    if (std::find(order_trace.begin(), order_trace.end(), t) == order_trace.end()) {
        order_trace.push_back(t);
    }
}

RoundResult finalize(const std::string& point_id, RoundState& state,
                     std::vector<ExecutedTrial> trials, std::vector<Technique> order_trace,
                     std::vector<FoundVulnerability> vulns) {
    RoundResult result;
    result.trials = std::move(trials);
    result.order_trace = std::move(order_trace);
    result.vulnerabilities = std::move(vulns);

    std::vector<TechniqueOutcome> outcomes;
    outcomes.reserve(kTechniqueCount);
    for (Technique t : kDefaultOrder) {
        outcomes.push_back({t, state.exploited.at(t), state.exploit_seconds.at(t)});
    }

    TargetProfile profile = TargetProfile::fresh(point_id);
    profile.weights = compute_weights(outcomes, static_cast<int>(kTechniqueCount));
    profile.scores = state.scores;
    profile.exploit_seconds = state.exploit_seconds;
    profile.exploited = state.exploited;
    profile.payload_risks = state.risks;
    result.updated_profile = std::move(profile);

    if (!result.trials.empty() &&
        std::all_of(result.trials.begin(), result.trials.end(), [](const ExecutedTrial& t) {
            return t.record.outcome == Outcome::TransportError;
        })) {
        result.warnings.push_back(
            "every trial failed at the transport level; weight vector reset to zero");
    }
    return result;
}

}  // namespace

RoundResult run_round(const std::string& point_id, const PayloadCorpus& corpus,
                      const std::optional<TargetProfile>& prior, const Injector& injector) {
    RoundState state(corpus, prior);
    std::vector<ExecutedTrial> trials;
    trials.reserve(corpus.payloads.size());
    std::vector<Technique> order_trace;
    std::vector<FoundVulnerability> vulns;

    // Phase 1: re-test payloads that exploited before (risk 3), highest score
    // first. A miss demotes the payload; a hit keeps it hot and freezes the
    // technique's exploit time at this trial's duration.
    while (auto t = state.select_technique(/*want_risk3=*/true)) {
        const std::size_t idx = state.first_unused(*t, /*want_risk3=*/true);
        const Payload& p = corpus.payloads[idx];
        const double score_before = state.scores.at(*t);
        const int risk_before = state.risks.at(p.id);

        TrialRecord rec = run_injector(injector, p);
        state.used[idx] = true;
        note_first_execution(order_trace, *t);

        if (rec.outcome == Outcome::Exploited) {
            if (!state.exploited.at(*t)) {
                state.exploit_seconds[*t] += rec.duration();
                state.exploited[*t] = true;
            }
            vulns.push_back({point_id, p.id, *t});
        } else {
            state.risks[p.id] = 1;
        }
        trials.push_back({rec, score_before, risk_before, state.risks.at(p.id)});
    }

    // Phase 2: run everything that is left, always the first unused payload of
    // the highest-scoring technique.
    while (auto t = state.select_technique(/*want_risk3=*/false)) {
        const std::size_t idx = state.first_unused(*t, /*want_risk3=*/false);
        const Payload& p = corpus.payloads[idx];
        const double score_before = state.scores.at(*t);
        const int risk_before = state.risks.at(p.id);

        TrialRecord rec = run_injector(injector, p);
        state.used[idx] = true;
        note_first_execution(order_trace, *t);

        if (rec.outcome == Outcome::Exploited) {
            state.risks[p.id] = 3;
            if (!state.exploited.at(*t)) {
                state.exploit_seconds[*t] += rec.duration();
                state.exploited[*t] = true;
            }
            vulns.push_back({point_id, p.id, *t});
        } else {
            // NotExploited and TransportError are both failures for scoring.
            if (!state.exploited.at(*t)) {
                state.exploit_seconds[*t] += rec.duration();
            }
            state.scores[*t] -= 1.0;
        }
        trials.push_back({rec, score_before, risk_before, state.risks.at(p.id)});
    }

    return finalize(point_id, state, std::move(trials), std::move(order_trace), std::move(vulns));
}

RoundResult run_fixed_order(const std::string& point_id, const PayloadCorpus& corpus,
                            const std::vector<Technique>& order, const Injector& injector) {
    RoundState state(corpus, std::nullopt);
    std::vector<ExecutedTrial> trials;
    trials.reserve(corpus.payloads.size());
    std::vector<Technique> order_trace;
    std::vector<FoundVulnerability> vulns;

    for (Technique t : order) {
        for (std::size_t i = 0; i < corpus.payloads.size(); ++i) {
            const Payload& p = corpus.payloads[i];
            if (state.used[i] || p.technique != t) continue;
            const int risk_before = state.risks.at(p.id);

            TrialRecord rec = run_injector(injector, p);
            state.used[i] = true;
            note_first_execution(order_trace, t);

            if (rec.outcome == Outcome::Exploited) {
                if (!state.exploited.at(t)) {
                    state.exploit_seconds[t] += rec.duration();
                    state.exploited[t] = true;
                }
                vulns.push_back({point_id, p.id, t});
            } else if (!state.exploited.at(t)) {
                state.exploit_seconds[t] += rec.duration();
            }
            trials.push_back({rec, 0.0, risk_before, state.risks.at(p.id)});
        }
    }

    return finalize(point_id, state, std::move(trials), std::move(order_trace), std::move(vulns));
}

void write_trace_csv(std::ostream& out, const std::vector<ExecutedTrial>& trials) {
    out << "seq,technique,payload_id,risk_before,risk_after,score_before,duration_ms,outcome\n";
    for (std::size_t i = 0; i < trials.size(); ++i) {
        const ExecutedTrial& t = trials[i];
        out << (i + 1) << ',' << technique_letter(t.record.technique) << ',' << t.record.payload_id
            << ',' << t.risk_before << ',' << t.risk_after << ',' << t.score_before << ','
            << t.record.duration() * 1000.0 << ',' << outcome_name(t.record.outcome) << '\n';
    }
}

}  // namespace tpsqli
