#include "tpsqli/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "tpsqli/errors.hpp"

namespace tpsqli {

EvaluationSummary summarize(const std::string& target_id, const std::string& method,
                            const std::vector<double>& last_vuln_seconds) {
    if (last_vuln_seconds.empty()) {
        throw ValidationError("summarize: no runs");
    }
    EvaluationSummary s;
    s.target_id = target_id;
    s.method = method;
    s.runs = static_cast<int>(last_vuln_seconds.size());
    s.t_max = *std::max_element(last_vuln_seconds.begin(), last_vuln_seconds.end());
    s.t_min = *std::min_element(last_vuln_seconds.begin(), last_vuln_seconds.end());
    s.t_mean = std::accumulate(last_vuln_seconds.begin(), last_vuln_seconds.end(), 0.0) /
               static_cast<double>(s.runs);
    if (s.runs >= 2) {
        double sq = 0.0;
        for (double v : last_vuln_seconds) sq += (v - s.t_mean) * (v - s.t_mean);
        s.t_std = std::sqrt(sq / static_cast<double>(s.runs - 1));
    }
    return s;
}

double z_score(const EvaluationSummary& a, const EvaluationSummary& b) {
    if (a.target_id != b.target_id) {
        throw ValidationError("z_score: summaries are for different targets");
    }
    if (!std::isfinite(a.t_std) || !std::isfinite(b.t_std)) {
        throw ValidationError("z_score: non-finite standard deviation");
    }
    const double denom = std::sqrt(a.t_std * a.t_std + b.t_std * b.t_std);
    if (denom == 0.0) {
        throw std::domain_error("z_score: both standard deviations are zero");
    }
    return (a.t_mean - b.t_mean) / denom;
}

double fpm(int executed, int false_positives) {
    if (executed < 1) throw ValidationError("fpm: executed must be >= 1");
    if (false_positives < 0) throw ValidationError("fpm: negative false positive count");
    if (executed < false_positives) {
        throw ValidationError("fpm: more false positives than executed payloads");
    }
    if (false_positives == 0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(executed) / static_cast<double>(false_positives);
}

std::optional<double> improved_rate(double fpm_new, double fpm_base) {
    if (!std::isfinite(fpm_base) || fpm_base <= 0.0) {
        throw ValidationError("improved_rate: baseline FPM must be positive and finite");
    }
    if (!std::isfinite(fpm_new)) return std::nullopt;  // improvement unbounded
    return (fpm_new - fpm_base) / fpm_base * 100.0;
}

std::optional<FalsePositiveStats> false_positive_stats(const std::vector<ExecutedTrial>& trials) {
    int last_exploit = -1;
    int exploits = 0;
    for (std::size_t i = 0; i < trials.size(); ++i) {
        if (trials[i].record.outcome == Outcome::Exploited) {
            last_exploit = static_cast<int>(i);
            ++exploits;
        }
    }
    if (last_exploit < 0) return std::nullopt;

    FalsePositiveStats stats;
    stats.executed = last_exploit + 1;  // scan effectively halts at the last hit
    stats.valid = exploits;
    stats.false_positives = stats.executed - stats.valid;
    stats.fpm = fpm(stats.executed, stats.false_positives);
    return stats;
}

std::vector<CurvePoint> coverage_curve(const std::vector<ExecutedTrial>& trials) {
    std::vector<CurvePoint> curve;
    if (trials.empty()) return curve;
    const double start = trials.front().record.start_time;
    int found = 0;
    for (const ExecutedTrial& t : trials) {
        if (t.record.outcome != Outcome::Exploited) continue;
        ++found;
        curve.push_back({t.record.end_time - start, found});
    }
    return curve;
}

std::optional<double> last_vulnerability_seconds(const std::vector<ExecutedTrial>& trials) {
    const auto curve = coverage_curve(trials);
    if (curve.empty()) return std::nullopt;
    return curve.back().seconds;
}

TimeDataResult collect_time_data(const PointInjector& injector,
                                 const std::vector<InjectionPoint>& points,
                                 const PayloadCorpus& corpus, int rounds) {
    if (rounds < 1) throw ValidationError("collect_time_data: rounds must be >= 1");
    if (points.empty()) throw ValidationError("collect_time_data: no injection points");

    TimeDataResult result;
    for (int round = 1; round <= rounds; ++round) {
        std::vector<TechniqueOutcome> outcomes;
        for (Technique t : kDefaultOrder) {
            TechniqueOutcome outcome{t, false, 0.0};
            bool transport_failed = false;
            for (const InjectionPoint& point : points) {
                for (const Payload& payload : payloads_for(corpus, t)) {
                    const TrialRecord rec = injector(point, payload);
                    outcome.exploit_seconds += rec.duration();
                    if (rec.outcome == Outcome::Exploited) outcome.succeeded = true;
                    if (rec.outcome == Outcome::TransportError) transport_failed = true;
                }
            }
            if (transport_failed) {
                outcome.succeeded = false;
                result.warnings.push_back("round " + std::to_string(round) + ": technique " +
                                          std::string(1, technique_letter(t)) +
                                          " had transport errors and is marked failed");
            }
            outcomes.push_back(outcome);
        }
        result.rounds.push_back(std::move(outcomes));
    }
    return result;
}

void write_summary_csv(std::ostream& out, const std::vector<EvaluationSummary>& summaries,
                       const std::vector<std::tuple<std::string, std::string, int, double>>&
                           per_run_last_vuln) {
    out << "target,method,run,metric,value\n";
    for (const auto& [target, method, run, seconds] : per_run_last_vuln) {
        out << target << ',' << method << ',' << run << ",t_last_vuln," << seconds << '\n';
    }
    for (const EvaluationSummary& s : summaries) {
        out << s.target_id << ',' << s.method << ",-,t_max," << s.t_max << '\n';
        out << s.target_id << ',' << s.method << ",-,t_min," << s.t_min << '\n';
        out << s.target_id << ',' << s.method << ",-,t_mean," << s.t_mean << '\n';
        out << s.target_id << ',' << s.method << ",-,t_std," << s.t_std << '\n';
    }
}

void write_fpm_csv(std::ostream& out, const std::string& target,
                   const FalsePositiveStats& baseline, const FalsePositiveStats& prioritized) {
    out << "target,method,run,metric,value\n";
    const auto row = [&](const std::string& method, const FalsePositiveStats& s) {
        out << target << ',' << method << ",-,executed," << s.executed << '\n';
        out << target << ',' << method << ",-,valid," << s.valid << '\n';
        out << target << ',' << method << ",-,false_positives," << s.false_positives << '\n';
        out << target << ',' << method << ",-,fpm,";
        if (std::isfinite(s.fpm)) {
            out << s.fpm;
        } else {
            out << "no-false-positives";
        }
        out << '\n';
    };
    row("baseline", baseline);
    row("prioritized", prioritized);

    out << target << ",prioritized,-,ir,";
    const auto ir = improved_rate(prioritized.fpm, baseline.fpm);
    if (ir) {
        out << *ir;
    } else {
        out << "unbounded";
    }
    out << '\n';
}

void write_curve_csv(std::ostream& out, const std::string& target, const std::string& method,
                     int run, const std::vector<CurvePoint>& curve) {
    out << "target,method,run,elapsed_seconds,vulnerabilities\n";
    for (const CurvePoint& p : curve) {
        out << target << ',' << method << ',' << run << ',' << p.seconds << ','
            << p.vulnerabilities << '\n';
    }
}

}  // namespace tpsqli
