#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "tpsqli/corpus.hpp"
#include "tpsqli/executor.hpp"
#include "tpsqli/http_probe.hpp"
#include "tpsqli/weights.hpp"

namespace tpsqli {

// Statistics of "seconds until the last vulnerability was exposed" over
// repeated runs of one method against one target.
struct EvaluationSummary {
    std::string target_id;
    std::string method;  // "baseline" or "prioritized"
    double t_max = 0.0;
    double t_min = 0.0;
    double t_mean = 0.0;
    double t_std = 0.0;  // sample standard deviation; 0 when runs < 2
    int runs = 0;
};

EvaluationSummary summarize(const std::string& target_id, const std::string& method,
                            const std::vector<double>& last_vuln_seconds);

// Z statistic between two summaries of the same target:
// (a.t_mean - b.t_mean) / sqrt(a.t_std^2 + b.t_std^2).
// Callers compare |Z| against the 95% critical value 1.645. Throws
// std::domain_error when both standard deviations are zero and
// ValidationError when the summaries are inconsistent.
double z_score(const EvaluationSummary& a, const EvaluationSummary& b);

inline constexpr double kZCritical95 = 1.645;

// False-positive accounting of one scan trace: trials up to and including the
// last exploited one count as executed; the non-exploiting ones among them are
// the false positives.
struct FalsePositiveStats {
    int executed = 0;         // p
    int valid = 0;            // true positives (v + 1)
    int false_positives = 0;  // p - v - 1
    double fpm = 0.0;         // +infinity when false_positives == 0
    std::optional<double> ir; // filled by comparisons, percent
};

// executed / false_positives. Zero false positives yield +infinity (the
// "no false positives" sentinel). Throws ValidationError when executed < 1 or
// executed < false_positives.
double fpm(int executed, int false_positives);

// Percentage improvement of fpm_new over fpm_base. nullopt means "improvement
// unbounded" (fpm_new is the no-false-positives sentinel). Throws
// ValidationError when fpm_base is not positive and finite.
std::optional<double> improved_rate(double fpm_new, double fpm_base);

// Stats from a trace; nullopt when the trace contains no exploited trial.
std::optional<FalsePositiveStats> false_positive_stats(const std::vector<ExecutedTrial>& trials);

// Cumulative vulnerabilities over elapsed scan seconds: one step per exploited
// trial, measured from the first trial's start.
struct CurvePoint {
    double seconds = 0.0;
    int vulnerabilities = 0;
};

std::vector<CurvePoint> coverage_curve(const std::vector<ExecutedTrial>& trials);

// Seconds from scan start to the end of the last exploited trial; nullopt when
// nothing was exploited.
std::optional<double> last_vulnerability_seconds(const std::vector<ExecutedTrial>& trials);

// Per-technique timing collection: every round runs each technique's payloads
// in isolation against every point, recording the technique's total duration
// and whether anything exploited. Rounds are independent (no state carries
// over). A transport error marks the technique failed for that round and adds
// a warning.
struct TimeDataResult {
    std::vector<std::vector<TechniqueOutcome>> rounds;
    std::vector<std::string> warnings;
};

using PointInjector = std::function<TrialRecord(const InjectionPoint&, const Payload&)>;

TimeDataResult collect_time_data(const PointInjector& injector,
                                 const std::vector<InjectionPoint>& points,
                                 const PayloadCorpus& corpus, int rounds);

// CSV exports. Fixed column orders:
//   summary:  target,method,run,metric,value
//   curve:    target,method,run,elapsed_seconds,vulnerabilities
void write_summary_csv(std::ostream& out, const std::vector<EvaluationSummary>& summaries,
                       const std::vector<std::tuple<std::string, std::string, int, double>>&
                           per_run_last_vuln);
void write_fpm_csv(std::ostream& out, const std::string& target,
                   const FalsePositiveStats& baseline, const FalsePositiveStats& prioritized);
void write_curve_csv(std::ostream& out, const std::string& target, const std::string& method,
                     int run, const std::vector<CurvePoint>& curve);

}  // namespace tpsqli
