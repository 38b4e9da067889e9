#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tpsqli/executor.hpp"
#include "tpsqli/feedback.hpp"
#include "tpsqli/http_probe.hpp"
#include "tpsqli/report.hpp"

namespace tpsqli {

// Exit codes shared by the library entry points and the CLI.
inline constexpr int kExitClean = 0;       // scan completed, nothing found
inline constexpr int kExitFatal = 1;       // usage or fatal error
inline constexpr int kExitFindings = 2;    // scan completed with findings

struct ScanOptions {
    std::string url;
    int depth = 1;
    std::string feedback_path;           // empty -> default_feedback_path()
    std::string report_dir;              // empty -> no files written
    std::string corpus_source = "default";
    double timeout = 10.0;
    double politeness = 0.0;
    bool own_target_ack = false;         // --i-own-this-target
    std::string user_agent = "tpsqli/0.1";
};

struct ScanOutcome {
    int exit_code = kExitClean;
    Report report;
    std::vector<RoundResult> point_results;  // scan order
    std::vector<std::string> warnings;
};

// Full scan workflow: crawl, probe every injection point with the stored
// profile, persist the updated feedback and build the report. Only loopback
// hosts may be scanned without own_target_ack. Throws on fatal errors; the
// CLI maps those to kExitFatal.
ScanOutcome scan_target(const ScanOptions& options);

bool is_loopback_host(const std::string& url);

struct EvalOptions {
    std::string url;
    std::string corpus_source = "default";
    int runs = 5;
    std::string baseline_order = "BEUSTQ";
    std::string out_dir;
    double timeout = 10.0;
    bool own_target_ack = false;
};

struct EvalOutcome {
    EvaluationSummary baseline;
    EvaluationSummary prioritized;
    std::optional<double> z;  // unset when either method found nothing
    FalsePositiveStats baseline_fp;
    FalsePositiveStats prioritized_fp;
    std::optional<double> ir;
    std::vector<CurvePoint> baseline_curve;
    std::vector<CurvePoint> prioritized_curve;
};

// Benchmark workflow mirroring the measurement procedure: per-technique time
// collection over `runs` rounds, then `runs` scans with the fixed baseline
// order and `runs` prioritized scans seeded by one unmeasured learning round.
// Writes round_records.csv, weights.csv, summary.csv, fpm.csv and the two
// coverage curve files into out_dir when set.
EvalOutcome eval_target(const EvalOptions& options);

}  // namespace tpsqli
