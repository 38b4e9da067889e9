#include "tpsqli/scan.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tpsqli/errors.hpp"
#include "tpsqli/metrics.hpp"
#include "tpsqli/url.hpp"

namespace tpsqli {
namespace {

std::string wall_time_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    return out;
}

}  // namespace

bool is_loopback_host(const std::string& url_text) {
    const auto url = Url::parse(url_text);
    if (!url) return false;
    const std::string& h = url->host;
    return h == "localhost" || h == "::1" || h.rfind("127.", 0) == 0;
}

ScanOutcome scan_target(const ScanOptions& options) {
    if (options.url.empty()) throw ValidationError("scan: --url is required");
    if (!is_loopback_host(options.url) && !options.own_target_ack) {
        throw ValidationError(
            "scan: refusing to scan a non-loopback host without --i-own-this-target");
    }

    const PayloadCorpus corpus = load_corpus(options.corpus_source);

    CrawlConfig crawl_config;
    crawl_config.seed_url = options.url;
    crawl_config.max_depth = options.depth;
    crawl_config.request_timeout = options.timeout;
    crawl_config.politeness_delay = options.politeness;
    crawl_config.user_agent = options.user_agent;
    HttpProbe probe(crawl_config);

    const std::string feedback_path =
        options.feedback_path.empty() ? default_feedback_path() : options.feedback_path;
    FeedbackStore store = FeedbackStore::load(feedback_path);

    ScanOutcome outcome;
    const std::string scan_time = wall_time_now();

    const std::vector<InjectionPoint> points = probe.crawl();
    for (const InjectionPoint& point : points) {
        const std::string point_id = point.id();
        RoundResult result =
            run_round(point_id, corpus, store.profile_for(point_id), probe.injector_for(point));
        store.put_profile(result.updated_profile);
        store.append_history(point_id, result, scan_time);
        outcome.warnings.insert(outcome.warnings.end(), result.warnings.begin(),
                                result.warnings.end());
        outcome.point_results.push_back(std::move(result));
    }
    outcome.warnings.insert(outcome.warnings.end(), probe.warnings().begin(),
                            probe.warnings().end());

    store.save(feedback_path);

    outcome.report = build_report(options.url, scan_time, outcome.point_results);
    if (!options.report_dir.empty()) {
        write_report_files(options.report_dir, outcome.report);
    }
    outcome.exit_code = outcome.report.vulnerabilities.empty() ? kExitClean : kExitFindings;
    return outcome;
}

EvalOutcome eval_target(const EvalOptions& options) {
    if (options.url.empty()) throw ValidationError("eval: --url is required");
    if (!is_loopback_host(options.url) && !options.own_target_ack) {
        throw ValidationError(
            "eval: refusing to test a non-loopback host without --i-own-this-target");
    }
    if (options.runs < 2) throw ValidationError("eval: --runs must be >= 2");

    const PayloadCorpus corpus = load_corpus(options.corpus_source);
    const std::vector<Technique> baseline_order = order_from_letters(options.baseline_order);

    CrawlConfig crawl_config;
    crawl_config.seed_url = options.url;
    crawl_config.request_timeout = options.timeout;
    HttpProbe probe(crawl_config);
    const std::vector<InjectionPoint> points = probe.crawl();
    if (points.empty()) throw ValidationError("eval: no injection points found");

    // Per-technique time data, the raw material for the weight table.
    const PointInjector point_injector = [&](const InjectionPoint& point, const Payload& payload) {
        return probe.execute_payload(point, payload);
    };
    const TimeDataResult time_data =
        collect_time_data(point_injector, points, corpus, options.runs);
    const std::vector<TechniqueOutcome> aggregated = aggregate_rounds(time_data.rounds);
    const WeightVector weight_table =
        compute_weights(aggregated, static_cast<int>(kTechniqueCount));

    // Whole-target scans concatenate point traces in crawl order.
    const auto scan_with = [&](const std::optional<std::map<std::string, TargetProfile>>& profiles,
                               bool fixed) {
        std::vector<ExecutedTrial> trace;
        std::map<std::string, TargetProfile> updated;
        for (const InjectionPoint& point : points) {
            const std::string point_id = point.id();
            RoundResult result;
            if (fixed) {
                result = run_fixed_order(point_id, corpus, baseline_order,
                                         probe.injector_for(point));
            } else {
                std::optional<TargetProfile> prior;
                if (profiles) {
                    auto it = profiles->find(point_id);
                    if (it != profiles->end()) prior = it->second;
                }
                result = run_round(point_id, corpus, prior, probe.injector_for(point));
            }
            trace.insert(trace.end(), result.trials.begin(), result.trials.end());
            updated[point_id] = result.updated_profile;
        }
        return std::make_pair(trace, updated);
    };

    std::vector<double> baseline_times;
    std::vector<ExecutedTrial> baseline_trace_run1;
    for (int run = 1; run <= options.runs; ++run) {
        auto [trace, updated] = scan_with(std::nullopt, /*fixed=*/true);
        (void)updated;
        const auto last = last_vulnerability_seconds(trace);
        if (!last) throw ValidationError("eval: baseline scan found no vulnerabilities");
        baseline_times.push_back(*last);
        if (run == 1) baseline_trace_run1 = std::move(trace);
    }

    // One unmeasured learning round seeds the prioritized profiles.
    auto [learn_trace, profiles] = scan_with(std::nullopt, /*fixed=*/false);
    (void)learn_trace;

    std::vector<double> prioritized_times;
    std::vector<ExecutedTrial> prioritized_trace_run1;
    for (int run = 1; run <= options.runs; ++run) {
        auto [trace, updated] = scan_with(profiles, /*fixed=*/false);
        profiles = std::move(updated);
        const auto last = last_vulnerability_seconds(trace);
        if (!last) throw ValidationError("eval: prioritized scan found no vulnerabilities");
        prioritized_times.push_back(*last);
        if (run == 1) prioritized_trace_run1 = std::move(trace);
    }

    EvalOutcome outcome;
    outcome.baseline = summarize(options.url, "baseline", baseline_times);
    outcome.prioritized = summarize(options.url, "prioritized", prioritized_times);
    try {
        outcome.z = z_score(outcome.prioritized, outcome.baseline);
    } catch (const std::domain_error&) {
        outcome.z.reset();  // both stds zero: identical deterministic timing
    }

    const auto base_fp = false_positive_stats(baseline_trace_run1);
    const auto prio_fp = false_positive_stats(prioritized_trace_run1);
    if (!base_fp || !prio_fp) throw ValidationError("eval: no exploited trials to account");
    outcome.baseline_fp = *base_fp;
    outcome.prioritized_fp = *prio_fp;
    outcome.ir = improved_rate(prio_fp->fpm, base_fp->fpm);
    outcome.baseline_curve = coverage_curve(baseline_trace_run1);
    outcome.prioritized_curve = coverage_curve(prioritized_trace_run1);

    if (!options.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(options.out_dir);
        const fs::path dir(options.out_dir);
        {
            auto out = open_out(dir / "round_records.csv");
            write_round_records(out, time_data.rounds);
        }
        {
            auto out = open_out(dir / "weights.csv");
            out << "target,method,run,metric,value\n";
            for (Technique t : kDefaultOrder) {
                out << options.url << ",prioritized,-,weight_" << technique_letter(t) << ','
                    << weight_table.at(t) << '\n';
            }
        }
        {
            std::vector<std::tuple<std::string, std::string, int, double>> per_run;
            for (std::size_t i = 0; i < baseline_times.size(); ++i) {
                per_run.emplace_back(options.url, "baseline", static_cast<int>(i + 1),
                                     baseline_times[i]);
            }
            for (std::size_t i = 0; i < prioritized_times.size(); ++i) {
                per_run.emplace_back(options.url, "prioritized", static_cast<int>(i + 1),
                                     prioritized_times[i]);
            }
            auto out = open_out(dir / "summary.csv");
            write_summary_csv(out, {outcome.baseline, outcome.prioritized}, per_run);
            if (outcome.z) out << options.url << ",prioritized,-,z," << *outcome.z << '\n';
        }
        {
            auto out = open_out(dir / "fpm.csv");
            write_fpm_csv(out, options.url, outcome.baseline_fp, outcome.prioritized_fp);
        }
        {
            auto out = open_out(dir / "curve_baseline.csv");
            write_curve_csv(out, options.url, "baseline", 1, outcome.baseline_curve);
        }
        {
            auto out = open_out(dir / "curve_prioritized.csv");
            write_curve_csv(out, options.url, "prioritized", 1, outcome.prioritized_curve);
        }
    }
    return outcome;
}

}  // namespace tpsqli
