// tpsqli - SQL injection testing engine with feedback-driven test ordering.
//
// Subcommands:
//   scan     crawl a target and probe every parameter, learning between runs
//   eval     compare the fixed-order baseline against the prioritized method
//   sim      serve a deterministic vulnerable web application from a scenario
//   weights  compute the technique weight table from a round-record CSV

#include <chrono>
#include <csignal>
#include <iomanip>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "tpsqli/errors.hpp"
#include "tpsqli/scan.hpp"
#include "tpsqli/target_sim.hpp"
#include "tpsqli/weights.hpp"

namespace {

volatile std::sig_atomic_t g_stop = 0;

void handle_signal(int) { g_stop = 1; }

int cmd_scan(const tpsqli::ScanOptions& options) {
    const tpsqli::ScanOutcome outcome = tpsqli::scan_target(options);
    for (const std::string& warning : outcome.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
    tpsqli::write_report_text(std::cout, outcome.report);
    if (!options.report_dir.empty()) {
        std::cout << "report files written to " << options.report_dir << "\n";
    }
    return outcome.exit_code;
}

int cmd_eval(const tpsqli::EvalOptions& options) {
    const tpsqli::EvalOutcome outcome = tpsqli::eval_target(options);

    std::cout << std::fixed << std::setprecision(3);
    std::cout << "method       t_max     t_min     t_mean    t_std\n";
    for (const tpsqli::EvaluationSummary* s : {&outcome.baseline, &outcome.prioritized}) {
        std::cout << std::left << std::setw(12) << s->method << std::right << std::setw(9)
                  << s->t_max << std::setw(10) << s->t_min << std::setw(10) << s->t_mean
                  << std::setw(9) << s->t_std << "\n";
    }
    if (outcome.z) {
        std::cout << "|Z| = " << std::abs(*outcome.z)
                  << (std::abs(*outcome.z) > tpsqli::kZCritical95 ? "  (significant at 95%)"
                                                                  : "  (not significant at 95%)")
                  << "\n";
    } else {
        std::cout << "|Z| undefined: both methods timed identically across runs\n";
    }

    std::cout << std::setprecision(4);
    std::cout << "FPM baseline    = " << outcome.baseline_fp.fpm << "\n";
    std::cout << "FPM prioritized = " << outcome.prioritized_fp.fpm << "\n";
    if (outcome.ir) {
        std::cout << std::setprecision(2) << "IR = " << *outcome.ir << "%\n";
    } else {
        std::cout << "IR = unbounded (prioritized run had no false positives)\n";
    }
    if (!options.out_dir.empty()) {
        std::cout << "csv exports written to " << options.out_dir << "\n";
    }
    return 0;
}

int cmd_sim(const std::string& scenario_path, int port, double latency_scale) {
    tpsqli::Scenario scenario = tpsqli::load_scenario(scenario_path);
    scenario = tpsqli::scripted_latency(std::move(scenario), latency_scale);
    tpsqli::SimServer server(std::move(scenario), 1.0);
    server.start(port);
    std::cout << "simulator '" << server.scenario().name << "' listening on " << server.base_url()
              << " (ctrl-c to stop)\n";

    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    while (!g_stop) {
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
    server.stop();
    return 0;
}

int cmd_weights(const std::string& records_path, int technique_count) {
    const auto rounds = tpsqli::read_round_records_file(records_path);
    const auto aggregated = tpsqli::aggregate_rounds(rounds);
    const auto table = tpsqli::compute_weights(aggregated, technique_count);

    std::cout << "technique,mean_seconds,succeeded,weight\n";
    std::cout << std::fixed << std::setprecision(2);
    for (const tpsqli::TechniqueOutcome& o : aggregated) {
        std::cout << tpsqli::technique_letter(o.technique) << ',' << o.exploit_seconds << ','
                  << (o.succeeded ? 1 : 0) << ',' << table.at(o.technique) << "\n";
    }
    std::cout << "suggested order: "
              << tpsqli::order_letters(table.descending_order()) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SQL injection testing engine with feedback-driven test ordering"};
    app.require_subcommand(1);

    tpsqli::ScanOptions scan_options;
    CLI::App* scan = app.add_subcommand("scan", "Scan a target for SQL injection");
    scan->add_option("--url", scan_options.url, "Seed URL to test")->required();
    scan->add_option("--depth", scan_options.depth, "Crawl depth in link hops");
    scan->add_option("--feedback", scan_options.feedback_path,
                     "Feedback store path (default: $TPSQLI_FEEDBACK or feedback.json)");
    scan->add_option("--report", scan_options.report_dir, "Directory for report files");
    scan->add_option("--corpus", scan_options.corpus_source, "Corpus file or 'default'");
    scan->add_option("--timeout", scan_options.timeout, "Request timeout in seconds");
    scan->add_option("--politeness", scan_options.politeness,
                     "Delay between requests in seconds");
    scan->add_option("--user-agent", scan_options.user_agent, "User-Agent header");
    scan->add_flag("--i-own-this-target", scan_options.own_target_ack,
                   "Confirm authorization to test a non-loopback host");

    tpsqli::EvalOptions eval_options;
    CLI::App* eval = app.add_subcommand("eval", "Benchmark baseline vs prioritized ordering");
    eval->add_option("--url", eval_options.url, "Target URL")->required();
    eval->add_option("--corpus", eval_options.corpus_source, "Corpus file or 'default'");
    eval->add_option("--runs", eval_options.runs, "Measured runs per method");
    eval->add_option("--baseline-order", eval_options.baseline_order,
                     "Fixed technique order of the baseline method");
    eval->add_option("--out", eval_options.out_dir, "Directory for CSV exports");
    eval->add_option("--timeout", eval_options.timeout, "Request timeout in seconds");
    eval->add_flag("--i-own-this-target", eval_options.own_target_ack,
                   "Confirm authorization to test a non-loopback host");

    std::string scenario_path;
    int sim_port = 8080;
    double latency_scale = 1.0;
    CLI::App* sim = app.add_subcommand("sim", "Serve a simulated vulnerable application");
    sim->add_option("--scenario", scenario_path, "Scenario file")->required();
    sim->add_option("--port", sim_port, "TCP port (0 picks a free one)");
    sim->add_option("--latency-scale", latency_scale, "Multiplier for declared latencies");

    std::string records_path;
    int technique_count = 6;
    CLI::App* weights = app.add_subcommand("weights", "Weight table from a round-record CSV");
    weights->add_option("--records", records_path, "Round-record CSV file")->required();
    weights->add_option("--technique-count", technique_count, "Number of techniques");

    try {
        app.parse(argc, argv);
        if (scan->parsed()) return cmd_scan(scan_options);
        if (eval->parsed()) return cmd_eval(eval_options);
        if (sim->parsed()) return cmd_sim(scenario_path, sim_port, latency_scale);
        if (weights->parsed()) return cmd_weights(records_path, technique_count);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return tpsqli::kExitFatal;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return tpsqli::kExitFatal;
    }
    return tpsqli::kExitFatal;
}
