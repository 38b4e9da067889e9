#include "tpsqli/report.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>

#include "tpsqli/errors.hpp"

namespace tpsqli {

std::string_view remediation_note(Technique t) {
    switch (t) {
        case Technique::BooleanBlind:
        case Technique::TimeBlind:
            return "Use parameterized queries / prepared statements so injected "
                   "conditions are treated as data, and validate input types "
                   "server-side.";
        case Technique::ErrorBased:
            return "Use parameterized queries, disable verbose database error "
                   "output in production, and return generic error pages.";
        case Technique::UnionBased:
            return "Use parameterized queries, enforce strict column/type "
                   "checks, and avoid building SELECT lists from user input.";
        case Technique::StackBased:
            return "Use parameterized queries and a database account without "
                   "multi-statement permissions; disable statement stacking in "
                   "the driver where possible.";
        case Technique::InlineQuery:
            return "Use parameterized queries and reject subquery syntax in "
                   "plain value fields via allow-list validation.";
    }
    return "";
}

Report build_report(const std::string& target, const std::string& scan_time,
                    const std::vector<RoundResult>& point_results) {
    Report report;
    report.target = target;
    report.scan_time = scan_time;

    // The target-level weight table averages the per-point vectors so a
    // single table summarizes multi-parameter targets.
    std::map<Technique, double> sums;
    for (Technique t : kDefaultOrder) sums[t] = 0.0;

    for (const RoundResult& result : point_results) {
        for (const FoundVulnerability& v : result.vulnerabilities) {
            std::string evidence;
            for (const ExecutedTrial& trial : result.trials) {
                if (trial.record.payload_id == v.payload_id &&
                    trial.record.outcome == Outcome::Exploited) {
                    evidence = trial.record.evidence;
                    break;
                }
            }
            report.vulnerabilities.push_back({v.point, v.technique, v.payload_id, evidence});
        }
        for (Technique t : kDefaultOrder) {
            sums[t] += result.updated_profile.weights.at(t);
        }
        report.trace.insert(report.trace.end(), result.trials.begin(), result.trials.end());
    }

    report.weights = WeightVector::zeros();
    if (!point_results.empty()) {
        for (Technique t : kDefaultOrder) {
            report.weights.weights[t] = sums[t] / static_cast<double>(point_results.size());
        }
    }
    return report;
}

void write_report_text(std::ostream& out, const Report& report) {
    out << "tpsqli scan report\n";
    out << "==================\n";
    out << "target:    " << report.target << "\n";
    out << "scan time: " << report.scan_time << "\n";
    out << "findings:  " << report.vulnerabilities.size() << "\n\n";

    if (report.vulnerabilities.empty()) {
        out << "No SQL injection vulnerabilities were detected.\n";
    } else {
        out << "Vulnerabilities\n---------------\n";
        for (const ReportVulnerability& v : report.vulnerabilities) {
            out << "- " << v.point << "\n"
                << "  technique: " << technique_name(v.technique) << " ("
                << technique_letter(v.technique) << ")\n"
                << "  payload:   " << v.payload_id << "\n"
                << "  evidence:  " << v.evidence << "\n";
        }
        out << "\n";
    }

    out << "Technique weights\n-----------------\n";
    out << std::fixed << std::setprecision(2);
    for (Technique t : kDefaultOrder) {
        out << "  " << technique_letter(t) << "  " << std::setw(6) << report.weights.at(t) << "  "
            << technique_name(t) << "\n";
    }
    const auto order = report.weights.descending_order();
    out << "  suggested next-round order: " << order_letters(order) << "\n\n";
    out.unsetf(std::ios::fixed);

    std::map<Technique, bool> affected;
    for (const ReportVulnerability& v : report.vulnerabilities) affected[v.technique] = true;
    if (!affected.empty()) {
        out << "Recommended solutions\n---------------------\n";
        for (const auto& [t, flag] : affected) {
            (void)flag;
            out << "- " << technique_name(t) << ": " << remediation_note(t) << "\n";
        }
    }
}

void write_report_csv(std::ostream& out, const Report& report) {
    out << "point,technique,payload_id,evidence\n";
    for (const ReportVulnerability& v : report.vulnerabilities) {
        std::string evidence = v.evidence;
        for (char& c : evidence) {
            if (c == ',' || c == '\n') c = ' ';
        }
        out << v.point << ',' << technique_letter(v.technique) << ',' << v.payload_id << ','
            << evidence << '\n';
    }
}

void write_report_files(const std::string& dir, const Report& report) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    const auto open = [&](const std::string& name) {
        std::ofstream out(fs::path(dir) / name, std::ios::trunc);
        if (!out) throw ValidationError("cannot write report file '" + name + "' in " + dir);
        return out;
    };

    {
        auto out = open("report.txt");
        write_report_text(out, report);
    }
    {
        auto out = open("vulnerabilities.csv");
        write_report_csv(out, report);
    }
    {
        auto out = open("trace.csv");
        write_trace_csv(out, report.trace);
    }
    {
        auto out = open("coverage.csv");
        write_curve_csv(out, report.target, "prioritized", 1, coverage_curve(report.trace));
    }
}

}  // namespace tpsqli
