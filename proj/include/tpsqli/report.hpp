#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tpsqli/executor.hpp"
#include "tpsqli/metrics.hpp"

namespace tpsqli {

struct ReportVulnerability {
    std::string point;
    Technique technique = Technique::BooleanBlind;
    std::string payload_id;
    std::string evidence;
};

// End-of-scan report for one target: findings, the learned technique weights,
// static remediation notes and the machine-readable trace/curve blocks.
struct Report {
    std::string target;
    std::string scan_time;  // wall clock, ISO-8601
    std::vector<ReportVulnerability> vulnerabilities;
    WeightVector weights;  // aggregated over the target's injection points
    std::vector<ExecutedTrial> trace;  // concatenated point traces, scan order
};

std::string_view remediation_note(Technique t);

Report build_report(const std::string& target, const std::string& scan_time,
                    const std::vector<RoundResult>& point_results);

void write_report_text(std::ostream& out, const Report& report);

// vulnerabilities.csv: point,technique,payload_id,evidence
void write_report_csv(std::ostream& out, const Report& report);

// Writes report.txt, vulnerabilities.csv, trace.csv and coverage.csv into dir.
void write_report_files(const std::string& dir, const Report& report);

}  // namespace tpsqli
