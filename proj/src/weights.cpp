#include "tpsqli/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "tpsqli/errors.hpp"

namespace tpsqli {

double WeightVector::at(Technique t) const {
    auto it = weights.find(t);
    if (it == weights.end()) {
        throw ValidationError(std::string("weight vector has no entry for technique ") +
                              technique_letter(t));
    }
    return it->second;
}

double WeightVector::sum() const {
    double total = 0.0;
    for (const auto& [t, w] : weights) {
        (void)t;
        total += w;
    }
    return total;
}

bool WeightVector::all_zero() const {
    return std::all_of(weights.begin(), weights.end(),
                       [](const auto& kv) { return kv.second == 0.0; });
}

std::vector<Technique> WeightVector::descending_order() const {
    std::vector<Technique> order;
    order.reserve(weights.size());
    for (const auto& [t, w] : weights) {
        (void)w;
        order.push_back(t);
    }
    std::stable_sort(order.begin(), order.end(), [this](Technique a, Technique b) {
        const double wa = weights.at(a);
        const double wb = weights.at(b);
        if (wa != wb) return wa > wb;
        return technique_index(a) < technique_index(b);
    });
    return order;
}

WeightVector WeightVector::zeros() {
    WeightVector v;
    for (Technique t : kDefaultOrder) v.weights[t] = 0.0;
    return v;
}

WeightVector compute_weights(const std::vector<TechniqueOutcome>& outcomes, int technique_count) {
    if (technique_count <= 0) {
        throw ValidationError("technique_count must be positive");
    }
    if (outcomes.size() != static_cast<std::size_t>(technique_count)) {
        throw ValidationError("expected exactly one outcome per technique (" +
                              std::to_string(technique_count) + "), got " +
                              std::to_string(outcomes.size()));
    }

    std::set<Technique> seen;
    for (const TechniqueOutcome& o : outcomes) {
        if (!seen.insert(o.technique).second) {
            throw ValidationError(std::string("duplicate outcome for technique ") +
                                  technique_letter(o.technique));
        }
        if (o.exploit_seconds < 0.0) {
            throw ValidationError(std::string("negative exploit time for technique ") +
                                  technique_letter(o.technique));
        }
        if (o.succeeded && o.exploit_seconds == 0.0) {
            throw ValidationError(std::string("technique ") + technique_letter(o.technique) +
                                  " succeeded with zero exploit time");
        }
    }

    double reciprocal_sum = 0.0;
    for (const TechniqueOutcome& o : outcomes) {
        if (o.succeeded) reciprocal_sum += 1.0 / o.exploit_seconds;
    }

    WeightVector result;
    for (const TechniqueOutcome& o : outcomes) result.weights[o.technique] = 0.0;
    if (reciprocal_sum == 0.0) {
        return result;  // nothing succeeded; every technique scores 0
    }

    const double n = static_cast<double>(technique_count);
    for (const TechniqueOutcome& o : outcomes) {
        const double failure_score = 0.0;
        if (o.succeeded) {
            const double success_score = (1.0 / o.exploit_seconds) * n * (1.0 / reciprocal_sum);
            result.weights[o.technique] = std::max(success_score, failure_score);
        } else {
            result.weights[o.technique] = failure_score;
        }
    }
    return result;
}

std::vector<TechniqueOutcome> aggregate_rounds(
    const std::vector<std::vector<TechniqueOutcome>>& rounds) {
    if (rounds.empty()) {
        throw ValidationError("aggregate_rounds: empty rounds list");
    }

    // Technique set and order come from the first round; all rounds must agree.
    std::vector<Technique> order;
    std::set<Technique> domain;
    for (const TechniqueOutcome& o : rounds.front()) {
        if (!domain.insert(o.technique).second) {
            throw ValidationError(std::string("aggregate_rounds: duplicate technique ") +
                                  technique_letter(o.technique) + " in round 1");
        }
        order.push_back(o.technique);
    }

    std::map<Technique, double> total_seconds;
    std::map<Technique, bool> any_success;
    for (Technique t : order) {
        total_seconds[t] = 0.0;
        any_success[t] = false;
    }

    for (std::size_t r = 0; r < rounds.size(); ++r) {
        std::set<Technique> seen;
        for (const TechniqueOutcome& o : rounds[r]) {
            if (!domain.count(o.technique) || !seen.insert(o.technique).second) {
                throw ValidationError("aggregate_rounds: round " + std::to_string(r + 1) +
                                      " does not cover the same technique set as round 1");
            }
            total_seconds[o.technique] += o.exploit_seconds;
            if (o.succeeded) any_success[o.technique] = true;
        }
        if (seen.size() != domain.size()) {
            throw ValidationError("aggregate_rounds: round " + std::to_string(r + 1) +
                                  " is missing techniques");
        }
    }

    std::vector<TechniqueOutcome> out;
    out.reserve(order.size());
    for (Technique t : order) {
        out.push_back({t, any_success[t], total_seconds[t] / static_cast<double>(rounds.size())});
    }
    return out;
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

std::vector<std::vector<TechniqueOutcome>> read_round_records(std::istream& in) {
    std::map<int, std::vector<TechniqueOutcome>> by_round;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty()) continue;
        if (line_no == 1 && text.rfind("round", 0) == 0) continue;  // header

        std::stringstream row(text);
        std::string round_s, tech_s, succ_s, secs_s;
        if (!std::getline(row, round_s, ',') || !std::getline(row, tech_s, ',') ||
            !std::getline(row, succ_s, ',') || !std::getline(row, secs_s, ',')) {
            throw ParseError("round records: line " + std::to_string(line_no) +
                             " needs 4 comma-separated fields");
        }
        try {
            TechniqueOutcome o;
            const std::string letter = trim(tech_s);
            if (letter.size() != 1) throw ValidationError("technique must be one letter");
            o.technique = technique_from_letter(letter[0]);
            const std::string succ = trim(succ_s);
            if (succ == "1" || succ == "true") {
                o.succeeded = true;
            } else if (succ == "0" || succ == "false") {
                o.succeeded = false;
            } else {
                throw ValidationError("succeeded must be 0/1/true/false");
            }
            o.exploit_seconds = std::stod(trim(secs_s));
            by_round[std::stoi(trim(round_s))].push_back(o);
        } catch (const std::exception& e) {
            throw ParseError("round records: line " + std::to_string(line_no) + ": " + e.what());
        }
    }

    std::vector<std::vector<TechniqueOutcome>> rounds;
    rounds.reserve(by_round.size());
    for (auto& [idx, outcomes] : by_round) {
        (void)idx;
        rounds.push_back(std::move(outcomes));
    }
    return rounds;
}

std::vector<std::vector<TechniqueOutcome>> read_round_records_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("round records file '" + path + "' is not readable");
    return read_round_records(in);
}

void write_round_records(std::ostream& out,
                         const std::vector<std::vector<TechniqueOutcome>>& rounds) {
    out << "round,technique,succeeded,seconds\n";
    for (std::size_t r = 0; r < rounds.size(); ++r) {
        for (const TechniqueOutcome& o : rounds[r]) {
            out << (r + 1) << ',' << technique_letter(o.technique) << ',' << (o.succeeded ? 1 : 0)
                << ',' << o.exploit_seconds << '\n';
        }
    }
}

}  // namespace tpsqli
