#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tpsqli/technique.hpp"
#include "tpsqli/url.hpp"

namespace tpsqli {

// One injectable parameter of the simulated application and how it behaves.
// base_latency is the ordinary processing delay of its page; overheads are
// extra per-technique processing time spent only when a matching injection
// actually fires (boolean params spend it on the true-condition branch).
struct ParamBehavior {
    std::string path;
    Method method = Method::GET;
    std::string parameter;
    std::set<Technique> vulnerable;
    double base_latency = 0.0;
    std::map<Technique, double> overhead;
    std::string error_signature = "You have an error in your SQL syntax";
    bool echo_markers = true;
};

struct FormSpec {
    std::string action;
    Method method = Method::POST;
    std::vector<std::pair<std::string, std::string>> fields;
};

struct PageSpec {
    std::string path;
    std::vector<std::string> links;
    std::vector<FormSpec> forms;
};

struct Scenario {
    std::string name;
    std::vector<PageSpec> pages;
    std::vector<ParamBehavior> params;
};

// Scenario file: JSON with "name", "pages" and "params" sections. Throws
// ParseError / ValidationError (a param path must exist as a page or a form
// action).
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);

// Every declared latency (base and overhead) multiplied by scale; the
// vulnerability structure is untouched. scale must be positive.
Scenario scripted_latency(Scenario scenario, double scale);

// What an incoming parameter value looks like to the simulated database.
// Exactly one technique is recognized per value; plain values recognize none.
struct InjectionSignal {
    std::optional<Technique> technique;
    bool condition_true = false;        // BooleanBlind: injected condition value
    double delay_seconds = 0.0;         // TimeBlind / stacked WAITFOR: requested sleep
    std::vector<std::string> literals;  // quoted literals to reflect (union/inline/stacked)
};

InjectionSignal classify_injection(const std::string& value);

// Embedded HTTP server playing the scenario. Responses are a pure function of
// (request, scenario) apart from the declared latencies, which are slept
// server-side. Latency-carrying endpoints serialize their responses.
class SimServer {
public:
    explicit SimServer(Scenario scenario, double latency_scale = 1.0);
    ~SimServer();

    SimServer(const SimServer&) = delete;
    SimServer& operator=(const SimServer&) = delete;

    // Binds to the port (0 picks a free one) and serves in a background
    // thread. Throws FetchError when the port cannot be bound.
    void start(int port = 0);
    void stop();

    int port() const;
    std::string base_url() const;  // http://127.0.0.1:<port>
    const Scenario& scenario() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace tpsqli
