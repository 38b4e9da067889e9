#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tpsqli/corpus.hpp"
#include "tpsqli/executor.hpp"
#include "tpsqli/url.hpp"

namespace tpsqli {

struct BaselineResponse {
    int status = 0;
    std::string body;
    double latency_seconds = 0.0;
};

// A (url, method, parameter) triple under test. url carries no query string;
// the parameter's normal value and the fixed sibling parameters are kept
// separately so a request can be rebuilt with any injected value.
struct InjectionPoint {
    std::string url;
    Method method = Method::GET;
    std::string parameter;
    std::string original_value;
    std::vector<std::pair<std::string, std::string>> other_params;
    BaselineResponse baseline;

    std::string id() const;  // "GET http://host:port/path#param"
};

struct CrawlConfig {
    std::string seed_url;
    int max_depth = 1;
    bool same_origin_only = true;
    double request_timeout = 10.0;   // seconds, > 0
    double politeness_delay = 0.0;   // seconds between requests to the host
    std::string user_agent = "tpsqli/0.1";

    // Detector thresholds.
    double similarity_threshold = 0.98;  // boolean "materially different" cut
    double delay_factor = 0.8;           // fraction of the hinted delay to demand
};

// Length-weighted token overlap in [0, 1]; 1.0 for identical token bags.
double body_similarity(std::string_view a, std::string_view b);

// Sequential HTTP client: discovers injection points and executes payloads
// with per-technique outcome detectors. One request in flight at a time,
// politeness delay between requests, simple in-memory cookie jar.
class HttpProbe {
public:
    explicit HttpProbe(CrawlConfig config);
    ~HttpProbe();

    HttpProbe(const HttpProbe&) = delete;
    HttpProbe& operator=(const HttpProbe&) = delete;

    // Breadth-first same-origin crawl up to max_depth link hops from the seed.
    // GET parameters come from visited page URLs, POST/GET form parameters
    // from form fields (duplicate names: last occurrence wins). Duplicate
    // (url, method, parameter) triples are dropped; a baseline is captured for
    // every point. Throws FetchError when the seed is unreachable; individual
    // page failures become warnings.
    std::vector<InjectionPoint> crawl();

    // Sends the rendered payload and classifies the response with the
    // technique's oracle. Never throws for transport problems; those come
    // back as Outcome::TransportError.
    TrialRecord execute_payload(const InjectionPoint& point, const Payload& payload);

    // run_round-compatible callback bound to one point. The probe must
    // outlive the injector.
    Injector injector_for(const InjectionPoint& point);

    // Captures status/body/latency for the point's normal request.
    BaselineResponse fetch_baseline(const InjectionPoint& point);

    const CrawlConfig& config() const;
    const std::vector<std::string>& warnings() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace tpsqli
