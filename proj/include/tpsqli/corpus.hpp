#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tpsqli/technique.hpp"

namespace tpsqli {

// Marker substituted with the parameter's original value when a payload is rendered.
inline constexpr std::string_view kValueMarker = "{value}";

// Technique-specific oracle parameters. Which fields are meaningful depends on
// the payload's technique; see the corpus schema notes in the README.
struct DetectionHint {
    double delay_seconds = 0.0;                 // TimeBlind; StackBased delay form
    std::vector<std::string> error_signatures;  // ErrorBased
    std::string marker;                         // UnionBased, InlineQuery, StackBased marker form
    std::string false_variant;                  // BooleanBlind false-condition injection
};

// An injectable string bound to one technique. The risk level is a persistent
// priority tag: 3 = exploited before (re-tested first), 1 = demoted, 2 = untested.
struct Payload {
    std::string id;
    Technique technique = Technique::BooleanBlind;
    std::string template_text;  // contains kValueMarker exactly once
    int risk = 2;
    DetectionHint hint;

    std::string render(std::string_view original_value) const;
    // BooleanBlind only: renders hint.false_variant.
    std::string render_false(std::string_view original_value) const;
};

struct PayloadCorpus {
    std::string version;
    std::vector<Payload> payloads;  // stable corpus order
};

// source is either a path to a corpus file or the built-in name "default".
PayloadCorpus load_corpus(const std::string& source);

// Parses and validates corpus JSON text. Throws ParseError naming the offending
// entry, or ValidationError listing uncovered techniques.
PayloadCorpus parse_corpus(const std::string& json_text);

// Schema checks shared by every load path (unique ids, risk range, marker
// count, hint rules, full technique coverage).
void validate_corpus(const PayloadCorpus& corpus);

// All payloads of one technique, in corpus order.
std::vector<Payload> payloads_for(const PayloadCorpus& corpus, Technique technique);

}  // namespace tpsqli
