#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <map>
#include <set>

#include "tpsqli/corpus.hpp"
#include "tpsqli/errors.hpp"

using namespace tpsqli;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = "/tmp/tpsqli_" + name;
    std::ofstream out(path, std::ios::trunc);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("technique letters map both ways") {
    CHECK(order_letters(kDefaultOrder) == "BEUSTQ");
    std::set<char> letters;
    for (Technique t : kDefaultOrder) {
        const char c = technique_letter(t);
        letters.insert(c);
        CHECK(technique_from_letter(c) == t);
        CHECK(!technique_name(t).empty());
        CHECK(!technique_description(t).empty());
    }
    CHECK(letters.size() == kTechniqueCount);
    CHECK_THROWS_AS(technique_from_letter('X'), ValidationError);
    CHECK(order_from_letters("TQB") ==
          std::vector<Technique>{Technique::TimeBlind, Technique::InlineQuery,
                                 Technique::BooleanBlind});
}

TEST_CASE("default corpus covers all six techniques at risk 2") {
    const PayloadCorpus corpus = load_corpus("default");
    CHECK(!corpus.version.empty());
    for (Technique t : kDefaultOrder) {
        const auto group = payloads_for(corpus, t);
        CHECK(group.size() >= 3);
        for (const Payload& p : group) {
            CHECK(p.technique == t);
            CHECK(p.risk == 2);
        }
    }
}

TEST_CASE("grouping is lossless: union over techniques equals the corpus") {
    const PayloadCorpus corpus = load_corpus("default");
    std::size_t total = 0;
    std::set<std::string> ids;
    for (Technique t : kDefaultOrder) {
        for (const Payload& p : payloads_for(corpus, t)) {
            total++;
            ids.insert(p.id);
        }
    }
    CHECK(total == corpus.payloads.size());
    CHECK(ids.size() == corpus.payloads.size());
}

TEST_CASE("every default TimeBlind payload declares a positive delay") {
    const PayloadCorpus corpus = load_corpus("default");
    for (const Payload& p : payloads_for(corpus, Technique::TimeBlind)) {
        CHECK(p.hint.delay_seconds > 0.0);
    }
}

TEST_CASE("payload rendering substitutes the marker once") {
    const PayloadCorpus corpus = load_corpus("default");
    const Payload p = payloads_for(corpus, Technique::BooleanBlind).front();
    const std::string rendered = p.render("abc");
    CHECK(rendered.find("abc") == 0);
    CHECK(rendered.find("{value}") == std::string::npos);
    const std::string rendered_false = p.render_false("abc");
    CHECK(rendered_false != rendered);
    CHECK(rendered_false.find("abc") == 0);
}

TEST_CASE("corpus file with a risk-3 TimeBlind payload round-trips") {
    const std::string path = write_temp("corpus_risk3.json", R"({
      "version": "custom",
      "payloads": [
        {"id": "b1", "technique": "B", "template": "{value} AND 1=1",
         "hint": {"false_variant": "{value} AND 1=2"}},
        {"id": "e1", "technique": "E", "template": "{value}'",
         "hint": {"error_signatures": ["sig"]}},
        {"id": "u1", "technique": "U", "template": "{value}' UNION SELECT 'm'-- ",
         "hint": {"marker": "m"}},
        {"id": "s1", "technique": "S", "template": "{value}'; SELECT 'm2'-- ",
         "hint": {"marker": "m2"}},
        {"id": "t1", "technique": "T", "template": "{value}' AND SLEEP(1)-- ",
         "risk": 3, "hint": {"delay_seconds": 1.0}},
        {"id": "q1", "technique": "Q", "template": "{value}' AND (SELECT 'm3')='m3",
         "hint": {"marker": "m3"}}
      ]
    })");
    const PayloadCorpus corpus = load_corpus(path);
    CHECK(corpus.version == "custom");
    for (const Payload& p : corpus.payloads) {
        if (p.technique == Technique::TimeBlind) {
            CHECK(p.risk == 3);
        } else {
            CHECK(p.risk == 2);
        }
    }

    SUBCASE("a six-payload corpus yields one payload per technique") {
        for (Technique t : kDefaultOrder) {
            CHECK(payloads_for(corpus, t).size() == 1);
        }
    }
}

TEST_CASE("missing technique coverage names the uncovered letters") {
    const std::string path = write_temp("corpus_no_stack.json", R"({
      "version": "custom",
      "payloads": [
        {"id": "b1", "technique": "B", "template": "{value} AND 1=1",
         "hint": {"false_variant": "{value} AND 1=2"}},
        {"id": "e1", "technique": "E", "template": "{value}'",
         "hint": {"error_signatures": ["sig"]}},
        {"id": "u1", "technique": "U", "template": "{value}' UNION SELECT 'm'-- ",
         "hint": {"marker": "m"}},
        {"id": "t1", "technique": "T", "template": "{value}' AND SLEEP(1)-- ",
         "hint": {"delay_seconds": 1.0}},
        {"id": "q1", "technique": "Q", "template": "{value}' AND (SELECT 'm3')='m3",
         "hint": {"marker": "m3"}}
      ]
    })");
    try {
        load_corpus(path);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("{S}") != std::string::npos);
    }
}

TEST_CASE("malformed corpus entries are rejected with the offending id") {
    CHECK_THROWS_AS(parse_corpus("{ not json"), ParseError);

    // duplicate id
    try {
        parse_corpus(R"({"version":"v","payloads":[
          {"id":"x","technique":"B","template":"{value} AND 1=1",
           "hint":{"false_variant":"{value} AND 1=2"}},
          {"id":"x","technique":"E","template":"{value}'",
           "hint":{"error_signatures":["s"]}}]})");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("'x'") != std::string::npos);
    }

    // risk out of range
    CHECK_THROWS_AS(parse_corpus(R"({"version":"v","payloads":[
      {"id":"b","technique":"B","template":"{value} AND 1=1","risk":4,
       "hint":{"false_variant":"{value} AND 1=2"}}]})"),
                    ParseError);

    // marker must appear exactly once
    CHECK_THROWS_AS(parse_corpus(R"({"version":"v","payloads":[
      {"id":"b","technique":"B","template":"{value} {value}",
       "hint":{"false_variant":"{value} AND 1=2"}}]})"),
                    ParseError);

    // TimeBlind needs a positive delay
    CHECK_THROWS_AS(parse_corpus(R"({"version":"v","payloads":[
      {"id":"t","technique":"T","template":"{value}' AND SLEEP(1)-- ",
       "hint":{}}]})"),
                    ParseError);

    // unreadable path
    CHECK_THROWS_AS(load_corpus("/nonexistent/corpus.json"), ParseError);
}
