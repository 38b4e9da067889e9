#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "tpsqli/errors.hpp"
#include "tpsqli/weights.hpp"

#if TPSQLI_HAVE_GMP
#include <gmpxx.h>
#endif

using namespace tpsqli;

namespace {

TechniqueOutcome ok(Technique t, double seconds) { return {t, true, seconds}; }
TechniqueOutcome fail(Technique t, double seconds = 0.0) { return {t, false, seconds}; }

// Random outcome lists over n distinct techniques.
std::vector<TechniqueOutcome> random_outcomes(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> time_dist(0.01, 500.0);
    std::bernoulli_distribution success_dist(0.5);
    std::vector<TechniqueOutcome> outcomes;
    for (int i = 0; i < n; ++i) {
        const Technique t = kDefaultOrder[static_cast<std::size_t>(i)];
        outcomes.push_back({t, success_dist(rng), time_dist(rng)});
    }
    return outcomes;
}

}  // namespace

TEST_CASE("three-technique worked example: 2s success, failure, 4s success") {
    const auto w = compute_weights(
        {ok(Technique::BooleanBlind, 2.0), fail(Technique::ErrorBased),
         ok(Technique::UnionBased, 4.0)},
        3);
    CHECK(w.at(Technique::BooleanBlind) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(w.at(Technique::ErrorBased) == 0.0);
    CHECK(w.at(Technique::UnionBased) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w.sum() == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("six-technique weights match the blind-target reference row") {
    // Successes B/S/T with mean times 8.23 / 176.80 / 154.42 seconds.
    const auto w = compute_weights(
        {ok(Technique::BooleanBlind, 8.23), fail(Technique::ErrorBased, 15.40),
         fail(Technique::UnionBased, 14.26), ok(Technique::StackBased, 176.80),
         ok(Technique::TimeBlind, 154.42), fail(Technique::InlineQuery, 17.67)},
        6);
    CHECK(std::abs(w.at(Technique::BooleanBlind) - 5.46) < 0.01);
    CHECK(w.at(Technique::ErrorBased) == 0.0);
    CHECK(w.at(Technique::UnionBased) == 0.0);
    CHECK(std::abs(w.at(Technique::StackBased) - 0.25) < 0.01);
    CHECK(std::abs(w.at(Technique::TimeBlind) - 0.29) < 0.01);
    CHECK(w.at(Technique::InlineQuery) == 0.0);
    CHECK(w.descending_order() ==
          std::vector<Technique>{Technique::BooleanBlind, Technique::TimeBlind,
                                 Technique::StackBased, Technique::ErrorBased,
                                 Technique::UnionBased, Technique::InlineQuery});
}

TEST_CASE("five successes with one failure match the second reference row") {
    const auto w = compute_weights(
        {ok(Technique::BooleanBlind, 12.13), ok(Technique::ErrorBased, 30.27),
         ok(Technique::UnionBased, 11.07), ok(Technique::StackBased, 303.54),
         ok(Technique::TimeBlind, 505.38), fail(Technique::InlineQuery, 17.73)},
        6);
    CHECK(std::abs(w.at(Technique::BooleanBlind) - 2.34) < 0.01);
    CHECK(std::abs(w.at(Technique::ErrorBased) - 0.94) < 0.01);
    CHECK(std::abs(w.at(Technique::UnionBased) - 2.57) < 0.01);
    CHECK(std::abs(w.at(Technique::StackBased) - 0.09) < 0.01);
    CHECK(std::abs(w.at(Technique::TimeBlind) - 0.06) < 0.01);
    CHECK(w.at(Technique::InlineQuery) == 0.0);
}

TEST_CASE("a single success takes the whole budget of n") {
    for (double seconds : {0.001, 1.0, 3600.0}) {
        std::vector<TechniqueOutcome> outcomes;
        for (Technique t : kDefaultOrder) outcomes.push_back(fail(t, 1.0));
        outcomes[4] = ok(Technique::TimeBlind, seconds);
        const auto w = compute_weights(outcomes, 6);
        CHECK(w.at(Technique::TimeBlind) == doctest::Approx(6.0).epsilon(1e-12));
        CHECK(w.sum() == doctest::Approx(6.0).epsilon(1e-12));
    }
}

TEST_CASE("all failures produce the zero vector") {
    std::vector<TechniqueOutcome> outcomes;
    for (Technique t : kDefaultOrder) outcomes.push_back(fail(t, 5.0));
    const auto w = compute_weights(outcomes, 6);
    CHECK(w.all_zero());
    CHECK(w.descending_order() ==
          std::vector<Technique>(kDefaultOrder.begin(), kDefaultOrder.end()));
}

TEST_CASE("compute_weights validates its inputs") {
    CHECK_THROWS_AS(compute_weights({ok(Technique::BooleanBlind, 1.0)}, 2), ValidationError);
    CHECK_THROWS_AS(compute_weights({ok(Technique::BooleanBlind, 1.0),
                                     ok(Technique::BooleanBlind, 2.0)},
                                    2),
                    ValidationError);
    CHECK_THROWS_AS(compute_weights({ok(Technique::BooleanBlind, 0.0)}, 1), ValidationError);
    CHECK_THROWS_AS(compute_weights({fail(Technique::BooleanBlind, -1.0)}, 1), ValidationError);
    CHECK_THROWS_AS(compute_weights({}, 0), ValidationError);
}

TEST_CASE("aggregate_rounds averages times and ORs success flags") {
    SUBCASE("the five blind-target boolean rounds average to 8.23") {
        std::vector<std::vector<TechniqueOutcome>> rounds;
        for (double seconds : {4.42, 4.23, 4.19, 4.94, 23.34}) {
            rounds.push_back({ok(Technique::BooleanBlind, seconds)});
        }
        const auto agg = aggregate_rounds(rounds);
        REQUIRE(agg.size() == 1);
        CHECK(std::abs(agg[0].exploit_seconds - 8.23) < 0.01);
        CHECK(agg[0].succeeded);
    }

    SUBCASE("a single round aggregates to itself") {
        const std::vector<TechniqueOutcome> round = {ok(Technique::BooleanBlind, 2.5),
                                                     fail(Technique::ErrorBased, 7.0)};
        const auto agg = aggregate_rounds({round});
        CHECK(agg == round);
    }

    SUBCASE("two successful rounds with times 2 and 4 give mean 3") {
        const auto agg = aggregate_rounds(
            {{ok(Technique::TimeBlind, 2.0)}, {ok(Technique::TimeBlind, 4.0)}});
        REQUIRE(agg.size() == 1);
        CHECK(agg[0].exploit_seconds == doctest::Approx(3.0));
        CHECK(agg[0].succeeded);
    }

    SUBCASE("success in any round marks the technique succeeded") {
        const auto agg = aggregate_rounds(
            {{fail(Technique::TimeBlind, 2.0)}, {ok(Technique::TimeBlind, 4.0)}});
        CHECK(agg[0].succeeded);
    }

    SUBCASE("validation") {
        CHECK_THROWS_AS(aggregate_rounds({}), ValidationError);
        CHECK_THROWS_AS(aggregate_rounds({{ok(Technique::TimeBlind, 2.0)},
                                          {ok(Technique::BooleanBlind, 4.0)}}),
                        ValidationError);
        CHECK_THROWS_AS(aggregate_rounds({{ok(Technique::TimeBlind, 2.0)},
                                          {ok(Technique::TimeBlind, 2.0),
                                           ok(Technique::BooleanBlind, 4.0)}}),
                        ValidationError);
    }
}

TEST_CASE("weight properties hold over randomized instances") {
    std::mt19937 rng(20240917);
    int with_success = 0;
    for (int iter = 0; iter < 1000; ++iter) {
        const int n = std::uniform_int_distribution<int>(1, 6)(rng);
        const auto outcomes = random_outcomes(rng, n);
        const auto w = compute_weights(outcomes, n);

        int successes = 0;
        for (const auto& o : outcomes) successes += o.succeeded ? 1 : 0;

        // Rule 1: failures score zero.
        for (const auto& o : outcomes) {
            if (!o.succeeded) CHECK(w.at(o.technique) == 0.0);
            CHECK(w.at(o.technique) >= 0.0);
        }

        if (successes == 0) {
            CHECK(w.all_zero());
            continue;
        }
        ++with_success;

        // Normalization.
        CHECK(std::abs(w.sum() - static_cast<double>(n)) < 1e-9);

        // Monotonicity among successes: faster means strictly heavier.
        for (const auto& a : outcomes) {
            for (const auto& b : outcomes) {
                if (a.succeeded && b.succeeded && a.exploit_seconds < b.exploit_seconds) {
                    CHECK(w.at(a.technique) > w.at(b.technique));
                }
            }
        }

        // Scale invariance of the whole vector.
        const double c = std::uniform_real_distribution<double>(0.1, 50.0)(rng);
        auto scaled = outcomes;
        for (auto& o : scaled) o.exploit_seconds *= c;
        const auto w_scaled = compute_weights(scaled, n);
        for (const auto& o : outcomes) {
            CHECK(std::abs(w.at(o.technique) - w_scaled.at(o.technique)) < 1e-9);
        }
    }
    CHECK(with_success > 500);  // the generator actually exercises the interesting case
}

#if TPSQLI_HAVE_GMP
TEST_CASE("double-precision weights match an exact rational evaluation") {
    // Literal transcription of the scoring rules with arbitrary-precision
    // rationals, independent of the production code path.
    const auto rational_weights = [](const std::vector<TechniqueOutcome>& outcomes, int n) {
        mpq_class reciprocal_sum = 0;
        for (const auto& o : outcomes) {
            if (o.succeeded) reciprocal_sum += 1 / mpq_class(o.exploit_seconds);
        }
        std::map<Technique, double> result;
        for (const auto& o : outcomes) {
            if (!o.succeeded || reciprocal_sum == 0) {
                result[o.technique] = 0.0;
            } else {
                mpq_class w = (1 / mpq_class(o.exploit_seconds)) * n / reciprocal_sum;
                result[o.technique] = w.get_d();
            }
        }
        return result;
    };

    std::mt19937 rng(977);
    for (int iter = 0; iter < 500; ++iter) {
        const int n = std::uniform_int_distribution<int>(1, 6)(rng);
        const auto outcomes = random_outcomes(rng, n);
        const auto w = compute_weights(outcomes, n);
        const auto expected = rational_weights(outcomes, n);
        for (const auto& o : outcomes) {
            CHECK(std::abs(w.at(o.technique) - expected.at(o.technique)) < 1e-9);
        }
    }
}
#endif

TEST_CASE("round-record CSV round-trips and rejects bad rows") {
    std::vector<std::vector<TechniqueOutcome>> rounds;
    for (int r = 0; r < 3; ++r) {
        std::vector<TechniqueOutcome> round;
        for (Technique t : kDefaultOrder) {
            round.push_back({t, r == 1, 1.5 * (r + 1) + static_cast<double>(technique_index(t))});
        }
        rounds.push_back(round);
    }

    std::stringstream buffer;
    write_round_records(buffer, rounds);
    const auto parsed = read_round_records(buffer);
    REQUIRE(parsed.size() == rounds.size());
    for (std::size_t r = 0; r < rounds.size(); ++r) {
        for (std::size_t i = 0; i < rounds[r].size(); ++i) {
            CHECK(parsed[r][i].technique == rounds[r][i].technique);
            CHECK(parsed[r][i].succeeded == rounds[r][i].succeeded);
            CHECK(parsed[r][i].exploit_seconds ==
                  doctest::Approx(rounds[r][i].exploit_seconds).epsilon(1e-6));
        }
    }

    CHECK_THROWS_AS(read_round_records_file("/nonexistent/records.csv"), ParseError);
    std::stringstream bad("round,technique,succeeded,seconds\n1,B,yes\n");
    CHECK_THROWS_AS(read_round_records(bad), ParseError);
}

TEST_CASE("appendix-shaped fixture reproduces its score row") {
    const auto rounds =
        read_round_records_file(std::string(TPSQLI_FIXTURE_DIR) + "/appendix/tableA1.csv");
    REQUIRE(rounds.size() == 5);
    const auto agg = aggregate_rounds(rounds);
    const auto w = compute_weights(agg, 6);
    CHECK(std::abs(w.at(Technique::BooleanBlind) - 5.46) < 0.01);
    CHECK(std::abs(w.at(Technique::StackBased) - 0.25) < 0.01);
    CHECK(std::abs(w.at(Technique::TimeBlind) - 0.29) < 0.01);
    CHECK(w.at(Technique::ErrorBased) == 0.0);
    CHECK(w.at(Technique::UnionBased) == 0.0);
    CHECK(w.at(Technique::InlineQuery) == 0.0);
}
