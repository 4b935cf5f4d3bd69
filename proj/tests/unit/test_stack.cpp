#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "vaxcast/error.hpp"
#include "vaxcast/stack/stacker.hpp"

using namespace vaxcast;
using namespace vaxcast::stack;

namespace {

struct Streams {
    std::vector<double> y, c, w;
};

Streams make_streams(std::uint64_t seed, std::size_t n, double noise) {
    Rng rng(seed);
    Streams s;
    for (std::size_t t = 0; t < n; ++t) {
        const double truth = 1.5 + std::sin(0.3 * static_cast<double>(t)) + 0.1 * rng.normal();
        s.y.push_back(truth);
        s.c.push_back(truth + noise * rng.normal());
        s.w.push_back(0.5 * truth + 0.3 + noise * rng.normal());
    }
    return s;
}

std::array<double, 3> as_array(const StackWeights& w) { return {w.intercept, w.clinical_weight, w.web_weight}; }

double objective(const Streams& s, const StackWeights& w, const SvrParams& p) {
    return svr_objective(w, fixture::series(s.y), fixture::series(s.c), fixture::series(s.w), p);
}

}  // namespace

TEST_CASE("OLS stacking") {
    // exact combination is recovered
    Streams s = make_streams(1, 40, 0.3);
    for (std::size_t t = 0; t < s.y.size(); ++t) s.y[t] = 0.2 + 0.7 * s.c[t] + 0.4 * s.w[t];
    const auto w = stack_ols(fixture::series(s.y), fixture::series(s.c), fixture::series(s.w));
    CHECK(std::abs(w.intercept - 0.2) < 1e-9);
    CHECK(std::abs(w.clinical_weight - 0.7) < 1e-9);
    CHECK(std::abs(w.web_weight - 0.4) < 1e-9);
    CHECK(w.method == StackMethod::ols);
    CHECK_FALSE(w.svr);

    const Streams n = make_streams(2, 60, 0.2);
    const auto fit = stack_ols(fixture::series(n.y), fixture::series(n.c), fixture::series(n.w));
    std::vector<std::vector<double>> rows;
    for (std::size_t t = 0; t < n.y.size(); ++t) rows.push_back({1.0, n.c[t], n.w[t]});
    const auto ref = oracle::normal_equations(rows, n.y);
    CHECK(std::abs(fit.intercept - ref[0]) < 1e-9);
    CHECK(std::abs(fit.clinical_weight - ref[1]) < 1e-9);
    CHECK(std::abs(fit.web_weight - ref[2]) < 1e-9);

    std::vector<double> twice(n.c);
    for (double& v : twice) v = 2.0 * v + 1.0;
    CHECK_THROWS_AS(stack_ols(fixture::series(n.y), fixture::series(n.c), fixture::series(twice)), RankError);
    CHECK_THROWS_AS(stack_ols(fixture::series({1, 2}), fixture::series({1, 2}), fixture::series({2, 1})), DomainError);
    CHECK_THROWS_AS(
        stack_ols(fixture::series(n.y), fixture::series(n.c), DatedSeries(fixture::kStart + 1, n.w)), DomainError);
}

TEST_CASE("SVR loss and objective") {
    const SvrParams p{0.1, 1.0, true};
    CHECK(svr_loss(0.05, p) == 0.0);
    CHECK(svr_loss(-0.05, p) == 0.0);
    CHECK(svr_loss(0.1, p) == 0.0);
    CHECK(svr_loss(0.35, p) == doctest::Approx(0.25));
    CHECK(svr_loss(-0.35, p) == doctest::Approx(0.25));
    CHECK_THROWS_AS(SvrParams({-0.1, 1.0, true}).validate(), DomainError);
    CHECK_THROWS_AS(SvrParams({0.1, 0.0, true}).validate(), DomainError);

    const Streams s = make_streams(3, 30, 0.2);
    StackWeights w{0.1, 0.6, 0.5, StackMethod::svr, p};
    CHECK(objective(s, w, p) == doctest::Approx(oracle::svr_objective(as_array(w), s.y, s.c, s.w, 0.1, 1.0)).epsilon(1e-12));
    SvrParams free = p;
    free.penalize_intercept = false;
    CHECK(objective(s, w, free) ==
          doctest::Approx(oracle::svr_objective(as_array(w), s.y, s.c, s.w, 0.1, 1.0, false)).epsilon(1e-12));
}

TEST_CASE("SVR extremes") {
    const Streams s = make_streams(4, 50, 0.2);
    const auto big = stack_svr(fixture::series(s.y), fixture::series(s.c), fixture::series(s.w), {0.1, 1e9, true});
    CHECK(std::abs(big.intercept) < 1e-6);
    CHECK(std::abs(big.clinical_weight) < 1e-6);
    CHECK(std::abs(big.web_weight) < 1e-6);
    CHECK(big.method == StackMethod::svr);
    REQUIRE(big.svr);
    CHECK(big.svr->lambda == 1e9);

    // every point inside a wide tube: only the penalty is left, so the weights vanish
    const auto wide = stack_svr(fixture::series(s.y), fixture::series(s.c), fixture::series(s.w), {100.0, 1.0, true});
    CHECK(std::abs(wide.intercept) < 1e-9);
    CHECK(std::abs(wide.clinical_weight) < 1e-9);
    CHECK(std::abs(wide.web_weight) < 1e-9);

    // with an unpenalised intercept, the wide tube leaves a flat fit inside it
    const auto flat = stack_svr(fixture::series(s.y), fixture::series(s.c), fixture::series(s.w), {100.0, 1.0, false});
    CHECK(std::abs(flat.clinical_weight) < 1e-9);
    CHECK(std::abs(flat.web_weight) < 1e-9);
    for (double y : s.y) CHECK(std::abs(y - flat.intercept) <= 100.0 + 1e-9);
}

TEST_CASE("SVR matches an exhaustive grid search") {
    for (std::uint64_t seed : {5u, 6u, 7u}) {
        const Streams s = make_streams(seed, 10, 0.3);
        const SvrParams p{0.1, 1.0, true};
        const auto fit = stack_svr(fixture::series(s.y), fixture::series(s.c), fixture::series(s.w), p);
        std::array<double, 3> arg{};
        const double grid = oracle::svr_grid_search(s.y, s.c, s.w, 0.1, 1.0, -2.0, 2.0, 1e-3, 200, &arg);
        const double got = objective(s, fit, p);
        CHECK(got <= grid + 1e-6);
        CHECK(std::abs(got - grid) < 1e-6);
    }
}

TEST_CASE("SVR is independent of the starting point") {
    const Streams s = make_streams(8, 60, 0.25);
    const SvrParams p{0.05, 0.5, true};
    const auto ref = stack_svr(fixture::series(s.y), fixture::series(s.c), fixture::series(s.w), p);
    const double f0 = objective(s, ref, p);
    Rng rng(99);
    for (int k = 0; k < 10; ++k) {
        SvrOptions opt;
        opt.start = std::array<double, 3>{3.0 * rng.normal(), 3.0 * rng.normal(), 3.0 * rng.normal()};
        const auto w = stack_svr(fixture::series(s.y), fixture::series(s.c), fixture::series(s.w), p, opt);
        CHECK(std::abs(objective(s, w, p) - f0) < 1e-6);
        CHECK(std::abs(w.intercept - ref.intercept) < 1e-6);
        CHECK(std::abs(w.clinical_weight - ref.clinical_weight) < 1e-6);
        CHECK(std::abs(w.web_weight - ref.web_weight) < 1e-6);
    }
}

TEST_CASE("SVR with a zero tube approaches least absolute deviations") {
    const Streams s = make_streams(9, 20, 0.3);
    const double lambda = 1e-9;
    const SvrParams p{0.0, lambda, true};
    const auto w = stack_svr(fixture::series(s.y), fixture::series(s.c), fixture::series(s.w), p);
    const double lad = oracle::lad_vertex_oracle(s.y, s.c, s.w);
    const double got = oracle::svr_objective(as_array(w), s.y, s.c, s.w, 0.0, 0.0);
    CHECK(std::abs(got - lad) < 1e-4);
}

TEST_CASE("stack_predict and in-sample dominance of OLS") {
    const StackWeights w{0.5, 2.0, -1.0, StackMethod::ols, std::nullopt};
    const auto out = stack_predict(w, fixture::series({1.0, 2.0}), fixture::series({3.0, 0.5}));
    CHECK(out[0] == 0.5 + 2.0 - 3.0);
    CHECK(out[1] == 0.5 + 4.0 - 0.5);
    CHECK(out.start_date() == fixture::kStart);
    CHECK_THROWS_AS(stack_predict(w, fixture::series({1.0, 2.0}), fixture::series({1.0})), DomainError);

    for (std::uint64_t seed = 20; seed < 30; ++seed) {
        const Streams s = make_streams(seed, 40, 0.3);
        const auto y = fixture::series(s.y), c = fixture::series(s.c), web = fixture::series(s.w);
        const auto ols = stack_ols(y, c, web);
        auto sse = [&](const DatedSeries& f) {
            double v = 0.0;
            for (std::size_t t = 0; t < s.y.size(); ++t) v += (f[t] - s.y[t]) * (f[t] - s.y[t]);
            return v;
        };
        const double best = sse(stack_predict(ols, c, web));
        CHECK(best <= sse(c) + 1e-12);
        CHECK(best <= sse(web) + 1e-12);
        const auto svr = stack_svr(y, c, web, {});
        CHECK(best <= sse(stack_predict(svr, c, web)) + 1e-12);
    }
}
