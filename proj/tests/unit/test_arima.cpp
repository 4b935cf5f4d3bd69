#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "vaxcast/arima/arima.hpp"
#include "vaxcast/arima/constraints.hpp"
#include "vaxcast/error.hpp"

using namespace vaxcast;
using namespace vaxcast::arima;
using doctest::Approx;

namespace {

DatedSeries simulated(const std::vector<double>& phi, const std::vector<double>& theta, std::size_t n,
                      std::uint64_t seed, double mu = 0.0) {
    return fixture::series(oracle::simulate_arma(phi, theta, n, seed, mu));
}

ArimaFit hand_fit(std::vector<double> ar, std::vector<double> ma, double intercept, std::vector<double> history,
                  std::vector<double> residuals) {
    ArimaFit f;
    f.spec = {static_cast<int>(ar.size()), 0, static_cast<int>(ma.size())};
    f.ar_weights = std::move(ar);
    f.ma_weights = std::move(ma);
    f.intercept = intercept;
    f.history = std::move(history);
    f.residuals = std::move(residuals);
    f.history_start = fixture::kStart;
    f.n_obs = f.history.size();
    return f;
}

}  // namespace

TEST_CASE("spec validation and labels") {
    CHECK_THROWS_AS((ArimaSpec{0, 0, 0}.validate()), DomainError);
    CHECK_THROWS_AS((ArimaSpec{1, 2, 0}.validate()), DomainError);
    CHECK_THROWS_AS((ArimaSpec{-1, 0, 2}.validate()), DomainError);
    CHECK(ArimaSpec{7, 0, 0}.label() == "AR(7)");
    CHECK(ArimaSpec{7, 0, 8}.label() == "ARIMA(7,0,8)");
    CHECK(ArimaSpec{1, 1, 0}.label() == "ARIMA(1,1,0)");
}

TEST_CASE("coefficient constraints map into the stationary region") {
    Rng rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> u(1 + trial % 6);
        for (double& x : u) x = 3.0 * rng.normal();
        const auto ar = constrain_ar(u);
        CHECK(min_root_modulus(ar) > 1.0);
        const auto back = unconstrain_ar(ar);
        REQUIRE(back);
        const auto again = constrain_ar(*back);
        for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(again[i] - ar[i]) < 1e-10);
        if (std::all_of(u.begin(), u.end(), [](double x) { return std::abs(x) < 2.0; })) {
            for (std::size_t i = 0; i < u.size(); ++i) CHECK((*back)[i] == Approx(u[i]).epsilon(1e-6));
        }
        const auto ma = constrain_ma(u);
        std::vector<double> neg(ma.size());
        for (std::size_t i = 0; i < ma.size(); ++i) neg[i] = -ma[i];
        CHECK(min_root_modulus(neg) > 1.0);
    }
    CHECK_FALSE(ar_to_pacf(std::vector<double>{1.2}));
    CHECK(min_root_modulus(std::vector<double>{0.5}) == Approx(2.0));
    CHECK(std::isinf(min_root_modulus(std::vector<double>{0.0, 0.0})));
}

TEST_CASE("fit_ar recovers an AR(1) coefficient") {
    const auto fit = fit_ar(simulated({0.6}, {}, 2000, 101), 1);
    CHECK(fit.ar_weights[0] >= 0.52);
    CHECK(fit.ar_weights[0] <= 0.68);
    CHECK(fit.residuals.size() == fit.n_obs);
    CHECK(fit.n_obs == 2000);
    CHECK(fit.convergence.converged);
    CHECK(fit.ar_root_modulus > 1.0);
    CHECK(std::isinf(fit.ma_root_modulus));
}

TEST_CASE("fit_ar on a numerically constant series fails cleanly") {
    std::vector<double> v(100, 3.0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += 1e-14 * static_cast<double>(i % 3);
    CHECK_THROWS(fit_ar(fixture::series(v), 2));
    CHECK_THROWS_AS(fit_ar(fixture::series({1, 2, 3, 4, 5}), 2), DomainError);
}

TEST_CASE("fit_arima and fit_ar agree") {
    const auto s = simulated({0.5, -0.2}, {}, 400, 102, 1.5);
    const auto a = fit_ar(s, 2);
    const auto b = fit_arima(s, {2, 0, 0});
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(a.ar_weights[i] - b.ar_weights[i]) < 1e-6);
    CHECK(std::abs(a.intercept - b.intercept) < 1e-6);
}

TEST_CASE("MA(1) fit on white noise") {
    const auto x = oracle::simulate_arma({}, {}, 1000, 103, 0.7);
    const auto fit = fit_arima(fixture::series(x), {0, 0, 1});
    // about three standard errors at n = 1000
    CHECK(std::abs(fit.ma_weights[0]) < 0.1);
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    const double n = static_cast<double>(x.size());
    const double iid = -0.5 * n * (std::log(2.0 * std::numbers::pi * ss / n) + 1.0);
    // the i.i.d. model is nested at theta = 0; twice the gain is a chi-square(1) draw
    CHECK(fit.log_likelihood >= iid - 1e-6);
    CHECK(fit.log_likelihood - iid < 5.0);
}

TEST_CASE("exact AR likelihood is close to the conditional least-squares oracle") {
    for (std::uint64_t seed : {201u, 202u, 203u}) {
        const auto x = oracle::simulate_arma({0.5, 0.2}, {}, 500, seed, 3.0);
        const auto fit = fit_ar(fixture::series(x), 2);
        const double css = oracle::ar_css_loglik(x, 2);
        CHECK(std::abs(fit.log_likelihood - css) < 0.5);
        CHECK(fit.log_likelihood >= css - 1e-6);
    }
}

TEST_CASE("information criteria") {
    ArimaFit f;
    f.spec = {7, 0, 8};
    f.log_likelihood = 0.0;
    f.n_obs = 219;
    const auto s = information_criteria(f);
    CHECK(s.dof == 17);
    CHECK(s.aic == 34.0);
    CHECK(s.bic == Approx(17.0 * std::log(219.0)).epsilon(1e-14));

    // reference AIC/BIC pairs on a 212-day window: BIC - AIC = dof (ln 212 - 2).
    // Rows whose listed dof is not p + q + 2, e.g. (1,0,28) listed as 28, are left out.
    const std::vector<std::tuple<int, int, double, double, int>> table{
        {1, 8, 208.5404, 245.4628, 11},  {5, 8, 0.437416, 50.78621, 15},
        {6, 28, -6.415284, 114.4218, 36}, {7, 8, -23.78244, 33.27953, 17}, {7, 15, -17.77218, 62.78589, 24}};
    for (const auto& [p, q, aic, bic, dof] : table) {
        ArimaFit g;
        g.spec = {p, 0, q};
        g.n_obs = 212;
        g.log_likelihood = -(aic - 2.0 * dof) / 2.0;
        const auto sg = information_criteria(g);
        CHECK(sg.dof == dof);
        CHECK(std::abs(sg.aic - aic) < 1e-9);
        CHECK(std::abs(sg.bic - bic) < 1e-3);
    }

    const auto fit = fit_arima(simulated({0.4}, {0.3}, 300, 104), {1, 0, 1});
    const auto sc = information_criteria(fit);
    CHECK(std::abs(sc.aic - (-2.0 * fit.log_likelihood + 2.0 * 4)) < 1e-10);
    CHECK(std::abs(sc.bic - (-2.0 * fit.log_likelihood + std::log(300.0) * 4)) < 1e-10);
    CHECK(sc.bic >= sc.aic);
}

TEST_CASE("forecast examples") {
    const auto geometric = forecast(hand_fit({0.5}, {}, 0.0, {1.0, 2.0}, {0.0, 0.0}), 4);
    CHECK(geometric[0] == 1.0);
    CHECK(geometric[1] == 0.5);
    CHECK(geometric[2] == 0.25);
    CHECK(geometric.start_date() == fixture::kStart + 2);
    CHECK_THROWS_AS(forecast(hand_fit({0.5}, {}, 0.0, {1.0, 2.0}, {0.0, 0.0}), 0), DomainError);

    const auto fit = fit_arima(simulated({0.6, -0.3}, {0.4}, 500, 105, 2.0), {2, 0, 1});
    const auto far = forecast(fit, 400);
    CHECK(std::abs(far.back() - fit.mean) < 1e-6);
    double arsum = 0.0;
    for (double b : fit.ar_weights) arsum += b;
    CHECK(fit.mean == Approx(fit.intercept / (1.0 - arsum)).epsilon(1e-12));

    const std::size_t n = fit.history.size();
    const double direct = fit.intercept + fit.ar_weights[0] * fit.history[n - 1] +
                          fit.ar_weights[1] * fit.history[n - 2] + fit.ma_weights[0] * fit.residuals[n - 1];
    CHECK(std::abs(forecast(fit, 1)[0] - direct) < 1e-9);
}

TEST_CASE("in-sample predictions are the series minus the residuals") {
    const auto s = simulated({0.5}, {0.2}, 300, 106, 1.0);
    const auto fit = fit_arima(s, {1, 0, 1});
    const auto pred = in_sample_predictions(fit);
    REQUIRE(pred.same_dates(s));
    for (std::size_t t = 0; t < s.size(); ++t) CHECK(pred[t] + fit.residuals[t] == Approx(s[t]).epsilon(1e-12));
}

TEST_CASE("scale equivariance") {
    const auto x = oracle::simulate_arma({0.5, -0.25}, {0.3}, 600, 107, 1.0);
    std::vector<double> y(x);
    for (double& v : y) v *= 2.0;
    const auto a = fit_arima(fixture::series(x), {2, 0, 1});
    const auto b = fit_arima(fixture::series(y), {2, 0, 1});
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(a.ar_weights[i] - b.ar_weights[i]) < 1e-6);
    CHECK(std::abs(a.ma_weights[0] - b.ma_weights[0]) < 1e-6);
    CHECK(std::abs(2.0 * a.intercept - b.intercept) < 1e-6);
    for (std::size_t t = 0; t < x.size(); t += 37) CHECK(std::abs(2.0 * a.residuals[t] - b.residuals[t]) < 1e-6);
}

TEST_CASE("first-differenced models forecast levels") {
    std::vector<double> v;
    Rng rng(108);
    double level = 10.0, prev = 0.0;
    for (int t = 0; t < 400; ++t) {
        prev = 0.3 + 0.5 * prev + 0.2 * rng.normal();
        v.push_back(level += prev);
    }
    const auto fit = fit_arima(fixture::series(v), {1, 1, 0});
    CHECK(fit.n_obs == 399);
    CHECK(fit.ar_weights[0] == Approx(0.5).epsilon(0.2));
    const auto f = forecast(fit, 3);
    CHECK(f.start_date() == fixture::kStart + 400);
    CHECK(f[0] > v.back());
    CHECK(in_sample_predictions(fit).start_date() == fixture::kStart + 1);
}

TEST_CASE("select_model") {
    const auto s = simulated({0.5, 0.25}, {}, 400, 109);
    const int one[] = {2};
    const int zero[] = {0};
    const auto single = select_model(s, one, zero, Criterion::bic);
    CHECK(single.best.spec == ArimaSpec{2, 0, 0});
    CHECK(single.candidates.size() == 1);

    const int ps[] = {1, 2, 3};
    const int qs[] = {0, 1};
    const auto sel = select_model(s, ps, qs, Criterion::aic, {}, 2);
    REQUIRE(sel.candidates.size() == 6);
    CHECK(sel.candidates[1].spec == ArimaSpec{1, 0, 1});
    double best = INFINITY;
    for (const auto& c : sel.candidates) {
        REQUIRE(c.score);
        best = std::min(best, c.score->aic);
    }
    CHECK(sel.best_score.aic == best);

    const auto seq = select_model(s, ps, qs, Criterion::parsimony, {}, 1);
    const auto par = select_model(s, ps, qs, Criterion::parsimony, {}, 4);
    CHECK(seq.best.ar_weights == par.best.ar_weights);
    CHECK(seq.best.ma_weights == par.best.ma_weights);
    CHECK(seq.best.log_likelihood == par.best.log_likelihood);

    // parsimony never picks a model with more parameters than the BIC winner
    const auto bic = select_model(s, ps, qs, Criterion::bic, {}, 1);
    CHECK(seq.best_score.dof <= bic.best_score.dof);

    CHECK_THROWS_AS(select_model(s, std::span<const int>{}, qs, Criterion::bic), DomainError);
    CHECK(criterion_from_string("parsimony") == Criterion::parsimony);
    CHECK_THROWS_AS(criterion_from_string("hqic"), DomainError);
}

TEST_CASE("select_model reports every failure when no candidate fits") {
    const auto s = simulated({0.5}, {}, 30, 110);
    const int ps[] = {5};
    const int qs[] = {8};
    CHECK_THROWS_AS(select_model(s, ps, qs, Criterion::bic), EstimationError);
}
