#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "vaxcast/error.hpp"
#include "vaxcast/series/diagnostics.hpp"
#include "vaxcast/series/transform.hpp"

using namespace vaxcast;
using namespace vaxcast::series;
using doctest::Approx;

TEST_CASE("Date parsing and arithmetic") {
    CHECK(Date::from_iso("2021-07-27").iso() == "2021-07-27");
    CHECK((Date(2021, 3, 1) - Date(2021, 2, 28)) == 1);
    CHECK((Date(2020, 3, 1) - Date(2020, 2, 28)) == 2);
    CHECK_FALSE(Date::parse("2021-02-30"));
    CHECK_FALSE(Date::parse("2021-2-3"));
    CHECK_FALSE(Date::parse("2021-02-03x"));
    CHECK_THROWS_AS(Date::from_iso("yesterday"), DomainError);
}

TEST_CASE("DatedSeries invariants") {
    CHECK_THROWS_AS(DatedSeries(fixture::kStart, {}), DomainError);
    CHECK_THROWS_AS(DatedSeries(fixture::kStart, {1.0, NAN}), DomainError);
    CHECK_THROWS_AS(DatedSeries(fixture::kStart, {1.0, INFINITY}), DomainError);
    const auto s = fixture::series({1, 2, 3, 4});
    CHECK(s.end_date() == Date(2021, 1, 4));
    CHECK(s.at(Date(2021, 1, 3)) == 3.0);
    CHECK_THROWS_AS(s.at(Date(2021, 1, 5)), DomainError);
    CHECK(s.between(Date(2021, 1, 2), Date(2021, 1, 3)).values()[0] == 2.0);
    CHECK_THROWS_AS(s.between(Date(2020, 12, 31), Date(2021, 1, 3)), DomainError);
}

TEST_CASE("to_ratio examples") {
    PopulationParams p;
    p.temp_resident_share = 0.0;
    p.base_population = 10000;
    CHECK(to_ratio(fixture::series({100}), p)[0] == Approx(1.0).epsilon(1e-15));
    const auto zero = to_ratio(fixture::series({0, 0, 0}), p);
    for (double v : zero.values()) CHECK(v == 0.0);
    const auto two = to_ratio(fixture::series({50, 50}), p);
    CHECK(two[0] == Approx(0.5).epsilon(1e-15));
    CHECK(two[1] == Approx(50.0 / 99.5).epsilon(1e-15));
}

TEST_CASE("to_ratio population adjustment and errors") {
    PopulationParams p;
    p.base_population = 9290;
    p.temp_resident_share = 0.071;
    CHECK(p.eligible() == Approx(10000.0).epsilon(1e-12));
    p.adjustment = ResidentAdjustment::multiply;
    CHECK(p.eligible() == Approx(9290 * 1.071).epsilon(1e-12));

    PopulationParams small;
    small.base_population = 100;
    small.temp_resident_share = 0.0;
    CHECK_THROWS_WITH_AS(to_ratio(fixture::series({60, 40, 1}), small), doctest::Contains("2021-01-03"), DomainError);
    PopulationParams bad;
    bad.base_population = 100;
    bad.temp_resident_share = 1.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    CHECK_THROWS_AS(to_ratio(fixture::series({-1}), small), DomainError);
}

TEST_CASE("to_ratio round-trips through from_ratio") {
    Rng rng(3);
    PopulationParams p;
    p.base_population = 5e6;
    p.cumulative_prior_doses = 2e5;
    std::vector<double> doses(120);
    for (double& d : doses) d = std::floor(20000 * rng.uniform());
    const auto back = from_ratio(to_ratio(fixture::series(doses), p), p);
    for (std::size_t i = 0; i < doses.size(); ++i) {
        CHECK(std::abs(back[i] - doses[i]) <= 1e-9 * std::max(1.0, doses[i]));
    }
}

TEST_CASE("acf and pacf") {
    Rng rng(5);
    const auto wn = oracle::simulate_arma({}, {}, 5000, 21);
    const auto r = acf(fixture::series(wn), 20);
    CHECK(r[0] == 1.0);
    for (std::size_t k = 1; k <= 20; ++k) CHECK(std::abs(r[k]) < 3.0 / std::sqrt(5000.0));

    const auto ar1 = oracle::simulate_arma({0.5}, {}, 10000, 22);
    const auto a = acf(fixture::series(ar1), 5);
    for (int k = 1; k <= 5; ++k) CHECK(std::abs(a[static_cast<std::size_t>(k)] - std::pow(0.5, k)) < 0.03);
    const auto pa = pacf(fixture::series(ar1), 5);
    CHECK(std::abs(pa[0] - 0.5) < 0.03);
    for (std::size_t k = 1; k < 5; ++k) CHECK(std::abs(pa[k]) < 0.03);
    CHECK(pa[0] == a[1]);

    const auto ar2 = oracle::simulate_arma({0.4, 0.3}, {}, 10000, 23);
    CHECK(std::abs(pacf(fixture::series(ar2), 3)[1] - 0.3) < 0.03);
    CHECK(significance_band(400) == Approx(0.098));

    CHECK_THROWS_AS(acf(fixture::series({2, 2, 2, 2}), 1), DomainError);
    CHECK_THROWS_AS(acf(fixture::series({1, 2, 3}), 3), DomainError);
    CHECK_THROWS_AS(pacf(fixture::series({1, 2, 3}), 2), DomainError);
}

TEST_CASE("acf and pacf are invariant under affine maps") {
    const auto x = oracle::simulate_arma({0.6, -0.2}, {0.3}, 400, 31);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = -3.5 * x[i] + 12.0;
    const auto a1 = acf(x, 10), a2 = acf(y, 10);
    const auto p1 = pacf(x, 10), p2 = pacf(y, 10);
    for (std::size_t k = 0; k <= 10; ++k) CHECK(std::abs(a1[k] - a2[k]) < 1e-10);
    for (std::size_t k = 0; k < 10; ++k) CHECK(std::abs(p1[k] - p2[k]) < 1e-10);
}

TEST_CASE("adf statistic matches the least-squares oracle") {
    for (std::size_t lags : {0u, 1u, 3u}) {
        const auto x = oracle::simulate_arma({0.8}, {}, 300, 40 + lags, 2.0);
        const auto rep = adf_test(fixture::series(x), lags);
        CHECK(std::abs(rep.statistic - oracle::adf_t(x, lags)) < 1e-8);
        CHECK(rep.reject_unit_root == (rep.statistic < rep.critical_value(Significance::five_percent)));
    }
    const auto cv = adf_critical_values(100000);
    CHECK(cv[0] == Approx(-3.43).epsilon(0.01));
    CHECK(cv[1] == Approx(-2.86).epsilon(0.01));
    CHECK(cv[2] == Approx(-2.57).epsilon(0.01));
    CHECK_THROWS_AS(adf_test(fixture::series({1, 1, 1, 1, 1, 1}), 0), DomainError);
    CHECK_THROWS_AS(adf_test(fixture::series({1, 2, 3}), 1), DomainError);
}

TEST_CASE("kendall tau examples") {
    CHECK(kendall_tau(std::vector<double>{1, 2, 3, 4}) == 1.0);
    CHECK(kendall_tau(std::vector<double>{4, 3, 2, 1}) == -1.0);
    CHECK(kendall_tau(std::vector<double>{1, 3, 2, 4}) == Approx(4.0 / 6.0));
    CHECK_THROWS_AS(kendall_tau(std::vector<double>{5, 5, 5}), DomainError);
    CHECK_THROWS_AS(kendall_tau(std::vector<double>{5}), DomainError);
}

TEST_CASE("kendall tau is invariant under monotone transforms") {
    Rng rng(9);
    std::vector<double> v(40), w(40);
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = std::round(10 * rng.normal());
        w[i] = std::exp(v[i] / 7.0) * 3.0 - 1.0;
    }
    CHECK(kendall_tau(v) == kendall_tau(w));
}

TEST_CASE("trend labels and segmentation") {
    CHECK(label_for_tau(0.6960) == TrendLabel::rising);
    CHECK(label_for_tau(-0.0326) == TrendLabel::steady);
    CHECK(label_for_tau(0.4530) == TrendLabel::rising);
    CHECK(label_for_tau(-0.5) == TrendLabel::falling);

    Rng rng(12);
    std::vector<double> v;
    for (int i = 0; i < 30; ++i) v.push_back(i + 0.1 * rng.normal());
    for (int i = 0; i < 30; ++i) v.push_back(30 + ((i * 7919) % 13 - 6) * 0.01);
    const auto s = fixture::series(v);
    const Date bp[] = {s.date_at(30)};
    const auto rep = segment_trend(s, bp);
    REQUIRE(rep.segments.size() == 2);
    CHECK(rep.segments[0].label == TrendLabel::rising);
    CHECK(rep.segments[1].label == TrendLabel::steady);
    CHECK(rep.segments[0].last == s.date_at(29));
    CHECK(rep.segments[1].first == s.date_at(30));

    const auto whole = segment_trend(s, {});
    REQUIRE(whole.segments.size() == 1);
    CHECK(whole.segments[0].first == s.start_date());
    CHECK(whole.segments[0].last == s.end_date());

    const Date outside[] = {s.start_date()};
    CHECK_THROWS_AS(segment_trend(s, outside), DomainError);
    const Date unsorted[] = {s.date_at(40), s.date_at(20)};
    CHECK_THROWS_AS(segment_trend(s, unsorted), DomainError);
}
