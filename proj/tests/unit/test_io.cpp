#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "vaxcast/error.hpp"
#include "vaxcast/io/json_io.hpp"
#include "vaxcast/io/tables.hpp"

using namespace vaxcast;
using namespace vaxcast::io;
namespace fs = std::filesystem;

namespace {

fs::path work(const std::string& name) {
    const fs::path dir = fs::path(UNIT_WORK_DIR);
    fs::create_directories(dir);
    return dir / name;
}

Json reparse(const Json& j) { return Json::parse(dump(j)); }

struct Data {
    regress::FeatureMatrix x;
    DatedSeries y;
};

Data data(std::uint64_t seed) {
    Rng rng(seed);
    const Eigen::MatrixXd x = fixture::normal_matrix(rng, 60, 3);
    std::vector<double> y(60);
    for (Eigen::Index i = 0; i < 60; ++i) y[static_cast<std::size_t>(i)] = x(i, 0) - x(i, 1) * x(i, 2) + 0.1 * rng.normal();
    return {fixture::matrix(x), fixture::series(y)};
}

}  // namespace

TEST_CASE("ARIMA fits round-trip exactly") {
    const auto y = fixture::series(oracle::simulate_arma({0.5}, {0.3}, 150, 4, 2.0, 0.5));
    const auto fit = arima::fit_arima(y, {1, 0, 1});
    const auto back = arima_fit_from_json(reparse(to_json(fit)));
    CHECK(back.spec == fit.spec);
    CHECK(back.intercept == fit.intercept);
    CHECK(back.ar_weights == fit.ar_weights);
    CHECK(back.ma_weights == fit.ma_weights);
    CHECK(back.innovation_variance == fit.innovation_variance);
    CHECK(back.log_likelihood == fit.log_likelihood);
    CHECK(back.residuals == fit.residuals);
    CHECK(back.history_series() == fit.history_series());
    CHECK(back.convergence.converged == fit.convergence.converged);
    CHECK(arima::forecast(back, 10) == arima::forecast(fit, 10));

    const auto ar = arima::fit_ar(y, 2);
    const auto j = reparse(to_json(ar));
    CHECK(j["ma_root_modulus"].is_null());
    CHECK(std::isinf(arima_fit_from_json(j).ma_root_modulus));

    CHECK(arima_spec_from_json(to_json(arima::ArimaSpec{7, 0, 8})) == arima::ArimaSpec{7, 0, 8});
    CHECK_THROWS_AS(arima_spec_from_json(Json::parse(R"({"p": "x"})")), ParseError);
}

TEST_CASE("learned models round-trip and predict identically") {
    const auto d = data(5);
    std::vector<regress::LearnerParams> settings{regress::OlsParams{}, regress::LassoParams{0.05},
                                                 regress::BoostParams{30, 2, 0.1, 2, 3},
                                                 regress::ForestParams{25, 0, 3, 2, true, 9, 0}};
    for (const auto& p : settings) {
        INFO(regress::learner_label(p));
        const auto m = regress::fit(d.x, d.y, p);
        const auto back = model_from_json(reparse(to_json(m)));
        CHECK(to_json(back) == to_json(m));
        CHECK(regress::predict(back, d.x) == regress::predict(m, d.x));
        CHECK(learner_params_from_json(reparse(to_json(p))) == p);
    }
    const auto linear = reparse(to_json(regress::fit(d.x, d.y, regress::OlsParams{})));
    CHECK(linear["type"] == "linear");
    CHECK(linear["weights"].contains("x2"));
    CHECK_THROWS_AS(model_from_json(Json::parse(R"({"type": "svm"})")), ParseError);
    CHECK_THROWS_AS(learner_params_from_json(Json::parse(R"({"learner": "svm"})")), ParseError);
}

TEST_CASE("stack weights and SVR settings round-trip") {
    const stack::SvrParams p{0.2, 3.0, false};
    CHECK(svr_params_from_json(reparse(to_json(p))) == p);
    const stack::StackWeights ols{0.1, 0.7, 0.25, stack::StackMethod::ols, std::nullopt};
    CHECK(stack_weights_from_json(reparse(to_json(ols))) == ols);
    const stack::StackWeights svr{-0.5, 1.0 / 3.0, 2.0, stack::StackMethod::svr, p};
    CHECK(stack_weights_from_json(reparse(to_json(svr))) == svr);
    CHECK(reparse(to_json(svr))["method"] == "svr");
}

TEST_CASE("fitted roster entries round-trip") {
    const auto y = fixture::series(oracle::simulate_arma({0.7}, {}, 100, 6, 1.0, 0.2));
    const std::vector<int> ps{1, 2}, qs{0};
    const auto sel = arima::select_model(y, ps, qs, arima::Criterion::bic, {}, 1);
    eval::FittedClinical c{"AR", sel.best, sel.candidates, ""};
    const auto cb = fitted_clinical_from_json(reparse(to_json(c)));
    CHECK(cb.name == "AR");
    CHECK(cb.label() == c.label());
    REQUIRE(cb.candidates.size() == 2);
    CHECK(cb.candidates[1].spec == c.candidates[1].spec);
    CHECK(cb.candidates[1].score->bic == c.candidates[1].score->bic);
    CHECK(arima::forecast(*cb.fit, 3) == arima::forecast(*c.fit, 3));

    eval::FittedClinical failed{"ARIMA", std::nullopt, {}, "no candidate converged"};
    const auto fb = fitted_clinical_from_json(reparse(to_json(failed)));
    CHECK_FALSE(fb.fit);
    CHECK(fb.error == "no candidate converged");

    const auto d = data(7);
    eval::FittedWeb w;
    w.label = "LASSO";
    w.params = regress::LassoParams{0.01};
    w.model = regress::fit(d.x, d.y, w.params);
    w.cv = regress::cross_validate(d.x, d.y, {regress::LassoParams{0.1}, regress::LassoParams{0.01}});
    const auto wb = fitted_web_from_json(reparse(to_json(w)));
    CHECK(wb.label == "LASSO");
    CHECK(wb.params == w.params);
    CHECK(to_json(*wb.model) == to_json(*w.model));
    REQUIRE(wb.cv);
    CHECK(wb.cv->mean_errors == w.cv->mean_errors);
    CHECK(wb.cv->chosen == w.cv->chosen);
}

TEST_CASE("json files") {
    const auto bad = work("bad.json");
    std::ofstream(bad) << "{\"a\": ";
    CHECK_THROWS_WITH_AS(read_json_file(bad), doctest::Contains("bad.json"), ParseError);
    CHECK_THROWS_WITH_AS(read_json_file(work("missing.json")), doctest::Contains("missing.json"), DomainError);
    const auto good = work("good.json");
    std::ofstream(good) << dump(Json{{"b", 1}, {"a", {1.5, 2}}});
    const auto j = read_json_file(good);
    CHECK(j.begin().key() == "b");
    CHECK(dump(j) == "{\n  \"b\": 1,\n  \"a\": [\n    1.5,\n    2\n  ]\n}\n");
}

TEST_CASE("feature tables and text files") {
    Eigen::MatrixXd v(3, 2);
    v << 0.1, 2, 1.0 / 3.0, -4, 5e-12, 6;
    const regress::FeatureMatrix x(fixture::kStart, {"pt", "pt_lag1"}, v);
    const std::string csv = feature_csv(x);
    CHECK(csv.rfind("date,pt,pt_lag1\n2021-01-01,0.1,2\n", 0) == 0);
    const auto path = work("nested/dir/features.csv");
    fs::remove_all(work("nested"));
    write_text(path, csv);
    const auto back = read_feature_csv(path);
    CHECK(back.column_names() == x.column_names());
    CHECK(back.start_date() == x.start_date());
    CHECK(back.rows() == 3);
    CHECK(std::abs(back.values()(1, 0) - 1.0 / 3.0) < 1e-10);
    CHECK(feature_csv(back) == csv);

    write_text(work("gap.csv"), "date,a\n2021-01-01,1\n2021-01-03,2\n");
    CHECK_THROWS(read_feature_csv(work("gap.csv")));
    CHECK_THROWS_AS(write_text("/proc/forbidden/x.txt", "x"), DomainError);
}
