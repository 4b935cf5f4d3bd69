#include "vaxcast/regress/learner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "vaxcast/error.hpp"

namespace vaxcast::regress {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Larger means more flexible; only compared within one learner type.
double capacity(const LearnerParams& params) {
    return std::visit(overloaded{
                          [](const OlsParams&) { return 0.0; },
                          [](const LassoParams& p) { return -p.lambda; },
                          [](const BoostParams& p) {
                              return static_cast<double>(p.n_trees) * p.learning_rate * p.max_depth /
                                     static_cast<double>(p.min_leaf);
                          },
                          [](const ForestParams& p) {
                              const double depth = p.max_depth == 0 ? 1e6 : p.max_depth;
                              return depth * static_cast<double>(std::max<std::size_t>(p.mtry, 1)) /
                                     static_cast<double>(p.min_leaf);
                          },
                      },
                      params);
}

}  // namespace

std::string learner_label(const LearnerParams& params) {
    return std::visit(overloaded{
                          [](const OlsParams&) { return std::string("OLS"); },
                          [](const LassoParams&) { return std::string("LASSO"); },
                          [](const BoostParams&) { return std::string("Boost"); },
                          [](const ForestParams&) { return std::string("Randomforest"); },
                      },
                      params);
}

std::string describe(const LearnerParams& params) {
    return std::visit(overloaded{
                          [](const OlsParams&) { return std::string("ols"); },
                          [](const LassoParams& p) { return "lambda=" + num(p.lambda); },
                          [](const BoostParams& p) {
                              return "trees=" + std::to_string(p.n_trees) + " depth=" + std::to_string(p.max_depth) +
                                     " lr=" + num(p.learning_rate);
                          },
                          [](const ForestParams& p) {
                              return "trees=" + std::to_string(p.n_trees) + " depth=" + std::to_string(p.max_depth) +
                                     " min_leaf=" + std::to_string(p.min_leaf) + " mtry=" + std::to_string(p.mtry);
                          },
                      },
                      params);
}

Model fit(const FeatureMatrix& x, const DatedSeries& y, const LearnerParams& params) {
    return std::visit(overloaded{
                          [&](const OlsParams&) -> Model { return fit_ols(x, y); },
                          [&](const LassoParams& p) -> Model { return fit_lasso(x, y, p.lambda); },
                          [&](const BoostParams& p) -> Model { return fit_boost(x, y, p); },
                          [&](const ForestParams& p) -> Model { return fit_rf(x, y, p); },
                      },
                      params);
}

DatedSeries predict(const Model& model, const FeatureMatrix& x) {
    return std::visit([&](const auto& m) { return predict(m, x); }, model);
}

std::vector<std::size_t> fold_sizes(std::size_t n, int k) {
    if (k < 2) throw DomainError("cross-validation needs at least 2 folds");
    const auto kk = static_cast<std::size_t>(k);
    if (n < kk) throw DomainError("cross-validation needs at least as many rows as folds");
    std::vector<std::size_t> sizes(kk, n / kk);
    for (std::size_t f = 0; f < n % kk; ++f) ++sizes[f];
    return sizes;
}

CvReport cross_validate(const FeatureMatrix& x, const DatedSeries& y, const std::vector<LearnerParams>& grid,
                        const CvOptions& options) {
    require_aligned(x, y, "cross_validate");
    if (grid.empty()) throw DomainError("cross_validate: empty grid");
    const std::size_t n = x.rows();
    CvReport report;
    report.grid = grid;
    report.fold_sizes = fold_sizes(n, options.folds);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (options.shuffle) {
        Rng rng(options.seed, 0xcf);
        for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    }

    struct Fold {
        FeatureMatrix train_x, test_x;
        DatedSeries train_y, test_y;
    };
    std::vector<Fold> folds;
    std::size_t begin = 0;
    for (std::size_t size : report.fold_sizes) {
        std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(begin),
                                      order.begin() + static_cast<std::ptrdiff_t>(begin + size));
        std::sort(test.begin(), test.end());
        std::vector<std::size_t> train;
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::binary_search(test.begin(), test.end(), i)) train.push_back(i);
        }
        auto pick = [&](const std::vector<std::size_t>& rows) {
            std::vector<double> v;
            for (std::size_t i : rows) v.push_back(y[i]);
            return DatedSeries(x.start_date(), std::move(v), y.name());
        };
        folds.push_back({x.take_rows(train), x.take_rows(test), pick(train), pick(test)});
        begin += size;
    }

    constexpr double inf = std::numeric_limits<double>::infinity();
    for (const auto& params : grid) {
        std::vector<double> errs;
        for (const auto& fold : folds) {
            double err = inf;
            try {
                const auto pred = predict(fit(fold.train_x, fold.train_y, params), fold.test_x);
                double ss = 0.0;
                for (std::size_t i = 0; i < pred.size(); ++i) ss += (pred[i] - fold.test_y[i]) * (pred[i] - fold.test_y[i]);
                err = std::sqrt(ss / static_cast<double>(pred.size()));
            } catch (const std::exception&) {
            }
            errs.push_back(err);
        }
        double total = 0.0;
        for (double e : errs) total += e;
        report.mean_errors.push_back(total / static_cast<double>(errs.size()));
        report.fold_errors.push_back(std::move(errs));
    }

    std::size_t best = 0;
    for (std::size_t g = 1; g < grid.size(); ++g) {
        const double a = report.mean_errors[g], b = report.mean_errors[best];
        if (a < b || (a == b && capacity(grid[g]) < capacity(grid[best]))) best = g;
    }
    if (!std::isfinite(report.mean_errors[best])) throw DomainError("cross_validate: every setting failed to fit");
    report.chosen = best;
    return report;
}

}  // namespace vaxcast::regress
