#include "vaxcast/regress/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "vaxcast/error.hpp"

namespace vaxcast::regress {

std::string to_string(EnsembleKind kind) {
    return kind == EnsembleKind::boost ? "boost" : "random_forest";
}

TreeEnsembleModel fit_boost(const FeatureMatrix& x, const DatedSeries& y, const BoostParams& params) {
    require_aligned(x, y, "fit_boost");
    if (params.n_trees < 1) throw DomainError("fit_boost: n_trees must be >= 1");
    if (params.max_depth < 1) throw DomainError("fit_boost: max_depth must be >= 1");
    if (!(params.learning_rate > 0.0 && params.learning_rate <= 1.0)) {
        throw DomainError("fit_boost: learning_rate must lie in (0, 1]");
    }
    const std::size_t n = x.rows();
    const auto& v = x.values();
    const auto yv = y.values();

    TreeEnsembleModel model;
    model.kind = EnsembleKind::boost;
    model.learning_rate = params.learning_rate;
    model.seed = params.seed;
    model.columns = x.column_names();
    double total = 0.0;
    for (double t : yv) total += t;
    model.base_prediction = total / static_cast<double>(n);

    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    std::vector<double> f(n, model.base_prediction), resid(n), next(n);
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) sse += (yv[i] - f[i]) * (yv[i] - f[i]);

    const TreeParams tp{params.max_depth, params.min_leaf, 0};
    for (int m = 0; m < params.n_trees; ++m) {
        for (std::size_t i = 0; i < n; ++i) resid[i] = yv[i] - f[i];
        RegressionTree tree = fit_tree(v, resid, rows, tp);
        double next_sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = f[i] + params.learning_rate * tree.predict(v.row(static_cast<Eigen::Index>(i)));
            next_sse += (yv[i] - next[i]) * (yv[i] - next[i]);
        }
        if (next_sse > sse) {
            // rounding made the step useless; keep the stage as a no-op
            tree.nodes.assign(1, TreeNode{});
        } else {
            f.swap(next);
            sse = next_sse;
        }
        model.trees.push_back(std::move(tree));
    }
    return model;
}

TreeEnsembleModel fit_rf(const FeatureMatrix& x, const DatedSeries& y, const ForestParams& params) {
    require_aligned(x, y, "fit_rf");
    const std::size_t n = x.rows(), k = x.cols();
    if (params.n_trees < 1) throw DomainError("fit_rf: n_trees must be >= 1");
    if (params.max_depth < 0) throw DomainError("fit_rf: max_depth must be >= 0");
    if (params.min_leaf < 1 || params.min_leaf >= n) throw DomainError("fit_rf: min_leaf must lie in [1, rows)");
    const std::size_t mtry = params.mtry == 0 ? (k + 2) / 3 : params.mtry;
    if (mtry < 1 || mtry > k) throw DomainError("fit_rf: mtry must lie in [1, columns]");

    TreeEnsembleModel model;
    model.kind = EnsembleKind::random_forest;
    model.seed = params.seed;
    model.columns = x.column_names();
    model.trees.resize(static_cast<std::size_t>(params.n_trees));

    const TreeParams tp{params.max_depth, params.min_leaf, mtry};
    const auto& v = x.values();
    const auto yv = y.values();
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(model.trees.size());
    auto worker = [&] {
        std::vector<std::size_t> sample(n);
        for (std::size_t t; (t = next.fetch_add(1)) < model.trees.size();) {
            try {
                Rng rng(params.seed, t);
                for (std::size_t i = 0; i < n; ++i) {
                    sample[i] = params.bootstrap ? static_cast<std::size_t>(rng.below(n)) : i;
                }
                model.trees[t] = fit_tree(v, yv, sample, tp, &rng);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        }
    };
    unsigned threads = params.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : params.threads;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, model.trees.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return model;
}

double predict_row(const TreeEnsembleModel& model, const Eigen::Ref<const Eigen::RowVectorXd>& row) {
    if (model.kind == EnsembleKind::boost) {
        double acc = model.base_prediction;
        for (const auto& tree : model.trees) acc += model.learning_rate * tree.predict(row);
        return acc;
    }
    std::vector<double> outs;
    outs.reserve(model.trees.size());
    for (const auto& tree : model.trees) outs.push_back(tree.predict(row));
    std::sort(outs.begin(), outs.end());
    double acc = 0.0;
    for (double o : outs) acc += o;
    return std::clamp(acc / static_cast<double>(outs.size()), outs.front(), outs.back());
}

DatedSeries predict(const TreeEnsembleModel& model, const FeatureMatrix& x) {
    if (model.columns != x.column_names()) throw DomainError("predict: feature columns differ from the training columns");
    if (model.trees.empty()) throw DomainError("predict: ensemble has no trees");
    std::vector<double> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict_row(model, x.values().row(static_cast<Eigen::Index>(i)));
    return {x.start_date(), std::move(out), "prediction"};
}

}  // namespace vaxcast::regress
