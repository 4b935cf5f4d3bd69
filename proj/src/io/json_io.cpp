#include "vaxcast/io/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "vaxcast/error.hpp"

namespace vaxcast::io {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

template <class F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const Json::exception& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double number_or_inf(const Json& j) {
    return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

Json node_json(const regress::RegressionTree& tree, std::size_t i, const std::vector<std::string>& columns) {
    const auto& n = tree.nodes.at(i);
    if (n.is_leaf()) return Json{{"value", n.value}};
    Json j;
    j["column"] = columns.at(static_cast<std::size_t>(n.feature));
    j["threshold"] = n.threshold;
    j["left"] = node_json(tree, static_cast<std::size_t>(n.left), columns);
    j["right"] = node_json(tree, static_cast<std::size_t>(n.right), columns);
    return j;
}

int parse_node(const Json& j, regress::RegressionTree& tree, const std::vector<std::string>& columns) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({});
    if (j.contains("value")) {
        tree.nodes.back().value = j.at("value").get<double>();
        return id;
    }
    const auto name = j.at("column").get<std::string>();
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw ParseError("tree splits on unknown column '" + name + "'");
    const double threshold = j.at("threshold").get<double>();
    const int left = parse_node(j.at("left"), tree, columns);
    const int right = parse_node(j.at("right"), tree, columns);
    auto& node = tree.nodes[static_cast<std::size_t>(id)];
    node.feature = static_cast<int>(it - columns.begin());
    node.threshold = threshold;
    node.left = left;
    node.right = right;
    return id;
}

}  // namespace

Json to_json(const arima::ArimaSpec& spec) { return Json{{"p", spec.p}, {"d", spec.d}, {"q", spec.q}}; }

arima::ArimaSpec arima_spec_from_json(const Json& j) {
    return guarded("ARIMA order", [&] {
        return arima::ArimaSpec{j.at("p").get<int>(), j.value("d", 0), j.at("q").get<int>()};
    });
}

Json to_json(const arima::ArimaFit& fit) {
    Json j;
    j["spec"] = to_json(fit.spec);
    j["label"] = fit.spec.label();
    j["intercept"] = fit.intercept;
    j["mean"] = fit.mean;
    j["ar"] = fit.ar_weights;
    j["ma"] = fit.ma_weights;
    j["innovation_variance"] = fit.innovation_variance;
    j["log_likelihood"] = fit.log_likelihood;
    j["n_obs"] = fit.n_obs;
    j["ar_root_modulus"] = finite_or_null(fit.ar_root_modulus);
    j["ma_root_modulus"] = finite_or_null(fit.ma_root_modulus);
    j["boundary"] = fit.boundary;
    const auto& c = fit.convergence;
    j["convergence"] = Json{{"converged", c.converged},
                            {"reason", c.reason},
                            {"nelder_mead_iterations", c.nelder_mead_iterations},
                            {"bfgs_iterations", c.bfgs_iterations},
                            {"evaluations", c.evaluations},
                            {"max_iterations", c.max_iterations},
                            {"rel_tolerance", c.rel_tolerance}};
    j["history_start"] = fit.history_start.iso();
    j["history"] = fit.history;
    j["residuals"] = fit.residuals;
    return j;
}

arima::ArimaFit arima_fit_from_json(const Json& j) {
    return guarded("ARIMA fit", [&] {
        arima::ArimaFit fit;
        fit.spec = arima_spec_from_json(j.at("spec"));
        fit.intercept = j.at("intercept").get<double>();
        fit.mean = j.at("mean").get<double>();
        fit.ar_weights = j.at("ar").get<std::vector<double>>();
        fit.ma_weights = j.at("ma").get<std::vector<double>>();
        fit.innovation_variance = j.at("innovation_variance").get<double>();
        fit.log_likelihood = j.at("log_likelihood").get<double>();
        fit.n_obs = j.at("n_obs").get<std::size_t>();
        fit.ar_root_modulus = number_or_inf(j.at("ar_root_modulus"));
        fit.ma_root_modulus = number_or_inf(j.at("ma_root_modulus"));
        fit.boundary = j.at("boundary").get<bool>();
        const auto& c = j.at("convergence");
        fit.convergence.converged = c.at("converged").get<bool>();
        fit.convergence.reason = c.at("reason").get<std::string>();
        fit.convergence.nelder_mead_iterations = c.at("nelder_mead_iterations").get<int>();
        fit.convergence.bfgs_iterations = c.at("bfgs_iterations").get<int>();
        fit.convergence.evaluations = c.at("evaluations").get<int>();
        fit.convergence.max_iterations = c.at("max_iterations").get<int>();
        fit.convergence.rel_tolerance = c.at("rel_tolerance").get<double>();
        fit.history_start = Date::from_iso(j.at("history_start").get<std::string>());
        fit.history = j.at("history").get<std::vector<double>>();
        fit.residuals = j.at("residuals").get<std::vector<double>>();
        if (fit.ar_weights.size() != static_cast<std::size_t>(fit.spec.p) ||
            fit.ma_weights.size() != static_cast<std::size_t>(fit.spec.q) ||
            fit.residuals.size() + static_cast<std::size_t>(fit.spec.d) != fit.history.size()) {
            throw ParseError("ARIMA fit: coefficient or residual counts do not match the order");
        }
        return fit;
    });
}

Json to_json(const arima::CandidateResult& c) {
    Json j;
    j["label"] = c.spec.label();
    j["spec"] = to_json(c.spec);
    if (c.score) {
        j["log_likelihood"] = c.score->log_likelihood;
        j["aic"] = c.score->aic;
        j["bic"] = c.score->bic;
        j["dof"] = c.score->dof;
        j["n_obs"] = c.score->n_obs;
    } else {
        j["error"] = c.error;
    }
    return j;
}

arima::CandidateResult candidate_from_json(const Json& j) {
    arima::CandidateResult c;
    c.spec = arima_spec_from_json(j.at("spec"));
    if (j.contains("error")) {
        c.error = j.at("error").get<std::string>();
        return c;
    }
    arima::ModelScore s;
    s.spec = c.spec;
    s.log_likelihood = j.at("log_likelihood").get<double>();
    s.aic = j.at("aic").get<double>();
    s.bic = j.at("bic").get<double>();
    s.dof = j.at("dof").get<int>();
    s.n_obs = j.at("n_obs").get<std::size_t>();
    c.score = s;
    return c;
}

Json to_json(const regress::LinearModel& m) {
    Json weights = Json::object();
    for (std::size_t i = 0; i < m.columns.size(); ++i) weights[m.columns[i]] = m.weights[i];
    return Json{{"type", "linear"}, {"intercept", m.intercept}, {"weights", weights}, {"regularization", m.regularization}};
}

Json to_json(const regress::TreeEnsembleModel& m) {
    Json j;
    j["type"] = regress::to_string(m.kind);
    j["columns"] = m.columns;
    j["seed"] = m.seed;
    if (m.kind == regress::EnsembleKind::boost) {
        j["learning_rate"] = m.learning_rate;
        j["base_prediction"] = m.base_prediction;
    }
    Json trees = Json::array();
    for (const auto& t : m.trees) trees.push_back(node_json(t, 0, m.columns));
    j["trees"] = std::move(trees);
    return j;
}

Json to_json(const regress::Model& m) {
    return std::visit([](const auto& x) { return to_json(x); }, m);
}

regress::Model model_from_json(const Json& j) {
    return guarded("model", [&]() -> regress::Model {
        const auto type = j.at("type").get<std::string>();
        if (type == "linear") {
            regress::LinearModel m;
            m.intercept = j.at("intercept").get<double>();
            m.regularization = j.value("regularization", 0.0);
            for (const auto& [name, w] : j.at("weights").items()) {
                m.columns.push_back(name);
                m.weights.push_back(w.get<double>());
            }
            return m;
        }
        regress::TreeEnsembleModel m;
        if (type == "boost") {
            m.kind = regress::EnsembleKind::boost;
            m.learning_rate = j.at("learning_rate").get<double>();
            m.base_prediction = j.at("base_prediction").get<double>();
        } else if (type == "random_forest") {
            m.kind = regress::EnsembleKind::random_forest;
        } else {
            throw ParseError("unknown model type '" + type + "'");
        }
        m.columns = j.at("columns").get<std::vector<std::string>>();
        m.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& t : j.at("trees")) {
            regress::RegressionTree tree;
            parse_node(t, tree, m.columns);
            m.trees.push_back(std::move(tree));
        }
        if (m.trees.empty()) throw ParseError("ensemble without trees");
        return m;
    });
}

Json to_json(const regress::LearnerParams& p) {
    return std::visit(overloaded{
                          [](const regress::OlsParams&) { return Json{{"learner", "ols"}}; },
                          [](const regress::LassoParams& q) { return Json{{"learner", "lasso"}, {"lambda", q.lambda}}; },
                          [](const regress::BoostParams& q) {
                              return Json{{"learner", "boost"},         {"n_trees", q.n_trees},
                                          {"max_depth", q.max_depth},   {"learning_rate", q.learning_rate},
                                          {"min_leaf", q.min_leaf},     {"seed", q.seed}};
                          },
                          [](const regress::ForestParams& q) {
                              return Json{{"learner", "random_forest"}, {"n_trees", q.n_trees},
                                          {"max_depth", q.max_depth},     {"min_leaf", q.min_leaf},
                                          {"mtry", q.mtry},               {"bootstrap", q.bootstrap},
                                          {"seed", q.seed}};
                          },
                      },
                      p);
}

regress::LearnerParams learner_params_from_json(const Json& j) {
    return guarded("learner settings", [&]() -> regress::LearnerParams {
        const auto kind = j.at("learner").get<std::string>();
        if (kind == "ols") return regress::OlsParams{};
        if (kind == "lasso") return regress::LassoParams{j.at("lambda").get<double>()};
        if (kind == "boost") {
            regress::BoostParams p;
            p.n_trees = j.value("n_trees", p.n_trees);
            p.max_depth = j.value("max_depth", p.max_depth);
            p.learning_rate = j.value("learning_rate", p.learning_rate);
            p.min_leaf = j.value("min_leaf", p.min_leaf);
            p.seed = j.value("seed", p.seed);
            return p;
        }
        if (kind == "random_forest") {
            regress::ForestParams p;
            p.n_trees = j.value("n_trees", p.n_trees);
            p.max_depth = j.value("max_depth", p.max_depth);
            p.min_leaf = j.value("min_leaf", p.min_leaf);
            p.mtry = j.value("mtry", p.mtry);
            p.bootstrap = j.value("bootstrap", p.bootstrap);
            p.seed = j.value("seed", p.seed);
            return p;
        }
        throw ParseError("unknown learner '" + kind + "'");
    });
}

Json to_json(const regress::CvReport& cv) {
    Json grid = Json::array();
    for (const auto& g : cv.grid) grid.push_back(to_json(g));
    Json errors = Json::array();
    for (const auto& row : cv.fold_errors) {
        Json r = Json::array();
        for (double e : row) r.push_back(finite_or_null(e));
        errors.push_back(std::move(r));
    }
    Json means = Json::array();
    for (double e : cv.mean_errors) means.push_back(finite_or_null(e));
    return Json{{"folds", cv.fold_sizes.size()}, {"fold_sizes", cv.fold_sizes}, {"grid", grid},
                {"mean_rmse", means},            {"fold_rmse", errors},         {"chosen", cv.chosen}};
}

regress::CvReport cv_report_from_json(const Json& j) {
    return guarded("CV report", [&] {
        regress::CvReport cv;
        for (const auto& g : j.at("grid")) cv.grid.push_back(learner_params_from_json(g));
        for (const auto& row : j.at("fold_rmse")) {
            std::vector<double> r;
            for (const auto& e : row) r.push_back(number_or_inf(e));
            cv.fold_errors.push_back(std::move(r));
        }
        for (const auto& e : j.at("mean_rmse")) cv.mean_errors.push_back(number_or_inf(e));
        cv.fold_sizes = j.at("fold_sizes").get<std::vector<std::size_t>>();
        cv.chosen = j.at("chosen").get<std::size_t>();
        if (cv.grid.size() != cv.mean_errors.size() || cv.chosen >= cv.grid.size()) {
            throw ParseError("CV report: grid and error counts do not match");
        }
        return cv;
    });
}

Json to_json(const stack::SvrParams& p) {
    return Json{{"epsilon", p.epsilon}, {"lambda", p.lambda}, {"penalize_intercept", p.penalize_intercept}};
}

stack::SvrParams svr_params_from_json(const Json& j) {
    return guarded("SVR settings", [&] {
        stack::SvrParams p;
        p.epsilon = j.value("epsilon", p.epsilon);
        p.lambda = j.value("lambda", p.lambda);
        p.penalize_intercept = j.value("penalize_intercept", p.penalize_intercept);
        p.validate();
        return p;
    });
}

Json to_json(const stack::StackWeights& w) {
    Json j{{"method", stack::to_string(w.method)},
           {"intercept", w.intercept},
           {"clinical_weight", w.clinical_weight},
           {"web_weight", w.web_weight}};
    if (w.svr) j["svr"] = to_json(*w.svr);
    return j;
}

stack::StackWeights stack_weights_from_json(const Json& j) {
    return guarded("stack weights", [&] {
        stack::StackWeights w;
        const auto method = j.at("method").get<std::string>();
        if (method != "ols" && method != "svr") throw ParseError("unknown stacking method '" + method + "'");
        w.method = method == "ols" ? stack::StackMethod::ols : stack::StackMethod::svr;
        w.intercept = j.at("intercept").get<double>();
        w.clinical_weight = j.at("clinical_weight").get<double>();
        w.web_weight = j.at("web_weight").get<double>();
        if (j.contains("svr")) w.svr = svr_params_from_json(j.at("svr"));
        return w;
    });
}

Json to_json(const eval::FittedClinical& m) {
    Json j;
    j["name"] = m.name;
    j["label"] = m.label();
    if (m.fit) j["fit"] = to_json(*m.fit);
    if (!m.error.empty()) j["error"] = m.error;
    Json cands = Json::array();
    for (const auto& c : m.candidates) cands.push_back(to_json(c));
    j["candidates"] = std::move(cands);
    return j;
}

eval::FittedClinical fitted_clinical_from_json(const Json& j) {
    return guarded("clinical model", [&] {
        eval::FittedClinical m;
        m.name = j.at("name").get<std::string>();
        if (j.contains("fit")) m.fit = arima_fit_from_json(j.at("fit"));
        m.error = j.value("error", std::string());
        for (const auto& c : j.value("candidates", Json::array())) m.candidates.push_back(candidate_from_json(c));
        if (!m.fit && m.error.empty()) throw ParseError("clinical model without fit or error");
        return m;
    });
}

Json to_json(const eval::FittedWeb& m) {
    Json j;
    j["label"] = m.label;
    j["params"] = to_json(m.params);
    if (m.model) j["model"] = to_json(*m.model);
    if (!m.error.empty()) j["error"] = m.error;
    if (m.cv) j["cv"] = to_json(*m.cv);
    return j;
}

eval::FittedWeb fitted_web_from_json(const Json& j) {
    return guarded("web model", [&] {
        eval::FittedWeb m;
        m.label = j.at("label").get<std::string>();
        m.params = learner_params_from_json(j.at("params"));
        if (j.contains("model")) m.model = model_from_json(j.at("model"));
        if (j.contains("cv")) m.cv = cv_report_from_json(j.at("cv"));
        m.error = j.value("error", std::string());
        if (!m.model && m.error.empty()) throw ParseError("web model without model or error");
        return m;
    });
}

Json to_json(const eval::EvalReport& r) {
    Json j;
    j["split"] = Json{{"train_len", r.split.train_len}, {"test_len", r.split.test_len}};
    Json dates = Json::array();
    for (std::size_t i = 0; i < r.actual.size(); ++i) dates.push_back(r.actual.date_at(i).iso());
    j["holdout"] = Json{{"dates", dates}, {"actual", std::vector<double>(r.actual.values().begin(), r.actual.values().end())}};
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        Json o;
        o["label"] = row.label;
        o["stacked"] = row.stacked;
        if (row.stacked) {
            o["clinical"] = row.clinical;
            o["web"] = row.web;
        }
        o["rmse"] = row.rmse ? Json(*row.rmse) : Json(nullptr);
        if (row.weights) o["weights"] = to_json(*row.weights);
        if (row.holdout) o["holdout"] = std::vector<double>(row.holdout->values().begin(), row.holdout->values().end());
        if (!row.error.empty()) o["error"] = row.error;
        rows.push_back(std::move(o));
    }
    j["rows"] = std::move(rows);
    auto label = [&](const std::optional<std::size_t>& i) { return i ? Json(r.rows[*i].label) : Json(nullptr); };
    j["best"] = label(r.best);
    j["best_single"] = label(r.best_single);
    j["best_stacked"] = label(r.best_stacked);
    return j;
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return Json::parse(text.str());
    } catch (const Json::parse_error& e) {
        throw ParseError(e.what(), 0, path.string());
    }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace vaxcast::io
