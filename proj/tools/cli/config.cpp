#include "cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "vaxcast/error.hpp"
#include "vaxcast/regress/linear.hpp"

namespace vaxcast::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

const std::set<std::string> kLearners{"ols", "lasso", "boost", "random_forest"};

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
    const auto it = j.find(key);
    return it == j.end() ? fallback : it->template get<T>();
}

std::vector<int> int_list(const Json& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_number_integer()) return {v.get<int>()};
    return v.get<std::vector<int>>();
}

}  // namespace

void apply_override(Json& j, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw DomainError("--set expects key=value, got '" + assignment + "'");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    Json value = Json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    Json* node = &j;
    std::size_t from = 0;
    while (true) {
        const auto dot = key.find('.', from);
        const std::string part = key.substr(from, dot == std::string::npos ? std::string::npos : dot - from);
        if (part.empty()) throw DomainError("--set: empty path component in '" + key + "'");
        if (node->is_array()) {
            std::size_t idx = 0;
            try {
                idx = std::stoul(part);
            } catch (const std::exception&) {
                throw DomainError("--set: '" + part + "' is not an array index in '" + key + "'");
            }
            if (idx >= node->size()) throw DomainError("--set: index " + part + " out of range in '" + key + "'");
            node = &(*node)[idx];
        } else {
            if (!node->is_object()) *node = Json::object();
            node = &(*node)[part];
        }
        if (dot == std::string::npos) break;
        from = dot + 1;
    }
    *node = std::move(value);
}

PipelineConfig load_config(const fs::path& path, const Overrides& overrides) {
    Json j = io::read_json_file(path);
    if (!j.is_object()) throw ParseError("config must be a JSON object", 0, path.string());
    for (const auto& s : overrides.set) apply_override(j, s);

    const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
    auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };

    PipelineConfig c;
    try {
        const auto& paths = j.at("paths");
        c.clinical = resolve(paths.at("clinical").get<std::string>());
        for (const auto& t : paths.at("trends")) c.trends.push_back(resolve(t.get<std::string>()));
        c.categories = resolve(paths.at("categories").get<std::string>());
        c.reference_query = get_or<std::string>(j, "reference_query", c.reference_query);

        if (const auto it = j.find("population"); it != j.end()) {
            const auto& p = *it;
            c.population.base_population = p.at("base_population").get<double>();
            c.population.temp_resident_share = get_or(p, "temp_resident_share", c.population.temp_resident_share);
            c.population.cumulative_prior_doses = get_or(p, "cumulative_prior_doses", 0.0);
            const auto adj = get_or<std::string>(p, "adjustment", "divide");
            if (adj == "divide") {
                c.population.adjustment = series::ResidentAdjustment::divide;
            } else if (adj == "multiply") {
                c.population.adjustment = series::ResidentAdjustment::multiply;
            } else {
                throw DomainError("population.adjustment must be divide or multiply, got '" + adj + "'");
            }
        } else {
            throw DomainError("config lacks population");
        }
        c.population.validate();

        if (const auto it = j.find("split"); it != j.end()) {
            c.split.train_len = get_or(*it, "train_len", c.split.train_len);
            c.split.test_len = get_or(*it, "test_len", c.split.test_len);
        }
        c.lag = get_or(j, "lag", c.lag);
        if (c.lag < 1) throw DomainError("lag must be at least 1");

        std::set<std::string> names;
        for (const auto& m : j.at("clinical_models")) {
            eval::ClinicalEntry e;
            e.name = m.at("name").get<std::string>();
            e.p_candidates = int_list(m, "p");
            e.q_candidates = int_list(m, "q");
            e.criterion = arima::criterion_from_string(get_or<std::string>(m, "criterion", "parsimony"));
            if (!names.insert(e.name).second) throw DomainError("duplicate clinical model '" + e.name + "'");
            c.clinical_models.push_back(std::move(e));
        }
        std::set<std::string> learners;
        for (const auto& m : j.at("web_models")) {
            const auto learner = m.at("learner").get<std::string>();
            if (!kLearners.count(learner)) throw DomainError("unknown learner '" + learner + "'");
            if (!learners.insert(learner).second) throw DomainError("learner '" + learner + "' listed twice");
            c.web_models.push_back(m);
        }
        if (c.clinical_models.empty() && c.web_models.empty()) throw DomainError("config lists no models");

        if (const auto it = j.find("arima"); it != j.end()) {
            c.arima.max_iterations = get_or(*it, "max_iterations", c.arima.max_iterations);
            c.arima.rel_tolerance = get_or(*it, "rel_tolerance", c.arima.rel_tolerance);
        }
        if (const auto it = j.find("cv"); it != j.end()) {
            c.cv.folds = get_or(*it, "folds", c.cv.folds);
            c.cv.shuffle = get_or(*it, "shuffle", c.cv.shuffle);
        }
        if (const auto it = j.find("svr"); it != j.end()) c.svr = io::svr_params_from_json(*it);
        c.svr.validate();
        if (const auto it = j.find("trend"); it != j.end()) {
            for (const auto& d : it->value("breakpoints", Json::array())) {
                c.breakpoints.push_back(Date::from_iso(d.get<std::string>()));
            }
            c.steady_threshold = get_or(*it, "steady_threshold", c.steady_threshold);
        }
        c.horizon = get_or(j, "horizon", c.horizon);
        c.threads = get_or(j, "threads", c.threads);
        c.out = get_or<std::string>(j, "output", "out");
        if (overrides.seed) {
            c.seed = *overrides.seed;
        } else if (j.contains("seed")) {
            c.seed = j.at("seed").get<std::uint64_t>();
        } else {
            throw DomainError("config lacks a seed (set \"seed\" or pass --seed)");
        }
        if (overrides.out) c.out = *overrides.out;
    } catch (const Json::exception& e) {
        throw ParseError(e.what(), 0, path.string());
    }
    c.cv.seed = c.seed;
    return c;
}

void require_inputs(const PipelineConfig& config) {
    std::vector<fs::path> all{config.clinical, config.categories};
    all.insert(all.end(), config.trends.begin(), config.trends.end());
    for (const auto& p : all) {
        if (!fs::is_regular_file(p)) throw DomainError("missing input file " + p.string());
    }
}

std::string web_slug(const Json& entry) {
    std::string s = entry.at("learner").get<std::string>();
    s.erase(std::remove(s.begin(), s.end(), '_'), s.end());
    return s;
}

std::vector<regress::LearnerParams> expand_web_grid(const Json& entry, const PipelineConfig& config,
                                                    const regress::FeatureMatrix& x_train,
                                                    const DatedSeries& y_train) {
    Json fixed = entry;
    if (entry.at("learner") == "lasso" && entry.value("lambda", Json()) == "auto") {
        const auto grid = regress::lasso_lambda_grid(x_train, y_train, entry.value("lambda_count", 50),
                                                     entry.value("lambda_min_ratio", 1e-4));
        fixed["lambda"] = grid;
    }
    fixed.erase("lambda_count");
    fixed.erase("lambda_min_ratio");
    if ((fixed["learner"] == "boost" || fixed["learner"] == "random_forest") && !fixed.contains("seed")) {
        fixed["seed"] = config.seed;
    }

    std::vector<Json> combos{Json::object()};
    for (const auto& [key, value] : fixed.items()) {
        std::vector<Json> next;
        const std::vector<Json> options = value.is_array() ? value.get<std::vector<Json>>() : std::vector<Json>{value};
        if (options.empty()) throw DomainError("web model '" + web_slug(entry) + "': empty list for " + key);
        for (const auto& base : combos) {
            for (const auto& o : options) {
                Json c = base;
                c[key] = o;
                next.push_back(std::move(c));
            }
        }
        combos = std::move(next);
    }
    std::vector<regress::LearnerParams> grid;
    for (const auto& c : combos) {
        auto p = io::learner_params_from_json(c);
        if (auto* f = std::get_if<regress::ForestParams>(&p)) f->threads = config.threads;
        grid.push_back(p);
    }
    return grid;
}

}  // namespace vaxcast::cli
