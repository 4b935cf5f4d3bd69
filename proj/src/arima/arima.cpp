#include "vaxcast/arima/arima.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "linalg/least_squares.hpp"
#include "optim/minimize.hpp"
#include "vaxcast/arima/constraints.hpp"
#include "vaxcast/arima/kalman.hpp"
#include "vaxcast/error.hpp"
#include "vaxcast/series/diagnostics.hpp"

namespace vaxcast::arima {

namespace {

constexpr double kBoundaryMargin = 1e-4;

std::vector<double> difference(std::span<const double> values, int d) {
    std::vector<double> w(values.begin(), values.end());
    for (int k = 0; k < d; ++k) {
        for (std::size_t t = w.size() - 1; t > 0; --t) w[t] -= w[t - 1];
        w.erase(w.begin());
    }
    return w;
}

// Durbin-Levinson on the sample ACF; the result is always stationary.
std::vector<double> yule_walker(std::span<const double> z, std::size_t order) {
    const auto rho = series::acf(z, order);
    std::vector<double> phi, prev;
    for (std::size_t k = 1; k <= order; ++k) {
        double num = rho[k], den = 1.0;
        for (std::size_t j = 1; j < k; ++j) {
            num -= prev[j - 1] * rho[k - j];
            den -= prev[j - 1] * rho[j];
        }
        const double kk = num / den;
        phi.assign(k, 0.0);
        for (std::size_t j = 1; j < k; ++j) phi[j - 1] = prev[j - 1] - kk * prev[k - j - 1];
        phi[k - 1] = kk;
        prev.swap(phi);
    }
    return prev;
}

// Shrinks towards zero until the transform is defined, then maps to free parameters.
std::vector<double> to_free(std::vector<double> coef, bool ma) {
    for (int attempt = 0; attempt < 30; ++attempt) {
        auto partials = ma ? unconstrain_ma(coef) : unconstrain_ar(coef);
        if (partials) {
            bool tame = true;
            for (double u : *partials) tame = tame && std::abs(u) < 2.5;  // |partial| < ~0.987
            if (tame) return *partials;
        }
        for (double& c : coef) c *= 0.7;
    }
    return std::vector<double>(coef.size(), 0.0);
}

// Two-stage Hannan-Rissanen start values for standardised data z.
std::vector<double> hannan_rissanen(std::span<const double> z, std::size_t p, std::size_t q) {
    const std::size_t n = z.size();
    std::vector<double> phi(p, 0.0), theta(q, 0.0);
    try {
        std::vector<double> resid(n, 0.0);
        std::size_t start = p;
        if (q > 0) {
            const auto heuristic = static_cast<std::size_t>(std::ceil(10.0 * std::log10(static_cast<double>(n))));
            const std::size_t m = std::clamp(std::max(heuristic, p + q), std::size_t{1}, (n - 1) / 3);
            const auto long_ar = yule_walker(z, m);
            for (std::size_t t = m; t < n; ++t) {
                double pred = 0.0;
                for (std::size_t j = 0; j < m; ++j) pred += long_ar[j] * z[t - 1 - j];
                resid[t] = z[t] - pred;
            }
            start = m + q;
        }
        if (start < n && n - start >= p + q + 5) {
            const std::size_t rows = n - start, cols = p + q;
            Eigen::MatrixXd x(rows, cols);
            Eigen::VectorXd y(rows);
            for (std::size_t r = 0; r < rows; ++r) {
                const std::size_t t = start + r;
                y(r) = z[t];
                for (std::size_t i = 0; i < p; ++i) x(r, i) = z[t - 1 - i];
                for (std::size_t k = 0; k < q; ++k) x(r, p + k) = resid[t - 1 - k];
            }
            std::vector<std::string> names(cols);
            const auto fit = linalg::least_squares(x, y, names);
            for (std::size_t i = 0; i < p; ++i) phi[i] = fit.coef(i);
            for (std::size_t k = 0; k < q; ++k) theta[k] = fit.coef(p + k);
        }
    } catch (const DomainError&) {
        std::fill(phi.begin(), phi.end(), 0.0);
        std::fill(theta.begin(), theta.end(), 0.0);
    }
    auto free = to_free(phi, false);
    const auto free_ma = to_free(theta, true);
    free.insert(free.end(), free_ma.begin(), free_ma.end());
    return free;
}

}  // namespace

void ArimaSpec::validate() const {
    if (p < 0 || q < 0) throw DomainError("ARIMA orders must be non-negative");
    if (p + q < 1) throw DomainError("ARIMA needs p + q >= 1");
    if (d < 0 || d > 1) throw DomainError("ARIMA differencing order must be 0 or 1");
}

std::string ArimaSpec::label() const {
    if (q == 0 && d == 0) return "AR(" + std::to_string(p) + ")";
    return "ARIMA(" + std::to_string(p) + "," + std::to_string(d) + "," + std::to_string(q) + ")";
}

DatedSeries ArimaFit::history_series() const { return DatedSeries(history_start, history, "history"); }

ArimaFit fit_ar(const DatedSeries& series, int p, const FitOptions& options) {
    if (p < 1) throw DomainError("fit_ar: p must be positive");
    return fit_arima(series, ArimaSpec{p, 0, 0}, options);
}

ArimaFit fit_arima(const DatedSeries& series, const ArimaSpec& spec, const FitOptions& options) {
    spec.validate();
    const auto p = static_cast<std::size_t>(spec.p), q = static_cast<std::size_t>(spec.q);
    if (series.size() <= static_cast<std::size_t>(spec.d)) throw DomainError("fit_arima: series too short");
    const auto w = difference(series.values(), spec.d);
    const std::size_t n = w.size();
    const std::size_t needed = q == 0 ? 3 * p : 3 * (p + q) + 10;
    if (n <= needed) {
        throw DomainError("fit_arima: " + spec.label() + " needs more than " + std::to_string(needed) +
                          " observations, got " + std::to_string(n));
    }

    double mean = 0.0;
    for (double v : w) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : w) ss += (v - mean) * (v - mean);
    const double scale = std::sqrt(ss / static_cast<double>(n));
    if (!(scale > 1e-9 * std::max(1.0, std::abs(mean)))) {
        throw DomainError("fit_arima: series is numerically constant");
    }
    // Standardising makes the optimisation path invariant to the data's scale.
    std::vector<double> z(n);
    for (std::size_t t = 0; t < n; ++t) z[t] = (w[t] - mean) / scale;

    ArmaLikelihood likelihood(z, p, q);
    ArmaLikelihood::Result scratch;
    const optim::Objective objective = [&](std::span<const double> x) {
        const auto phi = constrain_ar(x.first(p));
        const auto theta = constrain_ma(x.subspan(p, q));
        if (!likelihood.evaluate(phi, theta, scratch, false)) return std::numeric_limits<double>::infinity();
        return scratch.neg_log_likelihood;
    };

    optim::MinimizeOptions opt;
    opt.max_iterations = options.max_iterations;
    opt.rel_tolerance = options.rel_tolerance;
    opt.initial_step = 0.1;

    auto x0 = hannan_rissanen(z, p, q);
    if (!std::isfinite(objective(x0))) std::fill(x0.begin(), x0.end(), 0.0);
    const auto nm = optim::nelder_mead(objective, x0, opt);
    const auto polished = optim::bfgs(objective, nm.x, opt);

    const auto phi = constrain_ar(std::span<const double>(polished.x).first(p));
    const auto theta = constrain_ma(std::span<const double>(polished.x).subspan(p, q));
    if (!polished.converged) {
        std::vector<double> last = phi;
        last.insert(last.end(), theta.begin(), theta.end());
        throw EstimationError("fit_arima: " + spec.label() + " did not converge within " +
                                  std::to_string(options.max_iterations) + " iterations",
                              std::move(last), polished.value);
    }

    ArmaLikelihood::Result final;
    if (!likelihood.evaluate(phi, theta, final, true)) {
        throw EstimationError("fit_arima: " + spec.label() + " likelihood failed at the optimum", phi,
                              polished.value);
    }

    ArimaFit fit;
    fit.spec = spec;
    fit.ar_weights = phi;
    fit.ma_weights = theta;
    fit.mean = mean + scale * final.mean;
    double ar_sum = 0.0;
    for (double c : phi) ar_sum += c;
    fit.intercept = fit.mean * (1.0 - ar_sum);
    fit.innovation_variance = scale * scale * final.sigma2;
    fit.residuals.resize(n);
    for (std::size_t t = 0; t < n; ++t) fit.residuals[t] = scale * final.innovations[t];
    fit.log_likelihood = -final.neg_log_likelihood - static_cast<double>(n) * std::log(scale);
    fit.n_obs = n;
    fit.ar_root_modulus = min_root_modulus(phi);
    std::vector<double> neg_theta(theta);
    for (double& t : neg_theta) t = -t;
    fit.ma_root_modulus = min_root_modulus(neg_theta);
    fit.boundary = fit.ar_root_modulus < 1.0 + kBoundaryMargin || fit.ma_root_modulus < 1.0 + kBoundaryMargin;
    fit.convergence.nelder_mead_iterations = nm.iterations;
    fit.convergence.bfgs_iterations = polished.iterations;
    fit.convergence.evaluations = nm.evaluations + polished.evaluations;
    fit.convergence.converged = true;
    fit.convergence.reason = polished.reason;
    fit.convergence.max_iterations = options.max_iterations;
    fit.convergence.rel_tolerance = options.rel_tolerance;
    fit.history.assign(series.values().begin(), series.values().end());
    fit.history_start = series.start_date();
    return fit;
}

ModelScore information_criteria(const ArimaFit& fit) {
    ModelScore s;
    s.spec = fit.spec;
    s.log_likelihood = fit.log_likelihood;
    s.dof = fit.spec.p + fit.spec.q + 2;
    s.n_obs = fit.n_obs;
    s.aic = -2.0 * fit.log_likelihood + 2.0 * s.dof;
    s.bic = -2.0 * fit.log_likelihood + std::log(static_cast<double>(fit.n_obs)) * s.dof;
    return s;
}

std::string to_string(Criterion c) {
    switch (c) {
        case Criterion::aic: return "aic";
        case Criterion::bic: return "bic";
        case Criterion::parsimony: break;
    }
    return "parsimony";
}

Criterion criterion_from_string(const std::string& name) {
    if (name == "aic" || name == "AIC") return Criterion::aic;
    if (name == "bic" || name == "BIC") return Criterion::bic;
    if (name == "parsimony") return Criterion::parsimony;
    throw DomainError("unknown selection criterion '" + name + "'");
}

Selection select_model(const DatedSeries& series, std::span<const int> p_candidates,
                       std::span<const int> q_candidates, Criterion criterion, const FitOptions& options,
                       unsigned threads) {
    if (p_candidates.empty() || q_candidates.empty()) throw DomainError("select_model: empty candidate grid");

    std::vector<ArimaSpec> grid;
    for (int p : p_candidates) {
        for (int q : q_candidates) grid.push_back({p, 0, q});
    }
    std::vector<std::optional<ArimaFit>> fits(grid.size());
    std::vector<std::string> errors(grid.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
            try {
                fits[i] = fit_arima(series, grid[i], options);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, grid.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    Selection sel{.best = {}, .best_score = {}, .candidates = {}};
    std::optional<std::size_t> best;
    std::vector<std::optional<ModelScore>> scores(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CandidateResult c{grid[i], std::nullopt, errors[i]};
        if (fits[i]) c.score = scores[i] = information_criteria(*fits[i]);
        sel.candidates.push_back(std::move(c));
    }

    auto argmin = [&](auto key) {
        std::optional<std::size_t> arg;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (scores[i] && (!arg || key(*scores[i]) < key(*scores[*arg]))) arg = i;
        }
        return arg;
    };
    switch (criterion) {
        case Criterion::aic:
            best = argmin([](const ModelScore& s) { return s.aic; });
            break;
        case Criterion::bic:
            best = argmin([](const ModelScore& s) { return s.bic; });
            break;
        case Criterion::parsimony: {
            best = argmin([](const ModelScore& s) { return s.bic; });
            if (best) {
                const ModelScore anchor = *scores[*best];
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    if (!scores[i]) continue;
                    const auto& s = *scores[i];
                    const bool near = s.bic == anchor.bic || std::abs(s.aic - anchor.aic) < 1.0;
                    const auto& b = *scores[*best];
                    if (near && (s.dof < b.dof || (s.dof == b.dof && s.bic < b.bic))) best = i;
                }
            }
            break;
        }
    }

    if (!best) {
        std::string msg = "select_model: every candidate failed;";
        for (std::size_t i = 0; i < grid.size(); ++i) msg += " " + grid[i].label() + ": " + errors[i] + ";";
        throw EstimationError(msg);
    }
    sel.best = std::move(*fits[*best]);
    sel.best_score = *scores[*best];
    return sel;
}

DatedSeries forecast(const ArimaFit& fit, int horizon) {
    if (horizon < 1) throw DomainError("forecast: horizon must be at least 1");
    auto w = difference(fit.history, fit.spec.d);
    std::vector<double> e = fit.residuals;
    const std::size_t n = w.size();
    for (int h = 0; h < horizon; ++h) {
        const std::size_t t = n + static_cast<std::size_t>(h);
        double value = fit.intercept;
        for (std::size_t i = 1; i <= fit.ar_weights.size(); ++i) value += fit.ar_weights[i - 1] * w[t - i];
        for (std::size_t k = 1; k <= fit.ma_weights.size() && k <= t; ++k) value += fit.ma_weights[k - 1] * e[t - k];
        w.push_back(value);
        e.push_back(0.0);
    }
    std::vector<double> out(w.begin() + static_cast<std::ptrdiff_t>(n), w.end());
    if (fit.spec.d == 1) {
        double level = fit.history.back();
        for (double& v : out) v = level += v;
    }
    const Date first = fit.history_start + static_cast<long>(fit.history.size());
    return DatedSeries(first, std::move(out), "forecast");
}

DatedSeries in_sample_predictions(const ArimaFit& fit) {
    const auto w = difference(fit.history, fit.spec.d);
    std::vector<double> out(w.size());
    for (std::size_t t = 0; t < w.size(); ++t) out[t] = w[t] - fit.residuals[t];
    if (fit.spec.d == 1) {
        for (std::size_t t = 0; t < out.size(); ++t) out[t] += fit.history[t];
        return DatedSeries(fit.history_start + 1, std::move(out), "fitted");
    }
    return DatedSeries(fit.history_start, std::move(out), "fitted");
}

}  // namespace vaxcast::arima
