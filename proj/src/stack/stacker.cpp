#include "vaxcast/stack/stacker.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <vector>

#include "linalg/least_squares.hpp"
#include "vaxcast/error.hpp"

namespace vaxcast::stack {

namespace {

using Vec3 = std::array<double, 3>;

void check_inputs(const DatedSeries& actual, const DatedSeries& clinical, const DatedSeries& web) {
    require_same_dates(actual, clinical, "stacking (clinical predictions)");
    require_same_dates(actual, web, "stacking (web predictions)");
    if (actual.size() < 3) throw DomainError("stacking needs at least 3 dates");
}

// Dual of  sum_t V(y_t - z_t.w) + 1/2 sum_j pen_j w_j^2  over alpha in [-1, 1]^n:
//   D(alpha) = alpha.y - eps |alpha|_1 - 1/2 sum_j v_j^2 / pen_j,  v = sum_t alpha_t z_t,
// with w_j = v_j / pen_j. A zero penalty adds the constraint v_j = 0.
struct Problem {
    std::size_t d = 3;
    std::vector<Vec3> z;
    std::vector<double> y;
    double eps = 0.0;
    Vec3 pen{};

    std::size_t n() const { return y.size(); }

    double primal(const Vec3& w) const {
        double total = 0.0;
        for (std::size_t t = 0; t < n(); ++t) {
            double fit = 0.0;
            for (std::size_t j = 0; j < d; ++j) fit += z[t][j] * w[j];
            const double r = std::abs(y[t] - fit);
            total += r < eps ? 0.0 : r - eps;
        }
        for (std::size_t j = 0; j < d; ++j) total += 0.5 * pen[j] * w[j] * w[j];
        return total;
    }

    Vec3 sum_az(const std::vector<double>& alpha) const {
        Vec3 v{};
        for (std::size_t t = 0; t < n(); ++t) {
            for (std::size_t j = 0; j < d; ++j) v[j] += alpha[t] * z[t][j];
        }
        return v;
    }

    double dual(const std::vector<double>& alpha, const Vec3& v) const {
        double total = 0.0;
        for (std::size_t t = 0; t < n(); ++t) total += alpha[t] * y[t] - eps * std::abs(alpha[t]);
        for (std::size_t j = 0; j < d; ++j) {
            if (pen[j] > 0.0) total -= 0.5 * v[j] * v[j] / pen[j];
        }
        return total;
    }

    Vec3 weights(const Vec3& v) const {
        Vec3 w{};
        for (std::size_t j = 0; j < d; ++j) w[j] = v[j] / pen[j];
        return w;
    }

    double gap(const Vec3& w, const std::vector<double>& alpha, const Vec3& v) const {
        for (std::size_t j = 0; j < d; ++j) {
            if (pen[j] == 0.0 && std::abs(v[j]) > 1e-9 * static_cast<double>(n())) {
                return std::numeric_limits<double>::infinity();  // dual infeasible
            }
        }
        return primal(w) - dual(alpha, v);
    }
};

struct Solution {
    Vec3 w{};
    std::vector<double> alpha;
    double objective = 0.0;
    double gap = 0.0;
};

// Solves the stationarity system with the multipliers of `free` unknown (their
// points sit on the tube edge on side `side`) and every other multiplier fixed.
// Returns nothing when the result is not dual-feasible.
std::optional<Solution> polish(const Problem& pb, const std::vector<double>& alpha,
                               const std::vector<std::size_t>& free, const std::vector<double>& side) {
    const std::size_t d = pb.d, m = free.size();
    const auto dim = static_cast<Eigen::Index>(d + m);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);
    std::vector<bool> is_free(pb.n(), false);
    for (std::size_t f : free) is_free[f] = true;
    for (std::size_t j = 0; j < d; ++j) {
        const auto row = static_cast<Eigen::Index>(j);
        a(row, row) = pb.pen[j];
        for (std::size_t k = 0; k < m; ++k) a(row, static_cast<Eigen::Index>(d + k)) = -pb.z[free[k]][j];
        for (std::size_t t = 0; t < pb.n(); ++t) {
            if (!is_free[t]) b(row) += alpha[t] * pb.z[t][j];
        }
    }
    for (std::size_t k = 0; k < m; ++k) {
        const auto row = static_cast<Eigen::Index>(d + k);
        for (std::size_t j = 0; j < d; ++j) a(row, static_cast<Eigen::Index>(j)) = pb.z[free[k]][j];
        b(row) = pb.y[free[k]] - side[k] * pb.eps;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) return std::nullopt;
    const Eigen::VectorXd x = lu.solve(b);
    if (!x.allFinite()) return std::nullopt;

    Solution s;
    s.alpha = alpha;
    for (std::size_t k = 0; k < m; ++k) {
        const double v = x(static_cast<Eigen::Index>(d + k));
        if (std::abs(v) > 1.0 || (pb.eps > 0.0 && v * side[k] < 0.0)) return std::nullopt;
        s.alpha[free[k]] = v;
    }
    for (std::size_t j = 0; j < d; ++j) s.w[j] = x(static_cast<Eigen::Index>(j));
    const Vec3 v = pb.sum_az(s.alpha);
    s.objective = pb.primal(s.w);
    s.gap = pb.gap(s.w, s.alpha, v);
    return s;
}

// Active set read off the dual iterate: interior multipliers are free.
std::optional<Solution> polish_dual(const Problem& pb, const std::vector<double>& alpha) {
    std::vector<std::size_t> free;
    std::vector<double> side;
    for (std::size_t t = 0; t < pb.n(); ++t) {
        if (alpha[t] != 0.0 && std::abs(alpha[t]) < 1.0) {
            free.push_back(t);
            side.push_back(alpha[t] > 0.0 ? 1.0 : -1.0);
        }
    }
    return polish(pb, alpha, free, side);
}

// Active set read off the primal residuals: every subset of at most d of the
// points nearest the tube edge is tried as the edge set. The other points take
// the multiplier their residual implies or, as a second guess, the rounded
// dual iterate. Keeps the feasible candidate with the smallest gap.
std::optional<Solution> polish_primal(const Problem& pb, const Vec3& w, const std::vector<double>& hint) {
    const std::size_t n = pb.n();
    std::vector<double> resid(n), by_resid(n, 0.0), by_hint(n, 0.0);
    std::vector<std::size_t> order(n);
    for (std::size_t t = 0; t < n; ++t) {
        double fit = 0.0;
        for (std::size_t j = 0; j < pb.d; ++j) fit += pb.z[t][j] * w[j];
        resid[t] = pb.y[t] - fit;
        if (std::abs(resid[t]) > pb.eps) by_resid[t] = resid[t] > 0.0 ? 1.0 : -1.0;
        by_hint[t] = hint[t] >= 0.5 ? 1.0 : (hint[t] <= -0.5 ? -1.0 : 0.0);
        order[t] = t;
    }
    const std::size_t near = std::min<std::size_t>(n, pb.d + 4);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(near), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          const double da = std::abs(std::abs(resid[a]) - pb.eps);
                          const double db = std::abs(std::abs(resid[b]) - pb.eps);
                          return da < db || (da == db && a < b);
                      });

    std::optional<Solution> best;
    for (const auto* guess : {&by_resid, &by_hint}) {
        for (unsigned mask = 0; mask < (1u << near); ++mask) {
            if (static_cast<std::size_t>(std::popcount(mask)) > pb.d) continue;
            std::vector<std::size_t> free;
            std::vector<double> side;
            std::vector<double> alpha = by_resid;
            for (std::size_t k = 0; k < near; ++k) {
                const std::size_t t = order[k];
                if (mask & (1u << k)) {
                    free.push_back(t);
                    side.push_back(resid[t] >= 0.0 ? 1.0 : -1.0);
                } else {
                    alpha[t] = (*guess)[t];
                }
            }
            auto s = polish(pb, alpha, free, side);
            if (s && (!best || s->gap < best->gap)) best = std::move(s);
        }
    }
    return best;
}

std::optional<Solution> polish_any(const Problem& pb, const std::vector<double>& alpha, const Vec3& w) {
    auto a = polish_dual(pb, alpha);
    auto b = polish_primal(pb, w, alpha);
    if (a && (!b || a->gap <= b->gap)) return a;
    return b;
}

// Newton's method on the loss with its kinks rounded off: within delta of the
// tube edge the loss is quadratic, u^2 / (2 delta) for u = |r| - eps. delta
// shrinks tenfold per stage, each stage warm-started from the last. The
// rounded loss' slope at each point is the dual multiplier estimate.
Solution solve_smoothed(const Problem& pb, Vec3 w, const SvrOptions& options) {
    const std::size_t n = pb.n(), d = pb.d;
    double scale = pb.eps;
    for (double v : pb.y) scale = std::max(scale, std::abs(v));
    scale = std::max(scale, 1e-300);

    std::vector<double> alpha(n, 0.0);
    auto evaluate = [&](const Vec3& at, double delta, Vec3* grad, Eigen::Matrix3d* hess) {
        double f = 0.0;
        if (grad) *grad = Vec3{};
        if (hess) hess->setZero();
        for (std::size_t t = 0; t < n; ++t) {
            double fit = 0.0;
            for (std::size_t j = 0; j < d; ++j) fit += pb.z[t][j] * at[j];
            const double r = pb.y[t] - fit;
            const double u = std::abs(r) - pb.eps;
            const double sign = r >= 0.0 ? 1.0 : -1.0;
            double slope = 0.0;
            if (u > delta) {
                f += u - 0.5 * delta;
                slope = 1.0;
            } else if (u > 0.0) {
                f += u * u / (2.0 * delta);
                slope = u / delta;
                if (hess) {
                    for (std::size_t i = 0; i < d; ++i) {
                        for (std::size_t j = 0; j < d; ++j) {
                            (*hess)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
                                pb.z[t][i] * pb.z[t][j] / delta;
                        }
                    }
                }
            }
            if (grad) {
                for (std::size_t j = 0; j < d; ++j) (*grad)[j] -= slope * sign * pb.z[t][j];
            }
            alpha[t] = slope * sign;
        }
        for (std::size_t j = 0; j < d; ++j) {
            f += 0.5 * pb.pen[j] * at[j] * at[j];
            if (grad) (*grad)[j] += pb.pen[j] * at[j];
            if (hess) (*hess)(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) += pb.pen[j];
        }
        return f;
    };

    const auto dim = static_cast<Eigen::Index>(d);
    int steps = 0;
    for (double delta = 0.1 * scale; delta >= 1e-15 * scale; delta *= 0.1) {
        for (int it = 0; it < 1000 && steps < options.max_steps; ++it, ++steps) {
            Vec3 g;
            Eigen::Matrix3d h;
            const double f = evaluate(w, delta, &g, &h);
            const Eigen::MatrixXd hd = h.topLeftCorner(dim, dim);
            Eigen::VectorXd gd(dim);
            for (std::size_t j = 0; j < d; ++j) gd(static_cast<Eigen::Index>(j)) = g[j];
            if (gd.lpNorm<Eigen::Infinity>() == 0.0) break;

            // damp only as far as needed to make the system positive definite
            Eigen::VectorXd step;
            double tau = 0.0;
            for (int tries = 0; tries < 40; ++tries) {
                Eigen::LLT<Eigen::MatrixXd> llt(hd + tau * Eigen::MatrixXd::Identity(dim, dim));
                if (llt.info() == Eigen::Success) {
                    step = -llt.solve(gd);
                    if (step.allFinite()) break;
                }
                tau = tau == 0.0 ? 1e-12 * std::max(1.0, hd.diagonal().cwiseAbs().maxCoeff()) : tau * 10.0;
                step.resize(0);
            }
            if (step.size() == 0) break;
            const double slope = gd.dot(step);
            if (!(slope < 0.0)) break;

            double t = 1.0;
            Vec3 trial = w;
            bool moved = false;
            for (int halve = 0; halve < 60; ++halve, t *= 0.5) {
                for (std::size_t j = 0; j < d; ++j) trial[j] = w[j] + t * step(static_cast<Eigen::Index>(j));
                if (evaluate(trial, delta, nullptr, nullptr) <= f + 1e-4 * t * slope) {
                    moved = true;
                    break;
                }
            }
            if (!moved) break;
            double change = 0.0, size = 1.0;
            for (std::size_t j = 0; j < d; ++j) {
                change = std::max(change, std::abs(trial[j] - w[j]));
                size = std::max(size, std::abs(w[j]));
            }
            w = trial;
            if (change <= 1e-15 * size) break;
        }
    }
    evaluate(w, 1e-15 * scale, nullptr, nullptr);

    Solution best;
    best.w = w;
    best.alpha = alpha;
    best.objective = pb.primal(w);
    best.gap = pb.gap(w, alpha, pb.sum_az(alpha));
    if (auto p = polish_any(pb, best.alpha, best.w); p && p->gap < best.gap) {
        best = std::move(*p);
    }
    return best;
}

Problem make_problem(const DatedSeries& actual, const DatedSeries& clinical, const DatedSeries& web,
                     const SvrParams& params) {
    Problem pb;
    pb.d = 3;
    pb.eps = params.epsilon;
    pb.pen = {params.lambda, params.lambda, params.lambda};
    for (std::size_t t = 0; t < actual.size(); ++t) {
        pb.z.push_back({1.0, clinical[t], web[t]});
        pb.y.push_back(actual[t]);
    }
    return pb;
}

[[noreturn]] void not_converged(const Solution& s) {
    throw EstimationError("stack_svr: duality gap " + std::to_string(s.gap) + " did not close",
                          {s.w.begin(), s.w.end()}, s.objective);
}

}  // namespace

std::string to_string(StackMethod m) { return m == StackMethod::ols ? "ols" : "svr"; }

void SvrParams::validate() const {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw DomainError("svr: epsilon must be finite and >= 0");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("svr: lambda must be finite and > 0");
}

StackWeights stack_ols(const DatedSeries& actual, const DatedSeries& clinical, const DatedSeries& web) {
    check_inputs(actual, clinical, web);
    const auto n = static_cast<Eigen::Index>(actual.size());
    Eigen::MatrixXd x(n, 3);
    Eigen::VectorXd y(n);
    for (Eigen::Index t = 0; t < n; ++t) {
        const auto i = static_cast<std::size_t>(t);
        x(t, 0) = 1.0;
        x(t, 1) = clinical[i];
        x(t, 2) = web[i];
        y(t) = actual[i];
    }
    const std::string names[] = {"intercept", "clinical", "web"};
    const auto fit = linalg::least_squares(x, y, names);
    return {fit.coef(0), fit.coef(1), fit.coef(2), StackMethod::ols, std::nullopt};
}

double svr_loss(double r, const SvrParams& params) {
    const double a = std::abs(r);
    return a < params.epsilon ? 0.0 : a - params.epsilon;
}

double svr_objective(const StackWeights& w, const DatedSeries& actual, const DatedSeries& clinical,
                     const DatedSeries& web, const SvrParams& params) {
    check_inputs(actual, clinical, web);
    double total = 0.0;
    for (std::size_t t = 0; t < actual.size(); ++t) {
        total += svr_loss(actual[t] - (w.intercept + w.clinical_weight * clinical[t] + w.web_weight * web[t]), params);
    }
    double penalty = w.clinical_weight * w.clinical_weight + w.web_weight * w.web_weight;
    if (params.penalize_intercept) penalty += w.intercept * w.intercept;
    return total + 0.5 * params.lambda * penalty;
}

StackWeights stack_svr(const DatedSeries& actual, const DatedSeries& clinical, const DatedSeries& web,
                       const SvrParams& params, const SvrOptions& options) {
    check_inputs(actual, clinical, web);
    params.validate();
    Problem pb = make_problem(actual, clinical, web, params);
    if (!params.penalize_intercept) pb.pen[0] = 0.0;
    const Solution sol = solve_smoothed(pb, options.start.value_or(Vec3{0.0, 0.0, 0.0}), options);
    if (!(sol.gap <= options.tolerance * std::max(1.0, std::abs(sol.objective)))) not_converged(sol);
    return {sol.w[0], sol.w[1], sol.w[2], StackMethod::svr, params};
}

DatedSeries stack_predict(const StackWeights& w, const DatedSeries& clinical, const DatedSeries& web) {
    require_same_dates(clinical, web, "stack_predict");
    std::vector<double> out(clinical.size());
    for (std::size_t t = 0; t < out.size(); ++t) {
        out[t] = w.intercept + w.clinical_weight * clinical[t] + w.web_weight * web[t];
    }
    return {clinical.start_date(), std::move(out), "stacked"};
}

}  // namespace vaxcast::stack
