#include "optim/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace vaxcast::optim {

namespace {

bool small_change(double before, double after, double rel) {
    return std::abs(before - after) <= rel * std::max(1.0, std::abs(after));
}

class Counted {
public:
    explicit Counted(const Objective& f) : f_(f) {}
    double operator()(std::span<const double> x) {
        ++count;
        const double v = f_(x);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    }
    int count = 0;

private:
    const Objective& f_;
};

}  // namespace

MinimizeResult nelder_mead(const Objective& objective, std::vector<double> x0,
                           const MinimizeOptions& options) {
    Counted f(objective);
    const std::size_t d = x0.size();
    MinimizeResult result;
    if (d == 0) {
        result.value = f(x0);
        result.x = std::move(x0);
        result.converged = true;
        result.reason = "no free parameters";
        result.evaluations = f.count;
        return result;
    }

    std::vector<std::vector<double>> simplex(d + 1, x0);
    for (std::size_t i = 0; i < d; ++i) simplex[i + 1][i] += options.initial_step;
    std::vector<double> fv(d + 1);
    for (std::size_t i = 0; i <= d; ++i) fv[i] = f(simplex[i]);

    std::vector<std::size_t> order(d + 1);
    std::vector<double> centroid(d), trial(d), trial2(d);
    auto point = [&](double t, std::vector<double>& out) {
        const auto& worst = simplex[order[d]];
        for (std::size_t j = 0; j < d; ++j) out[j] = centroid[j] + t * (worst[j] - centroid[j]);
    };

    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
        const double best = fv[order[0]], worst = fv[order[d]];
        if (std::isfinite(worst) && small_change(worst, best, options.rel_tolerance)) {
            result.converged = true;
            result.reason = "simplex values within tolerance";
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) centroid[j] += simplex[order[i]][j];
        }
        for (double& c : centroid) c /= static_cast<double>(d);

        point(-1.0, trial);
        const double fr = f(trial);
        const double second_worst = fv[order[d - 1]];
        if (fr < best) {
            point(-2.0, trial2);
            const double fe = f(trial2);
            if (fe < fr) {
                simplex[order[d]] = trial2;
                fv[order[d]] = fe;
            } else {
                simplex[order[d]] = trial;
                fv[order[d]] = fr;
            }
            continue;
        }
        if (fr < second_worst) {
            simplex[order[d]] = trial;
            fv[order[d]] = fr;
            continue;
        }
        // contraction: outside when the reflection beat the worst point
        const bool outside = fr < worst;
        point(outside ? -0.5 : 0.5, trial2);
        const double fc = f(trial2);
        if (fc < (outside ? fr : worst)) {
            simplex[order[d]] = trial2;
            fv[order[d]] = fc;
            continue;
        }
        const auto& bx = simplex[order[0]];
        for (std::size_t i = 1; i <= d; ++i) {
            auto& p = simplex[order[i]];
            for (std::size_t j = 0; j < d; ++j) p[j] = bx[j] + 0.5 * (p[j] - bx[j]);
            fv[order[i]] = f(p);
        }
    }

    const auto best_it = std::min_element(fv.begin(), fv.end());
    result.x = simplex[static_cast<std::size_t>(best_it - fv.begin())];
    result.value = *best_it;
    result.iterations = iter;
    result.evaluations = f.count;
    if (!result.converged) result.reason = "iteration limit";
    return result;
}

MinimizeResult bfgs(const Objective& objective, std::vector<double> x0, const MinimizeOptions& options) {
    Counted f(objective);
    const std::size_t d = x0.size();
    MinimizeResult result;
    std::vector<double> x = std::move(x0);
    double fx = f(x);
    if (d == 0 || !std::isfinite(fx)) {
        result.x = std::move(x);
        result.value = fx;
        result.converged = std::isfinite(fx);
        result.reason = d == 0 ? "no free parameters" : "infeasible start";
        result.evaluations = f.count;
        return result;
    }

    auto gradient = [&](const std::vector<double>& at, std::vector<double>& g) {
        std::vector<double> probe = at;
        for (std::size_t i = 0; i < d; ++i) {
            const double h = 1e-5 * std::max(1.0, std::abs(at[i]));
            probe[i] = at[i] + h;
            const double up = f(probe);
            probe[i] = at[i] - h;
            const double down = f(probe);
            probe[i] = at[i];
            g[i] = std::isfinite(up) && std::isfinite(down) ? (up - down) / (2.0 * h) : 0.0;
        }
    };

    auto reset = [&](std::vector<double>& h) {
        std::fill(h.begin(), h.end(), 0.0);
        for (std::size_t i = 0; i < d; ++i) h[i * d + i] = 1.0;
    };

    std::vector<double> hinv(d * d), g(d), g_new(d), dir(d), x_new(d), s(d), y(d), hy(d);
    reset(hinv);
    gradient(x, g);
    bool fresh = true;  // hinv is the identity
    int quiet = 0;

    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        for (std::size_t i = 0; i < d; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < d; ++j) acc -= hinv[i * d + j] * g[j];
            dir[i] = acc;
        }
        double slope = std::inner_product(g.begin(), g.end(), dir.begin(), 0.0);
        if (!(slope < 0.0)) {
            reset(hinv);
            fresh = true;
            for (std::size_t i = 0; i < d; ++i) dir[i] = -g[i];
            slope = -std::inner_product(g.begin(), g.end(), g.begin(), 0.0);
            if (!(slope < 0.0)) {
                result.converged = true;
                result.reason = "zero gradient";
                break;
            }
        }
        // keep the first trial step bounded in the unconstrained space
        double step = 1.0;
        const double norm = std::sqrt(std::inner_product(dir.begin(), dir.end(), dir.begin(), 0.0));
        if (norm * step > 5.0) step = 5.0 / norm;

        double f_new = fx;
        bool accepted = false;
        for (int k = 0; k < 50; ++k) {
            for (std::size_t i = 0; i < d; ++i) x_new[i] = x[i] + step * dir[i];
            f_new = f(x_new);
            if (std::isfinite(f_new) && f_new <= fx + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (fresh) {
                result.converged = true;
                result.reason = "no descent at numerical precision";
                break;
            }
            reset(hinv);
            fresh = true;
            continue;
        }

        gradient(x_new, g_new);
        for (std::size_t i = 0; i < d; ++i) {
            s[i] = x_new[i] - x[i];
            y[i] = g_new[i] - g[i];
        }
        const double f_old = fx;
        x.swap(x_new);
        g.swap(g_new);
        fx = f_new;
        // two quiet steps in a row guard against one heavily backtracked step
        quiet = small_change(f_old, fx, options.rel_tolerance) ? quiet + 1 : 0;
        if (quiet >= 2) {
            result.converged = true;
            result.reason = "relative objective change within tolerance";
            ++iter;
            break;
        }

        const double sy = std::inner_product(s.begin(), s.end(), y.begin(), 0.0);
        if (sy > 1e-12) {
            if (fresh) {
                const double yy = std::inner_product(y.begin(), y.end(), y.begin(), 0.0);
                for (std::size_t i = 0; i < d; ++i) hinv[i * d + i] = sy / yy;
            }
            for (std::size_t i = 0; i < d; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < d; ++j) acc += hinv[i * d + j] * y[j];
                hy[i] = acc;
            }
            const double yhy = std::inner_product(y.begin(), y.end(), hy.begin(), 0.0);
            const double rho = 1.0 / sy;
            const double coef = (1.0 + yhy * rho) * rho;
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    hinv[i * d + j] += coef * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
                }
            }
            fresh = false;
        }
    }

    result.x = std::move(x);
    result.value = fx;
    result.iterations = iter;
    result.evaluations = f.count;
    if (result.reason.empty()) result.reason = "iteration limit";
    return result;
}

}  // namespace vaxcast::optim
