#pragma once

// Derivative-free and quasi-Newton minimizers for small smooth problems.
// Objectives may return +inf to mark infeasible points.

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace vaxcast::optim {

using Objective = std::function<double(std::span<const double>)>;

struct MinimizeOptions {
    int max_iterations = 500;
    /// Stop once successive objective values differ by less than
    /// rel_tolerance * max(1, |f|).
    double rel_tolerance = 1e-8;
    double initial_step = 0.1;  ///< Nelder-Mead simplex edge
};

struct MinimizeResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    std::string reason;
};

MinimizeResult nelder_mead(const Objective& f, std::vector<double> x0, const MinimizeOptions& options);

/// BFGS with central-difference gradients and Armijo backtracking.
MinimizeResult bfgs(const Objective& f, std::vector<double> x0, const MinimizeOptions& options);

}  // namespace vaxcast::optim
