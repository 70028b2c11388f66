#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sympfact/mat.hpp"
#include "sympfact/parametrization.hpp"

namespace sympfact {

// Scalar function of a 2d x 2d matrix, minimized over the nine-factor
// parametrization so every iterate stays in the group by construction.
struct Objective {
    std::size_t d = 0;
    std::function<double(const Mat&)> evaluate;
};

struct OptimizerConfig {
    std::size_t max_iters = 1000;
    double step_init = 1.0;
    double step_shrink = 0.5;   // in (0, 1)
    double grad_epsilon = 1e-5;
    double tol_grad = 1e-8;     // stop when the gradient infinity norm drops below this
    std::uint64_t seed = 0;     // reserved for seeded variants; plain descent ignores it
};

struct TracePoint {
    std::size_t iteration = 0;
    double objective = 0.0;
    double grad_norm = 0.0;  // gradient infinity norm
    double residual = 0.0;   // symplecticity relative residual of the iterate
};

struct OptimizerTrace {
    std::vector<TracePoint> points;  // every accepted iterate, starting point included
};

enum class Termination { Converged, MaxIterations, StepUnderflow };

struct MinimizeResult {
    ParamVector params;
    OptimizerTrace trace;
    Termination termination = Termination::Converged;
};

// Central differences across all 9 d(d+1)/2 coordinates, block-major order.
std::vector<double> fd_gradient(const Objective& obj, const ParamVector& p, double eps = 1e-5);

// Gradient descent with backtracking: halve the step until the objective
// strictly decreases. Stops on tol_grad, max_iters, or step underflow.
MinimizeResult minimize(const Objective& obj, const ParamVector& p0, const OptimizerConfig& cfg);

// f(X) = ||X - target||_F^2.
Objective nearest_symplectic_objective(const Mat& target);

}  // namespace sympfact
