#include "sympfact/optimization.hpp"

#include <cmath>
#include <stdexcept>

namespace sympfact {

namespace {

constexpr double kMinStep = 1e-18;

std::vector<double> flatten(const ParamVector& p) {
    std::vector<double> x;
    for (const auto& b : p.blocks) x.insert(x.end(), b.begin(), b.end());
    return x;
}

ParamVector unflatten(const std::vector<double>& x, std::size_t d) {
    const std::size_t block = sym_param_count(d);
    ParamVector p;
    p.d = d;
    p.blocks.resize(9);
    for (std::size_t b = 0; b < 9; ++b)
        p.blocks[b].assign(x.begin() + static_cast<std::ptrdiff_t>(b * block),
                           x.begin() + static_cast<std::ptrdiff_t>((b + 1) * block));
    return p;
}

double eval_flat(const Objective& obj, const std::vector<double>& x, std::size_t d) {
    const double f = obj.evaluate(chain_product(sp_from_params(unflatten(x, d))));
    if (!std::isfinite(f)) throw std::runtime_error("objective returned a non-finite value");
    return f;
}

std::vector<double> grad_flat(const Objective& obj, std::vector<double> x, std::size_t d, double eps) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        x[i] = xi + eps;
        const double fp = eval_flat(obj, x, d);
        x[i] = xi - eps;
        const double fm = eval_flat(obj, x, d);
        x[i] = xi;
        g[i] = (fp - fm) / (2.0 * eps);
    }
    return g;
}

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

void validate(const Objective& obj, const ParamVector& p0, const OptimizerConfig& cfg) {
    if (obj.d == 0 || !obj.evaluate) throw std::invalid_argument("minimize: objective is not set up");
    if (p0.d != obj.d || p0.blocks.size() != 9)
        throw std::invalid_argument("minimize: starting point does not match the objective dimension");
    for (const auto& b : p0.blocks)
        if (b.size() != sym_param_count(p0.d))
            throw std::invalid_argument("minimize: starting block has wrong length");
    if (cfg.max_iters == 0) throw std::invalid_argument("minimize: max_iters must be positive");
    if (!(cfg.step_init > 0.0)) throw std::invalid_argument("minimize: step_init must be positive");
    if (!(cfg.step_shrink > 0.0 && cfg.step_shrink < 1.0))
        throw std::invalid_argument("minimize: step_shrink must lie in (0, 1)");
    if (!(cfg.grad_epsilon > 0.0)) throw std::invalid_argument("minimize: grad_epsilon must be positive");
    if (!(cfg.tol_grad >= 0.0)) throw std::invalid_argument("minimize: tol_grad must be nonnegative");
}

}  // namespace

std::vector<double> fd_gradient(const Objective& obj, const ParamVector& p, double eps) {
    if (obj.d == 0 || !obj.evaluate) throw std::invalid_argument("fd_gradient: objective is not set up");
    if (p.d != obj.d || p.blocks.size() != 9)
        throw std::invalid_argument("fd_gradient: parameters do not match the objective dimension");
    if (!(eps > 0.0)) throw std::invalid_argument("fd_gradient: eps must be positive");
    return grad_flat(obj, flatten(p), p.d, eps);
}

MinimizeResult minimize(const Objective& obj, const ParamVector& p0, const OptimizerConfig& cfg) {
    validate(obj, p0, cfg);
    const std::size_t d = obj.d;

    std::vector<double> x = flatten(p0);
    double f = eval_flat(obj, x, d);

    MinimizeResult out;
    for (std::size_t iter = 0;; ++iter) {
        const std::vector<double> g = grad_flat(obj, x, d, cfg.grad_epsilon);
        const double gn = inf_norm(g);
        const double res = symplecticity_check(chain_product(sp_from_params(unflatten(x, d)))).relative_residual;
        out.trace.points.push_back(TracePoint{iter, f, gn, res});

        if (gn <= cfg.tol_grad) {
            out.termination = Termination::Converged;
            break;
        }
        if (iter >= cfg.max_iters) {
            out.termination = Termination::MaxIterations;
            break;
        }

        double step = cfg.step_init;
        bool accepted = false;
        while (!accepted) {
            std::vector<double> cand = x;
            for (std::size_t i = 0; i < cand.size(); ++i) cand[i] -= step * g[i];
            const double fc = eval_flat(obj, cand, d);
            if (fc < f) {
                x = std::move(cand);
                f = fc;
                accepted = true;
            } else {
                step *= cfg.step_shrink;
                if (step <= kMinStep) break;
            }
        }
        if (!accepted) {
            out.termination = Termination::StepUnderflow;
            break;
        }
    }
    out.params = unflatten(x, d);
    return out;
}

Objective nearest_symplectic_objective(const Mat& target) {
    if (!target.square() || target.rows() % 2 != 0 || target.empty())
        throw std::invalid_argument("nearest_symplectic_objective: target must be square with even dimension");
    Objective obj;
    obj.d = target.rows() / 2;
    obj.evaluate = [target](const Mat& x) {
        const double r = frobenius_norm(x - target);
        return r * r;
    };
    return obj;
}

}  // namespace sympfact
