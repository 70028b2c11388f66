// Command-line front end: check | factor | synth | complete | optimize.
//
// Exit codes (stable for scripting):
//   0  success
//   1  domain precondition failure (bad matrix for the requested operation,
//      failed check, reconstruction above tolerance)
//   2  I/O or parse failure (unreadable/malformed files, bad usage)
//   3  optimizer stopped without reaching the gradient tolerance

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sympfact/factorization.hpp"
#include "sympfact/io.hpp"
#include "sympfact/kernel.hpp"
#include "sympfact/optimization.hpp"
#include "sympfact/parametrization.hpp"
#include "sympfact/symplectic.hpp"

namespace {

using namespace sympfact;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitIo = 2;
constexpr int kExitNoConverge = 3;

// Tolerance precedence: --tol flag, then SYMPFACT_TOL, then the per-command
// default.
double resolved_tol(const std::optional<double>& flag, double fallback) {
    if (flag) {
        if (!(*flag > 0.0)) {
            throw std::invalid_argument("--tol must be positive");
        }
        return *flag;
    }
    if (const char* env = std::getenv("SYMPFACT_TOL")) {
        char* end = nullptr;
        double v = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(v > 0.0)) {
            throw IoError(std::string("SYMPFACT_TOL: not a positive number: '") + env + "'");
        }
        return v;
    }
    return fallback;
}

// "dir/m.csv" + ".chain.json" -> "dir/m.chain.json"
std::string stem_plus(const std::string& path, const std::string& suffix) {
    std::size_t slash = path.find_last_of("/\\");
    std::size_t dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return path + suffix;
    }
    return path.substr(0, dot) + suffix;
}

void print_report(const CheckReport& r) {
    std::printf("residual %.17g\n", r.residual);
    std::printf("relative_residual %.17g\n", r.relative_residual);
    std::printf("tolerance %.17g\n", r.tolerance);
    std::printf("passed %s\n", r.passed ? "true" : "false");
}

int cmd_check(const std::string& input, const std::optional<double>& tol_flag) {
    double tol = resolved_tol(tol_flag, 1e-10);
    Mat h = read_matrix(input);
    CheckReport r = symplecticity_check(h, tol);
    print_report(r);
    return r.passed ? kExitOk : kExitDomain;
}

int cmd_factor(const std::string& input, const std::string& mode, const std::string& variant,
               std::string out, bool emit_params, bool force,
               const std::optional<double>& tol_flag) {
    double tol = resolved_tol(tol_flag, 1e-8);
    Mat h = read_matrix(input);

    if (!force) {
        CheckReport chk = symplecticity_check(h, tol);
        if (!chk.passed) {
            std::fprintf(stderr,
                         "input failed symplecticity check (relative residual %.3g > %.3g); "
                         "use --force to factor anyway\n",
                         chk.relative_residual, chk.tolerance);
            return kExitDomain;
        }
    }

    FactorChain chain;
    bool square_form = false;  // spp factors H = L * L^T; others factor H directly
    if (mode == "ulu") {
        chain = ulu_chain(unit_ulu(h));
    } else if (mode == "unit9") {
        chain = unit_triangular_9(h);
    } else if (mode == "spn8") {
        chain = spn_factor_8(h);
    } else if (mode == "ldu") {
        LduVariant v = LduVariant::DiagCenter;
        if (variant == "left") {
            v = LduVariant::DiagLeft;
        } else if (variant == "right") {
            v = LduVariant::DiagRight;
        } else if (variant != "center") {
            throw std::invalid_argument("--variant must be left, center, or right");
        }
        chain = ldu_factor(h, v);
    } else if (mode == "spp") {
        chain = spp_factor(h);
        square_form = true;
    } else if (mode == "spm") {
        chain = spm_chain(spm_factor(h));
    } else {
        throw std::invalid_argument("--mode must be one of ulu, unit9, spn8, ldu, spp, spm");
    }

    Mat recon = chain_product(chain);
    if (square_form) {
        recon = mat_mul(recon, transpose(recon));
    }
    double res = frobenius_norm(recon - h) / (1.0 + frobenius_norm(h));

    if (out.empty()) {
        out = stem_plus(input, ".chain.json");
    }
    write_chain(out, chain);

    std::printf("mode %s\n", mode.c_str());
    std::printf("factors %zu\n", chain.factors.size());
    std::printf("chain %s\n", out.c_str());
    if (emit_params) {
        if (mode == "unit9") {
            std::string ppath = stem_plus(out, ".params.json");
            write_params(ppath, factor_to_params(chain));
            std::printf("params %s\n", ppath.c_str());
        } else {
            std::fprintf(stderr, "--emit-params only applies to --mode unit9; ignored\n");
        }
    }
    if (square_form) {
        std::printf("reconstruction L*L^T\n");
    }
    std::printf("reconstruction_residual %.17g\n", res);
    std::printf("passed %s\n", res <= tol ? "true" : "false");
    return res <= tol ? kExitOk : kExitDomain;
}

int cmd_synth(const std::string& kind, std::size_t d, unsigned seed, const std::string& out) {
    Mat h;
    std::string params_path = stem_plus(out, ".params.json");
    if (kind == "sp") {
        ParamVector p = random_sp_params(d, seed);
        h = chain_product(sp_from_params(p));
        write_params(params_path, p);
    } else if (kind == "spp") {
        ParamVector p = random_spp_params(d, seed);
        Mat l = chain_product(spp_from_params(p));
        h = mat_mul(l, transpose(l));
        write_params(params_path, p);
    } else if (kind == "sps") {
        SpsParams p = random_sps_params(d, seed);
        h = sps_from_params(p);
        write_sps_params(params_path, p);
    } else {
        throw std::invalid_argument("--kind must be one of sp, spp, sps");
    }
    write_matrix(out, h);
    CheckReport r = symplecticity_check(h);
    std::printf("kind %s\n", kind.c_str());
    std::printf("matrix %s\n", out.c_str());
    std::printf("params %s\n", params_path.c_str());
    std::printf("residual %.17g\n", r.relative_residual);
    return kExitOk;
}

int cmd_complete(const std::string& input, std::string out,
                 const std::optional<double>& tol_flag) {
    double tol = resolved_tol(tol_flag, 1e-10);
    Mat a = read_matrix(input);
    Mat h = complete_symplectic(a);
    if (out.empty()) {
        out = stem_plus(input, ".completed.json");
    }
    write_matrix(out, h);
    CheckReport r = symplecticity_check(h, tol);
    std::printf("matrix %s\n", out.c_str());
    print_report(r);
    return r.passed ? kExitOk : kExitDomain;
}

int cmd_optimize(const std::string& target_path, std::string out, const std::string& trace_out,
                 const OptimizerConfig& cfg, double init_scale, unsigned seed) {
    Mat target = read_matrix(target_path);
    Objective obj = nearest_symplectic_objective(target);

    ParamVector p0;
    p0.d = obj.d;
    if (init_scale == 0.0) {
        p0.blocks.assign(9, std::vector<double>(sym_param_count(obj.d), 0.0));
    } else {
        p0 = random_sp_params(obj.d, seed);
        for (auto& b : p0.blocks) {
            for (auto& v : b) {
                v *= init_scale;
            }
        }
    }

    MinimizeResult res = minimize(obj, p0, cfg);
    Mat final_h = chain_product(sp_from_params(res.params));

    if (out.empty()) {
        out = stem_plus(target_path, ".opt.json");
    }
    write_matrix(out, final_h);
    std::string params_path = stem_plus(out, ".params.json");
    write_params(params_path, res.params);
    if (!trace_out.empty()) {
        write_trace_csv(trace_out, res.trace);
    }

    const TracePoint& last = res.trace.points.back();
    const char* term = res.termination == Termination::Converged        ? "converged"
                       : res.termination == Termination::MaxIterations ? "max_iterations"
                                                                        : "step_underflow";
    std::printf("objective %.17g\n", last.objective);
    std::printf("iterations %zu\n", last.iteration);
    std::printf("grad_norm %.17g\n", last.grad_norm);
    std::printf("termination %s\n", term);
    std::printf("matrix %s\n", out.c_str());
    std::printf("params %s\n", params_path.c_str());
    if (!trace_out.empty()) {
        std::printf("trace %s\n", trace_out.c_str());
    }
    return res.termination == Termination::Converged ? kExitOk : kExitNoConverge;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Factorizations, parametrizations, and optimization over real symplectic matrices"};
    app.require_subcommand(1);

    std::string input, out, mode, variant = "center", kind, trace_out;
    bool emit_params = false, force = false;
    std::optional<double> tol_flag;
    std::size_t d = 1;
    unsigned seed = 0;
    double init_scale = 0.0;
    OptimizerConfig cfg;

    CLI::App* check = app.add_subcommand("check", "Verify H^T J H = J for a matrix file");
    check->add_option("input", input, "matrix file (.csv or .json)")->required();
    check->add_option("--tol", tol_flag, "relative residual tolerance (default 1e-10)");

    CLI::App* factor = app.add_subcommand("factor", "Factor a symplectic matrix into a chain");
    factor->add_option("input", input, "matrix file (.csv or .json)")->required();
    factor->add_option("--mode", mode, "ulu | unit9 | spn8 | ldu | spp | spm")->required();
    factor->add_option("--variant", variant, "ldu diagonal position: left | center | right");
    factor->add_option("--out", out, "chain output path (default: input stem + .chain.json)");
    factor->add_flag("--emit-params", emit_params, "also write parameter blocks (unit9 only)");
    factor->add_flag("--force", force, "skip the symplecticity pre-check");
    factor->add_option("--tol", tol_flag, "residual tolerance (default 1e-8)");

    CLI::App* synth = app.add_subcommand("synth", "Draw a random matrix from a parametrized family");
    synth->add_option("--kind", kind, "sp | spp | sps")->required();
    synth->add_option("--d", d, "half-dimension (matrix is 2d x 2d)")->required()
        ->check(CLI::PositiveNumber);
    synth->add_option("--seed", seed, "RNG seed (default 0)");
    synth->add_option("--out", out, "matrix output path")->required();

    CLI::App* complete = app.add_subcommand("complete", "Extend a 2d x d symmetric pair to a symplectic matrix");
    complete->add_option("input", input, "matrix file (2d x d)")->required();
    complete->add_option("--out", out, "output path (default: input stem + .completed.json)");
    complete->add_option("--tol", tol_flag, "check tolerance (default 1e-10)");

    CLI::App* optimize = app.add_subcommand("optimize", "Gradient descent toward the nearest symplectic matrix");
    optimize->add_option("target", input, "target matrix file (2d x 2d)")->required();
    optimize->add_option("--out", out, "final matrix path (default: target stem + .opt.json)");
    optimize->add_option("--trace-out", trace_out, "iteration trace CSV path");
    optimize->add_option("--max-iters", cfg.max_iters, "iteration cap (default 1000)");
    optimize->add_option("--step-init", cfg.step_init, "initial step size (default 1)");
    optimize->add_option("--step-shrink", cfg.step_shrink, "backtracking factor (default 0.5)");
    optimize->add_option("--grad-eps", cfg.grad_epsilon, "finite-difference step (default 1e-5)");
    optimize->add_option("--tol-grad", cfg.tol_grad, "gradient norm stop (default 1e-8)");
    optimize->add_option("--seed", seed, "seed for the random start (default 0)");
    optimize->add_option("--init-scale", init_scale,
                         "random start scale; 0 starts from the identity (default 0)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitIo;
    }

    try {
        if (*check) {
            return cmd_check(input, tol_flag);
        }
        if (*factor) {
            return cmd_factor(input, mode, variant, out, emit_params, force, tol_flag);
        }
        if (*synth) {
            return cmd_synth(kind, d, seed, out);
        }
        if (*complete) {
            return cmd_complete(input, out, tol_flag);
        }
        if (*optimize) {
            cfg.seed = seed;
            return cmd_optimize(input, out, trace_out, cfg, init_scale, seed);
        }
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDomain;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDomain;
    }
    return kExitIo;  // unreachable: require_subcommand(1)
}
