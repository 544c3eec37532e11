// credinet command line: reproducible experiments over the credit-network
// trust model. Subcommands: simulate, sweep, master-eq, mean-field,
// phase-diagram. Exit codes: 0 success, 1 usage error, 2 numerical failure.
#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "credinet/csv.hpp"
#include "credinet/dynamics.hpp"
#include "credinet/master_eq.hpp"
#include "credinet/mean_field.hpp"
#include "credinet/params.hpp"

namespace {

constexpr const char* kVersion = "credinet 0.1.0";

using namespace credinet;

struct Output {
    std::ofstream file;
    std::ostream* os = &std::cout;
};

/// Resolves --out against CREDINET_OUT_DIR when the path is relative and the
/// variable is set; empty path means stdout.
Output open_output(const std::string& path) {
    Output out;
    if (path.empty()) return out;
    std::filesystem::path p(path);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("CREDINET_OUT_DIR")) p = std::filesystem::path(dir) / p;
    }
    out.file.open(p);
    if (!out.file) throw CLI::ValidationError("--out", "cannot open '" + p.string() + "' for writing");
    out.os = &out.file;
    return out;
}

std::string describe(const Params& p) {
    std::ostringstream ss;
    ss << "gamma=" << p.gamma << " lambda=" << p.lambda << " nu=" << p.nu
       << " b0=" << p.b0 << " c=" << p.c << " n=" << p.n_agents;
    return ss.str();
}

std::string dir_name(Direction d) { return d == Direction::Up ? "up" : "down"; }

std::vector<double> linspace(double from, double to, int steps) {
    std::vector<double> v(steps);
    if (steps == 1) {
        v[0] = from;
        return v;
    }
    for (int i = 0; i < steps; ++i) v[i] = from + (to - from) * i / (steps - 1);
    return v;
}

void emit_sweep_rows(CsvWriter& csv, const std::vector<SweepRow>& rows) {
    for (const auto& r : rows)
        csv.row({format_sci(r.c), format_sci(r.lambda), format_sci(r.nu),
                 format_sci(r.b0), dir_name(r.direction), format_sci(r.rho_mean),
                 format_sci(r.rho_std), format_sci(r.default_rate)});
}

const char* phase_name(Phase ph) {
    switch (ph) {
        case Phase::Dense: return "D";
        case Phase::Sparse: return "S";
        case Phase::Coexistence: return "CO";
    }
    return "?";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"credit-network trust dynamics: simulation, master equation, mean field"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config")
        ->description("key = value defaults under a [subcommand] section; flags override");
    app.require_subcommand(1);

    Params params;  // defaults follow the density/phase-diagram figures
    params.nu = 2.0;
    params.b0 = 2.0;
    std::uint64_t seed = 1;
    std::string out_path;
    auto add_common = [&](CLI::App* sub) {
        sub->fallthrough();  // app-level flags (--config) work after the subcommand too
        sub->add_option("--gamma", params.gamma, "loan formation rate per agent")
            ->capture_default_str();
        sub->add_option("--lambda", params.lambda, "maturation rate per link")
            ->capture_default_str();
        sub->add_option("--nu", params.nu, "disclosure rate per agent")->capture_default_str();
        sub->add_option("--b0", params.b0, "liquid assets per agent")->capture_default_str();
        sub->add_option("--c", params.c, "cost of miscoordination")->capture_default_str();
        sub->add_option("--n", params.n_agents, "number of agents")->capture_default_str();
        sub->add_option("--seed", seed, "base RNG seed")->capture_default_str();
        sub->add_option("--out", out_path, "output file (default stdout; relative paths use CREDINET_OUT_DIR)");
    };

    // simulate
    RunSettings settings;
    bool dense_init = false;
    auto* sim = app.add_subcommand("simulate", "single stationary run, one summary row");
    add_common(sim);
    sim->add_option("--t-max", settings.t_max)->capture_default_str();
    sim->add_option("--burn-in", settings.burn_in)->capture_default_str();
    double sample_interval = 0.0;  // 0: pick 1/nu (or 0.5 when nu = 0)
    sim->add_option("--sample-interval", sample_interval, "0 selects 1/nu");
    sim->add_flag("--dense-start", dense_init, "seed a Poisson(gamma/lambda) graph");

    // sweep
    std::string sweep_param = "c";
    double from = 0.5, to = 1.2;
    int steps = 36;
    std::string direction = "both";
    auto* swp = app.add_subcommand("sweep", "hysteresis sweep with state carry-over");
    add_common(swp);
    swp->add_option("--sweep-param", sweep_param, "c or b0")->check(CLI::IsMember({"c", "b0"}));
    swp->add_option("--c-from", from)->capture_default_str();
    swp->add_option("--c-to", to)->capture_default_str();
    swp->add_option("--b0-from", from, "alias of --c-from for b0 sweeps");
    swp->add_option("--b0-to", to, "alias of --c-to for b0 sweeps");
    swp->add_option("--steps", steps)->check(CLI::PositiveNumber)->capture_default_str();
    swp->add_option("--direction", direction)->check(CLI::IsMember({"up", "down", "both"}))
        ->capture_default_str();
    swp->add_option("--t-max", settings.t_max)->capture_default_str();
    swp->add_option("--burn-in", settings.burn_in)->capture_default_str();
    swp->add_option("--sample-interval", sample_interval, "0 selects 1/nu");

    // master-eq
    int L = 0, B = 0;
    double damping = 0.5, me_tol = 1e-9;
    int max_iter = 500;
    std::string init_branch = "dense";
    std::string dump_path;
    auto* meq = app.add_subcommand("master-eq", "self-consistent stationary solve");
    add_common(meq);
    meq->add_option("--L", L, "ell truncation (0: ceil(12/lambda) capped at 600)");
    meq->add_option("--B", B, "b truncation (0: same default)");
    meq->add_option("--damping", damping)->capture_default_str();
    meq->add_option("--tol", me_tol)->capture_default_str();
    meq->add_option("--max-iter", max_iter)->capture_default_str();
    meq->add_option("--init", init_branch, "dense (rates 0) or sparse (mu = nu)")
        ->check(CLI::IsMember({"dense", "sparse"}));
    meq->add_option("--dump", dump_path, "write the stationary distribution here");
    meq->add_option("--c-from", from, "sweep mode: first c");
    meq->add_option("--c-to", to, "sweep mode: last c");
    auto* meq_steps = meq->add_option("--steps", steps, "sweep mode: point count");
    meq->add_option("--direction", direction)->check(CLI::IsMember({"up", "down", "both"}))
        ->capture_default_str();

    // mean-field
    std::string rhs_kind = "gaussian";
    auto* mf = app.add_subcommand("mean-field", "fixed-point enumeration at one point");
    add_common(mf);
    mf->add_option("--rhs", rhs_kind)->check(CLI::IsMember({"gaussian", "poisson"}))
        ->capture_default_str();

    // phase-diagram
    double lam_from = 0.01, lam_to = 0.5, c_lo = 0.0, c_hi = 1.5;
    int lam_steps = 10, c_steps = 30;
    bool boundaries = false;
    auto* pd = app.add_subcommand("phase-diagram", "classify a (lambda, c) grid");
    add_common(pd);
    pd->add_option("--lambda-from", lam_from)->capture_default_str();
    pd->add_option("--lambda-to", lam_to)->capture_default_str();
    pd->add_option("--lambda-steps", lam_steps)->check(CLI::PositiveNumber)->capture_default_str();
    pd->add_option("--c-from", c_lo)->capture_default_str();
    pd->add_option("--c-to", c_hi)->capture_default_str();
    pd->add_option("--c-steps", c_steps)->check(CLI::PositiveNumber)->capture_default_str();
    pd->add_flag("--boundaries", boundaries, "emit bisected phase boundaries instead of the grid");
    pd->add_option("--rhs", rhs_kind)->check(CLI::IsMember({"gaussian", "poisson"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;  // usage errors exit 1, --help/--version exit 0
    }

    try {
        params.validate();
        if (sample_interval <= 0.0) sample_interval = params.nu > 0 ? 1.0 / params.nu : 0.5;
        settings.sample_interval = sample_interval;

        Output out = open_output(out_path);
        auto head = [&](CsvWriter& csv) {
            csv.comment(kVersion);
            csv.comment("config: " + describe(params) + " seed=" + std::to_string(seed));
        };

        if (*sim) {
            CsvWriter csv(*out.os, {"c", "lambda", "nu", "b0", "rho_mean", "rho_std",
                                    "default_rate", "samples"});
            head(csv);
            std::unique_ptr<CreditNetwork> init;
            if (dense_init)
                init = std::make_unique<CreditNetwork>(dense_start(params, mix_seed(seed, 0xd5)));
            RunSummary s = run(params, settings, seed, init.get());
            csv.row({format_sci(params.c), format_sci(params.lambda), format_sci(params.nu),
                     format_sci(params.b0), format_sci(s.rho_mean), format_sci(s.rho_std),
                     format_sci(s.default_rate), std::to_string(s.samples)});
        } else if (*swp) {
            CsvWriter csv(*out.os, {"c", "lambda", "nu", "b0", "direction", "rho_mean",
                                    "rho_std", "default_rate"});
            head(csv);
            const SweepParam which = sweep_param == "c" ? SweepParam::C : SweepParam::B0;
            std::vector<double> up_values = linspace(from, to, steps);
            std::vector<double> down_values(up_values.rbegin(), up_values.rend());
            if (direction == "up" || direction == "both") {
                CreditNetwork end_state(params.n_agents);
                auto rows = hysteresis_sweep(params, which, up_values, Direction::Up,
                                             settings, seed, nullptr,
                                             direction == "both" ? &end_state : nullptr);
                emit_sweep_rows(csv, rows);
                if (direction == "both") {
                    auto down = hysteresis_sweep(params, which, down_values, Direction::Down,
                                                 settings, mix_seed(seed, 0x5eed), &end_state);
                    emit_sweep_rows(csv, down);
                }
            } else {
                auto rows = hysteresis_sweep(params, which, down_values, Direction::Down,
                                             settings, seed);
                emit_sweep_rows(csv, rows);
            }
        } else if (*meq) {
            if (L == 0) L = default_truncation(params.lambda);
            if (B == 0) B = L;
            CsvWriter csv(*out.os, {"c", "lambda", "nu", "b0", "direction", "rho", "mu",
                                    "mu_ell", "mu_b", "outer_iters"});
            head(csv);
            const RateClosure init_rates =
                init_branch == "dense" ? RateClosure{}
                                       : RateClosure{params.nu, params.nu, params.nu};
            auto solve_point = [&](Params p, RateClosure warm, const std::string& dir)
                -> SelfConsistentResult {
                auto r = self_consistent_solve(p, L, B, warm, damping, me_tol, max_iter);
                if (!r.converged)
                    throw SolveError("master-eq: no convergence after " +
                                     std::to_string(r.outer_iters) + " outer iterations");
                csv.row({format_sci(p.c), format_sci(p.lambda), format_sci(p.nu),
                         format_sci(p.b0), dir, format_sci(connectivity_from_distribution(r.dist)),
                         format_sci(r.rates.mu), format_sci(r.rates.mu_ell),
                         format_sci(r.rates.mu_b), std::to_string(r.outer_iters)});
                return r;
            };
            if (meq_steps->count() > 0) {
                // c sweep with warm starts, mirroring the simulation protocol.
                std::vector<double> ups = linspace(from, to, steps);
                RateClosure warm = init_rates;
                if (direction == "up" || direction == "both") {
                    for (double c : ups) {
                        Params p = params;
                        p.c = c;
                        warm = solve_point(p, warm, "up").rates;
                    }
                }
                if (direction == "down" || direction == "both") {
                    if (direction == "down")
                        warm = RateClosure{params.nu, params.nu, params.nu};
                    for (auto it = ups.rbegin(); it != ups.rend(); ++it) {
                        Params p = params;
                        p.c = *it;
                        warm = solve_point(p, warm, "down").rates;
                    }
                }
            } else {
                auto r = solve_point(params, init_rates, init_branch);
                if (!dump_path.empty()) {
                    Output dump = open_output(dump_path);
                    dump_distribution(r.dist, *dump.os);
                }
            }
        } else if (*mf) {
            CsvWriter csv(*out.os, {"lambda", "c", "rhs", "mu", "slope", "stable",
                                    "degenerate"});
            head(csv);
            const RhsKind kind =
                rhs_kind == "gaussian" ? RhsKind::Gaussian : RhsKind::Poisson;
            for (const FixedPoint& fp : fixed_points(params, kind))
                csv.row({format_sci(params.lambda), format_sci(params.c), rhs_kind,
                         format_sci(fp.mu), format_sci(fp.slope),
                         fp.stable ? "1" : "0", fp.degenerate ? "1" : "0"});
        } else if (*pd) {
            const RhsKind kind =
                rhs_kind == "gaussian" ? RhsKind::Gaussian : RhsKind::Poisson;
            if (boundaries) {
                CsvWriter csv(*out.os, {"lambda", "c_dense_co", "c_co_sparse",
                                        "c_crossover"});
                head(csv);
                std::vector<double> lams = linspace(lam_from, lam_to, lam_steps);
                for (const BoundaryPoint& bp :
                     phase_boundary(params, lams, c_lo, c_hi, 1e-6, kind)) {
                    csv.row({format_sci(bp.lambda),
                             bp.has_window ? format_sci(bp.c_dense_co) : "",
                             bp.has_window ? format_sci(bp.c_co_sparse) : "",
                             bp.has_crossover ? format_sci(bp.c_crossover) : ""});
                }
            } else {
                CsvWriter csv(*out.os, {"lambda", "c", "phase", "mu_roots"});
                head(csv);
                for (double lam : linspace(lam_from, lam_to, lam_steps)) {
                    for (double c : linspace(c_lo, c_hi, c_steps)) {
                        PhasePoint pp = classify_phase(c, lam, params, kind);
                        std::string roots;
                        for (std::size_t i = 0; i < pp.roots.size(); ++i) {
                            if (i) roots += ';';
                            roots += format_sci(pp.roots[i].mu);
                        }
                        csv.row({format_sci(lam), format_sci(c), phase_name(pp.phase),
                                 roots});
                    }
                }
            }
        }
    } catch (const CLI::Error& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;  // usage errors exit 1
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
