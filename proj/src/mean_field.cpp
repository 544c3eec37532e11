#include "credinet/mean_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace credinet {

double erfc(double x) {
    // std::erfc on a conforming libm is correctly rounded to well within the
    // stated bounds; the independent series oracle in the tests holds it to
    // the contract.
    return std::erfc(x);
}

double z_value(double mu, const Params& params) {
    const double rate = params.lambda + mu;
    if (rate <= 0.0) throw std::invalid_argument("z_value: lambda + mu must be positive");
    return (1.0 - params.c + params.b0 * rate) /
           std::sqrt(2.0 * (1.0 + params.c * params.c) * rate);
}

double gaussian_rhs(double mu, const Params& params) {
    return 0.5 * params.nu * erfc(z_value(mu, params));
}

double poisson_rhs(double mu, const Params& params) {
    const double rate = params.lambda + mu;
    if (rate <= 0.0)
        throw std::invalid_argument("poisson_rhs: lambda + mu must be positive");
    if (params.nu == 0.0) return 0.0;
    if (params.c <= 0.0) return 0.0;  // b + b0 + 1 - c <= 0 is impossible

    const double m = 1.0 / rate;
    const double log_m = std::log(m);

    // Poisson CDF of b, extended lazily in log space as thresholds grow.
    double b_cdf = 0.0;
    long b_upto = -1;
    auto extend_b_cdf = [&](long k) {
        while (b_upto < k) {
            ++b_upto;
            b_cdf += std::exp(-m + b_upto * log_m - std::lgamma(b_upto + 1.0));
        }
        return std::min(b_cdf, 1.0);
    };

    double total = 0.0;
    double ell_mass = 0.0;
    const long ell_cap =
        static_cast<long>(std::ceil(m + 12.0 * std::sqrt(m) + 60.0));
    for (long ell = 0; ell <= ell_cap; ++ell) {
        const double p_ell = std::exp(-m + ell * log_m - std::lgamma(ell + 1.0));
        ell_mass += p_ell;
        // Default requires b <= c (ell + 1) - 1 - b0, equality included; the
        // 1e-9 guard keeps exact-equality lattice points on the inclusive
        // side despite rounding in the product.
        const double thr = params.c * (ell + 1.0) - 1.0 - params.b0 + 1e-9;
        if (thr >= 0.0)
            total += p_ell * extend_b_cdf(static_cast<long>(std::floor(thr)));
        if (ell > m && 1.0 - ell_mass < 1e-12) break;
    }
    return params.nu * total;
}

double rhs(double mu, const Params& params, RhsKind kind) {
    return kind == RhsKind::Gaussian ? gaussian_rhs(mu, params)
                                     : poisson_rhs(mu, params);
}

namespace {

double rhs_slope(double mu, const Params& params, RhsKind kind, double tol) {
    const double h = std::max(1e-6, tol);
    if (mu >= h)
        return (rhs(mu + h, params, kind) - rhs(mu - h, params, kind)) / (2.0 * h);
    return (rhs(mu + h, params, kind) - rhs(mu, params, kind)) / h;
}

FixedPoint make_root(double mu, const Params& params, RhsKind kind, double tol) {
    FixedPoint fp;
    fp.mu = mu;
    fp.rhs_kind = kind;
    fp.slope = rhs_slope(mu, params, kind, tol);
    fp.stable = std::abs(fp.slope) < 1.0;
    fp.degenerate = std::abs(fp.slope - 1.0) < 1e-4;
    return fp;
}

}  // namespace

std::vector<FixedPoint> fixed_points(const Params& params, RhsKind kind, int grid,
                                     double tol) {
    params.validate();
    if (grid < 100) throw std::invalid_argument("fixed_points: grid must be >= 100");
    if (tol <= 0.0) throw std::invalid_argument("fixed_points: tol must be positive");

    std::vector<FixedPoint> roots;
    if (params.nu == 0.0) {
        FixedPoint fp = make_root(0.0, params, kind, tol);
        fp.mu = 0.0;
        roots.push_back(fp);
        return roots;
    }

    auto g = [&](double mu) { return rhs(mu, params, kind) - mu; };

    const double h = params.nu / grid;
    double prev_mu = 0.0;
    double prev_g = g(0.0);
    if (prev_g == 0.0) roots.push_back(make_root(0.0, params, kind, tol));
    for (int i = 1; i <= grid; ++i) {
        const double mu = i * h;
        const double gi = g(mu);
        if (gi == 0.0) {
            roots.push_back(make_root(mu, params, kind, tol));
        } else if (prev_g != 0.0 && (prev_g > 0.0) != (gi > 0.0)) {
            double lo = prev_mu, hi = mu, glo = prev_g;
            // refine well past tol so the residual |rhs(mu) - mu| lands
            // under tol even where the rhs slope is steep
            while (hi - lo > tol * 1e-3 && hi - lo > 1e-15) {
                const double mid = 0.5 * (lo + hi);
                const double gm = g(mid);
                if (gm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((gm > 0.0) == (glo > 0.0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(make_root(0.5 * (lo + hi), params, kind, tol));
        }
        prev_mu = mu;
        prev_g = gi;
    }

    std::sort(roots.begin(), roots.end(),
              [](const FixedPoint& a, const FixedPoint& b) { return a.mu < b.mu; });
    const bool any_degenerate =
        std::any_of(roots.begin(), roots.end(),
                    [](const FixedPoint& r) { return r.degenerate; });
    if (roots.size() % 2 == 0 && !any_degenerate)
        throw std::logic_error("fixed_points: even root count without tangency");
    return roots;
}

PhasePoint classify_phase(double c, double lambda, const Params& params, RhsKind kind) {
    Params p = params;
    p.c = c;
    p.lambda = lambda;
    PhasePoint point;
    point.lambda = lambda;
    point.c = c;
    point.roots = fixed_points(p, kind);
    if (point.roots.size() == 3) {
        point.phase = Phase::Coexistence;
    } else {
        // Connectivity-halving convention: the unique state is dense when it
        // keeps at least half of the default-free connectivity gamma/lambda.
        const double mu = point.roots.front().mu;
        point.phase = mu <= lambda ? Phase::Dense : Phase::Sparse;
    }
    return point;
}

std::vector<BoundaryPoint> phase_boundary(const Params& params,
                                          std::span<const double> lambda_grid,
                                          double c_min, double c_max, double tol,
                                          RhsKind kind) {
    if (c_max <= c_min) throw std::invalid_argument("phase_boundary: empty c range");
    std::vector<BoundaryPoint> out;
    out.reserve(lambda_grid.size());

    for (double lambda : lambda_grid) {
        BoundaryPoint bp;
        bp.lambda = lambda;
        const int scan = 400;
        auto count = [&](double c) {
            return classify_phase(c, lambda, params, kind).roots.size();
        };
        auto bisect_count = [&](double lo, double hi, std::size_t lo_count) {
            while (hi - lo > tol) {
                const double mid = 0.5 * (lo + hi);
                if (count(mid) == lo_count)
                    lo = mid;
                else
                    hi = mid;
            }
            return 0.5 * (lo + hi);
        };

        double prev_c = c_min;
        std::size_t prev_n = count(c_min);
        for (int i = 1; i <= scan; ++i) {
            const double c = c_min + (c_max - c_min) * i / scan;
            const std::size_t n = count(c);
            if (n != prev_n) {
                const double edge = bisect_count(prev_c, c, prev_n);
                if (prev_n == 1 && n == 3) {
                    bp.has_window = true;
                    bp.c_dense_co = edge;
                } else if (prev_n == 3 && n == 1) {
                    bp.has_window = true;
                    bp.c_co_sparse = edge;
                }
            }
            prev_c = c;
            prev_n = n;
        }

        if (!bp.has_window) {
            // No count change: look for the single-phase D -> S crossover.
            auto phase_at = [&](double c) {
                return classify_phase(c, lambda, params, kind).phase;
            };
            Phase lo_phase = phase_at(c_min);
            if (phase_at(c_max) != lo_phase) {
                double lo = c_min, hi = c_max;
                while (hi - lo > tol) {
                    const double mid = 0.5 * (lo + hi);
                    if (phase_at(mid) == lo_phase)
                        lo = mid;
                    else
                        hi = mid;
                }
                bp.has_crossover = true;
                bp.c_crossover = 0.5 * (lo + hi);
            }
        }
        out.push_back(bp);
    }
    return out;
}

}  // namespace credinet
