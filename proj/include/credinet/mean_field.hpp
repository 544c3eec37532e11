#pragma once

#include <span>
#include <vector>

#include "credinet/params.hpp"

namespace credinet {

/// Complementary error function. Absolute error <= 1e-12 for |x| <= 6,
/// relative error <= 1e-10 for 6 < x <= 30.
double erfc(double x);

/// Argument of the erfc closure:
/// Z = (1 - c + b0 (lambda + mu)) / sqrt(2 (1 + c^2) (lambda + mu)).
double z_value(double mu, const Params& params);

enum class RhsKind { Gaussian, Poisson };

/// Gaussian closure of the self-consistency equation: (nu/2) erfc(Z(mu)).
double gaussian_rhs(double mu, const Params& params);

/// Exact right-hand side nu * Prob{ b + b0 + 1 - c <= c ell } with ell, b
/// independent Poisson of mean 1/(lambda + mu). Brute-force oracle for the
/// Gaussian closure.
double poisson_rhs(double mu, const Params& params);

double rhs(double mu, const Params& params, RhsKind kind);

struct FixedPoint {
    double mu = 0.0;
    double slope = 0.0;       ///< d rhs / d mu at the root
    bool stable = false;      ///< |slope| < 1
    bool degenerate = false;  ///< |slope - 1| < 1e-4: boundary tangency
    RhsKind rhs_kind = RhsKind::Gaussian;
};

/// All solutions of rhs(mu) = mu on [0, nu]: grid bracketing followed by
/// bisection, stability from a central-difference slope. Sorted ascending.
std::vector<FixedPoint> fixed_points(const Params& params, RhsKind kind,
                                     int grid = 1000, double tol = 1e-10);

enum class Phase { Dense, Sparse, Coexistence };

struct PhasePoint {
    double lambda = 0.0;
    double c = 0.0;
    Phase phase = Phase::Dense;
    std::vector<FixedPoint> roots;
};

/// Three roots mean coexistence. A single root mu* is labelled dense when
/// the implied connectivity gamma/(lambda+mu*) is at least half the
/// default-free value gamma/lambda, sparse otherwise.
PhasePoint classify_phase(double c, double lambda, const Params& params,
                          RhsKind kind = RhsKind::Gaussian);

struct BoundaryPoint {
    double lambda = 0.0;
    bool has_window = false;  ///< a 1 <-> 3 root window exists in the c range
    double c_dense_co = 0.0;  ///< D -> CO boundary (valid when has_window)
    double c_co_sparse = 0.0; ///< CO -> S boundary (valid when has_window)
    bool has_crossover = false;
    double c_crossover = 0.0; ///< single-phase D -> S crossover otherwise
};

/// Locates, for each lambda, the c values where the fixed-point count
/// changes between 1 and 3 (bisection), or failing that the D/S crossover
/// of the classifier.
std::vector<BoundaryPoint> phase_boundary(const Params& params,
                                          std::span<const double> lambda_grid,
                                          double c_min, double c_max,
                                          double tol = 1e-6,
                                          RhsKind kind = RhsKind::Gaussian);

}  // namespace credinet
