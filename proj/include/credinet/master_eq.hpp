#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "credinet/params.hpp"

namespace credinet {

/// Endogenous default rates determined self-consistently against the
/// stationary distribution.
struct RateClosure {
    double mu = 0.0;      ///< total default rate per agent
    double mu_ell = 0.0;  ///< extra per-liability decay rate
    double mu_b = 0.0;    ///< extra per-asset decay rate
};

/// Truncated joint distribution P(ell, b) on 0..L x 0..B.
class JointDistribution {
  public:
    JointDistribution(int L, int B) : grid_(Eigen::ArrayXXd::Zero(L + 1, B + 1)) {}

    int L() const { return static_cast<int>(grid_.rows()) - 1; }
    int B() const { return static_cast<int>(grid_.cols()) - 1; }
    double operator()(int ell, int b) const { return grid_(ell, b); }
    Eigen::ArrayXXd& grid() { return grid_; }
    const Eigen::ArrayXXd& grid() const { return grid_; }

    double total_mass() const { return grid_.sum(); }
    /// Mass on the outer rim ell == L or b == B; gauges truncation adequacy.
    double boundary_mass() const {
        return grid_.row(L()).sum() + grid_.col(B()).sum() - grid_(L(), B());
    }
    double mean_ell() const;
    double mean_b() const;

  private:
    Eigen::ArrayXXd grid_;
};

struct SolveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Stationary solution of the master equation at fixed closure rates.
/// Gains that would leave the truncated lattice are suppressed together
/// with their loss counterparts; re-injected default mass enters the origin
/// from the distribution itself, so total mass is conserved exactly. Direct
/// sparse solve; one redundant balance row (near the mode, for conditioning)
/// is replaced by a pin and restored by normalization. `tol` bounds the
/// max-norm stationarity residual.
JointDistribution stationary_distribution(const Params& params, const RateClosure& rates,
                                          int L, int B, double tol = 1e-9);

/// Default lattice truncation: ceil(12 / lambda), capped at 600.
int default_truncation(double lambda);

/// Closure rates implied by a normalized distribution:
///   mu      = nu sum Theta P
///   mu_ell  = nu / <ell> sum Theta ell P   (0 when <ell> = 0)
///   mu_b    = nu / <b>   sum Theta b P     (0 when <b> = 0)
/// with Theta = [c (ell+1) - 1 - b - b0 > 0].
RateClosure rate_closure(const Params& params, const JointDistribution& P);

struct SelfConsistentResult {
    JointDistribution dist;
    RateClosure rates;
    int outer_iters = 0;
    bool converged = false;
    std::vector<double> residual_history;  ///< max rate change per outer step
};

/// Alternates stationary_distribution and rate_closure with damped rate
/// updates until the largest rate change drops below tol. Different inits
/// (all-zero rates vs mu = nu) select the dense and sparse branches inside
/// the coexistence region. Damping is halved when the updates oscillate.
SelfConsistentResult self_consistent_solve(const Params& params, int L, int B,
                                           RateClosure init, double damping = 0.5,
                                           double tol = 1e-9, int max_iter = 500);

/// <ell> of a normalized distribution; equals connectivity rho.
double connectivity_from_distribution(const JointDistribution& P);

/// Text dump: header then "ell,b,probability" rows, probabilities in
/// scientific notation with 12 significant digits.
void dump_distribution(const JointDistribution& P, std::ostream& os);

}  // namespace credinet
