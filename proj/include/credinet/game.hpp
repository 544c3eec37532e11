#pragma once

#include <cstdint>
#include <vector>

namespace credinet {

/// Equilibrium switching threshold c* = (b + b0 + 1) / (ell + 1) of the
/// foreclosure coordination game.
double switching_threshold(int ell, int b, double b0);

/// Lenders foreclose and the disclosed agent defaults iff
/// c * (ell + 1) > b + b0 + 1 (strict; equality means rollover).
bool default_on_disclosure(double c, int ell, int b, double b0);

enum class Action { Rollover, Foreclose };

/// Per-lender payoff: foreclosing yields 0, rolling over yields 1 - c on
/// success and -c when the borrower fails.
double payoff(Action action, bool failed, double c);

/// Inputs of the noisy-signal verification suite. The noise half-width
/// epsilon and the loan nominal delta play no role in the production
/// decision rule; they exist to check its game-theoretic pedigree.
struct GameSpec {
    int ell = 1;           ///< number of lenders
    int b = 0;             ///< borrower's illiquid assets
    double b0 = 0.0;       ///< borrower's liquid assets
    double epsilon = 0.01; ///< idiosyncratic noise half-width
    double delta = 0.5;    ///< loan nominal; affine payoff shift only
};

/// Success probability perceived by the marginal lender (cost exactly c*),
/// computed by adaptive quadrature of the binomial rollover count over the
/// posterior of the fundamental. Equals c* (clipped at 1) independently of
/// epsilon.
double success_probability_at_threshold(const GameSpec& spec);

/// Monte Carlo histogram of the number of foreclosing lenders when all play
/// the switching strategy and the fundamental is drawn from the marginal
/// lender's posterior. Converges to the uniform law 1/(ell+1) per bin.
std::vector<double> foreclosure_count_distribution(int ell, double epsilon,
                                                   long trials, std::uint64_t seed);

struct DeviationReport {
    double gain_mean = 0.0;    ///< E[rollover payoff - foreclose payoff]
    double gain_stderr = 0.0;
    long trials = 0;
};

/// Expected gain from rolling over rather than foreclosing for a lender whose
/// cost sits exactly at c_star, when everyone switches at c_star. Zero at the
/// equilibrium threshold; negative when c_star is set too high.
DeviationReport simulate_game(const GameSpec& spec, double c_star, long trials,
                              std::uint64_t seed);

}  // namespace credinet
