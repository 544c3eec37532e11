#include "credinet/master_eq.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <ostream>

#include "credinet/csv.hpp"

namespace credinet {

namespace {

inline bool theta_fires(const Params& p, int ell, int b) {
    return p.c * (ell + 1.0) - 1.0 - b - p.b0 > 0.0;  // strict, matching Eq. rule
}

}  // namespace

double JointDistribution::mean_ell() const {
    double sum = 0.0;
    for (int ell = 0; ell <= L(); ++ell) sum += ell * grid_.row(ell).sum();
    return sum;
}

double JointDistribution::mean_b() const {
    double sum = 0.0;
    for (int b = 0; b <= B(); ++b) sum += b * grid_.col(b).sum();
    return sum;
}

int default_truncation(double lambda) {
    if (lambda <= 0.0) throw std::invalid_argument("default_truncation: lambda <= 0");
    return std::min(600, static_cast<int>(std::ceil(12.0 / lambda)));
}

JointDistribution stationary_distribution(const Params& params, const RateClosure& rates,
                                          int L, int B, double tol) {
    params.validate();
    if (params.lambda <= 0.0)
        throw std::invalid_argument("stationary_distribution: lambda must be positive");
    if (L < 1 || B < 1) throw std::invalid_argument("truncation bounds must be >= 1");
    if (tol <= 0.0) throw std::invalid_argument("tol must be positive");
    if (rates.mu_ell < 0 || rates.mu_b < 0)
        throw std::invalid_argument("closure rates must be non-negative");

    const int n = (L + 1) * (B + 1);
    const auto idx = [B](int ell, int b) { return ell * (B + 1) + b; };
    const double gamma = params.gamma;
    const double dec_ell = params.lambda + rates.mu_b;  // liabilities decay
    const double dec_b = params.lambda + rates.mu_ell;  // assets decay

    if (gamma == 0.0) {
        // No loan formation: everything decays into the absorbing origin.
        JointDistribution delta(L, B);
        delta.grid()(0, 0) = 1.0;
        return delta;
    }

    const int origin = idx(0, 0);
    bool any_fire = false;
    if (params.nu > 0.0)
        for (int ell = 0; ell <= L && !any_fire; ++ell)
            for (int b = 0; b <= B && !any_fire; ++b)
                if (theta_fires(params, ell, b)) any_fire = true;

    // G is the banded balance operator with the origin re-injection left out.
    // The re-injection term mu P -> origin is rank one, e_origin f^T with
    // f = nu on firing states, so stationarity (G + e_origin f^T) P = 0 means
    // P is proportional to G^{-1} e_origin: G is a proper sub-generator
    // (every firing column leaks) and hence nonsingular, and the scalar
    // consistency f^T P matches automatically because the full operator's
    // column sums vanish. Keeping f out of the matrix avoids a dense row
    // that would wreck the sparse factorization.
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(n) * 5);
    // Without any firing state G is conservative and singular; replace one
    // redundant balance row near the mode by a pin P(pin) = 1 instead (near
    // the mode for conditioning: relative to P(0,0) the peak of a dense
    // state sits 15 orders of magnitude up).
    const int pin_ell = std::min(L, static_cast<int>(std::lround(gamma / dec_ell)));
    const int pin_b = std::min(B, static_cast<int>(std::lround(gamma / dec_b)));
    const int pin = any_fire ? -1 : idx(pin_ell, pin_b);
    auto add = [&](int row, int col, double v) {
        if (row != pin) trip.emplace_back(row, col, v);
    };
    if (!any_fire) trip.emplace_back(pin, pin, 1.0);

    for (int ell = 0; ell <= L; ++ell) {
        for (int b = 0; b <= B; ++b) {
            const int j = idx(ell, b);
            const double disclose = theta_fires(params, ell, b) ? params.nu : 0.0;
            const double loss = (ell < L ? gamma : 0.0) + (b < B ? gamma : 0.0) +
                                dec_ell * ell + dec_b * b + disclose;
            add(j, j, -loss);
            if (ell < L) add(idx(ell + 1, b), j, gamma);
            if (b < B) add(idx(ell, b + 1), j, gamma);
            if (ell > 0) add(idx(ell - 1, b), j, dec_ell * ell);
            if (b > 0) add(idx(ell, b - 1), j, dec_b * b);
        }
    }

    Eigen::SparseMatrix<double> A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success)
        throw SolveError("stationary_distribution: sparse factorization failed");
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(any_fire ? origin : pin) = 1.0;
    Eigen::VectorXd P = lu.solve(rhs);
    if (lu.info() != Eigen::Success)
        throw SolveError("stationary_distribution: sparse solve failed");

    // G^{-1} e_origin is entrywise non-positive (negated M-matrix inverse);
    // dividing by the signed mass flips it to a probability vector.
    const double mass = P.sum();
    if (mass == 0.0 || !P.allFinite())
        throw SolveError("stationary_distribution: degenerate or non-finite solution");
    P /= mass;
    // Tiny negative round-off can appear in far tails; clip and renormalize.
    const double min_coeff = P.minCoeff();
    if (min_coeff < -1e-12)
        throw SolveError("stationary_distribution: negative probability " +
                         std::to_string(min_coeff));
    P = P.cwiseMax(0.0);
    P /= P.sum();

    JointDistribution dist(L, B);
    for (int ell = 0; ell <= L; ++ell)
        for (int b = 0; b <= B; ++b) dist.grid()(ell, b) = P(idx(ell, b));

    // Stationarity residual of the full operator, re-injection included.
    double reinject = 0.0;
    for (int ell = 0; ell <= L; ++ell)
        for (int b = 0; b <= B; ++b)
            if (theta_fires(params, ell, b)) reinject += params.nu * dist(ell, b);
    double max_residual = 0.0;
    for (int ell = 0; ell <= L; ++ell) {
        for (int b = 0; b <= B; ++b) {
            const double disclose = theta_fires(params, ell, b) ? params.nu : 0.0;
            const double loss = (ell < L ? gamma : 0.0) + (b < B ? gamma : 0.0) +
                                dec_ell * ell + dec_b * b + disclose;
            double r = -loss * dist(ell, b);
            if (ell == 0 && b == 0) r += reinject;
            if (ell > 0) r += gamma * dist(ell - 1, b);
            if (b > 0) r += gamma * dist(ell, b - 1);
            if (ell < L) r += dec_ell * (ell + 1) * dist(ell + 1, b);
            if (b < B) r += dec_b * (b + 1) * dist(ell, b + 1);
            max_residual = std::max(max_residual, std::abs(r));
        }
    }
    if (max_residual > tol)
        throw SolveError("stationary_distribution: residual " +
                         std::to_string(max_residual) + " exceeds tol");

    const double rim = dist.boundary_mass();
    if (rim >= 1e-8)
        throw SolveError("stationary_distribution: truncation inadequate, boundary mass " +
                         std::to_string(rim));
    return dist;
}

RateClosure rate_closure(const Params& params, const JointDistribution& P) {
    params.validate();
    RateClosure out;
    double sum_theta = 0.0, sum_theta_ell = 0.0, sum_theta_b = 0.0;
    for (int ell = 0; ell <= P.L(); ++ell) {
        for (int b = 0; b <= P.B(); ++b) {
            if (!theta_fires(params, ell, b)) continue;
            const double p = P(ell, b);
            sum_theta += p;
            sum_theta_ell += ell * p;
            sum_theta_b += b * p;
        }
    }
    out.mu = params.nu * sum_theta;
    const double mean_ell = P.mean_ell();
    const double mean_b = P.mean_b();
    out.mu_ell = mean_ell > 0.0 ? params.nu * sum_theta_ell / mean_ell : 0.0;
    out.mu_b = mean_b > 0.0 ? params.nu * sum_theta_b / mean_b : 0.0;
    return out;
}

SelfConsistentResult self_consistent_solve(const Params& params, int L, int B,
                                           RateClosure init, double damping,
                                           double tol, int max_iter) {
    params.validate();
    if (!(damping > 0.0 && damping <= 1.0))
        throw std::invalid_argument("self_consistent_solve: damping must be in (0, 1]");
    if (tol <= 0.0) throw std::invalid_argument("tol must be positive");

    SelfConsistentResult result{JointDistribution(L, B), init};
    double prev_delta_ell = 0.0;
    int alternations = 0;

    for (int it = 1; it <= max_iter; ++it) {
        result.dist = stationary_distribution(params, result.rates, L, B);
        const RateClosure next = rate_closure(params, result.dist);
        const double change = std::max({std::abs(next.mu - result.rates.mu),
                                        std::abs(next.mu_ell - result.rates.mu_ell),
                                        std::abs(next.mu_b - result.rates.mu_b)});
        result.residual_history.push_back(change);
        result.outer_iters = it;

        const double delta_ell = next.mu_ell - result.rates.mu_ell;
        if (delta_ell * prev_delta_ell < 0.0) {
            if (++alternations >= 3) {  // oscillation: settle down
                damping = std::max(0.05, 0.5 * damping);
                alternations = 0;
            }
        } else {
            alternations = 0;
        }
        prev_delta_ell = delta_ell;

        result.rates.mu = (1.0 - damping) * result.rates.mu + damping * next.mu;
        result.rates.mu_ell = (1.0 - damping) * result.rates.mu_ell + damping * next.mu_ell;
        result.rates.mu_b = (1.0 - damping) * result.rates.mu_b + damping * next.mu_b;

        if (change < tol) {
            result.converged = true;
            // Report the undamped closure of the final distribution.
            result.rates = rate_closure(params, result.dist);
            break;
        }
    }
    return result;
}

double connectivity_from_distribution(const JointDistribution& P) {
    return P.mean_ell();
}

void dump_distribution(const JointDistribution& P, std::ostream& os) {
    os << "ell,b,probability\n";
    for (int ell = 0; ell <= P.L(); ++ell)
        for (int b = 0; b <= P.B(); ++b)
            os << ell << ',' << b << ',' << format_sci(P(ell, b)) << '\n';
}

}  // namespace credinet
