#include "credinet/game.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "credinet/rng.hpp"

namespace credinet {

double switching_threshold(int ell, int b, double b0) {
    if (ell < 0 || b < 0 || b0 < 0)
        throw std::invalid_argument("switching_threshold: negative input");
    return (b + b0 + 1.0) / (ell + 1.0);
}

bool default_on_disclosure(double c, int ell, int b, double b0) {
    if (c < 0 || ell < 0 || b < 0 || b0 < 0)
        throw std::invalid_argument("default_on_disclosure: negative input");
    return c * (ell + 1.0) > b + b0 + 1.0;
}

double payoff(Action action, bool failed, double c) {
    if (c < 0) throw std::invalid_argument("payoff: negative cost");
    if (action == Action::Foreclose) return 0.0;
    return failed ? -c : 1.0 - c;
}

namespace {

// P(n >= n_min) for n ~ Binomial(ell, u), summed in log space.
double binomial_tail(int ell, double u, int n_min) {
    if (n_min <= 0) return 1.0;
    if (n_min > ell) return 0.0;
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double lu = std::log(u);
    const double l1mu = std::log1p(-u);
    const double lgn = std::lgamma(ell + 1.0);
    double sum = 0.0;
    for (int n = n_min; n <= ell; ++n) {
        double lp = lgn - std::lgamma(n + 1.0) - std::lgamma(ell - n + 1.0) +
                    n * lu + (ell - n) * l1mu;
        sum += std::exp(lp);
    }
    return std::min(sum, 1.0);
}

struct Quad {
    int ell;
    int n_min;
    double c_star;
    double epsilon;

    double integrand(double theta) const {
        double u = (c_star - theta + epsilon) / (2.0 * epsilon);
        u = std::clamp(u, 0.0, 1.0);
        return binomial_tail(ell, u, n_min);
    }

    double simpson(double a, double b, double fa, double fm, double fb) const {
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    }

    double adaptive(double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth, double& err_out) const {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = integrand(lm);
        const double frm = integrand(rm);
        const double left = simpson(a, m, fa, flm, fm);
        const double right = simpson(m, b, fm, frm, fb);
        const double err = (left + right - whole) / 15.0;
        if (std::abs(err) <= tol || depth >= 48) {
            err_out += std::abs(err);
            return left + right + err;
        }
        return adaptive(a, m, fa, flm, fm, left, tol / 2, depth + 1, err_out) +
               adaptive(m, b, fm, frm, fb, right, tol / 2, depth + 1, err_out);
    }
};

}  // namespace

double success_probability_at_threshold(const GameSpec& spec) {
    if (spec.ell < 1) throw std::invalid_argument("GameSpec: need at least one lender");
    if (spec.b < 0 || spec.b0 < 0) throw std::invalid_argument("GameSpec: negative assets");
    if (spec.epsilon <= 0) throw std::invalid_argument("GameSpec: epsilon must be positive");

    // Success needs at least n_min = ell - floor(b + b0) rollovers.
    const int n_min = spec.ell - static_cast<int>(std::floor(spec.b + spec.b0));
    if (n_min <= 0) return 1.0;

    const Quad q{spec.ell, n_min, switching_threshold(spec.ell, spec.b, spec.b0),
                 spec.epsilon};
    const double a = q.c_star - spec.epsilon;
    const double b = q.c_star + spec.epsilon;
    const double fa = q.integrand(a);
    const double fm = q.integrand(0.5 * (a + b));
    const double fb = q.integrand(b);
    const double whole = q.simpson(a, b, fa, fm, fb);
    double err = 0.0;
    const double tol = 1e-9 * 2.0 * spec.epsilon;  // 1e-9 after the 1/(2 eps) scale
    const double integral = q.adaptive(a, b, fa, fm, fb, whole, tol, 0, err);
    if (err > 100 * tol)
        throw std::runtime_error("success_probability_at_threshold: quadrature error " +
                                 std::to_string(err / (2.0 * spec.epsilon)));
    return integral / (2.0 * spec.epsilon);
}

std::vector<double> foreclosure_count_distribution(int ell, double epsilon, long trials,
                                                   std::uint64_t seed) {
    if (ell < 0) throw std::invalid_argument("negative lender count");
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    if (ell == 0) return {1.0};
    if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");

    Rng rng(seed);
    std::vector<long> counts(ell + 1, 0);
    for (long t = 0; t < trials; ++t) {
        // Posterior of the fundamental for a lender at the threshold; the
        // threshold location itself is immaterial, only offsets matter.
        const double theta = rng.uniform(-epsilon, epsilon);
        int k = 0;
        for (int j = 0; j < ell; ++j) {
            const double cost = theta + rng.uniform(-epsilon, epsilon);
            if (cost > 0.0) ++k;
        }
        ++counts[k];
    }
    std::vector<double> probs(ell + 1);
    for (int k = 0; k <= ell; ++k) probs[k] = static_cast<double>(counts[k]) / trials;
    return probs;
}

DeviationReport simulate_game(const GameSpec& spec, double c_star, long trials,
                              std::uint64_t seed) {
    if (spec.ell < 1) throw std::invalid_argument("GameSpec: need at least one lender");
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    if (spec.epsilon <= 0) throw std::invalid_argument("epsilon must be positive");

    Rng rng(seed);
    const double capacity = spec.b + spec.b0;
    double sum = 0.0;
    double sumsq = 0.0;
    for (long t = 0; t < trials; ++t) {
        const double theta = rng.uniform(c_star - spec.epsilon, c_star + spec.epsilon);
        int foreclosures = 0;
        for (int j = 0; j < spec.ell; ++j) {
            const double cost = theta + rng.uniform(-spec.epsilon, spec.epsilon);
            if (cost > c_star) ++foreclosures;
        }
        const bool failed = foreclosures > capacity;
        const double gain = payoff(Action::Rollover, failed, c_star) -
                            payoff(Action::Foreclose, failed, c_star);
        sum += gain;
        sumsq += gain * gain;
    }
    DeviationReport rep;
    rep.trials = trials;
    rep.gain_mean = sum / trials;
    const double var = std::max(0.0, sumsq / trials - rep.gain_mean * rep.gain_mean);
    rep.gain_stderr = std::sqrt(var / trials);
    return rep;
}

}  // namespace credinet
