#include "credinet/dynamics.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "credinet/game.hpp"

namespace credinet {

std::optional<StepResult> step(SimState& state, const Params& params) {
    params.validate();
    const int n = state.net.n_agents();
    const double borrow_rate = params.gamma * n;
    const double mature_rate = params.lambda * static_cast<double>(state.net.link_count());
    const double disclose_rate = params.nu * n;
    const double total = borrow_rate + mature_rate + disclose_rate;
    if (total <= 0.0) return std::nullopt;

    const double elapsed = state.rng.exponential(total);
    state.time += elapsed;

    Event ev;
    const double pick = state.rng.uniform() * total;
    if (pick < borrow_rate) {
        ev.kind = EventKind::Borrow;
        ev.borrower = static_cast<int>(state.rng.uniform_index(n));
        int lender = static_cast<int>(state.rng.uniform_index(n - 1));
        if (lender >= ev.borrower) ++lender;  // uniform over the other N-1 agents
        ev.lender = lender;
        state.net.add_loan(ev.lender, ev.borrower);
        ++state.counters.borrows;
    } else if (pick < borrow_rate + mature_rate) {
        ev.kind = EventKind::Mature;
        const std::size_t idx =
            static_cast<std::size_t>(state.rng.uniform_index(state.net.link_count()));
        ev.link = state.net.link_at(idx);
        state.net.mature_loan(ev.link);
        ++state.counters.matures;
    } else {
        ev.kind = EventKind::Disclose;
        ev.borrower = static_cast<int>(state.rng.uniform_index(n));
        const BalanceSheet& s = state.net.sheet(ev.borrower);
        ++state.counters.discloses;
        // Defaults happen only here, and only when the foreclosure rule fires.
        if (s.ell > 0 && default_on_disclosure(params.c, s.ell, s.b, params.b0)) {
            state.net.default_agent(ev.borrower);
            ev.caused_default = true;
            ++state.counters.defaults;
        }
    }
    return StepResult{elapsed, ev};
}

double measure_connectivity(const CreditNetwork& net) {
    return static_cast<double>(net.link_count()) / net.n_agents();
}

RunSummary run(const Params& params, const RunSettings& settings, std::uint64_t seed,
               const CreditNetwork* initial, CreditNetwork* final_net,
               std::vector<int>* final_in_degrees) {
    params.validate();
    if (!(settings.burn_in >= 0.0 && settings.burn_in < settings.t_max))
        throw std::invalid_argument("run: need 0 <= burn_in < t_max");
    if (settings.sample_interval <= 0.0)
        throw std::invalid_argument("run: sample_interval must be positive");

    SimState state = initial ? SimState(*initial, seed)
                             : SimState(params.n_agents, seed);

    double next_sample = settings.burn_in;
    double sum = 0.0, sumsq = 0.0;
    long samples = 0;
    long defaults_after_burn_in = 0;

    auto record_until = [&](double t_limit, double rho) {
        while (next_sample <= t_limit && next_sample < settings.t_max) {
            sum += rho;
            sumsq += rho * rho;
            ++samples;
            next_sample += settings.sample_interval;
        }
    };

    while (state.time < settings.t_max) {
        // The network is piecewise constant between events; every sampling
        // instant crossed by this waiting time sees the pre-event state.
        const double rho_pre = measure_connectivity(state.net);
        auto res = step(state, params);
        if (!res) {  // zero total rate: the state is terminal
            record_until(settings.t_max, rho_pre);
            break;
        }
        record_until(state.time, rho_pre);
        if (state.time >= settings.burn_in && state.time < settings.t_max &&
            res->event.caused_default)
            ++defaults_after_burn_in;
    }

    RunSummary summary;
    summary.samples = samples;
    if (samples > 0) {
        summary.rho_mean = sum / samples;
        const double var =
            samples > 1 ? (sumsq - sum * sum / samples) / (samples - 1) : 0.0;
        summary.rho_std = std::sqrt(std::max(0.0, var));
    }
    const double window = settings.t_max - settings.burn_in;
    summary.default_rate =
        defaults_after_burn_in / (window * params.n_agents);

    if (final_net) *final_net = state.net;
    if (final_in_degrees) {
        final_in_degrees->clear();
        final_in_degrees->reserve(state.net.n_agents());
        for (int i = 0; i < state.net.n_agents(); ++i)
            final_in_degrees->push_back(state.net.sheet(i).ell);
    }
    return summary;
}

CreditNetwork dense_start(const Params& params, std::uint64_t seed) {
    params.validate();
    if (params.lambda <= 0.0)
        throw std::invalid_argument("dense_start: lambda must be positive");
    Rng rng(seed);
    CreditNetwork net(params.n_agents);
    const double mean_links = params.gamma / params.lambda * params.n_agents;
    const int n_links = rng.poisson(mean_links);
    for (int e = 0; e < n_links; ++e) {
        const int borrower = static_cast<int>(rng.uniform_index(params.n_agents));
        int lender = static_cast<int>(rng.uniform_index(params.n_agents - 1));
        if (lender >= borrower) ++lender;
        net.add_loan(lender, borrower);
    }
    return net;
}

std::vector<SweepRow> hysteresis_sweep(Params params, SweepParam which,
                                       std::span<const double> values,
                                       Direction direction,
                                       const RunSettings& per_point,
                                       std::uint64_t seed,
                                       const CreditNetwork* initial,
                                       CreditNetwork* final_net) {
    for (std::size_t i = 1; i < values.size(); ++i) {
        const bool ok = direction == Direction::Up ? values[i] > values[i - 1]
                                                   : values[i] < values[i - 1];
        if (!ok) throw std::invalid_argument("sweep values not monotone in direction");
    }

    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    CreditNetwork carry = initial ? *initial : CreditNetwork(params.n_agents);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (which == SweepParam::C)
            params.c = values[i];
        else
            params.b0 = values[i];
        CreditNetwork next(params.n_agents);
        const RunSummary s =
            run(params, per_point, mix_seed(seed, i), &carry, &next);
        carry = std::move(next);
        rows.push_back(SweepRow{params.c, params.lambda, params.nu, params.b0,
                                direction, s.rho_mean, s.rho_std, s.default_rate});
    }
    if (final_net) *final_net = std::move(carry);
    return rows;
}

}  // namespace credinet
