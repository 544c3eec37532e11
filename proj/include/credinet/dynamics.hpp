#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "credinet/network.hpp"
#include "credinet/params.hpp"
#include "credinet/rng.hpp"

namespace credinet {

enum class EventKind { Borrow, Mature, Disclose };

struct Event {
    EventKind kind;
    int borrower = -1;        ///< Borrow: who takes the loan; Disclose: who discloses
    int lender = -1;          ///< Borrow only
    LinkId link = kInvalidLink;  ///< Mature only
    bool caused_default = false; ///< Disclose only
};

struct EventCounts {
    long borrows = 0;
    long matures = 0;
    long discloses = 0;
    long defaults = 0;
};

struct SimState {
    CreditNetwork net;
    double time = 0.0;
    Rng rng;
    EventCounts counters;

    SimState(int n_agents, std::uint64_t seed) : net(n_agents), rng(seed) {}
    SimState(CreditNetwork initial, std::uint64_t seed)
        : net(std::move(initial)), rng(seed) {}
};

struct StepResult {
    double elapsed;
    Event event;
};

/// One exact Gillespie step: exponential waiting time at total rate
/// gamma*N + lambda*E + nu*N, event kind chosen proportionally, then a
/// uniformly chosen target. Returns nullopt when the total rate is zero
/// (terminal state).
std::optional<StepResult> step(SimState& state, const Params& params);

struct RunSummary {
    double rho_mean = 0.0;
    double rho_std = 0.0;      ///< sample standard deviation of rho samples
    double default_rate = 0.0; ///< defaults per agent per unit time after burn-in
    long samples = 0;
};

struct RunSettings {
    double t_max = 500.0;
    double burn_in = 100.0;
    double sample_interval = 0.5;
};

/// Runs to t_max, sampling rho = E/N every sample_interval after burn_in.
/// When `initial` is given the run starts from a copy of that network,
/// otherwise from the empty one. If `final_net` is non-null the terminal
/// network is written there.
RunSummary run(const Params& params, const RunSettings& settings, std::uint64_t seed,
               const CreditNetwork* initial = nullptr,
               CreditNetwork* final_net = nullptr,
               std::vector<int>* final_in_degrees = nullptr);

double measure_connectivity(const CreditNetwork& net);

/// Random graph with n_agents and Poisson(gamma/lambda * N) links placed
/// uniformly; used to probe the dense basin of the coexistence region.
CreditNetwork dense_start(const Params& params, std::uint64_t seed);

enum class Direction { Up, Down };

enum class SweepParam { C, B0 };

struct SweepRow {
    double c, lambda, nu, b0;
    Direction direction;
    double rho_mean, rho_std, default_rate;
};

/// Sweeps the chosen parameter over `values` (monotone in the stated
/// direction), carrying each point's final network into the next point;
/// this state carry-over is what exposes the hysteresis loop.
std::vector<SweepRow> hysteresis_sweep(Params params, SweepParam which,
                                       std::span<const double> values,
                                       Direction direction,
                                       const RunSettings& per_point,
                                       std::uint64_t seed,
                                       const CreditNetwork* initial = nullptr,
                                       CreditNetwork* final_net = nullptr);

}  // namespace credinet
