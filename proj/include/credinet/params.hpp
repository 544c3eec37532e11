#pragma once

#include <stdexcept>

namespace credinet {

/// Exogenous model parameters. Time is measured in units where the
/// loan-formation rate gamma defaults to 1.
struct Params {
    double gamma = 1.0;   ///< loan formation rate per agent
    double lambda = 0.1;  ///< maturation rate per link
    double nu = 0.0;      ///< disclosure rate per agent
    double b0 = 0.0;      ///< liquid asset holding, uniform across agents
    double c = 0.0;       ///< cost of miscoordination
    int n_agents = 1000;

    void validate() const {
        if (gamma < 0 || lambda < 0 || nu < 0)
            throw std::invalid_argument("rates must be non-negative");
        if (b0 < 0) throw std::invalid_argument("b0 must be non-negative");
        if (c < 0) throw std::invalid_argument("c must be non-negative");
        if (n_agents < 2) throw std::invalid_argument("need at least 2 agents");
    }
};

}  // namespace credinet
