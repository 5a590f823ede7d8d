#ifndef DISPATCH_ADMM_HPP
#define DISPATCH_ADMM_HPP

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "dispatch/core.hpp"
#include "dispatch/subproblems.hpp"

// The 5-minute upper layer: consensus-sharing ADMM over the shrinking
// horizon, with residual-based stopping and a self-adaptive penalty.
//
// Convention inside this layer: battery power is injection-positive, i.e.
// the coupling reads  B_j + G_j = e_j  with both resources contributing
// corrective power of the same sign. Callers holding a charge-positive
// battery use mirrored() to convert.

namespace dispatch {

struct AdmmConfig {
    double rho0 = 1.0;       // initial penalty
    double mu = 10.0;        // residual-balance factor
    double tau_incr = 2.0;   // penalty increase multiplier
    double tau_decr = 2.0;   // penalty decrease divisor
    double eps_abs = 1e-2;   // absolute stopping tolerance, kW
    double eps_rel = 1e-3;   // relative stopping tolerance
    int max_iter = 50;       // iteration cap
    double bess_tol = 1e-6;  // battery projection accuracy, kW

    void validate() const;  // throws std::invalid_argument
};

// Full iterate of the splitting: original variables (g, b), copied
// variables (gc, bc), scaled duals (ug, ub), penalty and residual norms.
struct AdmmState {
    std::vector<double> g, b;    // original variables, kW
    std::vector<double> gc, bc;  // copied variables
    std::vector<double> ug, ub;  // scaled duals
    double rho = 1.0;
    int k = 0;
    double r_norm = 0.0;
    double s_norm = 0.0;

    std::size_t horizon() const { return g.size(); }
};

struct CoordinationResult {
    double g_setpoint = 0.0;      // PV set-point for the current slot, kW
    std::vector<double> b_plan;   // battery slot-power plan over the horizon
                                  // (copied variables; advisory)
    int iterations = 0;
    double accuracy = 0.0;        // max_j |g_j + b_j - e_j| on the originals
    bool converged = false;
    double eps_pri = 0.0;         // final stopping tolerances
    double eps_dual = 0.0;
    AdmmState state;              // final iterate, reusable as a warm start
};

// Primal and dual residual norms for the iterate against the previous
// copied variables: r = ||g - gc|| + ||b - bc||, s = rho * ||stacked copied
// change||.
std::pair<double, double> residuals(const AdmmState& state, std::span<const double> prev_gc,
                                    std::span<const double> prev_bc);

// eps_pri  = sqrt(p) * eps_abs + eps_rel * max(||(g,b)||, ||(gc,bc)||)
// eps_dual = sqrt(p) * eps_abs + eps_rel * ||rho * (ug,ub)||
// with p the stacked dimension (2 * horizon).
std::pair<double, double> stopping_tolerances(const AdmmState& state, const AdmmConfig& cfg);

// Residual-balancing penalty update: scale rho up when r dominates s by
// more than a factor mu, down in the opposite case. Scaled duals are
// rescaled so the underlying multipliers y = rho * u are preserved.
void adapt_rho(AdmmState& state, double r_norm, double s_norm, const AdmmConfig& cfg);

// Drops the leading slot from every sequence: the warm start for the next
// coordination step of a shrinking horizon.
AdmmState shift_one_slot(const AdmmState& state);

using IterationObserver = std::function<void(const AdmmState&)>;

// Runs the three-step splitting (PV update, battery projection, consensus
// projection) with dual updates, residual stopping and penalty adaptation.
// e_hat/g_hat/battery profiles must all cover the same horizon. `warm`, if
// given, must match the horizon length. The observer, if set, is called
// once per iteration after the residuals are computed.
//
// Throws infeasible_error if the battery constraint set is empty. Reaching
// max_iter is not an error: the result carries converged = false and the
// best iterate.
CoordinationResult solve_coordination(const ErrorForecast& e_hat, const PvForecast& g_hat,
                                      const BatteryModel& battery, const AdmmConfig& cfg,
                                      const AdmmState* warm = nullptr,
                                      const IterationObserver& observer = {});

}  // namespace dispatch

#endif  // DISPATCH_ADMM_HPP
