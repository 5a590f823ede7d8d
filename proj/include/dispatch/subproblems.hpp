#ifndef DISPATCH_SUBPROBLEMS_HPP
#define DISPATCH_SUBPROBLEMS_HPP

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dispatch/core.hpp"

// The three per-iteration minimizations of the coordination loop: the PV
// closed form, the battery projection onto box + running-sum constraints,
// and the aggregator consensus projection.

namespace dispatch {

// Raised when the box and running-sum constraints are jointly empty, i.e.
// the SOC bound profile is unreachable from the current state.
struct infeasible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Euclidean projection instance: project `target` onto
//   { x : lo <= x <= hi  elementwise,
//     chain_lo[j] <= sum(x[0..j]) <= chain_hi[j]  for every prefix j }.
// The prefix bounds encode per-slot SOC limits via
// (soc_min[j] - soc_i) / alpha <= sum(B[0..j]) <= (soc_max[j] - soc_i) / alpha.
struct BoxChainQp {
    std::vector<double> target;
    std::vector<double> lo, hi;
    std::vector<double> chain_lo, chain_hi;
    double tol = 1e-6;  // solution accuracy in Euclidean norm, kW

    // Builds the instance for a battery over the first target.size() slots
    // of its bound profiles.
    static BoxChainQp for_battery(std::vector<double> target, const BatteryModel& battery,
                                  double tol = 1e-6);

    void validate() const;  // sizes and lo <= hi; throws std::invalid_argument

    // Exact emptiness certificate by forward interval propagation of the
    // reachable prefix-sum set.
    bool feasible() const;
};

// Elementwise minimizer of sum_j (G_j - g_hat_j)^2 + (rho/2) * ||G - z||^2
// over 0 <= G_j <= g_hat_j:
//   clip(g_hat_j * 2/(2+rho) + z_j * rho/(2+rho), 0, g_hat_j).
// Throws std::invalid_argument for rho <= 0 or negative g_hat.
std::vector<double> pv_update(std::span<const double> g_hat, std::span<const double> z,
                              double rho);

// Euclidean projection of qp.target onto the box + chain set, accurate to
// qp.tol. Throws infeasible_error when the set is empty.
std::vector<double> bess_update(const BoxChainQp& qp);

// Per-slot minimizer of ||a_j - gc_j||^2 + ||b_j - bc_j||^2 subject to
// gc_j + bc_j = e_j: both components shift by (e_j - a_j - b_j) / 2.
// Returns (gc, bc) with gc_j + bc_j = e_j exactly.
std::pair<std::vector<double>, std::vector<double>> consensus_update(
    std::span<const double> a, std::span<const double> b, std::span<const double> e);

}  // namespace dispatch

#endif  // DISPATCH_SUBPROBLEMS_HPP
