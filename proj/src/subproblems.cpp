#include "dispatch/subproblems.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

namespace dispatch {

namespace {

double clip(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

// Largest violation of the box and prefix constraints (prefix violation
// measured on the running sum).
double violation(std::span<const double> x, const BoxChainQp& qp) {
    double v = 0.0;
    double run = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        v = std::max(v, qp.lo[j] - x[j]);
        v = std::max(v, x[j] - qp.hi[j]);
        run += x[j];
        v = std::max(v, qp.chain_lo[j] - run);
        v = std::max(v, run - qp.chain_hi[j]);
    }
    return v;
}

bool chain_ok(std::span<const double> x, const BoxChainQp& qp, double eps) {
    double run = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        run += x[j];
        if (run < qp.chain_lo[j] - eps || run > qp.chain_hi[j] + eps) return false;
    }
    return true;
}

}  // namespace

BoxChainQp BoxChainQp::for_battery(std::vector<double> target, const BatteryModel& battery,
                                   double tol) {
    const std::size_t n = target.size();
    if (battery.soc_min.size() < n)
        throw std::invalid_argument("BoxChainQp: SOC bound profile shorter than target");
    BoxChainQp qp;
    qp.target = std::move(target);
    qp.lo.assign(n, battery.p_min_kw);
    qp.hi.assign(n, battery.p_max_kw);
    qp.chain_lo.resize(n);
    qp.chain_hi.resize(n);
    const double a = battery.alpha();
    for (std::size_t j = 0; j < n; ++j) {
        qp.chain_lo[j] = (battery.soc_min[j] - battery.soc) / a;
        qp.chain_hi[j] = (battery.soc_max[j] - battery.soc) / a;
    }
    qp.tol = tol;
    return qp;
}

void BoxChainQp::validate() const {
    const std::size_t n = target.size();
    if (lo.size() != n || hi.size() != n || chain_lo.size() != n || chain_hi.size() != n)
        throw std::invalid_argument("BoxChainQp: inconsistent sequence lengths");
    if (!(tol > 0.0)) throw std::invalid_argument("BoxChainQp: tol must be positive");
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(target[j]))
            throw std::invalid_argument("BoxChainQp: non-finite target");
        if (lo[j] > hi[j])
            throw std::invalid_argument("BoxChainQp: lo > hi at index " + std::to_string(j));
        if (chain_lo[j] > chain_hi[j])
            throw std::invalid_argument("BoxChainQp: chain_lo > chain_hi at index " +
                                        std::to_string(j));
    }
}

bool BoxChainQp::feasible() const {
    // Reachable prefix sums form an interval; advance it through the box
    // step and intersect with the chain bounds.
    double rlo = 0.0, rhi = 0.0;
    for (std::size_t j = 0; j < target.size(); ++j) {
        rlo += lo[j];
        rhi += hi[j];
        rlo = std::max(rlo, chain_lo[j]);
        rhi = std::min(rhi, chain_hi[j]);
        if (rlo > rhi) return false;
    }
    return true;
}

std::vector<double> pv_update(std::span<const double> g_hat, std::span<const double> z,
                              double rho) {
    if (!(rho > 0.0) || !std::isfinite(rho))
        throw std::invalid_argument("pv_update: rho must be positive");
    if (g_hat.size() != z.size())
        throw std::invalid_argument("pv_update: sequence length mismatch");
    std::vector<double> g(g_hat.size());
    const double wg = 2.0 / (2.0 + rho);
    const double wz = rho / (2.0 + rho);
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (g_hat[j] < 0.0) throw std::invalid_argument("pv_update: g_hat must be >= 0");
        g[j] = clip(wg * g_hat[j] + wz * z[j], 0.0, g_hat[j]);
    }
    return g;
}

// Dykstra's alternating projections over the box and the n prefix slabs.
// Each slab correction is a multiple of its all-ones prefix normal, so a
// full cycle runs in O(n): slab shifts are accumulated lazily in a
// difference array and prefix sums are maintained incrementally.
std::vector<double> bess_update(const BoxChainQp& qp) {
    qp.validate();
    if (!qp.feasible())
        throw infeasible_error("bess_update: box and SOC chain constraints are jointly empty");

    const std::size_t n = qp.target.size();
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = clip(qp.target[j], qp.lo[j], qp.hi[j]);
    if (chain_ok(x, qp, 0.0)) return x;  // box projection already feasible: exact

    const double eps_stop = std::max(qp.tol * 1e-3, 1e-14);
    const std::size_t max_cycles = 200000;

    x = qp.target;
    std::vector<double> p_box(n, 0.0);   // box correction
    std::vector<double> lam(n, 0.0);     // slab corrections (scalars on prefix normals)
    std::vector<double> x_prev(n);
    std::vector<double> diff(n + 1);

    for (std::size_t cycle = 0; cycle < max_cycles; ++cycle) {
        x_prev = x;

        for (std::size_t j = 0; j < n; ++j) {
            const double zj = x[j] + p_box[j];
            const double yj = clip(zj, qp.lo[j], qp.hi[j]);
            p_box[j] = zj - yj;
            x[j] = yj;
        }

        std::fill(diff.begin(), diff.end(), 0.0);
        double run = 0.0;  // prefix of x as stored (pre slab shifts)
        double acc = 0.0;  // prefix contribution of this cycle's slab shifts
        for (std::size_t k = 1; k <= n; ++k) {
            run += x[k - 1];
            const double kk = static_cast<double>(k);
            const double z = run + acc + kk * lam[k - 1];
            double target_prefix = z;
            if (z > qp.chain_hi[k - 1]) target_prefix = qp.chain_hi[k - 1];
            else if (z < qp.chain_lo[k - 1]) target_prefix = qp.chain_lo[k - 1];
            const double gamma = (z - target_prefix) / kk;
            const double add = lam[k - 1] - gamma;
            lam[k - 1] = gamma;
            if (add != 0.0) {
                diff[0] += add;
                diff[k] -= add;
                acc += kk * add;
            }
        }
        double shift = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            shift += diff[j];
            x[j] += shift;
        }

        double change = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            change = std::max(change, std::abs(x[j] - x_prev[j]));
        if (change <= eps_stop && violation(x, qp) <= eps_stop) break;
    }
    return x;
}

std::pair<std::vector<double>, std::vector<double>> consensus_update(
    std::span<const double> a, std::span<const double> b, std::span<const double> e) {
    if (a.size() != b.size() || a.size() != e.size())
        throw std::invalid_argument("consensus_update: sequence length mismatch");
    std::vector<double> gc(a.size()), bc(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double delta = (e[j] - a[j] - b[j]) / 2.0;
        gc[j] = a[j] + delta;
        bc[j] = b[j] + delta;
    }
    return {std::move(gc), std::move(bc)};
}

}  // namespace dispatch
