#include "dispatch/admm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dispatch {

namespace {

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double norm2_stacked(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (double x : a) s += x * x;
    for (double x : b) s += x * x;
    return std::sqrt(s);
}

double clip(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

}  // namespace

void AdmmConfig::validate() const {
    if (!(rho0 > 0.0)) throw std::invalid_argument("AdmmConfig: rho0 must be > 0");
    if (!(mu > 1.0)) throw std::invalid_argument("AdmmConfig: mu must be > 1");
    if (!(tau_incr > 1.0)) throw std::invalid_argument("AdmmConfig: tau_incr must be > 1");
    if (!(tau_decr > 1.0)) throw std::invalid_argument("AdmmConfig: tau_decr must be > 1");
    if (!(eps_abs > 0.0)) throw std::invalid_argument("AdmmConfig: eps_abs must be > 0");
    if (!(eps_rel > 0.0)) throw std::invalid_argument("AdmmConfig: eps_rel must be > 0");
    if (max_iter < 1) throw std::invalid_argument("AdmmConfig: max_iter must be >= 1");
    if (!(bess_tol > 0.0)) throw std::invalid_argument("AdmmConfig: bess_tol must be > 0");
}

std::pair<double, double> residuals(const AdmmState& state, std::span<const double> prev_gc,
                                    std::span<const double> prev_bc) {
    const std::size_t n = state.horizon();
    std::vector<double> dg(n), db(n), cg(n), cb(n);
    for (std::size_t j = 0; j < n; ++j) {
        dg[j] = state.g[j] - state.gc[j];
        db[j] = state.b[j] - state.bc[j];
        cg[j] = state.gc[j] - prev_gc[j];
        cb[j] = state.bc[j] - prev_bc[j];
    }
    const double r = norm2(dg) + norm2(db);
    const double s = state.rho * norm2_stacked(cb, cg);
    return {r, s};
}

std::pair<double, double> stopping_tolerances(const AdmmState& state, const AdmmConfig& cfg) {
    const double p = 2.0 * static_cast<double>(state.horizon());
    const double base = std::sqrt(p) * cfg.eps_abs;
    const double norm_orig = norm2_stacked(state.g, state.b);
    const double norm_copied = norm2_stacked(state.gc, state.bc);
    const double eps_pri = base + cfg.eps_rel * std::max(norm_orig, norm_copied);
    const double eps_dual = base + cfg.eps_rel * state.rho * norm2_stacked(state.ug, state.ub);
    return {eps_pri, eps_dual};
}

void adapt_rho(AdmmState& state, double r_norm, double s_norm, const AdmmConfig& cfg) {
    const double rho_old = state.rho;
    if (r_norm > cfg.mu * s_norm) {
        state.rho = rho_old * cfg.tau_incr;
    } else if (s_norm > cfg.mu * r_norm) {
        state.rho = rho_old / cfg.tau_decr;
    } else {
        return;
    }
    const double scale = rho_old / state.rho;
    for (double& u : state.ug) u *= scale;
    for (double& u : state.ub) u *= scale;
}

AdmmState shift_one_slot(const AdmmState& state) {
    if (state.horizon() < 2)
        throw std::invalid_argument("shift_one_slot: horizon too short to shift");
    AdmmState s;
    auto tail = [](const std::vector<double>& v) {
        return std::vector<double>(v.begin() + 1, v.end());
    };
    s.g = tail(state.g);
    s.b = tail(state.b);
    s.gc = tail(state.gc);
    s.bc = tail(state.bc);
    s.ug = tail(state.ug);
    s.ub = tail(state.ub);
    s.rho = state.rho;
    return s;
}

CoordinationResult solve_coordination(const ErrorForecast& e_hat, const PvForecast& g_hat,
                                      const BatteryModel& battery, const AdmmConfig& cfg,
                                      const AdmmState* warm, const IterationObserver& observer) {
    cfg.validate();
    e_hat.validate();
    g_hat.validate();
    const std::size_t n = e_hat.e_hat.size();
    if (n < 1) throw std::invalid_argument("solve_coordination: horizon must be >= 1");
    if (g_hat.g_hat.size() != n)
        throw std::invalid_argument("solve_coordination: g_hat length != horizon");
    if (battery.soc_min.size() < n)
        throw std::invalid_argument("solve_coordination: SOC bound profile shorter than horizon");

    AdmmState st;
    if (warm != nullptr) {
        if (warm->horizon() != n)
            throw std::invalid_argument("solve_coordination: warm state horizon mismatch");
        st = *warm;
        st.k = 0;
    } else {
        // Cold start at the zero-curtailment point; copies from one
        // consensus projection, duals zero.
        st.g = g_hat.g_hat;
        st.b.assign(n, 0.0);
        auto [gc0, bc0] = consensus_update(st.g, st.b, e_hat.e_hat);
        st.gc = std::move(gc0);
        st.bc = std::move(bc0);
        st.ug.assign(n, 0.0);
        st.ub.assign(n, 0.0);
        st.rho = cfg.rho0;
    }

    std::vector<double> z(n), target(n);
    bool converged = false;
    double eps_pri = 0.0, eps_dual = 0.0;

    while (st.k < cfg.max_iter) {
        for (std::size_t j = 0; j < n; ++j) z[j] = st.gc[j] - st.ug[j];
        st.g = pv_update(g_hat.g_hat, z, st.rho);

        // Independent of the PV update; the two may run concurrently.
        for (std::size_t j = 0; j < n; ++j) target[j] = st.bc[j] - st.ub[j];
        st.b = bess_update(BoxChainQp::for_battery(target, battery, cfg.bess_tol));

        const std::vector<double> prev_gc = st.gc;
        const std::vector<double> prev_bc = st.bc;
        std::vector<double> a(n), c(n);
        for (std::size_t j = 0; j < n; ++j) {
            a[j] = st.g[j] + st.ug[j];
            c[j] = st.b[j] + st.ub[j];
        }
        auto [gc, bc] = consensus_update(a, c, e_hat.e_hat);
        st.gc = std::move(gc);
        st.bc = std::move(bc);

        for (std::size_t j = 0; j < n; ++j) {
            st.ug[j] += st.g[j] - st.gc[j];
            st.ub[j] += st.b[j] - st.bc[j];
        }

        auto [r, s] = residuals(st, prev_gc, prev_bc);
        st.r_norm = r;
        st.s_norm = s;
        st.k += 1;
        if (observer) observer(st);

        std::tie(eps_pri, eps_dual) = stopping_tolerances(st, cfg);
        if (r <= eps_pri && s <= eps_dual) {
            converged = true;
            break;
        }
        adapt_rho(st, r, s, cfg);
    }

    CoordinationResult res;
    res.iterations = st.k;
    res.converged = converged;
    res.eps_pri = eps_pri;
    res.eps_dual = eps_dual;
    res.g_setpoint = clip(st.gc[0], 0.0, g_hat.g_hat[0]);
    res.b_plan = st.bc;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        acc = std::max(acc, std::abs(st.g[j] + st.b[j] - e_hat.e_hat[j]));
    res.accuracy = acc;
    res.state = std::move(st);
    return res;
}

}  // namespace dispatch
