#include "dispatch/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace dispatch {

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::NoDispatch: return "no_dispatch";
        case Mode::DispatchOnly: return "dispatch_only";
        case Mode::DispatchWithAdmm: return "dispatch_admm";
    }
    return "?";
}

std::string to_string(Forecaster f) {
    switch (f) {
        case Forecaster::Persistence: return "persistence";
        case Forecaster::Perfect: return "perfect";
        case Forecaster::TraceProvided: return "trace";
    }
    return "?";
}

Mode parse_mode(const std::string& s) {
    if (s == "no_dispatch") return Mode::NoDispatch;
    if (s == "dispatch_only") return Mode::DispatchOnly;
    if (s == "dispatch_admm") return Mode::DispatchWithAdmm;
    throw std::invalid_argument("unknown mode '" + s +
                                "' (expected no_dispatch | dispatch_only | dispatch_admm)");
}

Forecaster parse_forecaster(const std::string& s) {
    if (s == "persistence") return Forecaster::Persistence;
    if (s == "perfect") return Forecaster::Perfect;
    if (s == "trace") return Forecaster::TraceProvided;
    throw std::invalid_argument("unknown forecaster '" + s +
                                "' (expected persistence | perfect | trace)");
}

void ScenarioConfig::validate() const {
    grid.validate();
    trace.validate(grid);
    battery.validate(0);
    admm.validate();
    if (battery.soc_min.size() != grid.slots_per_day)
        throw std::invalid_argument("ScenarioConfig: SOC bound profile length != slots_per_day");
    if (!(soc_hard_min <= battery.soc && battery.soc <= soc_hard_max))
        throw std::invalid_argument("ScenarioConfig: initial SOC outside the hardware band");
    if (soc_hard_min > soc_hard_max || soc_hard_min < 0.0 || soc_hard_max > 1.0)
        throw std::invalid_argument("ScenarioConfig: hardware SOC band must satisfy 0 <= min <= max <= 1");
    if (!(soc_margin >= 0.0 && soc_margin < 0.5))
        throw std::invalid_argument("ScenarioConfig: soc_margin must be in [0, 0.5)");
    if (forecaster == Forecaster::TraceProvided && trace.load_forecast_5min.empty())
        throw std::invalid_argument(
            "ScenarioConfig: forecaster=trace requires trace.load_forecast_5min");
}

ErrorForecast build_error_forecast(std::span<const double> plan,
                                   std::span<const double> load_forecast,
                                   std::size_t current_slot) {
    if (plan.size() != load_forecast.size())
        throw std::invalid_argument("build_error_forecast: series length mismatch");
    if (current_slot >= plan.size())
        throw std::invalid_argument("build_error_forecast: current_slot out of range");
    ErrorForecast ef;
    ef.e_hat.reserve(plan.size() - current_slot);
    for (std::size_t j = current_slot; j < plan.size(); ++j)
        ef.e_hat.push_back(plan[j] - load_forecast[j]);
    ef.validate();
    return ef;
}

namespace {

// Coordination-side battery view for slot i: profile tail, margin inside
// the policy band, SOC bounds relaxed to what full-power recovery can
// reach from the current state, then mirrored into the injection-positive
// convention of the coordination layer.
BatteryModel coordination_battery(const ScenarioConfig& cfg, std::size_t slot, double soc) {
    BatteryModel b = horizon_tail(cfg.battery, slot);
    b.soc = soc;
    const std::size_t h = b.soc_min.size();
    for (std::size_t j = 0; j < h; ++j) {
        const double width = b.soc_max[j] - b.soc_min[j];
        const double m = std::min(cfg.soc_margin, width / 4.0);
        b.soc_min[j] += m;
        b.soc_max[j] -= m;
    }
    // Reachability relaxation: a bound the battery cannot physically meet
    // from the current SOC is moved to the closest reachable value, so a
    // transient excursion outside the band asks for maximum recovery effort
    // instead of an empty constraint set.
    const double a = b.alpha();
    double rlo = soc, rhi = soc;
    for (std::size_t j = 0; j < h; ++j) {
        rlo += a * b.p_min_kw;
        rhi += a * b.p_max_kw;
        if (b.soc_min[j] > rhi) b.soc_min[j] = rhi;
        if (b.soc_max[j] < rlo) b.soc_max[j] = rlo;
        rlo = std::max(rlo, b.soc_min[j]);
        rhi = std::min(rhi, b.soc_max[j]);
    }
    return mirrored(b);
}

struct SlotStats {
    double sum = 0.0, sum_sq = 0.0, max = 0.0;
    std::size_t n = 0;
    void add(double x) {
        sum += x;
        sum_sq += x * x;
        max = std::max(max, x);
        n += 1;
    }
    double mean() const { return n == 0 ? 0.0 : sum / static_cast<double>(n); }
    double stddev() const {
        if (n == 0) return 0.0;
        const double m = mean();
        return std::sqrt(std::max(0.0, sum_sq / static_cast<double>(n) - m * m));
    }
};

}  // namespace

DayResult run_day(const ScenarioConfig& cfg) {
    cfg.validate();
    const TimeGrid& grid = cfg.grid;
    const std::size_t n_slots = grid.slots_per_day;
    const std::size_t ticks = grid.ticks_per_slot;
    const double tick_s = grid.tick_seconds();
    const double slot_hours = grid.slot_seconds / 3600.0;

    DayResult result;
    result.slots.reserve(n_slots);

    double soc = cfg.battery.soc;
    double last_prosumption_avg = 0.0;
    bool have_realized = false;
    double energy_dev_kwh = 0.0;  // cumulative realized-minus-plan GCP energy
    std::optional<AdmmState> warm;

    std::vector<double> load_forecast(n_slots, 0.0);
    std::vector<double> true_slot_load(n_slots, 0.0);
    for (std::size_t i = 0; i < n_slots; ++i)
        true_slot_load[i] = slot_average(cfg.trace.load_10s, i, ticks);

    for (std::size_t i = 0; i < n_slots; ++i) {
        // (1) prosumption forecast for the remaining horizon and the
        // deviation sequence.
        switch (cfg.forecaster) {
            case Forecaster::Persistence: {
                const double held = have_realized ? last_prosumption_avg : cfg.trace.p_disp[i];
                for (std::size_t j = i; j < n_slots; ++j) load_forecast[j] = held;
                break;
            }
            case Forecaster::Perfect:
                for (std::size_t j = i; j < n_slots; ++j) load_forecast[j] = true_slot_load[j];
                break;
            case Forecaster::TraceProvided:
                for (std::size_t j = i; j < n_slots; ++j)
                    load_forecast[j] = cfg.trace.load_forecast_5min[j];
                break;
        }
        ErrorForecast e_hat = build_error_forecast(cfg.trace.p_disp, load_forecast, i);
        if (cfg.horizon_feedback && energy_dev_kwh != 0.0) {
            // Spread the accumulated energy deviation over the remaining
            // slots so the day's GCP energy lands back on the plan.
            const double catchup_kw =
                energy_dev_kwh / (slot_hours * static_cast<double>(n_slots - i));
            for (double& e : e_hat.e_hat) e -= catchup_kw;
        }

        SlotRecord rec;
        rec.slot = i;
        rec.p_disp_kw = cfg.trace.p_disp[i];
        rec.g_hat_kw = cfg.trace.pv_gmax_5min[i];
        rec.soc_min_pct = cfg.battery.soc_min[i] * 100.0;
        rec.soc_max_pct = cfg.battery.soc_max[i] * 100.0;

        // (2) PV set-point: from the coordinator, or the forecast maximum
        // when the upper layer is off.
        double pv_setpoint = cfg.trace.pv_gmax_5min[i];
        bool cap_pv = false;
        if (cfg.mode == Mode::DispatchWithAdmm) {
            const std::size_t horizon = n_slots - i;
            ErrorForecast e_coord;
            e_coord.e_hat.resize(horizon);
            for (std::size_t h = 0; h < horizon; ++h) e_coord.e_hat[h] = -e_hat.e_hat[h];
            PvForecast g_tail;
            g_tail.g_hat.assign(cfg.trace.pv_gmax_5min.begin() + static_cast<std::ptrdiff_t>(i),
                                cfg.trace.pv_gmax_5min.end());
            const BatteryModel coord_bat = coordination_battery(cfg, i, soc);
            const AdmmState* warm_ptr =
                (warm && warm->horizon() == horizon) ? &*warm : nullptr;
            auto observer = [&result, i](const AdmmState& st) {
                result.admm_trace.push_back({i, st.k, st.r_norm, st.s_norm, st.rho});
            };
            CoordinationResult cr =
                solve_coordination(e_coord, g_tail, coord_bat, cfg.admm, warm_ptr, observer);
            pv_setpoint = cr.g_setpoint;
            cap_pv = true;
            rec.b_plan_kw = -cr.b_plan[0];  // back to charge-positive
            rec.admm_iterations = cr.iterations;
            rec.admm_accuracy_kw = cr.accuracy;
            rec.admm_converged = cr.converged ? 1 : 0;
            rec.rho = cr.state.rho;
            rec.r_norm = cr.state.r_norm;
            rec.s_norm = cr.state.s_norm;
            warm = (horizon >= 2) ? std::optional<AdmmState>(shift_one_slot(cr.state))
                                  : std::nullopt;
        }
        rec.pv_setpoint_kw = pv_setpoint;

        // (3) 30 tracker ticks; battery idle in NoDispatch mode.
        if (cfg.mode == Mode::NoDispatch) {
            double gcp_sum = 0.0, load_sum = 0.0, pv_sum = 0.0;
            for (std::size_t m = 0; m < ticks; ++m) {
                const double load = cfg.trace.load_10s[i * ticks + m];
                const double pv = cfg.trace.pv_mpp_10s[i * ticks + m];
                gcp_sum += load - pv;
                load_sum += load;
                pv_sum += pv;
            }
            const double tcnt = static_cast<double>(ticks);
            rec.gcp_kw = gcp_sum / tcnt;
            rec.prosumption_kw = load_sum / tcnt;
            rec.pv_kw = pv_sum / tcnt;
            rec.b_kw = 0.0;
        } else {
            const double guard_min =
                cfg.mode == Mode::DispatchWithAdmm ? cfg.battery.soc_min[i] : cfg.soc_hard_min;
            const double guard_max =
                cfg.mode == Mode::DispatchWithAdmm ? cfg.battery.soc_max[i] : cfg.soc_hard_max;
            SlotTracker tracker(cfg.trace.p_disp[i], ticks, tick_s, soc, guard_min, guard_max);
            for (std::size_t m = 0; m < ticks; ++m) {
                const double load = cfg.trace.load_10s[i * ticks + m];
                const double mpp = cfg.trace.pv_mpp_10s[i * ticks + m];
                const double pv = cap_pv ? std::min(pv_setpoint, mpp) : mpp;
                tracker.tick(load, pv, cfg.battery);
            }
            const SlotReport rep = tracker.slot_close();
            rec.gcp_kw = rep.realized_avg_kw;
            rec.prosumption_kw = rep.prosumption_avg_kw;
            rec.pv_kw = rep.pv_avg_kw;
            rec.b_kw = rep.battery_avg_kw;
            soc = rep.soc_final;  // (4) SOC read-back
        }
        rec.e_kw = rec.gcp_kw - rec.p_disp_kw;
        rec.soc_pct = soc * 100.0;

        energy_dev_kwh += rec.e_kw * slot_hours;
        last_prosumption_avg = rec.prosumption_kw;
        have_realized = true;

        result.slots.push_back(rec);  // (5) advance
    }
    return result;
}

SummaryStats summarize(const DayResult& result) {
    SummaryStats s;
    s.slots = result.slots.size();
    if (result.slots.empty()) return s;

    double e_sq = 0.0, e_sum = 0.0;
    double max_dist = -1e300;
    SlotStats iters, acc;
    for (const SlotRecord& r : result.slots) {
        e_sq += r.e_kw * r.e_kw;
        e_sum += r.e_kw;
        s.max_abs_e_kw = std::max(s.max_abs_e_kw, std::abs(r.e_kw));
        s.pv_generation_kwh += r.pv_kw / 12.0;
        s.pv_curtailment_kwh += std::max(r.g_hat_kw - r.pv_setpoint_kw, 0.0) / 12.0;
        const double dist =
            std::max(r.soc_pct - r.soc_max_pct, r.soc_min_pct - r.soc_pct);
        max_dist = std::max(max_dist, dist);
        if (r.admm_iterations > 0) {
            iters.add(static_cast<double>(r.admm_iterations));
            acc.add(r.admm_accuracy_kw);
            if (r.admm_converged == 0) s.nonconverged_slots += 1;
        }
    }
    const double n = static_cast<double>(s.slots);
    s.rmse_e_kw = std::sqrt(e_sq / n);
    s.mean_e_kw = e_sum / n;
    s.max_soc_bound_distance_pct = max_dist;
    s.admm_slots = iters.n;
    s.iterations_mean = iters.mean();
    s.iterations_std = iters.stddev();
    s.iterations_max = iters.max;
    s.accuracy_mean_kw = acc.mean();
    s.accuracy_std_kw = acc.stddev();
    s.accuracy_max_kw = acc.max;
    return s;
}

}  // namespace dispatch
