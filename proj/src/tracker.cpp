#include "dispatch/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dispatch {

namespace {
// Keeps the guard strictly on the inside so SOC never lands past the bound
// by rounding.
constexpr double kGuardMargin = 1e-9;
}  // namespace

SlotTracker::SlotTracker(double p_disp_slot_kw, std::size_t ticks_per_slot, double tick_seconds,
                         double soc_initial, double guard_soc_min, double guard_soc_max)
    : p_disp_kw_(p_disp_slot_kw),
      ticks_per_slot_(ticks_per_slot),
      tick_seconds_(tick_seconds),
      soc_(soc_initial),
      guard_min_(guard_soc_min),
      guard_max_(guard_soc_max) {
    if (ticks_per_slot_ < 1) throw std::invalid_argument("SlotTracker: ticks_per_slot >= 1");
    if (!(tick_seconds_ > 0.0)) throw std::invalid_argument("SlotTracker: tick_seconds > 0");
    if (guard_min_ > guard_max_)
        throw std::invalid_argument("SlotTracker: guard_soc_min > guard_soc_max");
}

double SlotTracker::tick(double prosumption_kw, double pv_actual_kw,
                         const BatteryModel& battery) {
    if (m_ >= ticks_per_slot_) throw std::logic_error("SlotTracker: tick past end of slot");
    const double tick_hours = tick_seconds_ / 3600.0;
    const std::size_t remaining = ticks_per_slot_ - m_;

    // Slot energy still owed versus the target, spread over the remaining
    // ticks, minus what prosumption and PV already contribute.
    const double slot_hours = tick_hours * static_cast<double>(ticks_per_slot_);
    const double owed_kwh = p_disp_kw_ * slot_hours - gcp_sum_kw_ * tick_hours;
    const double required_gcp_kw = owed_kwh / (tick_hours * static_cast<double>(remaining));
    const double b_desired = required_gcp_kw - (prosumption_kw - pv_actual_kw);

    // SOC guard at tick granularity: the set-point may not push the
    // projected SOC past the guard band within this tick.
    const double soc_per_kw = tick_hours / battery.energy_kwh;
    const double b_hi_soc = (guard_max_ - kGuardMargin - soc_) / soc_per_kw;
    const double b_lo_soc = (guard_min_ + kGuardMargin - soc_) / soc_per_kw;
    double lo = std::max(battery.p_min_kw, b_lo_soc);
    double hi = std::min(battery.p_max_kw, b_hi_soc);
    double b;
    if (lo > hi) {
        // SOC already outside the guard band beyond what one tick of full
        // power can restore: drive toward the band at the power limit.
        b = (b_lo_soc > battery.p_max_kw) ? battery.p_max_kw : battery.p_min_kw;
    } else {
        b = std::min(std::max(b_desired, lo), hi);
    }
    if (std::abs(b - b_desired) > 1e-12) saturated_ticks_ += 1;

    const double gcp = prosumption_kw + b - pv_actual_kw;
    gcp_sum_kw_ += gcp;
    prosumption_sum_kw_ += prosumption_kw;
    pv_sum_kw_ += pv_actual_kw;
    battery_sum_kw_ += b;
    energy_error_kwh_ += (gcp - p_disp_kw_) * tick_hours;
    soc_ += b * soc_per_kw;
    m_ += 1;
    return b;
}

SlotReport SlotTracker::slot_close() const {
    if (m_ != ticks_per_slot_)
        throw std::logic_error("SlotTracker: slot_close before all ticks have run");
    const double ticks = static_cast<double>(ticks_per_slot_);
    const double tick_hours = tick_seconds_ / 3600.0;
    SlotReport rep;
    rep.realized_avg_kw = gcp_sum_kw_ / ticks;
    rep.tracking_error_kw = rep.realized_avg_kw - p_disp_kw_;
    rep.soc_final = soc_;
    rep.prosumption_avg_kw = prosumption_sum_kw_ / ticks;
    rep.pv_avg_kw = pv_sum_kw_ / ticks;
    rep.battery_avg_kw = battery_sum_kw_ / ticks;
    rep.battery_energy_kwh = battery_sum_kw_ * tick_hours;
    rep.pv_energy_kwh = pv_sum_kw_ * tick_hours;
    rep.saturated_ticks = saturated_ticks_;
    return rep;
}

}  // namespace dispatch
