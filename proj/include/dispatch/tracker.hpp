#ifndef DISPATCH_TRACKER_HPP
#define DISPATCH_TRACKER_HPP

#include <cstddef>

#include "dispatch/core.hpp"

// The 10-second lower layer: within one 5-minute slot, computes battery
// set-points (charge-positive) so the slot-average power at the grid
// connection point matches the dispatch target, given the PV output.
//
// GCP accounting per tick: gcp = prosumption + battery - pv.

namespace dispatch {

struct SlotReport {
    double realized_avg_kw = 0.0;    // slot-average GCP power
    double tracking_error_kw = 0.0;  // realized_avg - dispatch target
    double soc_final = 0.0;
    double prosumption_avg_kw = 0.0;
    double pv_avg_kw = 0.0;
    double battery_avg_kw = 0.0;
    double battery_energy_kwh = 0.0;  // signed, charge-positive
    double pv_energy_kwh = 0.0;
    int saturated_ticks = 0;  // ticks where power or SOC limits clipped
};

// State machine for one slot, advanced strictly in tick order. Owns a
// local SOC copy propagated tick by tick; the final value is read back at
// slot close.
class SlotTracker {
  public:
    // guard_soc_min/max: projected SOC band the battery set-point must not
    // leave (the coordination profile, or the hardware band when the slot
    // runs without coordination).
    SlotTracker(double p_disp_slot_kw, std::size_t ticks_per_slot, double tick_seconds,
                double soc_initial, double guard_soc_min, double guard_soc_max);

    // Computes the battery set-point for the next tick: the power that, held
    // for the remaining ticks, lands the slot-average GCP on the dispatch
    // target; clipped to battery power bounds and to the SOC guard. Updates
    // the slot energy bookkeeping and the local SOC.
    double tick(double prosumption_kw, double pv_actual_kw, const BatteryModel& battery);

    // Closes the slot; throws std::logic_error before all ticks have run.
    SlotReport slot_close() const;

    std::size_t elapsed_ticks() const { return m_; }
    double energy_error_kwh() const { return energy_error_kwh_; }
    double soc() const { return soc_; }

  private:
    double p_disp_kw_;
    std::size_t ticks_per_slot_;
    double tick_seconds_;
    double soc_;
    double guard_min_, guard_max_;

    std::size_t m_ = 0;
    double energy_error_kwh_ = 0.0;
    double gcp_sum_kw_ = 0.0;
    double prosumption_sum_kw_ = 0.0;
    double pv_sum_kw_ = 0.0;
    double battery_sum_kw_ = 0.0;
    int saturated_ticks_ = 0;
};

}  // namespace dispatch

#endif  // DISPATCH_TRACKER_HPP
