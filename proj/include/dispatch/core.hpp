#ifndef DISPATCH_CORE_HPP
#define DISPATCH_CORE_HPP

#include <cstddef>
#include <span>
#include <vector>

// Domain types and the battery/PV models shared by the coordination,
// tracking and simulation layers.
//
// Conventions used throughout:
//   - SOC is a fraction in [0,1] internally; percent appears only at the
//     I/O boundary.
//   - Positive battery power charges the battery (raises SOC).
//   - All powers are kW, energies kWh, durations seconds.

namespace dispatch {

// The 288-slot / 5-minute day structure with nested 10-second ticks.
struct TimeGrid {
    std::size_t slots_per_day = 288;
    double slot_seconds = 300.0;
    std::size_t ticks_per_slot = 30;
    std::size_t current_slot = 0;

    double tick_seconds() const { return slot_seconds / static_cast<double>(ticks_per_slot); }
    std::size_t ticks_per_day() const { return slots_per_day * ticks_per_slot; }

    // Throws std::invalid_argument on a malformed grid.
    void validate() const;
};

// Battery energy model: nominal capacity, converter power bounds and the
// per-slot SOC bound profiles used by the coordination layer.
struct BatteryModel {
    double energy_kwh = 0.0;
    double p_min_kw = 0.0;  // most negative admissible power (discharge)
    double p_max_kw = 0.0;  // most positive admissible power (charge)
    double soc = 0.0;       // current state of charge, fraction
    std::vector<double> soc_min;  // per-slot lower bound profile, fractions
    std::vector<double> soc_max;  // per-slot upper bound profile, fractions
    double slot_seconds = 300.0;

    // Slot-power to SOC-increment conversion factor (1/kW).
    double alpha() const { return slot_seconds / 3600.0 / energy_kwh; }

    // Checks all model invariants; current_slot selects which profile entry
    // the current SOC is checked against. Throws std::invalid_argument.
    void validate(std::size_t current_slot = 0) const;
};

// Returns a model with the battery power axis negated: charge-positive
// becomes injection-positive and vice versa. The SOC axis is mirrored
// (s -> 1 - s) and the bound profiles swap roles so the constraint set is
// algebraically identical. Used to move between the metering convention
// (charge-positive) and the coordination convention (injection-positive).
BatteryModel mirrored(const BatteryModel& battery);

// Returns a copy whose SOC bound profiles start at `from_slot`, for
// shrinking-horizon solves.
BatteryModel horizon_tail(const BatteryModel& battery, std::size_t from_slot);

// One slot of SOC propagation: soc + alpha * b_kw. No clamping; bound
// enforcement is the optimizer's job. Throws on non-finite input.
double soc_step(double soc, double b_kw, const BatteryModel& battery);

// Cumulative SOC sequence for every prefix of b_seq; element j equals
// soc_i + alpha * sum(b_seq[0..j]).
std::vector<double> soc_trajectory(double soc_i, std::span<const double> b_seq,
                                   const BatteryModel& battery);

// Slot-level theoretical maximum PV output, length N.
struct PvForecast {
    std::vector<double> g_hat;
    void validate() const;  // entries >= 0 and finite
};

// Per-slot deviation forecast over the remaining horizon: the coupling
// right-hand side of the coordination problem.
struct ErrorForecast {
    std::vector<double> e_hat;
    void validate() const;  // entries finite
};

// Playback input for one day: dispatch plan, 10-second prosumption and PV
// maximum-power series, slot-level PV forecast, optional slot-level load
// forecast.
struct ScenarioTrace {
    std::vector<double> p_disp;            // length N, kW
    std::vector<double> load_10s;          // length N*ticks, kW
    std::vector<double> pv_mpp_10s;        // length N*ticks, kW, >= 0
    std::vector<double> pv_gmax_5min;      // length N, kW, >= 0
    std::vector<double> load_forecast_5min;  // optional (empty or length N)

    void validate(const TimeGrid& grid) const;
};

// Slot-average of a 10-second series over slot `slot`.
double slot_average(std::span<const double> series_10s, std::size_t slot,
                    std::size_t ticks_per_slot);

}  // namespace dispatch

#endif  // DISPATCH_CORE_HPP
