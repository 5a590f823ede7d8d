#ifndef DISPATCH_SIMULATION_HPP
#define DISPATCH_SIMULATION_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dispatch/admm.hpp"
#include "dispatch/core.hpp"
#include "dispatch/tracker.hpp"

// Deterministic day-long playback: drives the slot loop, builds the
// deviation forecast, runs coordinator and tracker, and produces the
// comparison experiments (no dispatch / dispatch without coordination /
// dispatch + coordination).

namespace dispatch {

enum class Mode { NoDispatch, DispatchOnly, DispatchWithAdmm };
enum class Forecaster { Persistence, Perfect, TraceProvided };

std::string to_string(Mode mode);
std::string to_string(Forecaster f);
Mode parse_mode(const std::string& s);            // throws on unknown value
Forecaster parse_forecaster(const std::string& s);

struct ScenarioConfig {
    Mode mode = Mode::DispatchWithAdmm;
    Forecaster forecaster = Forecaster::Persistence;
    ScenarioTrace trace;
    BatteryModel battery;  // charge-positive; SOC profiles hold the policy bounds
    AdmmConfig admm;
    TimeGrid grid;
    // Hardware SOC band for tracking without coordination; the policy
    // profiles above bind only through the coordinator.
    double soc_hard_min = 0.0;
    double soc_hard_max = 1.0;
    // Margin (fraction) the coordinator keeps inside the policy bounds so
    // forecast surprises do not push the realized SOC onto them.
    double soc_margin = 0.0025;
    // Fold the realized cumulative GCP energy deviation into the remaining
    // horizon requirement at slot boundaries.
    bool horizon_feedback = true;

    void validate() const;  // throws std::invalid_argument
};

struct SlotRecord {
    std::size_t slot = 0;
    double p_disp_kw = 0.0;
    double gcp_kw = 0.0;  // realized slot-average GCP power
    double e_kw = 0.0;    // gcp_kw - p_disp_kw
    double prosumption_kw = 0.0;
    double pv_kw = 0.0;           // realized PV slot average
    double pv_setpoint_kw = 0.0;  // PV set-point actuated this slot
    double g_hat_kw = 0.0;        // slot-level PV forecast
    double b_kw = 0.0;            // realized battery slot average, charge-positive
    double b_plan_kw = 0.0;       // coordinator first-slot battery plan, charge-positive
    double soc_pct = 0.0;         // end-of-slot SOC
    double soc_min_pct = 0.0;     // policy bounds for this slot
    double soc_max_pct = 0.0;
    int admm_iterations = 0;
    double admm_accuracy_kw = 0.0;
    int admm_converged = 0;
    double rho = 0.0;
    double r_norm = 0.0;
    double s_norm = 0.0;
};

struct AdmmTraceRow {
    std::size_t slot = 0;
    int iter = 0;
    double r_norm = 0.0;
    double s_norm = 0.0;
    double rho = 0.0;
};

struct DayResult {
    std::vector<SlotRecord> slots;
    std::vector<AdmmTraceRow> admm_trace;
};

struct SummaryStats {
    std::size_t slots = 0;
    double rmse_e_kw = 0.0;
    double mean_e_kw = 0.0;
    double max_abs_e_kw = 0.0;
    double pv_generation_kwh = 0.0;
    double pv_curtailment_kwh = 0.0;
    double max_soc_bound_distance_pct = 0.0;  // > 0 means a policy violation
    std::size_t admm_slots = 0;
    std::size_t nonconverged_slots = 0;
    double iterations_mean = 0.0;
    double iterations_std = 0.0;
    double iterations_max = 0.0;
    double accuracy_mean_kw = 0.0;
    double accuracy_std_kw = 0.0;
    double accuracy_max_kw = 0.0;
};

// Deviation forecast for the remaining horizon: e_hat[j] = plan[j] -
// load_forecast[j] for j = current_slot .. N-1. Both series are full-day.
ErrorForecast build_error_forecast(std::span<const double> plan,
                                   std::span<const double> load_forecast,
                                   std::size_t current_slot);

// Executes the day loop. Deterministic: identical configs produce
// identical results. Throws infeasible_error only for structurally empty
// battery constraint sets; forecast-noise excursions outside the policy
// band are absorbed by a reachability relaxation and a non-converged
// coordination outcome never blocks the loop.
DayResult run_day(const ScenarioConfig& cfg);

SummaryStats summarize(const DayResult& result);

}  // namespace dispatch

#endif  // DISPATCH_SIMULATION_HPP
