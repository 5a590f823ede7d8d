#include "dispatch/core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dispatch {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

bool all_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

}  // namespace

void TimeGrid::validate() const {
    require(slots_per_day >= 1, "TimeGrid: slots_per_day must be >= 1");
    require(ticks_per_slot >= 1, "TimeGrid: ticks_per_slot must be >= 1");
    require(slot_seconds > 0.0 && std::isfinite(slot_seconds),
            "TimeGrid: slot_seconds must be positive");
    require(current_slot < slots_per_day, "TimeGrid: current_slot out of range");
}

void BatteryModel::validate(std::size_t current_slot) const {
    require(energy_kwh > 0.0 && std::isfinite(energy_kwh),
            "BatteryModel: energy_kwh must be positive");
    require(std::isfinite(p_min_kw) && std::isfinite(p_max_kw),
            "BatteryModel: power bounds must be finite");
    require(p_min_kw <= 0.0 && 0.0 <= p_max_kw,
            "BatteryModel: power bounds must straddle zero (p_min <= 0 <= p_max)");
    require(slot_seconds > 0.0, "BatteryModel: slot_seconds must be positive");
    require(soc_min.size() == soc_max.size(),
            "BatteryModel: soc_min and soc_max profiles must have equal length");
    for (std::size_t j = 0; j < soc_min.size(); ++j) {
        require(std::isfinite(soc_min[j]) && std::isfinite(soc_max[j]),
                "BatteryModel: SOC bounds must be finite");
        require(0.0 <= soc_min[j] && soc_min[j] <= soc_max[j] && soc_max[j] <= 1.0,
                "BatteryModel: SOC bounds must satisfy 0 <= min <= max <= 1 at slot " +
                    std::to_string(j));
    }
    require(std::isfinite(soc), "BatteryModel: soc must be finite");
    if (!soc_min.empty()) {
        require(current_slot < soc_min.size(),
                "BatteryModel: current_slot outside SOC bound profile");
        require(soc_min[current_slot] <= soc && soc <= soc_max[current_slot],
                "BatteryModel: current SOC outside its slot bounds");
    }
}

BatteryModel mirrored(const BatteryModel& battery) {
    BatteryModel m = battery;
    m.p_min_kw = -battery.p_max_kw;
    m.p_max_kw = -battery.p_min_kw;
    m.soc = 1.0 - battery.soc;
    m.soc_min.resize(battery.soc_max.size());
    m.soc_max.resize(battery.soc_min.size());
    for (std::size_t j = 0; j < battery.soc_min.size(); ++j) {
        m.soc_min[j] = 1.0 - battery.soc_max[j];
        m.soc_max[j] = 1.0 - battery.soc_min[j];
    }
    return m;
}

BatteryModel horizon_tail(const BatteryModel& battery, std::size_t from_slot) {
    if (from_slot >= battery.soc_min.size())
        throw std::invalid_argument("horizon_tail: from_slot outside SOC bound profile");
    BatteryModel t = battery;
    t.soc_min.assign(battery.soc_min.begin() + static_cast<std::ptrdiff_t>(from_slot),
                     battery.soc_min.end());
    t.soc_max.assign(battery.soc_max.begin() + static_cast<std::ptrdiff_t>(from_slot),
                     battery.soc_max.end());
    return t;
}

double soc_step(double soc, double b_kw, const BatteryModel& battery) {
    if (!std::isfinite(soc) || !std::isfinite(b_kw))
        throw std::invalid_argument("soc_step: non-finite input");
    return soc + battery.alpha() * b_kw;
}

std::vector<double> soc_trajectory(double soc_i, std::span<const double> b_seq,
                                   const BatteryModel& battery) {
    std::vector<double> traj;
    traj.reserve(b_seq.size());
    double s = soc_i;
    for (double b : b_seq) {
        s = soc_step(s, b, battery);
        traj.push_back(s);
    }
    return traj;
}

void PvForecast::validate() const {
    for (std::size_t j = 0; j < g_hat.size(); ++j) {
        if (!std::isfinite(g_hat[j]) || g_hat[j] < 0.0)
            throw std::invalid_argument("PvForecast: entry " + std::to_string(j) +
                                        " must be finite and >= 0");
    }
}

void ErrorForecast::validate() const {
    if (!all_finite(e_hat))
        throw std::invalid_argument("ErrorForecast: entries must be finite");
}

void ScenarioTrace::validate(const TimeGrid& grid) const {
    const std::size_t n = grid.slots_per_day;
    const std::size_t nt = grid.ticks_per_day();
    require(p_disp.size() == n, "ScenarioTrace: p_disp length != slots_per_day");
    require(load_10s.size() == nt, "ScenarioTrace: load_10s length != ticks_per_day");
    require(pv_mpp_10s.size() == nt, "ScenarioTrace: pv_mpp_10s length != ticks_per_day");
    require(pv_gmax_5min.size() == n, "ScenarioTrace: pv_gmax_5min length != slots_per_day");
    require(load_forecast_5min.empty() || load_forecast_5min.size() == n,
            "ScenarioTrace: load_forecast_5min must be empty or slots_per_day long");
    require(all_finite(p_disp) && all_finite(load_10s) && all_finite(pv_mpp_10s) &&
                all_finite(pv_gmax_5min) && all_finite(load_forecast_5min),
            "ScenarioTrace: series must be finite");
    for (double g : pv_mpp_10s)
        require(g >= 0.0, "ScenarioTrace: pv_mpp_10s must be >= 0");
    for (double g : pv_gmax_5min)
        require(g >= 0.0, "ScenarioTrace: pv_gmax_5min must be >= 0");
}

double slot_average(std::span<const double> series_10s, std::size_t slot,
                    std::size_t ticks_per_slot) {
    double sum = 0.0;
    const std::size_t base = slot * ticks_per_slot;
    for (std::size_t m = 0; m < ticks_per_slot; ++m) sum += series_10s[base + m];
    return sum / static_cast<double>(ticks_per_slot);
}

}  // namespace dispatch
