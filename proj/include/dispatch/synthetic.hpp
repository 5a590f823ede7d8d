#ifndef DISPATCH_SYNTHETIC_HPP
#define DISPATCH_SYNTHETIC_HPP

#include <cstdint>
#include <vector>

#include "dispatch/core.hpp"

// Seeded deterministic generator for the bundled synthetic reference day:
// an office-load profile with midday peak and slow wander, a clear-sky PV
// bell with cloud dips for the curtailable plant, a day-ahead forecast
// with slowly varying error, and the dispatch plan as the smoothed
// forecast. Two SOC bound profiles accompany the trace: a wide reference
// band and a band whose ceiling tightens late in the day.

namespace dispatch {

struct SyntheticDay {
    ScenarioTrace trace;
    // Per-slot policy bounds, percent.
    std::vector<double> soc_min_reference_pct, soc_max_reference_pct;
    std::vector<double> soc_min_constrained_pct, soc_max_constrained_pct;
    // Suggested initial SOC per scenario, percent.
    double soc_init_reference_pct = 91.0;
    double soc_init_constrained_pct = 60.0;
};

SyntheticDay generate_reference_day(std::uint64_t seed, const TimeGrid& grid = TimeGrid{});

}  // namespace dispatch

#endif  // DISPATCH_SYNTHETIC_HPP
