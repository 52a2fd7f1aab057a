// Sweep grids: expansion of [sweep] axes into per-point config overrides.
#pragma once

#include "spinmech/config.hpp"

namespace spinmech {

struct SweepGrid {
    std::vector<SweepAxis> axes;               // 0, 1 or 2 axes
    std::vector<std::vector<double>> values;   // values per axis

    // Flat grid size (1 when no sweep). Row-major: first axis slowest.
    std::size_t size() const;

    // Axis values at a flat index, outer first.
    std::vector<double> coords(std::size_t flat) const;

    // Base config with the swept keys overridden for this grid point.
    RawConfig apply(const RawConfig& base, std::size_t flat) const;
};

SweepGrid make_grid(const RawConfig& raw);

} // namespace spinmech
