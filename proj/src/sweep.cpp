#include "spinmech/sweep.hpp"

namespace spinmech {

std::size_t SweepGrid::size() const
{
    std::size_t n = 1;
    for (const auto& v : values) n *= v.size();
    return n;
}

std::vector<double> SweepGrid::coords(std::size_t flat) const
{
    std::vector<double> out(axes.size());
    for (std::size_t a = axes.size(); a-- > 0;) {
        const std::size_t n = values[a].size();
        out[a] = values[a][flat % n];
        flat /= n;
    }
    return out;
}

RawConfig SweepGrid::apply(const RawConfig& base, std::size_t flat) const
{
    RawConfig cfg = base;
    const std::vector<double> c = coords(flat);
    for (std::size_t a = 0; a < axes.size(); ++a) cfg.set(axes[a].section, axes[a].key, c[a]);
    return cfg;
}

SweepGrid make_grid(const RawConfig& raw)
{
    SweepGrid grid;
    grid.axes = sweep_axes(raw);
    for (const auto& ax : grid.axes) grid.values.push_back(axis_values(ax));
    return grid;
}

} // namespace spinmech
