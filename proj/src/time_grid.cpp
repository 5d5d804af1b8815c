#include "mcmimo/time_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace mcmimo {

TimeGrid TimeGrid::covering(double t_max, double dt) {
    if (!(dt > 0.0) || !(t_max >= dt))
        throw std::invalid_argument("time grid needs dt > 0 and t_max >= dt");
    const auto steps = static_cast<std::size_t>(std::llround(t_max / dt));
    return {dt, steps};
}

void check(const TimeGrid& grid) {
    if (!(grid.dt > 0.0) || !std::isfinite(grid.dt))
        throw std::invalid_argument("time grid dt must be positive and finite");
    if (grid.n_steps < 1) throw std::invalid_argument("time grid needs at least one step");
}

}  // namespace mcmimo
