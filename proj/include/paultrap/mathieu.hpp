#pragma once

#include "paultrap/trapcore.hpp"

#include <array>
#include <complex>
#include <iosfwd>
#include <utility>
#include <vector>

namespace paultrap {

/// Classical solution of  x'' + k(t) x = 0  sampled on a grid.
struct Trajectory {
    TimeGrid grid;
    std::vector<double> x;
    std::vector<double> xdot;
    double x0 = 0.0;
    double v0 = 0.0;

    struct State {
        double x;
        double xdot;
    };
};

/// Fixed-step classical RK4 on the grid nodes. Throws NumericRangeError if the
/// solution overflows.
Trajectory integrate_trajectory(const TrapConfig& config, const TimeGrid& grid, double x0, double v0);

/// Cubic Hermite interpolation from the stored (x, xdot); exact at nodes.
/// Throws RangeError outside [t_start, t_end].
Trajectory::State evaluate(const Trajectory& traj, double t);

struct MonodromyReport {
    /// State-transition matrix over one drive period, row-major:
    /// column j is the state reached from basis vector e_j.
    std::array<std::array<double, 2>, 2> matrix{};
    double trace = 0.0;
    double determinant = 0.0;
    std::array<std::complex<double>, 2> multipliers{};
    bool stable = false;
};

/// Tolerance on |trace| - 2 under which a point is reported stable-marginal.
inline constexpr double kMarginalTraceTolerance = 1e-9;

MonodromyReport monodromy(const TrapConfig& config, std::size_t steps_per_period = 2000);

/// Sign changes of x (and exact node zeros), refined by bisection on the
/// Hermite interpolant to dt * 1e-6. Sorted ascending.
std::vector<double> find_zeros(const Trajectory& traj);

/// `t,x,xdot` with 17 significant digits, LF line endings.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

} // namespace paultrap
