#include "paultrap/mathieu.hpp"

#include "paultrap/errors.hpp"
#include "paultrap/format.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace paultrap {

namespace {

struct Hermite {
    double x;
    double xdot;
};

// Cubic Hermite on [t_k, t_k + h] at local coordinate s in [0, 1].
Hermite hermite(double x0, double v0, double x1, double v1, double h, double s)
{
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    const double d00 = (6 * s2 - 6 * s) / h;
    const double d10 = 3 * s2 - 4 * s + 1;
    const double d01 = (-6 * s2 + 6 * s) / h;
    const double d11 = 3 * s2 - 2 * s;
    return {h00 * x0 + h10 * h * v0 + h01 * x1 + h11 * h * v1,
            d00 * x0 + d10 * v0 + d01 * x1 + d11 * v1};
}

struct Segment {
    std::size_t k;
    double s;
};

Segment locate(const TimeGrid& grid, double t)
{
    const double u = (t - grid.t_start()) / grid.dt();
    auto k = static_cast<std::size_t>(std::floor(u));
    if (k >= grid.steps()) {
        k = grid.steps() - 1;
    }
    const double s = (t - grid.time(k)) / grid.dt();
    return {k, s};
}

Hermite interpolate(const Trajectory& traj, double t)
{
    auto [k, s] = locate(traj.grid, t);
    return hermite(traj.x[k], traj.xdot[k], traj.x[k + 1], traj.xdot[k + 1], traj.grid.dt(), s);
}

// One RK4 step of (x, v)' = (v, -k(t) x).
void rk4_step(const StiffnessFn& k, double t, double h, double& x, double& v)
{
    const double k_start = k(t);
    const double k_mid = k(t + 0.5 * h);
    const double k_end = k(t + h);

    const double x1 = v;
    const double v1 = -k_start * x;
    const double x2 = v + 0.5 * h * v1;
    const double v2 = -k_mid * (x + 0.5 * h * x1);
    const double x3 = v + 0.5 * h * v2;
    const double v3 = -k_mid * (x + 0.5 * h * x2);
    const double x4 = v + h * v3;
    const double v4 = -k_end * (x + h * x3);

    x += h / 6.0 * (x1 + 2 * x2 + 2 * x3 + x4);
    v += h / 6.0 * (v1 + 2 * v2 + 2 * v3 + v4);
}

} // namespace

Trajectory integrate_trajectory(const TrapConfig& config, const TimeGrid& grid, double x0, double v0)
{
    Trajectory traj{grid, std::vector<double>(grid.size()), std::vector<double>(grid.size()), x0, v0};
    const StiffnessFn k(config);
    double x = x0;
    double v = v0;
    traj.x[0] = x;
    traj.xdot[0] = v;
    for (std::size_t step = 0; step < grid.steps(); ++step) {
        const double t = grid.time(step);
        rk4_step(k, t, grid.time(step + 1) - t, x, v);
        if (!std::isfinite(x) || !std::isfinite(v)) {
            throw NumericRangeError("trajectory overflowed at t = " + format_double(t));
        }
        traj.x[step + 1] = x;
        traj.xdot[step + 1] = v;
    }
    return traj;
}

Trajectory::State evaluate(const Trajectory& traj, double t)
{
    const TimeGrid& grid = traj.grid;
    const double slack = 1e-12 * std::max(1.0, std::abs(t));
    if (!(t >= grid.t_start() - slack) || !(t <= grid.t_end() + slack)) {
        throw RangeError("t = " + format_double(t) + " outside trajectory window");
    }
    auto [k, s] = locate(grid, std::clamp(t, grid.t_start(), grid.t_end()));
    if (s == 0.0) {
        return {traj.x[k], traj.xdot[k]};
    }
    if (s == 1.0) {
        return {traj.x[k + 1], traj.xdot[k + 1]};
    }
    const Hermite h = hermite(traj.x[k], traj.xdot[k], traj.x[k + 1], traj.xdot[k + 1], grid.dt(), s);
    return {h.x, h.xdot};
}

MonodromyReport monodromy(const TrapConfig& config, std::size_t steps_per_period)
{
    const TimeGrid period(0.0, config.period(), steps_per_period);
    const StiffnessFn k(config);

    MonodromyReport report;
    for (int column = 0; column < 2; ++column) {
        double x = column == 0 ? 1.0 : 0.0;
        double v = column == 0 ? 0.0 : 1.0;
        for (std::size_t step = 0; step < period.steps(); ++step) {
            const double t = period.time(step);
            rk4_step(k, t, period.time(step + 1) - t, x, v);
        }
        report.matrix[0][column] = x;
        report.matrix[1][column] = v;
    }

    const auto& m = report.matrix;
    report.trace = m[0][0] + m[1][1];
    report.determinant = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    const std::complex<double> half_trace(0.5 * report.trace, 0.0);
    const std::complex<double> root = std::sqrt(half_trace * half_trace - report.determinant);
    report.multipliers = {half_trace + root, half_trace - root};
    report.stable = std::abs(report.trace) <= 2.0 + kMarginalTraceTolerance;
    return report;
}

std::vector<double> find_zeros(const Trajectory& traj)
{
    const TimeGrid& grid = traj.grid;
    const double tolerance = grid.dt() * 1e-6;
    std::vector<double> zeros;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (traj.x[k] == 0.0) {
            zeros.push_back(grid.time(k));
            continue;
        }
        if (k + 1 == grid.size() || traj.x[k + 1] == 0.0 || (traj.x[k] > 0) == (traj.x[k + 1] > 0)) {
            continue;
        }
        double lo = grid.time(k);
        double hi = grid.time(k + 1);
        const bool lo_positive = traj.x[k] > 0;
        while (hi - lo > tolerance) {
            const double mid = 0.5 * (lo + hi);
            const double value = interpolate(traj, mid).x;
            if (value == 0.0) {
                lo = hi = mid;
                break;
            }
            ((value > 0) == lo_positive ? lo : hi) = mid;
        }
        zeros.push_back(0.5 * (lo + hi));
    }
    return zeros;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj)
{
    out << "t,x,xdot\n";
    for (std::size_t k = 0; k < traj.grid.size(); ++k) {
        out << format_double(traj.grid.time(k)) << ',' << format_double(traj.x[k]) << ','
            << format_double(traj.xdot[k]) << '\n';
    }
}

} // namespace paultrap
