#include "paultrap/qnd.hpp"

#include "paultrap/errors.hpp"
#include "paultrap/format.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace paultrap {

QndElement build_qnd(const Trajectory& traj, double mass, SigmaFn sigma)
{
    if (!(mass > 0.0)) {
        throw ValidationError("mass must be positive");
    }
    if (auto zeros = find_zeros(traj); !zeros.empty()) {
        throw SingularWindow(std::move(zeros));
    }

    const bool unit = !sigma;
    QndElement elem{traj, mass, unit ? SigmaFn([](double) { return 1.0; }) : std::move(sigma), unit, {}, {}, {}};

    const std::size_t n = traj.grid.size();
    elem.sigma_values.resize(n);
    elem.f.resize(n);
    elem.rho.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = elem.sigma(traj.grid.time(k));
        if (s == 0.0 || !std::isfinite(s)) {
            throw ValidationError("sigma must be nonzero on the window (fails at t = " +
                                  format_double(traj.grid.time(k)) + ")");
        }
        elem.sigma_values[k] = s;
        elem.f[k] = -mass * traj.xdot[k] / traj.x[k];
        elem.rho[k] = s * elem.f[k];
    }
    return elem;
}

RiccatiResidual riccati_residual(const QndElement& elem, const TrapConfig& config)
{
    const TimeGrid& grid = elem.reference.grid;
    const std::vector<double>& f = elem.f;
    const std::size_t n = f.size();
    const double h = grid.dt();
    const double m = elem.mass;
    const StiffnessFn k(config);
    if (n < 4) {
        throw ValidationError("riccati residual needs at least 3 grid steps");
    }

    RiccatiResidual out;
    out.residual.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double derivative;
        if (i == 0) {
            derivative = (-11 * f[0] + 18 * f[1] - 9 * f[2] + 2 * f[3]) / (6 * h);
        } else if (i + 1 == n) {
            derivative = (11 * f[i] - 18 * f[i - 1] + 9 * f[i - 2] - 2 * f[i - 3]) / (6 * h);
        } else {
            derivative = (f[i + 1] - f[i - 1]) / (2 * h);
        }
        out.residual[i] = derivative - f[i] * f[i] / m - m * k(grid.time(i));
        out.max_abs = std::max(out.max_abs, std::abs(out.residual[i]));
    }
    return out;
}

double f_at(const QndElement& elem, double t)
{
    const auto state = evaluate(elem.reference, t);
    if (state.x == 0.0) {
        throw SingularWindow({t});
    }
    return -elem.mass * state.xdot / state.x;
}

double evaluate_A(const QndElement& elem, double q, double p, double t)
{
    return elem.sigma(t) * (f_at(elem, t) * q + p);
}

void write_qnd_csv(std::ostream& out, const QndElement& elem)
{
    out << "t,f,rho,sigma\n";
    const TimeGrid& grid = elem.reference.grid;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        out << format_double(grid.time(k)) << ',' << format_double(elem.f[k]) << ','
            << format_double(elem.rho[k]) << ',' << format_double(elem.sigma_values[k]) << '\n';
    }
}

} // namespace paultrap
