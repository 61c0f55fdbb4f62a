#pragma once

#include "paultrap/mathieu.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace paultrap {

/// Time-dependent prefactor sigma(t) of the QND variable.
using SigmaFn = std::function<double(double)>;

/// One member of the QND family A = sigma (f q + p), with f = rho / sigma =
/// -m xdot / x built from a classical reference trajectory.
struct QndElement {
    Trajectory reference;
    double mass = 1.0;
    SigmaFn sigma;
    bool unit_sigma = true;
    std::vector<double> sigma_values;
    std::vector<double> f;
    std::vector<double> rho;
};

/// Throws SingularWindow if x has zeros on the window, ValidationError if
/// sigma vanishes at a node. An empty `sigma` means sigma = 1.
QndElement build_qnd(const Trajectory& traj, double mass, SigmaFn sigma = {});

struct RiccatiResidual {
    std::vector<double> residual;
    double max_abs = 0.0;
};

/// r = df/dt - f^2/m - m k(t), with df/dt from centered differences and
/// third-order one-sided stencils at the two endpoints.
RiccatiResidual riccati_residual(const QndElement& elem, const TrapConfig& config);

/// f at an arbitrary time in the window, from the Hermite-interpolated state.
double f_at(const QndElement& elem, double t);

/// sigma(t) (f(t) q + p). Throws SingularWindow if x(t) = 0, RangeError
/// outside the window.
double evaluate_A(const QndElement& elem, double q, double p, double t);

/// `t,f,rho,sigma`.
void write_qnd_csv(std::ostream& out, const QndElement& elem);

} // namespace paultrap
