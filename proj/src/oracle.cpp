#include "paultrap/oracle.hpp"

#include "paultrap/errors.hpp"

#include <cmath>
#include <numbers>

namespace paultrap {

namespace {

using Complex = std::complex<double>;

void check_restriction(const TimeGrid& grid, const Restriction& restriction)
{
    if (restriction.element == nullptr || restriction.record == nullptr) {
        throw ValidationError("restriction needs an element and a record");
    }
    const QndElement& elem = *restriction.element;
    const ReadoutRecord& record = *restriction.record;
    if (!(elem.reference.grid == grid) || !(record.grid == grid)) {
        throw ValidationError("restriction must share the lattice grid");
    }
    if (!elem.unit_sigma) {
        throw ValidationError("lattice restriction requires sigma = 1");
    }
    if (record.a.size() != grid.size()) {
        throw ValidationError("record sample count does not match the grid");
    }
    // delta_a = +inf is accepted here and switches the weight off.
    if (!(record.delta_a > 0.0) || !(record.T > 0.0) || !std::isfinite(record.T)) {
        throw ValidationError("restriction needs delta_a > 0 and T > 0");
    }
    if (auto zeros = find_zeros(elem.reference); !zeros.empty()) {
        throw SingularWindow(std::move(zeros));
    }
}

} // namespace

LatticeAction build_lattice_action(const TrapConfig& config, const TimeGrid& grid, double q_start, double q_end,
                                   std::optional<Restriction> restriction)
{
    const std::size_t steps = grid.steps();
    if (steps < 2) {
        throw ValidationError("lattice needs at least 2 steps");
    }
    if (restriction) {
        check_restriction(grid, *restriction);
    }

    const double m = config.mass();
    const double hbar = config.hbar();
    const double dt = grid.dt();
    const StiffnessFn k(config);

    // Full (N+1)-node form before eliminating the boundary nodes.
    std::vector<Complex> diag(steps + 1);
    std::vector<Complex> off(steps);
    std::vector<Complex> linear(steps + 1);
    Complex constant;

    const Complex kinetic(0.0, m / (hbar * dt));
    double weight = 0.0;
    if (restriction) {
        const ReadoutRecord& record = *restriction->record;
        weight = 1.0 / (record.T * record.delta_a * record.delta_a);
    }

    for (std::size_t j = 0; j < steps; ++j) {
        const double t_mid = grid.time(j) + 0.5 * dt;
        const Complex potential(0.0, m * k(t_mid) * dt / (4 * hbar));

        diag[j] += -kinetic + potential;
        diag[j + 1] += -kinetic + potential;
        off[j] += kinetic + potential;

        if (weight > 0.0) {
            const double f_mid = f_at(*restriction->element, t_mid);
            const auto& a = restriction->record->a;
            const double a_mid = 0.5 * (a[j] + a[j + 1]);
            const double u = 0.5 * f_mid - m / dt;
            const double v = 0.5 * f_mid + m / dt;
            const double scale = 2 * weight * dt;
            diag[j] += scale * u * u;
            diag[j + 1] += scale * v * v;
            off[j] += scale * u * v;
            linear[j] += scale * a_mid * u;
            linear[j + 1] += scale * a_mid * v;
            constant -= weight * dt * a_mid * a_mid;
        }
    }

    LatticeAction action;
    action.steps = steps;
    action.dt = dt;
    action.mass = m;
    action.hbar = hbar;
    action.q_start = q_start;
    action.q_end = q_end;
    action.restricted = weight > 0.0;

    const std::size_t n = steps - 1;
    action.quadratic.diag.assign(diag.begin() + 1, diag.end() - 1);
    action.quadratic.off.assign(off.begin() + 1, off.end() - 1);
    action.linear.assign(linear.begin() + 1, linear.end() - 1);
    action.linear.front() -= off.front() * q_start;
    action.linear[n - 1] -= off.back() * q_end;
    action.constant = constant + linear.front() * q_start + linear.back() * q_end -
                      0.5 * (diag.front() * q_start * q_start + diag.back() * q_end * q_end);
    return action;
}

LatticeResult gaussian_integrate(const LatticeAction& action)
{
    const std::size_t n = action.quadratic.size();
    const TridiagonalLdlt ldlt(action.quadratic);
    const double scale = action.mass / (action.hbar * action.dt);

    LatticeResult result;
    result.min_pivot_modulus = ldlt.min_pivot_modulus() / scale;
    if (ldlt.singular()) {
        throw DegenerateIntegral("lattice quadratic form is singular");
    }
    result.log_det = ldlt.log_det();

    // Free lattice: Q_free = (-i m / (hbar dt)) tridiag(-1, 2, -1), det tridiag = N.
    const Complex log_det_free = static_cast<double>(n) * Complex(std::log(scale), -0.5 * std::numbers::pi) +
                                 std::log(static_cast<double>(action.steps));
    result.normalized_log_det = result.log_det - log_det_free;
    if (result.normalized_log_det.real() < std::log(kDegeneracyTolerance)) {
        throw DegenerateIntegral("lattice quadratic form is near-singular (caustic)");
    }

    const std::vector<Complex> solution = ldlt.solve(action.linear);
    Complex stationary = action.constant;
    for (std::size_t i = 0; i < n; ++i) {
        stationary += 0.5 * action.linear[i] * solution[i];
    }

    const Complex free_prefactor =
        0.5 * std::log(Complex(0.0, -action.mass / (2 * std::numbers::pi * action.hbar * action.window())));
    result.log_amplitude = -0.5 * result.normalized_log_det + stationary + free_prefactor;
    return result;
}

ProbeResult restricted_ratio_probe(const TrapConfig& config, const TimeGrid& grid, const QndElement& elem,
                                   const ReadoutRecord& a, const ReadoutRecord& b, double q_start, double q_end)
{
    if (a.delta_a != b.delta_a || a.T != b.T || !(a.grid == b.grid)) {
        throw ValidationError("records must share grid, delta_a and T");
    }
    ProbeResult out;
    out.lattice_a = gaussian_integrate(build_lattice_action(config, grid, q_start, q_end, Restriction{&elem, &a}));
    out.lattice_b = gaussian_integrate(build_lattice_action(config, grid, q_start, q_end, Restriction{&elem, &b}));
    out.lattice_log_ratio = 2 * (out.lattice_a.log_amplitude.real() - out.lattice_b.log_amplitude.real());
    out.rpi_log_ratio = probability_ratio_log(elem, config, a, b).log_ratio;
    out.discrepancy = out.lattice_log_ratio - out.rpi_log_ratio;
    return out;
}

} // namespace paultrap
