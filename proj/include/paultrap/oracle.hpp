#pragma once

#include "paultrap/rpi.hpp"
#include "paultrap/tridiag.hpp"

#include <complex>
#include <optional>

namespace paultrap {

/// Measurement restriction applied to the lattice path integral.
struct Restriction {
    const QndElement* element;
    const ReadoutRecord* record;
};

/// Exponent of the discretized path integral over the interior positions
/// q_1..q_{N-1}:  E(q) = -1/2 q^T Q q + b^T q + c.
/// The boundary positions are folded into b and c.
struct LatticeAction {
    std::size_t steps = 0;
    double dt = 0.0;
    double mass = 1.0;
    double hbar = 1.0;
    double q_start = 0.0;
    double q_end = 0.0;
    SymmetricTridiagonal quadratic;
    std::vector<std::complex<double>> linear;
    std::complex<double> constant;
    bool restricted = false;

    double window() const noexcept { return dt * static_cast<double>(steps); }
};

/// Midpoint lattice action for the Lagrangian m qdot^2/2 - m k(t) q^2/2. With a
/// restriction, adds -(1/(T da^2)) sum dt [f qbar + m dq/dt - abar]^2, i.e. the
/// Gaussian weight with momentum read as m qdot.
LatticeAction build_lattice_action(const TrapConfig& config, const TimeGrid& grid, double q_start, double q_end,
                                   std::optional<Restriction> restriction = std::nullopt);

struct LatticeResult {
    std::complex<double> log_amplitude;
    std::complex<double> log_det;            ///< log det Q
    std::complex<double> normalized_log_det; ///< log det Q - log det Q_free
    double min_pivot_modulus = 0.0;          ///< in units of m / (hbar dt)
};

/// Integrates below which |det Q / det Q_free| is treated as a caustic.
inline constexpr double kDegeneracyTolerance = 1e-4;

/// Exact Gaussian integral of the lattice exponent, normalized by the ratio to
/// the free lattice times the continuum free prefactor sqrt(m / (2 pi i hbar T_w)).
/// Throws DegenerateIntegral near a caustic.
LatticeResult gaussian_integrate(const LatticeAction& action);

struct ProbeResult {
    LatticeResult lattice_a;
    LatticeResult lattice_b;
    double lattice_log_ratio = 0.0; ///< 2 Re log U[a] - 2 Re log U[b]
    double rpi_log_ratio = 0.0;     ///< closed-form ratio law
    double discrepancy = 0.0;       ///< lattice minus closed form
};

/// Lattice estimate of ln(P[a]/P[b]) next to the closed-form value. The two are
/// reported, not required to agree.
ProbeResult restricted_ratio_probe(const TrapConfig& config, const TimeGrid& grid, const QndElement& elem,
                                   const ReadoutRecord& a, const ReadoutRecord& b, double q_start, double q_end);

} // namespace paultrap
