#pragma once

#include "paultrap/qnd.hpp"

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace paultrap {

/// Measurement output a(t) on the grid, with resolution delta_a and the
/// duration constant T of the Gaussian weight functional.
struct ReadoutRecord {
    TimeGrid grid;
    std::vector<double> a;
    double delta_a = 1.0;
    double T = 1.0;
};

/// Validates sizes and positivity. T defaults to the window length.
ReadoutRecord make_record(const TimeGrid& grid, std::vector<double> samples, double delta_a,
                          std::optional<double> T = std::nullopt);

/// Named record shapes.
std::vector<double> zero_samples(const TimeGrid& grid);
std::vector<double> constant_samples(const TimeGrid& grid, double value);
/// amp * sin(freq t + phase)
std::vector<double> sine_samples(const TimeGrid& grid, double amp, double freq, double phase);
/// A-history f(t) q(t) + m qdot(t) of a classical path on the element's grid.
std::vector<double> matched_samples(const QndElement& elem, const Trajectory& path);

/// -(1/(T delta_a^2)) * int (A - a)^2 dt along the phase-space path (q, p).
double weight_log(const QndElement& elem, const ReadoutRecord& record, std::span<const double> q,
                  std::span<const double> p);

struct AlphaBetaGamma {
    std::vector<double> ratio;  ///< xdot / x
    std::vector<double> alpha;  ///< (xdot/x)^2 + beta
    std::vector<double> beta;   ///< signed stiffness
    double gamma = 0.0;         ///< 4 m^2 hbar^2 + T^2 delta_a^4
};

AlphaBetaGamma alpha_beta_gamma(const QndElement& elem, const TrapConfig& config, const ReadoutRecord& record);

/// Log of the restricted propagator, split into its two exponents.
struct PropagatorResult {
    double L1 = 0.0;
    std::complex<double> L2;
    std::complex<double> total() const { return L1 + L2; }
};

/// Log of the readout probability density, split into its two exponents.
struct ProbabilityResult {
    double P1 = 0.0;
    double P2 = 0.0;
    double total() const { return P1 + P2; }
};

enum class ProbabilitySource {
    Density,        ///< closed-form density exponents
    ModulusSquared, ///< 2 Re of the propagator exponents
};

PropagatorResult propagator_log(const QndElement& elem, const TrapConfig& config, const ReadoutRecord& record);

ProbabilityResult probability_log(const QndElement& elem, const TrapConfig& config, const ReadoutRecord& record,
                                  ProbabilitySource source = ProbabilitySource::Density);

struct RatioResult {
    double log_ratio = 0.0;      ///< direct evaluation in a^2 - b^2
    double via_difference = 0.0; ///< ln P[a] - ln P[b]
};

/// ln(P[a] / P[b]). Throws ConsistencyError when the two routes disagree
/// beyond kRatioTolerance (relative).
RatioResult probability_ratio_log(const QndElement& elem, const TrapConfig& config, const ReadoutRecord& a,
                                  const ReadoutRecord& b);

inline constexpr double kRatioTolerance = 1e-10;

struct SweepRow {
    double delta_a = 0.0;
    ProbabilityResult probability;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    /// Input order is preserved. Indices i where ln P does not increase
    /// strictly from the row with the next-smaller delta_a.
    std::vector<std::size_t> non_monotone;
};

/// ln P at each delta_a (record samples and T fixed). Rows follow input order
/// regardless of `threads`.
SweepTable delta_a_sweep(const QndElement& elem, const TrapConfig& config, const ReadoutRecord& record,
                         std::span<const double> delta_a_values,
                         ProbabilitySource source = ProbabilitySource::Density, unsigned threads = 1);

} // namespace paultrap
