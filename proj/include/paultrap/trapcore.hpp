#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace paultrap {

enum class Axis { X, Z };

/// Physical trap parameters as supplied by the user.
struct RawTrapParams {
    double mass = 1.0;
    double charge = 1.0;
    double gap_r = 1.0;
    double U_bar = 1.0;
    double V_bar = 0.0;
    double omega = 1.0;
    double hbar = 1.0;
    Axis axis = Axis::X;
};

/// Validated trap parameters with the reduced amplitudes U = e/(m r^2) U_bar and
/// V = e/(m r^2) V_bar. Only reduce_config() constructs one.
class TrapConfig {
public:
    const RawTrapParams& raw() const noexcept { return raw_; }
    double mass() const noexcept { return raw_.mass; }
    double hbar() const noexcept { return raw_.hbar; }
    double omega() const noexcept { return raw_.omega; }
    Axis axis() const noexcept { return raw_.axis; }
    double U() const noexcept { return U_; }
    double V() const noexcept { return V_; }
    /// Drive period 2 pi / omega.
    double period() const noexcept;

private:
    friend TrapConfig reduce_config(const RawTrapParams& raw);
    TrapConfig() = default;

    RawTrapParams raw_;
    double U_ = 0.0;
    double V_ = 0.0;
};

/// Throws ValidationError naming the offending field ("mass must be positive").
TrapConfig reduce_config(const RawTrapParams& raw);

/// Builds a config whose reduced amplitudes are (U, V), keeping the other raw
/// fields of `base`. Requires a nonzero charge.
TrapConfig with_reduced(const TrapConfig& base, double U, double V);

/// Signed stiffness: +[U - V cos(wt)] on the x axis, -[U - V cos(wt)] on z.
double stiffness(const TrapConfig& config, double t) noexcept;

/// Callable view of the stiffness; cheap to copy.
class StiffnessFn {
public:
    explicit StiffnessFn(const TrapConfig& config) noexcept;
    double operator()(double t) const noexcept;

private:
    double sign_;
    double U_;
    double V_;
    double omega_;
};

/// Uniform grid t_k = t_start + k dt, k = 0..steps, endpoints included.
class TimeGrid {
public:
    TimeGrid(double t_start, double t_end, std::size_t steps);

    double t_start() const noexcept { return t_start_; }
    double t_end() const noexcept { return t_end_; }
    std::size_t steps() const noexcept { return steps_; }
    std::size_t size() const noexcept { return steps_ + 1; }
    double dt() const noexcept { return dt_; }
    double duration() const noexcept { return t_end_ - t_start_; }
    /// Node k; node `steps` is exactly t_end.
    double time(std::size_t k) const noexcept;
    std::vector<double> times() const;
    /// Same window, twice the steps.
    TimeGrid refined() const { return TimeGrid(t_start_, t_end_, 2 * steps_); }

    bool operator==(const TimeGrid&) const = default;

private:
    double t_start_;
    double t_end_;
    std::size_t steps_;
    double dt_;
};

/// Composite trapezoid rule over grid-aligned samples.
double trapezoid(std::span<const double> samples, double dt);
std::complex<double> trapezoid(std::span<const std::complex<double>> samples, double dt);

} // namespace paultrap
