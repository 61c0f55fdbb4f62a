#include "paultrap/trapcore.hpp"

#include "paultrap/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace paultrap {

namespace {

void require_positive(double value, const char* name)
{
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw ValidationError(std::string(name) + " must be positive");
    }
}

void require_finite(double value, const char* name)
{
    if (!std::isfinite(value)) {
        throw ValidationError(std::string(name) + " must be finite");
    }
}

template <typename T>
T trapezoid_impl(std::span<const T> samples, double dt)
{
    if (samples.size() < 2) {
        throw ValidationError("trapezoid rule needs at least two samples");
    }
    T interior{};
    for (std::size_t k = 1; k + 1 < samples.size(); ++k) {
        interior += samples[k];
    }
    return dt * (interior + 0.5 * (samples.front() + samples.back()));
}

} // namespace

double TrapConfig::period() const noexcept
{
    return 2.0 * std::numbers::pi / raw_.omega;
}

TrapConfig reduce_config(const RawTrapParams& raw)
{
    require_positive(raw.mass, "mass");
    require_positive(raw.gap_r, "gap_r");
    require_positive(raw.omega, "omega");
    require_positive(raw.hbar, "hbar");
    require_finite(raw.charge, "charge");
    require_finite(raw.U_bar, "U_bar");
    require_finite(raw.V_bar, "V_bar");

    TrapConfig config;
    config.raw_ = raw;
    const double factor = raw.charge / (raw.mass * raw.gap_r * raw.gap_r);
    config.U_ = factor * raw.U_bar;
    config.V_ = factor * raw.V_bar;
    return config;
}

TrapConfig with_reduced(const TrapConfig& base, double U, double V)
{
    RawTrapParams raw = base.raw();
    if (raw.charge == 0.0) {
        throw ValidationError("charge must be nonzero to set reduced amplitudes");
    }
    const double inverse = raw.mass * raw.gap_r * raw.gap_r / raw.charge;
    raw.U_bar = U * inverse;
    raw.V_bar = V * inverse;
    return reduce_config(raw);
}

double stiffness(const TrapConfig& config, double t) noexcept
{
    return StiffnessFn(config)(t);
}

StiffnessFn::StiffnessFn(const TrapConfig& config) noexcept
    : sign_(config.axis() == Axis::Z ? -1.0 : 1.0)
    , U_(config.U())
    , V_(config.V())
    , omega_(config.omega())
{
}

double StiffnessFn::operator()(double t) const noexcept
{
    return sign_ * (U_ - V_ * std::cos(omega_ * t));
}

TimeGrid::TimeGrid(double t_start, double t_end, std::size_t steps)
    : t_start_(t_start)
    , t_end_(t_end)
    , steps_(steps)
    , dt_((t_end - t_start) / static_cast<double>(steps))
{
    if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_end > t_start)) {
        throw ValidationError("time grid needs t_end > t_start");
    }
    if (steps < 2) {
        throw ValidationError("time grid needs at least 2 steps");
    }
}

double TimeGrid::time(std::size_t k) const noexcept
{
    if (k >= steps_) {
        return t_end_;
    }
    return t_start_ + static_cast<double>(k) * dt_;
}

std::vector<double> TimeGrid::times() const
{
    std::vector<double> out(size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = time(k);
    }
    return out;
}

double trapezoid(std::span<const double> samples, double dt)
{
    return trapezoid_impl(samples, dt);
}

std::complex<double> trapezoid(std::span<const std::complex<double>> samples, double dt)
{
    return trapezoid_impl(samples, dt);
}

} // namespace paultrap
