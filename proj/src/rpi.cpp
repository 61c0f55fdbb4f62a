#include "paultrap/rpi.hpp"

#include "paultrap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

namespace paultrap {

namespace {

void check_record(const ReadoutRecord& record)
{
    if (record.a.size() != record.grid.size()) {
        throw ValidationError("record sample count does not match the grid");
    }
    if (!(record.delta_a > 0.0) || !std::isfinite(record.delta_a)) {
        throw ValidationError("delta_a must be positive");
    }
    if (!(record.T > 0.0) || !std::isfinite(record.T)) {
        throw ValidationError("T must be positive");
    }
}

void check_compatible(const QndElement& elem, const ReadoutRecord& record)
{
    check_record(record);
    if (!(elem.reference.grid == record.grid)) {
        throw ValidationError("record grid differs from the QND element grid");
    }
    if (!elem.unit_sigma) {
        throw ValidationError("restricted-path formulas require sigma = 1");
    }
}

double square(double v) { return v * v; }

// Shared Lorentzian-like denominator alpha^2 + (T^2 da^4 / 4 m^2 hbar^2) beta^2.
double denominator(double alpha, double beta, double coupling)
{
    return alpha * alpha + coupling * beta * beta;
}

struct Scales {
    double m;
    double hbar;
    double T_da2;    ///< T delta_a^2
    double coupling; ///< T^2 delta_a^4 / (4 m^2 hbar^2)
};

Scales scales(const TrapConfig& config, const ReadoutRecord& record)
{
    const double m = config.mass();
    const double hbar = config.hbar();
    const double T_da2 = record.T * square(record.delta_a);
    return {m, hbar, T_da2, square(T_da2) / (4 * m * m * hbar * hbar)};
}

// Integrand of the density's second exponent per unit a^2:
// (xdot/x)^2 [(xdot/x)^2 + 2 beta] / D.
double density_kernel(double g, double alpha, double beta, double coupling)
{
    const double g2 = g * g;
    if (g2 == 0.0) {
        return 0.0;
    }
    return g2 * (g2 + 2 * beta) / denominator(alpha, beta, coupling);
}

} // namespace

ReadoutRecord make_record(const TimeGrid& grid, std::vector<double> samples, double delta_a,
                          std::optional<double> T)
{
    ReadoutRecord record{grid, std::move(samples), delta_a, T.value_or(grid.duration())};
    check_record(record);
    return record;
}

std::vector<double> zero_samples(const TimeGrid& grid)
{
    return std::vector<double>(grid.size(), 0.0);
}

std::vector<double> constant_samples(const TimeGrid& grid, double value)
{
    return std::vector<double>(grid.size(), value);
}

std::vector<double> sine_samples(const TimeGrid& grid, double amp, double freq, double phase)
{
    std::vector<double> out(grid.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = amp * std::sin(freq * grid.time(k) + phase);
    }
    return out;
}

std::vector<double> matched_samples(const QndElement& elem, const Trajectory& path)
{
    if (!(path.grid == elem.reference.grid)) {
        throw ValidationError("matched path must share the element grid");
    }
    std::vector<double> out(path.grid.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = elem.sigma_values[k] * (elem.f[k] * path.x[k] + elem.mass * path.xdot[k]);
    }
    return out;
}

double weight_log(const QndElement& elem, const ReadoutRecord& record, std::span<const double> q,
                  std::span<const double> p)
{
    check_compatible(elem, record);
    if (q.size() != record.a.size() || p.size() != record.a.size()) {
        throw ValidationError("phase-space path must be grid-aligned");
    }
    std::vector<double> mismatch(q.size());
    for (std::size_t k = 0; k < q.size(); ++k) {
        mismatch[k] = square(elem.f[k] * q[k] + p[k] - record.a[k]);
    }
    return -trapezoid(mismatch, record.grid.dt()) / (record.T * square(record.delta_a));
}

AlphaBetaGamma alpha_beta_gamma(const QndElement& elem, const TrapConfig& config, const ReadoutRecord& record)
{
    check_compatible(elem, record);
    const Trajectory& ref = elem.reference;
    if (auto zeros = find_zeros(ref); !zeros.empty()) {
        throw SingularWindow(std::move(zeros));
    }
    const StiffnessFn k(config);
    const std::size_t n = ref.grid.size();

    AlphaBetaGamma out;
    out.ratio.resize(n);
    out.alpha.resize(n);
    out.beta.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.ratio[i] = ref.xdot[i] / ref.x[i];
        out.beta[i] = k(ref.grid.time(i));
        out.alpha[i] = square(out.ratio[i]) + out.beta[i];
    }
    const double m = config.mass();
    const double hbar = config.hbar();
    out.gamma = 4 * m * m * hbar * hbar + square(record.T * square(record.delta_a));
    return out;
}

PropagatorResult propagator_log(const QndElement& elem, const TrapConfig& config, const ReadoutRecord& record)
{
    const AlphaBetaGamma abg = alpha_beta_gamma(elem, config, record);
    const auto [m, hbar, T_da2, coupling] = scales(config, record);
    const std::size_t n = record.a.size();
    const double dt = record.grid.dt();

    std::vector<double> a2(n);
    std::vector<std::complex<double>> integrand(n);
    for (std::size_t i = 0; i < n; ++i) {
        a2[i] = square(record.a[i]);
        const double weight = square(record.a[i] * abg.ratio[i]);
        if (weight == 0.0) {
            continue;
        }
        const std::complex<double> numerator(2 * m * m * hbar * abg.alpha[i], m * T_da2 * abg.beta[i]);
        integrand[i] = weight * numerator / denominator(abg.alpha[i], abg.beta[i], coupling);
    }

    const std::complex<double> prefactor = std::complex<double>(T_da2, -2 * m * hbar) / (2 * m * m * hbar * abg.gamma);
    PropagatorResult out;
    out.L1 = -trapezoid(a2, dt) / T_da2;
    out.L2 = prefactor * trapezoid(integrand, dt);
    return out;
}

ProbabilityResult probability_log(const QndElement& elem, const TrapConfig& config, const ReadoutRecord& record,
                                  ProbabilitySource source)
{
    if (source == ProbabilitySource::ModulusSquared) {
        const PropagatorResult prop = propagator_log(elem, config, record);
        return {2 * prop.L1, 2 * prop.L2.real()};
    }

    const AlphaBetaGamma abg = alpha_beta_gamma(elem, config, record);
    const auto [m, hbar, T_da2, coupling] = scales(config, record);
    const std::size_t n = record.a.size();

    std::vector<double> a2(n);
    std::vector<double> integrand(n);
    for (std::size_t i = 0; i < n; ++i) {
        a2[i] = square(record.a[i]);
        integrand[i] = a2[i] == 0.0 ? 0.0 : a2[i] * density_kernel(abg.ratio[i], abg.alpha[i], abg.beta[i], coupling);
    }
    const double dt = record.grid.dt();
    return {-2 * trapezoid(a2, dt) / T_da2, T_da2 / abg.gamma * trapezoid(integrand, dt)};
}

RatioResult probability_ratio_log(const QndElement& elem, const TrapConfig& config, const ReadoutRecord& a,
                                  const ReadoutRecord& b)
{
    check_compatible(elem, a);
    check_compatible(elem, b);
    if (a.delta_a != b.delta_a || a.T != b.T) {
        throw ValidationError("records must share delta_a and T");
    }

    const AlphaBetaGamma abg = alpha_beta_gamma(elem, config, a);
    const auto [m, hbar, T_da2, coupling] = scales(config, a);
    const std::size_t n = a.a.size();

    std::vector<double> diff(n);
    std::vector<double> integrand(n);
    for (std::size_t i = 0; i < n; ++i) {
        diff[i] = square(a.a[i]) - square(b.a[i]);
        integrand[i] = diff[i] == 0.0 ? 0.0 : diff[i] * density_kernel(abg.ratio[i], abg.alpha[i], abg.beta[i], coupling);
    }
    const double dt = a.grid.dt();

    RatioResult out;
    out.log_ratio = -2 * trapezoid(diff, dt) / T_da2 + T_da2 / abg.gamma * trapezoid(integrand, dt);

    const double log_pa = probability_log(elem, config, a).total();
    const double log_pb = probability_log(elem, config, b).total();
    out.via_difference = log_pa - log_pb;

    const double scale = std::max({std::abs(log_pa), std::abs(log_pb), std::abs(out.log_ratio)});
    if (std::abs(out.log_ratio - out.via_difference) > kRatioTolerance * scale) {
        throw ConsistencyError("ratio routes disagree beyond tolerance");
    }
    return out;
}

SweepTable delta_a_sweep(const QndElement& elem, const TrapConfig& config, const ReadoutRecord& record,
                         std::span<const double> delta_a_values, ProbabilitySource source, unsigned threads)
{
    if (delta_a_values.empty()) {
        throw ValidationError("delta_a list is empty");
    }
    check_compatible(elem, record);

    SweepTable table;
    table.rows.resize(delta_a_values.size());
    auto evaluate_row = [&](std::size_t i) {
        ReadoutRecord point = record;
        point.delta_a = delta_a_values[i];
        check_record(point);
        table.rows[i] = {point.delta_a, probability_log(elem, config, point, source)};
    };

    for (double da : delta_a_values) {
        if (!(da > 0.0) || !std::isfinite(da)) {
            throw ValidationError("delta_a must be positive");
        }
    }

    const std::size_t count = delta_a_values.size();
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, count);
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            evaluate_row(i);
        }
    } else {
        std::vector<std::exception_ptr> failures(workers);
        {
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (std::size_t i = w; i < count; i += workers) {
                            evaluate_row(i);
                        }
                    } catch (...) {
                        failures[w] = std::current_exception();
                    }
                });
            }
        }
        for (const auto& failure : failures) {
            if (failure) {
                std::rethrow_exception(failure);
            }
        }
    }

    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return delta_a_values[l] < delta_a_values[r]; });
    for (std::size_t j = 1; j < count; ++j) {
        if (!(table.rows[order[j]].probability.total() > table.rows[order[j - 1]].probability.total())) {
            table.non_monotone.push_back(order[j]);
        }
    }
    return table;
}

} // namespace paultrap
