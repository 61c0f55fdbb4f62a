#include "paultrap/errors.hpp"
#include "paultrap/qnd.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace paultrap;
using std::numbers::pi;

namespace {

TrapConfig trap(double U, double V, double omega, double mass = 1.0)
{
    RawTrapParams raw;
    raw.U_bar = U * mass;
    raw.V_bar = V * mass;
    raw.omega = omega;
    raw.mass = mass;
    return reduce_config(raw);
}

QndElement tan_element(std::size_t steps = 1200)
{
    const TrapConfig config = trap(1, 0, 1);
    return build_qnd(integrate_trajectory(config, TimeGrid(0.0, 1.2, steps), -1.0, 0.0), 1.0);
}

} // namespace

TEST_CASE("V=0 family member is m sqrt(U) tan(sqrt(U) t)")
{
    const QndElement elem = tan_element();
    for (std::size_t k = 0; k < elem.f.size(); ++k) {
        CHECK(std::abs(elem.f[k] - std::tan(elem.reference.grid.time(k))) <= 1e-8);
        CHECK(elem.rho[k] == elem.f[k]);
        CHECK(elem.sigma_values[k] == 1.0);
    }

    const double mass = 2.0;
    const double U = 4.0;
    const TrapConfig config = trap(U, 0, 1, mass);
    const QndElement heavy = build_qnd(integrate_trajectory(config, TimeGrid(0.0, 0.7, 700), -1.0, 0.0), mass);
    for (std::size_t k = 0; k < heavy.f.size(); ++k) {
        const double t = heavy.reference.grid.time(k);
        CHECK(std::abs(heavy.f[k] - mass * std::sqrt(U) * std::tan(std::sqrt(U) * t)) <= 1e-8);
    }
}

TEST_CASE("turning point gives f = 0")
{
    const QndElement elem = tan_element();
    CHECK(elem.f[0] == 0.0);
}

TEST_CASE("zero of x inside the window is rejected")
{
    const TrapConfig config = trap(1, 0, 1);
    const Trajectory traj = integrate_trajectory(config, TimeGrid(0.0, 2.0, 2000), -1.0, 0.0);
    try {
        build_qnd(traj, 1.0);
        FAIL("expected SingularWindow");
    } catch (const SingularWindow& e) {
        REQUIRE(e.zeros().size() == 1);
        CHECK(std::abs(e.zeros()[0] - pi / 2) < 1e-8);
    }
}

TEST_CASE("vanishing sigma is rejected")
{
    const TrapConfig config = trap(1, 0, 1);
    const Trajectory traj = integrate_trajectory(config, TimeGrid(0.0, 1.0, 100), -1.0, 0.0);
    CHECK_THROWS_AS(build_qnd(traj, 1.0, [](double t) { return t - 0.5; }), ValidationError);
}

TEST_CASE("Riccati residual of the tan element")
{
    const TrapConfig config = trap(1, 0, 1);
    const RiccatiResidual coarse = riccati_residual(tan_element(1200), config);
    const RiccatiResidual fine = riccati_residual(tan_element(2400), config);
    CHECK(coarse.max_abs <= 1e-4);
    CHECK(coarse.max_abs / fine.max_abs == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("a constant f is not a Riccati solution")
{
    const TrapConfig config = trap(1.5, 0, 1);
    QndElement elem = tan_element();
    std::fill(elem.f.begin(), elem.f.end(), 0.7);
    const RiccatiResidual residual = riccati_residual(elem, config);
    for (double r : residual.residual) {
        CHECK(std::abs(r) == doctest::Approx(0.7 * 0.7 + 1.5));
    }
}

TEST_CASE("Riccati residual is second order on driven traps")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        const double U = 0.5 + unit(rng);
        const TrapConfig config = trap(U, 0.5 * U * unit(rng), 1 + 3 * unit(rng));
        const double v0 = 0.4 * unit(rng) - 0.2;
        const TimeGrid grid(0.0, 0.4, 400);
        const auto coarse = riccati_residual(build_qnd(integrate_trajectory(config, grid, 1.0, v0), 1.0), config);
        const auto fine =
            riccati_residual(build_qnd(integrate_trajectory(config, grid.refined(), 1.0, v0), 1.0), config);
        CHECK(coarse.max_abs / fine.max_abs == doctest::Approx(4.0).epsilon(0.1));
    }
}

TEST_CASE("f is invariant under rescaling the trajectory")
{
    const TrapConfig config = trap(0.8, 0.3, 2.2);
    const TimeGrid grid(0.0, 0.5, 500);
    const QndElement base = build_qnd(integrate_trajectory(config, grid, 1.0, 0.2), 1.0);
    for (double lambda : {-3.0, 0.25, 7.0}) {
        const QndElement scaled = build_qnd(integrate_trajectory(config, grid, lambda, lambda * 0.2), 1.0);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            CHECK(std::abs(scaled.f[k] - base.f[k]) <= 1e-13 * (1 + std::abs(base.f[k])));
        }
    }
}

TEST_CASE("evaluate_A")
{
    const QndElement elem = tan_element();
    CHECK(evaluate_A(elem, 0.0, 1.75, 0.6) == 1.75);
    CHECK(evaluate_A(elem, 5.0, 2.0, 0.0) == 2.0);

    const QndElement doubled = build_qnd(elem.reference, 1.0, [](double) { return 2.0; });
    CHECK_FALSE(doubled.unit_sigma);
    for (double t : {0.1, 0.55, 1.1}) {
        CHECK(evaluate_A(doubled, 0.3, -1.2, t) == 2 * evaluate_A(elem, 0.3, -1.2, t));
    }

    CHECK_THROWS_AS(evaluate_A(elem, 1.0, 1.0, 1.3), RangeError);
}

TEST_CASE("evaluate_A is linear in (q, p)")
{
    const QndElement elem = tan_element();
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> value(-3.0, 3.0);
    std::uniform_real_distribution<double> time(0.0, 1.2);
    for (int trial = 0; trial < 100; ++trial) {
        const double t = time(rng);
        const double q1 = value(rng), p1 = value(rng), q2 = value(rng), p2 = value(rng), c = value(rng);
        const double lhs = evaluate_A(elem, q1 + c * q2, p1 + c * p2, t);
        const double rhs = evaluate_A(elem, q1, p1, t) + c * evaluate_A(elem, q2, p2, t);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("QND CSV export")
{
    const QndElement elem = tan_element(3);
    std::ostringstream out;
    write_qnd_csv(out, elem);
    const std::string text = out.str();
    CHECK(text.rfind("t,f,rho,sigma\n0,", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}
