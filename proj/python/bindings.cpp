#include "paultrap/errors.hpp"
#include "paultrap/mathieu.hpp"
#include "paultrap/oracle.hpp"
#include "paultrap/qnd.hpp"
#include "paultrap/rpi.hpp"
#include "paultrap/trapcore.hpp"

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace paultrap;

namespace {

void register_errors(py::module_& m)
{
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<RangeError>(m, "RangeError", PyExc_IndexError);
    py::register_exception<NumericRangeError>(m, "NumericRangeError", PyExc_ArithmeticError);
    py::register_exception<DegenerateIntegral>(m, "DegenerateIntegral", PyExc_RuntimeError);
    py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_RuntimeError);

    // SingularWindow carries the zeros of x as an attribute.
    static py::handle singular = py::exception<SingularWindow>(m, "SingularWindow", PyExc_RuntimeError).release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const SingularWindow& e) {
            py::gil_scoped_acquire gil;
            py::object error = singular(e.what());
            error.attr("zeros") = py::cast(e.zeros());
            PyErr_SetObject(singular.ptr(), error.ptr());
        }
    });
}

} // namespace

PYBIND11_MODULE(_paultrap, m)
{
    m.doc() = "Paul-trap QND monitoring core";
    register_errors(m);

    py::enum_<Axis>(m, "Axis").value("X", Axis::X).value("Z", Axis::Z);

    py::class_<RawTrapParams>(m, "RawTrapParams")
        .def(py::init([](double mass, double charge, double gap_r, double U_bar, double V_bar, double omega,
                         double hbar, Axis axis) {
                 return RawTrapParams{mass, charge, gap_r, U_bar, V_bar, omega, hbar, axis};
             }),
             py::kw_only(), py::arg("mass") = 1.0, py::arg("charge") = 1.0, py::arg("gap_r") = 1.0,
             py::arg("U_bar") = 1.0, py::arg("V_bar") = 0.0, py::arg("omega") = 1.0, py::arg("hbar") = 1.0,
             py::arg("axis") = Axis::X)
        .def_readwrite("mass", &RawTrapParams::mass)
        .def_readwrite("charge", &RawTrapParams::charge)
        .def_readwrite("gap_r", &RawTrapParams::gap_r)
        .def_readwrite("U_bar", &RawTrapParams::U_bar)
        .def_readwrite("V_bar", &RawTrapParams::V_bar)
        .def_readwrite("omega", &RawTrapParams::omega)
        .def_readwrite("hbar", &RawTrapParams::hbar)
        .def_readwrite("axis", &RawTrapParams::axis);

    py::class_<TrapConfig>(m, "TrapConfig")
        .def_property_readonly("raw", &TrapConfig::raw)
        .def_property_readonly("mass", &TrapConfig::mass)
        .def_property_readonly("hbar", &TrapConfig::hbar)
        .def_property_readonly("omega", &TrapConfig::omega)
        .def_property_readonly("axis", &TrapConfig::axis)
        .def_property_readonly("U", &TrapConfig::U)
        .def_property_readonly("V", &TrapConfig::V)
        .def_property_readonly("period", &TrapConfig::period);

    m.def("reduce_config", &reduce_config, py::arg("raw"));
    m.def("with_reduced", &with_reduced, py::arg("base"), py::arg("U"), py::arg("V"));
    m.def("stiffness", &stiffness, py::arg("config"), py::arg("t"));

    py::class_<TimeGrid>(m, "TimeGrid")
        .def(py::init<double, double, std::size_t>(), py::arg("t_start"), py::arg("t_end"), py::arg("steps"))
        .def_property_readonly("t_start", &TimeGrid::t_start)
        .def_property_readonly("t_end", &TimeGrid::t_end)
        .def_property_readonly("steps", &TimeGrid::steps)
        .def_property_readonly("dt", &TimeGrid::dt)
        .def("time", &TimeGrid::time)
        .def("times", &TimeGrid::times)
        .def("refined", &TimeGrid::refined)
        .def("__len__", &TimeGrid::size)
        .def("__eq__", [](const TimeGrid& a, const TimeGrid& b) { return a == b; });

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("grid", &Trajectory::grid)
        .def_readonly("x", &Trajectory::x)
        .def_readonly("xdot", &Trajectory::xdot)
        .def_readonly("x0", &Trajectory::x0)
        .def_readonly("v0", &Trajectory::v0);

    m.def("integrate_trajectory", &integrate_trajectory, py::arg("config"), py::arg("grid"), py::arg("x0"),
          py::arg("v0"));
    m.def(
        "evaluate",
        [](const Trajectory& traj, double t) {
            const auto state = evaluate(traj, t);
            return py::make_tuple(state.x, state.xdot);
        },
        py::arg("traj"), py::arg("t"), "Hermite-interpolated (x, xdot) at t.");
    m.def("find_zeros", &find_zeros, py::arg("traj"));

    py::class_<MonodromyReport>(m, "MonodromyReport")
        .def_readonly("matrix", &MonodromyReport::matrix)
        .def_readonly("trace", &MonodromyReport::trace)
        .def_readonly("determinant", &MonodromyReport::determinant)
        .def_readonly("multipliers", &MonodromyReport::multipliers)
        .def_readonly("stable", &MonodromyReport::stable);
    m.def("monodromy", &monodromy, py::arg("config"), py::arg("steps_per_period") = 2000);

    py::class_<QndElement>(m, "QndElement")
        .def_readonly("reference", &QndElement::reference)
        .def_readonly("mass", &QndElement::mass)
        .def_readonly("unit_sigma", &QndElement::unit_sigma)
        .def_readonly("sigma_values", &QndElement::sigma_values)
        .def_readonly("f", &QndElement::f)
        .def_readonly("rho", &QndElement::rho);
    m.def("build_qnd", &build_qnd, py::arg("traj"), py::arg("mass"), py::arg("sigma") = SigmaFn{});
    m.def(
        "riccati_residual",
        [](const QndElement& elem, const TrapConfig& config) {
            auto r = riccati_residual(elem, config);
            return py::make_tuple(r.residual, r.max_abs);
        },
        py::arg("elem"), py::arg("config"), "(residual samples, max |residual|).");
    m.def("f_at", &f_at, py::arg("elem"), py::arg("t"));
    m.def("evaluate_A", &evaluate_A, py::arg("elem"), py::arg("q"), py::arg("p"), py::arg("t"));

    py::class_<ReadoutRecord>(m, "ReadoutRecord")
        .def_readonly("grid", &ReadoutRecord::grid)
        .def_readonly("a", &ReadoutRecord::a)
        .def_readonly("delta_a", &ReadoutRecord::delta_a)
        .def_readonly("T", &ReadoutRecord::T);
    m.def("make_record", &make_record, py::arg("grid"), py::arg("samples"), py::arg("delta_a"),
          py::arg("T") = std::nullopt);
    m.def("zero_samples", &zero_samples, py::arg("grid"));
    m.def("constant_samples", &constant_samples, py::arg("grid"), py::arg("value"));
    m.def("sine_samples", &sine_samples, py::arg("grid"), py::arg("amp"), py::arg("freq"), py::arg("phase"));
    m.def("matched_samples", &matched_samples, py::arg("elem"), py::arg("path"));

    py::enum_<ProbabilitySource>(m, "ProbabilitySource")
        .value("Density", ProbabilitySource::Density)
        .value("ModulusSquared", ProbabilitySource::ModulusSquared);

    py::class_<PropagatorResult>(m, "PropagatorResult")
        .def_readonly("L1", &PropagatorResult::L1)
        .def_readonly("L2", &PropagatorResult::L2)
        .def("total", &PropagatorResult::total);
    py::class_<ProbabilityResult>(m, "ProbabilityResult")
        .def_readonly("P1", &ProbabilityResult::P1)
        .def_readonly("P2", &ProbabilityResult::P2)
        .def("total", &ProbabilityResult::total);
    py::class_<RatioResult>(m, "RatioResult")
        .def_readonly("log_ratio", &RatioResult::log_ratio)
        .def_readonly("via_difference", &RatioResult::via_difference);

    m.def("propagator_log", &propagator_log, py::arg("elem"), py::arg("config"), py::arg("record"));
    m.def("probability_log", &probability_log, py::arg("elem"), py::arg("config"), py::arg("record"),
          py::arg("source") = ProbabilitySource::Density);
    m.def("probability_ratio_log", &probability_ratio_log, py::arg("elem"), py::arg("config"), py::arg("a"),
          py::arg("b"));
    m.def(
        "delta_a_sweep",
        [](const QndElement& elem, const TrapConfig& config, const ReadoutRecord& record,
           const std::vector<double>& delta_a, ProbabilitySource source, unsigned threads) {
            SweepTable table;
            {
                py::gil_scoped_release release;
                table = delta_a_sweep(elem, config, record, delta_a, source, threads);
            }
            py::list rows;
            for (const auto& row : table.rows) {
                rows.append(py::make_tuple(row.delta_a, row.probability));
            }
            return py::make_tuple(rows, table.non_monotone);
        },
        py::arg("elem"), py::arg("config"), py::arg("record"), py::arg("delta_a"),
        py::arg("source") = ProbabilitySource::Density, py::arg("threads") = 1,
        "([(delta_a, ProbabilityResult)], non_monotone indices).");

    py::class_<LatticeAction>(m, "LatticeAction")
        .def_readonly("steps", &LatticeAction::steps)
        .def_readonly("dt", &LatticeAction::dt)
        .def_readonly("restricted", &LatticeAction::restricted)
        .def("window", &LatticeAction::window);
    py::class_<LatticeResult>(m, "LatticeResult")
        .def_readonly("log_amplitude", &LatticeResult::log_amplitude)
        .def_readonly("log_det", &LatticeResult::log_det)
        .def_readonly("normalized_log_det", &LatticeResult::normalized_log_det)
        .def_readonly("min_pivot_modulus", &LatticeResult::min_pivot_modulus);
    py::class_<ProbeResult>(m, "ProbeResult")
        .def_readonly("lattice_a", &ProbeResult::lattice_a)
        .def_readonly("lattice_b", &ProbeResult::lattice_b)
        .def_readonly("lattice_log_ratio", &ProbeResult::lattice_log_ratio)
        .def_readonly("rpi_log_ratio", &ProbeResult::rpi_log_ratio)
        .def_readonly("discrepancy", &ProbeResult::discrepancy);

    m.def(
        "build_lattice_action",
        [](const TrapConfig& config, const TimeGrid& grid, double q_start, double q_end, const QndElement* element,
           const ReadoutRecord* record) {
            if ((element == nullptr) != (record == nullptr)) {
                throw ValidationError("element and record must be given together");
            }
            std::optional<Restriction> restriction;
            if (element != nullptr) {
                restriction = Restriction{element, record};
            }
            return build_lattice_action(config, grid, q_start, q_end, restriction);
        },
        py::arg("config"), py::arg("grid"), py::arg("q_start"), py::arg("q_end"), py::arg("element") = nullptr,
        py::arg("record") = nullptr);
    m.def("gaussian_integrate", &gaussian_integrate, py::arg("action"));
    m.def("restricted_ratio_probe", &restricted_ratio_probe, py::arg("config"), py::arg("grid"), py::arg("elem"),
          py::arg("a"), py::arg("b"), py::arg("q_start"), py::arg("q_end"));
}
