#include "paultrap/report.hpp"

#include "paultrap/format.hpp"

#include <ostream>

namespace paultrap {

Json probability_json(const ReadoutRecord& record, const ProbabilityResult& probability,
                      const PropagatorResult& propagator)
{
    return Json{
        {"delta_a", record.delta_a},
        {"T", record.T},
        {"log_p1", probability.P1},
        {"log_p2", probability.P2},
        {"log_p", probability.total()},
        {"re_L2", propagator.L2.real()},
        {"im_L2", propagator.L2.imag()},
    };
}

Json oracle_json(const LatticeAction& action, double delta_a, const LatticeResult& lattice, double log_p_rpi,
                 double discrepancy)
{
    return Json{
        {"N", action.steps},
        {"dt", action.dt},
        {"delta_a", delta_a},
        {"log_amp_lattice_re", lattice.log_amplitude.real()},
        {"log_amp_lattice_im", lattice.log_amplitude.imag()},
        {"log_p_rpi", log_p_rpi},
        {"discrepancy", discrepancy},
    };
}

void write_sweep_csv(std::ostream& out, const SweepTable& table)
{
    out << "delta_a,log_p1,log_p2,log_p\n";
    for (const SweepRow& row : table.rows) {
        out << format_double(row.delta_a) << ',' << format_double(row.probability.P1) << ','
            << format_double(row.probability.P2) << ',' << format_double(row.probability.total()) << '\n';
    }
}

} // namespace paultrap
