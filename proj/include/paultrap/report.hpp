#pragma once

#include "paultrap/oracle.hpp"
#include "paultrap/rpi.hpp"

#include <json.hpp>

#include <iosfwd>

namespace paultrap {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

/// {delta_a, T, log_p1, log_p2, log_p, re_L2, im_L2}
Json probability_json(const ReadoutRecord& record, const ProbabilityResult& probability,
                      const PropagatorResult& propagator);

/// {N, dt, delta_a, log_amp_lattice_re, log_amp_lattice_im, log_p_rpi, discrepancy}
Json oracle_json(const LatticeAction& action, double delta_a, const LatticeResult& lattice, double log_p_rpi,
                 double discrepancy);

/// `delta_a,log_p1,log_p2,log_p`, rows in table order.
void write_sweep_csv(std::ostream& out, const SweepTable& table);

} // namespace paultrap
