#pragma once

#include "paultrap/trapcore.hpp"

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace paultrap {

/// Contents of a flat `key = value` run configuration.
struct RunConfig {
    RawTrapParams trap;
    double t_start = 0.0;
    double t_end = 1.0;
    std::size_t steps = 1000;
};

/// Recognised keys: mass, charge, gap_r, U_bar, V_bar, omega, hbar, axis (x|z),
/// t_start, t_end, steps. `#` starts a comment. Unknown keys, duplicate keys
/// and malformed values throw ValidationError.
RunConfig parse_config(std::istream& in);

class ConfigNotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

RunConfig load_config(const std::string& path);

} // namespace paultrap
