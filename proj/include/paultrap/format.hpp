#pragma once

#include <string>

namespace paultrap {

/// Locale-independent "%.17g" rendering used by every CSV artifact.
std::string format_double(double value);

} // namespace paultrap
