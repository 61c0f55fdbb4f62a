#include "paultrap/errors.hpp"

#include <cstdio>

namespace paultrap {

namespace {

std::string describe(const std::vector<double>& zeros)
{
    std::string message = "trajectory vanishes inside the window at t =";
    char buffer[32];
    for (double t : zeros) {
        std::snprintf(buffer, sizeof buffer, " %.10g", t);
        message += buffer;
    }
    return message;
}

} // namespace

SingularWindow::SingularWindow(std::vector<double> zeros)
    : std::runtime_error(describe(zeros))
    , zeros_(std::move(zeros))
{
}

} // namespace paultrap
