#include "paultrap/config.hpp"

#include "paultrap/errors.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <string_view>

namespace paultrap {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(std::string_view key, std::string_view text)
{
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ValidationError("config key '" + std::string(key) + "' expects a number, got '" + std::string(text) + "'");
    }
    return value;
}

std::size_t parse_count(std::string_view key, std::string_view text)
{
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ValidationError("config key '" + std::string(key) + "' expects a non-negative integer, got '" +
                              std::string(text) + "'");
    }
    return value;
}

} // namespace

RunConfig parse_config(std::istream& in)
{
    RunConfig config;
    std::set<std::string, std::less<>> seen;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        std::string_view content(line);
        if (auto hash = content.find('#'); hash != std::string_view::npos) {
            content = content.substr(0, hash);
        }
        content = trim(content);
        if (content.empty()) {
            continue;
        }
        const auto eq = content.find('=');
        if (eq == std::string_view::npos) {
            throw ValidationError("config line " + std::to_string(line_number) + ": expected 'key = value'");
        }
        const std::string_view key = trim(content.substr(0, eq));
        const std::string_view value = trim(content.substr(eq + 1));
        if (!seen.insert(std::string(key)).second) {
            throw ValidationError("config key '" + std::string(key) + "' given twice");
        }

        if (key == "mass") {
            config.trap.mass = parse_number(key, value);
        } else if (key == "charge") {
            config.trap.charge = parse_number(key, value);
        } else if (key == "gap_r") {
            config.trap.gap_r = parse_number(key, value);
        } else if (key == "U_bar") {
            config.trap.U_bar = parse_number(key, value);
        } else if (key == "V_bar") {
            config.trap.V_bar = parse_number(key, value);
        } else if (key == "omega") {
            config.trap.omega = parse_number(key, value);
        } else if (key == "hbar") {
            config.trap.hbar = parse_number(key, value);
        } else if (key == "axis") {
            if (value == "x") {
                config.trap.axis = Axis::X;
            } else if (value == "z") {
                config.trap.axis = Axis::Z;
            } else {
                throw ValidationError("config key 'axis' expects x or z");
            }
        } else if (key == "t_start") {
            config.t_start = parse_number(key, value);
        } else if (key == "t_end") {
            config.t_end = parse_number(key, value);
        } else if (key == "steps") {
            config.steps = parse_count(key, value);
        } else {
            throw ValidationError("unknown config key '" + std::string(key) + "'");
        }
    }
    return config;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigNotFound("config not found: " + path);
    }
    return parse_config(in);
}

} // namespace paultrap
