#include "paultrap/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args)
{
    args.insert(args.begin(), "paultrap");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = paultrap::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::path(PAULTRAP_TEST_TMPDIR) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const std::string& body)
{
    const fs::path path = dir / "trap.cfg";
    std::ofstream(path) << body;
    return path;
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& path)
{
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream stream(line);
        std::string field;
        while (std::getline(stream, field, ',')) {
            fields.push_back(field);
        }
        rows.push_back(fields);
    }
    return rows;
}

const char* kOscillator = "U_bar = 1\nV_bar = 0\nomega = 1\nt_start = 0\nt_end = 1.2\nsteps = 1200\n";

} // namespace

TEST_CASE("trajectory subcommand writes the -cos solution")
{
    const fs::path dir = scratch("trajectory");
    const fs::path cfg = write_config(dir, kOscillator);
    const Outcome result = run({"trajectory", "--config", cfg.string(), "--out", dir.string()});
    REQUIRE(result.code == 0);

    const auto rows = csv_rows(dir / "trajectory.csv");
    REQUIRE(rows.size() == 1202);
    CHECK(rows[0] == std::vector<std::string>{"t", "x", "xdot"});
    for (std::size_t i = 1; i < rows.size(); i += 97) {
        const double t = std::stod(rows[i][0]);
        CHECK(std::abs(std::stod(rows[i][1]) + std::cos(t)) < 1e-10);
    }
    const std::string text = slurp(dir / "trajectory.csv");
    CHECK(text.rfind("# format_version=1\n# manifest={", 0) == 0);
}

TEST_CASE("missing config file is a usage error")
{
    const Outcome result = run({"trajectory", "--config", "/nonexistent/trap.cfg"});
    CHECK(result.code == 2);
    CHECK(result.err.find("config not found") != std::string::npos);
}

TEST_CASE("unknown config key and bad flags are usage errors")
{
    const fs::path dir = scratch("usage");
    const fs::path cfg = write_config(dir, "mass = 1\nfrequency = 3\n");
    CHECK(run({"trajectory", "--config", cfg.string(), "--out", dir.string()}).code == 2);
    CHECK(run({"trajectory"}).code == 2);
    CHECK(run({"teleport", "--config", cfg.string()}).code == 2);
}

TEST_CASE("repeated --steps takes the last value")
{
    const fs::path dir = scratch("steps");
    const fs::path cfg = write_config(dir, kOscillator);
    const Outcome result =
        run({"trajectory", "--config", cfg.string(), "--out", dir.string(), "--steps", "10", "--steps", "20"});
    REQUIRE(result.code == 0);
    CHECK(csv_rows(dir / "trajectory.csv").size() == 22);

    std::ifstream in(dir / "trajectory.csv");
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    const auto manifest = nlohmann::json::parse(line.substr(std::string("# manifest=").size()));
    CHECK(manifest["grid"]["steps"] == 20);
}

TEST_CASE("stability chart")
{
    const fs::path dir = scratch("stability");
    const fs::path cfg = write_config(dir, "omega = 2\n");

    REQUIRE(run({"stability", "--config", cfg.string(), "--out", dir.string(), "--U-range", "0.2,3", "--V-range",
                 "0,0", "--resolution", "15,1"})
                .code == 0);
    auto rows = csv_rows(dir / "stability.csv");
    REQUIRE(rows.size() == 16);
    CHECK(rows[0] == std::vector<std::string>{"U", "V", "abs_trace", "stable"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i][3] == "1");
    }

    REQUIRE(run({"stability", "--config", cfg.string(), "--out", dir.string(), "--U-range", "1,1", "--V-range",
                 "0.2,0.2", "--resolution", "1"})
                .code == 0);
    rows = csv_rows(dir / "stability.csv");
    REQUIRE(rows.size() == 2);
    CHECK(std::stod(rows[1][0]) == 1.0);
    CHECK(std::stod(rows[1][2]) > 2.0);
    CHECK(rows[1][3] == "0");

    CHECK(run({"stability", "--config", cfg.string(), "--out", dir.string(), "--U-range", "2,1"}).code == 2);
    CHECK(run({"stability", "--config", cfg.string(), "--out", dir.string(), "--resolution", "0"}).code == 2);
}

TEST_CASE("qnd-check reports the Riccati residual")
{
    const fs::path dir = scratch("qnd");
    const fs::path cfg = write_config(dir, kOscillator);
    REQUIRE(run({"qnd-check", "--config", cfg.string(), "--out", dir.string()}).code == 0);
    const auto report = nlohmann::json::parse(slurp(dir / "qnd_check.json"));
    CHECK(report["format_version"] == 1);
    CHECK(report["max_abs_residual"].get<double>() < 1e-4);
    CHECK(csv_rows(dir / "qnd.csv")[0] == std::vector<std::string>{"t", "f", "rho", "sigma"});
}

TEST_CASE("probability subcommand")
{
    const fs::path dir = scratch("probability");
    const fs::path cfg = write_config(dir, kOscillator);

    SUBCASE("zero record")
    {
        REQUIRE(run({"probability", "--config", cfg.string(), "--out", dir.string(), "--record", "zero", "--delta-a",
                     "0.1,1,10"})
                    .code == 0);
        const auto doc = nlohmann::json::parse(slurp(dir / "probability.json"));
        REQUIRE(doc["results"].size() == 3);
        for (const auto& row : doc["results"]) {
            CHECK(row["log_p"].get<double>() == 0.0);
        }
        CHECK(doc["manifest"]["record"] == "zero");
    }

    SUBCASE("identical second record")
    {
        REQUIRE(run({"probability", "--config", cfg.string(), "--out", dir.string(), "--record", "sine:1,2,0.5",
                     "--record-b", "sine:1,2,0.5", "--delta-a", "0.5,2"})
                    .code == 0);
        const auto rows = csv_rows(dir / "ratio.csv");
        REQUIRE(rows.size() == 3);
        CHECK(std::stod(rows[1][1]) == 0.0);
        CHECK(std::stod(rows[2][1]) == 0.0);
    }

    SUBCASE("sharpening resolution drives the density down")
    {
        REQUIRE(run({"probability", "--config", cfg.string(), "--out", dir.string(), "--record", "constant:1",
                     "--delta-a", "0.1,0.05,0.02,0.01,0.005", "--threads", "3"})
                    .code == 0);
        const auto rows = csv_rows(dir / "sweep.csv");
        REQUIRE(rows.size() == 6);
        CHECK(rows[0] == std::vector<std::string>{"delta_a", "log_p1", "log_p2", "log_p"});
        for (std::size_t i = 2; i < rows.size(); ++i) {
            CHECK(std::stod(rows[i][3]) < std::stod(rows[i - 1][3]));
        }
        CHECK(std::stod(rows.back()[3]) < -7e4);
    }

    SUBCASE("oracle attachment")
    {
        REQUIRE(run({"probability", "--config", cfg.string(), "--out", dir.string(), "--steps", "200", "--record",
                     "constant:0.5", "--delta-a", "1", "--oracle", "--q-start", "0.1"})
                    .code == 0);
        const auto doc = nlohmann::json::parse(slurp(dir / "probability.json"));
        REQUIRE(doc["oracle"].size() == 1);
        const auto& entry = doc["oracle"][0];
        for (const char* key : {"N", "dt", "delta_a", "log_amp_lattice_re", "log_amp_lattice_im", "log_p_rpi", "discrepancy"}) {
            CHECK(entry.contains(key));
        }
        CHECK(entry["N"] == 200);
    }

    SUBCASE("modulus-squared source and bad source")
    {
        REQUIRE(run({"probability", "--config", cfg.string(), "--out", dir.string(), "--source", "mod-eq15-squared"}).code == 0);
        CHECK(run({"probability", "--config", cfg.string(), "--out", dir.string(), "--source", "bogus"}).code == 2);
        CHECK(run({"probability", "--config", cfg.string(), "--out", dir.string(), "--record", "triangle"}).code == 2);
    }
}

TEST_CASE("singular window exits with code 1 and lists the zero")
{
    const fs::path dir = scratch("singular");
    const fs::path cfg = write_config(dir, "U_bar = 1\nV_bar = 0\nt_end = 2\nsteps = 2000\n");
    const Outcome result = run({"probability", "--config", cfg.string(), "--out", dir.string()});
    CHECK(result.code == 1);
    const auto at = result.err.find("t =");
    REQUIRE(at != std::string::npos);
    CHECK(std::abs(std::stod(result.err.substr(at + 3)) - std::numbers::pi / 2) < 1e-5);
}

TEST_CASE("oracle subcommand")
{
    const fs::path dir = scratch("oracle");
    const fs::path cfg = write_config(dir, "U_bar = 1\nt_end = 1\nsteps = 400\n");
    REQUIRE(run({"oracle", "--config", cfg.string(), "--out", dir.string(), "--record", "constant:0.5", "--delta-a",
                 "0.5,5"})
                .code == 0);
    const auto doc = nlohmann::json::parse(slurp(dir / "oracle.json"));
    REQUIRE(doc["reports"].size() == 2);
    CHECK(doc["manifest"]["command"] == "oracle");
    CHECK(std::abs(doc["unrestricted"]["log_amp_lattice_re"].get<double>()) < 10.0);
}
