#include "paultrap/cli.hpp"

#include "paultrap/config.hpp"
#include "paultrap/errors.hpp"
#include "paultrap/format.hpp"
#include "paultrap/mathieu.hpp"
#include "paultrap/oracle.hpp"
#include "paultrap/qnd.hpp"
#include "paultrap/report.hpp"
#include "paultrap/rpi.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace paultrap::cli {

namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
    std::string config_path;
    std::string out_dir = ".";
    unsigned threads = 1;
    CLI::Option* steps_option = nullptr;
    std::size_t steps = 0;
};

struct PathOptions {
    double x0 = -1.0;
    double v0 = 0.0;
};

struct StabilityOptions {
    std::string U_range = "0.1,2";
    std::string V_range = "0,1";
    std::string resolution = "20";
    std::size_t steps_per_period = 2000;
};

struct ProbabilityOptions {
    std::string record = "constant:1";
    std::string record_b;
    std::string delta_a = "1";
    std::optional<double> T;
    std::string source = "eq16";
    bool oracle = false;
    double q_start = 0.0;
    double q_end = 0.0;
};

struct Resolved {
    RunConfig run;
    TrapConfig config;
    TimeGrid grid;
};

std::vector<double> parse_list(const std::string& text, const char* what)
{
    std::vector<double> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
            throw ValidationError(std::string(what) + ": cannot parse '" + item + "'");
        }
        values.push_back(value);
    }
    if (values.empty()) {
        throw ValidationError(std::string(what) + " is empty");
    }
    return values;
}

Resolved resolve(const GlobalOptions& global)
{
    RunConfig run = load_config(global.config_path);
    if (global.steps_option != nullptr && global.steps_option->count() > 0) {
        run.steps = global.steps;
    }
    TrapConfig config = reduce_config(run.trap);
    TimeGrid grid(run.t_start, run.t_end, run.steps);
    return {run, config, grid};
}

Json config_json(const Resolved& resolved)
{
    const RawTrapParams& raw = resolved.run.trap;
    return Json{
        {"mass", raw.mass},
        {"charge", raw.charge},
        {"gap_r", raw.gap_r},
        {"U_bar", raw.U_bar},
        {"V_bar", raw.V_bar},
        {"omega", raw.omega},
        {"hbar", raw.hbar},
        {"axis", raw.axis == Axis::X ? "x" : "z"},
        {"U", resolved.config.U()},
        {"V", resolved.config.V()},
    };
}

Json base_manifest(const std::string& command, const Resolved& resolved, const GlobalOptions& global)
{
    return Json{
        {"format_version", kFormatVersion},
        {"command", command},
        {"config", config_json(resolved)},
        {"grid", {{"t_start", resolved.grid.t_start()}, {"t_end", resolved.grid.t_end()}, {"steps", resolved.grid.steps()}}},
        {"out", global.out_dir},
    };
}

fs::path artifact_path(const GlobalOptions& global, const std::string& name)
{
    fs::create_directories(global.out_dir);
    return fs::path(global.out_dir) / name;
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw std::runtime_error("cannot write " + path.string());
    }
    file << text;
}

std::string csv_preamble(const Json& manifest)
{
    return "# format_version=" + std::to_string(kFormatVersion) + "\n# manifest=" + manifest.dump() + "\n";
}

void write_json(const fs::path& path, Json body, const Json& manifest)
{
    Json document{{"format_version", kFormatVersion}, {"manifest", manifest}};
    for (auto& [key, value] : body.items()) {
        document[key] = std::move(value);
    }
    write_text(path, document.dump(2) + "\n");
}

// Record generator specs: zero | constant:<v> | sine:<amp>,<freq>,<phase> | matched[:<q0>,<v0>]
std::vector<double> record_samples(const std::string& spec, const Resolved& resolved, const QndElement& elem)
{
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string args = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
    const TimeGrid& grid = resolved.grid;

    if (name == "zero" && args.empty()) {
        return zero_samples(grid);
    }
    if (name == "constant") {
        const auto values = parse_list(args, "constant record");
        if (values.size() == 1) {
            return constant_samples(grid, values[0]);
        }
    }
    if (name == "sine") {
        const auto values = parse_list(args, "sine record");
        if (values.size() == 3) {
            return sine_samples(grid, values[0], values[1], values[2]);
        }
    }
    if (name == "matched") {
        std::vector<double> values{0.0, 1.0};
        if (!args.empty()) {
            values = parse_list(args, "matched record");
        }
        if (values.size() == 2) {
            const Trajectory path = integrate_trajectory(resolved.config, grid, values[0], values[1]);
            return matched_samples(elem, path);
        }
    }
    throw ValidationError("unrecognised record spec '" + spec + "'");
}

ProbabilitySource parse_source(const std::string& text)
{
    if (text == "eq16") {
        return ProbabilitySource::Density;
    }
    if (text == "mod-eq15-squared") {
        return ProbabilitySource::ModulusSquared;
    }
    throw ValidationError("--source must be eq16 or mod-eq15-squared");
}

QndElement reference_element(const Resolved& resolved, const PathOptions& path)
{
    const Trajectory traj = integrate_trajectory(resolved.config, resolved.grid, path.x0, path.v0);
    return build_qnd(traj, resolved.config.mass());
}

int cmd_trajectory(const GlobalOptions& global, const PathOptions& path)
{
    const Resolved resolved = resolve(global);
    const Trajectory traj = integrate_trajectory(resolved.config, resolved.grid, path.x0, path.v0);

    Json manifest = base_manifest("trajectory", resolved, global);
    manifest["initial"] = {{"x0", path.x0}, {"v0", path.v0}};

    std::ostringstream csv;
    csv << csv_preamble(manifest);
    write_trajectory_csv(csv, traj);
    write_text(artifact_path(global, "trajectory.csv"), csv.str());
    return kSuccess;
}

int cmd_stability(const GlobalOptions& global, const StabilityOptions& options)
{
    const Resolved resolved = resolve(global);
    const auto U_range = parse_list(options.U_range, "--U-range");
    const auto V_range = parse_list(options.V_range, "--V-range");
    const auto resolution = parse_list(options.resolution, "--resolution");
    if (U_range.size() != 2 || V_range.size() != 2 || !(U_range[0] <= U_range[1]) || !(V_range[0] <= V_range[1])) {
        throw ValidationError("ranges must be given as min,max with min <= max");
    }
    if (resolution.size() > 2 || resolution.front() < 1 || resolution.back() < 1) {
        throw ValidationError("--resolution must be n or nU,nV with n >= 1");
    }
    const auto nU = static_cast<std::size_t>(resolution.front());
    const auto nV = static_cast<std::size_t>(resolution.back());
    auto sample = [](const std::vector<double>& range, std::size_t count, std::size_t i) {
        return count == 1 ? range[0] : range[0] + (range[1] - range[0]) * static_cast<double>(i) / static_cast<double>(count - 1);
    };

    Json manifest = base_manifest("stability", resolved, global);
    manifest["U_range"] = U_range;
    manifest["V_range"] = V_range;
    manifest["resolution"] = {nU, nV};
    manifest["steps_per_period"] = options.steps_per_period;

    std::ostringstream csv;
    csv << csv_preamble(manifest) << "U,V,abs_trace,stable\n";
    for (std::size_t i = 0; i < nU; ++i) {
        for (std::size_t j = 0; j < nV; ++j) {
            const double U = sample(U_range, nU, i);
            const double V = sample(V_range, nV, j);
            const MonodromyReport report = monodromy(with_reduced(resolved.config, U, V), options.steps_per_period);
            csv << format_double(U) << ',' << format_double(V) << ',' << format_double(std::abs(report.trace)) << ','
                << (report.stable ? 1 : 0) << '\n';
        }
    }
    write_text(artifact_path(global, "stability.csv"), csv.str());
    return kSuccess;
}

int cmd_qnd_check(const GlobalOptions& global, const PathOptions& path)
{
    const Resolved resolved = resolve(global);
    const QndElement elem = reference_element(resolved, path);
    const RiccatiResidual residual = riccati_residual(elem, resolved.config);

    Json manifest = base_manifest("qnd-check", resolved, global);
    manifest["initial"] = {{"x0", path.x0}, {"v0", path.v0}};

    std::ostringstream csv;
    csv << csv_preamble(manifest);
    write_qnd_csv(csv, elem);
    write_text(artifact_path(global, "qnd.csv"), csv.str());

    std::ostringstream residual_csv;
    residual_csv << csv_preamble(manifest) << "t,residual\n";
    for (std::size_t k = 0; k < residual.residual.size(); ++k) {
        residual_csv << format_double(resolved.grid.time(k)) << ',' << format_double(residual.residual[k]) << '\n';
    }
    write_text(artifact_path(global, "riccati.csv"), residual_csv.str());

    write_json(artifact_path(global, "qnd_check.json"),
               Json{{"dt", resolved.grid.dt()}, {"max_abs_residual", residual.max_abs}}, manifest);
    return kSuccess;
}

Json probability_manifest(const std::string& command, const Resolved& resolved, const GlobalOptions& global,
                          const PathOptions& path, const ProbabilityOptions& options,
                          const std::vector<double>& delta_a)
{
    Json manifest = base_manifest(command, resolved, global);
    manifest["initial"] = {{"x0", path.x0}, {"v0", path.v0}};
    manifest["record"] = options.record;
    manifest["record_b"] = options.record_b.empty() ? Json(nullptr) : Json(options.record_b);
    manifest["delta_a"] = delta_a;
    manifest["T"] = options.T ? Json(*options.T) : Json(nullptr);
    manifest["source"] = options.source;
    manifest["oracle"] = options.oracle;
    if (options.oracle || command == "oracle") {
        manifest["q_start"] = options.q_start;
        manifest["q_end"] = options.q_end;
    }
    return manifest;
}

int cmd_probability(const GlobalOptions& global, const PathOptions& path, const ProbabilityOptions& options)
{
    const Resolved resolved = resolve(global);
    const ProbabilitySource source = parse_source(options.source);
    const auto delta_a = parse_list(options.delta_a, "--delta-a");
    const QndElement elem = reference_element(resolved, path);
    const auto samples_a = record_samples(options.record, resolved, elem);
    const std::optional<std::vector<double>> samples_b =
        options.record_b.empty() ? std::nullopt : std::optional(record_samples(options.record_b, resolved, elem));

    const Json manifest = probability_manifest("probability", resolved, global, path, options, delta_a);

    const ReadoutRecord base = make_record(resolved.grid, samples_a, delta_a.front(), options.T);
    const SweepTable sweep = delta_a_sweep(elem, resolved.config, base, delta_a, source, global.threads);

    Json results = Json::array();
    Json ratios = Json::array();
    Json oracle = Json::array();
    std::ostringstream ratio_csv;
    ratio_csv << csv_preamble(manifest) << "delta_a,log_ratio\n";
    for (std::size_t i = 0; i < delta_a.size(); ++i) {
        const ReadoutRecord record_a = make_record(resolved.grid, samples_a, delta_a[i], options.T);
        results.push_back(probability_json(record_a, sweep.rows[i].probability,
                                           propagator_log(elem, resolved.config, record_a)));
        if (samples_b) {
            const ReadoutRecord record_b = make_record(resolved.grid, *samples_b, delta_a[i], options.T);
            const RatioResult ratio = probability_ratio_log(elem, resolved.config, record_a, record_b);
            ratios.push_back({{"delta_a", delta_a[i]}, {"log_ratio", ratio.log_ratio}, {"via_difference", ratio.via_difference}});
            ratio_csv << format_double(delta_a[i]) << ',' << format_double(ratio.log_ratio) << '\n';
        }
        if (options.oracle) {
            const ReadoutRecord record_b =
                make_record(resolved.grid, samples_b ? *samples_b : zero_samples(resolved.grid), delta_a[i], options.T);
            const ProbeResult probe = restricted_ratio_probe(resolved.config, resolved.grid, elem, record_a, record_b,
                                                             options.q_start, options.q_end);
            const LatticeAction action = build_lattice_action(resolved.config, resolved.grid, options.q_start,
                                                              options.q_end, Restriction{&elem, &record_a});
            oracle.push_back(oracle_json(action, delta_a[i], probe.lattice_a, sweep.rows[i].probability.total(),
                                         probe.discrepancy));
        }
    }

    std::vector<std::size_t> non_monotone(sweep.non_monotone);
    Json body{{"results", results}, {"non_monotone", non_monotone}};
    if (samples_b) {
        body["ratio"] = ratios;
    }
    if (options.oracle) {
        body["oracle"] = oracle;
    }
    write_json(artifact_path(global, "probability.json"), body, manifest);

    std::ostringstream sweep_csv;
    sweep_csv << csv_preamble(manifest);
    write_sweep_csv(sweep_csv, sweep);
    write_text(artifact_path(global, "sweep.csv"), sweep_csv.str());
    if (samples_b) {
        write_text(artifact_path(global, "ratio.csv"), ratio_csv.str());
    }
    return kSuccess;
}

int cmd_oracle(const GlobalOptions& global, const PathOptions& path, const ProbabilityOptions& options)
{
    const Resolved resolved = resolve(global);
    const auto delta_a = parse_list(options.delta_a, "--delta-a");
    const QndElement elem = reference_element(resolved, path);
    const auto samples_a = record_samples(options.record, resolved, elem);
    const auto samples_b =
        options.record_b.empty() ? zero_samples(resolved.grid) : record_samples(options.record_b, resolved, elem);

    const Json manifest = probability_manifest("oracle", resolved, global, path, options, delta_a);

    const LatticeAction free_action =
        build_lattice_action(resolved.config, resolved.grid, options.q_start, options.q_end);
    const LatticeResult unrestricted = gaussian_integrate(free_action);

    Json reports = Json::array();
    for (double da : delta_a) {
        const ReadoutRecord record_a = make_record(resolved.grid, samples_a, da, options.T);
        const ReadoutRecord record_b = make_record(resolved.grid, samples_b, da, options.T);
        const ProbeResult probe = restricted_ratio_probe(resolved.config, resolved.grid, elem, record_a, record_b,
                                                         options.q_start, options.q_end);
        const double log_p = probability_log(elem, resolved.config, record_a).total();
        Json entry = oracle_json(free_action, da, probe.lattice_a, log_p, probe.discrepancy);
        entry["lattice_log_ratio"] = probe.lattice_log_ratio;
        entry["rpi_log_ratio"] = probe.rpi_log_ratio;
        reports.push_back(std::move(entry));
    }

    Json body{
        {"unrestricted",
         {{"log_amp_lattice_re", unrestricted.log_amplitude.real()},
          {"log_amp_lattice_im", unrestricted.log_amplitude.imag()},
          {"min_pivot_modulus", unrestricted.min_pivot_modulus}}},
        {"reports", reports},
    };
    write_json(artifact_path(global, "oracle.json"), body, manifest);
    return kSuccess;
}

void add_path_options(CLI::App* command, PathOptions& path)
{
    command->add_option("--x0", path.x0, "initial position of the reference trajectory")->capture_default_str();
    command->add_option("--v0", path.v0, "initial velocity of the reference trajectory")->capture_default_str();
}

void add_record_options(CLI::App* command, ProbabilityOptions& options)
{
    command->add_option("--record", options.record, "zero | constant:<v> | sine:<amp>,<freq>,<phase> | matched[:<q0>,<v0>]")
        ->capture_default_str();
    command->add_option("--record-b", options.record_b, "second record for the ratio law");
    command->add_option("--delta-a", options.delta_a, "comma-separated resolutions")->capture_default_str();
    command->add_option("--T", options.T, "duration constant (default: window length)");
    command->add_option("--q-start", options.q_start, "lattice boundary position at t_start");
    command->add_option("--q-end", options.q_end, "lattice boundary position at t_end");
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Paul trap QND monitoring toolkit", "paultrap"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--config", global.config_path, "flat key = value configuration file")->required();
    app.add_option("--out", global.out_dir, "output directory")->capture_default_str();
    app.add_option("--threads", global.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
    global.steps_option = app.add_option("--steps", global.steps, "override the grid step count")
                              ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    PathOptions path;
    StabilityOptions stability;
    ProbabilityOptions probability;
    ProbabilityOptions oracle;

    auto* trajectory_cmd = app.add_subcommand("trajectory", "integrate the equation of motion, write trajectory.csv");
    add_path_options(trajectory_cmd, path);

    auto* stability_cmd = app.add_subcommand("stability", "Floquet stability chart, write stability.csv");
    stability_cmd->add_option("--U-range", stability.U_range, "min,max")->capture_default_str();
    stability_cmd->add_option("--V-range", stability.V_range, "min,max")->capture_default_str();
    stability_cmd->add_option("--resolution", stability.resolution, "n or nU,nV")->capture_default_str();
    stability_cmd->add_option("--steps-per-period", stability.steps_per_period)->capture_default_str();

    auto* qnd_cmd = app.add_subcommand("qnd-check", "build the QND element and its Riccati residual");
    add_path_options(qnd_cmd, path);

    auto* probability_cmd = app.add_subcommand("probability", "readout densities, ratio law and delta_a sweep");
    add_path_options(probability_cmd, path);
    add_record_options(probability_cmd, probability);
    probability_cmd->add_option("--source", probability.source, "eq16 | mod-eq15-squared")->capture_default_str();
    probability_cmd->add_flag("--oracle", probability.oracle, "attach lattice oracle comparison");

    auto* oracle_cmd = app.add_subcommand("oracle", "lattice Gaussian path-integral comparison, write oracle.json");
    add_path_options(oracle_cmd, path);
    add_record_options(oracle_cmd, oracle);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (*trajectory_cmd) {
            return cmd_trajectory(global, path);
        }
        if (*stability_cmd) {
            return cmd_stability(global, stability);
        }
        if (*qnd_cmd) {
            return cmd_qnd_check(global, path);
        }
        if (*probability_cmd) {
            return cmd_probability(global, path, probability);
        }
        if (*oracle_cmd) {
            return cmd_oracle(global, path, oracle);
        }
    } catch (const ConfigNotFound& e) {
        err << "config not found: " << global.config_path << '\n';
        return kUsageError;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const SingularWindow& e) {
        err << "error: singular window; zeros of x at t =";
        for (double t : e.zeros()) {
            err << ' ' << format_double(t);
        }
        err << '\n';
        return kComputationError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kComputationError;
    }
    return kUsageError;
}

} // namespace paultrap::cli
