// Command-line front end: run | sweep | layout | validate.
//
// Exit codes: 0 success, 1 usage error, 2 validation error, 3 runtime failure.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cure/config.hpp"
#include "cure/io.hpp"
#include "cure/sim.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kRuntime = 3 };

fs::path output_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("CURE_OUT"); env && *env) return env;
    return "cure_out";
}

std::vector<std::string> split_values(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

struct Options {
    std::string scenario;
    std::string out;
    std::optional<long long> seed;
    std::optional<int> setups;
    std::string ris = "on";
    int workers = 0;
    bool debug = false;
    std::string axis;
    std::string values;
    int setup = 0;
    std::string layout_out;
};

cure::ScenarioSpec load(const Options& o) {
    cure::ScenarioSpec spec = cure::load_scenario(o.scenario);
    if (o.seed) spec.seed = *o.seed;
    if (o.setups) spec.setups = *o.setups;
    if (o.ris == "off") spec.ris_count = 0;
    cure::derive_system(spec);
    cure::validate(spec);
    return spec;
}

int cmd_run(const Options& o) {
    const cure::ScenarioSpec spec = load(o);
    const fs::path dir = output_dir(o.out);
    const auto start = std::chrono::steady_clock::now();
    const cure::CampaignResult result = cure::run_campaign(spec, o.workers);
    cure::RunMeta meta;
    meta.spec = spec;
    meta.workers = o.workers;
    meta.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    cure::emit_outputs(result, meta, dir);

    if (o.debug) {
        cure::SetupDebug dbg;
        cure::run_setup(spec, 0, &dbg);
        cure::write_channel_dump((dir / "channels.bin").string(), dbg.ensemble, dbg.large_scale);
        cure::write_text(dir / "solver_trace.csv", cure::trace_csv(dbg.trace));
        cure::write_text(dir / "panels.csv", cure::panels_csv(dbg.panels, dbg.panel_index));
        cure::write_text(dir / "layout.csv", cure::layout_csv(dbg.layout));
    }
    std::cout << "setups: " << spec.setups << " (infeasible " << result.infeasible << ")\n"
              << "mean SE: " << cure::format_number(result.mean_se) << " bit/s/Hz\n"
              << "mean harvested: " << cure::format_number(result.mean_energy) << " sample-W\n"
              << "outputs: " << dir.string() << '\n';
    return kOk;
}

int cmd_sweep(const Options& o) {
    const cure::ScenarioSpec spec = load(o);
    const cure::SweepAxis axis = cure::parse_axis(o.axis);
    const auto values = split_values(o.values);
    if (values.empty()) throw cure::ValidationError("--values must list at least one value");
    const fs::path dir = output_dir(o.out);
    const auto start = std::chrono::steady_clock::now();
    const auto rows = cure::sweep(spec, axis, values, o.workers);
    cure::RunMeta meta;
    meta.spec = spec;
    meta.workers = o.workers;
    meta.command = "sweep " + o.axis + " " + o.values;
    meta.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    cure::emit_sweep(rows, meta, dir);
    std::cout << cure::sweep_csv(rows);
    return kOk;
}

int cmd_layout(const Options& o) {
    const cure::ScenarioSpec spec = load(o);
    if (o.setup < 0) throw cure::ValidationError("--setup must be >= 0");
    auto rng = cure::make_stream(spec.seed + o.setup, cure::Stream::Users);
    const std::string csv = cure::layout_csv(cure::make_layout(spec, rng));
    if (o.layout_out.empty())
        std::cout << csv;
    else
        cure::write_text(o.layout_out, csv);
    return kOk;
}

int cmd_validate(const Options& o) {
    const cure::ScenarioSpec spec = load(o);
    std::cout << "ok: U=" << spec.ap_count << " J=" << spec.user_count << " R=" << spec.ris_count
              << " delta_u=" << spec.system.delta_u << " rho_d=" << cure::format_number(spec.system.rho_d)
              << " W\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cell-free UAV/RIS wireless power transfer simulator"};
    app.require_subcommand(1, 1);
    Options o;

    auto* run = app.add_subcommand("run", "Run a Monte Carlo campaign");
    run->add_option("--scenario", o.scenario, "Scenario file")->required();
    run->add_option("--out", o.out, "Output directory (default $CURE_OUT or ./cure_out)");
    run->add_option("--seed", o.seed, "Override base seed");
    run->add_option("--setups", o.setups, "Override number of setups");
    run->add_option("--ris", o.ris, "Enable RIS panels")->check(CLI::IsMember({"on", "off"}));
    run->add_option("--workers", o.workers, "Worker threads (0 = auto)")->check(CLI::NonNegativeNumber);
    run->add_flag("--debug", o.debug, "Also dump channels, solver trace, panels and layout of setup 0");

    auto* sw = app.add_subcommand("sweep", "Sweep one parameter");
    sw->add_option("--scenario", o.scenario, "Scenario file")->required();
    sw->add_option("--axis", o.axis, "ris_elements|ap_antennas|ris_count|ap_count|strategy")->required();
    sw->add_option("--values", o.values, "Comma-separated values")->required();
    sw->add_option("--out", o.out, "Output directory (default $CURE_OUT or ./cure_out)");
    sw->add_option("--seed", o.seed, "Override base seed");
    sw->add_option("--setups", o.setups, "Override number of setups");
    sw->add_option("--workers", o.workers, "Worker threads (0 = auto)")->check(CLI::NonNegativeNumber);

    auto* lay = app.add_subcommand("layout", "Print the network layout CSV");
    lay->add_option("--scenario", o.scenario, "Scenario file")->required();
    lay->add_option("--setup", o.setup, "Setup index for the user drop");
    lay->add_option("--out", o.layout_out, "Write to this file instead of stdout");

    auto* val = app.add_subcommand("validate", "Check a scenario file");
    val->add_option("--scenario", o.scenario, "Scenario file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    try {
        if (*run) return cmd_run(o);
        if (*sw) return cmd_sweep(o);
        if (*lay) return cmd_layout(o);
        return cmd_validate(o);
    } catch (const cure::ParseError& e) {
        std::cerr << "invalid scenario: " << e.what() << '\n';
        return kValidation;
    } catch (const cure::ValidationError& e) {
        std::cerr << "invalid scenario: " << e.what() << '\n';
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    }
}
