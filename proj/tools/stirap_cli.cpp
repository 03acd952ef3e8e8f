#include "CLI11.hpp"

#include "stirap/io/runner.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>

#ifndef STIRAP_SCENARIO_DIR
#define STIRAP_SCENARIO_DIR "scenarios"
#endif

namespace fs = std::filesystem;
using namespace stirap;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kIo = 4 };

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v && *v ? std::string(v) : fallback;
}

std::vector<fs::path> bundled(const fs::path& dir) {
    std::vector<fs::path> out;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) return out;
    for (const auto& e : fs::recursive_directory_iterator(dir, ec))
        if (e.is_regular_file() && e.path().extension() == ".ini") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

// A bare name such as "fig1c" picks the bundled file of that stem.
fs::path resolve(const std::string& arg, const fs::path& dir) {
    if (fs::exists(arg)) return arg;
    for (const auto& p : bundled(dir))
        if (p.stem() == arg || p.filename() == arg) return p;
    throw io::IoError("no scenario file or bundled scenario named '" + arg + "'");
}

void print_summary(const io::RunManifest& m, const fs::path& dir) {
    std::cout << m.scenario << " [" << m.protocol << "]";
    if (m.mode == "run" && m.result.has_dynamics)
        std::cout << "  efficiency " << m.result.transfer_efficiency << "  peak transient " << m.result.peak_transient;
    std::cout << "  (" << m.wall_time << " s)\n";
    if (m.mode == "sweep") {
        std::cout << io::to_csv(m.sweep_table);
    }
    for (const auto& w : m.warnings) std::cout << "warning: " << w << "\n";
    for (const auto& f : m.outputs) std::cout << "  " << (dir / f).string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-system STIRAP simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_dir = env_or("STIRAP_OUTPUT_DIR", "output");
    std::string scen_dir = env_or("STIRAP_SCENARIO_DIR", STIRAP_SCENARIO_DIR);
    std::string format;
    long seed = 0;
    app.add_option("--output-dir", out_dir, "output directory (default $STIRAP_OUTPUT_DIR or ./output)");
    app.add_option("--format", format, "csv or json, overrides the scenario")->check(CLI::IsMember({"csv", "json"}));
    auto* seed_opt = app.add_option("--seed", seed, "seed for randomized fixtures; recorded in the manifest");
    app.add_option("--scenario-dir", scen_dir, "directory of bundled scenarios");

    std::string file;
    auto* run = app.add_subcommand("run", "run one scenario");
    run->add_option("scenario", file, "scenario file or bundled name")->required();
    auto* sw = app.add_subcommand("sweep", "run the [sweep] block of a scenario");
    sw->add_option("scenario", file, "scenario file or bundled name")->required();
    auto* list = app.add_subcommand("list-scenarios", "list bundled scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    try {
        if (list->parsed()) {
            for (const auto& p : bundled(scen_dir)) {
                try {
                    const auto sc = io::parse_scenario(p.string(), &io::find_schema);
                    std::cout << sc.name << "\t" << sc.protocol << (sc.sweep ? "\tsweep" : "\trun") << "\t"
                              << p.string() << "\t" << sc.description << "\n";
                } catch (const std::exception& e) {
                    std::cout << p.stem().string() << "\tINVALID\t" << p.string() << "\t" << e.what() << "\n";
                }
            }
            return kOk;
        }
        io::RunOptions opt;
        opt.output_dir = out_dir;
        if (!format.empty()) opt.format = io::parse_format(format);
        if (seed_opt->count()) opt.seed = seed;
        const auto sc = io::parse_scenario(resolve(file, scen_dir).string(), &io::find_schema);
        const io::RunManifest m = run->parsed() ? io::run_scenario(sc, opt) : io::sweep(sc, opt);
        print_summary(m, opt.output_dir);
        return kOk;
    } catch (const io::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const ParameterError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const io::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIo;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    }
}
