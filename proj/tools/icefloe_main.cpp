// icefloe command-line driver.
//
//   icefloe run <config> [--out DIR] [--set key=value ...]
//   icefloe converge --scheme {cd|weno|weno_linear} [--out DIR] [--set key=value ...]
//
// Exit status: 0 completed, 2 blow-up, 3 Newton non-convergence, 1 usage or
// configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "icefloe/cli_io.hpp"

namespace {

using namespace icefloe;

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void print_report(const cli::RunReport& rep) {
    std::printf("status: %s\n", to_string(rep.status));
    if (!rep.message.empty()) std::printf("message: %s\n", rep.message.c_str());
    if (rep.result.steps > 0 || rep.status != RunStatus::Completed) {
        std::printf("end time: %.6g s\n", rep.result.end_time);
        std::printf("A range: [%.6g, %.6g]  h range: [%.6g, %.6g]\n", rep.result.extrema.min_a,
                    rep.result.extrema.max_a, rep.result.extrema.min_h, rep.result.extrema.max_h);
    }
    std::printf("summary: %s\n", rep.summary_path.string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D viscous-plastic sea ice solver"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::vector<std::string> sets;
    auto* run_cmd = app.add_subcommand("run", "run a configuration file");
    run_cmd->add_option("config", config_path, "key=value configuration file")->required();
    run_cmd->add_option("--out", out_dir, "output directory");
    run_cmd->add_option("--set", sets, "override, key=value")->allow_extra_args(false);

    std::string scheme = "cd";
    auto* conv_cmd = app.add_subcommand("converge", "manufactured-solution convergence study");
    conv_cmd->add_option("--scheme", scheme, "spatial scheme")
        ->check(CLI::IsMember({"cd", "weno", "weno_linear"}));
    conv_cmd->add_option("--out", out_dir, "output directory");
    conv_cmd->add_option("--set", sets, "override, key=value")->allow_extra_args(false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        cli::RunSpec spec;
        if (*run_cmd) {
            if (!out_dir.empty()) sets.push_back("out=" + out_dir);
            spec = cli::load_config(read_file(config_path), sets);
        } else {
            sets.insert(sets.begin(), "scheme=" + scheme);
            if (!out_dir.empty()) sets.push_back("out=" + out_dir);
            spec = cli::load_config("scenario=mms\n", sets);
        }
        const cli::RunReport rep = cli::run(spec);
        if (*conv_cmd) {
            std::ifstream csv(spec.out_dir / "convergence.csv");
            if (csv) std::cout << csv.rdbuf();
        }
        print_report(rep);
        return rep.exit_code;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "icefloe: configuration error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "icefloe: %s\n", e.what());
        return 1;
    }
}
