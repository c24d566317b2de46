#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "narlab/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void print_errors(const std::vector<narlab::ConfigError>& errors) {
    for (const auto& e : errors)
        std::cerr << "config error at '" << (e.path.empty() ? "/" : e.path) << "': " << e.message
                  << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"narlab - numerical laboratory for harmonic analysis on harmonic NA spaces"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    bool trace = false;

    CLI::App* run = app.add_subcommand("run", "run an experiment config and write report files");
    run->add_option("config", config_path, "experiment config JSON")->required();
    run->add_option("--out", out_dir, "output directory (default: current directory)");
    run->add_flag("--trace", trace, "also write a CSV ray trace when the experiment has one");

    std::string validate_path;
    CLI::App* validate = app.add_subcommand("validate", "validate a config without running it");
    validate->add_option("config", validate_path, "experiment config JSON")->required();

    CLI::App* presets = app.add_subcommand("presets", "list group presets and measure densities");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            narlab::ParseResult parsed = narlab::parse_config(read_file(config_path));
            if (!parsed.config) {
                print_errors(parsed.errors);
                return 1;
            }
            return narlab::run_experiment(*parsed.config, out_dir, trace);
        }
        if (validate->parsed()) {
            narlab::ParseResult parsed = narlab::parse_config(read_file(validate_path));
            if (!parsed.config) {
                print_errors(parsed.errors);
                return 1;
            }
            std::cout << "config is valid\n";
            return 0;
        }
        if (presets->parsed()) {
            std::cout << "groups:\n"
                      << "  heisenberg:p   (dim v = 2p, k = 1)\n"
                      << "  quaternionic:p (dim v = 2p with 4 | 2p, k = 3)\n"
                      << "  abelian:d      (R^d, k = 0)\n"
                      << "  hyperbolic:l   (upper half-space H^l; boundary abelian:l-1)\n"
                      << "measures:\n";
            for (const auto& name : narlab::registered_density_names())
                std::cout << "  " << name << "\n";
            std::cout << "experiment kinds:\n"
                      << "  kernel-check limit hl-check fatou two-ray diffop-residual\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
