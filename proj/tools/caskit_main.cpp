// caskit: batch driver for dispersion-force experiments.
//   caskit run --config exp.json --output out.csv --format csv

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "caskit/cli.hpp"

namespace {

int worker_count(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("CASKIT_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dispersion-force toolkit: Casimir/van der Waals batch runner"};
    app.require_subcommand(1);

    std::string config_path, output_path, format;
    int threads = 0;
    bool verbose = false;

    CLI::App* run_cmd = app.add_subcommand("run", "execute an experiment config");
    run_cmd->add_option("--config", config_path, "experiment JSON config")->required();
    run_cmd->add_option("--output", output_path, "output file (default: config's, else stdout)");
    run_cmd->add_option("--format", format, "csv or json (default: config's)");
    run_cmd->add_option("--threads", threads, "worker count (env CASKIT_THREADS fallback)");
    run_cmd->add_flag("--verbose", verbose, "progress to stderr");

    CLI11_PARSE(app, argc, argv);

    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "caskit: cannot open config: " << config_path << "\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    try {
        const caskit::cli::ExperimentConfig config = caskit::cli::parse_config(buf.str());
        const std::string fmt = !format.empty() ? format : config.format;
        const std::string out_path = !output_path.empty() ? output_path : config.output_path;
        if (verbose)
            std::cerr << "caskit: mode=" << static_cast<int>(config.mode)
                      << " hash=" << config.config_hash << " threads=" << worker_count(threads)
                      << "\n";
        const auto outcome = caskit::cli::run(config, worker_count(threads));
        const std::string bytes = caskit::cli::emit(outcome.table, fmt);
        if (out_path.empty()) {
            std::cout << bytes;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) {
                std::cerr << "caskit: cannot write: " << out_path << "\n";
                return 2;
            }
            out << bytes;
        }
        if (verbose) std::cerr << "caskit: exit " << outcome.exit_code << "\n";
        return outcome.exit_code;
    } catch (const caskit::cli::ConfigError& e) {
        std::cerr << "caskit: config error: " << e.what() << "\n";
        return 2;
    } catch (const caskit::quad::NonConvergenceError& e) {
        std::cerr << "caskit: nonconvergence: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "caskit: error: " << e.what() << "\n";
        return 2;
    }
}
