// Experiment-runner CLI. Exit codes: 0 ok, 2 unknown experiment id,
// 3 invalid parameters, 4 infeasible configuration, 1 internal error.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "loqs/experiments.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    CLI::App app{"loqs - linear-optical quantum simulation experiments"};
    app.set_version_flag("--version", loqs::library_version());

    auto* list_cmd = app.add_subcommand("list", "list experiment ids and parameter schemas");

    auto* run_cmd = app.add_subcommand("run", "run one experiment");
    std::string id, params_path, out_dir = ".";
    std::uint64_t seed = 0;
    bool write_csv = false;
    run_cmd->add_option("id", id, "experiment id")->required();
    run_cmd->add_option("--params", params_path, "key = value parameter file");
    run_cmd->add_option("--seed", seed, "random seed (default 0)");
    run_cmd->add_option("--out", out_dir, "output directory (default .)");
    run_cmd->add_flag("--csv", write_csv, "also write the series as series.csv");

    app.require_subcommand(0, 1);
    CLI11_PARSE(app, argc, argv);

    if (list_cmd->parsed()) {
        for (const auto& info : loqs::list_experiments()) {
            std::cout << info.id << "\n  " << info.summary << "\n";
            for (const auto& p : info.params) {
                std::cout << "    " << p.name << " (" << p.type << ", default " << p.default_value;
                if (p.type != "string") std::cout << ", range [" << p.min << ", " << p.max << "]";
                if (!p.choices.empty()) {
                    std::cout << ", one of";
                    for (const auto& c : p.choices) std::cout << " " << c;
                }
                std::cout << "): " << p.doc << "\n";
            }
        }
        return 0;
    }

    if (!run_cmd->parsed()) {
        std::cout << app.help();
        return 0;
    }

    try {
        std::map<std::string, std::string> params;
        if (!params_path.empty()) {
            std::ifstream in(params_path);
            if (!in) {
                std::cerr << "cannot open parameter file: " << params_path << "\n";
                return 3;
            }
            std::stringstream ss;
            ss << in.rdbuf();
            params = loqs::parse_param_file(ss.str());
        }
        auto result = loqs::run_experiment(id, params, seed);

        fs::create_directories(out_dir);
        std::string doc = loqs::render_document(id, params, seed, result);
        {
            std::ofstream out(fs::path(out_dir) / "result.txt", std::ios::binary);
            out << doc;
        }
        if (write_csv && !result.series.empty()) {
            std::ofstream out(fs::path(out_dir) / "series.csv", std::ios::binary);
            out << loqs::render_series_csv(result);
        }
        std::cout << doc;
        return 0;
    } catch (const loqs::UnknownExperiment& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const loqs::InvalidParameter& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const loqs::InfeasibleConfiguration& e) {
        std::cerr << "infeasible configuration: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
