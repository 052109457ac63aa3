#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "opinet/errors.hpp"
#include "opinet/topology.hpp"
#include "config.hpp"
#include "presets.hpp"
#include "runner.hpp"

namespace {

constexpr int kExitConfigParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitIo = 4;

namespace fs = std::filesystem;
using namespace opinet;
using namespace opinet::cli;

fs::path default_out_dir() {
    if (const char* env = std::getenv("OPINET_OUT_DIR")) return env;
    return "out";
}

/// "<kind>:<n>[,k=K][,p=P][,seed=S]", e.g. "smallworld:100,k=1,p=0.2,seed=7"
TopologySpec parse_topo_spec(const std::string& text) {
    TopologySpec spec;
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ConfigParseError("topology spec must look like kind:N[,key=value...]");
    spec.kind = TopologySpec::parse_kind(text.substr(0, colon));
    std::stringstream rest(text.substr(colon + 1));
    std::string field;
    bool first = true;
    while (std::getline(rest, field, ',')) {
        if (first) {
            spec.n = std::stoi(field);
            first = false;
            continue;
        }
        const auto eq = field.find('=');
        if (eq == std::string::npos)
            throw ConfigParseError("bad topology field '" + field + "'");
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "k") spec.k = std::stoi(value);
        else if (key == "p") spec.p = std::stod(value);
        else if (key == "seed") spec.seed = std::stoull(value);
        else throw ConfigParseError("unknown topology field '" + key + "'");
    }
    if (first) throw ConfigParseError("topology spec missing node count");
    return spec;
}

int guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const ConfigParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigParse;
    } catch (const UnknownPreset& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigParse;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interacting Markov agents on networks: solvers, "
                 "simulation, and experiment presets"};
    app.require_subcommand(1);

    std::string config_path;
    std::string preset_name;
    std::string topo_spec;
    std::string out_dir;
    std::uint64_t seed = 1;
    bool seed_given = false;

    auto* run_cmd = app.add_subcommand("run", "Run an experiment config");
    run_cmd->add_option("config", config_path, "Path to the config file")
        ->required();
    run_cmd->add_option("--out", out_dir, "Output directory override");

    auto* preset_cmd =
        app.add_subcommand("preset", "Generate and run a named preset");
    preset_cmd->add_option("name", preset_name, "Preset name")->required();
    preset_cmd->add_option("--out", out_dir, "Output directory");
    preset_cmd->add_option("--seed", seed, "Master seed override")
        ->each([&](const std::string&) { seed_given = true; });

    auto* topo_cmd =
        app.add_subcommand("topo", "Generate a topology edge list");
    topo_cmd->add_option("spec", topo_spec, "kind:N[,k=K,p=P,seed=S]")
        ->required();
    std::string topo_out;
    topo_cmd->add_option("--out", topo_out, "Edge-list output file")->required();

    auto* validate_cmd =
        app.add_subcommand("validate", "Parse and validate a config");
    validate_cmd->add_option("config", config_path, "Path to the config file")
        ->required();

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) {
        return guarded([&] {
            ExperimentConfig cfg = load_config(config_path);
            fs::path dir = !out_dir.empty() ? fs::path(out_dir)
                           : !cfg.output.directory.empty()
                               ? fs::path(cfg.output.directory)
                               : default_out_dir();
            auto result = run_experiment(cfg, dir);
            std::cout << "wrote " << result.artifacts.size() + 2
                      << " files to " << result.directory.string() << "\n";
        });
    }
    if (preset_cmd->parsed()) {
        return guarded([&] {
            fs::path root = !out_dir.empty() ? fs::path(out_dir)
                                             : default_out_dir() / preset_name;
            (void)seed_given;
            auto runs = expand_preset(preset_name, seed);
            for (const auto& run : runs) {
                fs::path dir = run.subdir.empty() ? root : root / run.subdir;
                std::error_code ec;
                fs::create_directories(dir, ec);
                if (ec) throw IoError("cannot create " + dir.string());
                // materialize the generated config next to its results
                std::ofstream cfg_out(dir / "config.ini", std::ios::binary);
                if (!cfg_out) throw IoError("cannot write generated config");
                cfg_out << to_ini(run.config);
                cfg_out.close();
                run_experiment(run.config, dir);
                std::cout << "ran " << preset_name
                          << (run.subdir.empty() ? "" : "/" + run.subdir) << "\n";
            }
        });
    }
    if (topo_cmd->parsed()) {
        return guarded([&] {
            Graph g = generate_topology(parse_topo_spec(topo_spec));
            std::ofstream os(topo_out, std::ios::binary);
            if (!os) throw IoError("cannot write " + topo_out);
            os << g.to_edge_list();
            std::cout << "wrote " << g.edge_count() << " edges to " << topo_out
                      << "\n";
        });
    }
    // validate
    return guarded([&] {
        load_config(config_path);
        std::cout << "ok\n";
    });
}
