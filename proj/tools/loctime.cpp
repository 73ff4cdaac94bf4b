#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "loctime/commands.hpp"
#include "loctime/config.hpp"
#include "loctime/error.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Reflected diffusions with local-time dependent noise: simulation and verification"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_dir = "out";
    for (const char* name : {"path", "converge", "determinacy", "checks"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "Output directory");
    }
    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        std::ifstream in(config_path);
        std::stringstream text;
        text << in.rdbuf();
        auto cfg = loctime::parse_config(text.str());
        if (loctime::to_string(cfg.command) != command) {
            std::cerr << "error: command: config says '" << loctime::to_string(cfg.command) << "' but '" << command
                      << "' was requested\n";
            return 2;
        }
        const auto result = loctime::run_command(cfg, out_dir, std::cout);
        for (const auto& f : result.files) std::cout << "wrote " << f.string() << "\n";
        return result.exit_code;
    } catch (const loctime::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
