#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "zk/error.hpp"
#include "zk/functionals.hpp"
#include "zk/version.hpp"
#include "zkio/config.hpp"
#include "zkio/dispatch.hpp"
#include "zkio/output.hpp"
#include "zkio/serialize.hpp"

int main(int argc, char** argv) {
    CLI::App app{"zk: decay experiments for the Zakharov-Kuznetsov equation on a strip"};
    app.require_subcommand(1);

    std::string output_dir;
    bool output_dir_set = false;

    auto* run = app.add_subcommand("run", "run the experiment described by a config file");
    std::string config_path;
    run->add_option("config", config_path, "INI config file")->required();
    run->add_option("--output-dir", output_dir, "output directory (default: [output] directory, else ./out)");

    auto* sm = app.add_subcommand("check-smallness", "evaluate the smallness condition");
    double L = 0, norm_u0 = 0, J0 = 0;
    std::string constants = "theorem";
    sm->add_option("--L", L, "strip width")->required();
    sm->add_option("--norm-u0", norm_u0, "||u0||")->required();
    sm->add_option("--J0", J0, "J0 functional")->required();
    sm->add_option("--constants", constants, "theorem or estimate4")
        ->check(CLI::IsMember({"theorem", "estimate4"}));
    sm->add_option("--output-dir", output_dir, "also write smallness.json here");

    auto* lem = app.add_subcommand("lemmas", "run the lemma verification suite");
    lem->add_option("--output-dir", output_dir, "output directory (default ./out)");

    app.add_subcommand("version", "print the version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : zkio::kExitConfig;
    }
    output_dir_set = !output_dir.empty();

    if (app.got_subcommand("version")) {
        std::cout << "zk " << zk::kVersion << "\n";
        return zkio::kExitOk;
    }

    if (sm->parsed()) {
        zk::SmallnessReport r;
        try {
            r = zk::smallness_check(L, norm_u0, J0, zk::constant_set_from_string(constants));
        } catch (const zk::Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return zkio::kExitConfig;
        }
        const auto j = zkio::envelope("smallness", zkio::to_json(r), "");
        std::cout << j.dump(2) << "\n";
        if (output_dir_set) {
            try {
                zkio::prepare_output_dir(output_dir);
                zkio::write_atomic(std::filesystem::path(output_dir) / "smallness.json", j.dump(2) + "\n");
            } catch (const zkio::OutputError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return zkio::kExitOutput;
            }
        }
        return zkio::kExitOk;
    }

    zkio::RunConfig cfg;
    try {
        if (lem->parsed()) {
            cfg = zkio::parse_config_text("[experiment]\nkind = lemmas\n");
            if (!output_dir_set) output_dir = "out";
            output_dir_set = true;
        } else {
            cfg = zkio::parse_config(config_path);
        }
    } catch (const zkio::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return zkio::kExitConfig;
    }
    return zkio::dispatch(cfg, output_dir_set ? std::optional<std::string>(output_dir) : std::nullopt,
                          std::cout, std::cerr);
}
