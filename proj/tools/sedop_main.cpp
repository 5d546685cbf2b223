#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sedop/errors.hpp"
#include "sedop/report.hpp"
#include "sedop/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Galerkin laboratory for Dirichlet operators and their Fock-space extensions"};
    app.set_version_flag("--version", sedop::kVersion);
    app.require_subcommand(1);

    std::string configPath, reportPath, outDir;
    std::uint64_t seed = 0;
    std::vector<std::string> tolOverrides;

    CLI::App* runCmd = app.add_subcommand("run", "execute the tasks in a config");
    runCmd->add_option("config", configPath, "JSON config file")->required();
    CLI::Option* seedOpt = runCmd->add_option("--seed", seed, "override the config seed");
    runCmd->add_option("--out", outDir, "override the output directory");
    runCmd->add_option("--tol-override", tolOverrides, "tolerance override as name=value");

    CLI::App* explainCmd = app.add_subcommand("explain", "summarize a stored report");
    explainCmd->add_option("report", reportPath, "JSON report file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (runCmd->parsed()) {
            sedop::ExperimentConfig cfg = sedop::load_config(configPath);
            if (seedOpt->count() > 0) cfg.seed = seed;
            if (!outDir.empty()) cfg.outDir = outDir;
            for (const std::string& ov : tolOverrides) {
                const std::size_t eq = ov.find('=');
                if (eq == std::string::npos || eq == 0)
                    throw sedop::ConfigError("tol-override: expected name=value, got '" + ov + "'");
                const std::string name = ov.substr(0, eq);
                if (cfg.tolerances.find(name) == cfg.tolerances.end())
                    throw sedop::ConfigError("tol-override: unknown tolerance '" + name + "'");
                double value = 0.0;
                try {
                    std::size_t used = 0;
                    value = std::stod(ov.substr(eq + 1), &used);
                    if (used != ov.size() - eq - 1) throw std::invalid_argument("trailing text");
                } catch (const std::exception&) {
                    throw sedop::ConfigError("tol-override: bad value in '" + ov + "'");
                }
                if (!(value > 0.0))
                    throw sedop::ConfigError("tol-override: tolerance must be positive");
                cfg.tolerances[name] = value;
            }
            sedop::RunResult r = sedop::run_experiment(cfg);
            for (const std::string& f : r.writtenFiles) std::printf("wrote %s\n", f.c_str());
            return r.exitCode;
        }

        std::ifstream in(reportPath);
        if (!in) {
            std::fprintf(stderr, "error: cannot open '%s'\n", reportPath.c_str());
            return 1;
        }
        nlohmann::ordered_json rep;
        try {
            rep = nlohmann::ordered_json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            std::fprintf(stderr, "error: report is not valid JSON: %s\n", e.what());
            return 1;
        }
        std::fputs(sedop::explain_report(rep).c_str(), stdout);
        return 0;
    } catch (const sedop::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
