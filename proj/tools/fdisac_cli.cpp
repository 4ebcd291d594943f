#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "fdisac/errors.hpp"
#include "fdisac/harness.hpp"

namespace {

// A scenario argument is either a JSON file path or the name of a builtin.
fdisac::Scenario resolve_scenario(const std::string& arg) {
    if (std::filesystem::exists(arg)) return fdisac::load_scenario_file(arg);
    const auto& builtins = fdisac::builtin_scenarios();
    if (auto it = builtins.find(arg); it != builtins.end())
        return fdisac::validate_scenario(it->second);
    throw fdisac::IoError("no such scenario file or builtin: " + arg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Full-duplex sensing/communication baseband simulator"};
    app.require_subcommand(1);

    std::string scenario_arg, out_csv, out_svg, mode_override;
    std::size_t trials_override = 0;
    bool has_seed_override = false;
    std::uint64_t seed_override = 0;
    bool sparkline = false;

    CLI::App* run = app.add_subcommand("run", "Evaluate a scenario and write results");
    run->add_option("scenario", scenario_arg, "Scenario JSON file or builtin name")->required();
    run->add_option("--trials", trials_override, "Override Monte-Carlo trial count");
    run->add_option("--seed", seed_override, "Override base seed")
        ->each([&](const std::string&) { has_seed_override = true; });
    run->add_option("--out", out_csv, "Write results CSV to this path");
    run->add_option("--mode", mode_override, "Override mode: analytic|mc|both")
        ->check(CLI::IsMember({"analytic", "mc", "both"}));
    run->add_option("--svg", out_svg, "Also render the curves to an SVG file");
    run->add_flag("--sparkline", sparkline, "Print a text sparkline per metric");

    CLI::App* list = app.add_subcommand("list-scenarios", "List builtin scenarios");

    std::string validate_arg;
    CLI::App* validate = app.add_subcommand("validate", "Validate a scenario document");
    validate->add_option("scenario", validate_arg, "Scenario JSON file or builtin name")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const auto& [name, text] : fdisac::builtin_scenarios()) {
                const auto sc = fdisac::validate_scenario(text);
                std::cout << name << "  (metrics:";
                for (const auto& m : sc.metrics) std::cout << ' ' << m;
                std::cout << ")\n";
            }
            return 0;
        }

        if (validate->parsed()) {
            const auto sc = resolve_scenario(validate_arg);
            std::cout << "OK: " << sc.name << '\n';
            return 0;
        }

        fdisac::Scenario sc = resolve_scenario(scenario_arg);
        if (trials_override > 0) sc.trials = trials_override;
        if (has_seed_override) sc.seed = seed_override;
        if (!mode_override.empty()) {
            sc.mode = mode_override == "analytic" ? fdisac::RunMode::Analytic
                      : mode_override == "mc"     ? fdisac::RunMode::MonteCarlo
                                                  : fdisac::RunMode::Both;
        }

        const auto rows = fdisac::run_scenario(sc);
        if (!out_csv.empty()) {
            fdisac::emit_csv_file(rows, out_csv);
            std::cout << rows.size() << " rows -> " << out_csv << '\n';
        } else {
            fdisac::emit_csv(rows, std::cout);
        }
        if (!out_svg.empty()) {
            fdisac::emit_svg(rows, out_svg);
            std::cout << "curves -> " << out_svg << '\n';
        }
        if (sparkline) {
            std::vector<std::string> metrics;
            for (const auto& r : rows)
                if (std::find(metrics.begin(), metrics.end(), r.metric) == metrics.end())
                    metrics.push_back(r.metric);
            for (const auto& m : metrics)
                std::cout << m << "  " << fdisac::emit_sparkline(rows, m) << '\n';
        }
        return 0;
    } catch (const fdisac::ConfigInvalid& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
