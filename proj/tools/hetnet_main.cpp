#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hetnet/experiment.hpp"

namespace {

hetnet::cli::SweepAxis parse_sweep(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t colon = text.find(':', start);
        if (colon == std::string::npos) {
            parts.push_back(text.substr(start));
            break;
        }
        parts.push_back(text.substr(start, colon - start));
        start = colon + 1;
    }
    if (parts.size() != 4)
        throw std::domain_error("--sweep expects NAME:MIN:MAX:STEPS, got '" + text + "'");
    hetnet::cli::SweepAxis axis;
    axis.name = parts[0];
    try {
        axis.min = std::stod(parts[1]);
        axis.max = std::stod(parts[2]);
        axis.steps = std::stoi(parts[3]);
    } catch (const std::exception&) {
        throw std::domain_error("--sweep has malformed numbers in '" + text + "'");
    }
    return axis;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Energy-efficiency toolkit for K-tier cooperative cellular networks"};
    app.get_formatter()->column_width(28);

    hetnet::cli::ExperimentSpec spec;
    std::vector<std::string> sweep_args;
    std::uint64_t seed = 0;
    unsigned threads = 0;

    std::string commands_help;
    for (const auto& name : hetnet::cli::known_commands())
        commands_help += (commands_help.empty() ? "" : ", ") + name;

    app.add_option("command", spec.command, "One of: " + commands_help)
        ->required()
        ->check(CLI::IsMember(hetnet::cli::known_commands()));
    app.add_option("--config", spec.config_path,
                   "JSON config file (omitted: built-in two-tier defaults)")
        ->check(CLI::ExistingFile);
    app.add_option("--out", spec.output_path, "Output file (omitted: stdout)");
    app.add_option("--format", spec.format, "Table format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--sweep", sweep_args,
                   "Sweep axis NAME:MIN:MAX:STEPS (repeatable; later axes vary "
                   "fastest)")
        ->take_all();
    auto* seed_opt = app.add_option("--seed", seed, "Monte Carlo seed override");
    auto* threads_opt =
        app.add_option("--threads", threads, "Monte Carlo worker thread count");
    app.add_option("--tol", spec.tolerance, "Relative tolerance for exact solvers")
        ->capture_default_str();
    app.add_flag("--exact", spec.exact,
                 "Rescale optimizer output until the exact rate meets tau0");

    try {
        app.parse(argc, argv);
        for (const auto& text : sweep_args) spec.sweeps.push_back(parse_sweep(text));
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : hetnet::cli::exit_validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return hetnet::cli::exit_validation;
    }
    if (*seed_opt) spec.seed = seed;
    if (*threads_opt) spec.threads = threads;

    return hetnet::cli::run_experiment(spec);
}
