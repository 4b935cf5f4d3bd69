#include <CLI11.hpp>

#include <iostream>

#include "cli/commands.hpp"

namespace {

using namespace vaxcast::cli;

int report_error(const std::exception& e) {
    std::cerr << "vaxcast: error: " << e.what() << "\n";
    return kInputError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vaccine uptake forecasting from clinical and web-search data"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::vector<std::string> sets;
    app.add_option("--config", config_path, "pipeline config JSON");
    auto* seed_opt = app.add_option("--seed", seed, "random seed (overrides the config)");
    auto* out_opt = app.add_option("--out", out_dir, "output directory (overrides the config)");
    app.add_option("--set", sets, "config override key=value (dotted keys, repeatable)");
    bool free_intercept = false;
    app.add_flag("--no-intercept-penalty", free_intercept, "leave the SVR stack intercept unpenalised");

    auto* prep = app.add_subcommand("prep", "parse inputs and write ratio.csv and features.csv");
    auto* fit = app.add_subcommand("fit", "fit clinical and web models");
    std::string which = "all";
    fit->add_option("--which", which, "clinical, web or all")
        ->check(CLI::IsMember({"clinical", "web", "all"}));
    auto* evaluate = app.add_subcommand("evaluate", "score base and stacked models on the holdout");
    auto* forecast = app.add_subcommand("forecast", "point forecasts from the chosen stack");
    ForecastOptions fopts;
    std::optional<int> horizon;
    std::string stack_label;
    forecast->add_option("--horizon", horizon, "days to forecast (config default)");
    forecast->add_flag("--clinical-only", fopts.clinical_only, "use the clinical model alone");
    forecast->add_option("--stack", stack_label, "stacked model label (default: best)");
    auto* keywords = app.add_subcommand("keywords", "token frequency table of a text corpus");
    std::vector<std::string> inputs;
    std::size_t min_frequency = 2;
    keywords->add_option("inputs", inputs, "text files, one document per line")->required();
    keywords->add_option("--min-frequency", min_frequency, "drop tokens seen fewer times");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        if (keywords->parsed()) {
            std::vector<std::filesystem::path> paths(inputs.begin(), inputs.end());
            return cmd_keywords(paths, out_dir.empty() ? "out" : out_dir, min_frequency, std::cout);
        }
        if (config_path.empty()) {
            std::cerr << "vaxcast: error: --config is required\n";
            return kInputError;
        }
        Overrides overrides;
        if (*seed_opt) overrides.seed = seed;
        if (*out_opt) overrides.out = out_dir;
        overrides.set = sets;
        if (free_intercept) overrides.set.push_back("svr.penalize_intercept=false");
        const PipelineConfig config = load_config(config_path, overrides);

        if (prep->parsed()) return cmd_prep(config, std::cout);
        if (fit->parsed()) {
            const FitPart part = which == "clinical" ? FitPart::clinical : which == "web" ? FitPart::web : FitPart::all;
            return cmd_fit(config, part, std::cout);
        }
        if (evaluate->parsed()) return cmd_evaluate(config, std::cout);
        if (forecast->parsed()) {
            fopts.horizon = horizon.value_or(config.horizon);
            if (!stack_label.empty()) fopts.stack = stack_label;
            return cmd_forecast(config, fopts, std::cout);
        }
    } catch (const std::exception& e) {
        return report_error(e);
    }
    return kInputError;
}
