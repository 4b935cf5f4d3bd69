#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace vaxcast::cli {

enum ExitCode : int { kSuccess = 0, kPartial = 1, kInputError = 2 };

enum class FitPart { clinical, web, all };

/// Each command writes into config.out and reports progress on `log`.
/// Input problems surface as exceptions; recorded model failures as kPartial.
int cmd_prep(const PipelineConfig& config, std::ostream& log);
int cmd_fit(const PipelineConfig& config, FitPart part, std::ostream& log);
int cmd_evaluate(const PipelineConfig& config, std::ostream& log);

struct ForecastOptions {
    int horizon = 7;
    bool clinical_only = false;
    std::optional<std::string> stack;  ///< stacked row label; default is the best one
};
int cmd_forecast(const PipelineConfig& config, const ForecastOptions& options, std::ostream& log);

/// One document per non-empty input line; writes keywords.csv under `out`.
int cmd_keywords(const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& out,
                 std::size_t min_frequency, std::ostream& log);

}  // namespace vaxcast::cli
