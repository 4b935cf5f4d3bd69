#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vaxcast/eval/evaluate.hpp"
#include "vaxcast/io/json_io.hpp"
#include "vaxcast/series/transform.hpp"

namespace vaxcast::cli {

struct PipelineConfig {
    std::filesystem::path clinical;
    std::vector<std::filesystem::path> trends;
    std::filesystem::path categories;
    std::string reference_query = "Joker";
    series::PopulationParams population;
    eval::SplitSpec split;
    int lag = 1;
    std::vector<eval::ClinicalEntry> clinical_models;
    /// One object per web learner; list-valued fields expand into a CV grid.
    std::vector<io::Json> web_models;
    arima::FitOptions arima;
    regress::CvOptions cv;
    stack::SvrParams svr;
    std::vector<Date> breakpoints;
    double steady_threshold = 0.1;
    int horizon = 7;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::filesystem::path out = "out";
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out;
    std::vector<std::string> set;  ///< "dotted.key=value"
};

/// Applies `key=value` to `j`; the value is read as JSON when it parses, else as a string.
void apply_override(io::Json& j, const std::string& assignment);

/// Parses the config file, applies the overrides and resolves input paths
/// against the config file's directory. DomainError/ParseError on any problem.
PipelineConfig load_config(const std::filesystem::path& path, const Overrides& overrides);

/// Fails with DomainError naming the first input file that does not exist.
void require_inputs(const PipelineConfig& config);

/// Learner settings for one web entry. "lambda": "auto" takes a log-spaced
/// grid (lambda_count, lambda_min_ratio) from the training design.
std::vector<regress::LearnerParams> expand_web_grid(const io::Json& entry, const PipelineConfig& config,
                                                    const regress::FeatureMatrix& x_train, const DatedSeries& y_train);

/// Lower-case learner name used for model file names, e.g. "randomforest".
std::string web_slug(const io::Json& entry);

}  // namespace vaxcast::cli
