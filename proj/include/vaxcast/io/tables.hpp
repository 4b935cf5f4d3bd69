#pragma once

#include <filesystem>
#include <string>

#include "vaxcast/regress/feature_matrix.hpp"

namespace vaxcast::io {

/// `date,<col1>,...` with one row per matrix row.
std::string feature_csv(const regress::FeatureMatrix& x);

/// Reads a file written by feature_csv. Dates must be consecutive.
regress::FeatureMatrix read_feature_csv(const std::filesystem::path& path);

/// Writes `text` verbatim, creating parent directories. DomainError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace vaxcast::io
