#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace vaxcast {

/// Input violates a mathematical or structural precondition.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed text input. `line()` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line = 0, std::string source = {})
        : std::runtime_error(format(message, line, source)), line_(line), source_(std::move(source)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& source() const noexcept { return source_; }

private:
    static std::string format(const std::string& message, std::size_t line, const std::string& source) {
        std::string out;
        if (!source.empty()) {
            out += source;
            out += ':';
        }
        if (line > 0) {
            out += std::to_string(line);
            out += ": ";
        } else if (!source.empty()) {
            out += ' ';
        }
        out += message;
        return out;
    }

    std::size_t line_;
    std::string source_;
};

/// Design matrix without full column rank; names the columns that depend on earlier ones.
class RankError : public DomainError {
public:
    RankError(const std::string& message, std::vector<std::string> dependent)
        : DomainError(message), dependent_(std::move(dependent)) {}

    const std::vector<std::string>& dependent_columns() const noexcept { return dependent_; }

private:
    std::vector<std::string> dependent_;
};

/// An iterative estimator stopped without meeting its tolerance.
/// Carries the final iterate and objective so callers can inspect how far it got.
class EstimationError : public std::runtime_error {
public:
    EstimationError(const std::string& message, std::vector<double> last_iterate = {},
                    double last_objective = 0.0)
        : std::runtime_error(message), last_iterate_(std::move(last_iterate)),
          last_objective_(last_objective) {}

    const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
    double last_objective() const noexcept { return last_objective_; }

private:
    std::vector<double> last_iterate_;
    double last_objective_;
};

}  // namespace vaxcast
