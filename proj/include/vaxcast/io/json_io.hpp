#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>

#include "vaxcast/eval/evaluate.hpp"

namespace vaxcast::io {

using Json = nlohmann::ordered_json;

Json to_json(const arima::ArimaSpec& spec);
arima::ArimaSpec arima_spec_from_json(const Json& j);
Json to_json(const arima::ArimaFit& fit);
arima::ArimaFit arima_fit_from_json(const Json& j);
Json to_json(const arima::CandidateResult& c);
arima::CandidateResult candidate_from_json(const Json& j);

/// Linear: coefficient map in column order. Ensemble: nested split/leaf nodes.
Json to_json(const regress::LinearModel& m);
Json to_json(const regress::TreeEnsembleModel& m);
Json to_json(const regress::Model& m);
regress::Model model_from_json(const Json& j);

/// {"learner": "boost", "n_trees": ...}
Json to_json(const regress::LearnerParams& p);
regress::LearnerParams learner_params_from_json(const Json& j);
Json to_json(const regress::CvReport& cv);
regress::CvReport cv_report_from_json(const Json& j);

Json to_json(const stack::SvrParams& p);
stack::SvrParams svr_params_from_json(const Json& j);
Json to_json(const stack::StackWeights& w);
stack::StackWeights stack_weights_from_json(const Json& j);

Json to_json(const eval::FittedClinical& m);
eval::FittedClinical fitted_clinical_from_json(const Json& j);
Json to_json(const eval::FittedWeb& m);
eval::FittedWeb fitted_web_from_json(const Json& j);

Json to_json(const eval::EvalReport& r);

/// ParseError naming the file on malformed JSON; DomainError when unreadable.
Json read_json_file(const std::filesystem::path& path);
/// Two-space indented text with a trailing newline.
std::string dump(const Json& j);

}  // namespace vaxcast::io
