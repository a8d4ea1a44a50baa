#pragma once

#include <nlohmann/json.hpp>

#include "qflake/classifiers.hpp"
#include "qflake/linalg.hpp"
#include "qflake/pipeline.hpp"

namespace qflake {

using Json = nlohmann::json;

Json params_to_json(const ParamMap& params);
ParamMap params_from_json(const Json& j);

Json pipeline_to_json(const PipelineConfig& config);

Json pca_to_json(const PcaModel& pca);
PcaModel pca_from_json(const Json& j);

/// Family, hyperparameters and learned parameters.
Json model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const Json& j);

}  // namespace qflake
