#pragma once

// Private JSON (de)serialisers shared by the checkpoint and manifest writers.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "hht/data.hpp"
#include "hht/eemd.hpp"
#include "hht/lstm.hpp"

namespace hht::detail {

using nlohmann::json;

json tensor_to_json(const Eigen::MatrixXd& m);
json tensor_to_json(const Eigen::VectorXd& v);
void tensor_from_json(const json& j, Eigen::MatrixXd& m, const char* name);
void tensor_from_json(const json& j, Eigen::VectorXd& v, const char* name);

json to_json(const LstmDims& d);
LstmDims dims_from_json(const json& j);
json to_json(const LstmParams& p);
LstmParams params_from_json(const json& j);
json to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const json& j);
json to_json(const ModelCheckpoint& c);
ModelCheckpoint model_from_json(const json& j, const std::optional<LstmDims>& expected);

json to_json(const SiftConfig& c);
SiftConfig sift_config_from_json(const json& j);
json to_json(const EemdConfig& c);
EemdConfig eemd_config_from_json(const json& j);
json to_json(const ScalerState& s);
ScalerState scaler_from_json(const json& j);
json to_json(const SplitSpec& s);
SplitSpec split_from_json(const json& j);

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

}  // namespace hht::detail
