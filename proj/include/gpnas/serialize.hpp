#pragma once

// Versioned JSON envelope for fitted ensembles:
//
//   { "format": "gpnas-ensemble-model", "version": "1.0", "config": {...},
//     "cardinalities": [...], "learners": [...], "final": {"encoder": {...}, "gp": {...}} }
//
// Files whose major version is newer than kModelMajorVersion are rejected.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "gpnas/encoding.hpp"
#include "gpnas/ensemble.hpp"
#include "gpnas/gp.hpp"
#include "gpnas/kernels.hpp"

namespace gpnas {

inline constexpr int kModelMajorVersion = 1;
inline constexpr int kModelMinorVersion = 0;
inline constexpr const char* kModelFormat = "gpnas-ensemble-model";

nlohmann::json to_json(const KernelSpec<double>& kernel);
KernelSpec<double> kernel_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EncoderSpec& spec);
EncoderSpec encoder_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GpModel<double>& gp);
GpModel<double> gp_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EnsembleModel& model);
EnsembleModel model_from_json(const nlohmann::json& j);

/// Serialized text; identical models give identical bytes.
std::string serialize_model(const EnsembleModel& model);
EnsembleModel deserialize_model(const std::string& text);

void save_model(const EnsembleModel& model, const std::filesystem::path& path);
EnsembleModel load_model(const std::filesystem::path& path);

}  // namespace gpnas
