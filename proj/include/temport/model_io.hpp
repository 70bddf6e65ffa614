#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "temport/features.hpp"

namespace temport {

/// Shared model file format:
///   line 1: "temport-model v1 <component>"
///   line 2: JSON metadata
///   then one "feature-id<TAB>weight" line per feature, sorted by id, with
///   weights printed as the shortest round-trippable decimal.
void save_model_file(const std::filesystem::path& path, const std::string& component,
                     const nlohmann::json& metadata, const SparseVector& weights);

struct LoadedModel {
  std::string component;
  nlohmann::json metadata;
  SparseVector weights;
};

LoadedModel load_model_file(const std::filesystem::path& path);

/// Shortest decimal string that parses back to exactly this double.
std::string format_weight(double w);

}  // namespace temport
