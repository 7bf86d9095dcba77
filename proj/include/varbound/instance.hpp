#pragma once

#include <filesystem>
#include <string_view>

#include "json.hpp"
#include "varbound/model.hpp"

namespace varbound {

/// Parsed instance document:
///   {"weights": [...], "variances": [...], "correlation": [[...], ...]}
/// weights default to 1/n each, correlation to the identity. Non-PSD
/// correlations are admitted as hypothetical.
struct Instance {
  WeightVector weights;
  CovarianceModel model;
};

Instance parse_instance(const nlohmann::json& doc);
Instance parse_instance_text(std::string_view text);
Instance load_instance(const std::filesystem::path& path);

nlohmann::json instance_to_json(const Instance& instance);

}  // namespace varbound
