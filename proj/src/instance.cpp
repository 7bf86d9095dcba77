#include "varbound/instance.hpp"

#include <fstream>
#include <sstream>

#include "varbound/errors.hpp"

namespace varbound {

namespace {

std::vector<double> number_array(const nlohmann::json& doc, const char* key) {
  const auto& v = doc.at(key);
  if (!v.is_array()) throw InvalidInput(std::string("'") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw InvalidInput(std::string("'") + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

Instance parse_instance(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InvalidInput("instance must be a JSON object");
  if (!doc.contains("variances")) throw InvalidInput("instance needs a 'variances' array");
  auto variances = number_array(doc, "variances");
  const std::size_t n = variances.size();
  if (n == 0) throw InvalidInput("instance has no variables");

  std::vector<double> weights;
  if (doc.contains("weights")) {
    weights = number_array(doc, "weights");
    if (weights.size() != n) throw InvalidInput("'weights' and 'variances' lengths differ");
  } else {
    weights.assign(n, 1.0 / static_cast<double>(n));
  }

  CorrelationMatrix corr = CorrelationMatrix::identity(n);
  if (doc.contains("correlation")) {
    const auto& c = doc.at("correlation");
    if (!c.is_array() || c.size() != n) throw InvalidInput("'correlation' must be an n x n array");
    std::vector<std::vector<double>> rows;
    for (const auto& row : c) {
      if (!row.is_array() || row.size() != n) throw InvalidInput("'correlation' must be an n x n array");
      std::vector<double> r;
      for (const auto& x : row) {
        if (!x.is_number()) throw InvalidInput("'correlation' must hold numbers");
        r.push_back(x.get<double>());
      }
      rows.push_back(std::move(r));
    }
    corr = CorrelationMatrix::from_rows(rows, CorrelationMatrix::Psd::AllowHypothetical);
  }
  return Instance{WeightVector(std::move(weights)),
                  CovarianceModel(VarianceProfile(std::move(variances)), std::move(corr))};
}

Instance parse_instance_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("instance is not valid JSON: ") + e.what());
  }
  return parse_instance(doc);
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open instance file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance_text(ss.str());
}

nlohmann::json instance_to_json(const Instance& inst) {
  const std::size_t n = inst.model.size();
  nlohmann::json corr = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < n; ++j) row.push_back(inst.model.correlation()(i, j));
    corr.push_back(std::move(row));
  }
  return {{"weights", std::vector<double>(inst.weights.values().begin(), inst.weights.values().end())},
          {"variances",
           std::vector<double>(inst.model.profile().values().begin(), inst.model.profile().values().end())},
          {"correlation", std::move(corr)}};
}

}  // namespace varbound
