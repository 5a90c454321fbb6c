#pragma once

#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "affsob/fields.hpp"

namespace affsob::detail {

using Json = nlohmann::json;

// Parses text, mapping syntax errors to ConfigError mentioning `what`.
Json parse_json(const std::string& text, const std::string& what);
Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& what);
Eigen::VectorXd vector_from_json(const Json& j, const std::string& what);
// gaussian_mix field; expected_dim 0 accepts any dimension.
AnalyticField analytic_from_json(const Json& j, int expected_dim);
std::string read_text_file(const std::string& path);

}  // namespace affsob::detail
