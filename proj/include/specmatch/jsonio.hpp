#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace specmatch {

/// Formats a double with 12 significant digits. All numeric output written by
/// the tools goes through this so that repeated runs are byte-identical.
std::string format_sig(double v);

/// Rounds to the double nearest the 12-significant-digit decimal form.
double round_sig(double v);

nlohmann::json to_json(const Eigen::VectorXd& v);
nlohmann::json to_json_row_major(const Eigen::MatrixXd& m);
nlohmann::json to_json(const std::vector<double>& v);

} // namespace specmatch
