#include "specmatch/jsonio.hpp"

#include <cstdio>
#include <cstdlib>

namespace specmatch {

std::string format_sig(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

double round_sig(double v) {
    return std::strtod(format_sig(v).c_str(), nullptr);
}

nlohmann::json to_json(const Eigen::VectorXd& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(round_sig(v[i]));
    return arr;
}

nlohmann::json to_json_row_major(const Eigen::MatrixXd& m) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) arr.push_back(round_sig(m(r, c)));
    }
    return arr;
}

nlohmann::json to_json(const std::vector<double>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (double x : v) arr.push_back(round_sig(x));
    return arr;
}

} // namespace specmatch
