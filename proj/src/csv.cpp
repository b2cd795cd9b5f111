#include "specmatch/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "specmatch/jsonio.hpp"

namespace specmatch {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim surrounding whitespace
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    return out;
}

double parse_number(const std::string& s, const std::filesystem::path& path, int line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw FormatError(path.string() + ":" + std::to_string(line_no) +
                          ": cannot parse number '" + s + "'");
    }
}

} // namespace

int SpectralTable::find(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return static_cast<int>(i);
    }
    return -1;
}

Eigen::VectorXd SpectralTable::column(const std::string& name) const {
    const int i = find(name);
    if (i < 0) throw FormatError("no spectral column named '" + name + "'");
    return values.col(i);
}

Spectrum SpectralTable::spectrum(int col, SpectrumKind kind) const {
    return Spectrum(values.col(col).array(), kind);
}

SpectralTable read_spectral_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open spectral CSV: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw FormatError(path.string() + ": empty file");
    auto header = split_line(line);
    if (header.size() < 2 || header[0] != "wavelength_nm") {
        throw FormatError(path.string() + ": header must start with 'wavelength_nm'");
    }

    const std::size_t ncols = header.size() - 1;
    std::vector<double> wavelengths;
    std::vector<std::vector<double>> cols(ncols);
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto fields = split_line(line);
        if (fields.size() != header.size()) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": expected " + std::to_string(header.size()) +
                              " fields, got " + std::to_string(fields.size()));
        }
        wavelengths.push_back(parse_number(fields[0], path, line_no));
        for (std::size_t c = 0; c < ncols; ++c) {
            cols[c].push_back(parse_number(fields[c + 1], path, line_no));
        }
    }
    if (wavelengths.size() < 2) {
        throw FormatError(path.string() + ": needs at least two data rows");
    }

    SpectralTable table;
    table.names.assign(header.begin() + 1, header.end());
    table.values.resize(SpectralGrid::kBands, static_cast<Eigen::Index>(ncols));
    for (std::size_t c = 0; c < ncols; ++c) {
        std::vector<std::pair<double, double>> raw(wavelengths.size());
        for (std::size_t i = 0; i < wavelengths.size(); ++i) {
            raw[i] = {wavelengths[i], cols[c][i]};
        }
        table.values.col(static_cast<Eigen::Index>(c)) = resample(raw).values.matrix();
    }
    return table;
}

void write_spectral_csv(const std::filesystem::path& path,
                        const std::vector<std::string>& names,
                        const Eigen::MatrixXd& values, const SpectralGrid& grid) {
    grid.validate();
    if (values.rows() != grid.size() ||
        values.cols() != static_cast<Eigen::Index>(names.size())) {
        throw FormatError("write_spectral_csv: shape mismatch");
    }
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write spectral CSV: " + path.string());
    out << "wavelength_nm";
    for (const auto& n : names) out << ',' << n;
    out << '\n';
    for (int i = 0; i < grid.size(); ++i) {
        out << static_cast<int>(grid.wavelength(i));
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            out << ',' << format_sig(values(i, c));
        }
        out << '\n';
    }
}

} // namespace specmatch
