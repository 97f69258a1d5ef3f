#include "stable_embed/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "stable_embed/errors.hpp"

namespace stable_embed::io {

std::string format_double(double x) {
    std::array<char, 48> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

std::string format_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    write_text_file(path, format_json(j));
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path);
    return buf.str();
}

namespace {

double parse_field(const std::string& field, const std::string& path, std::size_t line_no) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw IoError("bad numeric field '" + field + "' at " + path + ":" +
                      std::to_string(line_no));
    }
    return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

void write_vectors_csv(const std::string& path,
                       const std::vector<std::vector<std::complex<double>>>& rows) {
    std::ostringstream out;
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k > 0) out << ',';
            out << format_double(row[k].real()) << ',' << format_double(row[k].imag());
        }
        out << '\n';
    }
    write_text_file(path, out.str());
}

std::vector<std::vector<std::complex<double>>> read_vectors_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::vector<std::vector<std::complex<double>>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() % 2 != 0) {
            throw IoError("odd column count at " + path + ":" + std::to_string(line_no) +
                          " (expected interleaved re/im pairs)");
        }
        std::vector<std::complex<double>> row(fields.size() / 2);
        for (std::size_t k = 0; k < row.size(); ++k) {
            row[k] = {parse_field(fields[2 * k], path, line_no),
                      parse_field(fields[2 * k + 1], path, line_no)};
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_chords_csv(const std::string& path, const manifolds::ChordSet& chords) {
    std::ostringstream out;
    for (std::int64_t d = 0; d < 2 * chords.intrinsic_dim; ++d) {
        if (d > 0) out << ',';
        out << "theta" << (d + 1);
    }
    for (std::int64_t k = 0; k < chords.ambient_n; ++k) {
        out << ",re" << (k + 1) << ",im" << (k + 1);
    }
    out << '\n';
    for (std::int64_t i = 0; i < chords.count; ++i) {
        const auto pair = chords.pair(i);
        for (std::size_t d = 0; d < pair.size(); ++d) {
            if (d > 0) out << ',';
            out << format_double(pair[d]);
        }
        const auto chord = chords.chord(i);
        for (const auto& z : chord) {
            out << ',' << format_double(z.real()) << ',' << format_double(z.imag());
        }
        out << '\n';
    }
    write_text_file(path, out.str());
}

manifolds::ManifoldModel read_grid_model_csv(const std::string& path, const std::string& name) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);

    std::string header;
    if (!std::getline(in, header)) throw IoError("empty grid file: " + path);
    const auto cols = split_csv_line(header);
    std::size_t D = 0;
    while (D < cols.size() && cols[D] == "theta" + std::to_string(D + 1)) ++D;
    if (D == 0) {
        throw IoError("grid header must start with theta1[,theta2,...]: " + path);
    }
    if ((cols.size() - D) % 2 != 0 || cols.size() == D) {
        throw IoError("grid header needs interleaved re/im pairs after thetas: " + path);
    }
    const std::size_t ambient = (cols.size() - D) / 2;
    for (std::size_t k = 0; k < ambient; ++k) {
        const auto idx = std::to_string(k + 1);
        if (cols[D + 2 * k] != "re" + idx || cols[D + 2 * k + 1] != "im" + idx) {
            throw IoError("grid header column " + std::to_string(D + 2 * k + 1) +
                          " should be re" + idx + ",im" + idx + ": " + path);
        }
    }

    std::vector<double> thetas;
    std::vector<std::complex<double>> points;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != cols.size()) {
            throw IoError("row has " + std::to_string(fields.size()) + " fields, header has " +
                          std::to_string(cols.size()) + " at " + path + ":" +
                          std::to_string(line_no));
        }
        for (std::size_t d = 0; d < D; ++d) thetas.push_back(parse_field(fields[d], path, line_no));
        for (std::size_t k = 0; k < ambient; ++k) {
            points.emplace_back(parse_field(fields[D + 2 * k], path, line_no),
                                parse_field(fields[D + 2 * k + 1], path, line_no));
        }
    }
    if (points.empty()) throw IoError("grid file has a header but no rows: " + path);

    return manifolds::ManifoldModel::from_grid(name, static_cast<std::int64_t>(D),
                                               static_cast<std::int64_t>(ambient),
                                               std::move(thetas), std::move(points));
}

}  // namespace stable_embed::io
