#include "kdtw/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace kdtw {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DatasetError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        fields.push_back(trim(line.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return fields;
}

template <typename T>
T parse_number(std::string_view field, const std::string& where) {
    T value{};
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc{} || ptr != end) throw DatasetError(where + ": cannot parse '" + std::string(field) + "'");
    return value;
}

// Splits text into lines, skipping blank ones; returns (1-based line number, content).
std::vector<std::pair<std::size_t, std::string_view>> nonblank_lines(std::string_view text) {
    std::vector<std::pair<std::size_t, std::string_view>> out;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto pos = text.find('\n', start);
        const auto line = trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        ++line_no;
        if (!line.empty()) out.emplace_back(line_no, line);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

Curve parse_curve_csv(std::string_view text, const std::string& origin) {
    std::vector<Point> vertices;
    for (const auto& [line_no, line] : nonblank_lines(text)) {
        std::vector<double> coords;
        const auto fields = split_commas(line);
        for (std::size_t f = 0; f < fields.size(); ++f) {
            coords.push_back(parse_number<double>(
                fields[f], origin + ":" + std::to_string(line_no) + ": field " + std::to_string(f + 1)));
        }
        try {
            vertices.emplace_back(std::move(coords));
        } catch (const std::invalid_argument& e) {
            throw DatasetError(origin + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (vertices.back().dim() != vertices.front().dim()) {
            throw DatasetError(origin + ":" + std::to_string(line_no) + ": inconsistent dimension");
        }
    }
    if (vertices.empty()) throw DatasetError(origin + ": curve has no vertices");
    return Curve(std::move(vertices));
}

LabeledDataset load_csv_dir(const fs::path& dir) {
    const auto labels_path = dir / "labels.csv";
    const std::string text = read_file(labels_path);
    std::vector<LabeledCurve> items;
    for (const auto& [line_no, line] : nonblank_lines(text)) {
        const std::string where = labels_path.string() + ":" + std::to_string(line_no);
        const auto fields = split_commas(line);
        if (fields.size() != 2) throw DatasetError(where + ": expected 'id,label'");
        if (line_no == 1 && fields[0] == "id") continue;  // header
        const std::string id(fields[0]);
        const int label = parse_number<int>(fields[1], where + ": field 2");
        const auto curve_path = dir / (id + ".csv");
        items.push_back({id, label, parse_curve_csv(read_file(curve_path), curve_path.string())});
    }
    if (items.empty()) throw DatasetError(labels_path.string() + ": dataset has no curves");
    try {
        return LabeledDataset(std::move(items));
    } catch (const std::invalid_argument& e) {
        throw DatasetError(dir.string() + ": " + e.what());
    }
}

}  // namespace

DatasetFormat parse_dataset_format(std::string_view name) {
    if (name == "json") return DatasetFormat::json;
    if (name == "csv-dir") return DatasetFormat::csv_dir;
    throw std::invalid_argument("unknown dataset format '" + std::string(name) + "'");
}

LabeledDataset parse_dataset_json(std::string_view text, std::string_view origin) {
    const std::string where(origin);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DatasetError(where + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("curves") || !doc["curves"].is_array()) {
        throw DatasetError(where + ": expected an object with a \"curves\" array");
    }
    const auto& curves = doc["curves"];
    if (curves.empty()) throw DatasetError(where + ": \"curves\" is empty");

    std::vector<LabeledCurve> items;
    items.reserve(curves.size());
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const auto& entry = curves[c];
        const std::string at = where + ": curves[" + std::to_string(c) + "]";
        if (!entry.is_object()) throw DatasetError(at + ": expected an object");
        if (!entry.contains("id") || !entry["id"].is_string()) throw DatasetError(at + ".id: expected a string");
        if (!entry.contains("label") || !entry["label"].is_number_integer()) {
            throw DatasetError(at + ".label: expected an integer");
        }
        if (!entry.contains("points") || !entry["points"].is_array() || entry["points"].empty()) {
            throw DatasetError(at + ".points: expected a nonempty array");
        }
        std::vector<Point> vertices;
        const auto& points = entry["points"];
        for (std::size_t p = 0; p < points.size(); ++p) {
            const std::string pat = at + ".points[" + std::to_string(p) + "]";
            if (!points[p].is_array() || points[p].empty()) throw DatasetError(pat + ": expected a nonempty array");
            std::vector<double> coords;
            for (const auto& x : points[p]) {
                if (!x.is_number()) throw DatasetError(pat + ": coordinate is not a number");
                coords.push_back(x.get<double>());
            }
            if (!vertices.empty() && coords.size() != vertices.front().dim()) {
                throw DatasetError(pat + ": inconsistent dimension");
            }
            try {
                vertices.emplace_back(std::move(coords));
            } catch (const std::invalid_argument& e) {
                throw DatasetError(pat + ": " + e.what());
            }
        }
        items.push_back({entry["id"].get<std::string>(), entry["label"].get<int>(), Curve(std::move(vertices))});
    }
    try {
        return LabeledDataset(std::move(items));
    } catch (const std::invalid_argument& e) {
        throw DatasetError(where + ": " + e.what());
    }
}

LabeledDataset load_dataset(const fs::path& path, DatasetFormat format) {
    switch (format) {
        case DatasetFormat::json: return parse_dataset_json(read_file(path), path.string());
        case DatasetFormat::csv_dir: return load_csv_dir(path);
    }
    throw std::logic_error("load_dataset: unhandled format");
}

std::string dataset_to_json(const LabeledDataset& dataset) {
    json curves = json::array();
    for (const auto& item : dataset.items()) {
        json points = json::array();
        for (const auto& v : item.curve.vertices()) {
            points.push_back(std::vector<double>(v.coords().begin(), v.coords().end()));
        }
        curves.push_back({{"id", item.id}, {"label", item.label}, {"points", std::move(points)}});
    }
    return json{{"curves", std::move(curves)}}.dump() + "\n";
}

void save_dataset_json(const LabeledDataset& dataset, const fs::path& path) {
    auto out = open_out(path);
    out << dataset_to_json(dataset);
}

void save_dataset_csv_dir(const LabeledDataset& dataset, const fs::path& dir) {
    fs::create_directories(dir);
    auto labels = open_out(dir / "labels.csv");
    labels << "id,label\n";
    for (const auto& item : dataset.items()) {
        labels << item.id << ',' << item.label << '\n';
        auto out = open_out(dir / (item.id + ".csv"));
        for (const auto& v : item.curve.vertices()) {
            for (std::size_t i = 0; i < v.dim(); ++i) out << (i ? "," : "") << format_double(v[i]);
            out << '\n';
        }
    }
}

std::string format_double(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

void write_matrix_csv(std::ostream& out, const DistanceMatrix& matrix, std::span<const std::string> ids) {
    if (ids.size() != matrix.rows() || matrix.rows() != matrix.cols()) {
        throw std::invalid_argument("write_matrix_csv: ids must label a square matrix");
    }
    for (const auto& id : ids) out << ',' << id;
    out << '\n';
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        out << ids[i];
        for (std::size_t j = 0; j < matrix.cols(); ++j) out << ',' << format_double(matrix(i, j));
        out << '\n';
    }
}

void save_matrix(const DistanceMatrix& matrix, std::span<const std::string> ids, const fs::path& path) {
    auto out = open_out(path);
    write_matrix_csv(out, matrix, ids);
}

DistanceMatrix load_matrix(const fs::path& path, std::vector<std::string>& ids) {
    const std::string text = read_file(path);
    const auto lines = nonblank_lines(text);
    if (lines.empty()) throw DatasetError(path.string() + ": empty matrix file");
    ids.clear();
    const auto header = split_commas(lines.front().second);
    for (std::size_t f = 1; f < header.size(); ++f) ids.emplace_back(header[f]);
    const std::size_t n = ids.size();
    if (lines.size() != n + 1) throw DatasetError(path.string() + ": expected " + std::to_string(n) + " data rows");
    std::vector<double> entries;
    entries.reserve(n * n);
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto [line_no, line] = lines[r];
        const auto fields = split_commas(line);
        const std::string where = path.string() + ":" + std::to_string(line_no);
        if (fields.size() != n + 1) throw DatasetError(where + ": expected " + std::to_string(n + 1) + " fields");
        for (std::size_t f = 1; f < fields.size(); ++f) {
            entries.push_back(parse_number<double>(fields[f], where + ": field " + std::to_string(f + 1)));
        }
    }
    return DistanceMatrix(n, n, std::move(entries));
}

}  // namespace kdtw
