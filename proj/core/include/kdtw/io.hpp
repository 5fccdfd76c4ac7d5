#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kdtw/curve.hpp"

namespace kdtw {

enum class DatasetFormat { json, csv_dir };

/// Raised for malformed dataset files; the message carries file/line/field context.
class DatasetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

[[nodiscard]] DatasetFormat parse_dataset_format(std::string_view name);

/// JSON: {"curves":[{"id":"c1","label":0,"points":[[x,y],...]},...]}
/// csv-dir: one <id>.csv per curve (one vertex per row) plus labels.csv (id,label).
[[nodiscard]] LabeledDataset load_dataset(const std::filesystem::path& path, DatasetFormat format);
[[nodiscard]] LabeledDataset parse_dataset_json(std::string_view text, std::string_view origin = "<string>");

void save_dataset_json(const LabeledDataset& dataset, const std::filesystem::path& path);
[[nodiscard]] std::string dataset_to_json(const LabeledDataset& dataset);
void save_dataset_csv_dir(const LabeledDataset& dataset, const std::filesystem::path& dir);

/// 17 significant digits, shortest "%g"-style layout.
[[nodiscard]] std::string format_double(double value);

/// CSV with ids in the first row and column; entries use format_double.
void write_matrix_csv(std::ostream& out, const DistanceMatrix& matrix, std::span<const std::string> ids);
void save_matrix(const DistanceMatrix& matrix, std::span<const std::string> ids, const std::filesystem::path& path);

/// Reads a file written by save_matrix; ids are returned through `ids`.
[[nodiscard]] DistanceMatrix load_matrix(const std::filesystem::path& path, std::vector<std::string>& ids);

}  // namespace kdtw
