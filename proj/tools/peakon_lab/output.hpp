#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace peakon::lab {

/// 17 significant digits; non-finite values print as nan / inf / -inf.
[[nodiscard]] std::string format17(double v);

/// JSON text with two-space indentation, keys in sorted order and every
/// floating value printed with 17 significant digits. Non-finite -> null.
[[nodiscard]] std::string dump_json(const nlohmann::json& j);

/// Writes `content` to a temporary file next to `path` and renames it into
/// place, so readers never observe a partial file.
void atomic_write(const std::filesystem::path& path, std::string_view content);

class CsvWriter {
 public:
  explicit CsvWriter(std::initializer_list<std::string_view> header);

  void row(std::initializer_list<double> values);
  [[nodiscard]] const std::string& str() const { return buf_; }
  [[nodiscard]] std::size_t rows() const { return rows_; }

 private:
  std::string buf_;
  std::size_t columns_;
  std::size_t rows_ = 0;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of `name` in the header; throws std::invalid_argument if absent.
  [[nodiscard]] std::size_t column(std::string_view name) const;
};

/// Parses a numeric CSV with a header line. Throws std::runtime_error on
/// malformed input.
[[nodiscard]] CsvTable read_csv(const std::filesystem::path& path);

}  // namespace peakon::lab
