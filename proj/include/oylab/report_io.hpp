#pragma once

// Deterministic artifact output. All floating-point values are rendered with
// 17 significant digits via to_chars so byte-identical reruns are a testable
// property; files are written to a temp name and renamed into place.

#include <string>
#include <vector>

#include <json.hpp>

namespace oylab {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v);

class CsvBuilder {
 public:
  explicit CsvBuilder(std::vector<std::string> header);
  void add_row(const std::vector<std::string>& cells);
  const std::string& str() const { return out_; }

 private:
  std::size_t columns_;
  std::string out_;
};

void ensure_directory(const std::string& dir);
void write_text_atomic(const std::string& path, const std::string& content);
void write_json_atomic(const std::string& path, const ordered_json& j);

}  // namespace oylab
