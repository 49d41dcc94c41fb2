#pragma once

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace cswitch {

class JsonlError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Streams one JSON object per line; blank lines are skipped.
class JsonlReader {
 public:
  explicit JsonlReader(const std::string& path);

  // Returns the next record, or nullopt at end of file. Throws
  // JsonlError with the offending line number on parse failure.
  std::optional<nlohmann::json> next();

  size_t line_no() const { return line_no_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::string line_;
  size_t line_no_ = 0;
};

// Appends `s` to `out` as a JSON string literal (quotes included).
void append_json_string(std::string& out, const std::string& s);

}  // namespace cswitch
