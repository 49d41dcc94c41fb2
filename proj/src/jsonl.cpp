#include "cswitch/jsonl.hpp"

#include <cstdio>

namespace cswitch {

JsonlReader::JsonlReader(const std::string& path) : path_(path), in_(path) {
  if (!in_) throw JsonlError("cannot open " + path);
}

std::optional<nlohmann::json> JsonlReader::next() {
  while (std::getline(in_, line_)) {
    ++line_no_;
    if (line_.empty() || line_.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j = nlohmann::json::parse(line_, nullptr, false);
    if (j.is_discarded()) {
      throw JsonlError(path_ + ":" + std::to_string(line_no_) + ": malformed JSON line");
    }
    return j;
  }
  return std::nullopt;
}

void append_json_string(std::string& out, const std::string& s) {
  out.push_back('"');
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(static_cast<char>(c));
        }
    }
  }
  out.push_back('"');
}

}  // namespace cswitch
