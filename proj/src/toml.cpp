#include "cswitch/toml.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cswitch::toml {

Value* Table::find(const std::string& key) {
  for (auto& [k, v] : items) {
    if (k == key) return &v;
  }
  return nullptr;
}

const Value* Table::find(const std::string& key) const {
  for (const auto& [k, v] : items) {
    if (k == key) return &v;
  }
  return nullptr;
}

Value& Table::insert(const std::string& key) {
  items.emplace_back(key, Value());
  return items.back().second;
}

bool Table::operator==(const Table& other) const { return items == other.items; }

bool Value::operator==(const Value& other) const { return v == other.v; }

const std::string& Value::as_string() const {
  if (!is_string()) throw TomlError("expected a string value");
  return std::get<std::string>(v);
}

int64_t Value::as_int() const {
  if (!is_int()) throw TomlError("expected an integer value");
  return std::get<int64_t>(v);
}

double Value::as_float() const {
  if (is_int()) return static_cast<double>(std::get<int64_t>(v));
  if (!is_float()) throw TomlError("expected a float value");
  return std::get<double>(v);
}

bool Value::as_bool() const {
  if (!is_bool()) throw TomlError("expected a boolean value");
  return std::get<bool>(v);
}

const Array& Value::as_array() const {
  if (!is_array()) throw TomlError("expected an array value");
  return std::get<Array>(v);
}

const Table& Value::as_table() const {
  if (!is_table()) throw TomlError("expected a table value");
  return std::get<Table>(v);
}

Table& Value::as_table() {
  if (!is_table()) throw TomlError("expected a table value");
  return std::get<Table>(v);
}

namespace {

struct Parser {
  const std::string& text;
  size_t pos = 0;
  size_t line = 1;

  explicit Parser(const std::string& t) : text(t) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw TomlError("line " + std::to_string(line) + ": " + msg);
  }

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  void skip_spaces() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos;
  }

  void skip_to_eol() {
    while (!eof() && peek() != '\n') ++pos;
  }

  void expect_line_end() {
    skip_spaces();
    if (!eof() && peek() == '#') skip_to_eol();
    if (!eof() && peek() == '\r') ++pos;
    if (!eof()) {
      if (peek() != '\n') fail("unexpected trailing characters");
      ++pos;
      ++line;
    }
  }

  static bool is_bare_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  }

  std::string parse_key_part() {
    skip_spaces();
    if (!eof() && peek() == '"') return parse_basic_string();
    size_t start = pos;
    while (!eof() && is_bare_char(peek())) ++pos;
    if (pos == start) fail("expected a key");
    return text.substr(start, pos - start);
  }

  std::vector<std::string> parse_dotted_key() {
    std::vector<std::string> parts{parse_key_part()};
    skip_spaces();
    while (!eof() && peek() == '.') {
      ++pos;
      parts.push_back(parse_key_part());
      skip_spaces();
    }
    return parts;
  }

  std::string parse_basic_string() {
    if (eof() || peek() != '"') fail("expected '\"'");
    ++pos;
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = text[pos++];
      if (c == '"') break;
      if (c == '\\') {
        if (eof()) fail("unterminated escape");
        char e = text[pos++];
        switch (e) {
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case 'r': out.push_back('\r'); break;
          default: fail(std::string("unsupported escape '\\") + e + "'");
        }
      } else {
        out.push_back(c);
      }
    }
    return out;
  }

  Value parse_value() {
    skip_spaces();
    if (eof()) fail("expected a value");
    char c = peek();
    if (c == '"') return Value(parse_basic_string());
    if (c == '[') {
      ++pos;
      Array arr;
      skip_spaces();
      if (!eof() && peek() == ']') {
        ++pos;
        return Value(std::move(arr));
      }
      while (true) {
        arr.push_back(parse_value());
        skip_spaces();
        if (!eof() && peek() == ',') {
          ++pos;
          skip_spaces();
          if (!eof() && peek() == ']') {  // trailing comma
            ++pos;
            break;
          }
          continue;
        }
        if (!eof() && peek() == ']') {
          ++pos;
          break;
        }
        fail("expected ',' or ']' in array");
      }
      return Value(std::move(arr));
    }
    if (text.compare(pos, 4, "true") == 0 && (pos + 4 >= text.size() || !is_bare_char(text[pos + 4]))) {
      pos += 4;
      return Value(true);
    }
    if (text.compare(pos, 5, "false") == 0 &&
        (pos + 5 >= text.size() || !is_bare_char(text[pos + 5]))) {
      pos += 5;
      return Value(false);
    }
    // number
    size_t start = pos;
    if (!eof() && (peek() == '+' || peek() == '-')) ++pos;
    bool is_float = false;
    while (!eof() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.' ||
                      peek() == 'e' || peek() == 'E' || peek() == '+' || peek() == '-' ||
                      peek() == '_')) {
      if (peek() == '.' || peek() == 'e' || peek() == 'E') is_float = true;
      if ((peek() == '+' || peek() == '-') && pos > start) {
        char prevc = text[pos - 1];
        if (prevc != 'e' && prevc != 'E') break;
      }
      ++pos;
    }
    if (pos == start) fail("expected a value");
    std::string raw = text.substr(start, pos - start);
    std::string digits;
    for (char d : raw) {
      if (d != '_') digits.push_back(d);
    }
    if (is_float) {
      try {
        return Value(std::stod(digits));
      } catch (...) {
        fail("bad float '" + raw + "'");
      }
    }
    int64_t out = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
    if (ec != std::errc() || p != digits.data() + digits.size()) fail("bad integer '" + raw + "'");
    return Value(out);
  }
};

Table* descend(Table& root, const std::vector<std::string>& parts, Parser& p, bool array_of_tables) {
  Table* cur = &root;
  for (size_t i = 0; i < parts.size(); ++i) {
    const bool last = i + 1 == parts.size();
    Value* v = cur->find(parts[i]);
    if (last && array_of_tables) {
      if (!v) {
        v = &cur->insert(parts[i]);
        v->v = Array{};
      }
      if (!v->is_array()) p.fail("'" + parts[i] + "' is not an array of tables");
      auto& arr = std::get<Array>(v->v);
      arr.emplace_back(Table{});
      return &std::get<Table>(arr.back().v);
    }
    if (!v) {
      v = &cur->insert(parts[i]);
      v->v = Table{};
    }
    if (v->is_array()) {  // continue inside the latest array-of-tables element
      auto& arr = std::get<Array>(v->v);
      if (arr.empty() || !arr.back().is_table()) p.fail("'" + parts[i] + "' is not a table");
      cur = &std::get<Table>(arr.back().v);
    } else if (v->is_table()) {
      cur = &std::get<Table>(v->v);
    } else {
      p.fail("'" + parts[i] + "' is not a table");
    }
  }
  return cur;
}

}  // namespace

Table parse(const std::string& text) {
  Table root;
  Parser p(text);
  Table* current = &root;
  while (!p.eof()) {
    p.skip_spaces();
    if (p.eof()) break;
    char c = p.peek();
    if (c == '\n' || c == '\r' || c == '#') {
      p.expect_line_end();
      continue;
    }
    if (c == '[') {
      ++p.pos;
      bool array_of_tables = !p.eof() && p.peek() == '[';
      if (array_of_tables) ++p.pos;
      auto parts = p.parse_dotted_key();
      p.skip_spaces();
      if (p.eof() || p.peek() != ']') p.fail("expected ']'");
      ++p.pos;
      if (array_of_tables) {
        if (p.eof() || p.peek() != ']') p.fail("expected ']]'");
        ++p.pos;
      }
      current = descend(root, parts, p, array_of_tables);
      p.expect_line_end();
      continue;
    }
    auto keys = p.parse_dotted_key();
    p.skip_spaces();
    if (p.eof() || p.peek() != '=') p.fail("expected '=' after key");
    ++p.pos;
    Value value = p.parse_value();
    Table* target = current;
    for (size_t i = 0; i + 1 < keys.size(); ++i) {
      Value* v = target->find(keys[i]);
      if (!v) {
        v = &target->insert(keys[i]);
        v->v = Table{};
      }
      if (!v->is_table()) p.fail("'" + keys[i] + "' is not a table");
      target = &std::get<Table>(v->v);
    }
    if (target->contains(keys.back())) p.fail("duplicate key '" + keys.back() + "'");
    target->insert(keys.back()) = std::move(value);
    p.expect_line_end();
  }
  return root;
}

Table parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TomlError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

namespace {

std::string escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

std::string format_float(double d) {
  // Shortest representation that round-trips through strtod.
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, d);
    if (std::strtod(buf, nullptr) == d) break;
  }
  std::string out = buf;
  if (out.find_first_of(".eEn") == std::string::npos) out += ".0";  // keep the float type
  return out;
}

std::string format_scalar(const Value& v) {
  if (v.is_string()) return escape(v.as_string());
  if (v.is_int()) return std::to_string(v.as_int());
  if (v.is_float()) return format_float(std::get<double>(v.v));
  if (v.is_bool()) return v.as_bool() ? "true" : "false";
  throw TomlError("not a scalar");
}

bool is_table_array(const Value& v) {
  if (!v.is_array()) return false;
  const auto& arr = v.as_array();
  return !arr.empty() && arr.front().is_table();
}

void serialize_table(const Table& t, const std::string& prefix, std::string& out) {
  // Scalars and plain arrays first, then nested sections.
  for (const auto& [key, value] : t.items) {
    if (value.is_table() || is_table_array(value)) continue;
    out += key;
    out += " = ";
    if (value.is_array()) {
      out += '[';
      const auto& arr = value.as_array();
      for (size_t i = 0; i < arr.size(); ++i) {
        if (i) out += ", ";
        out += format_scalar(arr[i]);
      }
      out += ']';
    } else {
      out += format_scalar(value);
    }
    out += '\n';
  }
  for (const auto& [key, value] : t.items) {
    std::string path = prefix.empty() ? key : prefix + "." + key;
    if (value.is_table()) {
      out += "\n[" + path + "]\n";
      serialize_table(value.as_table(), path, out);
    } else if (is_table_array(value)) {
      for (const auto& element : value.as_array()) {
        out += "\n[[" + path + "]]\n";
        serialize_table(element.as_table(), path, out);
      }
    }
  }
}

}  // namespace

std::string serialize(const Table& root) {
  std::string out;
  serialize_table(root, "", out);
  return out;
}

void write_file(const Table& root, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw TomlError("cannot write " + path);
  out << serialize(root);
}

}  // namespace cswitch::toml
