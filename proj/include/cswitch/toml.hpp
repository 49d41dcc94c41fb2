#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace cswitch::toml {

class TomlError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Value;

// Insertion-ordered table so serialization round-trips the layout.
struct Table {
  std::vector<std::pair<std::string, Value>> items;

  Value* find(const std::string& key);
  const Value* find(const std::string& key) const;
  Value& insert(const std::string& key);  // appends; key must be new
  bool contains(const std::string& key) const { return find(key) != nullptr; }

  bool operator==(const Table&) const;
};

using Array = std::vector<Value>;

struct Value {
  std::variant<std::string, int64_t, double, bool, Array, Table> v;

  Value() : v(std::string()) {}
  Value(std::string s) : v(std::move(s)) {}
  Value(const char* s) : v(std::string(s)) {}
  Value(int64_t i) : v(i) {}
  Value(int i) : v(static_cast<int64_t>(i)) {}
  Value(uint64_t i) : v(static_cast<int64_t>(i)) {}
  Value(double d) : v(d) {}
  Value(bool b) : v(b) {}
  Value(Array a) : v(std::move(a)) {}
  Value(Table t) : v(std::move(t)) {}

  bool is_string() const { return std::holds_alternative<std::string>(v); }
  bool is_int() const { return std::holds_alternative<int64_t>(v); }
  bool is_float() const { return std::holds_alternative<double>(v); }
  bool is_bool() const { return std::holds_alternative<bool>(v); }
  bool is_array() const { return std::holds_alternative<Array>(v); }
  bool is_table() const { return std::holds_alternative<Table>(v); }

  const std::string& as_string() const;
  int64_t as_int() const;
  double as_float() const;  // accepts integers
  bool as_bool() const;
  const Array& as_array() const;
  const Table& as_table() const;
  Table& as_table();

  bool operator==(const Value&) const;
};

// Supported subset: comments, [section] and [[array-of-tables]]
// headers with dotted names, bare or quoted keys, string / integer /
// float / boolean scalars and single-line arrays.
Table parse(const std::string& text);
Table parse_file(const std::string& path);

std::string serialize(const Table& root);
void write_file(const Table& root, const std::string& path);

}  // namespace cswitch::toml
