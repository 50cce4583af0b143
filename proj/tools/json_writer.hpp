#pragma once

// Minimal deterministic JSON emitter for the CLI reports: insertion-ordered
// objects and floats printed with 17 significant digits, so a fixed seed gives
// byte-identical output.

#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace jsonw {

class Value;
using ValuePtr = std::shared_ptr<Value>;

class Value {
 public:
  enum class Kind { null, boolean, number_int, number_real, string, array, object };

  Kind kind = Kind::null;
  bool b = false;
  long long i = 0;
  double d = 0.0;
  std::string s;
  std::vector<ValuePtr> items;
  std::vector<std::pair<std::string, ValuePtr>> fields;

  static ValuePtr make_null() { return std::make_shared<Value>(); }
  static ValuePtr make(bool v) {
    auto p = std::make_shared<Value>();
    p->kind = Kind::boolean;
    p->b = v;
    return p;
  }
  static ValuePtr make(long long v) {
    auto p = std::make_shared<Value>();
    p->kind = Kind::number_int;
    p->i = v;
    return p;
  }
  static ValuePtr make(int v) { return make(static_cast<long long>(v)); }
  static ValuePtr make(double v) {
    auto p = std::make_shared<Value>();
    p->kind = Kind::number_real;
    p->d = v;
    return p;
  }
  static ValuePtr make(const std::string& v) {
    auto p = std::make_shared<Value>();
    p->kind = Kind::string;
    p->s = v;
    return p;
  }
  static ValuePtr make(const char* v) { return make(std::string(v)); }
  static ValuePtr array() {
    auto p = std::make_shared<Value>();
    p->kind = Kind::array;
    return p;
  }
  static ValuePtr object() {
    auto p = std::make_shared<Value>();
    p->kind = Kind::object;
    return p;
  }

  Value& push(ValuePtr v) {
    items.push_back(std::move(v));
    return *this;
  }
  Value& set(const std::string& key, ValuePtr v) {
    fields.emplace_back(key, std::move(v));
    return *this;
  }

  void write(std::string& out) const {
    char buf[64];
    switch (kind) {
      case Kind::null:
        out += "null";
        break;
      case Kind::boolean:
        out += b ? "true" : "false";
        break;
      case Kind::number_int:
        std::snprintf(buf, sizeof(buf), "%lld", i);
        out += buf;
        break;
      case Kind::number_real:
        std::snprintf(buf, sizeof(buf), "%.17g", d);
        out += buf;
        break;
      case Kind::string:
        out += '"';
        for (char c : s) {
          if (c == '"' || c == '\\') out += '\\';
          out += c;
        }
        out += '"';
        break;
      case Kind::array:
        out += '[';
        for (size_t k = 0; k < items.size(); ++k) {
          if (k) out += ',';
          items[k]->write(out);
        }
        out += ']';
        break;
      case Kind::object:
        out += '{';
        for (size_t k = 0; k < fields.size(); ++k) {
          if (k) out += ',';
          out += '"';
          out += fields[k].first;
          out += "\":";
          fields[k].second->write(out);
        }
        out += '}';
        break;
    }
  }

  std::string dump() const {
    std::string out;
    write(out);
    out += '\n';
    return out;
  }
};

}  // namespace jsonw
