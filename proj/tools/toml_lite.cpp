// Copyright 2026 The contincl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <vector>

namespace contincl::cli {
namespace {

using nlohmann::json;

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  ParsedConfig run() {
    out_.root = json::object();
    std::vector<std::string> table;  // current table path (display form)
    json* current = &out_.root;
    std::string prefix;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        const std::size_t line = line_;
        bool array = false;
        get();
        if (peek() == '[') {
          get();
          array = true;
        }
        skip_ws();
        const std::vector<std::string> keys = dotted_key();
        skip_ws();
        expect(']');
        if (array) expect(']');
        end_of_line();
        current = open_table(keys, array, line, prefix);
        continue;
      }
      const std::size_t line = line_;
      const std::vector<std::string> keys = dotted_key();
      skip_ws();
      expect('=');
      skip_ws();
      json value = parse_value(/*allow_newlines=*/false);
      end_of_line();
      assign(*current, keys, std::move(value), line, prefix);
    }
    return std::move(out_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { fail_at(line_, msg); }
  [[noreturn]] static void fail_at(std::size_t line, const std::string& msg) {
    throw ConfigError("line " + std::to_string(line) + ": " + msg);
  }
  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }
  char get() {
    if (eof()) fail("unexpected end of input");
    const char c = s_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }
  void skip_ws() {
    while (peek() == ' ' || peek() == '\t') get();
  }
  void skip_comment() {
    if (peek() == '#') {
      while (!eof() && peek() != '\n') get();
    }
  }
  void skip_blank_lines() {
    while (!eof()) {
      skip_ws();
      skip_comment();
      if (peek() == '\r') get();
      if (peek() == '\n') {
        get();
        continue;
      }
      break;
    }
  }
  // Whitespace, comments and newlines inside arrays.
  void skip_ws_nl() {
    while (!eof()) {
      skip_ws();
      skip_comment();
      if (peek() == '\r' || peek() == '\n') {
        get();
        continue;
      }
      break;
    }
  }
  void end_of_line() {
    skip_ws();
    skip_comment();
    if (peek() == '\r') get();
    if (eof()) return;
    if (peek() != '\n') fail("unexpected text after value");
    get();
  }

  std::string key_part() {
    if (peek() == '"') return basic_string();
    std::string k;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
           peek() == '-') {
      k += get();
    }
    if (k.empty()) fail("expected a key");
    return k;
  }

  std::vector<std::string> dotted_key() {
    std::vector<std::string> keys{key_part()};
    skip_ws();
    while (peek() == '.') {
      get();
      skip_ws();
      keys.push_back(key_part());
      skip_ws();
    }
    return keys;
  }

  std::string basic_string() {
    expect('"');
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = get();
      if (c == '"') break;
      if (c == '\\') {
        const char e = get();
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
        continue;
      }
      out += c;
    }
    return out;
  }

  std::string literal_string() {
    expect('\'');
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = get();
      if (c == '\'') break;
      out += c;
    }
    return out;
  }

  json parse_number_or_word() {
    std::string tok;
    while (!eof()) {
      const char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
          c == '.' || c == '_') {
        tok += get();
      } else {
        break;
      }
    }
    if (tok.empty()) fail("expected a value");
    if (tok == "true") return true;
    if (tok == "false") return false;
    std::string clean;
    for (char c : tok) {
      if (c != '_') clean += c;
    }
    std::string body = clean;
    double sign = 1.0;
    if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
      if (body[0] == '-') sign = -1.0;
      body = body.substr(1);
    }
    if (body == "inf") return sign * std::numeric_limits<double>::infinity();
    if (body == "nan") return std::numeric_limits<double>::quiet_NaN();
    const bool is_float = body.find_first_of(".eE") != std::string::npos;
    if (!is_float) {
      long long v = 0;
      const auto r = std::from_chars(body.data(), body.data() + body.size(), v);
      if (r.ec == std::errc() && r.ptr == body.data() + body.size() &&
          !body.empty()) {
        return static_cast<long long>(sign) * v;
      }
      fail("invalid value '" + tok + "'");
    }
    double v = 0.0;
    const auto r = std::from_chars(body.data(), body.data() + body.size(), v);
    if (r.ec != std::errc() || r.ptr != body.data() + body.size()) {
      fail("invalid number '" + tok + "'");
    }
    return sign * v;
  }

  json parse_value(bool allow_newlines) {
    (void)allow_newlines;
    const char c = peek();
    if (c == '"') return basic_string();
    if (c == '\'') return literal_string();
    if (c == '[') {
      const std::size_t start = line_;
      get();
      json arr = json::array();
      skip_ws_nl();
      while (peek() != ']') {
        if (eof()) fail_at(start, "unterminated array");
        arr.push_back(parse_value(true));
        skip_ws_nl();
        if (peek() == ',') {
          get();
          skip_ws_nl();
          continue;
        }
        if (eof()) fail_at(start, "unterminated array");
        if (peek() != ']') fail("expected ',' or ']' in array");
      }
      get();
      return arr;
    }
    if (c == '{') {
      get();
      json obj = json::object();
      skip_ws();
      if (peek() == '}') {
        get();
        return obj;
      }
      while (true) {
        skip_ws();
        const std::size_t line = line_;
        const auto keys = dotted_key();
        skip_ws();
        expect('=');
        skip_ws();
        json v = parse_value(false);
        std::string dummy;
        assign(obj, keys, std::move(v), line, dummy, /*record=*/false);
        skip_ws();
        if (peek() == ',') {
          get();
          continue;
        }
        if (peek() == '}') {
          get();
          break;
        }
        fail("expected ',' or '}' in inline table");
      }
      return obj;
    }
    return parse_number_or_word();
  }

  void record(const std::string& path, std::size_t line) {
    out_.lines.emplace(path, line);
  }

  void assign(json& table, const std::vector<std::string>& keys, json value,
              std::size_t line, const std::string& prefix, bool rec = true) {
    json* node = &table;
    std::string path = prefix;
    for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
      path += (path.empty() ? "" : ".") + keys[i];
      json& next = (*node)[keys[i]];
      if (next.is_null()) next = json::object();
      if (!next.is_object()) fail_at(line, "key '" + path + "' is not a table");
      if (rec) record(path, line);
      node = &next;
    }
    path += (path.empty() ? "" : ".") + keys.back();
    if (node->contains(keys.back())) fail_at(line, "duplicate key '" + path + "'");
    if (rec) record(path, line);
    if (rec && value.is_object()) record_inline(path, value, line);
    (*node)[keys.back()] = std::move(value);
  }

  void record_inline(const std::string& path, const json& obj,
                     std::size_t line) {
    for (const auto& [k, v] : obj.items()) {
      record(path + "." + k, line);
      if (v.is_object()) record_inline(path + "." + k, v, line);
    }
  }

  json* open_table(const std::vector<std::string>& keys, bool array,
                   std::size_t line, std::string& prefix) {
    json* node = &out_.root;
    std::string path;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      path += (path.empty() ? "" : ".") + keys[i];
      json& next = (*node)[keys[i]];
      const bool last = i + 1 == keys.size();
      if (last && array) {
        if (next.is_null()) next = json::array();
        if (!next.is_array()) fail_at(line, "key '" + path + "' is not an array of tables");
        next.push_back(json::object());
        path += "[" + std::to_string(next.size() - 1) + "]";
        record(path, line);
        node = &next.back();
        break;
      }
      if (next.is_null()) {
        next = json::object();
      } else if (last && next.is_object() && defined_tables_.count(path)) {
        fail_at(line, "table '" + path + "' defined twice");
      }
      if (next.is_array() && !next.empty() && next.back().is_object()) {
        path += "[" + std::to_string(next.size() - 1) + "]";
        node = &next.back();
        continue;
      }
      if (!next.is_object()) fail_at(line, "key '" + path + "' is not a table");
      record(path, line);
      node = &next;
    }
    if (!array) defined_tables_[path] = true;
    prefix = path;
    return node;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  ParsedConfig out_;
  std::map<std::string, bool> defined_tables_;
};

}  // namespace

ParsedConfig parse_toml(const std::string& text) { return Parser(text).run(); }

ParsedConfig parse_json_config(const std::string& text) {
  ParsedConfig cfg;
  try {
    cfg.root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!cfg.root.is_object()) throw ConfigError("config root must be an object");
  return cfg;
}

}  // namespace contincl::cli
