#pragma once

// Instance files are a small key/value text format:
//
//   # synthetic instance
//   name      = "synthetic"
//   threshold = 0.004
//   means     = [0.007, 0.006, 0.005,
//                0.003, 0.002, 0.001]
//
// Grammar (one assignment per logical line, '#' starts a comment outside
// strings, blank lines ignored):
//
//   assignment := key '=' value
//   key        := "name" | "threshold" | "means"
//   value      := string | real | array
//   string     := '"' { any char except '"' and newline } '"'
//   array      := '[' [ real { ',' real } [ ',' ] ] ']'   (may span lines)
//
// `threshold` and `means` are required, `name` is optional, and each key may
// appear at most once. Reals use the C locale syntax accepted by
// std::from_chars.

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "lilhdoc/core.hpp"

namespace lilhdoc {

class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& source, std::size_t line, std::string key,
              const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) +
                           (key.empty() ? "" : " [" + key + "]") + ": " + what),
        line_(line),
        key_(std::move(key)) {}

  std::size_t line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  std::size_t line_;
  std::string key_;
};

/// Shortest text that reads back to the same double.
inline std::string format_real(double value) {
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::optional<double> parse_real(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    return std::nullopt;
  }
  return value;
}

// Drops a trailing comment that is not inside a string literal.
inline std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

}  // namespace detail

inline BanditInstance parse_instance(std::istream& in,
                                     const std::string& source = "<input>") {
  std::optional<std::string> name;
  std::optional<double> threshold;
  std::optional<std::vector<double>> means;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw parse_error(source, line_no, "", "expected 'key = value'");
    }
    const std::string key(detail::trim(line.substr(0, eq)));
    std::string value(detail::trim(line.substr(eq + 1)));
    const std::size_t key_line = line_no;

    if (key == "name") {
      if (name) throw parse_error(source, key_line, key, "duplicate key");
      if (value.size() < 2 || value.front() != '"' || value.back() != '"') {
        throw parse_error(source, key_line, key, "expected a quoted string");
      }
      name = value.substr(1, value.size() - 2);
      if (name->find('"') != std::string::npos) {
        throw parse_error(source, key_line, key, "unexpected '\"' inside string");
      }
    } else if (key == "threshold") {
      if (threshold) throw parse_error(source, key_line, key, "duplicate key");
      threshold = detail::parse_real(value);
      if (!threshold) throw parse_error(source, key_line, key, "expected a real number");
    } else if (key == "means") {
      if (means) throw parse_error(source, key_line, key, "duplicate key");
      if (value.empty() || value.front() != '[') {
        throw parse_error(source, key_line, key, "expected '[' to open an array");
      }
      // Arrays may continue over following lines until the closing bracket.
      while (value.find(']') == std::string::npos) {
        if (!std::getline(in, raw)) {
          throw parse_error(source, line_no, key, "unterminated array");
        }
        ++line_no;
        value += ' ';
        value += detail::trim(detail::strip_comment(raw));
      }
      const auto close = value.find(']');
      if (!detail::trim(std::string_view(value).substr(close + 1)).empty()) {
        throw parse_error(source, line_no, key, "trailing text after array");
      }
      std::vector<double> parsed;
      std::string_view body = std::string_view(value).substr(1, close - 1);
      std::size_t index = 0;
      while (!detail::trim(body).empty()) {
        const auto comma = body.find(',');
        const std::string_view item = body.substr(0, comma);
        const auto number = detail::parse_real(item);
        if (!number) {
          throw parse_error(source, line_no, key,
                            "element " + std::to_string(index) + " '" +
                                std::string(detail::trim(item)) +
                                "' is not a real number");
        }
        parsed.push_back(*number);
        ++index;
        if (comma == std::string_view::npos) break;
        body.remove_prefix(comma + 1);
      }
      means = std::move(parsed);
    } else {
      throw parse_error(source, key_line, key, "unknown key");
    }
  }

  if (!threshold) throw parse_error(source, line_no, "threshold", "missing required key");
  if (!means) throw parse_error(source, line_no, "means", "missing required key");
  try {
    return BanditInstance(std::move(*means), *threshold, name.value_or(""));
  } catch (const config_error& e) {
    throw parse_error(source, line_no, "", e.what());
  }
}

inline BanditInstance parse_instance(std::string_view text,
                                     const std::string& source = "<string>") {
  std::istringstream in{std::string(text)};
  return parse_instance(in, source);
}

inline BanditInstance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path.string());
  return parse_instance(in, path.string());
}

inline void write_instance(std::ostream& out, const BanditInstance& instance) {
  if (instance.name().find_first_of("\"\n\r") != std::string::npos) {
    throw std::invalid_argument("instance name cannot contain quotes or newlines");
  }
  out << "name = \"" << instance.name() << "\"\n";
  out << "threshold = " << format_real(instance.threshold()) << "\n";
  out << "means = [";
  const auto means = instance.means();
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (i != 0) out << (i % 8 == 0 ? ",\n  " : ", ");
    out << format_real(means[i]);
  }
  out << "]\n";
}

inline void write_instance(const std::filesystem::path& path,
                           const BanditInstance& instance) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file " + path.string());
  write_instance(out, instance);
}

}  // namespace lilhdoc
