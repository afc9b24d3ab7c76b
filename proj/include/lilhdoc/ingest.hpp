#pragma once

// Score tables -> bandit instances.
//
// A score is transformed as
//
//   s' = s / divide_by                        (always)
//   s' = target_lo + (s' - source_lo) * (target_hi - target_lo) / (source_hi - source_lo)
//                                             (when an affine map is given)
//
// and the threshold is the midpoint of the k-th and (k+1)-th largest
// transformed scores.
//
// Presets:
//   covertype  class relative frequency / 10, k = 3
//   jester     mean rating in [-10, 10], / 10 then [-1, 1] -> [0, 1], k = 25
//              (net effect mu = r / 20 + 1/2)
//   movielens  mean rating in [0, 5], / 100, k = 168

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lilhdoc/core.hpp"
#include "lilhdoc/instance_io.hpp"

namespace lilhdoc {

class conversion_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AffineMap {
  double source_lo = 0.0;
  double source_hi = 1.0;
  double target_lo = 0.0;
  double target_hi = 1.0;

  double operator()(double x) const {
    return target_lo + (x - source_lo) * (target_hi - target_lo) / (source_hi - source_lo);
  }
};

struct TransformSpec {
  double divide_by = 1.0;
  std::optional<AffineMap> affine;
  std::size_t threshold_rank = 1;

  double apply(double score) const {
    const double scaled = score / divide_by;
    return affine ? (*affine)(scaled) : scaled;
  }
};

inline TransformSpec covertype_preset() { return {10.0, std::nullopt, 3}; }
inline TransformSpec jester_preset() { return {10.0, AffineMap{-1.0, 1.0, 0.0, 1.0}, 25}; }
inline TransformSpec movielens_preset() { return {100.0, std::nullopt, 168}; }

inline std::optional<TransformSpec> preset_by_name(std::string_view name) {
  if (name == "covertype") return covertype_preset();
  if (name == "jester") return jester_preset();
  if (name == "movielens") return movielens_preset();
  return std::nullopt;
}

/// Midpoint of the k-th and (k+1)-th largest values (k is one-based).
inline double rank_threshold(std::span<const double> values, std::size_t k) {
  if (k < 1 || k >= values.size()) {
    throw conversion_error("threshold rank " + std::to_string(k) + " must lie in [1, " +
                           std::to_string(values.size() == 0 ? 0 : values.size() - 1) + "]");
  }
  std::vector<double> ranked(values.begin(), values.end());
  std::sort(ranked.begin(), ranked.end(), std::greater<>());
  const double upper = ranked[k - 1];
  const double lower = ranked[k];
  return upper == lower ? upper : (upper + lower) / 2.0;
}

struct Conversion {
  BanditInstance instance;
  std::vector<std::string> warnings;
};

inline Conversion convert(std::span<const double> scores, const TransformSpec& spec,
                          std::string name = {}) {
  if (scores.size() < 2) throw conversion_error("need at least two scores");
  if (!(spec.divide_by > 0.0)) throw conversion_error("divide_by must be positive");
  if (spec.affine && !(spec.affine->source_hi != spec.affine->source_lo)) {
    throw conversion_error("affine source range is empty");
  }
  const std::size_t k = spec.threshold_rank;
  if (k < 1 || k >= scores.size()) {
    throw conversion_error("threshold rank " + std::to_string(k) +
                           " must lie in [1, " + std::to_string(scores.size() - 1) + "]");
  }

  std::vector<double> means;
  means.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double m = spec.apply(scores[i]);
    if (!(m >= 0.0 && m <= 1.0)) {
      throw conversion_error("item " + std::to_string(i) + " (score " +
                             format_real(scores[i]) + ") maps to " + format_real(m) +
                             ", outside [0, 1]");
    }
    means.push_back(m);
  }

  const double threshold = rank_threshold(means, k);
  std::vector<std::string> warnings;
  if (std::count(means.begin(), means.end(), threshold) >= 2) {
    warnings.push_back("items ranked " + std::to_string(k) + " and " +
                       std::to_string(k + 1) +
                       " tie; threshold equals their score (zero gap)");
  }
  try {
    return {BanditInstance(std::move(means), threshold, std::move(name)),
            std::move(warnings)};
  } catch (const config_error& e) {
    throw conversion_error(std::string("converted instance is invalid: ") + e.what());
  }
}

/// How rows of a delimited file become one score per item.
struct ScoreSource {
  enum class Mode {
    Column,          // each row is an item; score = value in `column`
    MeanByKey,       // score = mean of `column` over rows sharing `key_column`
    ClassFrequency,  // `column` holds class labels; score = relative frequency
  };

  char delimiter = ',';
  bool skip_header = false;
  std::size_t column = 0;      // zero-based
  std::size_t key_column = 0;  // MeanByKey only
  Mode mode = Mode::Column;
};

namespace detail {

inline std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto pos = line.find(delimiter);
    fields.push_back(trim(line.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    line.remove_prefix(pos + 1);
  }
  return fields;
}

}  // namespace detail

/// Reads item scores. Items keep first-appearance order; class labels are
/// ordered numerically when all parse as numbers, lexically otherwise.
inline std::vector<double> load_scores(std::istream& in, const ScoreSource& source,
                                       const std::string& name = "<input>") {
  std::vector<double> scores;
  std::vector<std::string> keys;
  std::unordered_map<std::string, std::pair<double, std::size_t>> by_key;
  std::map<std::string, std::size_t> class_counts;
  std::size_t rows = 0;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (line_no == 1 && source.skip_header) continue;
    const std::string_view line = detail::trim(raw);
    if (line.empty()) continue;
    const auto fields = detail::split(line, source.delimiter);
    const auto field = [&](std::size_t c) {
      if (c >= fields.size()) {
        throw conversion_error(name + ":" + std::to_string(line_no) + ": no column " +
                               std::to_string(c) + " (row has " +
                               std::to_string(fields.size()) + ")");
      }
      return fields[c];
    };
    ++rows;

    if (source.mode == ScoreSource::Mode::ClassFrequency) {
      ++class_counts[std::string(field(source.column))];
      continue;
    }
    const auto value = detail::parse_real(field(source.column));
    if (!value) {
      throw conversion_error(name + ":" + std::to_string(line_no) + ": '" +
                             std::string(field(source.column)) + "' is not a number");
    }
    if (source.mode == ScoreSource::Mode::Column) {
      scores.push_back(*value);
    } else {
      const std::string key(field(source.key_column));
      auto [it, inserted] = by_key.try_emplace(key, 0.0, 0);
      if (inserted) keys.push_back(key);
      it->second.first += *value;
      ++it->second.second;
    }
  }
  if (rows == 0) throw conversion_error(name + ": no data rows");

  if (source.mode == ScoreSource::Mode::MeanByKey) {
    for (const auto& key : keys) {
      const auto& [sum, count] = by_key.at(key);
      scores.push_back(sum / static_cast<double>(count));
    }
  } else if (source.mode == ScoreSource::Mode::ClassFrequency) {
    std::vector<std::pair<std::string, std::size_t>> classes(class_counts.begin(),
                                                             class_counts.end());
    const bool numeric = std::all_of(classes.begin(), classes.end(), [](const auto& c) {
      return detail::parse_real(c.first).has_value();
    });
    if (numeric) {
      std::stable_sort(classes.begin(), classes.end(), [](const auto& a, const auto& b) {
        return *detail::parse_real(a.first) < *detail::parse_real(b.first);
      });
    }
    for (const auto& [label, count] : classes) {
      scores.push_back(static_cast<double>(count) / static_cast<double>(rows));
    }
  }
  return scores;
}

inline std::vector<double> load_scores(const std::filesystem::path& path,
                                       const ScoreSource& source) {
  std::ifstream in(path);
  if (!in) throw conversion_error("cannot open score file " + path.string());
  return load_scores(in, source, path.string());
}

}  // namespace lilhdoc
