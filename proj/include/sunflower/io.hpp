#pragma once

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sunflower/family.hpp"
#include "sunflower/numeric.hpp"
#include "sunflower/split.hpp"

namespace sunflower {

using Json = nlohmann::ordered_json;

/// Malformed family document; the message names the line or field.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FamilyDocument {
  SetFamily family;
  std::optional<Split> split;
};

namespace detail {

inline int line_of(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

inline int read_int(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) throw FormatError("field '" + field + "': expected an integer, got " + j.dump());
  return j.get<int>();
}

inline ElementSet read_labels(const Json& j, int n, const std::string& field) {
  if (!j.is_array()) throw FormatError("field '" + field + "': expected a list of element labels");
  ElementSet s;
  int previous = 0;
  for (std::size_t p = 0; p < j.size(); ++p) {
    const std::string where = field + "[" + std::to_string(p) + "]";
    const int label = read_int(j[p], where);
    if (label < 1 || label > n) throw FormatError("field '" + where + "': label " + std::to_string(label) + " outside 1.." + std::to_string(n));
    if (label <= previous) throw FormatError("field '" + field + "': labels must be strictly increasing");
    previous = label;
    s.insert(label - 1);
  }
  return s;
}

inline Rational read_weight(const Json& j, const std::string& field) {
  try {
    if (j.is_number_integer()) return Rational{BigInt{j.get<long long>()}};
    if (j.is_number_unsigned()) return Rational{BigInt{j.get<unsigned long long>()}};
    if (j.is_number_float()) {
      const double v = j.get<double>();
      if (!std::isfinite(v)) throw FormatError("field '" + field + "': weight must be finite");
      return exact_rational(v);
    }
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError("field '" + field + "': " + e.what());
  }
  throw FormatError("field '" + field + "': expected a number or a \"p/q\" string");
}

inline Json labels_json(const ElementSet& s) { return Json(s.labels()); }

inline Json weight_json(const Rational& w) {
  if (denominator(w) == 1 && abs(numerator(w)) <= BigInt{std::numeric_limits<long long>::max()})
    return Json(numerator(w).convert_to<long long>());
  return Json(to_string(w));
}

}  // namespace detail

/**
 * Reads a family document: {"n", "m", "sets", optional "weights", optional
 * "split"}, with 1-based labels. A document wrapped as {"family": {...}}
 * (as emitted in structured reports) is accepted too.
 */
inline FamilyDocument family_from_json(const Json& root) {
  const Json& doc = root.is_object() && root.contains("family") && root["family"].is_object() ? root["family"] : root;
  if (!doc.is_object()) throw FormatError("family document must be an object");
  for (const char* key : {"n", "m", "sets"})
    if (!doc.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  const int n = detail::read_int(doc["n"], "n");
  const int m = detail::read_int(doc["m"], "m");
  if (n < 1 || n > kMaxElements) throw FormatError("field 'n': " + std::to_string(n) + " outside 1.." + std::to_string(kMaxElements));
  if (m < 0 || m > n) throw FormatError("field 'm': " + std::to_string(m) + " outside 0..n");
  const Json& sets_json = doc["sets"];
  if (!sets_json.is_array()) throw FormatError("field 'sets': expected a list of sets");

  std::vector<ElementSet> sets;
  for (std::size_t i = 0; i < sets_json.size(); ++i) {
    const std::string where = "sets[" + std::to_string(i) + "]";
    ElementSet s = detail::read_labels(sets_json[i], n, where);
    if (s.size() != m) throw FormatError("field '" + where + "': has " + std::to_string(s.size()) + " elements, expected m=" + std::to_string(m));
    sets.push_back(s);
  }
  std::optional<std::vector<Rational>> weights;
  if (doc.contains("weights") && !doc["weights"].is_null()) {
    const Json& w = doc["weights"];
    if (!w.is_array()) throw FormatError("field 'weights': expected a list");
    if (w.size() != sets.size())
      throw FormatError("field 'weights': " + std::to_string(w.size()) + " entries for " + std::to_string(sets.size()) + " sets");
    weights.emplace();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::string where = "weights[" + std::to_string(i) + "]";
      Rational value = detail::read_weight(w[i], where);
      if (value < 0) throw FormatError("field '" + where + "': weight must be nonnegative");
      weights->push_back(value);
    }
  }
  std::optional<Split> split;
  if (doc.contains("split") && !doc["split"].is_null()) {
    const Json& sj = doc["split"];
    if (!sj.is_array()) throw FormatError("field 'split': expected a list of strips");
    std::vector<ElementSet> strips;
    for (std::size_t j = 0; j < sj.size(); ++j) strips.push_back(detail::read_labels(sj[j], n, "split[" + std::to_string(j) + "]"));
    try {
      split.emplace(n, std::move(strips));
    } catch (const std::invalid_argument& e) {
      throw FormatError(std::string("field 'split': ") + e.what());
    }
  }
  try {
    return {SetFamily(GroundSet(n), m, std::move(sets), std::move(weights)), std::move(split)};
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("field 'sets': ") + e.what());
  }
}

inline FamilyDocument parse_family(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError("line " + std::to_string(detail::line_of(text, e.byte == 0 ? 0 : e.byte - 1)) + ": " + e.what());
  }
  return family_from_json(root);
}

inline FamilyDocument load_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_family(buffer.str());
}

inline Json split_to_json(const Split& split) {
  Json strips = Json::array();
  for (const auto& s : split.strips()) strips.push_back(detail::labels_json(s));
  return strips;
}

/// Integral weights are written as integers and the rest as "p/q" strings,
/// so reading back yields the same exact values.
inline Json family_to_json(const SetFamily& family, const std::optional<Split>& split = std::nullopt) {
  Json doc;
  doc["n"] = family.n();
  doc["m"] = family.m();
  Json sets = Json::array();
  for (const auto& s : family) sets.push_back(detail::labels_json(s));
  doc["sets"] = std::move(sets);
  if (family.weights()) {
    Json w = Json::array();
    for (const auto& value : *family.weights()) w.push_back(detail::weight_json(value));
    doc["weights"] = std::move(w);
  }
  if (split) doc["split"] = split_to_json(*split);
  return doc;
}

inline void save_family(const std::string& path, const SetFamily& family, const std::optional<Split>& split = std::nullopt) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << family_to_json(family, split).dump(2) << '\n';
}

}  // namespace sunflower
