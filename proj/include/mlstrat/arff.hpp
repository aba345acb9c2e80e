#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mlstrat/dataset.hpp"
#include "mlstrat/error.hpp"

namespace mlstrat {

enum class AttributeKind { kNumeric, kNominal, kString };

struct ArffAttribute {
  std::string name;
  AttributeKind kind = AttributeKind::kNumeric;
  std::vector<std::string> domain;  // nominal only
};

/// One data row as (attribute index, raw value) entries. Dense rows list every
/// attribute in order; sparse rows list only the values they spell out.
struct ArffRow {
  std::size_t line = 0;
  bool sparse = false;
  std::vector<std::pair<std::size_t, std::string>> values;
};

struct ArffDocument {
  std::string relation;
  std::vector<ArffAttribute> attributes;
  std::vector<ArffRow> rows;
};

/// Where the binary label attributes live. When `label_names` is non-empty the
/// labels are those attributes (matched case-insensitively) in the listed
/// order; otherwise they are the last (or first) `label_count` attributes.
struct ArffLabelLocator {
  std::size_t label_count = 0;
  bool labels_at_end = true;
  std::vector<std::string> label_names;
};

namespace arff_detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline bool iequals(std::string_view a, std::string_view b) { return lower(a) == lower(b); }

inline std::string unquote(std::string_view s, std::size_t line) {
  s = trim(s);
  if (s.size() >= 1 && (s.front() == '\'' || s.front() == '"')) {
    const char q = s.front();
    if (s.size() < 2 || s.back() != q) throw ParseError(line, "unterminated quoted value");
    std::string out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      if (s[i] == '\\' && i + 2 < s.size()) ++i;
      out.push_back(s[i]);
    }
    return out;
  }
  return std::string(s);
}

/// Splits on `sep` outside single or double quotes.
inline std::vector<std::string_view> split_unquoted(std::string_view s, char sep, std::size_t line) {
  std::vector<std::string_view> parts;
  char quote = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (quote) {
      if (c == '\\') ++i;
      else if (c == quote) quote = 0;
    } else if (c == '\'' || c == '"') {
      quote = c;
    } else if (c == sep) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  if (quote) throw ParseError(line, "unterminated quote");
  parts.push_back(s.substr(start));
  return parts;
}

/// Reads a possibly quoted leading token; returns it and the remainder.
inline std::pair<std::string, std::string_view> take_token(std::string_view s, std::size_t line) {
  s = trim(s);
  if (s.empty()) throw ParseError(line, "missing token");
  if (s.front() == '\'' || s.front() == '"') {
    const char q = s.front();
    std::size_t i = 1;
    for (; i < s.size() && s[i] != q; ++i)
      if (s[i] == '\\') ++i;
    if (i >= s.size()) throw ParseError(line, "unterminated quoted name");
    return {unquote(s.substr(0, i + 1), line), s.substr(i + 1)};
  }
  const auto end = s.find_first_of(" \t");
  if (end == std::string_view::npos) return {std::string(s), {}};
  return {std::string(s.substr(0, end)), s.substr(end)};
}

inline ArffAttribute parse_attribute(std::string_view rest, std::size_t line) {
  auto [name, type_text] = take_token(rest, line);
  const auto type = trim(type_text);
  if (type.empty()) throw ParseError(line, "attribute '" + name + "' has no type");

  ArffAttribute attr;
  attr.name = std::move(name);
  if (type.front() == '{') {
    if (type.back() != '}') throw ParseError(line, "unterminated nominal domain");
    attr.kind = AttributeKind::kNominal;
    for (auto v : split_unquoted(type.substr(1, type.size() - 2), ',', line)) {
      if (trim(v).empty()) throw ParseError(line, "empty nominal value");
      attr.domain.push_back(unquote(v, line));
    }
    return attr;
  }
  const auto t = lower(type);
  if (t == "numeric" || t == "real" || t == "integer") attr.kind = AttributeKind::kNumeric;
  else if (t == "string") attr.kind = AttributeKind::kString;
  else throw ParseError(line, "unsupported attribute type '" + std::string(type) + "'");
  return attr;
}

inline ArffRow parse_row(std::string_view text, std::size_t n_attributes, std::size_t line) {
  ArffRow row;
  row.line = line;
  if (text.front() == '{') {
    row.sparse = true;
    const auto close = text.find('}');
    if (close == std::string_view::npos) throw ParseError(line, "unterminated sparse row");
    const auto tail = trim(text.substr(close + 1));
    if (!tail.empty() && tail.front() != ',') throw ParseError(line, "unexpected text after sparse row");
    const auto body = trim(text.substr(1, close - 1));
    if (body.empty()) return row;
    std::vector<bool> seen(n_attributes, false);
    for (auto entry : split_unquoted(body, ',', line)) {
      entry = trim(entry);
      const auto gap = entry.find_first_of(" \t");
      if (gap == std::string_view::npos) throw ParseError(line, "sparse entry '" + std::string(entry) + "' lacks a value");
      const auto idx_text = entry.substr(0, gap);
      std::size_t idx = 0;
      const auto [ptr, ec] = std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), idx);
      if (ec != std::errc{} || ptr != idx_text.data() + idx_text.size())
        throw ParseError(line, "bad sparse index '" + std::string(idx_text) + "'");
      if (idx >= n_attributes)
        throw ParseError(line, "sparse index " + std::to_string(idx) + " out of range (" +
                                   std::to_string(n_attributes) + " attributes)");
      if (seen[idx]) throw ParseError(line, "sparse index " + std::to_string(idx) + " repeated");
      seen[idx] = true;
      row.values.emplace_back(idx, std::string(trim(entry.substr(gap))));
    }
    return row;
  }
  const auto parts = split_unquoted(text, ',', line);
  if (parts.size() != n_attributes)
    throw ParseError(line, "row has " + std::to_string(parts.size()) + " values, expected " +
                               std::to_string(n_attributes));
  for (std::size_t i = 0; i < parts.size(); ++i) row.values.emplace_back(i, std::string(trim(parts[i])));
  return row;
}

inline bool is_number(std::string_view s) {
  if (s.empty()) return false;
  std::string buf(s);
  char* end = nullptr;
  std::strtod(buf.c_str(), &end);
  return end == buf.c_str() + buf.size();
}

inline void check_value(const ArffAttribute& attr, std::string_view raw, std::size_t line) {
  if (raw == "?") return;
  switch (attr.kind) {
    case AttributeKind::kNumeric:
      if (!is_number(raw))
        throw ParseError(line, "value '" + std::string(raw) + "' of numeric attribute '" + attr.name +
                                   "' is not a number");
      break;
    case AttributeKind::kNominal: {
      const auto v = unquote(raw, line);
      if (std::find(attr.domain.begin(), attr.domain.end(), v) == attr.domain.end())
        throw ParseError(line, "value '" + v + "' not in the domain of '" + attr.name + "'");
      break;
    }
    case AttributeKind::kString: break;
  }
}

}  // namespace arff_detail

/// Parses the header and rows of an ARFF file, validating every value
/// against its attribute's declared type.
inline ArffDocument parse_arff_document(std::istream& in) {
  using namespace arff_detail;
  ArffDocument doc;
  bool in_data = false;
  bool saw_relation = false;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(raw);
    if (text.empty() || text.front() == '%') continue;

    if (in_data) {
      auto row = parse_row(text, doc.attributes.size(), line);
      for (const auto& [idx, value] : row.values) check_value(doc.attributes[idx], value, line);
      doc.rows.push_back(std::move(row));
      continue;
    }
    if (text.front() != '@') throw ParseError(line, "expected a header declaration");
    const auto space = text.find_first_of(" \t");
    const auto keyword = lower(text.substr(0, space));
    const auto rest = space == std::string_view::npos ? std::string_view{} : text.substr(space);
    if (keyword == "@relation") {
      doc.relation = take_token(rest, line).first;
      saw_relation = true;
    } else if (keyword == "@attribute") {
      if (!saw_relation) throw ParseError(line, "@attribute before @relation");
      doc.attributes.push_back(parse_attribute(rest, line));
    } else if (keyword == "@data") {
      if (!saw_relation) throw ParseError(line, "@data before @relation");
      if (doc.attributes.empty()) throw ParseError(line, "@data before any @attribute");
      in_data = true;
    } else {
      throw ParseError(line, "unknown declaration '" + std::string(text.substr(0, space)) + "'");
    }
  }
  if (!in_data) throw ParseError(line, "missing @data section");
  return doc;
}

/// Indices of the label attributes, in label order.
inline std::vector<std::size_t> locate_labels(const ArffDocument& doc, const ArffLabelLocator& where) {
  using arff_detail::iequals;
  std::vector<std::size_t> idx;
  const auto n_attr = doc.attributes.size();
  if (!where.label_names.empty()) {
    if (where.label_count != 0 && where.label_count != where.label_names.size())
      throw InputError("label count disagrees with the number of label names");
    for (const auto& name : where.label_names) {
      std::size_t found = n_attr;
      for (std::size_t a = 0; a < n_attr; ++a)
        if (iequals(arff_detail::trim(doc.attributes[a].name), arff_detail::trim(name))) found = a;
      if (found == n_attr) throw InputError("no attribute named '" + name + "'");
      if (std::find(idx.begin(), idx.end(), found) != idx.end())
        throw InputError("label '" + name + "' listed twice");
      idx.push_back(found);
    }
  } else {
    if (where.label_count == 0) throw InputError("label count must be at least 1");
    if (where.label_count > n_attr)
      throw InputError("asked for " + std::to_string(where.label_count) + " labels but the file has " +
                       std::to_string(n_attr) + " attributes");
    const std::size_t first = where.labels_at_end ? n_attr - where.label_count : 0;
    for (std::size_t a = 0; a < where.label_count; ++a) idx.push_back(first + a);
  }
  for (auto a : idx) {
    const auto& attr = doc.attributes[a];
    auto domain = attr.domain;
    std::sort(domain.begin(), domain.end());
    if (attr.kind != AttributeKind::kNominal || domain != std::vector<std::string>{"0", "1"})
      throw InputError("label attribute '" + attr.name + "' must be nominal with domain {0,1}");
  }
  return idx;
}

/// Reads a MULAN-style multi-label ARFF file. Features are validated and
/// dropped; values a sparse row leaves out count as 0.
inline MultiLabelDataset parse_arff(std::istream& in, const ArffLabelLocator& where) {
  const auto doc = parse_arff_document(in);
  const auto label_attr = locate_labels(doc, where);

  std::vector<std::size_t> label_of(doc.attributes.size(), SIZE_MAX);
  for (std::size_t l = 0; l < label_attr.size(); ++l) label_of[label_attr[l]] = l;

  std::vector<std::vector<LabelIndex>> labels;
  labels.reserve(doc.rows.size());
  for (const auto& row : doc.rows) {
    auto& ys = labels.emplace_back();
    for (const auto& [attr, value] : row.values) {
      if (label_of[attr] == SIZE_MAX) continue;
      const auto v = arff_detail::unquote(value, row.line);
      if (v == "1") ys.push_back(static_cast<LabelIndex>(label_of[attr]));
      else if (v != "0")
        throw ParseError(row.line, "label '" + doc.attributes[attr].name + "' has non-binary value '" + v + "'");
    }
  }
  return MultiLabelDataset(label_attr.size(), std::move(labels));
}

inline MultiLabelDataset parse_arff(std::string_view text, const ArffLabelLocator& where) {
  std::istringstream in{std::string(text)};
  return parse_arff(in, where);
}

}  // namespace mlstrat
