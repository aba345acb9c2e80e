#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mlstrat/dataset.hpp"
#include "mlstrat/error.hpp"

namespace mlstrat {

// Canonical sparse label format:
//
//   <n_samples> <n_labels>
//   <label indices of sample 0, whitespace separated>
//   ...
//
// One line per sample; an empty line is a sample without labels.

namespace canonical_detail {

inline std::vector<std::size_t> read_integers(std::string_view line, std::size_t line_no) {
  std::vector<std::size_t> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t end = i;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
    const auto token = line.substr(i, end - i);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
      throw ParseError(line_no, "'" + std::string(token) + "' is not a non-negative integer");
    out.push_back(value);
    i = end;
  }
  return out;
}

}  // namespace canonical_detail

inline MultiLabelDataset parse_canonical(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  // A trailing newline terminates the last line rather than opening a new one.
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw ParseError(1, "missing '<n_samples> <n_labels>' header");

  const auto header = canonical_detail::read_integers(lines[0], 1);
  if (header.size() != 2) throw ParseError(1, "header must be '<n_samples> <n_labels>'");
  const std::size_t n = header[0];
  const std::size_t n_labels = header[1];
  if (lines.size() - 1 != n)
    throw ParseError(lines.size(), "expected " + std::to_string(n) + " sample lines, found " +
                                       std::to_string(lines.size() - 1));

  std::vector<std::vector<LabelIndex>> labels(n);
  for (std::size_t s = 0; s < n; ++s) {
    const auto line_no = s + 2;
    for (auto v : canonical_detail::read_integers(lines[s + 1], line_no)) {
      if (v >= n_labels)
        throw ParseError(line_no, "label " + std::to_string(v) + " outside [0, " + std::to_string(n_labels) + ")");
      labels[s].push_back(static_cast<LabelIndex>(v));
    }
    std::sort(labels[s].begin(), labels[s].end());
    if (std::adjacent_find(labels[s].begin(), labels[s].end()) != labels[s].end())
      throw ParseError(line_no, "label listed twice");
  }
  return MultiLabelDataset(n_labels, std::move(labels));
}

inline MultiLabelDataset parse_canonical(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_canonical(std::string_view(text));
}

inline void write_canonical(const MultiLabelDataset& d, std::ostream& out) {
  out << d.n_samples() << ' ' << d.n_labels() << '\n';
  for (const auto& ys : d.label_sets()) {
    for (std::size_t i = 0; i < ys.size(); ++i) out << (i ? " " : "") << ys[i];
    out << '\n';
  }
}

inline std::string to_canonical(const MultiLabelDataset& d) {
  std::ostringstream out;
  write_canonical(d, out);
  return out.str();
}

}  // namespace mlstrat
