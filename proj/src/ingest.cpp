/*
 * Copyright 2026 The Taxometer Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "taxometer/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "taxometer/csv.hpp"
#include "taxometer/errors.hpp"

namespace taxometer {

namespace {

constexpr const char* kEdgeHeader[] = {"dimension", "code", "parent_code",
                                       "label"};

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool all_digits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) {
           return std::isdigit(c);
         });
}

}  // namespace

void CodeSchemeSpec::validate() const {
  if (rule == Rule::prefix) {
    if (prefix_widths.empty()) {
      throw ConfigError("code scheme: prefix rule needs at least one width");
    }
    for (std::size_t i = 0; i + 1 < prefix_widths.size(); ++i) {
      if (prefix_widths[i] >= prefix_widths[i + 1]) {
        throw ConfigError(
            "code scheme: prefix widths must be strictly increasing");
      }
    }
    if (prefix_widths.front() == 0) {
      throw ConfigError("code scheme: prefix widths must be positive");
    }
  } else {
    if (delimiters.empty() || delimiters.size() > 2) {
      throw ConfigError("code scheme: delimited rule needs 1 or 2 delimiters");
    }
    for (const std::string& d : delimiters) {
      if (d.empty()) throw ConfigError("code scheme: empty delimiter");
    }
  }
  if (dimension_rule == DimensionRule::single && single_dimension_id.empty()) {
    throw ConfigError("code scheme: single dimension id must not be empty");
  }
}

std::pair<std::vector<Edge>, IngestReport> parse_edge_csv(std::istream& in) {
  auto records = csv::read(in);
  if (records.empty()) {
    throw ParseError("edge CSV: empty input, expected header "
                     "dimension,code,parent_code,label");
  }
  const auto& header = records.front().fields;
  if (header.size() != 4 || header[0] != kEdgeHeader[0] ||
      header[1] != kEdgeHeader[1] || header[2] != kEdgeHeader[2] ||
      header[3] != kEdgeHeader[3]) {
    throw ParseError("edge CSV: bad header on line " +
                     std::to_string(records.front().line) +
                     ", expected dimension,code,parent_code,label");
  }

  std::vector<Edge> edges;
  IngestReport report;
  std::set<std::tuple<std::string, std::string, std::string, std::string>>
      seen;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != 4) {
      throw ParseError("edge CSV: line " + std::to_string(rec.line) +
                       ": expected 4 fields, got " +
                       std::to_string(rec.fields.size()));
    }
    auto key = std::make_tuple(rec.fields[0], rec.fields[1], rec.fields[2],
                               rec.fields[3]);
    if (!seen.insert(key).second) {
      report.warnings.push_back(
          {rec.line, rec.fields[1], "duplicated row dropped"});
      continue;
    }
    if (rec.fields[3].empty()) {
      report.warnings.push_back({rec.line, rec.fields[1], "blank label"});
    }
    edges.push_back(
        {rec.fields[0], rec.fields[1], rec.fields[2], rec.fields[3]});
  }
  return {std::move(edges), std::move(report)};
}

std::vector<std::pair<std::string, std::string>> read_code_scheme_rows(
    std::istream& in) {
  auto records = csv::read(in);
  if (records.empty()) {
    throw ParseError("code scheme CSV: empty input, expected header "
                     "code,label");
  }
  const auto& header = records.front().fields;
  if (header.size() != 2 || header[0] != "code" || header[1] != "label") {
    throw ParseError("code scheme CSV: bad header on line " +
                     std::to_string(records.front().line) +
                     ", expected code,label");
  }
  std::vector<std::pair<std::string, std::string>> rows;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != 2) {
      throw ParseError("code scheme CSV: line " + std::to_string(rec.line) +
                       ": expected 2 fields, got " +
                       std::to_string(rec.fields.size()));
    }
    rows.emplace_back(rec.fields[0], rec.fields[1]);
  }
  return rows;
}

namespace {

// A range code "31-33": both endpoints numeric with the first-level width.
struct CodeRange {
  long low = 0;
  long high = 0;
};

std::optional<CodeRange> parse_range(std::string_view code,
                                     std::size_t first_width) {
  auto dash = code.find('-');
  if (dash == std::string_view::npos) return std::nullopt;
  std::string_view a = code.substr(0, dash);
  std::string_view b = code.substr(dash + 1);
  if (a.size() != first_width || b.size() != first_width) return std::nullopt;
  if (!all_digits(a) || !all_digits(b)) return std::nullopt;
  CodeRange r;
  std::from_chars(a.data(), a.data() + a.size(), r.low);
  std::from_chars(b.data(), b.data() + b.size(), r.high);
  if (r.low > r.high) return std::nullopt;
  return r;
}

std::vector<std::string> split_all(std::string_view s,
                                   const std::string& delim) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    auto next = s.find(delim, pos);
    if (next == std::string_view::npos) {
      parts.emplace_back(s.substr(pos));
      return parts;
    }
    parts.emplace_back(s.substr(pos, next - pos));
    pos = next + delim.size();
  }
}

// Splits per the spec's delimiter hierarchy; returns segments or empty on
// malformed input (empty segment).
std::vector<std::string> delimited_segments(std::string_view code,
                                            const CodeSchemeSpec& spec) {
  std::vector<std::string> segments;
  if (spec.delimiters.size() == 1) {
    segments = split_all(code, spec.delimiters[0]);
  } else {
    auto first = code.find(spec.delimiters[0]);
    if (first == std::string_view::npos) {
      // Single-segment code, as long as the second delimiter is absent too.
      if (code.find(spec.delimiters[1]) != std::string_view::npos) return {};
      segments.emplace_back(code);
    } else {
      segments.emplace_back(code.substr(0, first));
      auto rest = code.substr(first + spec.delimiters[0].size());
      for (auto& s : split_all(rest, spec.delimiters[1])) {
        segments.push_back(std::move(s));
      }
    }
  }
  for (const std::string& s : segments) {
    if (s.empty()) return {};
  }
  return segments;
}

std::string join_segments(const std::vector<std::string>& segments,
                          std::size_t count, const CodeSchemeSpec& spec) {
  std::string out = segments[0];
  for (std::size_t i = 1; i < count; ++i) {
    out += (i == 1 && spec.delimiters.size() > 1) ? spec.delimiters[0]
                                                  : spec.delimiters.back();
    out += segments[i];
  }
  return out;
}

}  // namespace

std::pair<std::vector<Edge>, IngestReport> parse_code_scheme(
    const std::vector<std::pair<std::string, std::string>>& rows,
    const CodeSchemeSpec& spec) {
  spec.validate();

  IngestReport report;

  struct Entry {
    std::string code;
    std::string label;
    std::size_t row = 0;       // first input row mentioning this code
    std::size_t level = 0;     // 1-based
    bool is_range = false;
    CodeRange range;
    std::vector<std::string> segments;  // delimited rule only
    bool synthesized = false;
    std::string parent;     // resolved later
    std::string dimension;  // resolved later
  };

  // Tokenize every row, trimming stray whitespace (recorded as a repair).
  std::map<std::string, Entry> entries;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t row_no = r + 1;
    std::string code = trim(rows[r].first);
    std::string label = trim(rows[r].second);
    if (code.empty()) {
      throw ParseError("code scheme: row " + std::to_string(row_no) +
                       ": empty code");
    }
    if (code != rows[r].first) {
      report.repaired.push_back({row_no, rows[r].first, code});
    }

    Entry e;
    e.code = code;
    e.label = label;
    e.row = row_no;
    if (spec.rule == CodeSchemeSpec::Rule::prefix) {
      if (auto range = parse_range(code, spec.prefix_widths.front())) {
        e.is_range = true;
        e.range = *range;
        e.level = 1;  // ranges sit at the first level
      } else {
        auto width = std::find(spec.prefix_widths.begin(),
                               spec.prefix_widths.end(), code.size());
        if (width == spec.prefix_widths.end()) {
          throw ParseError("code scheme: row " + std::to_string(row_no) +
                           ": code '" + code +
                           "' does not match any prefix width");
        }
        e.level =
            static_cast<std::size_t>(width - spec.prefix_widths.begin()) + 1;
      }
    } else {
      e.segments = delimited_segments(code, spec);
      if (e.segments.empty()) {
        throw ParseError("code scheme: row " + std::to_string(row_no) +
                         ": code '" + code +
                         "' does not match the delimiter scheme");
      }
      e.level = e.segments.size();
    }

    auto [it, inserted] = entries.emplace(code, std::move(e));
    if (!inserted) {
      if (it->second.label != label) {
        throw ParseError("code scheme: row " + std::to_string(row_no) +
                         ": code '" + code + "' already has label '" +
                         it->second.label + "', got '" + label + "'");
      }
      report.warnings.push_back({row_no, code, "duplicated row dropped"});
    }
  }

  auto prefix_of = [&](const Entry& e, std::size_t level) -> std::string {
    if (spec.rule == CodeSchemeSpec::Rule::prefix) {
      return e.code.substr(0, spec.prefix_widths[level - 1]);
    }
    return join_segments(e.segments, level, spec);
  };

  // Ranges, for adopting codes whose first-level prefix they cover.
  std::vector<const Entry*> ranges;
  for (const auto& [code, e] : entries) {
    if (e.is_range) ranges.push_back(&e);
  }
  auto covering_range = [&](const std::string& first) -> const Entry* {
    if (!all_digits(first)) return nullptr;
    long v = 0;
    std::from_chars(first.data(), first.data() + first.size(), v);
    for (const Entry* r : ranges) {  // entries map order: lowest code wins
      if (v >= r->range.low && v <= r->range.high) return r;
    }
    return nullptr;
  };

  // Resolve parents, synthesizing every missing intermediate ancestor.
  std::vector<Entry> synthesized;
  auto synthesize = [&](const Entry& child, std::size_t level) -> Entry {
    Entry s;
    s.code = prefix_of(child, level);
    s.label = s.code;
    s.row = child.row;
    s.level = level;
    if (spec.rule == CodeSchemeSpec::Rule::delimited) {
      s.segments.assign(child.segments.begin(),
                        child.segments.begin() + level);
    }
    s.synthesized = true;
    report.warnings.push_back(
        {child.row, s.code,
         "synthesized missing ancestor (required by '" + child.code + "')"});
    return s;
  };

  std::vector<std::string> order;
  for (const auto& [code, e] : entries) order.push_back(code);
  for (const std::string& code : order) {
    Entry* e = &entries.at(code);
    while (e->level > 1 && e->parent.empty()) {
      // Nearest existing strictly-shorter prefix.
      std::size_t found_level = 0;
      for (std::size_t lvl = e->level - 1; lvl >= 1; --lvl) {
        if (entries.count(prefix_of(*e, lvl)) > 0) {
          found_level = lvl;
          break;
        }
        if (lvl == 1) break;
      }
      if (found_level == e->level - 1) {
        e->parent = prefix_of(*e, found_level);
        break;
      }
      // The immediate ancestor is missing. A covering range can stand in
      // for a missing first-level ancestor; anything else is synthesized.
      if (found_level == 0 && e->level == 2) {
        if (const Entry* r = covering_range(prefix_of(*e, 1))) {
          e->parent = r->code;
          break;
        }
      }
      std::size_t synth_level = e->level - 1;
      Entry s = synthesize(*e, synth_level);
      std::string synth_code = s.code;
      e->parent = synth_code;  // std::map references stay valid on insert
      auto synth_it = entries.emplace(synth_code, std::move(s)).first;
      e = &synth_it->second;  // continue resolving the new ancestor
    }
  }

  // Dimension assignment. Level-1 entries are roots of their tree; under a
  // single-dimension rule a super-root is synthesized when several exist.
  std::vector<std::string> top;
  for (const auto& [code, e] : entries) {
    if (e.level == 1) top.push_back(code);
  }

  std::vector<Edge> edges;
  if (spec.dimension_rule == CodeSchemeSpec::DimensionRule::single) {
    std::string root_code;
    if (top.size() == 1) {
      root_code = top.front();
    } else {
      root_code = spec.single_dimension_id;
      if (entries.count(root_code) > 0) {
        throw ParseError("code scheme: synthesized root code '" + root_code +
                         "' collides with a data code");
      }
      report.warnings.push_back(
          {0, root_code, "synthesized dimension root over " +
                             std::to_string(top.size()) + " top-level codes"});
      edges.push_back({spec.single_dimension_id, root_code, "", root_code});
      for (const std::string& code : top) {
        entries.at(code).parent = root_code;
      }
    }
    for (auto& [code, e] : entries) e.dimension = spec.single_dimension_id;
  } else {
    // first_segment: walk each entry up to its level-1 ancestor.
    for (auto& [code, e] : entries) {
      const Entry* cur = &e;
      while (cur->level > 1) cur = &entries.at(cur->parent);
      e.dimension = cur->code;
    }
  }

  for (const auto& [code, e] : entries) {
    edges.push_back({e.dimension, e.code, e.parent, e.label});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.dimension, a.code) < std::tie(b.dimension, b.code);
  });
  return {std::move(edges), std::move(report)};
}

namespace {

void walk_json_tree(const nlohmann::json& node, const std::string& path,
                    const std::string& dimension,
                    const std::string& parent_code, std::vector<Edge>& edges,
                    std::string* root_code) {
  if (!node.is_object()) {
    throw ParseError("JSON tree: expected object at " +
                     (path.empty() ? std::string("/") : path));
  }
  auto code_it = node.find("code");
  if (code_it == node.end() || !code_it->is_string()) {
    throw ParseError("JSON tree: missing or non-string \"code\" at " +
                     (path.empty() ? std::string("/") : path));
  }
  std::string code = code_it->get<std::string>();
  std::string label = code;
  if (auto name_it = node.find("name");
      name_it != node.end() && name_it->is_string()) {
    label = name_it->get<std::string>();
  }
  std::string dim = dimension.empty() ? code : dimension;
  if (root_code != nullptr) *root_code = code;
  edges.push_back({dim, code, parent_code, label});

  auto children_it = node.find("children");
  if (children_it == node.end()) return;
  if (!children_it->is_array()) {
    throw ParseError("JSON tree: \"children\" is not an array at " +
                     (path.empty() ? std::string("/") : path));
  }
  for (std::size_t i = 0; i < children_it->size(); ++i) {
    walk_json_tree((*children_it)[i], path + "/children/" + std::to_string(i),
                   dim, code, edges, nullptr);
  }
}

}  // namespace

std::pair<std::vector<Edge>, IngestReport> parse_json_tree(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("JSON tree: malformed document: ") +
                     e.what());
  }

  std::vector<Edge> edges;
  IngestReport report;
  if (doc.is_array()) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      std::string root_code;
      walk_json_tree(doc[i], "/" + std::to_string(i), "", "", edges,
                     &root_code);
    }
  } else {
    std::string root_code;
    walk_json_tree(doc, "", "", "", edges, &root_code);
  }
  return {std::move(edges), std::move(report)};
}

void serialize_canonical(const Taxonomy& taxonomy, std::ostream& out) {
  std::vector<std::string> header(std::begin(kEdgeHeader),
                                  std::end(kEdgeHeader));
  csv::write_record(out, header);
  for (const Edge& e : to_edges(taxonomy)) {
    std::vector<std::string> fields{e.dimension, e.code, e.parent_code,
                                    e.label};
    csv::write_record(out, fields);
  }
}

std::string serialize_canonical(const Taxonomy& taxonomy) {
  std::ostringstream out;
  serialize_canonical(taxonomy, out);
  return out.str();
}

}  // namespace taxometer
