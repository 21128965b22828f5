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

#ifndef TAXOMETER_INGEST_HPP
#define TAXOMETER_INGEST_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "taxometer/model.hpp"

namespace taxometer {

/// How a flat list of hierarchical codes maps onto tree levels.
///
/// Prefix rule: strictly increasing code widths, one per level; a node's
/// ancestors are its shorter prefixes (NAICS-style "31", "311", "3111").
/// Range codes like "31-33" are kept as a single node and adopt every code
/// whose first segment falls inside the range.
///
/// Delimited rule: the first delimiter splits the dimension segment from the
/// rest once, the second splits the rest into per-level segments
/// ("23-13 23 11" is dimension 23, then levels 13 / 23 / 11).
struct CodeSchemeSpec {
  enum class Rule { prefix, delimited };
  enum class DimensionRule { first_segment, single };

  Rule rule = Rule::prefix;
  std::vector<std::size_t> prefix_widths;
  std::vector<std::string> delimiters;
  DimensionRule dimension_rule = DimensionRule::first_segment;
  std::string single_dimension_id = "main";

  void validate() const;  // throws ConfigError
};

struct IngestWarning {
  std::size_t row = 0;  // 1-based input row; 0 when not tied to one row
  std::string code;
  std::string message;
};

struct IngestRepair {
  std::size_t row = 0;
  std::string original_code;
  std::string repaired_code;
};

/// Data-quality findings of one parse. Empty for defect-free input.
struct IngestReport {
  std::vector<IngestWarning> warnings;
  std::vector<IngestRepair> repaired;

  bool empty() const { return warnings.empty() && repaired.empty(); }
};

/// Edge-list CSV with header "dimension,code,parent_code,label"; an empty
/// parent_code marks a root. Duplicated rows are dropped with a warning,
/// blank labels warned about. Throws ParseError on wrong column counts
/// (naming the line) and non-UTF-8 input.
std::pair<std::vector<Edge>, IngestReport> parse_edge_csv(std::istream& in);

/// Builds edges from (code, label) rows under a coding scheme. Parents are
/// the longest strictly-shorter prefix present in the input; missing
/// intermediate ancestors are synthesized (label = code) and flagged.
/// Throws ParseError when a code does not fit the scheme or one code
/// carries two labels.
std::pair<std::vector<Edge>, IngestReport> parse_code_scheme(
    const std::vector<std::pair<std::string, std::string>>& rows,
    const CodeSchemeSpec& spec);

/// Reads (code, label) rows from CSV with header "code,label".
std::vector<std::pair<std::string, std::string>> read_code_scheme_rows(
    std::istream& in);

/// Nested JSON: required "code", optional "name" and "children". The top
/// level is one tree object or an array of them (one per dimension, the
/// root code doubling as the dimension id). Errors carry the JSON path.
std::pair<std::vector<Edge>, IngestReport> parse_json_tree(std::istream& in);

/// Canonical interchange form: the edge-list CSV above, rows sorted by
/// (dimension, code), LF line endings. parse_edge_csv(serialize(t))
/// reconstructs a structurally identical taxonomy.
void serialize_canonical(const Taxonomy& taxonomy, std::ostream& out);
std::string serialize_canonical(const Taxonomy& taxonomy);

}  // namespace taxometer

#endif  // TAXOMETER_INGEST_HPP
