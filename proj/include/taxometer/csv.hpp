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

#ifndef TAXOMETER_CSV_HPP
#define TAXOMETER_CSV_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace taxometer::csv {

struct Record {
  std::size_t line = 0;  // physical line the record starts on (1-based)
  std::vector<std::string> fields;
};

/// RFC-4180 reader: double-quote escaping, embedded separators and newlines
/// inside quoted fields, LF or CRLF input. Validates that the input is
/// UTF-8 and throws ParseError (with a line number) when it is not or when
/// a quoted field is left unterminated.
std::vector<Record> read(std::istream& in);

/// Quotes the field only when it needs it (separator, quote, CR or LF).
std::string escape(std::string_view field);

/// Writes one comma-separated record terminated by LF.
void write_record(std::ostream& out, std::span<const std::string> fields);

}  // namespace taxometer::csv

#endif  // TAXOMETER_CSV_HPP
