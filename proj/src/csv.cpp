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

#include "taxometer/csv.hpp"

#include <istream>
#include <iterator>
#include <ostream>

#include "taxometer/errors.hpp"

namespace taxometer::csv {

namespace {

void check_utf8(const std::string& text) {
  std::size_t line = 1;
  std::size_t i = 0;
  const auto fail = [&] {
    throw ParseError("invalid UTF-8 byte sequence on line " +
                     std::to_string(line));
  };
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (c == '\n') ++line;
    std::size_t extra;
    if (c < 0x80) {
      extra = 0;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      if (c < 0xC2) fail();  // overlong
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      if (c > 0xF4) fail();
    } else {
      fail();
      extra = 0;
    }
    if (i + extra >= text.size() && extra > 0) fail();
    for (std::size_t k = 1; k <= extra; ++k) {
      if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) fail();
    }
    i += extra + 1;
  }
}

}  // namespace

std::vector<Record> read(std::istream& in) {
  std::string text(std::istreambuf_iterator<char>(in),
                   std::istreambuf_iterator<char>{});
  check_utf8(text);

  std::vector<Record> records;
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    Record rec;
    rec.line = line;
    std::string field;
    bool quoted = false;
    bool record_done = false;
    while (!record_done) {
      if (quoted) {
        if (i >= text.size()) {
          throw ParseError("unterminated quoted field in record starting on "
                           "line " +
                           std::to_string(rec.line));
        }
        char c = text[i++];
        if (c == '"') {
          if (i < text.size() && text[i] == '"') {
            field += '"';
            ++i;
          } else {
            quoted = false;
          }
        } else {
          if (c == '\n') ++line;
          field += c;
        }
        continue;
      }
      if (i >= text.size()) {
        rec.fields.push_back(std::move(field));
        record_done = true;
        continue;
      }
      char c = text[i++];
      switch (c) {
        case '"':
          if (field.empty()) {
            quoted = true;
          } else {
            field += c;  // stray quote mid-field, kept verbatim
          }
          break;
        case ',':
          rec.fields.push_back(std::move(field));
          field.clear();
          break;
        case '\r':
          if (i < text.size() && text[i] == '\n') break;  // swallowed by \n
          field += c;
          break;
        case '\n':
          ++line;
          rec.fields.push_back(std::move(field));
          record_done = true;
          break;
        default:
          field += c;
      }
    }
    // Blank lines (including the one a trailing LF implies) are not records.
    if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;
    records.push_back(std::move(rec));
  }
  return records;
}

std::string escape(std::string_view field) {
  bool needs_quotes =
      field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_record(std::ostream& out, std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

}  // namespace taxometer::csv
