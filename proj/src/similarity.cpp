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

#include "taxometer/similarity.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>

#include <json.hpp>

#include "taxometer/errors.hpp"
#include "taxometer/kernels.hpp"

namespace taxometer {

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

// ASCII-alphanumeric runs form tokens; bytes >= 0x80 (UTF-8 continuations
// and starts) stay inside tokens so non-ASCII words survive.
std::vector<std::string> tokenize(std::string_view label) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : lowercase(label)) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c >= 0x80) {
      cur += ch;
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

double checked_cosine(double dot, double sq_u, double sq_v) {
  if (sq_u == 0.0 || sq_v == 0.0) {
    throw MetricError("cosine: zero-norm vector");
  }
  double value = dot / (std::sqrt(sq_u) * std::sqrt(sq_v));
  return std::clamp(value, -1.0, 1.0);
}

// Sparse trigram count vector: sorted (packed trigram, count) pairs. Labels
// shorter than three bytes use one whole-label token flagged above the
// trigram key range.
struct TrigramVector {
  std::vector<std::pair<std::uint64_t, double>> counts;
  double squared_norm = 0.0;
};

TrigramVector trigram_vector(std::string_view label) {
  std::string s = lowercase(label);
  std::vector<std::uint64_t> keys;
  if (s.size() < 3) {
    std::uint64_t key = std::uint64_t{1} << 32;
    for (unsigned char c : s) key = (key << 8) | c;
    keys.push_back(key);
  } else {
    keys.reserve(s.size() - 2);
    for (std::size_t i = 0; i + 3 <= s.size(); ++i) {
      std::uint64_t key = (std::uint64_t(static_cast<unsigned char>(s[i]))
                           << 16) |
                          (std::uint64_t(static_cast<unsigned char>(s[i + 1]))
                           << 8) |
                          std::uint64_t(static_cast<unsigned char>(s[i + 2]));
      keys.push_back(key);
    }
  }
  std::sort(keys.begin(), keys.end());
  TrigramVector v;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    double count = static_cast<double>(j - i);
    v.counts.emplace_back(keys[i], count);
    v.squared_norm += count * count;
    i = j;
  }
  return v;
}

double trigram_cosine(const TrigramVector& a, const TrigramVector& b) {
  double dot = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.counts.size() && j < b.counts.size()) {
    if (a.counts[i].first < b.counts[j].first) {
      ++i;
    } else if (a.counts[i].first > b.counts[j].first) {
      ++j;
    } else {
      dot += a.counts[i].second * b.counts[j].second;
      ++i;
      ++j;
    }
  }
  return std::clamp(
      dot / (std::sqrt(a.squared_norm) * std::sqrt(b.squared_norm)), 0.0,
      1.0);
}

std::vector<std::string_view> whitespace_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

}  // namespace

EmbeddingTable load_word_vectors(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++line_no;
    return true;
  };

  if (!next_line()) {
    throw ParseError("word vectors: empty input, expected '<count> <dim>'");
  }
  auto header = whitespace_fields(line);
  std::size_t count = 0, dim = 0;
  auto parse_size = [&](std::string_view f, std::size_t& out) {
    auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), out);
    return ec == std::errc() && p == f.data() + f.size();
  };
  if (header.size() != 2 || !parse_size(header[0], count) ||
      !parse_size(header[1], dim) || dim == 0) {
    throw ParseError("word vectors: bad header on line 1, expected "
                     "'<count> <dim>'");
  }

  EmbeddingTable table;
  table.dimension = dim;
  table.entries.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    if (!next_line()) {
      throw ParseError("word vectors: header declared " +
                       std::to_string(count) + " entries but input ends at " +
                       std::to_string(r));
    }
    auto fields = whitespace_fields(line);
    if (fields.size() != dim + 1) {
      throw ParseError("word vectors: line " + std::to_string(line_no) +
                       ": expected token + " + std::to_string(dim) +
                       " components, got " + std::to_string(fields.size()));
    }
    std::string token = lowercase(fields[0]);
    std::vector<float> vec(dim);
    for (std::size_t c = 0; c < dim; ++c) {
      std::string_view f = fields[c + 1];
      float value = 0.0f;
      auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
      if (ec != std::errc() || p != f.data() + f.size()) {
        throw ParseError("word vectors: line " + std::to_string(line_no) +
                         ": non-numeric component '" + std::string(f) + "'");
      }
      vec[c] = value;
    }
    if (!table.entries.emplace(std::move(token), std::move(vec)).second) {
      throw ParseError("word vectors: line " + std::to_string(line_no) +
                       ": duplicate token '" + lowercase(fields[0]) + "'");
    }
  }
  if (next_line() && !whitespace_fields(line).empty()) {
    throw ParseError("word vectors: trailing data on line " +
                     std::to_string(line_no) + " beyond the declared " +
                     std::to_string(count) + " entries");
  }
  return table;
}

std::optional<std::vector<float>> embed_label(std::string_view label,
                                              const EmbeddingTable& table) {
  std::vector<const std::vector<float>*> hits;
  for (const std::string& token : tokenize(label)) {
    auto it = table.entries.find(token);
    if (it != table.entries.end()) hits.push_back(&it->second);
  }
  if (hits.empty()) return std::nullopt;
  std::vector<float> mean(table.dimension, 0.0f);
  for (const auto* vec : hits) {
    for (std::size_t i = 0; i < table.dimension; ++i) mean[i] += (*vec)[i];
  }
  float inv = 1.0f / static_cast<float>(hits.size());
  for (float& x : mean) x *= inv;
  return mean;
}

double cosine(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) {
    throw MetricError("cosine: dimension mismatch (" +
                      std::to_string(u.size()) + " vs " +
                      std::to_string(v.size()) + ")");
  }
  return checked_cosine(kernels::dot(u, v), kernels::squared_norm(u),
                        kernels::squared_norm(v));
}

double trigram_similarity(std::string_view a, std::string_view b) {
  if (lowercase(a) == lowercase(b)) return 1.0;
  return trigram_cosine(trigram_vector(a), trigram_vector(b));
}

namespace {

// Generic fallback: re-derives label state for every pair.
class PairwisePreparedScorer final : public PreparedScorer {
 public:
  PairwisePreparedScorer(const SimilarityBackend& backend,
                         std::vector<std::string> labels)
      : backend_(backend), labels_(std::move(labels)) {}

  bool embeddable(std::size_t i) const override {
    return backend_.score(labels_[i], labels_[i]).has_value();
  }
  double score(std::size_t i, std::size_t j) const override {
    auto s = backend_.score(labels_[i], labels_[j]);
    if (!s) {
      throw MetricError("backend '" + backend_.name() +
                        "' failed to score '" + labels_[i] + "' vs '" +
                        labels_[j] + "'");
    }
    return *s;
  }

 private:
  const SimilarityBackend& backend_;
  std::vector<std::string> labels_;
};

class TrigramPreparedScorer final : public PreparedScorer {
 public:
  explicit TrigramPreparedScorer(std::vector<std::string> labels) {
    normalized_.reserve(labels.size());
    vectors_.reserve(labels.size());
    for (const std::string& label : labels) {
      normalized_.push_back(lowercase(label));
      vectors_.push_back(trigram_vector(label));
    }
  }

  bool embeddable(std::size_t) const override { return true; }
  double score(std::size_t i, std::size_t j) const override {
    if (normalized_[i] == normalized_[j]) return 1.0;
    return trigram_cosine(vectors_[i], vectors_[j]);
  }

 private:
  std::vector<std::string> normalized_;
  std::vector<TrigramVector> vectors_;
};

class VectorPreparedScorer final : public PreparedScorer {
 public:
  VectorPreparedScorer(const EmbeddingTable& table,
                       std::vector<std::string> labels) {
    embeddings_.reserve(labels.size());
    norms_.reserve(labels.size());
    for (const std::string& label : labels) {
      auto e = embed_label(label, table);
      double sq = e ? kernels::squared_norm(*e) : 0.0;
      // An exactly cancelling token mix has no direction to compare.
      if (e && sq > 0.0) {
        embeddings_.push_back(std::move(*e));
        norms_.push_back(sq);
      } else {
        embeddings_.emplace_back();
        norms_.push_back(0.0);
      }
    }
  }

  bool embeddable(std::size_t i) const override { return norms_[i] > 0.0; }
  double score(std::size_t i, std::size_t j) const override {
    return checked_cosine(kernels::dot(embeddings_[i], embeddings_[j]),
                          norms_[i], norms_[j]);
  }

 private:
  std::vector<std::vector<float>> embeddings_;
  std::vector<double> norms_;
};

class LookupPreparedScorer final : public PreparedScorer {
 public:
  LookupPreparedScorer(const LookupBackend& backend,
                       std::vector<std::string> labels)
      : backend_(backend), labels_(std::move(labels)) {}

  bool embeddable(std::size_t) const override { return true; }
  double score(std::size_t i, std::size_t j) const override {
    auto s = backend_.score(labels_[i], labels_[j]);
    if (!s) {
      throw MetricError("lookup table has no score for '" + labels_[i] +
                        "' vs '" + labels_[j] + "' and no default");
    }
    return *s;
  }

 private:
  const LookupBackend& backend_;
  std::vector<std::string> labels_;
};

}  // namespace

std::unique_ptr<PreparedScorer> SimilarityBackend::prepare(
    std::vector<std::string> labels) const {
  return std::make_unique<PairwisePreparedScorer>(*this, std::move(labels));
}

std::optional<double> TrigramBackend::score(std::string_view a,
                                            std::string_view b) const {
  return trigram_similarity(a, b);
}

std::unique_ptr<PreparedScorer> TrigramBackend::prepare(
    std::vector<std::string> labels) const {
  return std::make_unique<TrigramPreparedScorer>(std::move(labels));
}

std::optional<double> VectorBackend::score(std::string_view a,
                                           std::string_view b) const {
  auto ea = embed_label(a, table_);
  auto eb = embed_label(b, table_);
  if (!ea || !eb) return std::nullopt;
  double sa = kernels::squared_norm(*ea);
  double sb = kernels::squared_norm(*eb);
  if (sa == 0.0 || sb == 0.0) return std::nullopt;
  if (lowercase(a) == lowercase(b)) return 1.0;
  return checked_cosine(kernels::dot(*ea, *eb), sa, sb);
}

std::unique_ptr<PreparedScorer> VectorBackend::prepare(
    std::vector<std::string> labels) const {
  return std::make_unique<VectorPreparedScorer>(table_, std::move(labels));
}

void LookupBackend::set_pair(std::string_view a, std::string_view b,
                             double score) {
  std::pair<std::string, std::string> key{std::string(a), std::string(b)};
  if (key.second < key.first) std::swap(key.first, key.second);
  pairs_[std::move(key)] = score;
}

std::optional<double> LookupBackend::score(std::string_view a,
                                           std::string_view b) const {
  if (a == b) return 1.0;
  std::pair<std::string, std::string> key{std::string(a), std::string(b)};
  if (key.second < key.first) std::swap(key.first, key.second);
  auto it = pairs_.find(key);
  if (it != pairs_.end()) return it->second;
  return default_score_;
}

std::unique_ptr<PreparedScorer> LookupBackend::prepare(
    std::vector<std::string> labels) const {
  return std::make_unique<LookupPreparedScorer>(*this, std::move(labels));
}

LookupBackend load_lookup_table(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("lookup table: malformed JSON: ") +
                     e.what());
  }
  if (!doc.is_object() || !doc.contains("pairs") ||
      !doc["pairs"].is_array()) {
    throw ParseError("lookup table: expected object with a \"pairs\" array");
  }
  LookupBackend backend;
  if (doc.contains("default")) {
    if (!doc["default"].is_number()) {
      throw ParseError("lookup table: \"default\" must be a number");
    }
    backend.set_default(doc["default"].get<double>());
  }
  for (const auto& entry : doc["pairs"]) {
    if (!entry.is_array() || entry.size() != 3 || !entry[0].is_string() ||
        !entry[1].is_string() || !entry[2].is_number()) {
      throw ParseError(
          "lookup table: each pair must be [label_a, label_b, score]");
    }
    backend.set_pair(entry[0].get<std::string>(),
                     entry[1].get<std::string>(), entry[2].get<double>());
  }
  return backend;
}

}  // namespace taxometer
