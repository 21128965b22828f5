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

#ifndef TAXOMETER_SIMILARITY_HPP
#define TAXOMETER_SIMILARITY_HPP

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace taxometer {

/// Word vectors in the common text format: header "<count> <dim>", then one
/// token and dim reals per line. Tokens are lowercased on load.
struct EmbeddingTable {
  std::size_t dimension = 0;
  std::unordered_map<std::string, std::vector<float>> entries;
};

EmbeddingTable load_word_vectors(std::istream& in);

/// Lowercases, splits on non-alphanumeric runs, drops out-of-vocabulary
/// tokens and returns the mean of the remaining vectors. nullopt when no
/// token is in vocabulary (a data condition, not an error).
std::optional<std::vector<float>> embed_label(std::string_view label,
                                              const EmbeddingTable& table);

/// dot(u,v) / (|u| |v|), clamped into [-1, 1]. Throws MetricError on
/// dimension mismatch or a zero-norm argument.
double cosine(std::span<const float> u, std::span<const float> v);

/// Cosine over byte-trigram count vectors of the lowercased labels, in
/// [0, 1]. Labels shorter than three bytes count as one whole-label token.
double trigram_similarity(std::string_view a, std::string_view b);

/// Per-label state prepared once for a batch of labels, so a metric run
/// scores pairs without re-deriving label representations. Pure and safe
/// for concurrent score() calls.
class PreparedScorer {
 public:
  virtual ~PreparedScorer() = default;
  virtual bool embeddable(std::size_t i) const = 0;
  /// Pre: embeddable(i) && embeddable(j).
  virtual double score(std::size_t i, std::size_t j) const = 0;
};

/// Pairwise label-similarity contract: symmetric, score(a,a) = 1 for any
/// label the backend can embed; nullopt when a label cannot be embedded.
class SimilarityBackend {
 public:
  virtual ~SimilarityBackend() = default;
  virtual std::string name() const = 0;
  virtual std::optional<double> score(std::string_view a,
                                      std::string_view b) const = 0;
  virtual std::unique_ptr<PreparedScorer> prepare(
      std::vector<std::string> labels) const;
};

/// Deterministic fallback: trigram cosine. Every label is embeddable.
class TrigramBackend final : public SimilarityBackend {
 public:
  std::string name() const override { return "trigram"; }
  std::optional<double> score(std::string_view a,
                              std::string_view b) const override;
  std::unique_ptr<PreparedScorer> prepare(
      std::vector<std::string> labels) const override;
};

/// Averaged word vectors. Labels with no in-vocabulary token are not
/// embeddable.
class VectorBackend final : public SimilarityBackend {
 public:
  explicit VectorBackend(EmbeddingTable table) : table_(std::move(table)) {}
  const EmbeddingTable& table() const { return table_; }

  std::string name() const override { return "word-vectors"; }
  std::optional<double> score(std::string_view a,
                              std::string_view b) const override;
  std::unique_ptr<PreparedScorer> prepare(
      std::vector<std::string> labels) const override;

 private:
  EmbeddingTable table_;
};

/// Explicit pair table for bit-reproducible tests. Equal labels always
/// score 1; a missing pair falls back to the default score when set,
/// otherwise it is a MetricError.
class LookupBackend final : public SimilarityBackend {
 public:
  LookupBackend() = default;
  explicit LookupBackend(std::optional<double> default_score)
      : default_score_(default_score) {}

  void set_pair(std::string_view a, std::string_view b, double score);
  void set_default(std::optional<double> score) { default_score_ = score; }

  /// Applies a mapping to every stored score and the default.
  template <typename Fn>
  void transform_scores(Fn&& fn) {
    for (auto& [key, value] : pairs_) value = fn(value);
    if (default_score_) default_score_ = fn(*default_score_);
  }

  std::string name() const override { return "lookup"; }
  std::optional<double> score(std::string_view a,
                              std::string_view b) const override;
  std::unique_ptr<PreparedScorer> prepare(
      std::vector<std::string> labels) const override;

 private:
  friend LookupBackend load_lookup_table(std::istream&);
  std::map<std::pair<std::string, std::string>, double> pairs_;
  std::optional<double> default_score_;
};

/// JSON document {"default": 0.1, "pairs": [["label a","label b",0.8], ...]}
/// ("default" optional).
LookupBackend load_lookup_table(std::istream& in);

}  // namespace taxometer

#endif  // TAXOMETER_SIMILARITY_HPP
