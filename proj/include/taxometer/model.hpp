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

#ifndef TAXOMETER_MODEL_HPP
#define TAXOMETER_MODEL_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace taxometer {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// One raw parent-child relation, as produced by the ingest parsers.
/// An empty parent_code marks the root of its dimension.
struct Edge {
  std::string dimension;
  std::string code;
  std::string parent_code;
  std::string label;
};

struct Node {
  std::string code;
  std::string label;
  std::string dimension;
  NodeId parent = kNoNode;  // kNoNode for dimension roots
  std::size_t depth = 0;    // edges from the dimension root
  std::vector<NodeId> children;  // input order

  bool is_root() const { return parent == kNoNode; }
  bool is_leaf() const { return children.empty(); }
};

/// Derived, never stored: a leaf is a characteristic, an intermediate node a
/// category. Dimension roots are neither.
enum class NodeKind { root, category, characteristic };

struct Dimension {
  std::string id;
  std::string label;  // the root node's label
  NodeId root = kNoNode;
};

struct ConstructCounts {
  std::size_t dimensions = 0;
  std::size_t categories = 0;       // intermediate nodes, roots excluded
  std::size_t characteristics = 0;  // leaves, roots excluded
  std::size_t max_depth = 0;

  bool operator==(const ConstructCounts&) const = default;
};

/// The leaf children sharing one parent. Non-leaf siblings are not members.
struct LeafGroup {
  std::string parent_code;
  std::vector<NodeId> members;  // sorted by code
};

/// Immutable forest of single-parent trees. Construct via build_forest();
/// safe to share read-only across threads afterwards.
class Taxonomy {
 public:
  /// Validates and assembles the forest from an edge list (any edge order).
  /// Throws ValidationError listing every violation: duplicate codes,
  /// orphans, cycles, multiple roots in one dimension, empty labels.
  static Taxonomy build_forest(const std::vector<Edge>& edges,
                               std::string name = {},
                               std::string version = {});

  const std::string& name() const { return name_; }
  const std::string& version() const { return version_; }
  const std::vector<Dimension>& dimensions() const { return dimensions_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(NodeId id) const { return nodes_[id]; }
  std::size_t node_count() const { return nodes_.size(); }

  /// Node lookup by code; nullptr when absent.
  const Node* find(std::string_view code) const;
  NodeKind kind(NodeId id) const;

  /// Copy restricted to the given dimension ids (empty include = all),
  /// minus the excluded ones. Unknown ids in either list are an error.
  Taxonomy filter_dimensions(const std::vector<std::string>& include,
                             const std::vector<std::string>& exclude) const;

 private:
  Taxonomy() = default;

  std::string name_;
  std::string version_;
  std::vector<Node> nodes_;
  std::vector<Dimension> dimensions_;
  std::unordered_map<std::string, NodeId> by_code_;
};

ConstructCounts counts(const Taxonomy& taxonomy);

/// One group per parent with at least one leaf child, ordered by parent code.
std::vector<LeafGroup> leaf_groups(const Taxonomy& taxonomy);

/// Edge list of the taxonomy, sorted by (dimension, code).
std::vector<Edge> to_edges(const Taxonomy& taxonomy);

/// Order-insensitive structural equality: same dimensions, codes, labels and
/// parent relations. Sibling and dimension order do not matter.
bool structurally_equal(const Taxonomy& a, const Taxonomy& b);

}  // namespace taxometer

#endif  // TAXOMETER_MODEL_HPP
