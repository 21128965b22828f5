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

#include "taxometer/model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "taxometer/errors.hpp"

namespace taxometer {

namespace {

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

Taxonomy Taxonomy::build_forest(const std::vector<Edge>& edges,
                                std::string name, std::string version) {
  if (edges.empty()) {
    throw ValidationError("build_forest: empty edge list");
  }

  std::vector<std::string> violations;

  // Codes are unique across the whole taxonomy.
  std::unordered_map<std::string, std::size_t> index_of;
  index_of.reserve(edges.size());
  std::set<std::string> duplicates;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.code.empty()) {
      violations.push_back("empty code in dimension '" + e.dimension + "'");
      continue;
    }
    if (!index_of.emplace(e.code, i).second) duplicates.insert(e.code);
    if (e.label.empty()) {
      violations.push_back("empty label for code '" + e.code + "'");
    }
  }
  if (!duplicates.empty()) {
    violations.push_back(
        "duplicate codes: " +
        join({duplicates.begin(), duplicates.end()}, ", "));
  }

  // Dimension bookkeeping in first-appearance order.
  std::vector<std::string> dim_order;
  std::map<std::string, std::vector<std::string>> roots_per_dim;
  for (const Edge& e : edges) {
    if (std::find(dim_order.begin(), dim_order.end(), e.dimension) ==
        dim_order.end()) {
      dim_order.push_back(e.dimension);
    }
    if (e.parent_code.empty() && !e.code.empty()) {
      roots_per_dim[e.dimension].push_back(e.code);
    }
  }
  for (const auto& [dim, roots] : roots_per_dim) {
    if (roots.size() > 1) {
      auto sorted = roots;
      std::sort(sorted.begin(), sorted.end());
      violations.push_back("multiple roots in dimension '" + dim +
                           "': " + join(sorted, ", "));
    }
  }

  // Parent resolution: the parent must exist and live in the same dimension.
  for (const Edge& e : edges) {
    if (e.parent_code.empty() || e.code.empty()) continue;
    auto it = index_of.find(e.parent_code);
    if (it == index_of.end()) {
      violations.push_back("orphan '" + e.code + "': unknown parent '" +
                           e.parent_code + "'");
    } else if (edges[it->second].dimension != e.dimension) {
      violations.push_back("orphan '" + e.code + "': parent '" +
                           e.parent_code + "' belongs to dimension '" +
                           edges[it->second].dimension + "'");
    }
  }

  // Cycle detection over parent chains. 0 = unvisited, 1 = on current
  // chain, 2 = resolved.
  if (duplicates.empty()) {
    std::vector<int> state(edges.size(), 0);
    std::set<std::string> in_cycle;
    for (std::size_t start = 0; start < edges.size(); ++start) {
      if (state[start] != 0 || edges[start].code.empty()) continue;
      std::vector<std::size_t> chain;
      std::size_t cur = start;
      while (true) {
        if (state[cur] == 1) {
          // Found a loop; everything from cur's first occurrence onwards.
          auto loop_start = std::find(chain.begin(), chain.end(), cur);
          for (auto it = loop_start; it != chain.end(); ++it) {
            in_cycle.insert(edges[*it].code);
          }
          break;
        }
        if (state[cur] == 2) break;
        state[cur] = 1;
        chain.push_back(cur);
        const Edge& e = edges[cur];
        if (e.parent_code.empty()) break;
        auto it = index_of.find(e.parent_code);
        if (it == index_of.end()) break;  // orphan, reported above
        cur = it->second;
      }
      for (std::size_t i : chain) state[i] = 2;
    }
    if (!in_cycle.empty()) {
      violations.push_back(
          "cycle involving: " +
          join({in_cycle.begin(), in_cycle.end()}, ", "));
    }
  }

  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "invalid taxonomy";
    if (!name.empty()) msg << " '" << name << "'";
    msg << ":";
    for (const std::string& v : violations) msg << "\n  " << v;
    throw ValidationError(msg.str());
  }

  Taxonomy t;
  t.name_ = std::move(name);
  t.version_ = std::move(version);
  t.nodes_.reserve(edges.size());
  for (const Edge& e : edges) {
    Node n;
    n.code = e.code;
    n.label = e.label;
    n.dimension = e.dimension;
    t.by_code_.emplace(n.code, static_cast<NodeId>(t.nodes_.size()));
    t.nodes_.push_back(std::move(n));
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].parent_code.empty()) continue;
    NodeId parent = t.by_code_.at(edges[i].parent_code);
    t.nodes_[i].parent = parent;
    t.nodes_[parent].children.push_back(static_cast<NodeId>(i));
  }

  for (const std::string& dim : dim_order) {
    const auto& roots = roots_per_dim[dim];
    if (roots.empty()) {
      // Unreachable: a rootless dimension implies an orphan or a cycle.
      throw ValidationError("dimension '" + dim + "' has no root");
    }
    NodeId root = t.by_code_.at(roots.front());
    t.dimensions_.push_back({dim, t.nodes_[root].label, root});
  }

  // Depths top-down from each root.
  for (const Dimension& dim : t.dimensions_) {
    std::vector<NodeId> stack{dim.root};
    t.nodes_[dim.root].depth = 0;
    while (!stack.empty()) {
      NodeId id = stack.back();
      stack.pop_back();
      for (NodeId child : t.nodes_[id].children) {
        t.nodes_[child].depth = t.nodes_[id].depth + 1;
        stack.push_back(child);
      }
    }
  }
  return t;
}

const Node* Taxonomy::find(std::string_view code) const {
  auto it = by_code_.find(std::string(code));
  return it == by_code_.end() ? nullptr : &nodes_[it->second];
}

NodeKind Taxonomy::kind(NodeId id) const {
  const Node& n = nodes_[id];
  if (n.is_root()) return NodeKind::root;
  return n.is_leaf() ? NodeKind::characteristic : NodeKind::category;
}

Taxonomy Taxonomy::filter_dimensions(
    const std::vector<std::string>& include,
    const std::vector<std::string>& exclude) const {
  auto known = [this](const std::string& id) {
    return std::any_of(dimensions_.begin(), dimensions_.end(),
                       [&](const Dimension& d) { return d.id == id; });
  };
  for (const std::string& id : include) {
    if (!known(id)) throw ConfigError("unknown dimension in filter: " + id);
  }
  for (const std::string& id : exclude) {
    if (!known(id)) throw ConfigError("unknown dimension in filter: " + id);
  }

  auto keep = [&](const std::string& id) {
    if (!include.empty() &&
        std::find(include.begin(), include.end(), id) == include.end()) {
      return false;
    }
    return std::find(exclude.begin(), exclude.end(), id) == exclude.end();
  };

  std::vector<Edge> kept;
  for (const Node& n : nodes_) {
    if (!keep(n.dimension)) continue;
    Edge e;
    e.dimension = n.dimension;
    e.code = n.code;
    e.parent_code = n.is_root() ? std::string() : nodes_[n.parent].code;
    e.label = n.label;
    kept.push_back(std::move(e));
  }
  if (kept.empty()) {
    throw ConfigError("dimension filter removed every dimension of '" +
                      name_ + "'");
  }
  return build_forest(kept, name_, version_);
}

ConstructCounts counts(const Taxonomy& taxonomy) {
  ConstructCounts c;
  c.dimensions = taxonomy.dimensions().size();
  for (NodeId id = 0; id < taxonomy.node_count(); ++id) {
    const Node& n = taxonomy.node(id);
    c.max_depth = std::max(c.max_depth, n.depth);
    switch (taxonomy.kind(id)) {
      case NodeKind::root:
        break;
      case NodeKind::category:
        ++c.categories;
        break;
      case NodeKind::characteristic:
        ++c.characteristics;
        break;
    }
  }
  return c;
}

std::vector<LeafGroup> leaf_groups(const Taxonomy& taxonomy) {
  std::vector<LeafGroup> groups;
  for (NodeId id = 0; id < taxonomy.node_count(); ++id) {
    const Node& parent = taxonomy.node(id);
    LeafGroup g;
    g.parent_code = parent.code;
    for (NodeId child : parent.children) {
      if (taxonomy.node(child).is_leaf()) g.members.push_back(child);
    }
    if (g.members.empty()) continue;
    std::sort(g.members.begin(), g.members.end(), [&](NodeId a, NodeId b) {
      return taxonomy.node(a).code < taxonomy.node(b).code;
    });
    groups.push_back(std::move(g));
  }
  std::sort(groups.begin(), groups.end(),
            [](const LeafGroup& a, const LeafGroup& b) {
              return a.parent_code < b.parent_code;
            });
  return groups;
}

std::vector<Edge> to_edges(const Taxonomy& taxonomy) {
  std::vector<Edge> edges;
  edges.reserve(taxonomy.node_count());
  for (const Node& n : taxonomy.nodes()) {
    Edge e;
    e.dimension = n.dimension;
    e.code = n.code;
    e.parent_code =
        n.is_root() ? std::string() : taxonomy.node(n.parent).code;
    e.label = n.label;
    edges.push_back(std::move(e));
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.dimension, a.code) < std::tie(b.dimension, b.code);
  });
  return edges;
}

bool structurally_equal(const Taxonomy& a, const Taxonomy& b) {
  auto ea = to_edges(a);
  auto eb = to_edges(b);
  if (ea.size() != eb.size()) return false;
  for (std::size_t i = 0; i < ea.size(); ++i) {
    if (ea[i].dimension != eb[i].dimension || ea[i].code != eb[i].code ||
        ea[i].parent_code != eb[i].parent_code ||
        ea[i].label != eb[i].label) {
      return false;
    }
  }
  return true;
}

}  // namespace taxometer
