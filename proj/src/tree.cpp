#include "dendro/tree.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace dendro {

RootedTree::RootedTree(std::string root_label,
                       std::vector<VertexSpec> vertices,
                       std::optional<Rational> truncation_depth) {
  const std::size_t n = vertices.size() + 1;
  labels_.reserve(n);
  labels_.push_back(std::move(root_label));
  for (auto& spec : vertices) labels_.push_back(std::move(spec.label));

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t v = 0; v < n; ++v) {
    if (!index.emplace(labels_[v], v).second)
      throw std::invalid_argument("duplicate vertex label: " + labels_[v]);
  }

  parents_.assign(n, -1);
  lengths_.assign(n, Rational(0));
  children_.assign(n, {});
  for (std::size_t v = 1; v < n; ++v) {
    const auto& spec = vertices[v - 1];
    auto it = index.find(spec.parent);
    if (it == index.end())
      throw std::invalid_argument("unknown parent label: " + spec.parent);
    if (spec.edge_length <= 0)
      throw std::invalid_argument("edge length must be positive at vertex " +
                                  labels_[v]);
    parents_[v] = static_cast<int>(it->second);
    lengths_[v] = spec.edge_length;
  }
  for (std::size_t v = 1; v < n; ++v)
    children_[parents_[v]].push_back(v);

  // Depths; a parent walk longer than n vertices means a parent cycle.
  depths_.assign(n, Rational(0));
  hops_.assign(n, 0);
  std::vector<char> state(n, 0);
  state[0] = 2;
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::size_t> chain;
    std::size_t u = v;
    while (state[u] == 0) {
      state[u] = 1;
      chain.push_back(u);
      std::size_t p = static_cast<std::size_t>(parents_[u]);
      if (state[p] == 1)
        throw std::invalid_argument("parent cycle through vertex " + labels_[p]);
      u = p;
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      std::size_t p = static_cast<std::size_t>(parents_[*it]);
      depths_[*it] = depths_[p] + lengths_[*it];
      hops_[*it] = hops_[p] + 1;
      state[*it] = 2;
    }
  }

  for (std::size_t v = 1; v < n; ++v)
    if (lengths_[v] != 1) simplicial_ = false;

  if (truncation_depth) {
    for (std::size_t v = 0; v < n; ++v) {
      if (children_[v].empty() && depths_[v] != *truncation_depth)
        throw std::invalid_argument(
            "truncation tag rejected: leaf " + labels_[v] +
            " is not at depth " + format_rational(*truncation_depth));
    }
    truncation_ = std::move(truncation_depth);
  } else {
    // Uniform leaf depth is the finite witness of being a truncation; tag it
    // whenever it holds (Newick has no syntax for an explicit tag).
    std::optional<Rational> depth;
    bool uniform = true;
    for (std::size_t v = 0; v < n && uniform; ++v) {
      if (!children_[v].empty()) continue;
      if (!depth)
        depth = depths_[v];
      else
        uniform = depths_[v] == *depth;
    }
    if (uniform && depth) truncation_ = std::move(depth);
  }
}

std::vector<std::size_t> RootedTree::leaves() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < size(); ++v)
    if (is_leaf(v)) out.push_back(v);
  return out;
}

std::optional<std::size_t> RootedTree::find(std::string_view label) const {
  for (std::size_t v = 0; v < size(); ++v)
    if (labels_[v] == label) return v;
  return std::nullopt;
}

std::size_t RootedTree::index_of(std::string_view label) const {
  auto v = find(label);
  if (!v) throw std::invalid_argument("unknown vertex label: " + std::string(label));
  return *v;
}

std::size_t meet(const RootedTree& tree, std::size_t x, std::size_t y) {
  if (x >= tree.size() || y >= tree.size())
    throw std::invalid_argument("vertex index out of range");
  while (x != y) {
    if (tree.hops(x) >= tree.hops(y))
      x = static_cast<std::size_t>(tree.parent(x));
    else
      y = static_cast<std::size_t>(tree.parent(y));
  }
  return x;
}

Rational gromov_product(const RootedTree& tree, std::size_t leaf_a,
                        std::size_t leaf_b) {
  if (leaf_a >= tree.size() || leaf_b >= tree.size())
    throw std::invalid_argument("vertex index out of range");
  if (leaf_a == leaf_b)
    throw std::invalid_argument("Gromov product of an end with itself is unbounded");
  if (!tree.is_leaf(leaf_a) || !tree.is_leaf(leaf_b))
    throw std::invalid_argument("Gromov product arguments must be leaves");
  return tree.depth(meet(tree, leaf_a, leaf_b));
}

UltrametricSpace end_space(const RootedTree& tree) {
  auto leaves = tree.leaves();
  const std::size_t n = leaves.size();
  std::vector<std::string> points;
  points.reserve(n);
  for (auto v : leaves) points.push_back(tree.label(v));
  std::vector<std::vector<Rational>> h(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      h[a][b] = h[b][a] = tree.depth(meet(tree, leaves[a], leaves[b]));
  return space_from_dense(std::move(points), h);
}

namespace {

class FreshLabels {
 public:
  explicit FreshLabels(const std::vector<std::string>& taken)
      : taken_(taken.begin(), taken.end()) {}
  std::string next() {
    for (;;) {
      std::string candidate = "@" + std::to_string(counter_++);
      if (taken_.insert(candidate).second) return candidate;
    }
  }

 private:
  std::unordered_set<std::string> taken_;
  std::size_t counter_ = 0;
};

}  // namespace

RootedTree dendrogram_from_ultrametric(const UltrametricSpace& space) {
  auto verdict = validate(space);
  if (!verdict.ok)
    throw std::invalid_argument("invalid ultrametric space: " +
                                verdict.issue->message);
  const std::size_t n = space.size();

  Rational max_h = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      max_h = std::max(max_h, space.height(i, j));
  const Rational leaf_depth = max_h + 1;

  FreshLabels fresh(space.points());
  std::string root_label = fresh.next();
  std::vector<RootedTree::VertexSpec> internals;
  std::vector<RootedTree::VertexSpec> leaf_specs(n);

  // Emits the merge cluster S, whose parent node sits at parent_depth.
  std::function<void(const std::vector<std::size_t>&, const std::string&,
                     const Rational&)>
      place = [&](const std::vector<std::size_t>& cluster,
                  const std::string& parent_label, const Rational& parent_depth) {
        if (cluster.size() == 1) {
          leaf_specs[cluster[0]] =
              RootedTree::VertexSpec{space.label(cluster[0]), parent_label,
                                     leaf_depth - parent_depth};
          return;
        }
        Rational split = space.height(cluster[0], cluster[1]);
        for (std::size_t a = 0; a < cluster.size(); ++a)
          for (std::size_t b = a + 1; b < cluster.size(); ++b)
            split = std::min(split, space.height(cluster[a], cluster[b]));

        // The top cluster splitting at height 0 coincides with the root;
        // any deeper split gets its own vertex.
        std::string node = parent_label;
        if (split > parent_depth) {
          node = fresh.next();
          internals.push_back(
              RootedTree::VertexSpec{node, parent_label, split - parent_depth});
        }

        // Classes of the relation h > split partition the cluster.
        std::vector<char> used(cluster.size(), 0);
        for (std::size_t a = 0; a < cluster.size(); ++a) {
          if (used[a]) continue;
          std::vector<std::size_t> part{cluster[a]};
          used[a] = 1;
          for (std::size_t b = a + 1; b < cluster.size(); ++b) {
            if (!used[b] && space.height(cluster[a], cluster[b]) > split) {
              part.push_back(cluster[b]);
              used[b] = 1;
            }
          }
          place(part, node, split);
        }
      };

  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  place(all, root_label, Rational(0));

  std::vector<RootedTree::VertexSpec> specs = std::move(internals);
  for (auto& leaf : leaf_specs) specs.push_back(std::move(leaf));
  return RootedTree(std::move(root_label), std::move(specs), leaf_depth);
}

std::size_t ord(const RootedTree& tree, std::size_t v) {
  if (v >= tree.size()) throw std::invalid_argument("vertex index out of range");
  std::size_t degree = tree.children(v).size();
  if (v != tree.root()) ++degree;
  return degree;
}

std::vector<std::size_t> descendants_k(const RootedTree& tree, std::size_t x,
                                       std::size_t k) {
  if (x >= tree.size()) throw std::invalid_argument("vertex index out of range");
  if (!tree.simplicial())
    throw std::invalid_argument(
        "descendant hop counts are defined on simplicial trees only");
  std::vector<std::size_t> frontier{x};
  for (std::size_t step = 0; step < k && !frontier.empty(); ++step) {
    std::vector<std::size_t> next;
    for (auto v : frontier)
      for (auto c : tree.children(v)) next.push_back(c);
    frontier = std::move(next);
  }
  std::sort(frontier.begin(), frontier.end());
  return frontier;
}

RootedTree subtree(const RootedTree& tree, std::size_t x) {
  if (x >= tree.size()) throw std::invalid_argument("vertex index out of range");
  std::vector<char> keep(tree.size(), 0);
  keep[x] = 1;
  // Vertex indices are not ordered by depth, so settle membership by walking
  // up to x (memoized through `keep`/`dead`).
  std::vector<char> dead(tree.size(), 0);
  dead[tree.root()] = tree.root() != x;
  for (std::size_t v = 0; v < tree.size(); ++v) {
    std::vector<std::size_t> chain;
    std::size_t u = v;
    while (!keep[u] && !dead[u]) {
      chain.push_back(u);
      u = static_cast<std::size_t>(tree.parent(u));
    }
    for (auto c : chain) (keep[u] ? keep : dead)[c] = 1;
  }
  std::vector<RootedTree::VertexSpec> specs;
  for (std::size_t v = 0; v < tree.size(); ++v) {
    if (!keep[v] || v == x) continue;
    specs.push_back(RootedTree::VertexSpec{
        tree.label(v), tree.label(static_cast<std::size_t>(tree.parent(v))),
        tree.edge_length(v)});
  }
  std::optional<Rational> tag;
  if (tree.truncation_depth()) tag = *tree.truncation_depth() - tree.depth(x);
  return RootedTree(tree.label(x), std::move(specs), std::move(tag));
}

RootedTree rebase(const RootedTree& tree, std::size_t w) {
  if (w >= tree.size()) throw std::invalid_argument("vertex index out of range");
  if (w == tree.root()) return tree;

  std::vector<int> parent(tree.size());
  std::vector<Rational> length(tree.size());
  for (std::size_t v = 0; v < tree.size(); ++v) {
    parent[v] = tree.parent(v);
    length[v] = tree.edge_length(v);
  }
  // Flip the arc w -> old root.
  std::size_t child = w;
  int up = tree.parent(w);
  Rational carried = tree.edge_length(w);
  parent[w] = -1;
  while (up != -1) {
    int next_up = tree.parent(static_cast<std::size_t>(up));
    Rational next_len = tree.edge_length(static_cast<std::size_t>(up));
    parent[static_cast<std::size_t>(up)] = static_cast<int>(child);
    length[static_cast<std::size_t>(up)] = carried;
    child = static_cast<std::size_t>(up);
    up = next_up;
    carried = next_len;
  }

  std::vector<RootedTree::VertexSpec> specs;
  for (std::size_t v = 0; v < tree.size(); ++v) {
    if (v == w) continue;
    specs.push_back(RootedTree::VertexSpec{
        tree.label(v), tree.label(static_cast<std::size_t>(parent[v])),
        length[v]});
  }
  // The constructor re-derives the truncation tag from the new leaf depths.
  return RootedTree(tree.label(w), std::move(specs));
}

namespace {

// Follows a unary (single-child, non-leaf) chain starting at child `c`,
// accumulating edge lengths; such vertices are metrically invisible.
std::pair<std::size_t, Rational> contract_chain(const RootedTree& tree,
                                                std::size_t c) {
  Rational acc = tree.edge_length(c);
  while (!tree.is_leaf(c) && tree.children(c).size() == 1) {
    c = tree.children(c)[0];
    acc += tree.edge_length(c);
  }
  return {c, acc};
}

std::string code_of(const RootedTree& tree, std::size_t v, bool weighted) {
  if (tree.is_leaf(v)) return "()";
  if (weighted) {
    std::vector<std::pair<Rational, std::string>> keys;
    for (auto c0 : tree.children(v)) {
      auto [c, len] = contract_chain(tree, c0);
      keys.emplace_back(std::move(len), code_of(tree, c, true));
    }
    std::sort(keys.begin(), keys.end());
    std::string out = "(";
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (i) out += ',';
      out += format_rational(keys[i].first);
      out += ':';
      out += keys[i].second;
    }
    out += ')';
    return out;
  }
  std::vector<std::string> keys;
  for (auto c0 : tree.children(v)) {
    auto [c, len] = contract_chain(tree, c0);
    keys.push_back(code_of(tree, c, false));
  }
  std::sort(keys.begin(), keys.end());
  std::string out = "(";
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i) out += ',';
    out += keys[i];
  }
  out += ')';
  return out;
}

}  // namespace

std::string canonical_code(const RootedTree& tree, bool weighted) {
  std::size_t start = tree.root();
  if (!weighted) {
    while (!tree.is_leaf(start) && tree.children(start).size() == 1)
      start = tree.children(start)[0];
  }
  return code_of(tree, start, weighted);
}

namespace {

void canonical_walk(const RootedTree& tree, std::size_t v,
                    std::vector<std::size_t>& out) {
  if (tree.is_leaf(v)) {
    out.push_back(v);
    return;
  }
  std::vector<std::tuple<Rational, std::string, std::size_t>> keys;
  for (auto c0 : tree.children(v)) {
    auto [c, len] = contract_chain(tree, c0);
    keys.emplace_back(std::move(len), code_of(tree, c, true), c);
  }
  std::stable_sort(keys.begin(), keys.end(),
                   [](const auto& a, const auto& b) {
                     if (std::get<0>(a) != std::get<0>(b))
                       return std::get<0>(a) < std::get<0>(b);
                     return std::get<1>(a) < std::get<1>(b);
                   });
  for (const auto& [len, code, c] : keys) canonical_walk(tree, c, out);
}

}  // namespace

std::vector<std::size_t> canonical_leaf_order(const RootedTree& tree) {
  std::vector<std::size_t> out;
  canonical_walk(tree, tree.root(), out);
  return out;
}

namespace {

// max_{x'} |desc_k(x')| over vertices whose depth-k ball fits inside the
// truncation, for every k in 1..N.
std::vector<std::size_t> max_descendant_profile(const RootedTree& tree,
                                                std::size_t n_depth) {
  std::vector<std::size_t> md(n_depth + 1, 0);
  for (std::size_t v = 0; v < tree.size(); ++v) {
    std::vector<std::size_t> frontier{v};
    for (std::size_t k = 1; k + tree.hops(v) <= n_depth; ++k) {
      std::vector<std::size_t> next;
      for (auto u : frontier)
        for (auto c : tree.children(u)) next.push_back(c);
      frontier = std::move(next);
      md[k] = std::max(md[k], frontier.size());
    }
  }
  return md;
}

std::size_t lemma_one_direction(const RootedTree& a, const RootedTree& b) {
  std::size_t nb = b.leaves().empty() ? 0 : b.hops(b.leaves()[0]);
  auto md = max_descendant_profile(b, nb);
  std::size_t best = 0;
  for (std::size_t x = 0; x < a.size(); ++x) {
    if (a.is_leaf(x)) continue;
    std::size_t m = ord(a, x) - 1;
    for (std::size_t k = 1; k <= nb; ++k) {
      if (md[k] < m) {
        best = std::max(best, k);
        break;
      }
    }
  }
  return best;
}

}  // namespace

std::size_t min_internal_degree(const RootedTree& tree) {
  std::size_t best = 0;
  bool any = false;
  for (std::size_t v = 0; v < tree.size(); ++v) {
    if (tree.is_leaf(v)) continue;
    std::size_t degree = ord(tree, v);
    if (!any || degree < best) best = degree;
    any = true;
  }
  return any ? best : 0;
}

LemmaBound lemma_lower_bound(const RootedTree& a, const RootedTree& b) {
  for (const RootedTree* t : {&a, &b}) {
    if (!t->simplicial())
      throw std::invalid_argument("descendant bound needs simplicial trees");
    if (!t->truncation_depth())
      throw std::invalid_argument("descendant bound needs truncation tags");
  }
  std::size_t bound = std::max(lemma_one_direction(a, b),
                               lemma_one_direction(b, a));
  return LemmaBound{Rational(static_cast<long long>(bound)), bound == 0};
}

}  // namespace dendro
