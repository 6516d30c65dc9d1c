#include "dendro/distortion.hpp"

#include "dendro/tree.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <vector>

namespace dendro {

namespace {

void require_match(const BijectionMap& f, const UltrametricSpace& u,
                   const UltrametricSpace& u2) {
  if (f.size() != u.size() || u.size() != u2.size())
    throw std::invalid_argument("bijection does not match the two spaces");
}

}  // namespace

Rational sphere_distortion_exponent(const BijectionMap& f,
                                    const UltrametricSpace& u,
                                    const UltrametricSpace& u2,
                                    std::size_t center, const Rational& level) {
  require_match(f, u, u2);
  auto s = sphere(u, center, level);
  if (s.size() <= 1) return Rational(0);
  const std::size_t fx = f.image(center);
  Rational lo = u2.height(fx, f.image(s[0]));
  Rational hi = lo;
  for (std::size_t k = 1; k < s.size(); ++k) {
    const Rational& v = u2.height(fx, f.image(s[k]));
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return hi - lo;
}

DistortionReport max_distortion_exponent(const BijectionMap& f,
                                         const UltrametricSpace& u,
                                         const UltrametricSpace& u2) {
  require_match(f, u, u2);
  const std::size_t n = u.size();
  DistortionReport report;
  report.max_exponent = 0;
  for (std::size_t x = 0; x < n; ++x) {
    auto spectrum = level_spectrum(u, x);
    struct Bucket {
      bool init = false;
      Rational lo, hi;
      std::size_t ylo = 0, yhi = 0;
    };
    std::vector<Bucket> buckets(spectrum.size());
    const std::size_t fx = f.image(x);
    for (std::size_t y = 0; y < n; ++y) {
      if (y == x) continue;
      const Rational& t = u.height(x, y);
      std::size_t lev =
          std::lower_bound(spectrum.begin(), spectrum.end(), t) -
          spectrum.begin();
      const Rational& img = u2.height(fx, f.image(y));
      Bucket& b = buckets[lev];
      if (!b.init) {
        b.init = true;
        b.lo = b.hi = img;
        b.ylo = b.yhi = y;
      } else {
        if (img < b.lo) { b.lo = img; b.ylo = y; }
        if (img > b.hi) { b.hi = img; b.yhi = y; }
      }
    }
    for (std::size_t lev = 0; lev < spectrum.size(); ++lev) {
      const Bucket& b = buckets[lev];
      SphereDistortion entry{x, spectrum[lev], b.hi - b.lo, b.yhi, b.ylo};
      if (entry.exponent > report.max_exponent) {
        report.max_exponent = entry.exponent;
        report.worst = entry;
      }
      report.entries.push_back(std::move(entry));
    }
  }
  return report;
}

Rational pair_exponent(const BijectionMap& f, const UltrametricSpace& u,
                       const UltrametricSpace& u2) {
  Rational fwd = max_distortion_exponent(f, u, u2).max_exponent;
  Rational inv = max_distortion_exponent(f.inverted(), u2, u).max_exponent;
  return std::max(fwd, inv);
}

// ---------------------------------------------------------------------------
// Optimal exponent search.
// ---------------------------------------------------------------------------

namespace {

// Heights of one space prepared for the search: flattened matrix, per-point
// ascending spectra, the level index of every entry, sphere cardinalities.
template <typename H>
struct SideData {
  std::size_t n = 0;
  std::vector<H> h;                       // n*n, diagonal unused
  std::vector<std::vector<H>> spectrum;   // per point
  std::vector<int> level;                 // n*n -> index into spectrum[i]
  std::vector<std::vector<int>> counts;   // sphere sizes per level
  std::vector<std::vector<int>> sorted_counts;
  std::vector<std::pair<bool, H>> min_gap;  // per point; false = fewer than 2 levels

  template <typename Conv>
  static SideData build(const UltrametricSpace& space, Conv conv) {
    SideData d;
    d.n = space.size();
    d.h.assign(d.n * d.n, H{});
    d.spectrum.resize(d.n);
    d.level.assign(d.n * d.n, 0);
    d.counts.resize(d.n);
    d.sorted_counts.resize(d.n);
    d.min_gap.assign(d.n, {false, H{}});
    for (std::size_t i = 0; i < d.n; ++i)
      for (std::size_t j = 0; j < d.n; ++j)
        if (i != j) d.h[i * d.n + j] = conv(space.height(i, j));
    for (std::size_t i = 0; i < d.n; ++i) {
      std::vector<H> levels;
      for (std::size_t j = 0; j < d.n; ++j)
        if (j != i) levels.push_back(d.h[i * d.n + j]);
      std::sort(levels.begin(), levels.end());
      levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
      d.spectrum[i] = levels;
      d.counts[i].assign(levels.size(), 0);
      for (std::size_t j = 0; j < d.n; ++j) {
        if (j == i) continue;
        int lev = static_cast<int>(
            std::lower_bound(levels.begin(), levels.end(), d.h[i * d.n + j]) -
            levels.begin());
        d.level[i * d.n + j] = lev;
        ++d.counts[i][lev];
      }
      d.sorted_counts[i] = d.counts[i];
      std::sort(d.sorted_counts[i].begin(), d.sorted_counts[i].end());
      for (std::size_t k = 1; k < levels.size(); ++k) {
        H gap = levels[k] - levels[k - 1];
        if (!d.min_gap[i].first || gap < d.min_gap[i].second)
          d.min_gap[i] = {true, gap};
      }
    }
    return d;
  }
};

template <typename H>
struct Problem {
  SideData<H> a, b;
  std::vector<H> lbp;  // n*n profile lower bound for assigning i -> j
  // Orbits of automorphic image subtrees: per sibling group, the leaf masks
  // of isomorphic children in canonical order.
  std::vector<std::vector<std::uint64_t>> sym_groups;
  bool use_sym = false;

  std::size_t n() const { return a.n; }

  void build_profile_bounds() {
    const std::size_t nn = a.n;
    lbp.assign(nn * nn, H{});
    for (std::size_t i = 0; i < nn; ++i) {
      for (std::size_t j = 0; j < nn; ++j) {
        if (a.sorted_counts[i] == b.sorted_counts[j]) continue;
        // A bijection whose exponent stays below both minimal spectrum gaps
        // induces a sphere-count-preserving level bijection at this center,
        // so mismatched count multisets force at least the smaller gap.
        bool has = false;
        H bound{};
        for (const auto& [ok, gap] : {a.min_gap[i], b.min_gap[j]}) {
          if (ok && (!has || gap < bound)) {
            has = true;
            bound = gap;
          }
        }
        if (has) lbp[i * nn + j] = bound;
      }
    }
  }
};

template <typename H>
struct MinMax {
  H lo{}, hi{};
  int cnt = 0;
};

template <typename H>
struct TaskOutcome {
  bool complete = true;
  bool stop_triggered = false;
  bool have_cert = false;
  H best_value{};
  std::vector<int> best_perm;
  bool have_frontier = false;
  H frontier_min{};
  std::uint64_t nodes = 0;
};

template <typename H>
class Search {
 public:
  Search(const Problem<H>& p, H incumbent_seed, std::uint64_t node_budget,
         const std::optional<H>& stop_at)
      : p_(p),
        n_(static_cast<int>(p.n())),
        inc_(std::move(incumbent_seed)),
        budget_(node_budget),
        stop_at_(stop_at) {
    img_.assign(n_, -1);
    pre_.assign(n_, -1);
    fwd_.resize(n_);
    inv_.resize(n_);
    std::size_t max_b_levels = 0;
    for (int i = 0; i < n_; ++i) {
      fwd_[i].assign(p_.a.spectrum[i].size(), MinMax<H>{});
      max_b_levels = std::max(max_b_levels, p_.b.spectrum[i].size());
    }
    for (int i = 0; i < n_; ++i) inv_[i].assign(max_b_levels, MinMax<H>{});
    bound_ = H{};
  }

  // Phase-1 task rooted at a forced first assignment (or free when
  // first_src < 0).
  TaskOutcome<H> run(int first_src, int first_img) {
    out_ = TaskOutcome<H>{};
    if (first_src >= 0) {
      H nb = probe(first_src, first_img);
      if (nb < inc_) {
        assign(first_src, first_img);
        expand();
        unassign();
      }
      // A pruned root means every completion through it is >= the seed.
    } else {
      expand();
    }
    out_.nodes = nodes_;
    return out_;
  }

  std::uint64_t nodes() const { return nodes_; }
  bool exhausted() const { return exhausted_; }

 private:
  H probe(int y, int y2) {
    assign(y, y2);
    H b = bound_;
    unassign();
    return b;
  }

  void touch(MinMax<H>& slot, const H& value) {
    log_.emplace_back(&slot, slot);
    if (slot.cnt == 0) {
      slot.lo = slot.hi = value;
    } else {
      if (value < slot.lo) slot.lo = value;
      if (value > slot.hi) slot.hi = value;
    }
    ++slot.cnt;
    H spread = slot.hi - slot.lo;
    if (spread > bound_) bound_ = spread;
  }

  void assign(int y, int y2) {
    frames_.push_back(Frame{bound_, log_.size()});
    const std::size_t nn = static_cast<std::size_t>(n_);
    const H& profile = p_.lbp[static_cast<std::size_t>(y) * nn + y2];
    if (profile > bound_) bound_ = profile;
    for (int x : assigned_) {
      int x2 = img_[x];
      touch(fwd_[x][p_.a.level[x * n_ + y]], p_.b.h[x2 * n_ + y2]);
      touch(inv_[x][p_.b.level[x2 * n_ + y2]], p_.a.h[x * n_ + y]);
      touch(fwd_[y][p_.a.level[y * n_ + x]], p_.b.h[y2 * n_ + x2]);
      touch(inv_[y][p_.b.level[y2 * n_ + x2]], p_.a.h[y * n_ + x]);
    }
    img_[y] = y2;
    pre_[y2] = y;
    assigned_.push_back(y);
    img_mask_ |= std::uint64_t{1} << (y2 & 63);
    mask_valid_ = n_ <= 64;
  }

  void unassign() {
    int y = assigned_.back();
    assigned_.pop_back();
    int y2 = img_[y];
    img_[y] = -1;
    pre_[y2] = -1;
    Frame f = frames_.back();
    frames_.pop_back();
    while (log_.size() > f.log_mark) {
      auto& [slot, old] = log_.back();
      *slot = old;
      log_.pop_back();
    }
    bound_ = std::move(f.bound);
    rebuild_mask();
  }

  void rebuild_mask() {
    img_mask_ = 0;
    if (n_ > 64) return;
    for (int x : assigned_) img_mask_ |= std::uint64_t{1} << img_[x];
  }

  std::uint64_t shadowed_mask() const {
    if (!p_.use_sym || n_ > 64) return 0;
    std::uint64_t shadowed = 0;
    for (const auto& group : p_.sym_groups) {
      bool kept = false;
      for (std::uint64_t mask : group) {
        if (mask & img_mask_) continue;  // touched subtree, not swappable
        if (!kept) {
          kept = true;
          continue;
        }
        shadowed |= mask;
      }
    }
    return shadowed;
  }

  bool below_threshold(const H& value) const { return value < inc_; }

  void note_frontier() {
    if (!out_.have_frontier || bound_ < out_.frontier_min) {
      out_.have_frontier = true;
      out_.frontier_min = bound_;
    }
  }

  // Depth-first expansion; sets flags on out_ instead of returning state.
  void expand() {
    if (stopped_) return;
    if (exhausted_) {
      out_.complete = false;
      note_frontier();
      return;
    }
    if (++nodes_ > budget_) {
      exhausted_ = true;
      out_.complete = false;
      note_frontier();
      return;
    }

    if (static_cast<int>(assigned_.size()) == n_) {
      // bound_ now equals the exact pair exponent of the full bijection.
      if (bound_ < inc_) {
        inc_ = bound_;
        out_.have_cert = true;
        out_.best_value = bound_;
        out_.best_perm.assign(img_.begin(), img_.end());
        if (stop_at_ && !(inc_ > *stop_at_)) {
          out_.stop_triggered = true;
          out_.complete = false;
          stopped_ = true;
        }
      }
      return;
    }

    const std::uint64_t shadowed = shadowed_mask();
    int pick = -1;
    int pick_count = std::numeric_limits<int>::max();
    for (int u = 0; u < n_ && pick_count > 0; ++u) {
      if (img_[u] >= 0) continue;
      int count = 0;
      for (int u2 = 0; u2 < n_; ++u2) {
        if (pre_[u2] >= 0) continue;
        if (mask_valid_ && ((shadowed >> u2) & 1)) continue;
        const H& profile = p_.lbp[static_cast<std::size_t>(u) * n_ + u2];
        const H& floor = profile > bound_ ? profile : bound_;
        if (below_threshold(floor)) ++count;
      }
      if (count == 0) return;  // some point has no viable image
      if (count < pick_count) {
        pick_count = count;
        pick = u;
      }
    }

    std::vector<std::pair<H, int>> candidates;
    candidates.reserve(pick_count);
    for (int u2 = 0; u2 < n_; ++u2) {
      if (pre_[u2] >= 0) continue;
      if (mask_valid_ && ((shadowed >> u2) & 1)) continue;
      const H& profile = p_.lbp[static_cast<std::size_t>(pick) * n_ + u2];
      const H& floor = profile > bound_ ? profile : bound_;
      if (!below_threshold(floor)) continue;
      H nb = probe(pick, u2);
      if (below_threshold(nb)) candidates.emplace_back(std::move(nb), u2);
    }
    std::sort(candidates.begin(), candidates.end());

    for (auto& [nb, u2] : candidates) {
      if (stopped_) return;
      if (exhausted_) {
        out_.complete = false;
        note_frontier();
        return;
      }
      if (!below_threshold(nb)) continue;  // incumbent may have moved
      assign(pick, u2);
      expand();
      unassign();
    }
  }

  struct Frame {
    H bound;
    std::size_t log_mark;
  };

  const Problem<H>& p_;
  int n_;
  H inc_;
  std::uint64_t budget_;
  std::optional<H> stop_at_;

  std::vector<int> img_, pre_;
  std::vector<int> assigned_;
  std::vector<std::vector<MinMax<H>>> fwd_, inv_;
  std::vector<std::pair<MinMax<H>*, MinMax<H>>> log_;
  std::vector<Frame> frames_;
  H bound_{};
  std::uint64_t img_mask_ = 0;
  bool mask_valid_ = true;

  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
  bool stopped_ = false;
  TaskOutcome<H> out_;
};

// Sibling groups of isomorphic subtrees in the image dendrogram, as leaf
// masks over the image point indices. Only usable when n <= 64.
std::vector<std::vector<std::uint64_t>> image_symmetry_groups(
    const UltrametricSpace& u2) {
  std::vector<std::vector<std::uint64_t>> groups;
  if (u2.size() > 64) return groups;
  RootedTree d2 = dendrogram_from_ultrametric(u2);

  std::vector<std::uint64_t> leaf_mask(d2.size(), 0);
  // Vertex indices are topologically unordered; accumulate leaf masks by
  // walking each leaf up to the root.
  for (auto leaf : d2.leaves()) {
    std::uint64_t bit = std::uint64_t{1} << u2.index_of(d2.label(leaf));
    int v = static_cast<int>(leaf);
    while (v >= 0) {
      leaf_mask[v] |= bit;
      v = d2.parent(static_cast<std::size_t>(v));
    }
  }
  for (std::size_t v = 0; v < d2.size(); ++v) {
    if (d2.children(v).size() < 2) continue;
    std::vector<std::tuple<Rational, std::string, std::size_t>> keyed;
    for (auto c : d2.children(v)) {
      RootedTree sub = subtree(d2, c);
      keyed.emplace_back(d2.edge_length(c), canonical_code(sub, true), c);
    }
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) {
                       if (std::get<0>(a) != std::get<0>(b))
                         return std::get<0>(a) < std::get<0>(b);
                       return std::get<1>(a) < std::get<1>(b);
                     });
    std::size_t i = 0;
    while (i < keyed.size()) {
      std::size_t j = i + 1;
      while (j < keyed.size() &&
             std::get<0>(keyed[j]) == std::get<0>(keyed[i]) &&
             std::get<1>(keyed[j]) == std::get<1>(keyed[i]))
        ++j;
      if (j - i >= 2) {
        std::vector<std::uint64_t> masks;
        for (std::size_t k = i; k < j; ++k)
          masks.push_back(leaf_mask[std::get<2>(keyed[k])]);
        groups.push_back(std::move(masks));
      }
      i = j;
    }
  }
  return groups;
}

struct ScaledHeights {
  bool fits = false;
  BigInt scale = 1;
};

// Common-denominator scaling: when the lcm of all height denominators is
// small, every height (and every spread) becomes an int64 and the search
// runs on machine integers. Otherwise the same engine runs on rationals.
ScaledHeights try_scale(const UltrametricSpace& u, const UltrametricSpace& u2) {
  ScaledHeights s;
  BigInt l = 1;
  BigInt max_num = 0;
  auto fold = [&](const UltrametricSpace& sp) {
    for (std::size_t i = 0; i < sp.size(); ++i)
      for (std::size_t j = i + 1; j < sp.size(); ++j) {
        l = boost::multiprecision::lcm(l, denominator(sp.height(i, j)));
        max_num = std::max(max_num, numerator(sp.height(i, j)));
      }
  };
  fold(u);
  fold(u2);
  if (l > (BigInt(1) << 20)) return s;
  if (max_num * l > (BigInt(1) << 40)) return s;
  s.fits = true;
  s.scale = l;
  return s;
}

template <typename H>
struct EngineRun {
  KappaStatus status = KappaStatus::Solved;
  H value{};        // optimum when solved, best upper bound otherwise
  H lower{};        // lower bound (== value when solved)
  std::vector<int> perm;
  std::uint64_t nodes = 0;
  bool stopped_early = false;
};

template <typename H>
EngineRun<H> run_engine(const Problem<H>& p, const H& seed_value,
                        const std::vector<int>& seed_perm,
                        const SearchBudget& budget,
                        const std::optional<H>& stop_at) {
  const int n = static_cast<int>(p.n());
  EngineRun<H> out;
  out.value = seed_value;
  out.perm = seed_perm;

  // Root lower bound: every source point must land somewhere.
  H root_lb{};
  for (int i = 0; i < n; ++i) {
    bool first = true;
    H row{};
    for (int j = 0; j < n; ++j) {
      const H& v = p.lbp[static_cast<std::size_t>(i) * n + j];
      if (first || v < row) {
        row = v;
        first = false;
      }
    }
    if (row > root_lb) root_lb = row;
  }

  if (stop_at && !(seed_value > *stop_at)) {
    out.status = KappaStatus::Bracket;
    out.stopped_early = true;
    out.lower = root_lb;
    return out;
  }

  // Top-level branching on the most constrained source point.
  int first = 0;
  {
    int best_count = std::numeric_limits<int>::max();
    for (int u = 0; u < n; ++u) {
      int count = 0;
      for (int u2 = 0; u2 < n; ++u2)
        if (p.lbp[static_cast<std::size_t>(u) * n + u2] < seed_value) ++count;
      if (count < best_count) {
        best_count = count;
        first = u;
      }
    }
  }

  std::vector<int> first_images;
  {
    std::uint64_t shadowed = 0;
    if (p.use_sym && n <= 64) {
      for (const auto& group : p.sym_groups) {
        bool kept = false;
        for (std::uint64_t mask : group) {
          if (!kept) {
            kept = true;
            continue;
          }
          shadowed |= mask;
        }
      }
    }
    std::vector<std::pair<H, int>> ranked;
    for (int u2 = 0; u2 < n; ++u2) {
      if ((shadowed >> u2) & 1) continue;
      const H& lb = p.lbp[static_cast<std::size_t>(first) * n + u2];
      if (lb < seed_value) ranked.emplace_back(lb, u2);
    }
    std::sort(ranked.begin(), ranked.end());
    for (auto& [lb, u2] : ranked) first_images.push_back(u2);
  }

  if (first_images.empty()) {
    // Every first assignment already reaches the seed value: the seed is
    // optimal.
    out.status = KappaStatus::Solved;
    out.lower = out.value;
    return out;
  }

  const std::size_t k = first_images.size();
  std::vector<TaskOutcome<H>> results(k);
  std::vector<std::uint64_t> slice(k, budget.max_nodes / k);
  for (std::size_t i = 0; i < budget.max_nodes % k; ++i) ++slice[i];

  auto run_task = [&](std::size_t i) {
    Search<H> search(p, seed_value, slice[i], stop_at);
    results[i] = search.run(first, first_images[i]);
  };
  unsigned jobs = std::max(1u, budget.jobs);
  if (jobs <= 1 || k <= 1) {
    for (std::size_t i = 0; i < k; ++i) run_task(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < std::min<std::size_t>(jobs, k); ++w)
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= k) return;
          run_task(i);
        }
      });
    for (auto& t : pool) t.join();
  }

  bool complete = true;
  bool have_frontier = false;
  H frontier{};
  for (std::size_t i = 0; i < k; ++i) {
    const auto& r = results[i];
    out.nodes += r.nodes;
    if (!r.complete) complete = false;
    if (r.stop_triggered) out.stopped_early = true;
    if (r.have_frontier && (!have_frontier || r.frontier_min < frontier)) {
      have_frontier = true;
      frontier = r.frontier_min;
    }
    if (r.have_cert &&
        (r.best_value < out.value ||
         (r.best_value == out.value && r.best_perm < out.perm))) {
      out.value = r.best_value;
      out.perm = r.best_perm;
    }
  }

  if (complete) {
    out.status = KappaStatus::Solved;
    out.lower = out.value;
  } else {
    out.status = KappaStatus::Bracket;
    H lower = have_frontier ? std::min(frontier, out.value) : H{};
    if (root_lb > lower) lower = root_lb;
    out.lower = lower;
  }
  return out;
}

}  // namespace

std::pair<Rational, BijectionMap> kappa_upper_heuristic(
    const UltrametricSpace& u, const UltrametricSpace& u2) {
  if (u.size() != u2.size())
    throw std::invalid_argument("bijection cardinality mismatch");
  RootedTree d1 = dendrogram_from_ultrametric(u);
  RootedTree d2 = dendrogram_from_ultrametric(u2);
  auto order1 = canonical_leaf_order(d1);
  auto order2 = canonical_leaf_order(d2);
  std::vector<std::size_t> forward(u.size());
  for (std::size_t i = 0; i < order1.size(); ++i)
    forward[u.index_of(d1.label(order1[i]))] = u2.index_of(d2.label(order2[i]));
  BijectionMap best(std::move(forward), u2.size());
  Rational best_value = pair_exponent(best, u, u2);

  bool labels_match = true;
  for (std::size_t i = 0; i < u.size() && labels_match; ++i)
    labels_match = u2.find(u.label(i)).has_value();
  if (labels_match) {
    BijectionMap ident = BijectionMap::label_identity(u, u2);
    Rational v = pair_exponent(ident, u, u2);
    if (v < best_value ||
        (v == best_value && ident.forward() < best.forward())) {
      best = std::move(ident);
      best_value = std::move(v);
    }
  }
  return {std::move(best_value), std::move(best)};
}

KappaResult exact_kappa(const UltrametricSpace& u, const UltrametricSpace& u2,
                        const SearchBudget& budget) {
  KappaResult result;
  if (u.size() != u2.size()) {
    result.status = KappaStatus::Infinite;
    return result;
  }

  auto [seed_value, seed_cert] = kappa_upper_heuristic(u, u2);
  auto sym = image_symmetry_groups(u2);
  std::vector<int> seed_perm(seed_cert.forward().begin(),
                             seed_cert.forward().end());

  auto finish = [&](auto run, auto to_rational) {
    result.status = run.status;
    result.upper_bound = to_rational(run.value);
    result.lower_bound = to_rational(run.lower);
    result.node_count = run.nodes;
    result.stopped_early = run.stopped_early;
    std::vector<std::size_t> fwd(run.perm.begin(), run.perm.end());
    result.certificate = BijectionMap(std::move(fwd), u.size());
    if (run.status == KappaStatus::Solved) result.kappa = result.upper_bound;
  };

  ScaledHeights scaled = try_scale(u, u2);
  if (scaled.fits) {
    BigInt l = scaled.scale;
    Problem<long long> p;
    auto conv = [&](const Rational& r) {
      return (numerator(r) * (l / denominator(r))).convert_to<long long>();
    };
    p.a = SideData<long long>::build(u, conv);
    p.b = SideData<long long>::build(u2, conv);
    p.sym_groups = std::move(sym);
    p.use_sym = !p.sym_groups.empty();
    p.build_profile_bounds();

    long long seed_scaled =
        (numerator(seed_value) * (l / denominator(seed_value)))
            .convert_to<long long>();
    std::optional<long long> stop_scaled;
    if (budget.stop_at) {
      // floor(stop * l): integer exponents below the threshold iff scaled
      // value <= floor.
      BigInt num = numerator(*budget.stop_at) * l;
      BigInt den = denominator(*budget.stop_at);
      stop_scaled = (num / den).convert_to<long long>();
    }
    auto run =
        run_engine<long long>(p, seed_scaled, seed_perm, budget, stop_scaled);
    finish(run, [&](long long v) { return Rational(BigInt(v), l); });
  } else {
    Problem<Rational> p;
    auto ident = [](const Rational& r) { return r; };
    p.a = SideData<Rational>::build(u, ident);
    p.b = SideData<Rational>::build(u2, ident);
    p.sym_groups = std::move(sym);
    p.use_sym = !p.sym_groups.empty();
    p.build_profile_bounds();
    auto run = run_engine<Rational>(p, seed_value, seed_perm, budget,
                                    budget.stop_at);
    finish(run, [](const Rational& v) { return v; });
  }
  return result;
}

double rho_of_exponent(const Rational& kappa) {
  return std::log1p(2.0 * to_double(kappa));
}

double rho(const KappaResult& result) {
  switch (result.status) {
    case KappaStatus::Infinite:
      return std::numeric_limits<double>::infinity();
    case KappaStatus::Solved:
      return rho_of_exponent(*result.kappa);
    case KappaStatus::Bracket:
      throw std::logic_error("bracket result has no single rho value");
  }
  return 0.0;
}

std::optional<BigInt> rho_exact_form(const Rational& kappa) {
  if (denominator(kappa) == 1) return numerator(kappa);
  return std::nullopt;
}

}  // namespace dendro
