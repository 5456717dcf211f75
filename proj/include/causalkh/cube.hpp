#pragma once

// Cube of resolutions over Z/2.
//
// A generator is a vertex r of {0,1}^n together with a label v+ or v- on every
// circle of the smoothing. Gradings:
//   i = |r| - n_minus
//   j = (#v+ - #v-) + |r| + n_plus - 2 n_minus
//   k = (#v+ - #v-) counted on essential circles only
// At crossing X(a,b,c,d) the 0-smoothing joins a-b and c-d, the 1-smoothing
// joins a-d and b-c. The annular complex keeps only the k-preserving part of
// the differential.

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "causalkh/errors.hpp"
#include "causalkh/gf2linalg.hpp"
#include "causalkh/linkdiag.hpp"

namespace causalkh {

inline constexpr std::size_t kMaxCrossings = 30;

struct Resolution {
  std::uint32_t bits = 0;
  std::size_t length = 0;

  bool bit(std::size_t c) const { return (bits >> c) & 1u; }
  int weight() const { return std::popcount(bits); }
};

struct StateCircles {
  std::size_t count = 0;
  std::vector<std::uint32_t> arc_circle;  // internal arc index -> circle
  std::vector<int> winding;               // |winding| about the axis, 0 or 1
  std::vector<bool> essential;

  std::uint64_t essential_mask() const {
    std::uint64_t mask = 0;
    for (std::size_t c = 0; c < count; ++c)
      if (essential[c]) mask |= std::uint64_t{1} << c;
    return mask;
  }
};

namespace detail {
inline constexpr std::uint8_t kPartner[2][4] = {{1, 0, 3, 2}, {3, 2, 1, 0}};
inline const std::vector<bool> kNoAxis;
}  // namespace detail

/// Circles of the smoothing r. Circles are numbered by their smallest arc
/// index. `closure_arcs` marks arcs that run through the closure region of an
/// annular diagram; a circle's winding counts those traversals with sign.
inline StateCircles smooth(const PlanarDiagram& d, Resolution r,
                           const std::vector<bool>& closure_arcs = detail::kNoAxis) {
  if (r.length != d.crossing_count()) {
    throw IntegrityError("resolution has " + std::to_string(r.length) + " bits for " +
                         std::to_string(d.crossing_count()) + " crossings");
  }
  const std::size_t n_arcs = d.arc_count();
  const bool annular = !closure_arcs.empty();
  constexpr std::uint32_t kUnset = ~std::uint32_t{0};

  StateCircles out;
  out.arc_circle.assign(n_arcs, kUnset);
  for (std::uint32_t start = 0; start < n_arcs; ++start) {
    if (out.arc_circle[start] != kUnset) continue;
    const auto circle = static_cast<std::uint32_t>(out.count++);
    int winding = 0;
    if (!d.tail(start).valid()) {
      out.arc_circle[start] = circle;
      if (annular && closure_arcs[start]) winding = 1;
    } else {
      std::uint32_t arc = start;
      bool forward = true;
      std::size_t steps = 0;
      do {
        if (++steps > 2 * n_arcs) throw IntegrityError("smoothing trace did not close");
        out.arc_circle[arc] = circle;
        if (annular && closure_arcs[arc]) winding += forward ? 1 : -1;
        ArcEnd exit = forward ? d.head(arc) : d.tail(arc);
        std::uint8_t slot = detail::kPartner[r.bit(exit.crossing)][exit.slot];
        ArcEnd enter{exit.crossing, slot};
        arc = d.crossing_arcs(exit.crossing)[slot];
        forward = d.tail(arc) == enter;
      } while (!(arc == start && forward));
    }
    winding = std::abs(winding);
    if (winding > 1) {
      throw IntegrityError("resolution circle winds " + std::to_string(winding) +
                           " times about the axis");
    }
    out.winding.push_back(winding);
    out.essential.push_back(winding == 1);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Chain complexes

struct ComplexOptions {
  std::size_t crossing_limit = 20;
  std::size_t generator_limit = std::size_t{1} << 26;
};

struct GeneratorRef {
  std::uint32_t vertex = 0;
  std::uint64_t labels = 0;  // bit c set: v+ on circle c

  friend bool operator==(const GeneratorRef&, const GeneratorRef&) = default;
};

struct GradingKey {
  int j = 0;
  std::optional<int> k;

  friend auto operator<=>(const GradingKey&, const GradingKey&) = default;
};

struct ComplexBlock {
  GradingKey key;
  int i_min = 0;
  std::vector<std::vector<GeneratorRef>> generators;  // by i - i_min
  std::vector<SparseBitMatrix> differentials;         // C_i -> C_{i+1}, by i - i_min

  int i_max() const { return i_min + static_cast<int>(generators.size()) - 1; }
  std::size_t dim(int i) const {
    if (i < i_min || i > i_max()) return 0;
    return generators[static_cast<std::size_t>(i - i_min)].size();
  }
};

struct ChainComplex {
  bool annular = false;
  int n_plus = 0;
  int n_minus = 0;
  std::size_t crossing_count = 0;
  std::vector<ComplexBlock> blocks;  // sorted by key

  std::size_t total_generators() const {
    std::size_t total = 0;
    for (const auto& b : blocks)
      for (const auto& g : b.generators) total += g.size();
    return total;
  }
};

namespace detail {

inline void check_crossing_limit(const PlanarDiagram& d, const ComplexOptions& opts) {
  std::size_t limit = std::min(opts.crossing_limit, kMaxCrossings);
  if (d.crossing_count() > limit) {
    throw ResourceError("crossing limit " + std::to_string(limit) + " exceeded: diagram has " +
                        std::to_string(d.crossing_count()) + " crossings");
  }
}

inline ChainComplex build_cube(const PlanarDiagram& d, const std::vector<bool>& closure_arcs,
                               bool annular, const ComplexOptions& opts) {
  check_crossing_limit(d, opts);
  const std::size_t n = d.crossing_count();
  const std::size_t n_arcs = d.arc_count();
  const std::uint32_t n_vertices = std::uint32_t{1} << n;
  const int n_plus = d.n_plus(), n_minus = d.n_minus();

  // Circle data for every vertex, flattened.
  std::vector<std::uint8_t> circle_of(static_cast<std::size_t>(n_vertices) * n_arcs);
  std::vector<std::uint8_t> circle_count(n_vertices);
  std::vector<std::uint64_t> essential(n_vertices);
  std::vector<std::uint64_t> offset(static_cast<std::size_t>(n_vertices) + 1, 0);
  for (std::uint32_t v = 0; v < n_vertices; ++v) {
    StateCircles s = smooth(d, Resolution{v, n}, closure_arcs);
    if (s.count > 40) throw ResourceError("too many circles in one resolution");
    circle_count[v] = static_cast<std::uint8_t>(s.count);
    essential[v] = s.essential_mask();
    for (std::size_t a = 0; a < n_arcs; ++a)
      circle_of[static_cast<std::size_t>(v) * n_arcs + a] = static_cast<std::uint8_t>(s.arc_circle[a]);
    offset[v + 1] = offset[v] + (std::uint64_t{1} << s.count);
    if (offset[v + 1] > opts.generator_limit) {
      throw ResourceError("generator limit " + std::to_string(opts.generator_limit) +
                          " exceeded");
    }
  }
  const std::size_t total = offset[n_vertices];

  auto grading_i = [&](std::uint32_t v) { return std::popcount(v) - n_minus; };
  auto grading_j = [&](std::uint32_t v, std::uint64_t labels) {
    int deg = 2 * std::popcount(labels) - circle_count[v];
    return deg + std::popcount(v) + n_plus - 2 * n_minus;
  };
  auto grading_k = [&](std::uint32_t v, std::uint64_t labels) {
    return 2 * std::popcount(labels & essential[v]) - std::popcount(essential[v]);
  };

  ChainComplex cx;
  cx.annular = annular;
  cx.n_plus = n_plus;
  cx.n_minus = n_minus;
  cx.crossing_count = n;

  std::map<GradingKey, std::uint32_t> block_index;
  std::vector<ComplexBlock> blocks;
  std::vector<std::uint32_t> gen_block(total), gen_local(total);
  for (std::uint32_t v = 0; v < n_vertices; ++v) {
    const int i = grading_i(v);
    for (std::uint64_t labels = 0; labels < (std::uint64_t{1} << circle_count[v]); ++labels) {
      GradingKey key{grading_j(v, labels), std::nullopt};
      if (annular) key.k = grading_k(v, labels);
      auto [it, inserted] = block_index.try_emplace(key, static_cast<std::uint32_t>(blocks.size()));
      if (inserted) {
        ComplexBlock b;
        b.key = key;
        b.i_min = -n_minus;
        b.generators.resize(n + 1);
        blocks.push_back(std::move(b));
      }
      auto& slot = blocks[it->second].generators[static_cast<std::size_t>(i + n_minus)];
      const std::size_t g = offset[v] + labels;
      gen_block[g] = it->second;
      gen_local[g] = static_cast<std::uint32_t>(slot.size());
      slot.push_back({v, labels});
    }
  }

  std::vector<std::vector<std::vector<BitEntry>>> entries(
      blocks.size(), std::vector<std::vector<BitEntry>>(n));
  std::vector<std::uint8_t> circle_map(64);
  std::vector<std::uint64_t> images;

  for (std::uint32_t v = 0; v < n_vertices; ++v) {
    const std::uint8_t* here = &circle_of[static_cast<std::size_t>(v) * n_arcs];
    for (std::size_t x = 0; x < n; ++x) {
      if ((v >> x) & 1u) continue;
      const std::uint32_t w = v | (std::uint32_t{1} << x);
      const std::uint8_t* there = &circle_of[static_cast<std::size_t>(w) * n_arcs];
      for (std::size_t a = 0; a < n_arcs; ++a) circle_map[here[a]] = there[a];

      const auto& arcs = d.crossing_arcs(x);
      const std::uint8_t c1 = here[arcs[0]], c2 = here[arcs[2]];
      const bool merge = c1 != c2;
      const std::uint8_t s1 = there[arcs[0]], s2 = there[arcs[1]];
      if (!merge && s1 == s2) throw IntegrityError("split produced a single circle");
      if (merge && s1 != s2) throw IntegrityError("merge produced two circles");

      const std::size_t t = static_cast<std::size_t>(grading_i(v) + n_minus);
      for (std::uint64_t labels = 0; labels < (std::uint64_t{1} << circle_count[v]); ++labels) {
        std::uint64_t base = 0;
        for (std::uint8_t c = 0; c < circle_count[v]; ++c) {
          if (c == c1 || c == c2) continue;
          if ((labels >> c) & 1u) base |= std::uint64_t{1} << circle_map[c];
        }
        images.clear();
        if (merge) {
          const int plus = static_cast<int>((labels >> c1) & 1u) + static_cast<int>((labels >> c2) & 1u);
          if (plus == 2) images.push_back(base | (std::uint64_t{1} << s1));
          if (plus == 1) images.push_back(base);
        } else if ((labels >> c1) & 1u) {
          images.push_back(base | (std::uint64_t{1} << s1));
          images.push_back(base | (std::uint64_t{1} << s2));
        } else {
          images.push_back(base);
        }

        const std::size_t source = offset[v] + labels;
        for (std::uint64_t image : images) {
          const std::size_t target = offset[w] + image;
          if (gen_block[target] != gen_block[source]) {
            const int dj = grading_j(w, image) - grading_j(v, labels);
            const int dk = annular ? grading_k(w, image) - grading_k(v, labels) : 0;
            if (dj != 0 || !annular || dk != -2) {
              throw IntegrityError("differential shifts gradings by (dj=" + std::to_string(dj) +
                                   ", dk=" + std::to_string(dk) + ")");
            }
            continue;  // k-lowering part; dropped in the annular complex
          }
          entries[gen_block[source]][t].emplace_back(gen_local[target], gen_local[source]);
        }
      }
    }
  }

  for (std::size_t b = 0; b < blocks.size(); ++b) {
    auto& block = blocks[b];
    for (std::size_t t = 0; t < n; ++t) {
      block.differentials.push_back(SparseBitMatrix::from_entries(
          block.generators[t + 1].size(), block.generators[t].size(), std::move(entries[b][t])));
    }
  }
  // Order blocks by key.
  for (const auto& [key, idx] : block_index) cx.blocks.push_back(std::move(blocks[idx]));
  return cx;
}

}  // namespace detail

inline ChainComplex build_kh_complex(const PlanarDiagram& d, const ComplexOptions& opts = {}) {
  return detail::build_cube(d, detail::kNoAxis, false, opts);
}

inline ChainComplex build_akh_complex(const AnnularDiagram& d, const ComplexOptions& opts = {}) {
  return detail::build_cube(d.planar(), d.closure_arcs(), true, opts);
}

/// Throws IntegrityError unless d_{i+1} d_i = 0 in every block. Returns the
/// number of compositions checked.
inline std::size_t check_d_squared(const ChainComplex& cx) {
  std::size_t checked = 0;
  for (const auto& block : cx.blocks) {
    for (std::size_t t = 0; t + 1 < block.differentials.size(); ++t) {
      if (!product_is_zero(block.differentials[t + 1], block.differentials[t])) {
        std::string key = "j=" + std::to_string(block.key.j);
        if (block.key.k) key += " k=" + std::to_string(*block.key.k);
        throw IntegrityError("d^2 != 0 in block " + key + " at i=" +
                             std::to_string(block.i_min + static_cast<int>(t)));
      }
      ++checked;
    }
  }
  return checked;
}

/// Debug listing: generators per (block, i) and the nonzero matrix entries.
inline void dump_complex(const ChainComplex& cx, std::ostream& out) {
  out << (cx.annular ? "akh" : "kh") << " complex: crossings=" << cx.crossing_count
      << " n_plus=" << cx.n_plus << " n_minus=" << cx.n_minus
      << " generators=" << cx.total_generators() << '\n';
  for (const auto& block : cx.blocks) {
    out << "block j=" << block.key.j;
    if (block.key.k) out << " k=" << *block.key.k;
    out << '\n';
    for (int i = block.i_min; i <= block.i_max(); ++i) {
      const auto& gens = block.generators[static_cast<std::size_t>(i - block.i_min)];
      if (gens.empty()) continue;
      out << "  C^" << i << " dim=" << gens.size() << ':';
      for (const auto& g : gens) {
        out << " r=";
        for (std::size_t c = 0; c < cx.crossing_count; ++c) out << ((g.vertex >> c) & 1u);
        out << "/l=" << g.labels;
      }
      out << '\n';
    }
    for (std::size_t t = 0; t < block.differentials.size(); ++t) {
      const auto& m = block.differentials[t];
      if (m.nnz() == 0) continue;
      out << "  d^" << block.i_min + static_cast<int>(t) << ':';
      for (const auto& [r, c] : m.entries()) out << " (" << r << ',' << c << ",1)";
      out << '\n';
    }
  }
}

}  // namespace causalkh
