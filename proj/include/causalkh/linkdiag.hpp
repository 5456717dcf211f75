#pragma once

// Oriented link diagrams in the plane and in the annulus.
//
// Text grammars:
//   braid word   "1 1 -2"             signed generator indices, whitespace separated
//   PD code      "X(1,3,2,4) O(5)"    X(a,b,c,d): a is the incoming under-arc, the
//                                     others follow counterclockwise; O(id) is a
//                                     crossingless circle
//
// Orientation of a parsed PD code is inferred: under-strands run a -> c. A
// component that only passes over other strands is oriented so that the first
// occurrence (in crossing order, then slot order) of its smallest arc label is
// that arc's tail. Diagrams built here are labelled so that the rule recovers
// their orientation, which makes parse_pd(serialize_pd(d)) == d.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "causalkh/errors.hpp"

namespace causalkh {

// ---------------------------------------------------------------------------
// Braid words

class BraidWord {
 public:
  BraidWord() = default;

  BraidWord(int strand_count, std::vector<int> letters)
      : strand_count_(strand_count), letters_(std::move(letters)) {
    if (strand_count_ < 1) {
      throw ParseError("strand count must be positive, got " +
                       std::to_string(strand_count_));
    }
    for (int g : letters_) {
      if (g == 0) throw ParseError("braid letter '0' is not a generator");
      if (std::abs(g) >= strand_count_) {
        throw ParseError("braid letter '" + std::to_string(g) +
                         "' out of range for " + std::to_string(strand_count_) +
                         " strands");
      }
    }
  }

  int strand_count() const { return strand_count_; }
  const std::vector<int>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  /// perm[p] is the final position of the strand that starts at position p.
  std::vector<int> permutation() const {
    std::vector<int> at(strand_count_);  // at[pos] = starting strand
    std::iota(at.begin(), at.end(), 0);
    for (int g : letters_) {
      int i = std::abs(g) - 1;
      std::swap(at[i], at[i + 1]);
    }
    std::vector<int> perm(strand_count_);
    for (int pos = 0; pos < strand_count_; ++pos) perm[at[pos]] = pos;
    return perm;
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t n = 0; n < letters_.size(); ++n) {
      if (n) out += ' ';
      out += std::to_string(letters_[n]);
    }
    return out;
  }

  friend bool operator==(const BraidWord&, const BraidWord&) = default;

 private:
  int strand_count_ = 1;
  std::vector<int> letters_;
};

inline BraidWord parse_braid(std::string_view text, int strands) {
  std::vector<int> letters;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() &&
           (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' ||
            text[pos] == '\r')) {
      ++pos;
    }
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && text[end] != ' ' && text[end] != '\t' &&
           text[end] != '\n' && text[end] != '\r') {
      ++end;
    }
    std::string_view token = text.substr(pos, end - pos);
    std::string_view digits = token;
    if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
    int value = 0;
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (digits.empty() || ec != std::errc() ||
        ptr != digits.data() + digits.size()) {
      throw ParseError("invalid braid letter '" + std::string(token) + "'");
    }
    if (value == 0 || std::abs(value) >= strands) {
      throw ParseError("braid letter '" + std::string(token) +
                       "' out of range for " + std::to_string(strands) +
                       " strands");
    }
    letters.push_back(value);
    pos = end;
  }
  return BraidWord(strands, std::move(letters));
}

// ---------------------------------------------------------------------------
// Planar diagrams

struct Crossing {
  std::array<int, 4> arcs{};  // labels, counterclockwise from incoming under-arc
  int sign = 0;               // +1 or -1

  friend bool operator==(const Crossing&, const Crossing&) = default;
};

struct ArcEnd {
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::uint32_t crossing = kNone;
  std::uint8_t slot = 0;

  bool valid() const { return crossing != kNone; }
  std::uint32_t scan_index() const { return crossing * 4 + slot; }
  friend bool operator==(const ArcEnd&, const ArcEnd&) = default;
};

namespace detail {
struct DiagramBuilder;
}

class PlanarDiagram {
 public:
  /// Validates a PD code and infers orientations. Throws ParseError.
  static PlanarDiagram from_code(std::vector<std::array<int, 4>> code,
                                 std::vector<int> loops);

  const std::vector<Crossing>& crossings() const { return crossings_; }
  const std::vector<int>& loops() const { return loops_; }

  std::size_t crossing_count() const { return crossings_.size(); }
  std::size_t arc_count() const { return labels_.size(); }
  int n_plus() const { return n_plus_; }
  int n_minus() const { return n_minus_; }
  int writhe() const { return n_plus_ - n_minus_; }
  int component_count() const { return component_count_; }

  // Dense internal arc indices 0..arc_count()-1, ordered by label.
  const std::array<std::uint32_t, 4>& crossing_arcs(std::size_t x) const {
    return crossing_index_[x];
  }
  std::uint32_t loop_arc(std::size_t n) const { return loop_index_[n]; }
  int arc_label(std::uint32_t idx) const { return labels_[idx]; }
  std::uint32_t arc_index(int label) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
    if (it == labels_.end() || *it != label) {
      throw ParseError("unknown arc label " + std::to_string(label));
    }
    return static_cast<std::uint32_t>(it - labels_.begin());
  }
  ArcEnd tail(std::uint32_t idx) const { return tail_[idx]; }
  ArcEnd head(std::uint32_t idx) const { return head_[idx]; }
  int arc_component(std::uint32_t idx) const { return arc_component_[idx]; }

  friend bool operator==(const PlanarDiagram& a, const PlanarDiagram& b) {
    return a.crossings_ == b.crossings_ && a.loops_ == b.loops_ &&
           a.component_count_ == b.component_count_;
  }

 private:
  std::vector<Crossing> crossings_;
  std::vector<int> loops_;
  std::vector<int> labels_;
  std::vector<std::array<std::uint32_t, 4>> crossing_index_;
  std::vector<std::uint32_t> loop_index_;
  std::vector<ArcEnd> tail_;
  std::vector<ArcEnd> head_;
  std::vector<int> arc_component_;
  int n_plus_ = 0;
  int n_minus_ = 0;
  int component_count_ = 0;
};

namespace detail {

// Strand continuation through a crossing: a <-> c, b <-> d.
inline constexpr std::uint8_t opposite_slot(std::uint8_t s) { return s ^ 2; }

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0u);
  }
  std::uint32_t find(std::uint32_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace detail

inline PlanarDiagram PlanarDiagram::from_code(
    std::vector<std::array<int, 4>> code, std::vector<int> loops) {
  if (code.empty() && loops.empty()) throw ParseError("empty diagram");

  PlanarDiagram d;
  std::map<int, int> occurrences;
  for (const auto& x : code)
    for (int label : x) ++occurrences[label];
  for (const auto& [label, count] : occurrences) {
    if (count != 2) {
      throw ParseError("arc " + std::to_string(label) + " appears " +
                       (count == 1 ? std::string("once")
                                   : std::to_string(count) + " times") +
                       ", expected twice");
    }
  }
  {
    std::vector<int> sorted_loops = loops;
    std::sort(sorted_loops.begin(), sorted_loops.end());
    for (std::size_t n = 0; n < sorted_loops.size(); ++n) {
      if (occurrences.count(sorted_loops[n]) ||
          (n + 1 < sorted_loops.size() && sorted_loops[n] == sorted_loops[n + 1])) {
        throw ParseError("circle O(" + std::to_string(sorted_loops[n]) +
                         ") reuses an arc label");
      }
    }
  }

  for (const auto& [label, count] : occurrences) d.labels_.push_back(label);
  for (int label : loops) d.labels_.push_back(label);
  std::sort(d.labels_.begin(), d.labels_.end());

  const std::size_t n_arcs = d.labels_.size();
  d.crossing_index_.resize(code.size());
  std::vector<std::array<ArcEnd, 2>> ends(n_arcs);
  std::vector<int> seen(n_arcs, 0);
  for (std::uint32_t x = 0; x < code.size(); ++x) {
    for (std::uint8_t s = 0; s < 4; ++s) {
      std::uint32_t idx = d.arc_index(code[x][s]);
      d.crossing_index_[x][s] = idx;
      ends[idx][seen[idx]++] = ArcEnd{x, s};
    }
  }
  for (int label : loops) d.loop_index_.push_back(d.arc_index(label));

  auto other_end = [&](std::uint32_t idx, ArcEnd e) {
    return ends[idx][0] == e ? ends[idx][1] : ends[idx][0];
  };

  d.tail_.assign(n_arcs, ArcEnd{});
  d.head_.assign(n_arcs, ArcEnd{});
  d.arc_component_.assign(n_arcs, -1);
  int component = 0;

  // Walk each strand cycle once in scan order of its first arc.
  std::vector<std::uint32_t> scan_arcs;
  for (std::uint32_t x = 0; x < code.size(); ++x)
    for (std::uint8_t s = 0; s < 4; ++s) scan_arcs.push_back(d.crossing_index_[x][s]);

  for (std::uint32_t start : scan_arcs) {
    if (d.arc_component_[start] >= 0) continue;
    struct Step {
      std::uint32_t arc;
      ArcEnd from;
      ArcEnd to;
    };
    std::vector<Step> cycle;
    std::uint32_t arc = start;
    ArcEnd from = ends[start][0];
    while (true) {
      ArcEnd to = other_end(arc, from);
      if (d.arc_component_[arc] >= 0) {
        throw ParseError("arc " + std::to_string(d.labels_[arc]) +
                         " is traversed twice by one strand");
      }
      d.arc_component_[arc] = component;
      cycle.push_back({arc, from, to});
      ArcEnd next{to.crossing, detail::opposite_slot(to.slot)};
      std::uint32_t next_arc = d.crossing_index_[next.crossing][next.slot];
      if (next_arc == start && next == ends[start][0]) break;
      arc = next_arc;
      from = next;
    }

    // +1: traversal direction is the orientation; -1: reversed.
    int direction = 0;
    for (const Step& step : cycle) {
      if (step.to.slot == 0 || step.from.slot == 2) {
        direction = 1;
        break;
      }
      if (step.from.slot == 0 || step.to.slot == 2) {
        direction = -1;
        break;
      }
    }
    if (direction == 0) {
      // Over-only strand: the smallest label's first occurrence is its tail.
      const Step* smallest = &cycle.front();
      for (const Step& step : cycle)
        if (d.labels_[step.arc] < d.labels_[smallest->arc]) smallest = &step;
      ArcEnd first = ends[smallest->arc][0];  // ends are recorded in scan order
      direction = (smallest->from == first) ? 1 : -1;
    }
    for (const Step& step : cycle) {
      ArcEnd t = direction > 0 ? step.from : step.to;
      ArcEnd h = direction > 0 ? step.to : step.from;
      if (h.slot == 2 || t.slot == 0) {
        throw ParseError("orientation inconsistency at arc " +
                         std::to_string(d.labels_[step.arc]));
      }
      d.tail_[step.arc] = t;
      d.head_[step.arc] = h;
    }
    ++component;
  }
  for (std::uint32_t idx : d.loop_index_) d.arc_component_[idx] = component++;
  d.component_count_ = component;

  // Signs from the over-strand direction.
  for (std::uint32_t x = 0; x < code.size(); ++x) {
    Crossing c;
    c.arcs = code[x];
    std::uint32_t over_d = d.crossing_index_[x][3];
    bool d_incoming = d.head_[over_d] == ArcEnd{x, 3};
    c.sign = d_incoming ? 1 : -1;
    (c.sign > 0 ? d.n_plus_ : d.n_minus_)++;
    d.crossings_.push_back(c);
  }
  d.loops_ = std::move(loops);

  // Planarity: V - E + F = 2 on every connected piece.
  const std::size_t n_x = code.size();
  detail::UnionFind pieces(n_x);
  for (std::uint32_t idx = 0; idx < n_arcs; ++idx)
    if (ends[idx][0].valid()) pieces.unite(ends[idx][0].crossing, ends[idx][1].crossing);
  std::map<std::uint32_t, std::array<long, 3>> euler;  // root -> V, E, F
  for (std::uint32_t x = 0; x < n_x; ++x) {
    auto& v = euler[pieces.find(x)];
    v[0] += 1;
    v[1] += 2;
  }
  std::vector<char> visited(n_x * 4, 0);
  for (std::uint32_t h = 0; h < n_x * 4; ++h) {
    if (visited[h]) continue;
    euler[pieces.find(h / 4)][2] += 1;
    std::uint32_t cur = h;
    while (!visited[cur]) {
      visited[cur] = 1;
      ArcEnd here{cur / 4, static_cast<std::uint8_t>(cur % 4)};
      ArcEnd there = other_end(d.crossing_index_[here.crossing][here.slot], here);
      cur = there.crossing * 4 + (there.slot + 1) % 4;
    }
  }
  for (const auto& [root, vef] : euler) {
    if (vef[0] - vef[1] + vef[2] != 2) {
      throw ParseError("non-planar crossing incidence (V - E + F = " +
                       std::to_string(vef[0] - vef[1] + vef[2]) + ")");
    }
  }
  return d;
}

inline std::string serialize_pd(const PlanarDiagram& d) {
  std::string out;
  for (const Crossing& c : d.crossings()) {
    if (!out.empty()) out += ' ';
    out += "X(" + std::to_string(c.arcs[0]) + ',' + std::to_string(c.arcs[1]) +
           ',' + std::to_string(c.arcs[2]) + ',' + std::to_string(c.arcs[3]) + ')';
  }
  for (int label : d.loops()) {
    if (!out.empty()) out += ' ';
    out += "O(" + std::to_string(label) + ')';
  }
  return out;
}

inline PlanarDiagram parse_pd(std::string_view text) {
  std::vector<std::array<int, 4>> code;
  std::vector<int> loops;
  std::size_t pos = 0;
  auto skip_separators = [&] {
    while (pos < text.size() &&
           (text[pos] == ' ' || text[pos] == ',' || text[pos] == '\t' ||
            text[pos] == '\n' || text[pos] == '\r')) {
      ++pos;
    }
  };
  while (true) {
    skip_separators();
    if (pos >= text.size()) break;
    char kind = text[pos];
    std::size_t close = text.find(')', pos);
    if ((kind != 'X' && kind != 'O') || pos + 1 >= text.size() ||
        text[pos + 1] != '(' || close == std::string_view::npos) {
      std::size_t end = text.find_first_of(" \t\n", pos);
      throw ParseError("unexpected token '" +
                       std::string(text.substr(pos, end - pos)) + "'");
    }
    std::string_view body = text.substr(pos + 2, close - pos - 2);
    std::vector<int> values;
    std::size_t b = 0;
    while (b <= body.size()) {
      std::size_t comma = body.find(',', b);
      if (comma == std::string_view::npos) comma = body.size();
      std::string_view field = body.substr(b, comma - b);
      while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
      while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
      int value = 0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError("invalid arc label '" + std::string(field) + "' in '" +
                         std::string(text.substr(pos, close - pos + 1)) + "'");
      }
      values.push_back(value);
      b = comma + 1;
    }
    std::string token(text.substr(pos, close - pos + 1));
    if (kind == 'X') {
      if (values.size() != 4) throw ParseError("crossing '" + token + "' needs 4 arcs");
      code.push_back({values[0], values[1], values[2], values[3]});
    } else {
      if (values.size() != 1) throw ParseError("circle '" + token + "' needs 1 arc");
      loops.push_back(values[0]);
    }
    pos = close + 1;
  }
  return PlanarDiagram::from_code(std::move(code), std::move(loops));
}

// ---------------------------------------------------------------------------
// Construction of closed-braid diagrams

namespace detail {

// A diagram under construction: temporary arc ids and known signs.
struct RawDiagram {
  std::vector<std::array<int, 4>> crossings;
  std::vector<int> signs;
  std::vector<int> loops;
  int next_id = 0;

  int fresh() { return next_id++; }
  void add(std::array<int, 4> arcs, int sign) {
    crossings.push_back(arcs);
    signs.push_back(sign);
  }
};

struct BuiltDiagram {
  PlanarDiagram diagram;
  std::vector<int> label_of;  // temporary id -> final label
};

// Relabels arcs densely in traversal order and validates through from_code.
inline BuiltDiagram finalize(const RawDiagram& raw) {
  const int n_ids = raw.next_id;
  std::vector<ArcEnd> tail(n_ids), head(n_ids);
  for (std::uint32_t x = 0; x < raw.crossings.size(); ++x) {
    const auto& arcs = raw.crossings[x];
    std::uint8_t over_in = raw.signs[x] > 0 ? 3 : 1;
    std::uint8_t over_out = raw.signs[x] > 0 ? 1 : 3;
    head[arcs[0]] = {x, 0};
    tail[arcs[2]] = {x, 2};
    head[arcs[over_in]] = {x, over_in};
    tail[arcs[over_out]] = {x, over_out};
  }

  // Strand cycles; each starts at its arc with the earliest tail in scan order.
  std::vector<int> component_of(n_ids, -1);
  std::vector<std::vector<int>> cycles;
  std::vector<int> by_tail;
  for (int id = 0; id < n_ids; ++id)
    if (tail[id].valid()) by_tail.push_back(id);
  std::sort(by_tail.begin(), by_tail.end(), [&](int a, int b) {
    return tail[a].scan_index() < tail[b].scan_index();
  });
  for (int start : by_tail) {
    if (component_of[start] >= 0) continue;
    std::vector<int> cycle;
    int id = start;
    do {
      component_of[id] = static_cast<int>(cycles.size());
      cycle.push_back(id);
      ArcEnd h = head[id];
      id = raw.crossings[h.crossing][opposite_slot(h.slot)];
    } while (id != start);
    cycles.push_back(std::move(cycle));
  }

  BuiltDiagram built;
  built.label_of.assign(n_ids, 0);
  int label = 1;
  for (const auto& cycle : cycles)
    for (int id : cycle) built.label_of[id] = label++;
  for (int id : raw.loops) built.label_of[id] = label++;

  std::vector<std::array<int, 4>> code;
  for (const auto& arcs : raw.crossings) {
    code.push_back({built.label_of[arcs[0]], built.label_of[arcs[1]],
                    built.label_of[arcs[2]], built.label_of[arcs[3]]});
  }
  std::vector<int> loops;
  for (int id : raw.loops) loops.push_back(built.label_of[id]);
  built.diagram = PlanarDiagram::from_code(std::move(code), std::move(loops));
  for (std::size_t x = 0; x < raw.signs.size(); ++x) {
    if (built.diagram.crossings()[x].sign != raw.signs[x]) {
      throw IntegrityError("constructed diagram lost its orientation at crossing " +
                           std::to_string(x));
    }
  }
  return built;
}

// Closed braid drawn with strands running upward and closure arcs on the
// right. With `meridian`, a counterclockwise ring encircles all strands just
// above the last letter, passing over them on its lower edge and under them on
// its upper edge. Returns the temporary ids of the closure arcs.
inline std::vector<int> build_closed_braid(const BraidWord& word, bool meridian,
                                           RawDiagram& raw) {
  const int m = word.strand_count();
  std::vector<int> start(m), cur(m);
  for (int s = 0; s < m; ++s) start[s] = cur[s] = raw.fresh();

  for (int g : word.letters()) {
    int i = std::abs(g) - 1;
    int in_l = cur[i], in_r = cur[i + 1];
    int out_l = raw.fresh(), out_r = raw.fresh();
    if (g > 0) {
      // Strand from the left passes over.
      raw.add({in_r, out_r, out_l, in_l}, +1);
    } else {
      raw.add({in_l, in_r, out_r, out_l}, -1);
    }
    cur[i] = out_l;
    cur[i + 1] = out_r;
  }

  if (meridian) {
    std::vector<int> bottom(m), top_in(m), mid(m), top_out(m);
    int left = raw.fresh();
    bottom[0] = left;
    for (int s = 1; s < m; ++s) bottom[s] = raw.fresh();
    int right = raw.fresh();
    for (int s = 0; s < m; ++s) {
      mid[s] = raw.fresh();
      top_out[s] = raw.fresh();
    }
    top_in[m - 1] = right;
    for (int s = m - 2; s >= 0; --s) top_in[s] = raw.fresh();
    for (int s = 0; s < m; ++s) {
      int ring_out = s + 1 < m ? bottom[s + 1] : right;
      raw.add({cur[s], ring_out, mid[s], bottom[s]}, +1);
    }
    for (int s = 0; s < m; ++s) {
      int ring_out = s > 0 ? top_in[s - 1] : left;
      raw.add({top_in[s], top_out[s], ring_out, mid[s]}, +1);
      cur[s] = top_out[s];
    }
  }

  // Close up: the top of each position feeds the bottom of the same position.
  std::vector<int> alias(raw.next_id);
  std::iota(alias.begin(), alias.end(), 0);
  std::vector<int> closure;
  for (int s = 0; s < m; ++s) {
    if (cur[s] == start[s]) {
      raw.loops.push_back(start[s]);
    } else {
      alias[start[s]] = cur[s];
    }
    closure.push_back(cur[s]);
  }
  for (auto& arcs : raw.crossings)
    for (int& id : arcs) id = alias[id];
  return closure;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Annular diagrams (closed braids about the annulus axis)

class AnnularDiagram {
 public:
  explicit AnnularDiagram(BraidWord presentation)
      : presentation_(std::move(presentation)) {
    std::vector<int> perm = presentation_.permutation();
    std::vector<char> done(perm.size(), 0);
    for (std::size_t s = 0; s < perm.size(); ++s) {
      if (done[s]) continue;
      int length = 0;
      for (std::size_t p = s; !done[p]; p = perm[p]) {
        done[p] = 1;
        ++length;
      }
      windings_.push_back(length);
    }

    detail::RawDiagram raw;
    std::vector<int> closure = detail::build_closed_braid(presentation_, false, raw);
    detail::BuiltDiagram built = detail::finalize(raw);
    planar_ = std::move(built.diagram);
    closure_arcs_.assign(planar_.arc_count(), false);
    for (int id : closure) closure_arcs_[planar_.arc_index(built.label_of[id])] = true;
  }

  const BraidWord& presentation() const { return presentation_; }
  int strand_count() const { return presentation_.strand_count(); }
  /// Winding of each closure component about the axis, ordered by the
  /// smallest starting position on the component.
  const std::vector<int>& component_windings() const { return windings_; }
  int component_count() const { return static_cast<int>(windings_.size()); }
  const PlanarDiagram& planar() const { return planar_; }
  /// Per internal arc index: does the arc run through the closure region.
  const std::vector<bool>& closure_arcs() const { return closure_arcs_; }

  friend bool operator==(const AnnularDiagram& a, const AnnularDiagram& b) {
    return a.presentation_ == b.presentation_;
  }

 private:
  BraidWord presentation_;
  std::vector<int> windings_;
  PlanarDiagram planar_;
  std::vector<bool> closure_arcs_;
};

inline AnnularDiagram braid_closure(const BraidWord& word) { return AnnularDiagram(word); }

inline PlanarDiagram annular_to_planar(const AnnularDiagram& d) { return d.planar(); }

/// The closed braid together with the meridian of the solid torus, as a
/// diagram in the plane (2 * strand_count extra positive crossings).
inline PlanarDiagram augment_with_meridian(const AnnularDiagram& d) {
  detail::RawDiagram raw;
  detail::build_closed_braid(d.presentation(), true, raw);
  return detail::finalize(raw).diagram;
}

// ---------------------------------------------------------------------------
// Braid moves

namespace moves {
/// w -> g w g^-1, cancelling against w at the two junctions.
struct Conjugate {
  int generator;
};
/// Insert g g^-1 before letter `position`.
struct InsertPair {
  std::size_t position;
  int generator;
};
/// Remove letters position, position+1 (must be mutually inverse).
struct DeletePair {
  std::size_t position;
};
/// s_i s_{i+1} s_i <-> s_{i+1} s_i s_{i+1} (all letters of one sign).
struct BraidRelation {
  std::size_t position;
};
/// Swap adjacent letters whose generators are at least two apart.
struct FarCommute {
  std::size_t position;
};
}  // namespace moves

using BraidMove = std::variant<moves::Conjugate, moves::InsertPair, moves::DeletePair,
                               moves::BraidRelation, moves::FarCommute>;

inline BraidWord apply_move(const BraidWord& word, const BraidMove& move) {
  const int m = word.strand_count();
  std::vector<int> w = word.letters();
  auto check_generator = [&](int g) {
    if (g == 0 || std::abs(g) >= m) {
      throw InvalidMoveError("generator " + std::to_string(g) + " out of range for " +
                             std::to_string(m) + " strands");
    }
  };
  auto check_window = [&](std::size_t pos, std::size_t width) {
    if (pos + width > w.size()) {
      throw InvalidMoveError("position " + std::to_string(pos) +
                             " out of range for word of length " +
                             std::to_string(w.size()));
    }
  };

  std::visit(
      [&](const auto& mv) {
        using T = std::decay_t<decltype(mv)>;
        if constexpr (std::is_same_v<T, moves::Conjugate>) {
          check_generator(mv.generator);
          int g = mv.generator;
          if (!w.empty() && w.back() == g) {
            w.pop_back();  // ... g g^-1
          } else {
            w.push_back(-g);
          }
          if (!w.empty() && w.front() == -g) {
            w.erase(w.begin());  // g g^-1 ...
          } else {
            w.insert(w.begin(), g);
          }
        } else if constexpr (std::is_same_v<T, moves::InsertPair>) {
          check_generator(mv.generator);
          if (mv.position > w.size()) check_window(mv.position, 0);
          w.insert(w.begin() + static_cast<std::ptrdiff_t>(mv.position),
                   {mv.generator, -mv.generator});
        } else if constexpr (std::is_same_v<T, moves::DeletePair>) {
          check_window(mv.position, 2);
          if (w[mv.position] != -w[mv.position + 1]) {
            throw InvalidMoveError("letters at " + std::to_string(mv.position) +
                                   " are not an inverse pair");
          }
          w.erase(w.begin() + static_cast<std::ptrdiff_t>(mv.position),
                  w.begin() + static_cast<std::ptrdiff_t>(mv.position) + 2);
        } else if constexpr (std::is_same_v<T, moves::BraidRelation>) {
          check_window(mv.position, 3);
          int a = w[mv.position], b = w[mv.position + 1], c = w[mv.position + 2];
          bool same_sign = (a > 0) == (b > 0) && (b > 0) == (c > 0);
          if (!same_sign || a != c || std::abs(std::abs(a) - std::abs(b)) != 1) {
            throw InvalidMoveError("no braid relation at position " +
                                   std::to_string(mv.position));
          }
          w[mv.position] = b;
          w[mv.position + 1] = a;
          w[mv.position + 2] = b;
        } else if constexpr (std::is_same_v<T, moves::FarCommute>) {
          check_window(mv.position, 2);
          int a = w[mv.position], b = w[mv.position + 1];
          if (std::abs(std::abs(a) - std::abs(b)) < 2) {
            throw InvalidMoveError("letters at " + std::to_string(mv.position) +
                                   " do not commute");
          }
          std::swap(w[mv.position], w[mv.position + 1]);
        }
      },
      move);
  return BraidWord(m, std::move(w));
}

// ---------------------------------------------------------------------------
// Reference diagrams

enum class ModelLink { U2, P3, Unknot, HopfPositive, HopfNegative };

inline std::string to_string(ModelLink name) {
  switch (name) {
    case ModelLink::U2: return "U2";
    case ModelLink::P3: return "P3";
    case ModelLink::Unknot: return "unknot";
    case ModelLink::HopfPositive: return "hopf_positive";
    case ModelLink::HopfNegative: return "hopf_negative";
  }
  return "?";
}

inline ModelLink parse_model_link(std::string_view name) {
  for (ModelLink m : {ModelLink::U2, ModelLink::P3, ModelLink::Unknot,
                      ModelLink::HopfPositive, ModelLink::HopfNegative}) {
    if (to_string(m) == name) return m;
  }
  throw ParseError("unknown model link '" + std::string(name) + "'");
}

inline AnnularDiagram model_u2() { return braid_closure(BraidWord(2, {})); }
inline PlanarDiagram model_p3() { return augment_with_meridian(model_u2()); }
inline PlanarDiagram model_unknot() { return PlanarDiagram::from_code({}, {1}); }
inline PlanarDiagram model_hopf(int sign) {
  return annular_to_planar(braid_closure(BraidWord(2, {sign, sign})));
}

using ModelDiagram = std::variant<AnnularDiagram, PlanarDiagram>;

inline ModelDiagram model_link(ModelLink name) {
  switch (name) {
    case ModelLink::U2: return model_u2();
    case ModelLink::P3: return model_p3();
    case ModelLink::Unknot: return model_unknot();
    case ModelLink::HopfPositive: return model_hopf(+1);
    case ModelLink::HopfNegative: return model_hopf(-1);
  }
  throw ParseError("unknown model link");
}

}  // namespace causalkh
