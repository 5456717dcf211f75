#pragma once

// Graded homology dimensions (Kh and AKh over Z/2) and Euler characteristics.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "causalkh/cube.hpp"
#include "causalkh/gf2linalg.hpp"
#include "causalkh/hash.hpp"
#include "causalkh/linkdiag.hpp"
#include "causalkh/parallel.hpp"
#include "nlohmann/json.hpp"

namespace causalkh {

inline constexpr const char* kConventionTag =
    "z2;i=|r|-n_minus;j=deg+|r|+n_plus-2n_minus;k=ess(v+)-ess(v-);sigma_i=positive;meridian=ccw";
inline constexpr const char* kCodeVersion = "1.0.0";

struct Grading {
  int i = 0;
  int j = 0;
  std::optional<int> k;

  friend auto operator<=>(const Grading&, const Grading&) = default;
};

class GradedDims {
 public:
  GradedDims() = default;
  explicit GradedDims(std::uint64_t diagram_hash, std::string convention = kConventionTag)
      : diagram_hash_(diagram_hash), convention_(std::move(convention)) {}

  /// Adds to the dimension at g; zero totals are dropped.
  void add(const Grading& g, std::size_t dim) {
    if (dim == 0) return;
    entries_[g] += dim;
  }

  const std::map<Grading, std::size_t>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t dim(const Grading& g) const {
    auto it = entries_.find(g);
    return it == entries_.end() ? 0 : it->second;
  }
  std::size_t total_dimension() const {
    std::size_t total = 0;
    for (const auto& [g, d] : entries_) total += d;
    return total;
  }
  bool triply_graded() const { return !entries_.empty() && entries_.begin()->first.k.has_value(); }

  std::uint64_t diagram_hash() const { return diagram_hash_; }
  const std::string& convention() const { return convention_; }

  /// Sums over k, giving bigraded dims.
  GradedDims marginalize_k() const {
    GradedDims out(diagram_hash_, convention_);
    for (const auto& [g, d] : entries_) out.add(Grading{g.i, g.j, std::nullopt}, d);
    return out;
  }

  /// Compares dimensions; refuses values computed under another convention.
  bool same_dims(const GradedDims& other) const {
    if (convention_ != other.convention_) {
      throw IntegrityError("graded dimensions computed under different conventions: '" +
                           convention_ + "' vs '" + other.convention_ + "'");
    }
    return entries_ == other.entries_;
  }

  friend bool operator==(const GradedDims& a, const GradedDims& b) {
    return a.convention_ == b.convention_ && a.entries_ == b.entries_;
  }

 private:
  std::map<Grading, std::size_t> entries_;
  std::uint64_t diagram_hash_ = 0;
  std::string convention_ = kConventionTag;
};

/// [{"i":..,"j":..,"k":..|null,"dim":..}, ...] in lexicographic grading order.
inline nlohmann::json to_json(const GradedDims& g) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [grading, dim] : g.entries()) {
    nlohmann::json e;
    e["i"] = grading.i;
    e["j"] = grading.j;
    e["k"] = grading.k ? nlohmann::json(*grading.k) : nlohmann::json(nullptr);
    e["dim"] = dim;
    out.push_back(std::move(e));
  }
  return out;
}

inline GradedDims graded_dims_from_json(const nlohmann::json& array, std::uint64_t diagram_hash = 0,
                                        std::string convention = kConventionTag) {
  if (!array.is_array()) throw ParseError("graded dimensions must be a JSON array");
  GradedDims out(diagram_hash, std::move(convention));
  for (const auto& e : array) {
    Grading g{e.at("i").get<int>(), e.at("j").get<int>(), std::nullopt};
    if (!e.at("k").is_null()) g.k = e.at("k").get<int>();
    out.add(g, e.at("dim").get<std::size_t>());
  }
  return out;
}

/// Compact text form, e.g. "(0,1):1 (0,-1):1".
inline std::string to_text(const GradedDims& g) {
  std::string out;
  for (const auto& [grading, dim] : g.entries()) {
    if (!out.empty()) out += ' ';
    out += '(' + std::to_string(grading.i) + ',' + std::to_string(grading.j);
    if (grading.k) out += ',' + std::to_string(*grading.k);
    out += "):" + std::to_string(dim);
  }
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------------------
// Laurent polynomials in q

class LaurentPolynomial {
 public:
  LaurentPolynomial() = default;
  LaurentPolynomial(std::initializer_list<std::pair<const int, long long>> terms) {
    for (const auto& [e, c] : terms) add_term(e, c);
  }

  static LaurentPolynomial monomial(int exponent, long long coefficient = 1) {
    LaurentPolynomial p;
    p.add_term(exponent, coefficient);
    return p;
  }

  void add_term(int exponent, long long coefficient) {
    if (coefficient == 0) return;
    long long& c = terms_[exponent];
    c += coefficient;
    if (c == 0) terms_.erase(exponent);
  }

  const std::map<int, long long>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  long long coefficient(int exponent) const {
    auto it = terms_.find(exponent);
    return it == terms_.end() ? 0 : it->second;
  }

  LaurentPolynomial& operator+=(const LaurentPolynomial& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  friend LaurentPolynomial operator+(LaurentPolynomial a, const LaurentPolynomial& b) { return a += b; }
  friend LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    LaurentPolynomial out;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
    return out;
  }
  friend bool operator==(const LaurentPolynomial&, const LaurentPolynomial&) = default;

  /// Highest power first: "q^6 + q^4 + q^2 + 1".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      auto [e, c] = *it;
      long long mag = c < 0 ? -c : c;
      if (out.empty()) {
        if (c < 0) out += '-';
      } else {
        out += c < 0 ? " - " : " + ";
      }
      if (mag != 1 || e == 0) out += std::to_string(mag);
      if (e != 0) out += e == 1 ? "q" : "q^" + std::to_string(e);
    }
    return out;
  }

 private:
  std::map<int, long long> terms_;
};

// ---------------------------------------------------------------------------
// Homology

inline std::uint64_t diagram_hash(const PlanarDiagram& d) { return fnv1a("pd:" + serialize_pd(d)); }
inline std::uint64_t diagram_hash(const AnnularDiagram& d) {
  return fnv1a("braid:" + std::to_string(d.strand_count()) + ':' + d.presentation().to_string());
}

/// Homology dimensions of every block, with d^2 = 0 checked on the way.
inline GradedDims homology(const ChainComplex& cx, std::uint64_t hash) {
  std::vector<std::vector<std::size_t>> per_block(cx.blocks.size());
  parallel_for(cx.blocks.size(), [&](std::size_t b) {
    const auto& block = cx.blocks[b];
    const std::size_t len = block.generators.size();
    std::vector<std::size_t> ranks(block.differentials.size());
    for (std::size_t t = 0; t < block.differentials.size(); ++t) {
      ranks[t] = rank(block.differentials[t]);
      if (t > 0 && !product_is_zero(block.differentials[t], block.differentials[t - 1])) {
        throw IntegrityError("d^2 != 0 in block j=" + std::to_string(block.key.j));
      }
    }
    per_block[b].resize(len);
    for (std::size_t t = 0; t < len; ++t) {
      std::size_t out_rank = t < ranks.size() ? ranks[t] : 0;
      std::size_t in_rank = t > 0 ? ranks[t - 1] : 0;
      per_block[b][t] = block.generators[t].size() - out_rank - in_rank;
    }
  });
  GradedDims out(hash);
  for (std::size_t b = 0; b < cx.blocks.size(); ++b) {
    const auto& block = cx.blocks[b];
    for (std::size_t t = 0; t < per_block[b].size(); ++t) {
      out.add(Grading{block.i_min + static_cast<int>(t), block.key.j, block.key.k}, per_block[b][t]);
    }
  }
  return out;
}

inline GradedDims kh(const PlanarDiagram& d, const ComplexOptions& opts = {}) {
  return homology(build_kh_complex(d, opts), diagram_hash(d));
}

inline GradedDims akh(const AnnularDiagram& d, const ComplexOptions& opts = {}) {
  return homology(build_akh_complex(d, opts), diagram_hash(d));
}

/// sum (-1)^i q^j dim, with k summed out.
inline LaurentPolynomial graded_euler(const GradedDims& g) {
  LaurentPolynomial p;
  for (const auto& [grading, dim] : g.entries()) {
    long long c = static_cast<long long>(dim);
    p.add_term(grading.j, (grading.i % 2 == 0) ? c : -c);
  }
  return p;
}

/// State sum (-1)^{n-} q^{n+ - 2n-} sum_r (-q)^{|r|} (q + 1/q)^{circles(r)};
/// uses circle counts only, no ranks.
inline LaurentPolynomial chain_euler(const PlanarDiagram& d, const ComplexOptions& opts = {}) {
  detail::check_crossing_limit(d, opts);
  const std::size_t n = d.crossing_count();
  // circles -> (weight -> number of vertices)
  std::map<std::size_t, std::map<int, long long>> census;
  for (std::uint32_t v = 0; v < (std::uint32_t{1} << n); ++v) {
    Resolution r{v, n};
    census[smooth(d, r).count][r.weight()] += 1;
  }
  const LaurentPolynomial q_plus_inv{{1, 1}, {-1, 1}};
  LaurentPolynomial sum;
  for (const auto& [circles, by_weight] : census) {
    LaurentPolynomial power = LaurentPolynomial::monomial(0);
    for (std::size_t c = 0; c < circles; ++c) power = power * q_plus_inv;
    LaurentPolynomial weights;
    for (const auto& [w, count] : by_weight) weights.add_term(w, (w % 2 == 0) ? count : -count);
    sum += weights * power;
  }
  long long sign = (d.n_minus() % 2 == 0) ? 1 : -1;
  return LaurentPolynomial::monomial(d.n_plus() - 2 * d.n_minus(), sign) * sum;
}

}  // namespace causalkh
