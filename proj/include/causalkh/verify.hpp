#pragma once

// Self-verification suites: reference values, Euler consistency, metric-oracle
// agreement, route agreement, isotopy invariance and d^2 = 0.

#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "causalkh/causality.hpp"
#include "causalkh/cube.hpp"
#include "causalkh/invariants.hpp"
#include "causalkh/linkdiag.hpp"
#include "causalkh/skies.hpp"
#include "nlohmann/json.hpp"

namespace causalkh {

struct CorpusEntry {
  std::string name;
  PlanarDiagram diagram;
  std::optional<AnnularDiagram> annular;  // when the diagram is a closed braid
};

inline std::vector<CorpusEntry> diagram_corpus() {
  std::vector<CorpusEntry> out;
  auto add_planar = [&](std::string name, PlanarDiagram d) {
    out.push_back({std::move(name), std::move(d), std::nullopt});
  };
  auto add_braid = [&](std::string name, int strands, std::vector<int> letters) {
    AnnularDiagram a = braid_closure(BraidWord(strands, std::move(letters)));
    out.push_back({std::move(name), a.planar(), a});
  };
  auto add_augmented = [&](std::string name, int strands, std::vector<int> letters) {
    add_planar(std::move(name), augment_with_meridian(braid_closure(BraidWord(strands, std::move(letters)))));
  };
  add_planar("unknot", model_unknot());
  add_planar("kink", parse_pd("X(1,1,2,2)"));
  add_planar("hopf_pd", parse_pd("X(1,3,2,4) X(3,1,4,2)"));
  add_planar("two_circles", parse_pd("O(1) O(2)"));
  add_planar("P3", model_p3());
  add_braid("U2", 2, {});
  add_braid("hopf_positive", 2, {1, 1});
  add_braid("hopf_negative", 2, {-1, -1});
  add_braid("r2_pair", 2, {1, -1});
  add_braid("trefoil", 2, {1, 1, 1});
  add_braid("torus_2_4", 2, {1, 1, 1, 1});
  add_braid("figure_eight", 3, {1, -2, 1, -2});
  add_braid("borromean", 3, {1, -2, 1, -2, 1, -2});
  add_braid("three_unlinked", 3, {});
  add_braid("conjugated_pair", 3, {2, 1, -1, -2, 1, -1});
  add_augmented("augmented_hopf_negative", 2, {-1, -1});
  add_augmented("augmented_r2_pair", 2, {1, -1});
  add_augmented("augmented_one_strand", 1, {});
  add_augmented("augmented_4_strand", 4, {1, 2, -3, 1});
  return out;
}

struct SuiteResult {
  std::string name;
  std::size_t checks = 0;
  std::vector<std::string> failures;
  double seconds = 0;

  bool passed() const { return failures.empty(); }
};

inline nlohmann::json to_json(const SuiteResult& r) {
  return {{"suite", r.name},
          {"passed", r.passed()},
          {"checks", r.checks},
          {"failures", r.failures}};
}

struct VerifyOptions {
  std::size_t max_crossings = 14;
  std::size_t pairs = 200;
  std::size_t braids = 50;
  std::uint64_t seed = 7;
  double min_margin = 0.1;
  ComplexOptions complex;
  SkyOptions sky;
};

namespace detail {

template <class Body>
SuiteResult run_suite(std::string name, Body&& body) {
  SuiteResult r;
  r.name = std::move(name);
  auto start = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.failures.push_back(std::string("exception: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline void expect(SuiteResult& r, bool ok, const std::string& what) {
  ++r.checks;
  if (!ok) r.failures.push_back(what);
}

}  // namespace detail

/// Seeded event pairs in [-3,3]^2 x [-3,3] whose separation is at least
/// `min_margin` away from the light cone.
inline std::vector<std::pair<Event, Event>> random_event_pairs(std::size_t count, std::uint64_t seed,
                                                               double min_margin) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  std::vector<std::pair<Event, Event>> out;
  while (out.size() < count) {
    Event x{{coord(rng), coord(rng)}, coord(rng)};
    Event y{{coord(rng), coord(rng)}, coord(rng)};
    double margin = std::abs((y.p - x.p).norm() - std::abs(y.t - x.t));
    if (margin > min_margin) out.emplace_back(x, y);
  }
  return out;
}

/// A random word of up to `max_letters` letters on 2 or 3 strands.
inline BraidWord random_braid(std::mt19937_64& rng, std::size_t max_letters) {
  int strands = std::uniform_int_distribution<int>(2, 3)(rng);
  std::size_t length = std::uniform_int_distribution<std::size_t>(0, max_letters)(rng);
  std::uniform_int_distribution<int> gen(1, strands - 1);
  std::vector<int> letters;
  for (std::size_t n = 0; n < length; ++n) letters.push_back(gen(rng) * (rng() % 2 ? 1 : -1));
  return BraidWord(strands, std::move(letters));
}

/// A random conjugation or free insertion.
inline BraidMove random_isotopy_move(std::mt19937_64& rng, const BraidWord& w) {
  int g = std::uniform_int_distribution<int>(1, w.strand_count() - 1)(rng) * (rng() % 2 ? 1 : -1);
  if (rng() % 2) return moves::Conjugate{g};
  std::size_t pos = std::uniform_int_distribution<std::size_t>(0, w.length())(rng);
  return moves::InsertPair{pos, g};
}

inline SuiteResult suite_models(const VerifyOptions& opts) {
  return detail::run_suite("models", [&](SuiteResult& r) {
    using detail::expect;
    GradedDims unknot = kh(model_unknot(), opts.complex);
    expect(r, to_text(unknot) == "(0,-1):1 (0,1):1", "kh(unknot) = " + to_text(unknot));
    GradedDims hopf = kh(model_hopf(+1), opts.complex);
    expect(r, to_text(hopf) == "(0,0):1 (0,2):1 (2,4):1 (2,6):1", "kh(hopf_positive) = " + to_text(hopf));
    GradedDims hopf_neg = kh(model_hopf(-1), opts.complex);
    expect(r, to_text(hopf_neg) == "(-2,-6):1 (-2,-4):1 (0,-2):1 (0,0):1",
           "kh(hopf_negative) = " + to_text(hopf_neg));
    GradedDims u2 = akh(model_u2(), opts.complex);
    expect(r, to_text(u2) == "(0,-2,-2):1 (0,0,0):2 (0,2,2):1", "akh(U2) = " + to_text(u2));
    expect(r, !decide_akh(model_u2(), opts.complex).related, "decide_akh(U2) reports related");
    expect(r, !decide_kh(model_u2(), opts.complex).related, "decide_kh(U2) reports related");
    GradedDims p3 = kh(model_p3(), opts.complex);
    expect(r, p3.total_dimension() == 8, "kh(P3) total dimension " + std::to_string(p3.total_dimension()));
    expect(r, graded_euler(p3) == chain_euler(model_p3(), opts.complex), "Euler mismatch on P3");
  });
}

inline SuiteResult suite_euler(const VerifyOptions& opts) {
  return detail::run_suite("euler", [&](SuiteResult& r) {
    for (const auto& entry : diagram_corpus()) {
      if (entry.diagram.crossing_count() > opts.max_crossings) continue;
      GradedDims g = kh(entry.diagram, opts.complex);
      LaurentPolynomial state_sum = chain_euler(entry.diagram, opts.complex);
      detail::expect(r, graded_euler(g) == state_sum,
                     entry.name + ": graded Euler " + graded_euler(g).to_string() + " vs state sum " +
                         state_sum.to_string());
      detail::expect(r, g.total_dimension() >= (std::size_t{1} << entry.diagram.component_count()),
                     entry.name + ": total dimension below 2^components");
      if (entry.annular) {
        GradedDims a = akh(*entry.annular, opts.complex);
        detail::expect(r, graded_euler(a) == state_sum, entry.name + ": AKh Euler characteristic mismatch");
      }
    }
  });
}

inline SuiteResult suite_integrity(const VerifyOptions& opts) {
  return detail::run_suite("integrity", [&](SuiteResult& r) {
    for (const auto& entry : diagram_corpus()) {
      if (entry.diagram.crossing_count() > opts.max_crossings) continue;
      r.checks += check_d_squared(build_kh_complex(entry.diagram, opts.complex));
      if (entry.annular) r.checks += check_d_squared(build_akh_complex(*entry.annular, opts.complex));
    }
  });
}

inline SuiteResult suite_oracle(const VerifyOptions& opts) {
  return detail::run_suite("oracle", [&](SuiteResult& r) {
    std::size_t n = 0;
    for (const auto& [x, y] : random_event_pairs(opts.pairs, opts.seed, opts.min_margin)) {
      CausalReport report = end_to_end(x, y, Route::Akh, opts.sky, opts.complex);
      detail::expect(r, report.verdict.related == report.oracle.related(),
                     "pair " + std::to_string(n) + ": verdict " + (report.verdict.related ? "related" : "unrelated") +
                         ", oracle " + to_string(report.oracle.kind));
      ++n;
    }
  });
}

inline SuiteResult suite_routes(const VerifyOptions& opts) {
  return detail::run_suite("routes", [&](SuiteResult& r) {
    std::size_t n = 0;
    for (const auto& [x, y] : random_event_pairs(opts.pairs, opts.seed, opts.min_margin)) {
      auto akh_report = end_to_end(x, y, Route::Akh, opts.sky, opts.complex);
      auto kh_report = end_to_end(x, y, Route::Kh, opts.sky, opts.complex);
      detail::expect(r, akh_report.verdict.related == kh_report.verdict.related,
                     "pair " + std::to_string(n) + ": routes disagree");
      ++n;
    }
    for (const auto& entry : diagram_corpus()) {
      if (!entry.annular || !validate_sky_pair(*entry.annular).ok()) continue;
      detail::expect(r, decide_akh(*entry.annular, opts.complex).related ==
                            decide_kh(*entry.annular, opts.complex).related,
                     entry.name + ": routes disagree");
    }
  });
}

inline SuiteResult suite_isotopy(const VerifyOptions& opts) {
  return detail::run_suite("isotopy", [&](SuiteResult& r) {
    std::mt19937_64 rng(opts.seed);
    for (std::size_t n = 0; n < opts.braids; ++n) {
      BraidWord original = random_braid(rng, 8);
      BraidWord moved = original;
      for (int k = 0; k < 3; ++k) moved = apply_move(moved, random_isotopy_move(rng, moved));
      AnnularDiagram a = braid_closure(original), b = braid_closure(moved);
      std::string label = "[" + original.to_string() + "] -> [" + moved.to_string() + "]";
      detail::expect(r, kh(a.planar(), opts.complex).same_dims(kh(b.planar(), opts.complex)),
                     label + ": kh changed");
      detail::expect(r, akh(a, opts.complex).same_dims(akh(b, opts.complex)), label + ": akh changed");
    }
  });
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"models", "euler", "integrity", "oracle", "routes", "isotopy"};
  return names;
}

inline SuiteResult run_named_suite(const std::string& name, const VerifyOptions& opts) {
  if (name == "models") return suite_models(opts);
  if (name == "euler") return suite_euler(opts);
  if (name == "integrity") return suite_integrity(opts);
  if (name == "oracle") return suite_oracle(opts);
  if (name == "routes") return suite_routes(opts);
  if (name == "isotopy") return suite_isotopy(opts);
  throw ParseError("unknown suite '" + name + "'");
}

}  // namespace causalkh
