// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "causalkh/causalkh.hpp"
#include "support/naive_kh.hpp"

using namespace causalkh;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Peak resident set size of this process, in kB.
long peak_rss_kb() {
  std::ifstream status("/proc/self/status");
  std::string line;
  while (std::getline(status, line))
    if (line.rfind("VmHWM:", 0) == 0) return std::stol(line.substr(6));
  return -1;
}

naive::Pd to_naive(const PlanarDiagram& d) {
  naive::Pd pd;
  for (const auto& x : d.crossings()) {
    pd.crossings.push_back(x.arcs);
    pd.signs.push_back(x.sign);
  }
  pd.loops = static_cast<int>(d.loops().size());
  return pd;
}

std::map<std::pair<int, int>, int> bigraded(const GradedDims& g) {
  std::map<std::pair<int, int>, int> out;
  const GradedDims flat = g.marginalize_k();
  for (const auto& [grading, dim] : flat.entries())
    out[{grading.i, grading.j}] = static_cast<int>(dim);
  return out;
}

std::map<int, long long> coefficients(const LaurentPolynomial& p) { return p.terms(); }

// Every complex built by the criteria below is also checked for d^2 = 0.
std::size_t g_complexes = 0;
std::size_t g_compositions = 0;
std::vector<std::string> g_integrity_failures;

GradedDims audited(const ChainComplex& cx, std::uint64_t hash, const std::string& label) {
  try {
    g_compositions += check_d_squared(cx);
  } catch (const std::exception& e) {
    g_integrity_failures.push_back(label + ": " + e.what());
  }
  ++g_complexes;
  return homology(cx, hash);
}

GradedDims audited_kh(const PlanarDiagram& d, const std::string& label) {
  return audited(build_kh_complex(d), diagram_hash(d), label);
}

GradedDims audited_akh(const AnnularDiagram& d, const std::string& label) {
  return audited(build_akh_complex(d), diagram_hash(d), label);
}

Outcome ac1() {
  Outcome o;
  auto start = Clock::now();
  GradedDims g = audited_kh(model_unknot(), "unknot");
  double t = seconds_since(start);
  o.require(to_text(g) == "(0,-1):1 (0,1):1", "kh(unknot) = " + to_text(g));
  o.require(t < 1e-3, "took " + std::to_string(t) + " s");
  return o;
}

Outcome ac2() {
  Outcome o;
  auto start = Clock::now();
  GradedDims pos = audited_kh(model_hopf(+1), "hopf_positive");
  GradedDims neg = audited_kh(model_hopf(-1), "hopf_negative");
  double t = seconds_since(start) / 2;
  o.require(to_text(pos) == "(0,0):1 (0,2):1 (2,4):1 (2,6):1", "kh(hopf_positive) = " + to_text(pos));
  std::map<std::pair<int, int>, int> mirrored;
  for (const auto& [key, dim] : bigraded(pos)) mirrored[{-key.first, -key.second}] = dim;
  o.require(bigraded(neg) == mirrored, "kh(hopf_negative) is not the mirror: " + to_text(neg));
  naive::Pd hand{{{1, 3, 2, 4}, {3, 1, 4, 2}}, {+1, +1}, 0};
  o.require(naive::kh(hand) == bigraded(pos), "brute-force 12-generator complex disagrees");
  o.require(naive::kh(to_naive(model_hopf(-1))) == bigraded(neg), "brute force disagrees on hopf_negative");
  o.require(t < 1e-2, "took " + std::to_string(t) + " s per link");
  return o;
}

Outcome ac3() {
  Outcome o;
  GradedDims u2 = audited_akh(model_u2(), "U2");
  o.require(to_text(u2) == "(0,-2,-2):1 (0,0,0):2 (0,2,2):1", "akh(U2) = " + to_text(u2));
  o.require(!decide_akh(model_u2()).related, "decide_akh(U2) reports related");
  return o;
}

Outcome ac4() {
  Outcome o;
  PlanarDiagram p3 = model_p3();
  GradedDims g = audited_kh(p3, "P3");
  o.require(g.total_dimension() == 8, "total dimension " + std::to_string(g.total_dimension()));
  o.require(graded_euler(g) == chain_euler(p3), "graded Euler " + graded_euler(g).to_string() +
                                                    " vs chain Euler " + chain_euler(p3).to_string());
  o.require(naive::kh(to_naive(p3)) == bigraded(g), "brute-force 4-crossing complex disagrees");
  o.require(naive::state_sum(to_naive(p3)) == coefficients(graded_euler(g)),
            "independent state sum disagrees");
  return o;
}

std::vector<std::pair<Event, Event>> seeded_pairs(std::size_t count, std::uint64_t seed, double margin) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<std::pair<Event, Event>> out;
  while (out.size() < count) {
    Event x{{u(rng), u(rng)}, u(rng)}, y{{u(rng), u(rng)}, u(rng)};
    double dp = std::hypot(y.p.x - x.p.x, y.p.y - x.p.y), dt = std::abs(y.t - x.t);
    if (std::abs(dp - dt) > margin) out.emplace_back(x, y);
  }
  return out;
}

Outcome ac5() {
  Outcome o;
  auto pairs = seeded_pairs(200, 7, 0.1);
  auto start = Clock::now();
  int agree = 0;
  for (const auto& [x, y] : pairs) {
    Verdict v = end_to_end(x, y, Route::Akh).verdict;
    double dp = std::hypot(y.p.x - x.p.x, y.p.y - x.p.y), dt = std::abs(y.t - x.t);
    if (v.related == (dp <= dt)) ++agree;
  }
  double t = seconds_since(start);
  o.require(agree == 200, std::to_string(agree) + "/200 agree with the metric");
  o.require(t < 5, "took " + std::to_string(t) + " s");
  if (o.ok) o.detail = "200/200 in " + std::to_string(t) + " s";
  return o;
}

Outcome ac6() {
  Outcome o;
  int n = 0, disagree = 0;
  for (const auto& [x, y] : seeded_pairs(200, 7, 0.1)) {
    SkyProjection p = skies_to_braid(x, y, {1, 0});
    if (const auto* b = std::get_if<SkyBraid>(&p)) {
      AnnularDiagram d = braid_closure(b->word);
      audited_akh(d, "pair " + std::to_string(n));
      audited_kh(augment_with_meridian(d), "pair " + std::to_string(n) + " augmented");
      if (decide_akh(d).related != decide_kh(d).related) ++disagree;
    }
    ++n;
  }
  o.require(disagree == 0, std::to_string(disagree) + " of 200 pairs disagree");
  o.require(decide_akh(model_u2()).related == decide_kh(model_u2()).related, "U2: routes disagree");
  for (const auto& letters : {std::vector<int>{1, -1}, {-1, -1}, {1, 1}, {1, 1, 1, 1}, {-1, 1, 1, -1}}) {
    AnnularDiagram d = braid_closure(BraidWord(2, letters));
    o.require(decide_akh(d).related == decide_kh(d).related,
              "[" + d.presentation().to_string() + "]: routes disagree");
  }
  return o;
}

Outcome ac7() {
  Outcome o;
  std::mt19937_64 rng(2024);
  for (int n = 0; n < 50; ++n) {
    int strands = 2 + static_cast<int>(rng() % 2);
    int length = static_cast<int>(rng() % 9);
    std::vector<int> letters;
    for (int k = 0; k < length; ++k) {
      int g = 1 + static_cast<int>(rng() % (strands - 1));
      letters.push_back(rng() % 2 ? g : -g);
    }
    BraidWord original(strands, letters), moved = original;
    for (int k = 0; k < 3; ++k) {
      int g = 1 + static_cast<int>(rng() % (strands - 1));
      if (rng() % 2) g = -g;
      if (rng() % 2) {
        moved = apply_move(moved, moves::Conjugate{g});
      } else {
        moved = apply_move(moved, moves::InsertPair{rng() % (moved.length() + 1), g});
      }
    }
    AnnularDiagram a = braid_closure(original), b = braid_closure(moved);
    std::string label = "[" + original.to_string() + "] -> [" + moved.to_string() + "]";
    bool same_kh = audited_kh(a.planar(), label).same_dims(audited_kh(b.planar(), label));
    bool same_akh = audited_akh(a, label).same_dims(audited_akh(b, label));
    if (!same_kh || !same_akh) {
      o.require(false, label + (same_kh ? "" : " kh changed") + (same_akh ? "" : " akh changed"));
    }
  }
  if (o.ok) o.detail = "50 braids, kh and akh unchanged";
  return o;
}

Outcome ac9() {
  Outcome o;
  std::size_t n = 0;
  for (const auto& entry : diagram_corpus()) {
    GradedDims g = audited_kh(entry.diagram, entry.name);
    LaurentPolynomial state = chain_euler(entry.diagram);
    o.require(graded_euler(g) == state, entry.name + ": graded " + graded_euler(g).to_string() +
                                            " vs state sum " + state.to_string());
    if (entry.diagram.crossing_count() <= 12)
      o.require(naive::state_sum(to_naive(entry.diagram)) == coefficients(state),
                entry.name + ": independent state sum disagrees");
    if (entry.annular) audited_akh(*entry.annular, entry.name);
    ++n;
  }
  if (o.ok) o.detail = std::to_string(n) + " corpus diagrams";
  return o;
}

Outcome ac8() {
  Outcome o;
  for (const auto& f : g_integrity_failures) o.require(false, f);
  // homology_dims' own composition check, on every block of a few complexes
  for (const auto& d : {model_p3(), augment_with_meridian(braid_closure(BraidWord(3, {1, -2, 1})))}) {
    ChainComplex cx = build_kh_complex(d);
    for (const auto& block : cx.blocks)
      for (std::size_t t = 0; t + 1 < block.differentials.size(); ++t) {
        try {
          homology_dims(block.differentials[t], block.differentials[t + 1]);
        } catch (const std::exception& e) {
          o.require(false, e.what());
        }
      }
  }
  if (o.ok)
    o.detail = std::to_string(g_complexes) + " complexes, " + std::to_string(g_compositions) + " compositions";
  return o;
}

Outcome ac10() {
  Outcome o;
  PlanarDiagram d = augment_with_meridian(braid_closure(BraidWord(4, {1, 2, -3, 1})));
  o.require(d.crossing_count() == 12, "diagram has " + std::to_string(d.crossing_count()) + " crossings");
  auto start = Clock::now();
  GradedDims g = kh(d);
  double t = seconds_since(start);
  long rss = peak_rss_kb();
  o.require(t < 10, "took " + std::to_string(t) + " s");
  o.require(rss > 0 && rss < 1024 * 1024, "peak memory " + std::to_string(rss) + " kB");
  o.require(graded_euler(g) == chain_euler(d), "Euler check failed");
  if (o.ok)
    o.detail = std::to_string(t) + " s, peak " + std::to_string(rss / 1024) + " MB, total dim " +
               std::to_string(g.total_dimension());
  return o;
}

}  // namespace

int main() {
  // AC10 runs first so its peak-memory reading is not inflated by the others.
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC10 performance: 12-crossing Kh < 10 s, < 1 GB", ac10},
      {"AC1 unknot", ac1},
      {"AC2 Hopf links", ac2},
      {"AC3 AKh(U2) and decide_akh(U2)", ac3},
      {"AC4 Kh(P3) dimension and Euler characteristic", ac4},
      {"AC5 end-to-end verdicts vs metric, 200 pairs < 5 s", ac5},
      {"AC6 route agreement", ac6},
      {"AC7 isotopy invariance, 50 braids", ac7},
      {"AC9 Euler consistency on the corpus", ac9},
      {"AC8 integrity: d^2 = 0 everywhere", ac8},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    auto start = Clock::now();
    try {
      o = run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.ok) ++failed;
    std::printf("%s %s (%.2f s)%s%s\n", o.ok ? "PASS" : "FAIL", name.c_str(), seconds_since(start),
                o.detail.empty() ? "" : ": ", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
