#pragma once

// Deciding whether a pair of skies is linked: the annular route compares
// AKh with that of the trivial two-braid closure U2; the planar route adds the
// meridian and compares Kh with that of P3, the connected sum of two Hopf links.

#include <optional>
#include <string>
#include <vector>

#include "causalkh/cube.hpp"
#include "causalkh/invariants.hpp"
#include "causalkh/linkdiag.hpp"
#include "nlohmann/json.hpp"

namespace causalkh {

enum class Route { Akh, Kh, SkyIntersection };

inline std::string to_string(Route route) {
  switch (route) {
    case Route::Akh: return "akh";
    case Route::Kh: return "kh";
    case Route::SkyIntersection: return "sky_intersection";
  }
  return "?";
}

struct Verdict {
  bool related = false;
  Route route = Route::Akh;
  std::string model = "none";  // "U2", "P3" or "none"
  std::optional<GradedDims> computed;
  std::optional<GradedDims> model_dims;
  std::optional<double> witness_theta;  // sky_intersection only
};

inline nlohmann::json to_json(const Verdict& v) {
  nlohmann::json out;
  out["related"] = v.related;
  out["route"] = to_string(v.route);
  out["model"] = v.model;
  out["computed"] = v.computed ? to_json(*v.computed) : nlohmann::json::array();
  out["model_dims"] = v.model_dims ? to_json(*v.model_dims) : nlohmann::json::array();
  if (v.witness_theta) out["theta"] = *v.witness_theta;
  return out;
}

struct SkyPairCheck {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  std::string message() const {
    std::string out;
    for (const auto& v : violations) out += (out.empty() ? "" : "; ") + v;
    return out;
  }
};

/// A sky pair is a closed braid with two components, each winding once.
inline SkyPairCheck validate_sky_pair(const AnnularDiagram& d) {
  SkyPairCheck check;
  const int n = d.component_count();
  if (n != 2) {
    check.violations.push_back(std::to_string(n) + (n == 1 ? " component" : " components") +
                               ", expected 2");
  }
  const auto& windings = d.component_windings();
  for (std::size_t c = 0; c < windings.size(); ++c) {
    if (windings[c] != 1) {
      check.violations.push_back("component " + std::to_string(c + 1) + " has winding " +
                                 std::to_string(windings[c]) + ", expected 1");
    }
  }
  return check;
}

inline const GradedDims& model_akh_u2() {
  static const GradedDims dims = akh(model_u2());
  return dims;
}

inline const GradedDims& model_kh_p3() {
  static const GradedDims dims = kh(model_p3());
  return dims;
}

namespace detail {
inline void require_sky_pair(const AnnularDiagram& d) {
  SkyPairCheck check = validate_sky_pair(d);
  if (!check.ok()) throw HypothesisError("not a sky pair: " + check.message());
}
}  // namespace detail

inline Verdict decide_akh(const AnnularDiagram& d, const ComplexOptions& opts = {}) {
  detail::require_sky_pair(d);
  Verdict v;
  v.route = Route::Akh;
  v.model = "U2";
  v.computed = akh(d, opts);
  v.model_dims = model_akh_u2();
  v.related = !v.computed->same_dims(*v.model_dims);
  return v;
}

inline Verdict decide_kh(const AnnularDiagram& d, const ComplexOptions& opts = {}) {
  detail::require_sky_pair(d);
  Verdict v;
  v.route = Route::Kh;
  v.model = "P3";
  v.computed = kh(augment_with_meridian(d), opts);
  v.model_dims = model_kh_p3();
  v.related = !v.computed->same_dims(*v.model_dims);
  return v;
}

inline Verdict decide(const AnnularDiagram& d, Route route, const ComplexOptions& opts = {}) {
  return route == Route::Kh ? decide_kh(d, opts) : decide_akh(d, opts);
}

}  // namespace causalkh
