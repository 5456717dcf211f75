#pragma once

// Skies of events in 2+1 Minkowski space and their reduction to 2-braids.
//
// The sky of e = (p, t) is the circle of light rays through e, recorded by
// where each ray meets the slice {t = 0}: theta -> (p - t u(theta), theta) with
// u(theta) = (cos theta, sin theta). Projecting along a unit vector e, the
// annulus coordinate is (theta, e.q) and e_perp.q is the depth; theta runs
// along the braid and a letter is positive when the strand moving towards
// larger e.q passes over.

#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "causalkh/causality.hpp"
#include "causalkh/errors.hpp"
#include "causalkh/linkdiag.hpp"

namespace causalkh {

struct Vec2 {
  double x = 0;
  double y = 0;

  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
};

struct Event {
  Vec2 p;
  double t = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

inline Vec2 unit(double theta) { return {std::cos(theta), std::sin(theta)}; }

class SkyCurve {
 public:
  explicit SkyCurve(Event e) : event_(e) {}

  const Event& event() const { return event_; }
  Vec2 at(double theta) const { return event_.p - event_.t * unit(theta); }
  double radius() const { return std::abs(event_.t); }

 private:
  Event event_;
};

inline SkyCurve sky(const Event& e) {
  if (!std::isfinite(e.p.x) || !std::isfinite(e.p.y) || !std::isfinite(e.t)) {
    throw DegenerateInputError("event coordinates must be finite");
  }
  return SkyCurve(e);
}

struct SkyOptions {
  double epsilon = 1e-9;  // null tolerance, relative to |dt| + |dp|
  double delta = 1e-9;    // tangency and depth-coincidence threshold
  int max_rotations = 32;
};

enum class CausalKind { Timelike, Null, Spacelike };

inline std::string to_string(CausalKind k) {
  switch (k) {
    case CausalKind::Timelike: return "timelike";
    case CausalKind::Null: return "null";
    case CausalKind::Spacelike: return "spacelike";
  }
  return "?";
}

struct CausalClass {
  CausalKind kind = CausalKind::Spacelike;
  double margin = 0;  // | |dp| - |dt| |

  bool related() const { return kind != CausalKind::Spacelike; }
};

/// Exact flat-metric classification of the separation of x and y.
inline CausalClass classify_metric(const Event& x, const Event& y, const SkyOptions& opts = {}) {
  if (x == y) throw DegenerateInputError("identical events");
  const double dp = (y.p - x.p).norm();
  const double dt = std::abs(y.t - x.t);
  CausalClass c;
  c.margin = std::abs(dp - dt);
  if (c.margin <= opts.epsilon * (dp + dt)) {
    c.kind = CausalKind::Null;
  } else {
    c.kind = dp < dt ? CausalKind::Timelike : CausalKind::Spacelike;
  }
  return c;
}

struct IntersectionDetected {
  double theta = 0;  // direction of the common light ray
};

struct SkyBraid {
  BraidWord word;
  Vec2 direction;                     // projection direction actually used
  std::vector<double> crossing_angles;  // sorted, in [0, 2 pi)
  int rotations = 0;                  // golden-angle steps taken to reach generic position
};

using SkyProjection = std::variant<SkyBraid, IntersectionDetected>;

namespace detail {
inline double wrap_angle(double theta) {
  constexpr double two_pi = 2 * std::numbers::pi;
  theta = std::fmod(theta, two_pi);
  return theta < 0 ? theta + two_pi : theta;
}
}  // namespace detail

inline SkyProjection skies_to_braid(const Event& x, const Event& y, Vec2 direction,
                                    const SkyOptions& opts = {}) {
  sky(x);
  sky(y);
  if (x == y) throw DegenerateInputError("identical events");
  if (std::abs(direction.norm() - 1) > 1e-9) {
    throw DegenerateInputError("projection direction must be a unit vector");
  }
  const Vec2 dp = y.p - x.p;
  const double dt = y.t - x.t;
  const double scale = dp.norm() + std::abs(dt);
  const double margin = std::abs(dp.norm() - std::abs(dt));
  if (margin <= opts.epsilon * scale) {
    // p_x - t_x u = p_y - t_y u  <=>  u = dp / dt
    double s = dt < 0 ? -1.0 : 1.0;
    return IntersectionDetected{detail::wrap_angle(std::atan2(s * dp.y, s * dp.x))};
  }

  const double alpha0 = std::atan2(direction.y, direction.x);
  const double golden = std::numbers::pi * (3 - std::sqrt(5.0));
  for (int k = 0; k <= opts.max_rotations; ++k) {
    const double alpha = alpha0 + k * golden;
    const Vec2 e = unit(alpha);
    const Vec2 e_perp{-e.y, e.x};
    const double a = e.dot(dp);       // strand separation is a - dt cos(theta - alpha)
    const double w = e_perp.dot(dp);  // depth separation is w - dt sin(theta - alpha)
    const double s2 = dt * dt - a * a;
    SkyBraid out;
    out.direction = k == 0 ? direction : e;
    out.rotations = k;
    if (s2 < 0) {
      if (std::abs(a) - std::abs(dt) <= opts.delta) continue;  // nearly tangent
      out.word = BraidWord(2, {});
      return out;
    }
    const double s = std::sqrt(s2);  // |d/dtheta separation| at a crossing
    if (s < opts.delta) continue;
    const double phi = std::acos(std::clamp(a / dt, -1.0, 1.0));
    const double sign_dt = dt < 0 ? -1.0 : 1.0;
    std::vector<std::pair<double, int>> crossings;
    bool generic = true;
    for (double branch : {1.0, -1.0}) {
      const double slope = branch * sign_dt * s;  // d/dtheta (e.q_y - e.q_x)
      const double depth = w - branch * sign_dt * s;  // e_perp.q_y - e_perp.q_x
      if (std::abs(depth) < opts.delta) {
        generic = false;
        break;
      }
      crossings.emplace_back(detail::wrap_angle(alpha + branch * phi), depth * slope > 0 ? 1 : -1);
    }
    if (!generic) continue;
    std::sort(crossings.begin(), crossings.end());
    std::vector<int> letters;
    for (const auto& [theta, letter] : crossings) {
      out.crossing_angles.push_back(theta);
      letters.push_back(letter);
    }
    out.word = BraidWord(2, std::move(letters));
    return out;
  }
  throw DegenerateInputError("no generic projection after " + std::to_string(opts.max_rotations) +
                             " rotations; near-null pair with margin " + std::to_string(margin));
}

struct CausalReport {
  Verdict verdict;
  CausalClass oracle;
  std::optional<SkyBraid> braid;
};

inline nlohmann::json to_json(const CausalReport& r) {
  nlohmann::json out = to_json(r.verdict);
  out["oracle"] = {{"class", to_string(r.oracle.kind)}, {"margin", r.oracle.margin}};
  if (r.braid) out["braid"] = r.braid->word.to_string();
  return out;
}

/// Skies -> closed 2-braid -> verdict, with the metric classification alongside.
inline CausalReport end_to_end(const Event& x, const Event& y, Route route,
                               const SkyOptions& sky_opts = {}, const ComplexOptions& cx_opts = {},
                               Vec2 direction = {1, 0}) {
  CausalReport report;
  report.oracle = classify_metric(x, y, sky_opts);
  SkyProjection projection = skies_to_braid(x, y, direction, sky_opts);
  if (const auto* hit = std::get_if<IntersectionDetected>(&projection)) {
    report.verdict.related = true;
    report.verdict.route = Route::SkyIntersection;
    report.verdict.model = "none";
    report.verdict.witness_theta = hit->theta;
    return report;
  }
  report.braid = std::get<SkyBraid>(projection);
  report.verdict = decide(braid_closure(report.braid->word), route, cx_opts);
  return report;
}

// ---------------------------------------------------------------------------
// Text formats: event "px,py,t"; pair "px,py,t;qx,qy,s"

inline Event parse_event(std::string_view text) {
  double v[3];
  std::size_t pos = 0;
  for (int n = 0; n < 3; ++n) {
    std::size_t end = n < 2 ? text.find(',', pos) : text.size();
    if (end == std::string_view::npos) {
      throw ParseError("event '" + std::string(text) + "' needs three comma-separated numbers");
    }
    std::string_view field = text.substr(pos, end - pos);
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front()))) field.remove_prefix(1);
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back()))) field.remove_suffix(1);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v[n]);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v[n])) {
      throw ParseError("invalid coordinate '" + std::string(field) + "' in event '" +
                       std::string(text) + "'");
    }
    pos = end + 1;
  }
  return Event{{v[0], v[1]}, v[2]};
}

inline std::pair<Event, Event> parse_event_pair(std::string_view text) {
  std::size_t semi = text.find(';');
  if (semi == std::string_view::npos) {
    throw ParseError("event pair '" + std::string(text) + "' needs the form px,py,t;qx,qy,s");
  }
  return {parse_event(text.substr(0, semi)), parse_event(text.substr(semi + 1))};
}

}  // namespace causalkh
