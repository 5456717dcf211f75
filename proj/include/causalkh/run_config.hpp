#pragma once

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>

#include "causalkh/causality.hpp"
#include "causalkh/cube.hpp"
#include "causalkh/errors.hpp"
#include "causalkh/skies.hpp"

namespace causalkh {

inline constexpr const char* kCacheDirEnv = "CAUSALKH_CACHE_DIR";

enum class OutputFormat { Json, Text };
enum class RouteSelection { Akh, Kh, Both };

struct RunConfig {
  std::size_t crossing_limit = 20;
  double epsilon = 1e-9;
  double delta = 1e-9;
  RouteSelection route = RouteSelection::Akh;
  OutputFormat output = OutputFormat::Json;
  std::optional<std::string> cache_dir;
  std::uint64_t seed = 7;

  void validate() const {
    if (crossing_limit < 1) throw ParseError("crossing limit must be at least 1");
    if (!(epsilon > 0)) throw ParseError("epsilon must be positive");
    if (!(delta > 0)) throw ParseError("delta must be positive");
  }

  ComplexOptions complex_options() const {
    ComplexOptions o;
    o.crossing_limit = crossing_limit;
    return o;
  }

  SkyOptions sky_options() const {
    SkyOptions o;
    o.epsilon = epsilon;
    o.delta = delta;
    return o;
  }

  /// --cache-dir wins over the environment.
  std::optional<std::string> effective_cache_dir() const {
    if (cache_dir) return cache_dir;
    if (const char* env = std::getenv(kCacheDirEnv); env && *env) return std::string(env);
    return std::nullopt;
  }
};

inline RouteSelection parse_route_selection(const std::string& s) {
  if (s == "akh") return RouteSelection::Akh;
  if (s == "kh") return RouteSelection::Kh;
  if (s == "both") return RouteSelection::Both;
  throw ParseError("unknown route '" + s + "' (expected akh, kh or both)");
}

inline OutputFormat parse_output_format(const std::string& s) {
  if (s == "json") return OutputFormat::Json;
  if (s == "text") return OutputFormat::Text;
  throw ParseError("unknown output format '" + s + "' (expected json or text)");
}

}  // namespace causalkh
