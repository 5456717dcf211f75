#pragma once

// Command handlers behind the causalkh executable. Each returns the process
// exit code: 0 success / unrelated, 10 related, 2 bad input or failed
// hypothesis, 3 resource limit, 1 internal error.

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "causalkh/cache.hpp"
#include "causalkh/causality.hpp"
#include "causalkh/cube.hpp"
#include "causalkh/invariants.hpp"
#include "causalkh/linkdiag.hpp"
#include "causalkh/parallel.hpp"
#include "causalkh/run_config.hpp"
#include "causalkh/skies.hpp"
#include "causalkh/verify.hpp"
#include "nlohmann/json.hpp"

namespace causalkh::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitInput = 2,
  kExitResource = 3,
  kExitRelated = 10,
};

struct DiagramInput {
  std::optional<std::string> pd;
  std::optional<std::string> braid;
  int strands = 2;
};

struct CausalInput {
  std::optional<std::string> events;
  std::optional<std::string> braid;
  int strands = 2;
  std::optional<std::string> batch_file;
};

struct VerifyInput {
  std::string suite = "all";
  std::size_t max_crossings = 14;
  std::size_t pairs = 200;
};

inline int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const IntegrityError& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

namespace detail {

inline void render(const GradedDims& dims, const RunConfig& cfg, std::ostream& out) {
  if (cfg.output == OutputFormat::Json) {
    out << to_json(dims).dump() << '\n';
  } else {
    out << to_text(dims) << '\n';
  }
}

inline GradedDims cached(const RunConfig& cfg, const std::string& kind, const std::string& input,
                         const std::function<GradedDims()>& compute) {
  auto dir = cfg.effective_cache_dir();
  if (!dir) return compute();
  ResultCache cache(*dir);
  if (auto hit = cache.load(kind, input)) return *hit;
  GradedDims dims = compute();
  cache.store(kind, input, dims);
  return dims;
}

inline std::string verdict_text(const Verdict& v) {
  std::string out = v.related ? "related" : "unrelated";
  out += " (route " + to_string(v.route);
  if (v.model != "none") out += ", model " + v.model;
  if (v.witness_theta) out += ", common light ray at theta=" + std::to_string(*v.witness_theta);
  return out + ")";
}

// Verdict for one annular diagram under the configured route selection.
inline nlohmann::json decide_json(const AnnularDiagram& d, const RunConfig& cfg, bool& related,
                                  std::string& text) {
  const ComplexOptions cx = cfg.complex_options();
  if (cfg.route == RouteSelection::Both) {
    Verdict a = decide_akh(d, cx), k = decide_kh(d, cx);
    if (a.related != k.related) throw IntegrityError("akh and kh routes disagree");
    related = a.related;
    text = verdict_text(a) + "; " + verdict_text(k);
    return {{"related", related}, {"route", "both"}, {"akh", to_json(a)}, {"kh", to_json(k)}};
  }
  Verdict v = decide(d, cfg.route == RouteSelection::Kh ? Route::Kh : Route::Akh, cx);
  related = v.related;
  text = verdict_text(v);
  return to_json(v);
}

inline nlohmann::json events_json(const Event& x, const Event& y, const RunConfig& cfg, bool& related,
                                  std::string& text) {
  const SkyOptions so = cfg.sky_options();
  CausalClass oracle = classify_metric(x, y, so);
  SkyProjection projection = skies_to_braid(x, y, {1, 0}, so);
  nlohmann::json out;
  if (const auto* hit = std::get_if<IntersectionDetected>(&projection)) {
    Verdict v;
    v.related = true;
    v.route = Route::SkyIntersection;
    v.witness_theta = hit->theta;
    related = true;
    text = verdict_text(v);
    out = to_json(v);
  } else {
    const auto& braid = std::get<SkyBraid>(projection);
    out = decide_json(braid_closure(braid.word), cfg, related, text);
    out["braid"] = braid.word.to_string();
  }
  out["oracle"] = {{"class", to_string(oracle.kind)}, {"margin", oracle.margin}};
  text += "; metric oracle: " + to_string(oracle.kind);
  return out;
}

}  // namespace detail

inline int cmd_kh(const DiagramInput& in, const RunConfig& cfg, bool dump, std::ostream& out,
                  std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    if (in.pd.has_value() == in.braid.has_value()) throw ParseError("give exactly one of --pd or --braid");
    PlanarDiagram d = in.pd ? parse_pd(*in.pd) : braid_closure(parse_braid(*in.braid, in.strands)).planar();
    if (dump) dump_complex(build_kh_complex(d, cfg.complex_options()), err);
    GradedDims dims = detail::cached(cfg, "kh", "pd:" + serialize_pd(d),
                                     [&] { return kh(d, cfg.complex_options()); });
    detail::render(dims, cfg, out);
    return static_cast<int>(kExitOk);
  });
}

inline int cmd_akh(const DiagramInput& in, const RunConfig& cfg, bool dump, std::ostream& out,
                   std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    if (!in.braid || in.pd) throw ParseError("akh takes a braid word (--braid, --strands)");
    AnnularDiagram d = braid_closure(parse_braid(*in.braid, in.strands));
    if (dump) dump_complex(build_akh_complex(d, cfg.complex_options()), err);
    std::string key = "braid:" + std::to_string(d.strand_count()) + ':' + d.presentation().to_string();
    GradedDims dims = detail::cached(cfg, "akh", key, [&] { return akh(d, cfg.complex_options()); });
    detail::render(dims, cfg, out);
    return static_cast<int>(kExitOk);
  });
}

inline int cmd_causal(const CausalInput& in, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    cfg.validate();
    int given = in.events.has_value() + in.braid.has_value() + in.batch_file.has_value();
    if (given != 1) throw ParseError("give exactly one of --events, --braid or --batch");

    if (in.batch_file) {
      std::ifstream file(*in.batch_file);
      if (!file) throw ParseError("cannot read batch file '" + *in.batch_file + "'");
      std::vector<std::pair<std::size_t, std::string>> lines;
      std::string line;
      for (std::size_t n = 1; std::getline(file, line); ++n) {
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') {
          continue;
        }
        lines.emplace_back(n, line);
      }
      std::vector<std::string> rendered(lines.size());
      std::vector<char> failed(lines.size(), 0);
      parallel_for(lines.size(), [&](std::size_t k) {
        nlohmann::json row;
        std::string text;
        try {
          auto [x, y] = parse_event_pair(lines[k].second);
          bool related = false;
          row = detail::events_json(x, y, cfg, related, text);
        } catch (const std::exception& e) {
          row = {{"error", e.what()}};
          text = std::string("error: ") + e.what();
          failed[k] = 1;
        }
        row["line"] = lines[k].first;
        rendered[k] = cfg.output == OutputFormat::Json ? row.dump()
                                                       : std::to_string(lines[k].first) + ": " + text;
      });
      for (const auto& r : rendered) out << r << '\n';
      for (char f : failed)
        if (f) return kExitInput;
      return kExitOk;
    }

    bool related = false;
    std::string text;
    nlohmann::json result;
    if (in.events) {
      auto [x, y] = parse_event_pair(*in.events);
      result = detail::events_json(x, y, cfg, related, text);
    } else {
      AnnularDiagram d = braid_closure(parse_braid(*in.braid, in.strands));
      result = detail::decide_json(d, cfg, related, text);
    }
    out << (cfg.output == OutputFormat::Json ? result.dump() : text) << '\n';
    return related ? kExitRelated : kExitOk;
  });
}

inline int cmd_verify(const VerifyInput& in, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    VerifyOptions opts;
    opts.max_crossings = in.max_crossings;
    opts.pairs = in.pairs;
    opts.seed = cfg.seed;
    opts.complex = cfg.complex_options();
    opts.sky = cfg.sky_options();
    std::vector<std::string> names =
        in.suite == "all" ? suite_names() : std::vector<std::string>{in.suite};
    for (const auto& name : names) {
      if (std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end()) {
        throw ParseError("unknown suite '" + name + "'");
      }
    }
    nlohmann::json report = {{"seed", cfg.seed}, {"suites", nlohmann::json::array()}};
    bool passed = true;
    for (const auto& name : names) {
      SuiteResult r = run_named_suite(name, opts);
      passed = passed && r.passed();
      report["suites"].push_back(to_json(r));
      if (cfg.output == OutputFormat::Text) {
        out << (r.passed() ? "PASS " : "FAIL ") << r.name << " (" << r.checks << " checks)\n";
        for (const auto& f : r.failures) out << "  " << f << '\n';
      }
    }
    report["passed"] = passed;
    if (cfg.output == OutputFormat::Json) out << report.dump() << '\n';
    return passed ? static_cast<int>(kExitOk) : static_cast<int>(kExitInternal);
  });
}

}  // namespace causalkh::cli
