#pragma once

// On-disk cache of graded dimensions, one JSON file per
// (diagram, invariant, convention, code version).

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "causalkh/hash.hpp"
#include "causalkh/invariants.hpp"
#include "nlohmann/json.hpp"

namespace causalkh {

class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& directory() const { return dir_; }

  /// `kind` is "kh" or "akh"; `input` a canonical serialization of the diagram.
  std::filesystem::path path_for(const std::string& kind, const std::string& input) const {
    std::uint64_t key = fnv1a(kind + '\n' + input + '\n' + kConventionTag + '\n' + kCodeVersion);
    return dir_ / (kind + '-' + hex64(key) + ".json");
  }

  std::optional<GradedDims> load(const std::string& kind, const std::string& input) const {
    std::ifstream in(path_for(kind, input));
    if (!in) return std::nullopt;
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
    if (doc.value("convention", "") != kConventionTag || doc.value("version", "") != kCodeVersion ||
        doc.value("kind", "") != kind || doc.value("input", "") != input) {
      return std::nullopt;
    }
    try {
      return graded_dims_from_json(doc.at("dims"), fnv1a(input));
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }

  void store(const std::string& kind, const std::string& input, const GradedDims& dims) const {
    std::filesystem::create_directories(dir_);
    nlohmann::json doc = {{"kind", kind},
                          {"input", input},
                          {"convention", kConventionTag},
                          {"version", kCodeVersion},
                          {"dims", to_json(dims)}};
    std::filesystem::path target = path_for(kind, input);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
      std::ofstream out(tmp);
      out << doc.dump(2) << '\n';
    }
    std::filesystem::rename(tmp, target);
  }

 private:
  std::filesystem::path dir_;
};

}  // namespace causalkh
