// causalkh: Khovanov and annular Khovanov homology over Z/2 of link
// diagrams, and causality verdicts for event pairs in 2+1 Minkowski space.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "causalkh/cli.hpp"

namespace {

struct CommonFlags {
  std::size_t crossing_limit = 20;
  std::string output = "json";
  std::string cache_dir;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--crossing-limit", f.crossing_limit, "Refuse diagrams with more crossings")
      ->capture_default_str();
  cmd->add_option("--output", f.output, "json or text")->capture_default_str();
  cmd->add_option("--cache-dir", f.cache_dir, "Result cache directory (env CAUSALKH_CACHE_DIR)");
}

causalkh::RunConfig to_config(const CommonFlags& f) {
  causalkh::RunConfig cfg;
  cfg.crossing_limit = f.crossing_limit;
  cfg.output = causalkh::parse_output_format(f.output);
  if (!f.cache_dir.empty()) cfg.cache_dir = f.cache_dir;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace causalkh;
  CLI::App app{"Khovanov homology over Z/2 and causality of events via their skies"};
  app.require_subcommand(1);

  CommonFlags common;
  cli::DiagramInput diagram;
  bool dump = false;

  auto* kh_cmd = app.add_subcommand("kh", "Kh of a PD code or closed braid");
  add_common(kh_cmd, common);
  kh_cmd->add_option("--pd", diagram.pd, "PD code, e.g. \"X(1,3,2,4) X(3,1,4,2)\"");
  kh_cmd->add_option("--braid", diagram.braid, "Braid word, e.g. \"1 1 -2\"");
  kh_cmd->add_option("--strands", diagram.strands, "Strand count of --braid")->capture_default_str();
  kh_cmd->add_flag("--dump-complex", dump, "Print the chain complex to stderr");

  auto* akh_cmd = app.add_subcommand("akh", "AKh of a closed braid about the annulus axis");
  add_common(akh_cmd, common);
  akh_cmd->add_option("--braid", diagram.braid, "Braid word")->required();
  akh_cmd->add_option("--strands", diagram.strands, "Strand count")->capture_default_str();
  akh_cmd->add_flag("--dump-complex", dump, "Print the chain complex to stderr");

  cli::CausalInput causal;
  std::string route = "akh";
  double epsilon = 1e-9, delta = 1e-9;
  auto* causal_cmd = app.add_subcommand(
      "causal", "Decide causal relation; exit 0 = unrelated, 10 = related, 2/3 = error");
  add_common(causal_cmd, common);
  causal_cmd->add_option("--events", causal.events, "Event pair \"px,py,t;qx,qy,s\"");
  causal_cmd->add_option("--braid", causal.braid, "Sky pair as a braid word");
  causal_cmd->add_option("--strands", causal.strands, "Strand count of --braid")->capture_default_str();
  causal_cmd->add_option("--batch", causal.batch_file, "File with one event pair per line");
  causal_cmd->add_option("--route", route, "akh, kh or both")->capture_default_str();
  causal_cmd->add_option("--epsilon", epsilon, "Relative null tolerance")->capture_default_str();
  causal_cmd->add_option("--delta", delta, "Tangency threshold")->capture_default_str();

  cli::VerifyInput verify;
  std::uint64_t seed = 7;
  auto* verify_cmd = app.add_subcommand("verify", "Run the self-verification suites");
  add_common(verify_cmd, common);
  verify_cmd->add_option("--suite", verify.suite, "all, models, euler, integrity, oracle, routes, isotopy")
      ->capture_default_str();
  verify_cmd->add_option("--max-crossings", verify.max_crossings, "Skip larger corpus diagrams")
      ->capture_default_str();
  verify_cmd->add_option("--pairs", verify.pairs, "Random event pairs")->capture_default_str();
  verify_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitInput;
  }

  return cli::guarded(std::cerr, [&] {
    RunConfig cfg = to_config(common);
    if (kh_cmd->parsed()) return cli::cmd_kh(diagram, cfg, dump, std::cout, std::cerr);
    if (akh_cmd->parsed()) return cli::cmd_akh(diagram, cfg, dump, std::cout, std::cerr);
    if (causal_cmd->parsed()) {
      cfg.route = parse_route_selection(route);
      cfg.epsilon = epsilon;
      cfg.delta = delta;
      return cli::cmd_causal(causal, cfg, std::cout, std::cerr);
    }
    cfg.seed = seed;
    return cli::cmd_verify(verify, cfg, std::cout, std::cerr);
  });
}
