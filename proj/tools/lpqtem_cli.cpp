#include "lpqtem/config.hpp"
#include "lpqtem/errors.hpp"
#include "lpqtem/runner.hpp"
#include "lpqtem/selftest.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

using namespace lpq;

namespace {

struct Common {
  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "experiment config (JSON)");
  sub->add_option("--out-dir", c.out_dir, "output directory (overrides the config)");
  sub->add_option("--seed", c.seed, "random seed (overrides the config)");
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  if (!c.out_dir.empty()) cfg.output_dir = c.out_dir;
  if (c.seed) cfg.seed = *c.seed;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time encoding and reconstruction of signals in mixed-norm shift-invariant spaces"};
  app.require_subcommand(1);

  Common enc, rec, frm;
  auto* s_enc = app.add_subcommand("encode", "draw the seeded signal and write its TEM events");
  add_common(s_enc, enc);
  auto* s_rec = app.add_subcommand("reconstruct", "encode, reconstruct iteratively, write reports");
  add_common(s_rec, rec);
  auto* s_frm = app.add_subcommand("frames", "frame bounds and dual-pair reconstruction suite");
  add_common(s_frm, frm);

  SelftestOptions st;
  auto* s_self = app.add_subcommand("selftest", "run every module's invariant suite");
  s_self->add_flag("--reduced", st.reduced, "half sampling density");
  s_self->add_flag("--inject-dual-fault", st.corrupt_dual, "perturb the dual coefficients");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  if (*s_self) {
    const auto results = run_selftest(st, std::cout);
    bool ok = true;
    for (const auto& r : results) ok = ok && r.ok();
    std::cout << (ok ? "selftest passed\n" : "selftest FAILED\n");
    return ok ? kExitOk : kExitFailure;
  }
  const Common& c = *s_enc ? enc : *s_rec ? rec : frm;
  return guarded(
      [&] {
        const ExperimentConfig cfg = resolve(c);
        if (*s_enc) return run_encode(cfg, std::cout);
        if (*s_rec) return run_experiment(cfg, std::cout);
        return run_frames(cfg, std::cout);
      },
      std::cerr);
}
