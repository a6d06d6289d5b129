#include <CLI11.hpp>

#include <iostream>

#include "mot/commands.hpp"
#include "mot/io.hpp"

namespace {

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::cout << text;
  else
    mot::write_text_file(out_path, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Martingale couplings and adapted Wasserstein distances for discrete measures"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string mode_text, rho_text = "1", output;
  double tau = 1e-12;
  app.add_option("--mode", mode_text, "Scalar mode: exact or approx (default from MOT_MODE, else exact)")
      ->check(CLI::IsMember({"exact", "approx"}));
  app.add_option("--rho", rho_text, "Cost exponent rho >= 1");
  app.add_option("--tau", tau, "Tolerance for approx-mode comparisons");
  app.add_option("-o,--output", output, "Write the main result to this file instead of stdout");

  std::string mu_path, nu_path, pi_path, other_path;
  auto* hf = app.add_subcommand("hf", "Comonotone (Hoeffding-Frechet) coupling of two measures");
  hf->add_option("mu", mu_path, "First marginal (measure JSON)")->required();
  hf->add_option("nu", nu_path, "Second marginal (measure JSON)")->required();

  bool lifted = false;
  auto* itmc = app.add_subcommand("itmc", "Inverse transform martingale coupling");
  itmc->add_option("mu", mu_path, "First marginal (measure JSON)")->required();
  itmc->add_option("nu", nu_path, "Second marginal (measure JSON)")->required();
  itmc->add_flag("--lifted", lifted, "Emit the lifted coupling instead of its collapse");

  std::string oracle_text = "direct";
  auto* rearr = app.add_subcommand("rearrange", "Martingale rearrangement of a coupling");
  rearr->add_option("pi", pi_path, "Coupling JSON")->required();
  rearr->add_option("--oracle", oracle_text, "Construction: direct or wiesel")
      ->check(CLI::IsMember({"direct", "wiesel"}));

  bool nested = false;
  auto* aw = app.add_subcommand("aw", "Adapted Wasserstein distance between two couplings");
  aw->add_option("pi", pi_path, "First coupling JSON")->required();
  aw->add_option("other", other_path, "Second coupling JSON")->required();
  aw->add_flag("--nested-oracle", nested, "Cross-check against the bicausal brute force");

  std::string preset_text;
  std::size_t n = 64, k = 200;
  auto* stab = app.add_subcommand("stability", "Stability experiments (CSV output)");
  stab->add_option("--preset", preset_text, "jump, counterexample or constant")
      ->required()
      ->check(CLI::IsMember({"jump", "counterexample", "constant"}));
  stab->add_option("--n", n, "Sequence length");
  stab->add_option("--k", k, "Grid size for the counterexample preset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    mot::RunConfig cfg;
    cfg.mode = mode_text.empty() ? mot::default_mode() : mot::parse_mode(mode_text);
    cfg.tau = tau;
    cfg.rho = mot::Exponent::parse(rho_text);

    if (hf->parsed()) {
      emit(output, mot::cmd_hf(mu_path, nu_path, cfg));
    } else if (itmc->parsed()) {
      emit(output, mot::cmd_itmc(mu_path, nu_path, lifted, cfg));
    } else if (rearr->parsed()) {
      const auto rep =
          mot::cmd_rearrange(pi_path, oracle_text == "wiesel" ? mot::Oracle::wiesel : mot::Oracle::direct, cfg);
      emit(output, rep.coupling_json);
      std::cerr << "aw1 " << rep.value << "\nbound " << rep.bound << "\n";
    } else if (aw->parsed()) {
      const auto rep = mot::cmd_aw(pi_path, other_path, nested, cfg);
      std::cout << "aw_pow " << rep.value << "\naw " << rep.distance << "\n";
      if (rep.nested) std::cout << "nested_pow " << *rep.nested << "\n";
      if (!output.empty()) mot::write_text_file(output, rep.plan_json);
    } else if (stab->parsed()) {
      emit(output, mot::cmd_stability(mot::parse_preset(preset_text), n, k, cfg));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mot::exit_code_for(e);
  }
  return 0;
}
