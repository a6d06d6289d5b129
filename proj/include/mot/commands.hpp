#pragma once

#include <cstdint>
#include <exception>
#include <optional>
#include <string>

#include "mot/scalar.hpp"

namespace mot {

struct RunConfig {
  Mode mode = Mode::exact;
  Exponent rho{1};
  double tau = 1e-12;
};

// Default mode from the MOT_MODE environment variable ("exact" or "approx"); exact when unset.
Mode default_mode();
Mode parse_mode(const std::string& text);

// Each command returns what it would print; the CLI decides where it goes.
std::string cmd_hf(const std::string& mu_path, const std::string& nu_path, const RunConfig& cfg);
std::string cmd_itmc(const std::string& mu_path, const std::string& nu_path, bool lifted, const RunConfig& cfg);

enum class Oracle { direct, wiesel };

struct RearrangeReport {
  std::string coupling_json;
  std::string value;  // AW_1 between input and output
  std::string bound;  // barycentre deviation of the input
};
// Throws InternalError when the value does not match the bound.
RearrangeReport cmd_rearrange(const std::string& pi_path, Oracle oracle, const RunConfig& cfg);

struct AwReport {
  std::string value;  // AW_rho^rho
  std::string distance;
  std::string plan_json;
  std::optional<std::string> nested;
};
// With `nested`, also runs the bicausal brute force and throws InternalError on disagreement.
AwReport cmd_aw(const std::string& pi_path, const std::string& other_path, bool nested, const RunConfig& cfg);

enum class Preset { jump, counterexample, constant };
Preset parse_preset(const std::string& text);

std::string cmd_stability(Preset preset, std::size_t n, std::size_t k, const RunConfig& cfg);

// 0 ok, 2 precondition/order or other domain errors, 3 parse, 4 scale, 1 internal.
int exit_code_for(const std::exception& e);

}  // namespace mot
