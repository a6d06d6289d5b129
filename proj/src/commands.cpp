#include "mot/commands.hpp"

#include <cstdlib>

#include "mot/adapted.hpp"
#include "mot/io.hpp"
#include "mot/rearrange.hpp"
#include "mot/stability.hpp"

namespace mot {

Mode parse_mode(const std::string& text) {
  if (text == "exact") return Mode::exact;
  if (text == "approx") return Mode::approx;
  throw ParameterError("unknown mode \"" + text + "\" (expected exact or approx)");
}

Mode default_mode() {
  const char* env = std::getenv("MOT_MODE");
  return env && *env ? parse_mode(env) : Mode::exact;
}

Preset parse_preset(const std::string& text) {
  if (text == "jump") return Preset::jump;
  if (text == "counterexample") return Preset::counterexample;
  if (text == "constant") return Preset::constant;
  throw ParameterError("unknown preset \"" + text + "\"");
}

namespace {

// Runs `fn` with the scalar type selected by the configuration.
template <class Fn>
auto dispatch(const RunConfig& cfg, Fn&& fn) {
  if (!(cfg.tau > 0.0)) throw ParameterError("tolerance must be positive");
  set_tolerance(cfg.tau);
  if (cfg.mode == Mode::exact) {
    if (!cfg.rho.is_integer()) throw ParameterError("exact mode needs an integer exponent");
    return fn(Rational{});
  }
  return fn(double{});
}

template <class T>
std::string plan_json(const AwResult<T>& r) {
  std::vector<Point<T>> pts;
  for (std::size_t i = 0; i < r.xs.size(); ++i)
    for (std::size_t j = 0; j < r.xs_other.size(); ++j)
      if (!num::is_zero(r.plan.mass(i, j))) pts.push_back({r.xs[i], r.xs_other[j], r.plan.mass(i, j)});
  return to_json(DiscreteCoupling<T>(std::move(pts)));
}

}  // namespace

std::string cmd_hf(const std::string& mu_path, const std::string& nu_path, const RunConfig& cfg) {
  return dispatch(cfg, [&](auto tag) {
    using T = decltype(tag);
    const auto mu = measure_from_json<T>(read_text_file(mu_path));
    const auto nu = measure_from_json<T>(read_text_file(nu_path));
    return to_json(hoeffding_frechet(mu, nu));
  });
}

std::string cmd_itmc(const std::string& mu_path, const std::string& nu_path, bool lifted, const RunConfig& cfg) {
  return dispatch(cfg, [&](auto tag) {
    using T = decltype(tag);
    const auto mu = measure_from_json<T>(read_text_file(mu_path));
    const auto nu = measure_from_json<T>(read_text_file(nu_path));
    const auto l = itmc_lifted(mu, nu);
    return lifted ? to_json(l) : to_json(collapse(l));
  });
}

RearrangeReport cmd_rearrange(const std::string& pi_path, Oracle oracle, const RunConfig& cfg) {
  return dispatch(cfg, [&](auto tag) {
    using T = decltype(tag);
    const auto pi = coupling_from_json<T>(read_text_file(pi_path));
    const DiscreteCoupling<T> m = oracle == Oracle::direct ? rearrange(pi).coupling : wiesel_switch(pi).coupling;
    const T value = adapted_wasserstein(pi, m, Exponent(1)).cost;
    const T bound = barycentre_deviation(pi);
    if (!num::eq(value, bound)) throw InternalError("rearrangement does not attain the barycentre bound");
    return RearrangeReport{to_json(m), format_scalar(value), format_scalar(bound)};
  });
}

AwReport cmd_aw(const std::string& pi_path, const std::string& other_path, bool nested, const RunConfig& cfg) {
  return dispatch(cfg, [&](auto tag) {
    using T = decltype(tag);
    const auto pi = coupling_from_json<T>(read_text_file(pi_path));
    const auto other = coupling_from_json<T>(read_text_file(other_path));
    const AwResult<T> r = adapted_wasserstein(pi, other, cfg.rho);
    AwReport rep{format_scalar(r.cost), format_scalar(r.distance), plan_json(r), std::nullopt};
    if (nested) {
      const T v = nested_wasserstein_bruteforce(pi, other, cfg.rho);
      if (!num::eq(v, r.cost)) throw InternalError("nested brute force disagrees with the adapted solver");
      rep.nested = format_scalar(v);
    }
    return rep;
  });
}

std::string cmd_stability(Preset preset, std::size_t n, std::size_t k, const RunConfig& cfg) {
  if (n == 0) throw ParameterError("sequence length must be positive");
  return dispatch(cfg, [&](auto tag) {
    using T = decltype(tag);
    switch (preset) {
      case Preset::jump:
        return stability_csv(stability_run(jump_sequence<T>(n), cfg.rho));
      case Preset::counterexample: {
        const CounterexampleReport rep = counterexample_run<T>(k, n);
        if (!rep.holds) throw InternalError("counterexample lower bound violated");
        return stability_csv(rep.rows);
      }
      case Preset::constant: {
        const T q = T(1) / T(4);
        const DiscreteMeasure<T> mu({{T(-1), q}, {T(0), T(2) * q}, {T(1), q}});
        const DiscreteMeasure<T> nu({{T(-2), q}, {T(-1), q}, {T(1), q}, {T(2), q}});
        return stability_csv(stability_run(constant_sequence(mu, nu, n), cfg.rho));
      }
    }
    throw InternalError("unhandled preset");
  });
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return 3;
  if (dynamic_cast<const ScaleError*>(&e)) return 4;
  if (dynamic_cast<const InternalError*>(&e)) return 1;
  if (dynamic_cast<const Error*>(&e)) return 2;
  return 1;
}

}  // namespace mot
