#pragma once
// Chain selection rules over equal-length chains with a common genesis.
// Every rule returns a bit: 0 keeps the honest chain, 1 adopts the
// adversarial one. Tie policy follows the strict-inequality definitions:
// weight and window ties go to the adversary, tent ties keep the honest
// chain. This asymmetry shifts attack thresholds by one round, so it is
// load-bearing.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <string>

#include "forklab/core.hpp"

namespace forklab {

enum class RuleKind { weight, genesis, tent };

struct RuleSpec {
  RuleKind kind = RuleKind::weight;
  int k = 1;           // window width; kind == genesis only, must be >= 1
  double delta = 0.0;  // tent decay; kind == tent only, 0 means "1 + epsilon of the game"
};

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Accepted forms: "weight" | "genesis:k=<int>" | "tent:delta=<real>" | "tent".
inline RuleSpec parse_rule(const std::string& text) {
  if (text == "weight") return {RuleKind::weight, 1, 0.0};
  if (text == "tent") return {RuleKind::tent, 1, 0.0};
  if (text.rfind("genesis:k=", 0) == 0) {
    const std::string num = text.substr(10);
    int k = 0;
    const auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), k);
    if (ec != std::errc{} || p != num.data() + num.size() || k < 1)
      throw usage_error("bad rule string: " + text);
    return {RuleKind::genesis, k, 0.0};
  }
  if (text.rfind("tent:delta=", 0) == 0) {
    const std::string num = text.substr(11);
    try {
      std::size_t used = 0;
      const double delta = std::stod(num, &used);
      if (used != num.size() || !(delta > 1.0)) throw usage_error("bad rule string: " + text);
      return {RuleKind::tent, 1, delta};
    } catch (const usage_error&) {
      throw;
    } catch (const std::exception&) {
      throw usage_error("bad rule string: " + text);
    }
  }
  throw usage_error("bad rule string: " + text);
}

inline std::string rule_to_string(const RuleSpec& rule) {
  switch (rule.kind) {
    case RuleKind::weight:
      return "weight";
    case RuleKind::genesis:
      return "genesis:k=" + std::to_string(rule.k);
    case RuleKind::tent: {
      char buf[48];
      std::snprintf(buf, sizeof buf, "tent:delta=%.12g", rule.delta);
      return buf;
    }
  }
  return "weight";
}

// Total weight comparison; honest survives only on strictly larger weight.
inline int cs_weight(const Chain& honest, const Chain& adversarial) {
  detail::check_comparable(honest, adversarial);
  return chain_weight(honest) > chain_weight(adversarial) ? 0 : 1;
}

// Weight of the k blocks starting at the first differing index. Identical
// chains have no fork and keep the honest chain.
inline int cs_genesis(int k, const Chain& honest, const Chain& adversarial) {
  if (k < 1) throw std::invalid_argument("genesis window must be >= 1");
  const auto lambda = fork_point(honest, adversarial);
  if (!lambda) return 0;
  const std::size_t from = *lambda;
  const std::size_t to = std::min(honest.length() - 1, from + static_cast<std::size_t>(k) - 1);
  const double hw = chain_weight(honest, from, to);
  const double aw = chain_weight(adversarial, from, to);
  return hw > aw ? 0 : 1;
}

// Largest-tent comparison over the fork suffixes; honest survives ties.
inline int cs_tent(double delta, const Chain& honest, const Chain& adversarial) {
  if (!(delta > 1.0)) throw std::invalid_argument("tent decay must be > 1");
  const auto view = fork_view(honest, adversarial);
  if (!view) return 0;
  const double mu = tent_fit(view->honest_suffix, delta).size;
  const double mu_adv = tent_fit(view->adversarial_suffix, delta).size;
  return mu >= mu_adv ? 0 : 1;
}

inline int select(const RuleSpec& rule, const Chain& honest, const Chain& adversarial) {
  switch (rule.kind) {
    case RuleKind::weight:
      return cs_weight(honest, adversarial);
    case RuleKind::genesis:
      return cs_genesis(rule.k, honest, adversarial);
    case RuleKind::tent:
      if (!(rule.delta > 1.0)) throw std::invalid_argument("tent rule needs a resolved delta > 1");
      return cs_tent(rule.delta, honest, adversarial);
  }
  throw std::invalid_argument("unknown rule kind");
}

}  // namespace forklab
