#pragma once
// Closed-form fork-length bounds. All ceilings go through guarded_ceil, which
// subtracts 1e-12 first so values that are exact integers in real arithmetic
// but land a few ulps high in floating point do not round one step too far.

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "forklab/game.hpp"

namespace forklab {

inline std::int64_t guarded_ceil(double x) {
  return static_cast<std::int64_t>(std::ceil(x - 1e-12));
}

namespace detail {
inline void check_rates(double phi, double epsilon) {
  if (!(phi > 1.0)) throw std::invalid_argument("phi must be > 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
}
}  // namespace detail

// Smallest k with (1+epsilon)^k >= phi, evaluated as ceil(log phi / log(1+eps)).
inline std::int64_t k_steps(double phi, double epsilon) {
  detail::check_rates(phi, epsilon);
  return guarded_ceil(std::log(phi) / std::log1p(epsilon));
}

inline std::int64_t ell_weight(double phi, double epsilon) {
  detail::check_rates(phi, epsilon);
  return guarded_ceil(phi / epsilon);
}

inline std::int64_t ell_genesis(double phi, std::int64_t k, std::int64_t rho) {
  if (!(phi > 1.0)) throw std::invalid_argument("phi must be > 1");
  if (k < 1) throw std::invalid_argument("genesis window must be >= 1");
  if (rho < 2) throw std::invalid_argument("rho must be >= 2");
  return guarded_ceil(phi) * k * rho;
}

struct UniversalBound {
  std::int64_t k = 0;    // tent half-width
  std::int64_t l = 0;    // flat length
  std::int64_t ell = 0;  // l + 2k
};

inline UniversalBound ell_universal(double phi, double epsilon, std::int64_t rho) {
  detail::check_rates(phi, epsilon);
  if (rho < 2) throw std::invalid_argument("rho must be >= 2");
  const std::int64_t k = k_steps(phi, epsilon);
  const double shrink = (1.0 + epsilon) - 1.0 / phi;
  const double base = static_cast<double>(rho) * phi * phi * shrink / epsilon;
  const std::int64_t l = guarded_ceil(base * (1.0 + epsilon)) + guarded_ceil(base);
  return {k, l, l + 2 * k};
}

// Raw lower bound for the tent rule; may be negative when the k term
// dominates, so callers clamp for display.
inline double ell_tent_lower(double phi, double epsilon, std::int64_t rho) {
  detail::check_rates(phi, epsilon);
  if (rho < 2) throw std::invalid_argument("rho must be >= 2");
  const double inner = phi * (1.0 + epsilon) * (1.0 - 1.0 / phi) / epsilon;
  return static_cast<double>(rho) * (inner - static_cast<double>(k_steps(phi, epsilon)));
}

struct BoundReport {
  GameParams params;
  std::int64_t genesis_k = 1;
  std::int64_t k_steps = 0;
  std::int64_t ell_weight = 0;
  std::int64_t ell_genesis = 0;
  UniversalBound universal;
  double tent_lower_raw = 0.0;
  double tent_lower_clamped = 0.0;
  bool tent_lower_negative = false;
};

// One row of the bounds table. The genesis window defaults to k_steps so the
// row is self-consistent; pass an explicit window to override.
inline BoundReport bound_report(const GameParams& params, std::int64_t genesis_k = 0) {
  validate_params(params);
  BoundReport r;
  r.params = params;
  r.k_steps = k_steps(params.phi, params.epsilon);
  r.genesis_k = genesis_k > 0 ? genesis_k : r.k_steps;
  r.ell_weight = ell_weight(params.phi, params.epsilon);
  r.ell_genesis = ell_genesis(params.phi, r.genesis_k, params.rho);
  r.universal = ell_universal(params.phi, params.epsilon, params.rho);
  r.tent_lower_raw = ell_tent_lower(params.phi, params.epsilon, params.rho);
  r.tent_lower_clamped = r.tent_lower_raw < 0 ? 0.0 : r.tent_lower_raw;
  r.tent_lower_negative = r.tent_lower_raw < 0;
  return r;
}

}  // namespace forklab
