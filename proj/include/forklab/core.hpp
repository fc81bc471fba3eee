#pragma once
// Core domain types for space-profile chains: blocks, chains, space profiles,
// fork computation, and tent fitting. Everything here is an immutable value
// type; operations are pure functions.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace forklab {

// Relative tolerance for all space comparisons. Profile values are products of
// doubles that are exact in intent; the tolerance absorbs float rounding.
inline constexpr double kRelTol = 1e-9;

struct Block {
  double space = 1.0;            // abstract space units, > 0
  std::int64_t payload_id = 0;   // distinguishes otherwise-equal blocks across chains

  friend bool operator==(const Block&, const Block&) = default;
};

struct SpaceProfile {
  std::vector<double> values;    // all entries > 0

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
  double operator[](std::size_t i) const { return values[i]; }
};

// index 0 is the genesis block, which always has space 1
struct Chain {
  std::vector<Block> blocks;

  std::size_t length() const { return blocks.size(); }

  SpaceProfile profile() const {
    SpaceProfile p;
    p.values.reserve(blocks.size());
    for (const Block& b : blocks) p.values.push_back(b.space);
    return p;
  }
};

inline Chain genesis_chain() { return Chain{{Block{1.0, 0}}}; }

// Tent (delta, x, y): value at index i is y / delta^{|i-x|}, so y is the value
// at the apex. Tents are ordered by size y alone.
struct Tent {
  double decay = 1.0;
  std::size_t apex = 0;
  double size = 0.0;
};

struct ForkView {
  std::size_t fork_index = 0;    // first index where the chains differ
  SpaceProfile honest_suffix;    // values from fork_index to the end
  SpaceProfile adversarial_suffix;
};

struct ProfileValidation {
  bool ok = true;
  std::size_t violating_index = 0;  // smallest bad step when !ok

  explicit operator bool() const { return ok; }
};

// Checks that every consecutive step of the profile stays within a factor of
// (1+epsilon) in either direction, with relative tolerance kRelTol.
inline ProfileValidation validate_profile(const SpaceProfile& profile, double epsilon) {
  if (profile.empty()) throw std::invalid_argument("empty profile");
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be > 0");
  for (double v : profile.values)
    if (!(v > 0)) throw std::invalid_argument("non-positive space");
  for (std::size_t i = 0; i + 1 < profile.size(); ++i) {
    const double v = profile.values[i];
    const double w = profile.values[i + 1];
    const double tol = kRelTol * v;
    if (w < v / (1.0 + epsilon) - tol || w > v * (1.0 + epsilon) + tol)
      return {false, i};
  }
  return {true, 0};
}

namespace detail {
inline void check_comparable(const Chain& a, const Chain& b) {
  if (a.length() != b.length()) throw std::invalid_argument("length mismatch");
  if (a.blocks.empty()) throw std::invalid_argument("empty chain");
  if (!(a.blocks[0] == b.blocks[0])) throw std::invalid_argument("no common genesis");
}
}  // namespace detail

// Smallest index where the chains differ (space or payload id), or nullopt if
// the chains are identical.
inline std::optional<std::size_t> fork_point(const Chain& a, const Chain& b) {
  detail::check_comparable(a, b);
  for (std::size_t i = 0; i < a.length(); ++i)
    if (!(a.blocks[i] == b.blocks[i])) return i;
  return std::nullopt;
}

inline std::optional<ForkView> fork_view(const Chain& honest, const Chain& adversarial) {
  const auto lambda = fork_point(honest, adversarial);
  if (!lambda) return std::nullopt;
  ForkView view;
  view.fork_index = *lambda;
  for (std::size_t i = *lambda; i < honest.length(); ++i) {
    view.honest_suffix.values.push_back(honest.blocks[i].space);
    view.adversarial_suffix.values.push_back(adversarial.blocks[i].space);
  }
  return view;
}

inline double chain_weight(const Chain& c, std::size_t from, std::size_t to) {
  if (from > to || to >= c.length()) throw std::out_of_range("chain_weight: bad index range");
  double sum = 0.0;
  for (std::size_t i = from; i <= to; ++i) sum += c.blocks[i].space;
  return sum;
}

inline double chain_weight(const Chain& c) {
  if (c.blocks.empty()) throw std::out_of_range("chain_weight: empty chain");
  return chain_weight(c, 0, c.length() - 1);
}

// Largest tent embeddable under the profile, apex restricted to the profile's
// own index range: size = max_x min_i values[i] * delta^{|i-x|}, smallest apex
// on ties. Two sweeps make it O(n): inward minima from the left and from the
// right, both bounded above by the local value, so nothing overflows.
inline Tent tent_fit(const SpaceProfile& profile, double decay) {
  if (profile.empty()) throw std::invalid_argument("empty profile");
  if (!(decay > 1.0)) throw std::invalid_argument("tent decay must be > 1");
  const std::size_t n = profile.size();
  std::vector<double> left(n), right(n);
  left[0] = profile.values[0];
  for (std::size_t i = 1; i < n; ++i)
    left[i] = std::min(profile.values[i], decay * left[i - 1]);
  right[n - 1] = profile.values[n - 1];
  for (std::size_t i = n - 1; i-- > 0;)
    right[i] = std::min(profile.values[i], decay * right[i + 1]);
  Tent best{decay, 0, std::min(left[0], right[0])};
  for (std::size_t x = 1; x < n; ++x) {
    const double mu = std::min(left[x], right[x]);
    if (mu > best.size) best = Tent{decay, x, mu};
  }
  return best;
}

}  // namespace forklab
