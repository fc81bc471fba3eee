#pragma once
// Scripted adversaries and a discretized exhaustive search.
//
// The universal pair (S, S_tilde) is built so that the two profiles are
// epsilon-valid, share length 2k+l+1, and no selection rule can prefer both:
// whichever side a rule keeps, the adversary drives the honest chain to the
// other profile and forges the kept one within the same round budget. The
// peaks intentionally differ (phi vs (1+eps)^k): equal-peak pairs tie the
// tent comparison, because for an epsilon-valid profile the largest
// embeddable tent with decay 1+eps is exactly the profile maximum.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "forklab/bounds.hpp"
#include "forklab/core.hpp"
#include "forklab/game.hpp"

namespace forklab {

struct ProfilePair {
  SpaceProfile S;        // peaked at the front, flat tail
  SpaceProfile S_tilde;  // flat front, peaked tail
  std::int64_t k = 0;
  std::int64_t l = 0;
};

// True when (1+eps)^k does not exceed phi, i.e. the rise cannot overshoot the
// honest/adversarial ratio. The tail profile then needs a wider, taller tent
// to stay distinguishable from the front one.
inline bool universal_boundary_case(double phi, double epsilon) {
  const std::int64_t k = k_steps(phi, epsilon);
  return std::pow(1.0 + epsilon, static_cast<double>(k)) <= phi * (1.0 + kRelTol);
}

inline ProfilePair universal_profiles(const GameParams& params) {
  validate_params(params);
  const UniversalBound ub = ell_universal(params.phi, params.epsilon, params.rho);
  const std::int64_t k = ub.k;
  const std::int64_t l = ub.l;
  const std::int64_t ell = ub.ell;
  const double delta = 1.0 + params.epsilon;

  std::vector<double> pw(static_cast<std::size_t>(k) + 2);
  pw[0] = 1.0;
  for (std::size_t i = 1; i < pw.size(); ++i) pw[i] = pw[i - 1] * delta;

  ProfilePair pp;
  pp.k = k;
  pp.l = l;
  pp.S.values.assign(static_cast<std::size_t>(ell) + 1, 1.0);
  pp.S_tilde.values.assign(static_cast<std::size_t>(ell) + 1, 1.0);

  // S: tent of half-width k at the front, peak (1+eps)^k at index k.
  for (std::int64_t j = 0; j <= 2 * k; ++j)
    pp.S.values[j] = pw[static_cast<std::size_t>(std::min(j, 2 * k - j))];

  if (!universal_boundary_case(params.phi, params.epsilon)) {
    // S_tilde: same tent shifted to the tail, peak lowered to exactly phi.
    // Valid since (1+eps)^{k-1} < phi <= (1+eps)^k. The lowered peak makes
    // S_tilde strictly smaller than S under weight, window, and tent
    // comparisons, so faking S beats every rule that keeps S_tilde.
    for (std::int64_t j = 0; j <= 2 * k; ++j)
      pp.S_tilde.values[l + j] = pw[static_cast<std::size_t>(std::min(j, 2 * k - j))];
    pp.S_tilde.values[l + k] = params.phi;
  } else {
    // phi == (1+eps)^k: lowering the peak would change nothing, so raise and
    // widen instead. Rise to (1+eps)^{k+1} over indices l..l+k, fall back to
    // (1+eps) at the end. The taller tail tent wins the tent comparison and
    // the larger total wins weight; the front bump of S still wins the
    // genesis window, so each rule still loses one direction.
    for (std::int64_t j = 0; j <= k; ++j)
      pp.S_tilde.values[l + j] = pw[static_cast<std::size_t>(j + 1)];
    for (std::int64_t j = k + 1; j <= 2 * k; ++j)
      pp.S_tilde.values[l + j] = pw[static_cast<std::size_t>(2 * k + 1 - j)];
  }
  return pp;
}

struct ReplotPlan {
  std::int64_t rounds = 0;        // rho * total replot count
  std::int64_t replot_count = 0;  // sum of per-target counts
  std::vector<double> bootstrap_sizes;          // initial space of each target block
  std::vector<std::vector<double>> increments;  // replot additions per target
};

// Builds each target block from a 1/phi bootstrap plus ceil(target*phi - 1)
// replot increments of at most 1/phi. Targets below 1/phi are a caller bug:
// they need no replots and belong in a plain bootstrap.
inline ReplotPlan replot_schedule(const std::vector<double>& targets, double phi,
                                  std::int64_t rho) {
  if (targets.empty()) throw std::invalid_argument("no replot targets");
  if (!(phi > 1.0)) throw std::invalid_argument("phi must be > 1");
  if (rho < 2) throw std::invalid_argument("rho must be >= 2");
  const double unit = 1.0 / phi;
  ReplotPlan plan;
  plan.bootstrap_sizes.reserve(targets.size());
  plan.increments.reserve(targets.size());
  for (double target : targets) {
    if (target < unit * (1.0 - kRelTol))
      throw std::invalid_argument("replot target below the bootstrap unit 1/phi");
    const std::int64_t m = guarded_ceil(target * phi - 1.0);
    std::vector<double> inc;
    if (m > 0) {
      inc.assign(static_cast<std::size_t>(m) - 1, unit);
      inc.push_back(target - static_cast<double>(m) * unit);
      plan.bootstrap_sizes.push_back(unit);
    } else {
      plan.bootstrap_sizes.push_back(target);
    }
    plan.replot_count += m;
    plan.rounds += rho * m;
    plan.increments.push_back(std::move(inc));
  }
  return plan;
}

enum class UniversalDirection { fake_S_tilde, fake_S };

inline UniversalDirection parse_direction(const std::string& text) {
  if (text == "stilde") return UniversalDirection::fake_S_tilde;
  if (text == "s") return UniversalDirection::fake_S;
  throw usage_error("bad universal direction: " + text);
}

namespace detail {

// Round-indexed action planner. Tracks the earliest round that can carry a
// move, charging one round per bootstrap and rho rounds per replot (the
// replot round plus its lock span).
struct ActionPlanner {
  std::vector<AdversaryAction>& plan;  // index = round
  const std::vector<double>& a;        // adversarial space per round
  std::int64_t last_round;
  std::int64_t rho;
  std::int64_t next_free = 1;

  void require(bool cond, const char* what) const {
    if (!cond) throw std::runtime_error(std::string("attack does not fit: ") + what);
  }

  void advance_to(std::int64_t round) {
    require(round >= next_free, "schedule overlap");
    next_free = round;
  }

  void bootstrap(std::vector<double> sizes) {
    require(next_free <= last_round, "bootstrap past the final round");
    for (double s : sizes)
      require(s <= a[static_cast<std::size_t>(next_free)] * (1.0 + kRelTol),
              "bootstrap block above current space");
    plan[static_cast<std::size_t>(next_free)].move = MoveKind::bootstrap;
    plan[static_cast<std::size_t>(next_free)].bootstrap_sizes = std::move(sizes);
    next_free += 1;
  }

  void replot(double add) {
    require(next_free <= last_round, "replot past the final round");
    require(add <= a[static_cast<std::size_t>(next_free)] * (1.0 + kRelTol),
            "replot increment above current space");
    plan[static_cast<std::size_t>(next_free)].move = MoveKind::replot;
    plan[static_cast<std::size_t>(next_free)].replot_add = add;
    next_free += rho;
  }
};

inline Strategy scripted_strategy(std::string name, std::vector<AdversaryAction> plan) {
  auto shared = std::make_shared<std::vector<AdversaryAction>>(std::move(plan));
  Strategy s;
  s.name = std::move(name);
  s.next = [shared](const GameState& st) {
    const std::size_t r = static_cast<std::size_t>(st.round) + 1;
    if (r >= shared->size()) throw game_error(st.round, "strategy exhausted its script");
    return (*shared)[r];
  };
  return s;
}

}  // namespace detail

// Drives the honest chain to one profile of the universal pair while forging
// the other. fake_S_tilde: honest follows S, the flat tail of S_tilde is
// bootstrapped at the peak round (space first reaches 1 there) together with
// the first tail-tent block, and the remaining tent blocks are replotted
// afterwards. fake_S: the front tent of S is replotted during the flat
// rounds, and the last tent block plus the whole flat tail are bootstrapped
// once the honest profile's tail tent lifts the adversary's space to 1.
// Construction fails loudly if any schedule would overrun round 2k+l.
inline Strategy universal_attack(const GameParams& params, UniversalDirection direction) {
  validate_params(params);
  const ProfilePair pp = universal_profiles(params);
  const std::int64_t ell = 2 * pp.k + pp.l;
  const bool faking_tail = direction == UniversalDirection::fake_S_tilde;
  const SpaceProfile& honest_target = faking_tail ? pp.S : pp.S_tilde;
  const SpaceProfile& adv_target = faking_tail ? pp.S_tilde : pp.S;

  std::vector<AdversaryAction> plan(static_cast<std::size_t>(ell) + 1);
  for (std::int64_t r = 1; r <= ell; ++r)
    plan[static_cast<std::size_t>(r)].gamma =
        honest_target.values[static_cast<std::size_t>(r)] /
        honest_target.values[static_cast<std::size_t>(r) - 1];

  // Space table folded exactly as the engine folds it.
  std::vector<double> a(static_cast<std::size_t>(ell) + 1);
  a[0] = params.initial_adv_space();
  for (std::int64_t r = 1; r <= ell; ++r)
    a[static_cast<std::size_t>(r)] =
        a[static_cast<std::size_t>(r) - 1] * plan[static_cast<std::size_t>(r)].gamma;

  detail::ActionPlanner planner{plan, a, ell, params.rho};

  if (faking_tail) {
    // Leading exact-1 targets are the flat prefix; the rest is the tail tent.
    std::size_t flats = 0;
    while (flats + 1 < adv_target.size() && adv_target.values[flats + 1] == 1.0) ++flats;
    std::vector<double> tent(adv_target.values.begin() + 1 + flats, adv_target.values.end());
    const ReplotPlan rp = replot_schedule(tent, params.phi, params.rho);

    planner.advance_to(pp.k);
    std::vector<double> first(flats, 1.0);
    first.push_back(rp.bootstrap_sizes[0]);
    planner.bootstrap(std::move(first));
    for (std::size_t j = 0; j < tent.size(); ++j) {
      if (j > 0) planner.bootstrap({rp.bootstrap_sizes[j]});
      for (double inc : rp.increments[j]) planner.replot(inc);
    }
    planner.require(planner.next_free <= ell + 1, "tail tent replots overrun the game");
  } else {
    // Front tent blocks 1..2k-1; block 2k (space 1) rides the big bootstrap.
    std::vector<double> tent(adv_target.values.begin() + 1,
                             adv_target.values.begin() + 2 * pp.k);
    const ReplotPlan rp = replot_schedule(tent, params.phi, params.rho);
    for (std::size_t j = 0; j < tent.size(); ++j) {
      planner.bootstrap({rp.bootstrap_sizes[j]});
      for (double inc : rp.increments[j]) planner.replot(inc);
    }
    std::int64_t merge = planner.next_free;
    while (merge <= ell && a[static_cast<std::size_t>(merge)] * (1.0 + kRelTol) < 1.0) ++merge;
    planner.require(merge <= ell, "no round reaches space 1 after the front tent");
    planner.advance_to(merge);
    std::vector<double> big(static_cast<std::size_t>(pp.l) + 1, 1.0);
    planner.bootstrap(std::move(big));
  }

  plan[static_cast<std::size_t>(ell)].stop = true;
  return detail::scripted_strategy(
      faking_tail ? "universal:direction=stilde" : "universal:direction=s", std::move(plan));
}

// One huge bootstrap at round 1, then coast downhill: the honest chain's
// total weight is capped by the geometric series 1/eps while the forged
// chain keeps j * a_1, so j = ceil(phi (1+eps) / eps) blocks always suffice.
inline Strategy weight_attack(const GameParams& params) {
  validate_params(params);
  const std::int64_t j = guarded_ceil(params.phi * (1.0 + params.epsilon) / params.epsilon);
  const double gamma = 1.0 / (1.0 + params.epsilon);
  const double size = params.initial_adv_space() * gamma;  // a_1, engine-identical
  std::vector<AdversaryAction> plan(static_cast<std::size_t>(j) + 1);
  for (std::int64_t r = 1; r <= j; ++r) plan[static_cast<std::size_t>(r)].gamma = gamma;
  plan[1].move = MoveKind::bootstrap;
  plan[1].bootstrap_sizes.assign(static_cast<std::size_t>(j), size);
  plan[static_cast<std::size_t>(j)].stop = true;
  return detail::scripted_strategy("weight-attack", std::move(plan));
}

// Replots k window blocks up to ceil(phi)/phi >= 1 back to back, fills the
// chain with 1/phi blocks, and stops at round ceil(phi)*k*rho exactly. The
// final bootstrap shares the last round when k == 1 and rho == 2.
inline Strategy genesis_attack(const GameParams& params, int k) {
  validate_params(params);
  if (k < 1) throw std::invalid_argument("genesis window must be >= 1");
  const std::int64_t cp = guarded_ceil(params.phi);
  const std::int64_t ell = ell_genesis(params.phi, k, params.rho);
  const double target = static_cast<double>(cp) / params.phi;
  const ReplotPlan rp =
      replot_schedule(std::vector<double>(static_cast<std::size_t>(k), target), params.phi,
                      params.rho);

  std::vector<AdversaryAction> plan(static_cast<std::size_t>(ell) + 1);
  std::vector<double> a(static_cast<std::size_t>(ell) + 1, params.initial_adv_space());
  detail::ActionPlanner planner{plan, a, ell, params.rho};
  for (std::size_t j = 0; j < rp.bootstrap_sizes.size(); ++j) {
    planner.bootstrap({rp.bootstrap_sizes[j]});
    for (double inc : rp.increments[j]) planner.replot(inc);
  }
  const std::int64_t fillers = ell - k;
  planner.bootstrap(std::vector<double>(static_cast<std::size_t>(fillers),
                                        params.initial_adv_space()));
  plan[static_cast<std::size_t>(ell)].stop = true;
  return detail::scripted_strategy("genesis-attack:k=" + std::to_string(k), std::move(plan));
}

struct GridSpec {
  std::int64_t max_nodes = 100'000'000;
};

struct search_budget_error : std::runtime_error {
  std::int64_t nodes;
  explicit search_budget_error(std::int64_t n)
      : std::runtime_error("search budget exceeded after " + std::to_string(n) + " nodes"),
        nodes(n) {}
};

// Iterative-deepening exhaustive search over a coarse action grid: three
// growth factors, block sizes a_i and a_i/2, bootstraps of one block or
// exactly enough to allow the stop, replots of a_i or a_i/2. Returns the
// shortest winning transcript, or nullopt when the whole tree up to max_fork
// rounds contains none. A falsifier, not a completeness proof.
inline std::optional<Transcript> grid_search(const GameParams& params, const RuleSpec& rule_in,
                                             std::int64_t max_fork, const GridSpec& spec = {}) {
  validate_params(params);
  if (max_fork < 0) throw std::invalid_argument("max_fork must be >= 0");
  const RuleSpec rule = resolve_rule(rule_in, params);
  const double gammas[3] = {1.0 / (1.0 + params.epsilon), 1.0, 1.0 + params.epsilon};

  std::int64_t nodes = 0;
  std::vector<AdversaryAction> chosen;
  std::optional<Transcript> found;

  auto charge = [&]() {
    if (++nodes > spec.max_nodes) throw search_budget_error(nodes);
  };

  std::function<bool(const GameState&, std::int64_t)> dfs =
      [&](const GameState& s, std::int64_t depth) -> bool {
    const bool final_round = s.round + 1 == depth;
    for (double g : gammas) {
      std::vector<AdversaryAction> cands;
      AdversaryAction base;
      base.gamma = g;
      cands.push_back(base);
      if (s.lock == 0) {
        const double a_next = s.adv_space * g;
        const std::int64_t have = static_cast<std::int64_t>(s.adv_chain.length()) - 1;
        const std::int64_t fill = depth - have;
        for (double size : {a_next, a_next / 2}) {
          AdversaryAction b = base;
          b.move = MoveKind::bootstrap;
          b.bootstrap_sizes.assign(1, size);
          cands.push_back(b);
          if (fill > 1) {
            b.bootstrap_sizes.assign(static_cast<std::size_t>(fill), size);
            cands.push_back(b);
          }
        }
        if (s.adv_chain.length() >= 2) {
          for (double add : {a_next, a_next / 2}) {
            AdversaryAction r = base;
            r.move = MoveKind::replot;
            r.replot_add = add;
            cands.push_back(r);
          }
        }
      }
      for (AdversaryAction& cand : cands) {
        if (final_round) {
          cand.stop = true;
          GameState t = s;
          charge();
          bool legal = true;
          try {
            apply_step(t, cand);
          } catch (const game_error&) {
            legal = false;
          }
          if (legal && evaluate(t, rule).winner == 1) {
            chosen.push_back(cand);
            Transcript win;
            win.params = params;
            win.actions = chosen;
            win.final_state = std::move(t);
            win.outcome = evaluate(win.final_state, rule);
            found = std::move(win);
            return true;
          }
          cand.stop = false;
          continue;
        }
        GameState t = s;
        charge();
        bool legal = true;
        try {
          apply_step(t, cand);
        } catch (const game_error&) {
          legal = false;
        }
        if (!legal) continue;
        chosen.push_back(cand);
        if (dfs(t, depth)) return true;
        chosen.pop_back();
      }
    }
    return false;
  };

  for (std::int64_t depth = 1; depth <= max_fork; ++depth) {
    chosen.clear();
    const GameState s0 = initial_state(params);
    if (dfs(s0, depth)) return found;
  }
  return std::nullopt;
}

}  // namespace forklab
