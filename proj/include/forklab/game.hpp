#pragma once
// The forking game as an enforced state machine. One round = one honest block.
// The adversary picks a growth factor gamma each round and may bootstrap many
// blocks (each bounded by its current space), replot the last block (which
// arms a lock for rho-1 further rounds), or stop. Stopping is a flag checked
// after the round's move resolves, so a final bootstrap and the stop can share
// a round; a replot never shares one because it re-arms the lock.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "forklab/core.hpp"
#include "forklab/rules.hpp"

namespace forklab {

struct GameParams {
  double phi = 2.0;      // honest space = phi * adversarial space, > 1
  double epsilon = 0.01; // per-round growth bound, > 0
  std::int64_t rho = 2;  // rounds consumed by one replot, >= 2
  double a0 = 0.0;       // adversary's initial space; 0 selects 1/phi so h_0 = 1

  double initial_adv_space() const { return a0 > 0 ? a0 : 1.0 / phi; }
};

inline void validate_params(const GameParams& p) {
  if (!(p.phi > 1.0)) throw std::invalid_argument("phi must be > 1");
  if (!(p.epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (p.rho < 2) throw std::invalid_argument("rho must be >= 2");
  if (p.a0 < 0.0) throw std::invalid_argument("a0 must be positive");
}

enum class MoveKind { none, bootstrap, replot };

struct AdversaryAction {
  double gamma = 1.0;
  MoveKind move = MoveKind::none;
  std::vector<double> bootstrap_sizes;  // move == bootstrap: one entry per new block
  double replot_add = 0.0;              // move == replot: added to the last block
  bool stop = false;                    // resolved after the move; requires lock == 0
};

struct game_error : std::runtime_error {
  std::int64_t round;
  game_error(std::int64_t r, const std::string& what)
      : std::runtime_error("round " + std::to_string(r) + ": " + what), round(r) {}
};

// Adversarial payload ids start far above any honest round index so the two
// chains can never collide on (space, payload_id).
inline constexpr std::int64_t kAdversaryPayloadBase = 1'000'000'000;

struct GameState {
  GameParams params;
  std::int64_t round = 0;
  std::int64_t lock = 0;                // in [0, rho-1]; moves forbidden while > 0
  double adv_space = 0.0;               // a_i
  double honest_space = 0.0;            // h_i = phi * a_i, invariant
  Chain honest_chain;                   // length == round + 1
  Chain adv_chain;
  bool stopped = false;
  std::int64_t next_adv_payload = kAdversaryPayloadBase;
};

inline GameState initial_state(const GameParams& params) {
  validate_params(params);
  GameState s;
  s.params = params;
  s.adv_space = params.initial_adv_space();
  s.honest_space = params.phi * s.adv_space;
  s.honest_chain = genesis_chain();
  s.adv_chain = genesis_chain();
  return s;
}

// Advances one round in place. Order: round counter, gamma application and the
// honest block, lock decrement (which forces move none), the move, then the
// stop flag.
inline void apply_step(GameState& s, const AdversaryAction& action) {
  if (s.stopped) throw game_error(s.round, "game already stopped");
  const double lo = 1.0 / (1.0 + s.params.epsilon);
  const double hi = 1.0 + s.params.epsilon;
  if (action.gamma < lo * (1.0 - kRelTol) || action.gamma > hi * (1.0 + kRelTol))
    throw game_error(s.round + 1, "gamma out of range");

  s.round += 1;
  s.adv_space *= action.gamma;
  s.honest_space = s.params.phi * s.adv_space;
  s.honest_chain.blocks.push_back(Block{s.honest_space, s.round});

  if (s.lock > 0) {
    s.lock -= 1;
    if (action.move != MoveKind::none)
      throw game_error(s.round, "move attempted while replotting lock is armed");
  } else {
    switch (action.move) {
      case MoveKind::none:
        break;
      case MoveKind::bootstrap: {
        if (action.bootstrap_sizes.empty())
          throw game_error(s.round, "bootstrap with no blocks");
        for (double size : action.bootstrap_sizes) {
          if (!(size > 0)) throw game_error(s.round, "bootstrap block with non-positive space");
          if (size > s.adv_space * (1.0 + kRelTol))
            throw game_error(s.round, "bootstrap block exceeds current adversarial space");
          s.adv_chain.blocks.push_back(Block{size, s.next_adv_payload++});
        }
        break;
      }
      case MoveKind::replot: {
        if (s.adv_chain.length() < 2)
          throw game_error(s.round, "replot on a chain consisting only of genesis");
        if (!(action.replot_add > 0))
          throw game_error(s.round, "replot with non-positive increment");
        if (action.replot_add > s.adv_space * (1.0 + kRelTol))
          throw game_error(s.round, "replot increment exceeds current adversarial space");
        s.adv_chain.blocks.back().space += action.replot_add;
        s.lock = s.params.rho - 1;
        break;
      }
    }
  }

  if (action.stop) {
    if (s.lock != 0) throw game_error(s.round, "stop while replotting lock is armed");
    if (static_cast<std::int64_t>(s.adv_chain.length()) - 1 < s.round)
      throw game_error(s.round, "stop with adversarial chain shorter than the round count");
    s.stopped = true;
  }
}

inline GameState step(GameState state, const AdversaryAction& action) {
  apply_step(state, action);
  return state;
}

struct Outcome {
  int winner = 0;                // 0 honest, 1 adversarial
  std::int64_t fork_length = 0;  // rounds since the last common block
};

// Fills rule defaults that depend on the game: a tent rule without an explicit
// decay uses 1 + epsilon.
inline RuleSpec resolve_rule(RuleSpec rule, const GameParams& params) {
  if (rule.kind == RuleKind::tent && !(rule.delta > 0)) rule.delta = 1.0 + params.epsilon;
  return rule;
}

// Truncates the adversarial chain to the honest length, applies the rule, and
// measures the fork length as round count minus common prefix end.
inline Outcome evaluate(const GameState& s, const RuleSpec& rule) {
  if (!s.stopped) throw game_error(s.round, "evaluate before stop");
  if (s.adv_chain.length() < s.honest_chain.length())
    throw game_error(s.round, "adversarial chain shorter than honest at evaluation");
  Chain adv_prefix;
  adv_prefix.blocks.assign(s.adv_chain.blocks.begin(),
                           s.adv_chain.blocks.begin() + s.honest_chain.length());
  Outcome out;
  out.winner = select(rule, s.honest_chain, adv_prefix);
  std::size_t common = 0;
  while (common < s.honest_chain.length() &&
         s.honest_chain.blocks[common] == adv_prefix.blocks[common])
    ++common;
  out.fork_length = s.round - static_cast<std::int64_t>(common - 1);
  return out;
}

// A deterministic action source. next() sees the current state (round r) and
// returns the action for round r+1, so transcripts replay statelessly.
struct Strategy {
  std::string name;
  std::function<AdversaryAction(const GameState&)> next;
};

struct Transcript {
  GameParams params;
  std::vector<AdversaryAction> actions;  // actions[i] drove round i+1
  GameState final_state;
  std::optional<Outcome> outcome;
};

inline constexpr std::int64_t kDefaultRoundCap = 10'000'000;

inline Transcript run_game(const GameParams& params, const Strategy& strategy,
                           const RuleSpec& rule, std::int64_t round_cap = kDefaultRoundCap) {
  Transcript t;
  t.params = params;
  GameState s = initial_state(params);
  while (!s.stopped) {
    if (s.round >= round_cap) throw game_error(s.round, "round cap exceeded");
    AdversaryAction action = strategy.next(s);
    apply_step(s, action);
    t.actions.push_back(std::move(action));
  }
  t.final_state = std::move(s);
  t.outcome = evaluate(t.final_state, rule);
  return t;
}

}  // namespace forklab
