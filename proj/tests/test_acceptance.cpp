// Acceptance gate: every release criterion checked end to end, one line each.
// No test framework on purpose — a plain binary whose exit code is the number
// of failed criteria, so it slots into ctest and shell scripts alike.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "forklab/adversaries.hpp"
#include "forklab/bounds.hpp"
#include "forklab/core.hpp"
#include "forklab/game.hpp"
#include "forklab/io.hpp"
#include "forklab/rules.hpp"

#include "oracles.hpp"

using namespace forklab;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kPhis[] = {1.1, 1.5, 2.0, 3.0};
constexpr double kEpsilons[] = {0.5, 0.1, 0.01};
constexpr std::int64_t kRhos[] = {2, 4, 8};

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

GameParams params_of(double phi, double epsilon, std::int64_t rho) {
  GameParams p;
  p.phi = phi;
  p.epsilon = epsilon;
  p.rho = rho;
  return p;
}

struct GridRun {
  GameParams params;
  ProfilePair profiles;
  Transcript fake_tail;   // adversary forges the flat-front profile
  Transcript fake_front;  // adversary forges the peaked-front profile
};

// Every transcript must show at least rho rounds between a replot and the
// next move; the stop flag may come one round earlier, when the lock clears.
bool lock_spacing_ok(const Transcript& t) {
  const std::int64_t rho = t.params.rho;
  std::int64_t last_replot = -rho;
  for (std::size_t i = 0; i < t.actions.size(); ++i) {
    const std::int64_t round = static_cast<std::int64_t>(i) + 1;
    const AdversaryAction& a = t.actions[i];
    if (a.move != MoveKind::none && round < last_replot + rho) return false;
    if (a.stop && round < last_replot + rho - 1) return false;
    if (a.move == MoveKind::replot) last_replot = round;
  }
  return true;
}

bool profile_close(const SpaceProfile& got, const SpaceProfile& want, double rel) {
  if (got.size() != want.size()) return false;
  for (std::size_t i = 0; i < got.size(); ++i)
    if (std::abs(got.values[i] - want.values[i]) > rel * want.values[i]) return false;
  return true;
}

bool states_identical(const GameState& a, const GameState& b) {
  if (a.round != b.round || a.lock != b.lock || a.stopped != b.stopped) return false;
  if (a.adv_space != b.adv_space || a.honest_space != b.honest_space) return false;
  if (a.honest_chain.length() != b.honest_chain.length()) return false;
  if (a.adv_chain.length() != b.adv_chain.length()) return false;
  for (std::size_t i = 0; i < a.honest_chain.length(); ++i)
    if (!(a.honest_chain.blocks[i] == b.honest_chain.blocks[i])) return false;
  for (std::size_t i = 0; i < a.adv_chain.length(); ++i)
    if (!(a.adv_chain.blocks[i] == b.adv_chain.blocks[i])) return false;
  return true;
}

// Serializes, parses, and replays a transcript, then compares the replayed
// final state field by field against the original.
bool round_trips(const Transcript& t, const RuleSpec& rule) {
  std::ostringstream log;
  write_transcript(log, t, rule);
  std::istringstream in(log.str());
  const Transcript replayed = replay_transcript(read_transcript(in));
  return states_identical(replayed.final_state, t.final_state);
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(FORKLAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int g_failures = 0;

void run_criterion(int id, const std::string& label,
                   const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("unexpected exception: ") + e.what();
  }
  if (!ok) ++g_failures;
  std::string line = std::string(ok ? "[PASS]" : "[FAIL]") + " criterion " +
                     std::to_string(id) + ": " + label;
  if (!ok && !detail.empty()) line += " (" + detail + ")";
  std::printf("%s\n", line.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  std::vector<GridRun> runs;  // filled by criterion 2, reused by 3 and 7
  const RuleSpec weight_rule{RuleKind::weight, 1, 0.0};

  run_criterion(1, "flagship bound constants computed exactly and under a millisecond",
                [&](std::string& detail) {
    const Clock::time_point start = Clock::now();
    const UniversalBound ub = ell_universal(2.0, 0.01, 4);
    const double elapsed = ms_since(start);
    if (ub.k != 70 || ub.l != 1641 || ub.ell != 1781 || 2 * ub.k != 140) {
      detail = "k=" + std::to_string(ub.k) + " l=" + std::to_string(ub.l) +
               " ell=" + std::to_string(ub.ell);
      return false;
    }
    if (elapsed >= 1.0) {
      detail = "took " + std::to_string(elapsed) + " ms";
      return false;
    }
    return true;
  });

  run_criterion(2, "universal attacks realize their target profiles across the whole grid",
                [&](std::string& detail) {
    const Clock::time_point start = Clock::now();
    for (double phi : kPhis)
      for (double epsilon : kEpsilons)
        for (std::int64_t rho : kRhos) {
          GridRun run;
          run.params = params_of(phi, epsilon, rho);
          run.profiles = universal_profiles(run.params);
          const std::int64_t ell = 2 * run.profiles.k + run.profiles.l;
          run.fake_tail = run_game(run.params,
                                   universal_attack(run.params, UniversalDirection::fake_S_tilde),
                                   weight_rule);
          run.fake_front = run_game(run.params,
                                    universal_attack(run.params, UniversalDirection::fake_S),
                                    weight_rule);
          const std::string where = "phi=" + g12(phi) + " eps=" + g12(epsilon) +
                                  " rho=" + std::to_string(rho);
          const auto check = [&](const Transcript& t, const SpaceProfile& target) {
            if (t.outcome->fork_length != ell) {
              detail = where + ": fork length " + std::to_string(t.outcome->fork_length) +
                       " != " + std::to_string(ell);
              return false;
            }
            const auto fork = fork_point(t.final_state.honest_chain, t.final_state.adv_chain);
            if (!fork || *fork != 1) {
              detail = where + ": fork not at block 1";
              return false;
            }
            if (!profile_close(t.final_state.adv_chain.profile(), target, 1e-9)) {
              detail = where + ": adversarial profile off target";
              return false;
            }
            return true;
          };
          if (!check(run.fake_tail, run.profiles.S_tilde)) return false;
          if (!check(run.fake_front, run.profiles.S)) return false;
          runs.push_back(std::move(run));
        }
    const double elapsed = ms_since(start);
    if (elapsed >= 10'000.0) {
      detail = "took " + std::to_string(elapsed) + " ms";
      return false;
    }
    return true;
  });

  run_criterion(3, "at every grid point each rule loses to at least one attack direction",
                [&](std::string& detail) {
    if (runs.size() != 36) {
      detail = "grid runs unavailable";
      return false;
    }
    for (const GridRun& run : runs) {
      std::vector<RuleSpec> rules = {weight_rule,
                                     RuleSpec{RuleKind::genesis, 1, 0.0},
                                     RuleSpec{RuleKind::genesis, 2, 0.0},
                                     RuleSpec{RuleKind::genesis, 5, 0.0},
                                     RuleSpec{RuleKind::tent, 1, 1.0 + run.params.epsilon}};
      for (const RuleSpec& rule : rules) {
        const int tail = evaluate(run.fake_tail.final_state, rule).winner;
        const int front = evaluate(run.fake_front.final_state, rule).winner;
        if (tail != 1 && front != 1) {
          detail = "phi=" + g12(run.params.phi) + " eps=" + g12(run.params.epsilon) +
                   " rho=" + std::to_string(run.params.rho) + " rule=" + rule_to_string(rule) +
                   ": both directions lose";
          return false;
        }
      }
    }
    return true;
  });

  run_criterion(4, "weight attack beats the total-weight rule inside the predicted bracket",
                [&](std::string& detail) {
    for (double phi : kPhis)
      for (double epsilon : kEpsilons)
        for (std::int64_t rho : kRhos) {
          const GameParams p = params_of(phi, epsilon, rho);
          const Transcript t = run_game(p, weight_attack(p), weight_rule);
          const std::int64_t lo = ell_weight(phi, epsilon);
          const std::int64_t hi = lo + guarded_ceil(phi * (1.0 + epsilon)) + 2;
          if (t.outcome->winner != 1 || t.outcome->fork_length < lo ||
              t.outcome->fork_length > hi) {
            detail = "phi=" + g12(phi) + " eps=" + g12(epsilon) + ": winner=" +
                     std::to_string(t.outcome->winner) + " fork=" +
                     std::to_string(t.outcome->fork_length) + " bracket=[" +
                     std::to_string(lo) + "," + std::to_string(hi) + "]";
            return false;
          }
        }
    // The flagship bracket is pinned to concrete endpoints.
    if (ell_weight(2.0, 0.01) != 200 ||
        ell_weight(2.0, 0.01) + guarded_ceil(2.0 * 1.01) + 2 != 205) {
      detail = "flagship bracket is not [200,205]";
      return false;
    }
    return true;
  });

  run_criterion(5, "genesis attack wins in exactly ceil(phi) * k * rho rounds",
                [&](std::string& detail) {
    for (double phi : kPhis)
      for (double epsilon : kEpsilons)
        for (std::int64_t rho : kRhos)
          for (int k : {1, 2, 5}) {
            const GameParams p = params_of(phi, epsilon, rho);
            const RuleSpec rule{RuleKind::genesis, k, 0.0};
            const Transcript t = run_game(p, genesis_attack(p, k), rule);
            const std::int64_t want = ell_genesis(phi, k, rho);
            if (t.outcome->winner != 1 || t.final_state.round != want ||
                t.outcome->fork_length != want) {
              detail = "phi=" + g12(phi) + " rho=" + std::to_string(rho) + " k=" +
                       std::to_string(k) + ": round=" + std::to_string(t.final_state.round) +
                       " want=" + std::to_string(want);
              return false;
            }
          }
    return true;
  });

  run_criterion(6, "short-fork search refutes a tent defeat that the full-length attack achieves",
                [&](std::string& detail) {
    const Clock::time_point start = Clock::now();
    const GameParams p = params_of(2.0, 0.5, 2);
    const BoundReport report = bound_report(p);
    const RuleSpec tent_rule{RuleKind::tent, 1, 0.0};  // resolves to delta = 1.5
    const std::optional<Transcript> none =
        grid_search(p, tent_rule, report.tent_lower_clamped - 1);
    if (none) {
      detail = "search found a fork of length " + std::to_string(none->outcome->fork_length) +
               " below the lower bound";
      return false;
    }
    const Transcript win =
        run_game(p, universal_attack(p, UniversalDirection::fake_S), resolve_rule(tent_rule, p));
    if (win.outcome->winner != 1 || win.outcome->fork_length != report.universal.ell) {
      detail = "full-length attack: winner=" + std::to_string(win.outcome->winner) + " fork=" +
               std::to_string(win.outcome->fork_length);
      return false;
    }
    const double elapsed = ms_since(start);
    if (elapsed >= 300'000.0) {
      detail = "took " + std::to_string(elapsed) + " ms";
      return false;
    }
    return true;
  });

  run_criterion(7, "replot schedules fit the flat segment and every transcript honors the lock",
                [&](std::string& detail) {
    for (double phi : kPhis)
      for (double epsilon : kEpsilons)
        for (std::int64_t rho : kRhos) {
          const ProfilePair pp = universal_profiles(params_of(phi, epsilon, rho));
          const std::vector<double> tent(pp.S.values.begin() + 1,
                                         pp.S.values.begin() + 2 * pp.k + 1);
          const ReplotPlan plan = replot_schedule(tent, phi, rho);
          if (plan.rounds > pp.l) {
            detail = "phi=" + g12(phi) + " eps=" + g12(epsilon) + " rho=" +
                     std::to_string(rho) + ": " + std::to_string(plan.rounds) + " rounds > l=" +
                     std::to_string(pp.l);
            return false;
          }
        }
    if (runs.size() != 36) {
      detail = "grid runs unavailable";
      return false;
    }
    for (const GridRun& run : runs)
      if (!lock_spacing_ok(run.fake_tail) || !lock_spacing_ok(run.fake_front)) {
        detail = "a transcript moves again fewer than rho rounds after a replot";
        return false;
      }
    return true;
  });

  run_criterion(8, "fast tent fit and chain weight agree with their brute-force oracles",
                [&](std::string& detail) {
    std::mt19937 rng(20260819u);
    std::uniform_real_distribution<double> decay_dist(1.01, 3.0);
    for (int trial = 0; trial < 10'000; ++trial) {
      const SpaceProfile p = oracles::random_profile(rng, 12, 0.1, 10.0);
      const double decay = decay_dist(rng);
      const Tent fast = tent_fit(p, decay);
      const Tent slow = oracles::tent_fit_reference(p, decay);
      if (std::abs(fast.size - slow.size) > 1e-9 * std::max(1.0, slow.size)) {
        detail = "tent fit diverges from the oracle at trial " + std::to_string(trial);
        return false;
      }
    }
    std::uniform_real_distribution<double> c_dist(0.5, 2.0);
    std::uniform_real_distribution<double> r_dist(1.05, 1.25);
    std::uniform_int_distribution<std::int64_t> n_dist(1, 60);
    std::bernoulli_distribution shrink(0.5);
    for (int trial = 0; trial < 1'000; ++trial) {
      const double c = c_dist(rng);
      const double r = shrink(rng) ? 1.0 / r_dist(rng) : r_dist(rng);
      const std::int64_t n = n_dist(rng);
      Chain chain = genesis_chain();
      for (std::int64_t i = 0; i <= n; ++i)
        chain.blocks.push_back(Block{c * std::pow(r, static_cast<double>(i)), i + 1});
      const double got = chain_weight(chain, 1, static_cast<std::size_t>(n) + 1);
      const double want = oracles::geometric_sum(c, r, n);
      if (std::abs(got - want) > 1e-12 * std::abs(want)) {
        detail = "chain weight off the closed form at trial " + std::to_string(trial);
        return false;
      }
    }
    return true;
  });

  run_criterion(9, "transcript replay is bit-identical and sweep output is byte-identical",
                [&](std::string& detail) {
    if (runs.size() != 36) {
      detail = "grid runs unavailable";
      return false;
    }
    for (const GridRun& run : runs) {
      if (run.params.phi == 2.0 && run.params.epsilon == 0.01 && run.params.rho == 4) {
        if (!round_trips(run.fake_tail, weight_rule) ||
            !round_trips(run.fake_front, weight_rule)) {
          detail = "flagship universal transcript does not replay bit-identically";
          return false;
        }
      }
    }
    const GameParams wp = params_of(2.0, 0.01, 4);
    if (!round_trips(run_game(wp, weight_attack(wp), weight_rule), weight_rule)) {
      detail = "weight-attack transcript does not replay bit-identically";
      return false;
    }
    const GameParams gp = params_of(3.0, 0.1, 8);
    if (!round_trips(run_game(gp, genesis_attack(gp, 5), RuleSpec{RuleKind::genesis, 5, 0.0}),
                     RuleSpec{RuleKind::genesis, 5, 0.0})) {
      detail = "genesis-attack transcript does not replay bit-identically";
      return false;
    }

    const std::string dir = "/tmp/forklab_acceptance_" + std::to_string(getpid());
    if (std::system(("mkdir -p " + dir + "/a " + dir + "/b").c_str()) != 0) {
      detail = "cannot create temp dirs";
      return false;
    }
    write_file(dir + "/config.json",
               R"({"phi": [1.5, 2.0], "epsilon": [0.1], "rho": [2, 4]})");
    if (run_binary("sweep --config " + dir + "/config.json --out " + dir + "/a") != 0 ||
        run_binary("sweep --config " + dir + "/config.json --out " + dir + "/b") != 0) {
      detail = "sweep run failed";
      return false;
    }
    const std::string a = read_file(dir + "/a/sweep.csv");
    const std::string b = read_file(dir + "/b/sweep.csv");
    if (a != b) {
      detail = "sweep reruns differ";
      return false;
    }
    if (std::count(a.begin(), a.end(), '\n') != 25) {  // header + 4*3*2 rows
      detail = "sweep row count off";
      return false;
    }
    return true;
  });

  if (g_failures == 0) std::printf("all 9 criteria passed\n");
  return g_failures;
}
