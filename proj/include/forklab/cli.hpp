#pragma once
// Experiment driver: named strategies, JSON config with flag overrides, and
// the five command bodies (run, sweep, bounds, profiles, replay). The thin
// argv shell lives in tools/; everything here is testable in-process.

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "forklab/adversaries.hpp"
#include "forklab/bounds.hpp"
#include "forklab/core.hpp"
#include "forklab/game.hpp"
#include "forklab/io.hpp"
#include "forklab/rules.hpp"

namespace forklab {

struct ExperimentConfig {
  std::vector<double> phis{1.5, 2.0, 3.0};
  std::vector<double> epsilons{0.5, 0.1, 0.01};
  std::vector<std::int64_t> rhos{2, 4, 8};
  std::vector<std::string> rules{"weight", "genesis:k=2", "tent"};
  std::vector<std::string> strategies{"universal:direction=stilde", "universal:direction=s"};
  std::string out_dir;  // empty = unset
};

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("cannot open config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw usage_error("bad config json: " + std::string(e.what()));
  }
  ExperimentConfig cfg;
  try {
    if (j.contains("phi")) cfg.phis = j.at("phi").get<std::vector<double>>();
    if (j.contains("epsilon")) cfg.epsilons = j.at("epsilon").get<std::vector<double>>();
    if (j.contains("rho")) cfg.rhos = j.at("rho").get<std::vector<std::int64_t>>();
    if (j.contains("rules")) cfg.rules = j.at("rules").get<std::vector<std::string>>();
    if (j.contains("strategies"))
      cfg.strategies = j.at("strategies").get<std::vector<std::string>>();
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw usage_error("bad config field: " + std::string(e.what()));
  }
  return cfg;
}

// flag > FORKLAB_OUT > config > current directory.
inline std::string resolve_out_dir(const std::string& flag_value, const std::string& config_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("FORKLAB_OUT"); env && *env) return env;
  if (!config_value.empty()) return config_value;
  return ".";
}

// ---------------------------------------------------------------------------
// Strategy names. grid-search is not a Strategy closure — it owns the whole
// game loop — so dispatch returns the finished transcript either way.

namespace detail {

inline std::int64_t parse_int_suffix(const std::string& text, const std::string& prefix) {
  std::int64_t value = 0;
  const char* first = text.c_str() + prefix.size();
  const char* last = text.c_str() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) throw usage_error("bad strategy string: " + text);
  return value;
}

}  // namespace detail

// Runs the named strategy to completion. "none found" from grid-search maps
// to nullopt; every other path yields a finished transcript.
inline std::optional<Transcript> run_named_strategy(const GameParams& params,
                                                    const std::string& name,
                                                    const RuleSpec& rule) {
  if (name == "weight-attack") return run_game(params, weight_attack(params), rule);
  if (name.rfind("genesis-attack:k=", 0) == 0) {
    const std::int64_t k = detail::parse_int_suffix(name, "genesis-attack:k=");
    if (k < 1) throw usage_error("bad strategy string: " + name);
    return run_game(params, genesis_attack(params, static_cast<int>(k)), rule);
  }
  if (name == "universal:direction=s")
    return run_game(params, universal_attack(params, UniversalDirection::fake_S), rule);
  if (name == "universal:direction=stilde")
    return run_game(params, universal_attack(params, UniversalDirection::fake_S_tilde), rule);
  if (name.rfind("grid-search:max_fork=", 0) == 0) {
    const std::int64_t max_fork = detail::parse_int_suffix(name, "grid-search:max_fork=");
    if (max_fork < 0) throw usage_error("bad strategy string: " + name);
    return grid_search(params, rule, max_fork);
  }
  throw usage_error("unknown strategy: " + name);
}

// The bound a named strategy is meant to meet, for the sweep's match column.
inline std::int64_t strategy_bound(const GameParams& params, const std::string& name) {
  if (name == "weight-attack") return ell_weight(params.phi, params.epsilon);
  if (name.rfind("genesis-attack:k=", 0) == 0)
    return ell_genesis(params.phi,
                       detail::parse_int_suffix(name, "genesis-attack:k="), params.rho);
  if (name.rfind("universal:", 0) == 0)
    return ell_universal(params.phi, params.epsilon, params.rho).ell;
  if (name.rfind("grid-search:max_fork=", 0) == 0)
    return detail::parse_int_suffix(name, "grid-search:max_fork=");
  throw usage_error("unknown strategy: " + name);
}

// ---------------------------------------------------------------------------
// Commands. Each writes data files under out_dir and a summary line to `out`.

inline void cmd_run(const GameParams& params, const std::string& rule_text,
                    const std::string& strategy_text, const std::string& out_dir,
                    std::ostream& out) {
  validate_params(params);
  const RuleSpec rule = resolve_rule(parse_rule(rule_text), params);
  const std::optional<Transcript> t = run_named_strategy(params, strategy_text, rule);
  if (!t) {
    out << "none found\n";
    return;
  }
  std::ostringstream log;
  write_transcript(log, *t, rule);
  write_file(out_dir + "/transcript.log", log.str());
  out << "winner=" << t->outcome->winner << " fork_length=" << t->outcome->fork_length << '\n';
}

inline void cmd_profiles(const GameParams& params, const std::string& out_dir,
                         std::ostream& out) {
  validate_params(params);
  const ProfilePair pp = universal_profiles(params);
  std::ostringstream s_csv, st_csv, svg;
  write_profile_csv(s_csv, pp.S);
  write_profile_csv(st_csv, pp.S_tilde);
  write_profiles_svg(svg, pp, params.phi);
  write_file(out_dir + "/profile_s.csv", s_csv.str());
  write_file(out_dir + "/profile_s_tilde.csv", st_csv.str());
  write_file(out_dir + "/profiles.svg", svg.str());
  out << "wrote profile_s.csv profile_s_tilde.csv profiles.svg (length " << pp.S.size()
      << ")\n";
}

inline std::vector<SweepRow> sweep_rows(const ExperimentConfig& cfg) {
  if (cfg.phis.empty() || cfg.epsilons.empty() || cfg.rhos.empty() || cfg.rules.empty() ||
      cfg.strategies.empty())
    throw usage_error("empty sweep grid");
  std::vector<SweepRow> rows;
  for (double phi : cfg.phis)
    for (double epsilon : cfg.epsilons)
      for (std::int64_t rho : cfg.rhos)
        for (const std::string& rule_text : cfg.rules)
          for (const std::string& strategy : cfg.strategies) {
            GameParams params;
            params.phi = phi;
            params.epsilon = epsilon;
            params.rho = rho;
            SweepRow row;
            row.params = params;
            row.strategy = strategy;
            const RuleSpec rule = resolve_rule(parse_rule(rule_text), params);
            row.rule = rule_to_string(rule);
            row.bound_ell = strategy_bound(params, strategy);
            try {
              const std::optional<Transcript> t = run_named_strategy(params, strategy, rule);
              if (t) {
                row.winner = std::to_string(t->outcome->winner);
                row.fork_length = t->outcome->fork_length;
                row.match = row.fork_length == row.bound_ell;
              } else {
                row.winner = "0";
                row.fork_length = -1;
              }
            } catch (const game_error& e) {
              row.winner = "error:" + std::to_string(e.round);
              row.fork_length = -1;
            }
            rows.push_back(std::move(row));
          }
  return rows;
}

inline void cmd_sweep(const ExperimentConfig& cfg, const std::string& out_dir,
                      std::ostream& out) {
  const std::vector<SweepRow> rows = sweep_rows(cfg);
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  write_file(out_dir + "/sweep.csv", csv.str());
  out << "wrote " << out_dir << "/sweep.csv (" << rows.size() << " rows)\n";
}

// genesis_k = 0 keeps the per-row default (the window matching k_steps).
inline void cmd_bounds(const ExperimentConfig& cfg, std::int64_t genesis_k, std::ostream& out) {
  if (cfg.phis.empty() || cfg.epsilons.empty() || cfg.rhos.empty())
    throw usage_error("empty bounds grid");
  out << "phi,epsilon,rho,k,ell_weight,ell_genesis,ell_universal,ell_tent_lower\n";
  for (double phi : cfg.phis)
    for (double epsilon : cfg.epsilons)
      for (std::int64_t rho : cfg.rhos) {
        GameParams params;
        params.phi = phi;
        params.epsilon = epsilon;
        params.rho = rho;
        const BoundReport r = bound_report(params, genesis_k);
        out << g12(phi) << ',' << g12(epsilon) << ',' << rho << ',' << r.k_steps << ','
            << r.ell_weight << ',' << r.ell_genesis << ',' << r.universal.ell << ','
            << g12(r.tent_lower_raw) << '\n';
      }
}

inline void cmd_replay(const std::string& path, std::ostream& out) {
  std::istringstream in(read_file(path));
  const TranscriptFile tf = read_transcript(in);
  const Transcript t = replay_transcript(tf);
  out << "replay OK rounds=" << t.final_state.round;
  if (t.outcome)
    out << " winner=" << t.outcome->winner << " fork_length=" << t.outcome->fork_length;
  out << '\n';
}

}  // namespace forklab
