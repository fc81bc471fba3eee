#pragma once
// Plain-text serialization: profile CSVs, replayable transcript logs, sweep
// rows, and a self-contained SVG plot of a profile pair. Everything is
// deterministic — identical inputs produce byte-identical output.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "forklab/adversaries.hpp"
#include "forklab/core.hpp"
#include "forklab/game.hpp"
#include "forklab/rules.hpp"

namespace forklab {

// %.17g round-trips a double exactly through strtod; %.12g is for display.
inline std::string format_double(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}
inline std::string g17(double v) { return format_double(v, "%.17g"); }
inline std::string g12(double v) { return format_double(v, "%.12g"); }

inline void write_profile_csv(std::ostream& os, const SpaceProfile& profile) {
  os << "index,space\n";
  for (std::size_t i = 0; i < profile.size(); ++i)
    os << i << ',' << g12(profile.values[i]) << '\n';
}

inline SpaceProfile read_profile_csv(std::istream& is) {
  SpaceProfile p;
  std::string line;
  if (!std::getline(is, line) || line.rfind("index,space", 0) != 0)
    throw std::runtime_error("profile csv: missing header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("profile csv: bad row: " + line);
    p.values.push_back(std::strtod(line.c_str() + comma + 1, nullptr));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Transcript log: header comments carry the game parameters and the rule;
// one CSV row per round mirrors the engine state after that round. Bootstrap
// block sizes are ';'-joined inside the arg field, so rows always split into
// exactly seven comma fields.

inline std::string move_label(const AdversaryAction& a) {
  std::string label;
  switch (a.move) {
    case MoveKind::none: label = a.stop ? "stop" : "none"; return label;
    case MoveKind::bootstrap: label = "bootstrap"; break;
    case MoveKind::replot: label = "replot"; break;
  }
  if (a.stop) label += "+stop";
  return label;
}

inline std::string move_arg(const AdversaryAction& a) {
  if (a.move == MoveKind::bootstrap) {
    std::string out;
    for (std::size_t i = 0; i < a.bootstrap_sizes.size(); ++i) {
      if (i) out += ';';
      out += g17(a.bootstrap_sizes[i]);
    }
    return out;
  }
  if (a.move == MoveKind::replot) return g17(a.replot_add);
  return "";
}

inline void write_transcript(std::ostream& os, const Transcript& t, const RuleSpec& rule) {
  os << "# forklab transcript v1\n";
  os << "# phi=" << g17(t.params.phi) << " epsilon=" << g17(t.params.epsilon)
     << " rho=" << t.params.rho << " a0=" << g17(t.params.a0) << '\n';
  os << "# rule=" << rule_to_string(rule) << '\n';
  os << "round,gamma,move,arg,lock,a_i,h_i\n";
  GameState s = initial_state(t.params);
  for (const AdversaryAction& a : t.actions) {
    apply_step(s, a);
    os << s.round << ',' << g17(a.gamma) << ',' << move_label(a) << ',' << move_arg(a) << ','
       << s.lock << ',' << g17(s.adv_space) << ',' << g17(s.honest_space) << '\n';
  }
  if (t.outcome)
    os << "# winner=" << t.outcome->winner << " fork_length=" << t.outcome->fork_length << '\n';
}

struct TranscriptRow {
  std::int64_t round = 0;
  AdversaryAction action;
  std::int64_t lock = 0;
  double adv_space = 0.0;
  double honest_space = 0.0;
};

struct TranscriptFile {
  GameParams params;
  RuleSpec rule;
  std::vector<TranscriptRow> rows;
  std::optional<Outcome> recorded_outcome;
};

namespace detail {
inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}
}  // namespace detail

inline TranscriptFile read_transcript(std::istream& is) {
  TranscriptFile tf;
  std::string line;
  if (!std::getline(is, line) || line != "# forklab transcript v1")
    throw std::runtime_error("transcript: missing version line");
  if (!std::getline(is, line)) throw std::runtime_error("transcript: missing params line");
  long long rho = 0;
  if (std::sscanf(line.c_str(), "# phi=%lf epsilon=%lf rho=%lld a0=%lf", &tf.params.phi,
                  &tf.params.epsilon, &rho, &tf.params.a0) != 4)
    throw std::runtime_error("transcript: bad params line: " + line);
  tf.params.rho = rho;
  if (!std::getline(is, line) || line.rfind("# rule=", 0) != 0)
    throw std::runtime_error("transcript: missing rule line");
  tf.rule = parse_rule(line.substr(7));
  if (!std::getline(is, line) || line != "round,gamma,move,arg,lock,a_i,h_i")
    throw std::runtime_error("transcript: missing column header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("# winner=", 0) == 0) {
      Outcome o;
      long long fl = 0;
      if (std::sscanf(line.c_str(), "# winner=%d fork_length=%lld", &o.winner, &fl) != 2)
        throw std::runtime_error("transcript: bad outcome line: " + line);
      o.fork_length = fl;
      tf.recorded_outcome = o;
      continue;
    }
    const std::vector<std::string> f = detail::split(line, ',');
    if (f.size() != 7) throw std::runtime_error("transcript: bad row: " + line);
    TranscriptRow row;
    row.round = std::strtoll(f[0].c_str(), nullptr, 10);
    row.action.gamma = std::strtod(f[1].c_str(), nullptr);
    const std::string& mv = f[2];
    if (mv == "none" || mv == "stop") {
      row.action.move = MoveKind::none;
    } else if (mv == "bootstrap" || mv == "bootstrap+stop") {
      row.action.move = MoveKind::bootstrap;
      for (const std::string& part : detail::split(f[3], ';'))
        row.action.bootstrap_sizes.push_back(std::strtod(part.c_str(), nullptr));
    } else if (mv == "replot" || mv == "replot+stop") {
      row.action.move = MoveKind::replot;
      row.action.replot_add = std::strtod(f[3].c_str(), nullptr);
    } else {
      throw std::runtime_error("transcript: unknown move: " + mv);
    }
    row.action.stop =
        mv == "stop" || (mv.size() > 5 && mv.compare(mv.size() - 5, 5, "+stop") == 0);
    row.lock = std::strtoll(f[4].c_str(), nullptr, 10);
    row.adv_space = std::strtod(f[5].c_str(), nullptr);
    row.honest_space = std::strtod(f[6].c_str(), nullptr);
    tf.rows.push_back(std::move(row));
  }
  return tf;
}

// Re-runs the recorded actions and demands bit-identical state at every
// round; returns the reconstructed transcript with a freshly computed
// outcome. Throws on the first divergence.
inline Transcript replay_transcript(const TranscriptFile& tf) {
  Transcript t;
  t.params = tf.params;
  GameState s = initial_state(tf.params);
  for (const TranscriptRow& row : tf.rows) {
    apply_step(s, row.action);
    if (s.round != row.round || s.lock != row.lock || s.adv_space != row.adv_space ||
        s.honest_space != row.honest_space)
      throw std::runtime_error("replay mismatch at round " + std::to_string(row.round));
    t.actions.push_back(row.action);
  }
  t.final_state = std::move(s);
  if (t.final_state.stopped) {
    t.outcome = evaluate(t.final_state, tf.rule);
    if (tf.recorded_outcome &&
        (tf.recorded_outcome->winner != t.outcome->winner ||
         tf.recorded_outcome->fork_length != t.outcome->fork_length))
      throw std::runtime_error("replay outcome differs from the recorded outcome");
  }
  return t;
}

// ---------------------------------------------------------------------------
// Sweep rows.

struct SweepRow {
  GameParams params;
  std::string rule;
  std::string strategy;
  std::string winner;  // "0", "1", or "error:<round>"
  std::int64_t fork_length = -1;
  std::int64_t bound_ell = 0;
  bool match = false;
};

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "phi,epsilon,rho,rule,strategy,winner,fork_length,bound_ell,match\n";
  for (const SweepRow& r : rows)
    os << g12(r.params.phi) << ',' << g12(r.params.epsilon) << ',' << r.params.rho << ','
       << r.rule << ',' << r.strategy << ',' << r.winner << ',' << r.fork_length << ','
       << r.bound_ell << ',' << (r.match ? 1 : 0) << '\n';
}

// ---------------------------------------------------------------------------
// Profile pair figure: four polylines on shared linear axes — the honest
// profiles S and S_tilde solid, the adversarial counterparts (values / phi)
// dashed. Self-contained SVG, no external assets.

namespace detail {

inline std::string polyline_points(const std::vector<double>& values, double scale, double x0,
                                   double x_step, double y0, double y_per_unit) {
  std::string pts;
  pts.reserve(values.size() * 14);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) pts += ' ';
    pts += format_double(x0 + x_step * static_cast<double>(i), "%.2f");
    pts += ',';
    pts += format_double(y0 - y_per_unit * values[i] * scale, "%.2f");
  }
  return pts;
}

}  // namespace detail

inline void write_profiles_svg(std::ostream& os, const ProfilePair& pp, double phi) {
  const double width = 960, height = 420;
  const double ml = 64, mr = 18, mt = 18, mb = 46;
  const double plot_w = width - ml - mr, plot_h = height - mt - mb;
  const std::size_t n = pp.S.size();
  double ymax = 0.0;
  for (double v : pp.S.values) ymax = std::max(ymax, v);
  for (double v : pp.S_tilde.values) ymax = std::max(ymax, v);
  ymax *= 1.05;
  const double x_step = n > 1 ? plot_w / static_cast<double>(n - 1) : 0.0;
  const double y_per_unit = plot_h / ymax;
  const double y0 = mt + plot_h;

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
     << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  os << "  <style>\n"
        "    .axis { stroke: #444; stroke-width: 1; }\n"
        "    .tick { stroke: #444; stroke-width: 1; }\n"
        "    .grid { stroke: #ddd; stroke-width: 0.5; }\n"
        "    .lbl { font: 12px sans-serif; fill: #222; }\n"
        "    .honest { fill: none; stroke-width: 1.6; }\n"
        "    .adv { fill: none; stroke-width: 1.4; stroke-dasharray: 6 4; }\n"
        "  </style>\n";
  os << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

  // Axes.
  os << "  <line class=\"axis\" x1=\"" << ml << "\" y1=\"" << y0 << "\" x2=\"" << ml + plot_w
     << "\" y2=\"" << y0 << "\"/>\n";
  os << "  <line class=\"axis\" x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
     << "\" y2=\"" << y0 << "\"/>\n";

  // X ticks: five evenly spaced block indices, rounded to integers.
  for (int t = 0; t <= 4; ++t) {
    const std::size_t idx = n > 1 ? (n - 1) * static_cast<std::size_t>(t) / 4 : 0;
    const double x = ml + x_step * static_cast<double>(idx);
    os << "  <line class=\"tick\" x1=\"" << format_double(x, "%.2f") << "\" y1=\"" << y0
       << "\" x2=\"" << format_double(x, "%.2f") << "\" y2=\"" << y0 + 5 << "\"/>\n";
    os << "  <text class=\"lbl\" x=\"" << format_double(x, "%.2f") << "\" y=\"" << y0 + 20
       << "\" text-anchor=\"middle\">" << idx << "</text>\n";
  }
  os << "  <text class=\"lbl\" x=\"" << ml + plot_w / 2 << "\" y=\"" << height - 8
     << "\" text-anchor=\"middle\">block index</text>\n";

  // Y ticks: five evenly spaced space values.
  for (int t = 0; t <= 4; ++t) {
    const double v = ymax * static_cast<double>(t) / 4.0;
    const double y = y0 - y_per_unit * v;
    os << "  <line class=\"tick\" x1=\"" << ml - 5 << "\" y1=\"" << format_double(y, "%.2f")
       << "\" x2=\"" << ml << "\" y2=\"" << format_double(y, "%.2f") << "\"/>\n";
    os << "  <line class=\"grid\" x1=\"" << ml << "\" y1=\"" << format_double(y, "%.2f")
       << "\" x2=\"" << ml + plot_w << "\" y2=\"" << format_double(y, "%.2f") << "\"/>\n";
    os << "  <text class=\"lbl\" x=\"" << ml - 9 << "\" y=\"" << format_double(y + 4, "%.2f")
       << "\" text-anchor=\"end\">" << g12(v) << "</text>\n";
  }
  os << "  <text class=\"lbl\" x=\"16\" y=\"" << mt + plot_h / 2
     << "\" transform=\"rotate(-90 16 " << mt + plot_h / 2 << ")\" text-anchor=\"middle\">"
     << "space</text>\n";

  const char* colors[2] = {"#1f77b4", "#d62728"};
  const SpaceProfile* profiles[2] = {&pp.S, &pp.S_tilde};
  const char* names[2] = {"S", "S-tilde"};
  for (int i = 0; i < 2; ++i)
    os << "  <polyline class=\"honest\" stroke=\"" << colors[i] << "\" points=\""
       << detail::polyline_points(profiles[i]->values, 1.0, ml, x_step, y0, y_per_unit)
       << "\"/>\n";
  for (int i = 0; i < 2; ++i)
    os << "  <polyline class=\"adv\" stroke=\"" << colors[i] << "\" points=\""
       << detail::polyline_points(profiles[i]->values, 1.0 / phi, ml, x_step, y0, y_per_unit)
       << "\"/>\n";

  // Legend.
  const double lx = ml + 14, ly = mt + 8;
  for (int i = 0; i < 2; ++i) {
    os << "  <line x1=\"" << lx << "\" y1=\"" << ly + 16 * i + 4 << "\" x2=\"" << lx + 26
       << "\" y2=\"" << ly + 16 * i + 4 << "\" stroke=\"" << colors[i]
       << "\" stroke-width=\"1.6\"/>\n";
    os << "  <text class=\"lbl\" x=\"" << lx + 32 << "\" y=\"" << ly + 16 * i + 8 << "\">"
       << names[i] << " (honest, solid) and " << names[i]
       << "/phi (adversarial, dashed)</text>\n";
  }
  os << "</svg>\n";
}

// ---------------------------------------------------------------------------
// Small file helpers.

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace forklab
