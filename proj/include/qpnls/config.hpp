#pragma once

// Config-file front end: `key = value` lines with `#` comments. Recognized
// keys: mode, preset, matrix.row.<i>, potential.mode.<j>, theta, T, tau,
// tau_list, N, N_list, ref_tau, ref_N, out_dir, gaussian_centered, jobs.
// Unknown keys are rejected. A problem is either a named preset or an inline
// spec (matrix rows plus optional potential modes); exactly one of the two.
// Irrational matrix entries must be written as decimal literals with at
// least 15 significant digits.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qpnls/bench.hpp"
#include "qpnls/errors.hpp"
#include "qpnls/io.hpp"
#include "qpnls/operators.hpp"

namespace qpnls {

enum class RunMode { solve, converge_time, converge_space, soliton };

struct RunConfig {
  RunMode mode = RunMode::solve;
  std::optional<std::string> preset;              // "1d" or "2d"
  std::vector<std::vector<double>> matrix_rows;   // inline projection matrix
  std::vector<PotentialMode> potential_modes;     // inline potential
  std::optional<double> theta;
  std::optional<double> T;
  std::optional<double> tau;
  std::vector<double> tau_list;
  std::optional<int> N;
  std::vector<int> N_list;
  std::optional<double> ref_tau;
  std::optional<int> ref_N;
  std::string out_dir = ".";
  bool gaussian_centered = false;
  std::optional<int> jobs;

  bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline double parse_double(std::string_view v, int line) {
  const std::string s{trim(v)};
  if (s.empty()) throw ParseError(line, "empty numeric value");
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw ParseError(line, "bad numeric literal '" + s + "'");
  return x;
}

inline int parse_int(std::string_view v, int line) {
  const std::string s{trim(v)};
  int x = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ParseError(line, "bad integer literal '" + s + "'");
  return x;
}

template <typename T, typename Parse>
inline std::vector<T> parse_list(std::string_view v, int line, Parse parse) {
  std::vector<T> out;
  std::size_t start = 0;
  const std::string s{v};
  while (start <= s.size()) {
    const std::size_t comma = s.find(',', start);
    const std::string_view item{s.data() + start,
                                (comma == std::string::npos ? s.size() : comma) - start};
    out.push_back(parse(item, line));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// value form: k1,...,kn : re,im
inline PotentialMode parse_potential_mode(std::string_view v, int line) {
  const std::string s{v};
  const std::size_t colon = s.find(':');
  if (colon == std::string::npos)
    throw ParseError(line, "potential mode needs the form 'k1,...,kn : re,im'");
  PotentialMode m;
  m.k = parse_list<int>(trim(std::string_view{s}.substr(0, colon)), line, parse_int);
  auto amp = parse_list<double>(trim(std::string_view{s}.substr(colon + 1)), line, parse_double);
  if (amp.size() != 2) throw ParseError(line, "potential amplitude needs exactly re,im");
  m.amplitude = cdouble{amp[0], amp[1]};
  return m;
}

inline bool parse_bool(std::string_view v, int line) {
  const std::string s{trim(v)};
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ParseError(line, "expected true/false, got '" + s + "'");
}

/// Indexed key family `prefix.<i>`; returns the 1-based index.
inline std::optional<int> indexed_key(std::string_view key, std::string_view prefix, int line) {
  if (key.substr(0, prefix.size()) != prefix) return std::nullopt;
  const std::string idx{key.substr(prefix.size())};
  if (idx.empty()) throw ParseError(line, "missing index on '" + std::string(key) + "'");
  int i = 0;
  auto [p, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), i);
  if (ec != std::errc{} || p != idx.data() + idx.size() || i < 1)
    throw ParseError(line, "bad index on '" + std::string(key) + "'");
  return i;
}

inline const ExperimentPreset& preset_by_name(const std::string& name) {
  static const ExperimentPreset p1 = preset_1d();
  static const ExperimentPreset p2 = preset_2d();
  if (name == "1d") return p1;
  if (name == "2d") return p2;
  throw ValidationError("unknown preset '" + name + "' (expected 1d or 2d)");
}

inline void validate(const RunConfig& cfg, bool mode_seen) {
  if (!mode_seen) throw ValidationError("mode required");
  const bool inline_problem = !cfg.matrix_rows.empty();
  if (cfg.preset.has_value() == inline_problem)
    throw ValidationError("exactly one of preset or matrix.row.* must be given");
  if (!inline_problem && !cfg.potential_modes.empty())
    throw ValidationError("potential.mode.* is only valid with an inline matrix");
  if (cfg.preset) preset_by_name(*cfg.preset);

  std::size_t ncols = 0;
  if (inline_problem) {
    ncols = cfg.matrix_rows.front().size();
    for (const auto& row : cfg.matrix_rows)
      if (row.size() != ncols || row.empty())
        throw ValidationError("matrix rows must be nonempty and of equal length");
    if (cfg.matrix_rows.size() > ncols)
      throw ValidationError("projection matrix needs n >= d");
    for (const auto& m : cfg.potential_modes)
      if (m.k.size() != ncols)
        throw ValidationError("potential mode length must equal the matrix column count");
    if (!cfg.theta) throw ValidationError("theta required for inline problems");
    if (!cfg.T) throw ValidationError("T required for inline problems");
  }

  const double T = cfg.T ? *cfg.T : preset_by_name(*cfg.preset).T;
  if (T < 0.0) throw ValidationError("T must be >= 0");
  if (cfg.tau && !(*cfg.tau > 0.0)) throw ValidationError("tau must be positive");
  if (cfg.ref_tau && !(*cfg.ref_tau > 0.0)) throw ValidationError("ref_tau must be positive");
  if (cfg.N && *cfg.N < 1) throw ValidationError("N must be >= 1");
  if (cfg.ref_N && *cfg.ref_N < 1) throw ValidationError("ref_N must be >= 1");
  if (cfg.jobs && *cfg.jobs < 1) throw ValidationError("jobs must be >= 1");

  auto require_integral = [&](double tau) {
    try {
      steps_for(T, tau);
    } catch (const NonIntegralStepsError& e) {
      throw ValidationError(e.what());
    }
  };

  switch (cfg.mode) {
    case RunMode::solve:
    case RunMode::soliton:
      if (!cfg.tau) throw ValidationError("tau required");
      if (!cfg.N) throw ValidationError("N required");
      require_integral(*cfg.tau);
      break;
    case RunMode::converge_time: {
      if (cfg.tau_list.empty()) throw ValidationError("tau_list required");
      if (!cfg.N) throw ValidationError("N required");
      for (std::size_t i = 0; i + 1 < cfg.tau_list.size(); ++i)
        if (!(cfg.tau_list[i] > cfg.tau_list[i + 1]))
          throw ValidationError("tau_list must be sorted descending");
      for (double tau : cfg.tau_list) {
        if (!(tau > 0.0)) throw ValidationError("tau_list entries must be positive");
        require_integral(tau);
      }
      const double ref_tau =
          cfg.ref_tau ? *cfg.ref_tau
                      : (cfg.preset ? preset_by_name(*cfg.preset).ref_tau : -1.0);
      if (!(ref_tau > 0.0)) throw ValidationError("ref_tau required for inline problems");
      if (!(ref_tau < cfg.tau_list.back()))
        throw ValidationError("ref_tau must be smaller than every studied tau");
      require_integral(ref_tau);
      break;
    }
    case RunMode::converge_space: {
      if (cfg.N_list.empty()) throw ValidationError("N_list required");
      if (!cfg.tau) throw ValidationError("tau required");
      for (std::size_t i = 0; i + 1 < cfg.N_list.size(); ++i)
        if (!(cfg.N_list[i] < cfg.N_list[i + 1]))
          throw ValidationError("N_list must be sorted ascending");
      for (int n : cfg.N_list)
        if (n < 1) throw ValidationError("N_list entries must be >= 1");
      require_integral(*cfg.tau);
      const int ref_N = cfg.ref_N ? *cfg.ref_N
                                  : (cfg.preset ? preset_by_name(*cfg.preset).ref_N : -1);
      if (ref_N < 1) throw ValidationError("ref_N required for inline problems");
      if (!(ref_N > cfg.N_list.back()))
        throw ValidationError("ref_N must be larger than every studied N");
      break;
    }
  }
}

}  // namespace detail

inline RunConfig parse_config(std::string_view text) {
  using detail::trim;
  RunConfig cfg;
  bool mode_seen = false;
  std::vector<std::pair<int, std::vector<double>>> rows;       // (index, row)
  std::vector<std::pair<int, PotentialMode>> pmodes;           // (index, mode)
  std::vector<std::string> seen_keys;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, (nl == std::string_view::npos ? text.size() : nl) - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const std::size_t hash = raw.find('#');
    if (hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string_view line = trim(raw);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string key{trim(line.substr(0, eq))};
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "empty key");

    for (const auto& k : seen_keys)
      if (k == key) throw ParseError(line_no, "duplicate key '" + key + "'");
    seen_keys.push_back(key);

    if (auto i = detail::indexed_key(key, "matrix.row.", line_no)) {
      rows.emplace_back(*i, detail::parse_list<double>(value, line_no, detail::parse_double));
    } else if (auto j = detail::indexed_key(key, "potential.mode.", line_no)) {
      pmodes.emplace_back(*j, detail::parse_potential_mode(value, line_no));
    } else if (key == "mode") {
      const std::string v{value};
      if (v == "solve") cfg.mode = RunMode::solve;
      else if (v == "converge-time") cfg.mode = RunMode::converge_time;
      else if (v == "converge-space") cfg.mode = RunMode::converge_space;
      else if (v == "soliton") cfg.mode = RunMode::soliton;
      else throw ParseError(line_no, "unknown mode '" + v + "'");
      mode_seen = true;
    } else if (key == "preset") {
      cfg.preset = std::string{value};
    } else if (key == "theta") {
      cfg.theta = detail::parse_double(value, line_no);
    } else if (key == "T") {
      cfg.T = detail::parse_double(value, line_no);
    } else if (key == "tau") {
      cfg.tau = detail::parse_double(value, line_no);
    } else if (key == "tau_list") {
      cfg.tau_list = detail::parse_list<double>(value, line_no, detail::parse_double);
    } else if (key == "N") {
      cfg.N = detail::parse_int(value, line_no);
    } else if (key == "N_list") {
      cfg.N_list = detail::parse_list<int>(value, line_no, detail::parse_int);
    } else if (key == "ref_tau") {
      cfg.ref_tau = detail::parse_double(value, line_no);
    } else if (key == "ref_N") {
      cfg.ref_N = detail::parse_int(value, line_no);
    } else if (key == "out_dir") {
      cfg.out_dir = std::string{value};
    } else if (key == "gaussian_centered") {
      cfg.gaussian_centered = detail::parse_bool(value, line_no);
    } else if (key == "jobs") {
      cfg.jobs = detail::parse_int(value, line_no);
    } else {
      throw ParseError(line_no, "unknown key '" + key + "'");
    }
  }

  auto collect = [](auto& pairs, const char* what) {
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (pairs[i].first != static_cast<int>(i) + 1)
        throw ValidationError(std::string(what) + " indices must be 1,2,... without gaps");
  };
  collect(rows, "matrix.row");
  collect(pmodes, "potential.mode");
  for (auto& [i, row] : rows) cfg.matrix_rows.push_back(std::move(row));
  for (auto& [j, m] : pmodes) cfg.potential_modes.push_back(std::move(m));

  detail::validate(cfg, mode_seen);
  return cfg;
}

/// Canonical serialization; parse_config(to_text(cfg)) == cfg.
inline std::string to_text(const RunConfig& cfg) {
  std::ostringstream out;
  out << "mode = ";
  switch (cfg.mode) {
    case RunMode::solve: out << "solve"; break;
    case RunMode::converge_time: out << "converge-time"; break;
    case RunMode::converge_space: out << "converge-space"; break;
    case RunMode::soliton: out << "soliton"; break;
  }
  out << "\n";
  if (cfg.preset) out << "preset = " << *cfg.preset << "\n";
  for (std::size_t i = 0; i < cfg.matrix_rows.size(); ++i) {
    out << "matrix.row." << i + 1 << " = ";
    for (std::size_t j = 0; j < cfg.matrix_rows[i].size(); ++j)
      out << (j ? "," : "") << fmt17(cfg.matrix_rows[i][j]);
    out << "\n";
  }
  for (std::size_t i = 0; i < cfg.potential_modes.size(); ++i) {
    const auto& m = cfg.potential_modes[i];
    out << "potential.mode." << i + 1 << " = ";
    for (std::size_t a = 0; a < m.k.size(); ++a) out << (a ? "," : "") << m.k[a];
    out << " : " << fmt17(m.amplitude.real()) << "," << fmt17(m.amplitude.imag()) << "\n";
  }
  if (cfg.theta) out << "theta = " << fmt17(*cfg.theta) << "\n";
  if (cfg.T) out << "T = " << fmt17(*cfg.T) << "\n";
  if (cfg.tau) out << "tau = " << fmt17(*cfg.tau) << "\n";
  if (!cfg.tau_list.empty()) {
    out << "tau_list = ";
    for (std::size_t i = 0; i < cfg.tau_list.size(); ++i)
      out << (i ? "," : "") << fmt17(cfg.tau_list[i]);
    out << "\n";
  }
  if (cfg.N) out << "N = " << *cfg.N << "\n";
  if (!cfg.N_list.empty()) {
    out << "N_list = ";
    for (std::size_t i = 0; i < cfg.N_list.size(); ++i) out << (i ? "," : "") << cfg.N_list[i];
    out << "\n";
  }
  if (cfg.ref_tau) out << "ref_tau = " << fmt17(*cfg.ref_tau) << "\n";
  if (cfg.ref_N) out << "ref_N = " << *cfg.ref_N << "\n";
  out << "out_dir = " << cfg.out_dir << "\n";
  if (cfg.gaussian_centered) out << "gaussian_centered = true\n";
  if (cfg.jobs) out << "jobs = " << *cfg.jobs << "\n";
  return out.str();
}

}  // namespace qpnls
