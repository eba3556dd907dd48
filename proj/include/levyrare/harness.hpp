#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "levyrare/barrier.hpp"
#include "levyrare/config.hpp"
#include "levyrare/crude_mc.hpp"
#include "levyrare/estimators.hpp"
#include "levyrare/levy_model.hpp"
#include "levyrare/parallel.hpp"
#include "levyrare/summary.hpp"

namespace levyrare {

inline constexpr const char* kCsvHeader = "estimator,alpha,n,mean,variance,rel_error,samples,wall_time_s";

using LogSink = std::function<void(const std::string&)>;

inline ExperimentModel build_model(const ModelConfig& m, double alpha) {
  if (!(alpha > 1.0)) throw ConfigError("alpha must exceed 1");
  return ExperimentModel(m.drift, m.sigma, TwoSidedParetoMeasure(alpha, m.rate, m.alpha_down.value_or(alpha)));
}

/// Shortest decimal that reads back to the same double.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline void write_csv(std::ostream& out, const std::vector<RunSummary>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.estimator << ',' << format_number(r.alpha) << ',' << r.n << ',' << format_number(r.mean) << ','
        << format_number(r.variance) << ',' << format_number(r.rel_error) << ',' << r.samples << ','
        << format_number(r.wall_time_s) << '\n';
  }
}

inline void write_csv_file(const std::string& path, const std::vector<RunSummary>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(f, rows);
  if (!f) throw std::runtime_error("write to " + path + " failed");
}

/// Reads a harness CSV. Columns may come in any order; a missing column
/// is reported by name.
inline std::vector<RunSummary> read_csv(std::istream& in) {
  std::vector<RunSummary> rows;
  std::string line;
  if (!std::getline(in, line)) return rows;
  auto split = [](const std::string& s) {
    std::vector<std::string> v;
    std::string item;
    std::stringstream ss(s);
    while (std::getline(ss, item, ',')) {
      if (!item.empty() && item.back() == '\r') item.pop_back();
      v.push_back(item);
    }
    return v;
  };
  const auto header = split(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* name : {"estimator", "alpha", "n", "mean", "variance", "rel_error", "samples", "wall_time_s"})
    if (!col.count(name)) throw ConfigError(std::string("csv: missing column ") + name);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split(line);
    if (f.size() != header.size()) throw ConfigError("csv: wrong field count on line " + std::to_string(lineno));
    auto num = [&](const char* name) {
      const std::string& s = f[col[name]];
      if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
      try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
      } catch (const std::exception&) {
        throw ConfigError("csv: bad " + std::string(name) + " '" + s + "' on line " + std::to_string(lineno));
      }
    };
    RunSummary r;
    r.estimator = f[col["estimator"]];
    r.alpha = num("alpha");
    r.n = static_cast<std::uint64_t>(num("n"));
    r.mean = num("mean");
    r.variance = num("variance");
    r.rel_error = num("rel_error");
    r.samples = static_cast<std::uint64_t>(num("samples"));
    r.wall_time_s = num("wall_time_s");
    rows.push_back(r);
  }
  return rows;
}

/// Rows sorted by (estimator, alpha, n), as consumed by the plotting script.
inline std::vector<RunSummary> tidy_rows(std::vector<RunSummary> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const RunSummary& x, const RunSummary& y) {
    return std::tie(x.estimator, x.alpha, x.n) < std::tie(y.estimator, y.alpha, y.n);
  });
  return rows;
}

/// Three rows per alpha (algo2, algo3, crude) against the n columns;
/// missing cells print as "-".
inline std::string render_table1(const std::vector<RunSummary>& rows) {
  if (rows.empty()) return {};
  std::set<double> alphas;
  std::set<std::uint64_t> ns;
  std::map<std::tuple<std::string, double, std::uint64_t>, double> cell;
  for (const auto& r : rows) {
    alphas.insert(r.alpha);
    ns.insert(r.n);
    cell[{r.estimator, r.alpha, r.n}] = r.rel_error;
  }
  std::ostringstream out;
  out << std::left << std::setw(22) << "relative error";
  for (auto n : ns) out << std::right << std::setw(10) << ("n=" + std::to_string(n));
  out << '\n';
  const std::pair<const char*, const char*> labels[] = {
      {"algo2", "Algorithm 2"}, {"algo3", "Algorithm 3"}, {"crude", "Crude MC"}};
  for (double a : alphas) {
    out << "alpha = " << format_number(a) << '\n';
    for (const auto& [id, label] : labels) {
      out << "  " << std::left << std::setw(20) << label;
      for (auto n : ns) {
        const auto it = cell.find({id, a, n});
        std::ostringstream v;
        if (it == cell.end() || std::isnan(it->second))
          v << "-";
        else
          v << std::fixed << std::setprecision(2) << it->second;
        out << std::right << std::setw(10) << v.str();
      }
      out << '\n';
    }
  }
  return out.str();
}

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

/// Runs one importance-sampling cell.
inline RunSummary run_is_cell(const ExperimentConfig& cfg, double alpha, std::uint64_t n, Mode mode,
                              std::uint64_t samples, const std::string& tag) {
  const ExperimentModel model = build_model(cfg.model, alpha);
  AlgoParams p = cfg.algo;
  p.n = n;
  p.mode = mode;
  const std::uint64_t seed = cell_seed(cfg.seed, tag, alpha, n);
  const auto t0 = std::chrono::steady_clock::now();
  MomentAccumulator acc;
  if (cfg.kind == EventKind::one_sided) {
    const RareEventEstimator<ExperimentModel> est(p, model, cfg.event);
    acc = replicate(samples, seed, [&](Rng& rng) { return est.draw(rng).value; });
  } else {
    const BarrierEstimator<ExperimentModel> est(p, model, cfg.barrier);
    acc = replicate(samples, seed, [&](Rng& rng) { return est.draw(rng).value; });
  }
  return summarize(mode == Mode::exact_sba ? "algo2" : "algo3", alpha, n, acc, detail::seconds_since(t0));
}

/// Runs one crude cell with N = max(64 / p_hat, floor), capped at
/// samples.crude_max.
inline RunSummary run_crude_cell(const ExperimentConfig& cfg, double alpha, std::uint64_t n, double p_hat,
                                 const LogSink& log = {}) {
  bool capped = false;
  const std::uint64_t count = crude_sample_count(p_hat, cfg.samples.crude_floor, cfg.samples.crude_max, &capped);
  if (capped && log) {
    std::ostringstream msg;
    msg << "warning: crude cell alpha=" << format_number(alpha) << " n=" << n << " wants "
        << (p_hat > 0.0 ? format_number(std::ceil(64.0 / p_hat)) : std::string("unbounded"))
        << " samples; capped at " << cfg.samples.crude_max;
    log(msg.str());
  }
  const ExperimentModel model = build_model(cfg.model, alpha);
  const std::uint64_t seed = cell_seed(cfg.seed, "crude", alpha, n);
  const auto t0 = std::chrono::steady_clock::now();
  RunSummary s = cfg.kind == EventKind::one_sided ? crude_estimate(model, cfg.event, n, count, seed)
                                                   : crude_barrier_estimate(model, cfg.barrier, n, count, seed);
  s.estimator = "crude";
  s.wall_time_s = detail::seconds_since(t0);
  return s;
}

struct RunOptions {
  bool only_crude = false;
  bool record_wall_time = true;
  LogSink log;
};

/// Every requested (estimator, alpha, n) cell, cells in grid order.
inline std::vector<RunSummary> run_experiment(const ExperimentConfig& cfg, const RunOptions& opt = {}) {
  cfg.validate();
  std::vector<RunSummary> rows;
  const bool want2 = !opt.only_crude && cfg.has_mode("algo2");
  const bool want3 = !opt.only_crude && cfg.has_mode("algo3");
  const bool want_crude = opt.only_crude || cfg.has_mode("crude");
  auto note = [&](const RunSummary& s) {
    if (!opt.log) return;
    std::ostringstream msg;
    msg << s.estimator << " alpha=" << format_number(s.alpha) << " n=" << s.n << " mean=" << s.mean
        << " rel_error=" << s.rel_error << " samples=" << s.samples << " time=" << s.wall_time_s << "s";
    opt.log(msg.str());
  };
  for (double alpha : cfg.alphas) {
    for (auto n : cfg.ns) {
      double p_hat = -1.0;
      if (want2) {
        rows.push_back(run_is_cell(cfg, alpha, n, Mode::exact_sba, cfg.samples.is, "algo2"));
        p_hat = rows.back().mean;
        note(rows.back());
      }
      if (want3) {
        rows.push_back(run_is_cell(cfg, alpha, n, Mode::ara, cfg.samples.is, "algo3"));
        note(rows.back());
      }
      if (want_crude) {
        if (p_hat < 0.0) p_hat = run_is_cell(cfg, alpha, n, Mode::exact_sba, cfg.samples.pilot, "pilot").mean;
        rows.push_back(run_crude_cell(cfg, alpha, n, p_hat, opt.log));
        note(rows.back());
      }
    }
  }
  if (!opt.record_wall_time)
    for (auto& r : rows) r.wall_time_s = 0.0;
  if (!cfg.output.empty()) write_csv_file(cfg.output, rows);
  return rows;
}

/// Renders the Lipschitz report as text.
inline std::string render_lipschitz(const LipschitzReport& rep) {
  std::ostringstream out;
  out << "lambda = " << rep.lambda << ", bound = " << rep.bound << ", theoretical = " << std::setprecision(4)
      << rep.theoretical << '\n';
  out << std::setw(8) << "z" << std::setw(8) << "t" << std::setw(8) << "delta" << std::setw(12) << "prob"
      << std::setw(12) << "constant" << "  status\n";
  for (const auto& c : rep.cells) {
    out << std::setw(8) << c.z << std::setw(8) << c.t << std::setw(8) << c.delta << std::setw(12)
        << std::setprecision(4) << c.probability << std::setw(12) << c.constant << "  "
        << (!c.in_regime ? "out-of-regime" : (c.flagged ? "FLAG" : "ok")) << '\n';
  }
  out << "max in-regime constant = " << rep.max_constant() << '\n';
  return out.str();
}

}  // namespace levyrare
