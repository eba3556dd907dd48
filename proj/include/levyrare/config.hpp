#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "levyrare/diagnostic.hpp"
#include "levyrare/numerics.hpp"
#include "levyrare/params.hpp"

namespace levyrare {

enum class EventKind { one_sided, down_and_in };

struct ModelConfig {
  double rate = 0.5;   ///< total jump arrival rate, split evenly between signs
  double sigma = 1.0;
  double drift = 0.0;
  std::optional<double> alpha_down;  ///< defaults to alpha
};

struct SampleConfig {
  std::uint64_t is = 10000;
  std::uint64_t crude_floor = 10000;
  std::uint64_t crude_max = 50'000'000;
  std::uint64_t pilot = 2000;  ///< IS draws for p-hat when no algo2 cell is run
};

struct ExperimentConfig {
  std::uint64_t seed = 20240101;
  std::string output = "results.csv";
  std::vector<std::string> modes{"algo2", "algo3", "crude"};
  ModelConfig model;
  EventKind kind = EventKind::one_sided;
  EventSpec event;
  BarrierEventSpec barrier;
  AlgoParams algo;
  std::vector<double> alphas{1.45, 1.6, 1.75};
  std::vector<std::uint64_t> ns{200, 400, 600, 800, 1000};
  SampleConfig samples;
  LipschitzOptions diagnostic;

  bool has_mode(const std::string& m) const { return std::find(modes.begin(), modes.end(), m) != modes.end(); }

  /// Rejects anything that would fail at sampling time.
  void validate() const {
    if (alphas.empty() || ns.empty()) throw ConfigError("grid: alpha and n lists must be nonempty");
    if (modes.empty()) throw ConfigError("modes must be nonempty");
    for (const auto& m : modes)
      if (m != "algo2" && m != "algo3" && m != "crude") throw ConfigError("unknown mode '" + m + "'");
    for (double a : alphas)
      if (!(a > 1.0)) throw ConfigError("grid: every alpha must exceed 1");
    if (!(model.rate >= 0.0) || !(model.sigma >= 0.0)) throw ConfigError("model: rate and sigma must be >= 0");
    if (model.alpha_down && !(*model.alpha_down > 1.0)) throw ConfigError("model: alpha_down must exceed 1");
    if (samples.is < 1 || samples.crude_floor < 1 || samples.crude_max < 1)
      throw ConfigError("samples: counts must be >= 1");
    if (kind == EventKind::one_sided) {
      event.validate();
    } else {
      barrier.validate();
    }
    for (auto n : ns) {
      AlgoParams p = algo;
      p.n = n;
      p.validate(kind == EventKind::one_sided ? event.b : std::numeric_limits<double>::infinity());
      if (has_mode("algo3") && !(static_cast<double>(n) * p.gamma > 1.0))
        throw ConfigError("algo3 needs n * gamma > 1 for every n in the grid");
    }
  }
};

namespace detail {

template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& key) {
  std::vector<T> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    std::istringstream is(item);
    T v{};
    if (!(is >> v) || !is.eof()) throw ConfigError("cannot parse '" + item + "' in " + key);
    out.push_back(v);
  }
  return out;
}

template <>
inline std::vector<std::string> parse_list<std::string>(const std::string& text, const std::string& key) {
  (void)key;
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
void read_value(const boost::property_tree::ptree& pt, const std::string& key, T& target) {
  if (auto v = pt.get_optional<std::string>(key)) {
    std::istringstream is(*v);
    T parsed{};
    if (!(is >> parsed) || !(is >> std::ws).eof()) throw ConfigError("cannot parse " + key + " = '" + *v + "'");
    target = parsed;
  }
}

template <class T>
void read_list(const boost::property_tree::ptree& pt, const std::string& key, std::vector<T>& target) {
  if (auto v = pt.get_optional<std::string>(key)) target = parse_list<T>(*v, key);
}

}  // namespace detail

/// Reads an INI document. Unset keys keep the defaults of ExperimentConfig.
inline ExperimentConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ExperimentConfig c;
  using detail::read_list;
  using detail::read_value;
  read_value(tree, "seed", c.seed);
  if (auto v = tree.get_optional<std::string>("output")) c.output = *v;
  read_list(tree, "modes", c.modes);

  read_value(tree, "model.rate", c.model.rate);
  read_value(tree, "model.sigma", c.model.sigma);
  read_value(tree, "model.drift", c.model.drift);
  if (tree.get_optional<std::string>("model.alpha_down")) {
    double v = 0.0;
    read_value(tree, "model.alpha_down", v);
    c.model.alpha_down = v;
  }

  if (auto kind = tree.get_optional<std::string>("event.kind")) {
    if (*kind == "one_sided")
      c.kind = EventKind::one_sided;
    else if (*kind == "down_and_in")
      c.kind = EventKind::down_and_in;
    else
      throw ConfigError("event.kind must be one_sided or down_and_in, got '" + *kind + "'");
  }
  if (c.kind == EventKind::one_sided) {
    read_value(tree, "event.a", c.event.a);
    read_value(tree, "event.b", c.event.b);
  } else {
    read_value(tree, "event.a", c.barrier.a);
    read_value(tree, "event.b", c.barrier.b);
    read_value(tree, "event.c", c.barrier.c);
  }

  read_value(tree, "algorithm.gamma", c.algo.gamma);
  read_value(tree, "algorithm.w", c.algo.w);
  read_value(tree, "algorithm.rho", c.algo.rho);
  read_value(tree, "algorithm.d", c.algo.d);
  read_value(tree, "algorithm.kappa", c.algo.kappa);
  read_value(tree, "algorithm.r", c.algo.r);

  read_list(tree, "grid.alpha", c.alphas);
  read_list(tree, "grid.n", c.ns);

  read_value(tree, "samples.is", c.samples.is);
  read_value(tree, "samples.crude_floor", c.samples.crude_floor);
  read_value(tree, "samples.crude_max", c.samples.crude_max);
  read_value(tree, "samples.pilot", c.samples.pilot);

  read_list(tree, "diagnostic.z", c.diagnostic.z_list);
  read_list(tree, "diagnostic.t", c.diagnostic.t_list);
  read_list(tree, "diagnostic.delta", c.diagnostic.delta_list);
  read_value(tree, "diagnostic.samples", c.diagnostic.samples);
  read_value(tree, "diagnostic.bound", c.diagnostic.bound);
  c.diagnostic.seed = c.seed;

  c.validate();
  return c;
}

inline ExperimentConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace levyrare
