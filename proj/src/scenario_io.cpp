#include "drcournot/scenario_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <yaml-cpp/yaml.h>

namespace drcournot {

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& key,
                         const std::string& msg) const {
    std::ostringstream os;
    os << source_;
    if (at.IsDefined() && !at.Mark().is_null()) os << ':' << at.Mark().line + 1;
    os << ": " << key << ": " << msg;
    throw ScenarioError(os.str());
  }

  void check_keys(const YAML::Node& map, const std::string& where,
                  const std::set<std::string>& allowed) const {
    if (!map.IsMap()) fail(map, where.empty() ? "document" : where, "expected a mapping");
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.contains(key))
        fail(kv.first, where.empty() ? key : where + "." + key, "unknown key");
    }
  }

  const YAML::Node require(const YAML::Node& map, const std::string& key,
                           const std::string& path) const {
    const YAML::Node node = map[key];
    if (!node) fail(map, path, "missing required key");
    return node;
  }

  double number(const YAML::Node& node, const std::string& path) const {
    if (!node.IsScalar()) fail(node, path, "expected a number");
    double v = 0.0;
    try {
      v = node.as<double>();
    } catch (const YAML::Exception&) {
      fail(node, path, "expected a number, found '" + node.Scalar() + "'");
    }
    if (!std::isfinite(v)) fail(node, path, "value must be finite");
    return v;
  }

  std::vector<double> array(const YAML::Node& node, const std::string& path,
                            std::size_t expected) const {
    if (!node.IsSequence()) fail(node, path, "expected a list of numbers");
    if (node.size() != expected) {
      fail(node, path,
           "expected " + std::to_string(expected) + " values (horizon), found " +
               std::to_string(node.size()));
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < node.size(); ++i)
      out.push_back(number(node[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }

  std::string text(const YAML::Node& node, const std::string& path) const {
    if (!node.IsScalar()) fail(node, path, "expected a string");
    return node.Scalar();
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

std::string fmt_double(double v) {
  // Shortest representation that reads back to the same double.
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt_double(v[i]);
  }
  return out + "]";
}

}  // namespace

MarketMode parse_market_mode(std::string_view text) {
  if (text == "no_dr") return MarketMode::NoDR;
  if (text == "dr") return MarketMode::DR;
  throw std::invalid_argument("mode must be 'no_dr' or 'dr', got '" + std::string(text) + "'");
}

std::string to_string(MarketMode m) { return m == MarketMode::DR ? "dr" : "no_dr"; }

MultiplierMode parse_multiplier_mode(std::string_view text) {
  if (text == "shared") return MultiplierMode::Shared;
  if (text == "per_player") return MultiplierMode::PerPlayer;
  throw std::invalid_argument("multiplier mode must be 'shared' or 'per_player', got '" +
                              std::string(text) + "'");
}

std::string to_string(MultiplierMode m) {
  return m == MultiplierMode::Shared ? "shared" : "per_player";
}

Scenario parse_scenario(std::string_view text, const std::string& source) {
  const Reader rd(source);
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ScenarioError(source + ":" + std::to_string(e.mark.line + 1) + ": parse error: " + e.msg);
  }

  rd.check_keys(root, "",
                {"horizon", "alpha", "xi", "gamma", "intercept", "p2", "thermal", "hydro", "mode",
                 "d_net", "multiplier_mode"});

  Scenario s;
  const YAML::Node horizon_node = rd.require(root, "horizon", "horizon");
  const double horizon_value = rd.number(horizon_node, "horizon");
  if (horizon_value < 1.0 || horizon_value != std::floor(horizon_value))
    rd.fail(horizon_node, "horizon", "must be a positive integer");
  const auto horizon = static_cast<std::size_t>(horizon_value);

  s.sigmoid.alpha = rd.number(rd.require(root, "alpha", "alpha"), "alpha");
  s.sigmoid.xi = rd.number(rd.require(root, "xi", "xi"), "xi");

  const auto gamma = rd.array(rd.require(root, "gamma", "gamma"), "gamma", horizon);
  const auto intercept = rd.array(rd.require(root, "intercept", "intercept"), "intercept", horizon);
  const auto p2 = rd.array(rd.require(root, "p2", "p2"), "p2", horizon);
  for (std::size_t t = 0; t < horizon; ++t) s.periods.push_back({gamma[t], intercept[t], p2[t]});

  const YAML::Node thermal = rd.require(root, "thermal", "thermal");
  rd.check_keys(thermal, "thermal", {"c1", "c2", "c3", "r_max"});
  s.thermal.c1 = rd.number(rd.require(thermal, "c1", "thermal.c1"), "thermal.c1");
  s.thermal.c2 = rd.number(rd.require(thermal, "c2", "thermal.c2"), "thermal.c2");
  s.thermal.c3 = rd.number(rd.require(thermal, "c3", "thermal.c3"), "thermal.c3");
  s.thermal.r_max = rd.number(rd.require(thermal, "r_max", "thermal.r_max"), "thermal.r_max");

  const YAML::Node hydro = rd.require(root, "hydro", "hydro");
  rd.check_keys(hydro, "hydro", {"c4", "w_max", "production"});
  s.hydro.c4 = rd.number(rd.require(hydro, "c4", "hydro.c4"), "hydro.c4");
  s.hydro.w_max = rd.number(rd.require(hydro, "w_max", "hydro.w_max"), "hydro.w_max");
  if (const YAML::Node prod = hydro["production"]) {
    if (prod.IsScalar() && prod.Scalar() == "identity") {
      s.hydro.production = Production{1.0};
    } else {
      s.hydro.production = Production{rd.number(prod, "hydro.production")};
    }
  }

  const YAML::Node mode = rd.require(root, "mode", "mode");
  try {
    s.mode = parse_market_mode(rd.text(mode, "mode"));
  } catch (const std::invalid_argument& e) {
    rd.fail(mode, "mode", e.what());
  }
  if (const YAML::Node d = root["d_net"]) s.d_net = rd.number(d, "d_net");
  if (const YAML::Node mm = root["multiplier_mode"]) {
    try {
      s.multiplier_mode = parse_multiplier_mode(rd.text(mm, "multiplier_mode"));
    } catch (const std::invalid_argument& e) {
      rd.fail(mm, "multiplier_mode", e.what());
    }
  }

  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(source + ": invalid scenario: " + e.what());
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

std::string dump_scenario(const Scenario& s) {
  std::vector<double> gamma, intercept, p2;
  for (const auto& pd : s.periods) {
    gamma.push_back(pd.gamma);
    intercept.push_back(pd.intercept);
    p2.push_back(pd.p2);
  }
  std::ostringstream os;
  os << "horizon: " << s.horizon() << '\n'
     << "alpha: " << fmt_double(s.sigmoid.alpha) << '\n'
     << "xi: " << fmt_double(s.sigmoid.xi) << '\n'
     << "gamma: " << fmt_list(gamma) << '\n'
     << "intercept: " << fmt_list(intercept) << '\n'
     << "p2: " << fmt_list(p2) << '\n'
     << "thermal: {c1: " << fmt_double(s.thermal.c1) << ", c2: " << fmt_double(s.thermal.c2)
     << ", c3: " << fmt_double(s.thermal.c3) << ", r_max: " << fmt_double(s.thermal.r_max)
     << "}\n"
     << "hydro: {c4: " << fmt_double(s.hydro.c4) << ", w_max: " << fmt_double(s.hydro.w_max)
     << ", production: " << fmt_double(s.hydro.production.efficiency) << "}\n"
     << "mode: " << to_string(s.mode) << '\n';
  if (s.d_net) os << "d_net: " << fmt_double(*s.d_net) << '\n';
  os << "multiplier_mode: " << to_string(s.multiplier_mode) << '\n';
  return os.str();
}

}  // namespace drcournot
