#include "ogt/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ogt/errors.hpp"

namespace ogt {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <typename T>
T get(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + ": bad value for '" + key + "': " + e.what());
  }
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback, const std::string& where) {
  return obj.contains(key) ? get<T>(obj, key, where) : fallback;
}

/// The single (variant, body) pair of a one-key selector object.
std::pair<std::string, json> select_variant(const json& obj, const std::set<std::string>& variants,
                                            const std::string& where) {
  reject_unknown(obj, variants, where);
  if (obj.size() != 1)
    throw ConfigError(where + ": exactly one of {" +
                      [&] {
                        std::string s;
                        for (const auto& v : variants) s += (s.empty() ? "" : ", ") + v;
                        return s;
                      }() +
                      "} must be given, found " + std::to_string(obj.size()));
  const auto it = obj.begin();
  return {it.key(), it.value()};
}

GraphSpec parse_graph(const json& obj) {
  const auto [kind, body] = select_variant(obj, {"ring", "metropolis_lazy", "file"}, "graph");
  GraphSpec g;
  if (kind == "ring") {
    reject_unknown(body, {"n"}, "graph.ring");
    g.kind = GraphSpec::Kind::ring;
    g.n = get<int>(body, "n", "graph.ring");
  } else if (kind == "metropolis_lazy") {
    reject_unknown(body, {"n", "chords", "seed"}, "graph.metropolis_lazy");
    g.kind = GraphSpec::Kind::metropolis_lazy;
    g.n = get<int>(body, "n", "graph.metropolis_lazy");
    g.chords = get_or<int>(body, "chords", 0, "graph.metropolis_lazy");
    g.seed = get_or<std::uint64_t>(body, "seed", 0, "graph.metropolis_lazy");
  } else {
    reject_unknown(body, {"path"}, "graph.file");
    g.kind = GraphSpec::Kind::file;
    g.path = get<std::string>(body, "path", "graph.file");
  }
  return g;
}

ObjectiveSpec parse_objective(const json& obj) {
  const auto [kind, body] = select_variant(obj, {"banknote", "synth_quadratic", "synth_logistic"}, "objective");
  ObjectiveSpec o;
  const std::string where = "objective." + kind;
  if (kind == "banknote") {
    reject_unknown(body, {"path", "n", "mu", "seed"}, where);
    o.kind = ObjectiveSpec::Kind::banknote;
    o.path = get<std::string>(body, "path", where);
    o.n = get<int>(body, "n", where);
    o.mu = get_or<double>(body, "mu", 0.01, where);
    o.seed = get_or<std::uint64_t>(body, "seed", 0, where);
    o.d = 4;
  } else if (kind == "synth_quadratic") {
    reject_unknown(body, {"n", "d", "kappa", "seed"}, where);
    o.kind = ObjectiveSpec::Kind::synth_quadratic;
    o.n = get<int>(body, "n", where);
    o.d = get_or<int>(body, "d", 4, where);
    o.kappa = get<double>(body, "kappa", where);
    o.seed = get_or<std::uint64_t>(body, "seed", 0, where);
  } else {
    reject_unknown(body, {"n", "d", "mu", "seed"}, where);
    o.kind = ObjectiveSpec::Kind::synth_logistic;
    o.n = get<int>(body, "n", where);
    o.d = get_or<int>(body, "d", 4, where);
    o.mu = get_or<double>(body, "mu", 0.01, where);
    o.seed = get_or<std::uint64_t>(body, "seed", 0, where);
  }
  return o;
}

ParamsSpec parse_params(const json& obj) {
  const auto [kind, body] = select_variant(obj, {"theorem", "fig1_preset", "explicit"}, "params");
  ParamsSpec p;
  if (kind == "theorem") {
    reject_unknown(body, {}, "params.theorem");
    p.source = ParamsSpec::Source::theorem;
  } else if (kind == "fig1_preset") {
    reject_unknown(body, {"graph_id"}, "params.fig1_preset");
    p.source = ParamsSpec::Source::fig1_preset;
    if (body.contains("graph_id")) p.graph_id = parse_fig1_graph(get<std::string>(body, "graph_id", "params"));
  } else {
    const std::string where = "params.explicit";
    reject_unknown(body, {"alpha", "beta", "gamma", "tau", "eta", "p", "q", "eta_w"}, where);
    p.source = ParamsSpec::Source::explicit_values;
    HyperParams& v = p.values;
    v.alpha = get_or<double>(body, "alpha", 0.0, where);
    v.beta = get_or<double>(body, "beta", 0.0, where);
    v.tau = get_or<double>(body, "tau", 0.0, where);
    v.eta = get_or<double>(body, "eta", 0.0, where);
    v.p = get_or<double>(body, "p", 1.0, where);
    v.q = get_or<double>(body, "q", v.p, where);
    v.eta_w = get_or<double>(body, "eta_w", 0.0, where);
    p.has_gamma = body.contains("gamma");
    v.gamma = get_or<double>(body, "gamma", 0.0, where);
  }
  return p;
}

json graph_json(const GraphSpec& g) {
  switch (g.kind) {
    case GraphSpec::Kind::ring: return {{"ring", {{"n", g.n}}}};
    case GraphSpec::Kind::metropolis_lazy:
      return {{"metropolis_lazy", {{"n", g.n}, {"chords", g.chords}, {"seed", g.seed}}}};
    case GraphSpec::Kind::file: return {{"file", {{"path", g.path}}}};
  }
  return {};
}

json objective_json(const ObjectiveSpec& o) {
  switch (o.kind) {
    case ObjectiveSpec::Kind::banknote:
      return {{"banknote", {{"path", o.path}, {"n", o.n}, {"mu", o.mu}, {"seed", o.seed}}}};
    case ObjectiveSpec::Kind::synth_quadratic:
      return {{"synth_quadratic", {{"n", o.n}, {"d", o.d}, {"kappa", o.kappa}, {"seed", o.seed}}}};
    case ObjectiveSpec::Kind::synth_logistic:
      return {{"synth_logistic", {{"n", o.n}, {"d", o.d}, {"mu", o.mu}, {"seed", o.seed}}}};
  }
  return {};
}

json params_json(const ParamsSpec& p) {
  switch (p.source) {
    case ParamsSpec::Source::theorem: return {{"theorem", json::object()}};
    case ParamsSpec::Source::fig1_preset: {
      json body = json::object();
      if (p.graph_id) body["graph_id"] = to_string(*p.graph_id);
      return {{"fig1_preset", body}};
    }
    case ParamsSpec::Source::explicit_values: {
      const HyperParams& v = p.values;
      json body = {{"alpha", v.alpha}, {"beta", v.beta}, {"tau", v.tau}, {"eta", v.eta},
                   {"p", v.p},         {"q", v.q},       {"eta_w", v.eta_w}};
      if (p.has_gamma) body["gamma"] = v.gamma;
      return {{"explicit", body}};
    }
  }
  return {};
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(doc, {"algorithm", "graph", "objective", "params", "seed", "mode", "stopping",
                       "diagnostics_every", "record_every"},
                 "config");
  RunConfig c;
  c.algorithm = parse_algorithm(get<std::string>(doc, "algorithm", "config"));
  if (!doc.contains("graph")) throw ConfigError("config: missing 'graph'");
  c.graph = parse_graph(doc.at("graph"));
  if (!doc.contains("objective")) throw ConfigError("config: missing 'objective'");
  c.objective = parse_objective(doc.at("objective"));
  c.params = doc.contains("params") ? parse_params(doc.at("params")) : ParamsSpec{};
  c.seed = get_or<std::uint64_t>(doc, "seed", 1, "config");
  c.mode = parse_draw_mode(get_or<std::string>(doc, "mode", "coupled", "config"));
  if (doc.contains("stopping")) {
    const json& s = doc.at("stopping");
    reject_unknown(s, {"max_iters", "target_loss_gap"}, "stopping");
    c.stopping.max_iters = get_or<long>(s, "max_iters", c.stopping.max_iters, "stopping");
    if (s.contains("target_loss_gap")) c.stopping.target_loss_gap = get<double>(s, "target_loss_gap", "stopping");
  }
  c.diagnostics_every = get_or<long>(doc, "diagnostics_every", 0, "config");
  c.record_every = get_or<long>(doc, "record_every", 0, "config");
  if (c.stopping.max_iters < 0) throw ConfigError("stopping.max_iters must be >= 0");
  if (c.diagnostics_every < 0) throw ConfigError("diagnostics_every must be >= 0");
  if (c.record_every < 0) throw ConfigError("record_every must be >= 0");
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

std::string to_json(const RunConfig& c) {
  json doc = {{"algorithm", to_string(c.algorithm)},
              {"graph", graph_json(c.graph)},
              {"objective", objective_json(c.objective)},
              {"params", params_json(c.params)},
              {"seed", c.seed},
              {"mode", to_string(c.mode)},
              {"diagnostics_every", c.diagnostics_every},
              {"record_every", c.record_every}};
  json stopping = {{"max_iters", c.stopping.max_iters}};
  if (c.stopping.target_loss_gap) stopping["target_loss_gap"] = *c.stopping.target_loss_gap;
  doc["stopping"] = stopping;
  return doc.dump(2);
}

void apply_env_overrides(RunConfig& config) {
  if (const char* env = std::getenv("OGT_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') throw ConfigError(std::string("OGT_SEED is not an integer: ") + env);
    config.seed = v;
  }
}

}  // namespace ogt
