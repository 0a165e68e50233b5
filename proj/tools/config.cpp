#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace jdisc::cli {

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <class T>
T get(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

cplx to_cplx(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ConfigError(where + ": expected a number or [re, im]");
}

std::vector<cplx> complex_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<cplx> out;
  for (const auto& x : v) out.push_back(to_cplx(x, where));
  return out;
}

std::vector<double> real_list(const json& obj, const char* key, const std::string& where) {
  return get<std::vector<double>>(obj, key, {}, where);
}

Arc parse_arc(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError(where + ": expected [start, end]");
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

Config parse_config(const json& doc) {
  check_keys(doc, {"grid", "structure", "disc", "field", "family", "probe", "newton", "output"},
             "config");
  Config cfg;

  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    check_keys(g, {"n_radial", "n_angular", "refinements"}, "grid");
    cfg.grid.n_radial = get<int>(g, "n_radial", 16, "grid");
    cfg.grid.n_angular = get<int>(g, "n_angular", 32, "grid");
    if (g.contains("refinements")) {
      for (const auto& r : g["refinements"]) {
        if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer())
          throw ConfigError("grid.refinements: expected [[n_radial, n_angular], ...]");
        cfg.grid.refinements.emplace_back(r[0].get<int>(), r[1].get<int>());
      }
    }
  }

  if (doc.contains("structure")) {
    const json& s = doc["structure"];
    check_keys(s, {"name", "params"}, "structure");
    cfg.structure.name = get<std::string>(s, "name", "standard", "structure");
    cfg.structure.params = real_list(s, "params", "structure");
  }

  if (doc.contains("disc")) {
    const json& d = doc["disc"];
    check_keys(d, {"kind", "coefficients"}, "disc");
    cfg.disc.kind = get<std::string>(d, "kind", "holomorphic", "disc");
    if (cfg.disc.kind != "holomorphic" && cfg.disc.kind != "pullback_preimage")
      throw ConfigError("disc.kind: expected 'holomorphic' or 'pullback_preimage'");
    if (d.contains("coefficients")) {
      if (!d["coefficients"].is_array()) throw ConfigError("disc.coefficients: expected an array");
      for (const auto& comp : d["coefficients"])
        cfg.disc.coefficients.push_back(complex_list(comp, "disc.coefficients"));
    }
  }
  if (cfg.disc.coefficients.empty()) throw ConfigError("disc.coefficients: required");

  if (doc.contains("field")) {
    const json& f = doc["field"];
    check_keys(f, {"kind", "phi_coefficients", "phi_boundary", "max_residual"}, "field");
    cfg.field.kind = get<std::string>(f, "kind", "fx", "field");
    if (cfg.field.kind != "fx" && cfg.field.kind != "fy" && cfg.field.kind != "phi")
      throw ConfigError("field.kind: expected 'fx', 'fy' or 'phi'");
    if (f.contains("phi_coefficients"))
      cfg.field.phi_coefficients = complex_list(f["phi_coefficients"], "field.phi_coefficients");
    cfg.field.phi_boundary = real_list(f, "phi_boundary", "field");
    cfg.field.max_residual = get<double>(f, "max_residual", 1e-6, "field");
    if (cfg.field.kind == "phi" &&
        cfg.field.phi_coefficients.empty() == cfg.field.phi_boundary.empty())
      throw ConfigError("field: give exactly one of phi_coefficients and phi_boundary");
  }

  if (doc.contains("family")) {
    const json& f = doc["family"];
    check_keys(f, {"t_values", "normalized"}, "family");
    cfg.family.t_values = real_list(f, "t_values", "family");
    cfg.family.normalized = get<bool>(f, "normalized", false, "family");
  }

  if (doc.contains("probe")) {
    const json& p = doc["probe"];
    check_keys(p, {"domain", "domain_params", "arc_P", "arc_P1", "plateau_R", "r_values", "t_grid",
                   "compact_margin", "oversample"},
               "probe");
    ProbeSection ps;
    ps.domain = get<std::string>(p, "domain", "ball", "probe");
    ps.domain_params = real_list(p, "domain_params", "probe");
    if (!p.contains("arc_P") || !p.contains("arc_P1"))
      throw ConfigError("probe: arc_P and arc_P1 are required");
    ps.probe.arc_P = parse_arc(p["arc_P"], "probe.arc_P");
    ps.probe.arc_P1 = parse_arc(p["arc_P1"], "probe.arc_P1");
    ps.probe.plateau_R = get<double>(p, "plateau_R", 0.0, "probe");
    ps.probe.r_values = real_list(p, "r_values", "probe");
    ps.probe.t_grid = real_list(p, "t_grid", "probe");
    ps.probe.compact_margin = get<double>(p, "compact_margin", 0.05, "probe");
    ps.probe.oversample = get<int>(p, "oversample", 64, "probe");
    try {
      validate(ps.probe);
    } catch (const PreconditionError& e) {
      throw ConfigError(e.what());
    }
    cfg.probe = std::move(ps);
  }

  if (doc.contains("newton")) {
    const json& n = doc["newton"];
    check_keys(n, {"max_iter", "tol", "damping", "epsilon_ball", "holder_alpha", "pair_budget",
                   "kernel_threshold"},
               "newton");
    cfg.newton.max_iter = get<int>(n, "max_iter", 30, "newton");
    cfg.newton.tol = get<double>(n, "tol", 1e-12, "newton");
    cfg.newton.damping = get<double>(n, "damping", 1.0, "newton");
    cfg.newton.epsilon_ball = get<double>(n, "epsilon_ball", 1.0, "newton");
    cfg.newton.holder.alpha = get<double>(n, "holder_alpha", 0.5, "newton");
    cfg.newton.holder.pair_budget = get<int>(n, "pair_budget", 256, "newton");
    cfg.correction.kernel_threshold = get<double>(n, "kernel_threshold", 1e-8, "newton");
  }
  try {
    validate(cfg.newton);
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }

  if (doc.contains("output")) {
    const json& o = doc["output"];
    check_keys(o, {"csv", "include_discs"}, "output");
    cfg.output.csv = get<bool>(o, "csv", true, "output");
    cfg.output.include_discs = get<bool>(o, "include_discs", false, "output");
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace jdisc::cli
