#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "jdisc/cauchy.hpp"
#include "jdisc/variation.hpp"

namespace jdisc::cli {

namespace fs = std::filesystem;

json disc_to_json(const DiscMap& f) {
  json values = json::array();
  for (cplx v : f.values()) values.push_back({v.real(), v.imag()});
  return {{"n_radial", f.grid().n_radial()},
          {"n_angular", f.grid().n_angular()},
          {"dim", f.dim()},
          {"values", std::move(values)}};
}

DiscMap disc_from_json(const json& j) {
  const DiscGrid grid = make_grid(j.at("n_radial").get<int>(), j.at("n_angular").get<int>());
  DiscMap f(grid, j.at("dim").get<int>());
  const json& values = j.at("values");
  if (values.size() != f.values().size()) throw ConfigError("disc: wrong number of values");
  for (std::size_t i = 0; i < values.size(); ++i)
    f.values()[i] = cplx(values[i].at(0).get<double>(), values[i].at(1).get<double>());
  return f;
}

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string disc_to_csv(const DiscMap& f) {
  std::ostringstream out;
  out << "radius,angle,component_index,re,im\n";
  const DiscGrid& g = f.grid();
  for (int p = 0; p < g.size(); ++p)
    for (int k = 0; k < f.dim(); ++k)
      out << fmt(g.radii()[g.ring_of(p)]) << ',' << fmt(g.angles()[g.angle_of(p)]) << ',' << k
          << ',' << fmt(f(p, k).real()) << ',' << fmt(f(p, k).imag()) << '\n';
  return out.str();
}

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_report(const RunOptions& opts, const std::string& name, const json& report) {
  fs::create_directories(opts.out_dir);
  write_file(fs::path(opts.out_dir) / (name + ".json"), report.dump(2) + "\n");
}

DiscGrid grid_from(int n_radial, int n_angular) {
  try {
    return make_grid(n_radial, n_angular);
  } catch (const GridError& e) {
    throw ConfigError(e.what());
  }
}

struct Problem {
  StructureField J;
  BeltramiField A;
  DiscMap h;
  DiscMap start;
  std::optional<DiscMap> truth;
};

Problem prepare(const Config& cfg, const DiscGrid& grid) {
  const int dim = static_cast<int>(cfg.disc.coefficients.size());
  std::optional<StructureField> J;
  std::optional<BeltramiField> A;
  try {
    J.emplace(structure_zoo(cfg.structure.name, cfg.structure.params));
    A.emplace(beltrami_zoo(cfg.structure.name, cfg.structure.params));
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  if (J->dim() != dim)
    throw ConfigError("structure dimension does not match the number of disc components");

  const DiscMap w = holomorphic_polynomial(grid, cfg.disc.coefficients);
  Problem pb{*J, *A, w, w, std::nullopt};
  if (cfg.disc.kind == "pullback_preimage") {
    if (cfg.structure.name != "pullback_poly" || cfg.structure.params.empty())
      throw ConfigError("disc.kind 'pullback_preimage' needs the pullback_poly structure");
    const PolynomialDiffeo phi(cfg.structure.params[0], dim);
    DiscMap truth(grid, dim);
    for (int p = 0; p < grid.size(); ++p) truth.set(p, phi.inverse(w.at(p)));
    pb.h = apply_F(pb.A, truth);
    pb.truth = std::move(truth);
  }
  return pb;
}

NewtonConfig newton_with_seed(const Config& cfg, const RunOptions& opts) {
  NewtonConfig n = cfg.newton;
  n.holder.seed = opts.seed;
  return n;
}

json operator_json(const CorrectedOperator& op) {
  return {{"kernel_dim", op.kernel_dim()},
          {"sigma_min", op.sigma_min_uncorrected()},
          {"sigma_max", op.sigma_max()},
          {"inv_norm_estimate", op.inv_norm_estimate()},
          {"full_svd", op.used_full_svd()}};
}

json newton_json(const NewtonResult& r) {
  return {{"iterations", r.iterations}, {"residual", r.residual}, {"trace", r.trace}};
}

json config_echo(const Config& cfg, const DiscGrid& grid) {
  return {{"grid", {{"n_radial", grid.n_radial()}, {"n_angular", grid.n_angular()}}},
          {"structure", {{"name", cfg.structure.name}, {"params", cfg.structure.params}}},
          {"disc_kind", cfg.disc.kind}};
}

// The base disc for family and probe runs.
DiscSolution base_disc(const Problem& pb, const Config& cfg, const RunOptions& opts) {
  return solve_disc(pb.A, pb.h, pb.start, newton_with_seed(cfg, opts), false, cfg.correction);
}

}  // namespace

json cmd_solve(const Config& cfg, const RunOptions& opts) {
  const DiscGrid grid = grid_from(cfg.grid.n_radial, cfg.grid.n_angular);
  const Problem pb = prepare(cfg, grid);
  const DiscSolution sol = base_disc(pb, cfg, opts);

  json report = config_echo(cfg, grid);
  report["command"] = "solve";
  report["residual"] = sol.residual;
  report["newton"] = newton_json(sol.newton);
  report["correction"] = operator_json(sol.op);
  if (pb.truth) report["error_vs_truth"] = (sol.disc - *pb.truth).sup_norm();
  report["disc"] = disc_to_json(sol.disc);
  write_report(opts, "solve", report);
  if (cfg.output.csv) write_file(fs::path(opts.out_dir) / "disc.csv", disc_to_csv(sol.disc));
  return report;
}

json cmd_family(const Config& cfg, const RunOptions& opts) {
  const DiscGrid grid = grid_from(cfg.grid.n_radial, cfg.grid.n_angular);
  const Problem pb = prepare(cfg, grid);
  if (cfg.family.t_values.empty()) throw ConfigError("family.t_values: required");
  const NewtonConfig newton = newton_with_seed(cfg, opts);
  const DiscSolution sol = base_disc(pb, cfg, opts);
  const DiscMap& f = sol.disc;

  DiscMap V(grid, f.dim());
  if (cfg.field.kind == "fx") {
    V = real_partials(f).first;
  } else if (cfg.field.kind == "fy") {
    V = real_partials(f).second;
  } else {
    const DiscMap phi = cfg.field.phi_boundary.empty()
                            ? holomorphic_polynomial(grid, {cfg.field.phi_coefficients})
                            : schwarz_extend(grid, cfg.field.phi_boundary);
    V = phi_times_fprime(pb.J, f, phi);
  }
  const double var_complex = variational_residual_complex(pb.A, f, V);
  const double var_real = variational_residual_real(pb.J, f, V);
  if (var_complex > cfg.field.max_residual) {
    std::ostringstream msg;
    msg << "field is not variational along the disc: residual " << var_complex << " > "
        << cfg.field.max_residual;
    throw PreconditionError(msg.str());
  }

  const CorrectedOperator op = build_corrected(pb.A, f, cfg.family.normalized, cfg.correction);
  const DiscFamily fam = cfg.family.normalized
                             ? make_family_normalized(op, V, cfg.family.t_values, newton)
                             : make_family(op, V, cfg.family.t_values, newton);

  json samples = json::array();
  for (const auto& s : fam.samples) {
    json rec = {{"t", s.t}, {"residual", s.residual}, {"iterations", s.iterations}};
    if (fam.normalized) {
      rec["pin_value_error"] = s.pin_value_error;
      rec["pin_slope_error"] = s.pin_slope_error;
    }
    if (cfg.output.include_discs) rec["disc"] = disc_to_json(s.disc);
    samples.push_back(std::move(rec));
  }
  json report = config_echo(cfg, grid);
  report["command"] = "family";
  report["base_residual"] = sol.residual;
  report["field"] = {{"kind", cfg.field.kind},
                     {"variational_residual_complex", var_complex},
                     {"variational_residual_real", var_real}};
  report["correction"] = operator_json(op);
  report["family"] = {{"normalized", fam.normalized},
                      {"t_max", fam.t_max},
                      {"notices", fam.notices},
                      {"samples", std::move(samples)}};
  try {
    const DerivativeReport dr = check_derivative_realization(fam);
    json rows = json::array();
    for (const auto& r : dr.rows) rows.push_back({{"t", r.t}, {"defect", r.defect}});
    report["derivative"] = {{"rows", rows},
                            {"ratios", dr.ratios},
                            {"orders", dr.orders},
                            {"exact", dr.exact},
                            {"converging", dr.converging}};
  } catch (const PreconditionError& e) {
    report["derivative"] = nullptr;
    report["derivative_note"] = e.what();
  }
  if (cfg.output.include_discs) report["base_disc"] = disc_to_json(f);
  write_report(opts, "family", report);
  return report;
}

json cmd_probe(const Config& cfg, const RunOptions& opts) {
  if (!cfg.probe) throw ConfigError("probe: section required");
  const DiscGrid grid = grid_from(cfg.grid.n_radial, cfg.grid.n_angular);
  const Problem pb = prepare(cfg, grid);
  std::optional<DomainSpec> dom;
  try {
    dom.emplace(domain_zoo(cfg.probe->domain, cfg.probe->domain_params));
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  if (dom->dim != pb.J.dim()) throw ConfigError("probe: domain dimension does not match the disc");
  const DomainCheck check = check_domain(*dom, opts.seed);
  const DiscSolution sol = base_disc(pb, cfg, opts);
  const ProbeDiagnostics d = run_probe(pb.A, pb.J, *dom, sol.disc, cfg.probe->probe,
                                       newton_with_seed(cfg, opts), cfg.correction);

  json cells = json::array();
  std::ostringstream csv;
  csv << "r,t,lambda,max_rho\n";
  for (const auto& c : d.cells) {
    cells.push_back({{"r", c.r},
                     {"t", c.t},
                     {"solved", c.solved},
                     {"lambda", c.lambda},
                     {"relation_error", c.relation_error},
                     {"max_rho", c.max_rho},
                     {"contained", c.contained},
                     {"family_residual", c.family_residual},
                     {"message", c.message}});
    if (c.solved) csv << fmt(c.r) << ',' << fmt(c.t) << ',' << fmt(c.lambda) << ',' << fmt(c.max_rho) << '\n';
  }
  json report = config_echo(cfg, grid);
  report["command"] = "probe";
  report["base_residual"] = sol.residual;
  report["domain"] = {{"name", dom->name},
                      {"params", cfg.probe->domain_params},
                      {"bounded", check.bounded},
                      {"min_levi_laplacian", check.min_laplacian},
                      {"psh_consistent", check.psh_consistent}};
  report["summary"] = {{"l", d.l},
                       {"exp_phi0", d.exp_phi0},
                       {"bump_mean", d.bump_mean},
                       {"bump_lower_bound", d.l * cfg.probe->probe.plateau_R / (2.0 * std::numbers::pi)},
                       {"d_K_rho", d.d_K_rho},
                       {"K_contains_arc", d.K_contains_arc},
                       {"C1_R", d.C1_R},
                       {"C2", d.C2},
                       {"C3", d.C3},
                       {"t0_R", d.t0_R},
                       {"t1_rR", d.t1_rR},
                       {"t1_R", d.t1_R},
                       {"t2_R", d.t2_R},
                       {"t3_r", d.t3_r},
                       {"t_max", d.t_max},
                       {"recipe_satisfied", d.recipe_satisfied},
                       {"verdict", d.verdict ? "contradiction found" : "no contradiction"}};
  report["cells"] = std::move(cells);
  write_report(opts, "probe", report);
  if (cfg.output.csv) write_file(fs::path(opts.out_dir) / "probe.csv", csv.str());
  return report;
}

json cmd_converge(const Config& cfg, const RunOptions& opts) {
  if (cfg.grid.refinements.size() < 2)
    throw ConfigError("grid.refinements: need at least two grids for a convergence study");
  struct Row {
    std::string quantity;
    int nr, nt;
    double error;
  };
  std::vector<Row> rows;
  for (const auto& [nr, nt] : cfg.grid.refinements) {
    const DiscGrid grid = grid_from(nr, nt);
    const DiscMap one = DiscMap::from_scalar(grid, [](cplx) { return cplx(1.0); });
    const DiscMap t1 = cauchy_green(one);
    const DiscMap cubic = DiscMap::from_scalar(grid, [](cplx z) { return cplx(std::pow(std::abs(z), 3)); });
    const DiscMap tc = cauchy_green(cubic);
    const DiscMap ex = DiscMap::from_scalar(grid, [](cplx z) { return std::exp(z); });
    const DiscMap dex = differentiate(ex).first;
    double e1 = 0.0, ec = 0.0;
    for (int p = 0; p < grid.size(); ++p) {
      const cplx z = grid.point(p);
      e1 = std::max(e1, std::abs(t1(p, 0) - std::conj(z)));
      ec = std::max(ec, std::abs(tc(p, 0) - 0.4 * std::pow(std::abs(z), 3) * std::conj(z)));
    }
    rows.push_back({"cauchy_green_one", nr, nt, e1});
    rows.push_back({"cauchy_green_cubic", nr, nt, ec});
    rows.push_back({"derivative_exp", nr, nt, (dex - ex).sup_norm()});

    const Problem pb = prepare(cfg, grid);
    const DiscSolution sol = base_disc(pb, cfg, opts);
    if (pb.truth) rows.push_back({"solve_disc_error", nr, nt, (sol.disc - *pb.truth).sup_norm()});
    rows.push_back({"solve_disc_residual", nr, nt, sol.residual});
  }

  std::vector<std::string> quantities;
  for (const auto& r : rows)
    if (std::find(quantities.begin(), quantities.end(), r.quantity) == quantities.end())
      quantities.push_back(r.quantity);

  std::ostringstream csv;
  csv << "quantity,n_radial,n_angular,error,order\n";
  json studies = json::array();
  constexpr double roundoff = 1e-13;
  for (const auto& q : quantities) {
    std::vector<const Row*> seq;
    for (const auto& r : rows)
      if (r.quantity == q) seq.push_back(&r);
    json entries = json::array();
    for (std::size_t k = 0; k < seq.size(); ++k) {
      json order = nullptr;
      std::string order_text;
      if (k > 0 && seq[k - 1]->error > roundoff && seq[k]->error > 0.0) {
        const double o = std::log(seq[k - 1]->error / seq[k]->error) /
                         std::log(static_cast<double>(seq[k]->nr) / seq[k - 1]->nr);
        order = o;
        order_text = fmt(o);
      }
      entries.push_back({{"n_radial", seq[k]->nr},
                         {"n_angular", seq[k]->nt},
                         {"error", seq[k]->error},
                         {"order", order}});
      csv << q << ',' << seq[k]->nr << ',' << seq[k]->nt << ',' << fmt(seq[k]->error) << ','
          << order_text << '\n';
    }
    const bool at_roundoff = std::all_of(seq.begin(), seq.end(),
                                         [&](const Row* r) { return r->error <= roundoff; });
    studies.push_back({{"quantity", q}, {"entries", entries}, {"roundoff_limited", at_roundoff}});
  }
  json report = {{"command", "converge"},
                 {"structure", {{"name", cfg.structure.name}, {"params", cfg.structure.params}}},
                 {"disc_kind", cfg.disc.kind},
                 {"studies", studies}};
  write_report(opts, "converge", report);
  if (cfg.output.csv) write_file(fs::path(opts.out_dir) / "converge.csv", csv.str());
  return report;
}

}  // namespace jdisc::cli
