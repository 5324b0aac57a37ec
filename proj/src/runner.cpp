#include "nccw/runner.hpp"

#include <algorithm>

#include "nccw/approx.hpp"
#include "nccw/check.hpp"
#include "nccw/discretize.hpp"
#include "nccw/puppe.hpp"

namespace nccw {

using dsl::Command;

bool RunResult::any_failed() const {
  return std::any_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.failed(); });
}

std::string graphs_dot(const std::vector<DotGraph>& graphs) {
  std::string out;
  for (const auto& g : graphs) out += to_dot(g);
  return out;
}

namespace {

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

std::string at_n(const Command& c, int n) { return c.id + "@N=" + std::to_string(n); }

fd::Morphism ndr_u(const fd::Algebra& b, const Command& c, int n) {
  const fd::Algebra grid(std::vector<int>(static_cast<std::size_t>(n) + 1, 1));
  std::vector<fd::Route> routes(static_cast<std::size_t>(b.block_count()));
  for (int blk = 0; blk < b.block_count(); ++blk) {
    if (!c.points[blk]) continue;
    const auto idx = c.points[blk]->index_on(n);
    if (!idx) throw Error("u point of block " + std::to_string(blk) + " is off the N=" + std::to_string(n) + " grid");
    for (int k = 0; k < b.block_size(blk); ++k) routes[blk].placements.push_back({*idx, k});
  }
  return fd::Morphism(grid, b, std::move(routes), "u");
}

std::vector<CheckReport> per_resolution(const Command& c, int n, const RunConfig& cfg) {
  const double tol = cfg.tol;
  const std::string id = at_n(c, n);
  disc::Discretizer d(n);
  switch (c.kind) {
    case Command::Kind::StarHom: return {check::check_star_hom(id, d.morphism(c.maps[0]), tol)};

    case Command::Kind::Pullback: {
      const check::PullbackSquare sq{d.morphism(c.maps[0]), d.morphism(c.maps[1]), d.morphism(c.maps[2]),
                                     d.morphism(c.maps[3])};
      return {check::check_pullback_universal(id, sq, c.trials, cfg.seed, Tolerances{tol})};
    }

    case Command::Kind::Pushout: {
      const check::PushoutSquare sq{d.morphism(c.maps[0]), d.morphism(c.maps[1]), d.morphism(c.maps[2]),
                                    d.morphism(c.maps[3])};
      return {check::check_pushout_universal(id, sq, c.trials, cfg.seed, Tolerances{tol})};
    }

    case Command::Kind::Ndr: {
      check::NdrData data;
      data.b = d.algebra(c.algebras[0]);
      data.ideal_blocks = c.ints;
      data.u = ndr_u(data.b, c, n);
      for (const auto& m : c.maps) data.phi.slices.push_back(d.morphism(m));
      return {check::check_ndr_pair(id, data, tol)};
    }

    case Command::Kind::Functor: {
      const fd::Morphism f = d.morphism(c.maps[0]);
      const fd::Morphism g = d.morphism(c.maps[1]);
      const fd::Morphism fg = d.morphism(expr::compose(c.maps[0], c.maps[1]));
      const double diff = max_abs(fg.dense() - f.dense() * g.dense());
      return {residual_report(id, "functoriality", diff, 1e-12, 0,
                              Json{{"statement", "D(f o g) = D(f) D(g) entrywise"}, {"dim", fg.domain().dim()}})};
    }

    case Command::Kind::Refine: {
      const expr::MorphismExpr& f = c.maps[0];
      disc::Discretizer fine(2 * n);
      const fd::Morphism rx = disc::restrict_resolution(f.domain(), n);
      const fd::Morphism ry = disc::restrict_resolution(f.codomain(), n);
      const Matrix lhs = ry.dense() * fine.morphism(f).dense();
      const Matrix rhs = d.morphism(f).dense() * rx.dense();
      const double diff = max_abs(lhs - rhs);
      const fd::Algebra& coarse = d.algebra(f.domain());
      const int rank = linalg::rank(coarse.basis().adjoint() * rx.on_basis());
      CheckReport r = residual_report(id, "refinement", diff, tol, 0,
                                      Json{{"statement", "R o D_2N(f) = D_N(f) o R"},
                                           {"rank_restriction", rank},
                                           {"dim_coarse", coarse.dim()}});
      if (rank != coarse.dim()) {
        r.status = Status::Fail;
        if (!r.witness) r.witness = Json::object();
      }
      return {r};
    }

    case Command::Kind::Discretize: {
      const fd::Algebra& a = d.algebra(c.algebras[0]);
      Json w{{"dim", a.dim()}, {"ambient_dim", a.ambient_dim()}, {"blocks", a.block_count()}};
      long closed = -1;
      try {
        closed = expr::linear_dim(c.algebras[0], n);
        w["closed_form_dim"] = closed;
      } catch (const Error& e) {
        w["closed_form_dim"] = e.what();
      }
      const double closure = a.dim() <= 120 ? disc::closure_residual(a) : 0.0;
      w["closure_checked"] = a.dim() <= 120;
      CheckReport r = residual_report(id, "discretize", closure, tol, 0, std::move(w));
      if (closed >= 0 && closed != a.dim()) r.status = Status::Fail;
      return {r};
    }

    case Command::Kind::PuppeChain:
      return puppe::chain_certificates(id, puppe::puppe_chain(c.maps[0], c.ints[0]), n, tol);

    case Command::Kind::PuppeCylinder: return puppe::cyl_retraction(id, c.maps[0], n, tol).reports;

    case Command::Kind::PuppeSplit: return puppe::cone_split_equivalence(id, c.algebras[0], c.ints, n, tol).reports;

    case Command::Kind::Approx: {
      const fd::Morphism f = d.morphism(c.maps[0]);
      return cw::cellular_approximate(id, c.complexes[0], c.complexes[1], f, n, tol).reports;
    }

    default: return {};
  }
}

bool whole_run(Command::Kind k) {
  return k == Command::Kind::Complex || k == Command::Kind::Mapping || k == Command::Kind::EmitComplex ||
         k == Command::Kind::EmitChain;
}

std::vector<CheckReport> execute(const Command& c, int n, const RunConfig& cfg) {
  try {
    if (c.kind == Command::Kind::Complex) return cw::validate_complex(c.complexes[0], cfg.resolutions, Tolerances{cfg.tol});
    if (c.kind == Command::Kind::Mapping)
      return cw::validate_mapping_constructions(c.id, c.maps[0], cfg.resolutions, Tolerances{cfg.tol});
    if (whole_run(c.kind)) return {};
    return per_resolution(c, n, cfg);
  } catch (const std::exception& e) {
    return {fail_report(n > 0 ? at_n(c, n) : c.id, "error",
                        Json{{"error", e.what()}, {"line", c.loc.line}, {"column", c.loc.column}})};
  }
}

}  // namespace

RunResult run(const dsl::Script& script, const RunConfig& config) {
  for (int n : config.resolutions)
    if (n < 1) throw Error("resolution must be positive, got " + std::to_string(n));

  struct Task {
    std::size_t command;
    int n;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < script.commands.size(); ++i) {
    if (whole_run(script.commands[i].kind)) {
      tasks.push_back({i, 0});
      continue;
    }
    for (int n : config.resolutions) tasks.push_back({i, n});
  }

  std::vector<std::vector<CheckReport>> slots(tasks.size());
#pragma omp parallel for schedule(dynamic)
  for (long t = 0; t < static_cast<long>(tasks.size()); ++t)
    slots[t] = execute(script.commands[tasks[t].command], tasks[t].n, config);

  RunResult out;
  for (auto& s : slots)
    for (auto& r : s) out.reports.push_back(std::move(r));

  for (const auto& c : script.commands) {
    if (c.kind == Command::Kind::EmitComplex) out.graphs.push_back(cw::complex_dot(c.complexes[0]));
    if (c.kind == Command::Kind::EmitChain) {
      try {
        out.graphs.push_back(puppe::chain_dot(puppe::puppe_chain(c.maps[0], c.ints[0])));
      } catch (const std::exception& e) {
        out.reports.push_back(fail_report(c.id, "error", Json{{"error", e.what()}}));
      }
    }
  }
  return out;
}

}  // namespace nccw
