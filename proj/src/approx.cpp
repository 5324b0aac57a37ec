#include "nccw/approx.hpp"

#include <algorithm>

#include "nccw/kernels.hpp"

namespace nccw::cw {

namespace {

// Ambient blocks of stage j of Y whose routes segment j may move: the blocks
// of A_0 on the base stage, the interior cube points otherwise.
std::vector<int> movable_blocks(const Layout& b, int j) {
  std::vector<int> out;
  if (b.dims[j] == 0) {
    for (int c = 0; c < b.fblocks[0]; ++c) out.push_back(b.block_index(0, -1, c));
    return out;
  }
  for (std::size_t p = 0; p < b.cube_points[j].size(); ++p) {
    const int first = b.block_index(j, static_cast<int>(p), 0);
    if (b.blocks[first].boundary) continue;
    for (int c = 0; c < b.fblocks[j]; ++c) out.push_back(first + c);
  }
  return out;
}

bool needs_move(const Layout& a, int source, int q) {
  const auto& info = a.blocks[source];
  return info.stage > 0 && a.dims[info.stage] > q;
}

// One step of segment q on the sources of X: interior points of cells of
// dimension > q walk one grid step towards their nearest boundary point;
// boundary points are replaced through the attaching map.
std::vector<fd::Route> step_routes(const Layout& a, int q) {
  const int total = a.top().block_count();
  std::vector<fd::Route> s(total);
  for (int blk = 0; blk < total; ++blk) {
    s[blk] = {{{blk, 0}}, std::nullopt};
    if (!needs_move(a, blk, q)) continue;
    const auto& info = a.blocks[blk];
    const int i = info.stage;
    const auto& pt = a.cube_points[i][info.point];
    if (!info.boundary) {
      std::vector<int> next = pt;
      const auto target = nearest_boundary(pt, a.n);
      for (std::size_t c = 0; c < pt.size(); ++c)
        if (target[c] != pt[c]) next[c] += target[c] < pt[c] ? -1 : 1;
      const int np = static_cast<int>(std::find(a.cube_points[i].begin(), a.cube_points[i].end(), next) -
                                      a.cube_points[i].begin());
      s[blk] = {{{a.block_index(i, np, info.fblock), 0}}, std::nullopt};
      continue;
    }
    const auto& sph = a.sphere_points[i];
    const int sp = static_cast<int>(std::find(sph.begin(), sph.end(), pt) - sph.begin());
    fd::Route r = a.sigma[i].routes()[sp * a.fblocks[i] + info.fblock];
    for (auto& pl : r.placements) pl.source += a.stage_offset[i - 1];
    s[blk] = std::move(r);
  }
  return s;
}

Slice prefix(const Slice& top, const Layout& b, int j) {
  return Slice(top.begin() + b.stage_offset[j], top.end());
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

CellularMap cellular_approximate(const std::string& id, const Complex& x, const Complex& y, const fd::Morphism& f,
                                 int n, double tol) {
  for (const auto* c : {&x, &y})
    for (const auto& st : c->stages())
      if (st.dim > kMaxCellDim)
        throw Error("cell " + st.name + " has dimension " + std::to_string(st.dim) +
                    "; the approximation driver stops at dimension 2, use symbolic-only commands beyond that");
  if (!f.routed()) throw Error("cellular approximation needs a structural map");

  const Layout a = make_layout(x, n);
  const Layout b = make_layout(y, n);
  if (f.domain().ambient_dim() != a.top().ambient_dim() || f.codomain().ambient_dim() != b.top().ambient_dim())
    throw Error("map does not match the complexes at N=" + std::to_string(n));
  const fd::Algebra& dom = a.top();
  const fd::Algebra& cod = b.top();
  const int stages = b.stage_count();

  CellularMap out;
  Slice current = f.routes();
  std::vector<Slice> history{current};
  std::vector<bool> cellular_before(stages, true);

  for (int j = 0; j < stages; ++j) {
    const int q = b.dims[j];
    const auto movable = movable_blocks(b, j);
    for (int blk : movable)
      for (const auto& pl : current[blk].placements)
        if (needs_move(a, pl.source, q))
          for (int p = j; p < stages; ++p) cellular_before[p] = false;

    // Walk the stage-j routes, recording maps into B_j.
    std::vector<Slice> lower{prefix(current, b, j)};
    const auto step = step_routes(a, q);
    for (int guard = 0; guard < 100000; ++guard) {
      bool moving = false;
      for (int blk : movable)
        for (const auto& pl : current[blk].placements) moving |= needs_move(a, pl.source, q);
      if (!moving) break;
      for (int blk : movable)
        current[blk] = fd::compose_route(current[blk], step, dom, cod.block_size(blk));
      lower.push_back(prefix(current, b, j));
    }
    if (lower.size() > 1) {
      // Carry the motion up through the higher cells of Y.
      for (int k = j + 1; k < stages; ++k) lower = extend_over_cell(b, k, prefix(history.back(), b, k), lower);
      history.insert(history.end(), lower.begin() + 1, lower.end());
      current = history.back();
    }
    out.segment_ends.push_back(static_cast<int>(history.size()) - 1);
  }

  for (std::size_t t = 0; t < history.size(); ++t)
    out.g.slices.emplace_back(dom, cod, history[t], "g@" + std::to_string(t));
  out.h = out.g.end().with_provenance("h");
  for (int p = 0; p < stages; ++p) {
    check::Homotopy gp;
    const fd::Morphism proj = b.project_to(p);
    for (const auto& s : out.g.slices) gp.slices.push_back(fd::compose(proj, s));
    out.tower.push_back(std::move(gp));
  }

  // Endpoints and slices of g.
  out.reports.push_back(check::check_homotopy(id + "/homotopy", out.g, f, out.h, tol));

  // Property 1: ev(0)∘g_p = pi_{B,p}∘f.
  double p1 = 0.0;
  for (int p = 0; p < stages; ++p)
    p1 = std::max(p1, check::map_distance(out.tower[p].start(), fd::compose(b.project_to(p), f)));
  out.reports.push_back(residual_report(id + "/property1", "cellular", p1, tol, 0,
                                        Json{{"statement", "ev(0) o g_p = pi_p o f"}}));

  // Property 2: slices are *-homs, and g_p is constant when f was already
  // cellular up to stage p.
  double p2 = 0.0;
  Json constant = Json::array();
  for (int p = 0; p < stages; ++p) {
    for (const auto& s : out.tower[p].slices) p2 = std::max(p2, kernels::star_hom_residual_parallel(s).max_residual);
    if (!cellular_before[p]) continue;
    double drift = 0.0;
    for (const auto& s : out.tower[p].slices) drift = std::max(drift, check::map_distance(s, out.tower[p].start()));
    p2 = std::max(p2, drift);
    constant.push_back(p);
  }
  out.reports.push_back(residual_report(id + "/property2", "cellular", p2, tol, 0,
                                        Json{{"statement", "slices are *-homs; g_p constant where f is cellular"},
                                             {"constant_stages", constant}}));

  // Property 3: pi_{p-1}∘g_p = g_{p-1}, and g_{p-1} stays put once its
  // segment has ended.
  double p3 = 0.0;
  for (int p = 1; p < stages; ++p) {
    std::vector<fd::Route> routes;
    const int shift = b.stage_offset[p - 1] - b.stage_offset[p];
    for (int blk = 0; blk < b.algebras[p - 1].block_count(); ++blk) routes.push_back({{{shift + blk, 0}}, std::nullopt});
    const fd::Morphism down(b.algebras[p], b.algebras[p - 1], routes, "pi");
    const auto& lo = out.tower[p - 1].slices;
    const auto& hi = out.tower[p].slices;
    for (std::size_t t = 0; t < hi.size(); ++t) p3 = std::max(p3, check::map_distance(fd::compose(down, hi[t]), lo[t]));
    for (std::size_t t = static_cast<std::size_t>(out.segment_ends[p - 1]); t < lo.size(); ++t)
      p3 = std::max(p3, check::map_distance(lo[t], lo[out.segment_ends[p - 1]]));
  }
  out.reports.push_back(residual_report(id + "/property3", "cellular", p3, tol, 0,
                                        Json{{"statement", "pi o g_p = g_(p-1), frozen after its segment"}}));

  // Property 4: pi_{B,p}∘h kills ker(A -> A_p), where A_p is the largest
  // stage of X whose cells have dimension <= dim of stage p of Y.
  double p4 = 0.0;
  Json ranks = Json::array();
  for (int p = 0; p + 1 < stages; ++p) {
    int ap = 0;
    for (int i = 0; i < a.stage_count(); ++i)
      if (a.dims[i] <= b.dims[p]) ap = i;
    const Matrix basis = dom.basis();
    const Matrix kernel = basis * linalg::null_space(a.project_to(ap).dense() * basis);
    const Matrix image = fd::compose(b.project_to(p), out.h).dense() * kernel;
    const int r = linalg::rank(image);
    ranks.push_back(Json{{"stage", p}, {"source_stage", ap}, {"kernel_dim", kernel.cols()}, {"rank", r}});
    p4 = std::max(p4, max_abs(image));
  }
  CheckReport r4 = residual_report(id + "/property4", "cellular", p4, tol, 0,
                                   Json{{"statement", "pi_p o h vanishes on ker(A -> A_p)"}, {"ranks", ranks}});
  for (const auto& rk : ranks)
    if (rk["rank"].get<int>() != 0) r4.status = Status::Fail;
  out.reports.push_back(std::move(r4));

  out.reports.push_back(residual_report(id + "/h_is_end", "cellular", check::map_distance(out.h, out.g.end()), tol, 0,
                                        Json{{"statement", "h = ev(1) o g"}, {"steps", out.g.steps()}}));
  return out;
}

}  // namespace nccw::cw
