#include "nccw/approx.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "nccw/kernels.hpp"

namespace nccw::cw {

std::vector<int> nearest_boundary(const std::vector<int>& point, int n) {
  std::vector<int> y = point;
  int best = 0;
  int best_dist = std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < point.size(); ++i) {
    const int d = std::min(point[i], n - point[i]);
    if (d < best_dist) best_dist = d, best = static_cast<int>(i);
  }
  if (!y.empty()) y[best] = point[best] <= n - point[best] ? 0 : n;
  return y;
}

int boundary_distance(const std::vector<int>& point, int n) {
  int d = std::numeric_limits<int>::max();
  for (int v : point) d = std::min(d, std::min(v, n - v));
  return point.empty() ? 0 : d;
}

bool same_route(const fd::Route& a, const fd::Route& b) {
  if (!(a.placements == b.placements)) return false;
  if (a.unitary.has_value() != b.unitary.has_value()) return false;
  if (!a.unitary) return true;
  return a.unitary->rows() == b.unitary->rows() && (*a.unitary - *b.unitary).cwiseAbs().maxCoeff() <= 1e-14;
}

namespace {

int find_point(const std::vector<std::vector<int>>& pts, const std::vector<int>& p) {
  auto it = std::find(pts.begin(), pts.end(), p);
  return it == pts.end() ? -1 : static_cast<int>(it - pts.begin());
}

// Sphere block index of each cube boundary point (-1 for interior points).
std::vector<int> sphere_index(const Layout& b, int j) {
  std::vector<int> out;
  for (const auto& p : b.cube_points[j]) {
    bool bnd = false;
    for (int v : p) bnd |= (v == 0 || v == b.n);
    out.push_back(bnd ? find_point(b.sphere_points[j], p) : -1);
  }
  return out;
}

}  // namespace

std::vector<Slice> extend_over_cell(const Layout& b, int j, const Slice& initial, const std::vector<Slice>& lower) {
  const fd::Algebra& bj = b.algebras[j];
  const fd::Algebra& below = b.algebras[j - 1];
  const fd::Morphism& sigma = b.sigma[j];
  if (!sigma.routed()) throw Error("extension needs a structural attaching map");
  const int nf = b.fblocks[j];
  const auto& pts = b.cube_points[j];
  const int cell_blocks = static_cast<int>(pts.size()) * nf;
  const auto sph = sphere_index(b, j);
  const int steps = static_cast<int>(lower.size());

  // Boundary routes over time and the first time each one changes.
  std::vector<std::vector<fd::Route>> bnd(static_cast<std::size_t>(steps), std::vector<fd::Route>(cell_blocks));
  std::vector<int> first_change(cell_blocks, std::numeric_limits<int>::max());
  for (int t = 0; t < steps; ++t) {
    for (std::size_t p = 0; p < pts.size(); ++p) {
      if (sph[p] < 0) continue;
      for (int c = 0; c < nf; ++c) {
        const int blk = static_cast<int>(p) * nf + c;
        bnd[t][blk] = fd::compose_route(sigma.routes()[sph[p] * nf + c], lower[t], below, bj.block_size(blk));
        if (t > 0 && first_change[blk] == std::numeric_limits<int>::max() && !same_route(bnd[t][blk], bnd[0][blk]))
          first_change[blk] = t;
      }
    }
  }

  std::vector<Slice> out;
  for (int t = 0; t < steps; ++t) {
    Slice s(cell_blocks);
    for (std::size_t p = 0; p < pts.size(); ++p) {
      if (sph[p] >= 0) {
        for (int c = 0; c < nf; ++c) s[p * nf + c] = bnd[t][p * nf + c];
        continue;
      }
      const int d = boundary_distance(pts[p], b.n);
      const int y = find_point(pts, nearest_boundary(pts[p], b.n));
      for (int c = 0; c < nf; ++c) {
        const int src_time = t - d;
        const int yb = y * nf + c;
        s[p * nf + c] = src_time < first_change[yb] ? initial[p * nf + c] : bnd[src_time][yb];
      }
    }
    s.insert(s.end(), lower[t].begin(), lower[t].end());
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

check::NdrData trivial_ndr(const fd::Algebra& d, int n) {
  check::NdrData data;
  data.b = d.ambient();
  for (int blk = 0; blk < data.b.block_count(); ++blk) data.ideal_blocks.push_back(blk);
  data.u = fd::zero_map(fd::Algebra(std::vector<int>(static_cast<std::size_t>(n) + 1, 1)), data.b);
  data.phi = check::constant_homotopy(fd::identity(data.b), 1);
  return data;
}

std::string face_name(const std::vector<int>& p, int n) {
  std::string s;
  const char* axis[] = {"x", "y", "z"};
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0 || p[i] == n) {
      if (!s.empty()) s += ",";
      s += std::string(axis[std::min<std::size_t>(i, 2)]) + (p[i] == 0 ? "=0" : "=1");
    }
  }
  return s;
}

}  // namespace

ExtensionResult extend_relative(const std::string& id, const Layout& b, int j, const fd::Morphism& initial,
                                const check::Homotopy& lower, const std::optional<check::NdrData>& ndr, double tol) {
  ExtensionResult out;
  if (j < 1 || j >= b.stage_count()) throw Error("extension stage out of range");
  if (!initial.routed()) throw Error("extension needs a structural initial map");
  for (const auto& s : lower.slices)
    if (!s.routed()) throw Error("extension needs a structural lower homotopy");

  const fd::Algebra& d = initial.domain();
  const check::NdrData data = ndr ? *ndr : trivial_ndr(d, b.n);
  CheckReport pre = check::check_ndr_pair(id + "/ndr", data, tol);
  if (!pre.passed()) {
    out.reports.push_back(skip_report(id, "extension", "NDR precondition unmet", pre.max_residual));
    out.reports.push_back(std::move(pre));
    return out;
  }
  out.reports.push_back(std::move(pre));

  const fd::Algebra& bj = b.algebras[j];
  const fd::Algebra& below = b.algebras[j - 1];
  const fd::Morphism& sigma = b.sigma[j];
  const int nf = b.fblocks[j];
  const auto& pts = b.cube_points[j];
  const int cell_blocks = static_cast<int>(pts.size()) * nf;

  std::vector<Slice> lower_routes;
  for (const auto& s : lower.slices) lower_routes.push_back(s.routes());
  const auto slices = extend_over_cell(b, j, initial.routes(), lower_routes);
  for (std::size_t t = 0; t < slices.size(); ++t)
    out.family.slices.emplace_back(d, bj, slices[t], "F@" + std::to_string(t));

  // f1: the sides sigma_j∘lower_t.
  double f1 = 0.0;
  std::vector<fd::Morphism> sides;
  for (const auto& s : lower.slices) {
    sides.push_back(fd::compose(sigma, s));
    f1 = std::max(f1, kernels::star_hom_residual_parallel(sides.back()).max_residual);
  }
  out.reports.push_back(residual_report(id + "/f1_sides", "extension_step", f1, tol, 0,
                                        Json{{"step", "boundary homotopy sigma o lower_t"}, {"slices", sides.size()}}));

  // f2: the bottom face glued to the sides along the rim.
  const auto sph = sphere_index(b, j);
  std::vector<fd::Route> rim_routes(static_cast<std::size_t>(sigma.codomain().block_count()));
  for (std::size_t p = 0; p < pts.size(); ++p)
    if (sph[p] >= 0)
      for (int c = 0; c < nf; ++c) rim_routes[sph[p] * nf + c] = initial.routes()[p * nf + c];
  const fd::Morphism rim(d, sigma.codomain(), rim_routes, "boundary o f");
  const double f2 = sides.empty() ? 0.0 : check::map_distance(rim, sides.front());
  out.reports.push_back(
      residual_report(id + "/f2_rim", "extension_step", f2, tol, 0, Json{{"step", "bottom face meets the sides"}}));

  // f3: which boundary faces move.
  std::map<std::string, int> moved;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    if (sph[p] < 0) continue;
    for (int c = 0; c < nf; ++c)
      for (std::size_t t = 1; t < slices.size(); ++t)
        if (!same_route(slices[t][p * nf + c], slices[0][p * nf + c])) {
          ++moved[face_name(pts[p], b.n)];
          break;
        }
  }
  Json faces = Json::object();
  for (const auto& [face, count] : moved) faces[face] = count;
  out.reports.push_back(residual_report(id + "/f3_faces", "extension_step", 0.0, tol, 0,
                                        Json{{"step", "per-face change detection"}, {"moved_blocks", faces}}));

  // f4: the reparametrized family, its slices and its start.
  if (out.family.slices.empty()) {
    out.reports.push_back(fail_report(id + "/f4_rays", "extension_step", Json{{"reason", "empty lower homotopy"}}));
    return out;
  }
  CheckReport f4 = check::check_homotopy(id + "/f4_rays", out.family, initial, out.family.end(), tol);
  f4.kind = "extension_step";
  out.reports.push_back(std::move(f4));

  // The triangle: pi∘F_t = lower_t.
  std::vector<fd::Route> pi_routes;
  for (int blk = 0; blk < below.block_count(); ++blk) pi_routes.push_back({{{cell_blocks + blk, 0}}, std::nullopt});
  const fd::Morphism pi(bj, below, pi_routes, "pi");
  double tri = 0.0;
  for (std::size_t t = 0; t < slices.size(); ++t)
    tri = std::max(tri, check::map_distance(fd::compose(pi, out.family.slices[t]), lower.slices[t]));
  out.reports.push_back(residual_report(id + "/triangle", "extension", tri, tol, 0,
                                        Json{{"statement", "pi o F_t = lower_t and F_0 = f"}}));
  return out;
}

}  // namespace nccw::cw
