#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nccw/check.hpp"
#include "nccw/nccw.hpp"

// Homotopy extension over one attached cell, and the cellular approximation
// driver built on it. Everything works on routed maps, so every time slice is
// a block-copying *-homomorphism and compositions stay exact.

namespace nccw::cw {

/// Routes of one map into B_j, indexed by the ambient blocks of B_j.
using Slice = std::vector<fd::Route>;

/// Nearest cube boundary point of a grid point: the coordinate closest to
/// the boundary is pushed to 0 or N (0 on ties, lowest coordinate first).
std::vector<int> nearest_boundary(const std::vector<int>& point, int n);
/// Chebyshev distance to the cube boundary.
int boundary_distance(const std::vector<int>& point, int n);

bool same_route(const fd::Route& a, const fd::Route& b);

/// Extends a homotopy of maps into B_{j-1} (one Slice per time step) to
/// maps into B_j = I^k F (+) B_{j-1}: boundary points follow sigma_j, interior
/// points keep `initial` until the boundary change reaches them along the
/// grid ray to their nearest boundary point, one grid step per time step.
std::vector<Slice> extend_over_cell(const Layout& b, int j, const Slice& initial, const std::vector<Slice>& lower);

struct ExtensionResult {
  check::Homotopy family;           // F_t: D -> B_j
  std::vector<CheckReport> reports;  // precondition, f1..f4, final triangle
};

/// Relative homotopy extension into B_j = top stage `j` of layout `b`.
/// `initial`: D -> B_j routed; `lower`: homotopy D -> B_{j-1} starting at
/// pi∘initial. Steps: f1 boundary homotopy sigma_j∘lower_t on the sides,
/// f2 gluing with the bottom face (rim check), f3 per-face change detection,
/// f4 reparametrization along grid rays; F(t, x) is the t-slice of f4.
/// When `ndr` is absent the trivial pair (D, D) is used.
ExtensionResult extend_relative(const std::string& id, const Layout& b, int j, const fd::Morphism& initial,
                                const check::Homotopy& lower, const std::optional<check::NdrData>& ndr = std::nullopt,
                                double tol = 1e-9);

struct CellularMap {
  fd::Morphism h;                      // ev(1)∘g
  check::Homotopy g;                   // f ~ h
  std::vector<check::Homotopy> tower;  // g_p = pi_{B,p}∘g per stage of Y
  std::vector<int> segment_ends;       // time index where segment p ends
  std::vector<CheckReport> reports;    // endpoints, properties 1-4, h = ev(1)∘g
};

/// Cellular approximation of a routed f: top(X) -> top(Y) at resolution n.
/// Throws Error when a cell has dimension above 2.
CellularMap cellular_approximate(const std::string& id, const Complex& x, const Complex& y, const fd::Morphism& f,
                                 int n, double tol = 1e-9);

}  // namespace nccw::cw
