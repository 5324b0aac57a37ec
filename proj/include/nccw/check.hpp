#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nccw/fdalg.hpp"
#include "nccw/report.hpp"

// Verification engine. Every check returns a CheckReport; failures carry a
// witness (counterexample data), passes may carry a certificate.

namespace nccw::check {

/// Max over basis pairs of ||f(e_i e_j) - f(e_i) f(e_j)|| and over basis
/// elements of ||f(e_i*) - f(e_i)*||.
CheckReport check_star_hom(const std::string& id, const fd::Morphism& f, double tol = 1e-9);

/// Largest entrywise difference of two maps on the domain basis.
double map_distance(const fd::Morphism& a, const fd::Morphism& b);

//   X --gamma--> B
//   |delta       |beta
//   A --alpha--> C
struct PullbackSquare {
  fd::Morphism gamma;
  fd::Morphism delta;
  fd::Morphism alpha;
  fd::Morphism beta;
};

/// Kernel intersection of (gamma, delta) and, for `trials` random test cones
/// (Y, phi, psi) built by composing random *-homs tau: Y -> X with the legs,
/// existence and uniqueness of the mediating sigma with delta∘sigma = phi,
/// gamma∘sigma = psi.
CheckReport check_pullback_universal(const std::string& id, const PullbackSquare& sq, int trials,
                                     std::uint64_t seed, const Tolerances& tol = {});

//   C --beta--> B
//   |alpha      |gamma
//   A --delta-> X
struct PushoutSquare {
  fd::Morphism alpha;
  fd::Morphism beta;
  fd::Morphism gamma;
  fd::Morphism delta;
};

/// X generated by gamma(B) ∪ delta(A), and for random co-cones tau: X -> Y
/// the unique sigma determined on generators satisfies sigma∘delta = tau∘delta,
/// sigma∘gamma = tau∘gamma.
CheckReport check_pushout_universal(const std::string& id, const PushoutSquare& sq, int trials,
                                    std::uint64_t seed, const Tolerances& tol = {});

/// 0 -> K --i--> E --q--> Q -> 0: i injective, q surjective, q∘i = 0 and
/// dim K + dim Q = dim E (exact integers).
CheckReport check_exact_row(const std::string& id, const fd::Morphism& i, const fd::Morphism& q,
                            const Tolerances& tol = {});

/// A homotopy A -> C(I) (x) B stored as its time slices ev(k/T)∘Phi,
/// k = 0..T.
struct Homotopy {
  std::vector<fd::Morphism> slices;

  int steps() const { return static_cast<int>(slices.size()) - 1; }
  const fd::Morphism& start() const { return slices.front(); }
  const fd::Morphism& end() const { return slices.back(); }
};

Homotopy constant_homotopy(const fd::Morphism& f, int steps);
/// Splits Phi: A -> disc(C(I) (x) B) into slices; `b` is the slice codomain.
Homotopy homotopy_from_map(const fd::Morphism& phi, const fd::Algebra& b);
/// Reassembles slices into one map A -> (T+1) copies of B.
fd::Morphism homotopy_to_map(const Homotopy& h);
/// Concatenation: h runs first, then k (h.end() must equal k.start()).
Homotopy concatenate(const Homotopy& h, const Homotopy& k);

CheckReport check_homotopy(const std::string& id, const Homotopy& h, const fd::Morphism& phi,
                           const fd::Morphism& psi, double tol = 1e-9);

/// NDR data for a block ideal A of an unconstrained block algebra B.
struct NdrData {
  fd::Algebra b;
  std::vector<int> ideal_blocks;
  fd::Morphism u;  // disc(C[0,1]) -> B
  Homotopy phi;    // slices B -> B
};

/// Conditions read on the time slices h_t = ev(t)∘phi:
///   (1) the ideal generated by u's image meets A trivially;
///   (2) h_0 = id_B;
///   (3) h_t fixes A for every grid t;
///   (4) h_1 maps the u-detected blocks (u(1) not the block unit) into A.
/// Throws Error when A is not a block ideal of B.
CheckReport check_ndr_pair(const std::string& id, const NdrData& d, double tol = 1e-9);

struct HepSolution {
  Homotopy extension;
  CheckReport report;
};

/// Given f: C -> B and phi_t: C -> A (slices into the ideal blocks) with
/// phi_0 = E∘f, returns h_t = (1 - E)∘ev(t)∘phi_ndr∘f + phi_t, where E is the
/// block projection onto A. Skips when the NDR check fails.
HepSolution solve_hep(const std::string& id, const fd::Morphism& f, const Homotopy& phi_t, const NdrData& ndr,
                      double tol = 1e-9);

/// Block projection of an unconstrained B onto the listed blocks.
fd::Morphism block_projection(const fd::Algebra& b, const std::vector<int>& blocks);

/// Sum of two maps with the same domain and codomain (dense).
fd::Morphism add_maps(const fd::Morphism& a, const fd::Morphism& b);

/// Ambient vector as [[re, im], ...] for witnesses.
Json vector_json(const Vector& v, double drop_below = 1e-12);

}  // namespace nccw::check
