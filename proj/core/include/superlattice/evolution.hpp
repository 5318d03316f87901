#pragma once

#include <cstdint>
#include <optional>

#include "superlattice/lattice.hpp"
#include "superlattice/symbol.hpp"

namespace superlattice::evolution {

using lattice::LatticeField;
using symbol::SymbolSpec;

// Quadrature mesh for the Fourier inversion. The n x n nodes are
// p_k = 2 pi k / (stride * n), k in [-n/2, n/2); stride > 1 resolves the
// solution only on the sublattice stride * Z^2, which is what lets wide,
// slowly varying solutions fit in a modest transform.
struct GridPlan {
  std::int64_t n = 64;
  std::int64_t stride = 1;
};

struct GridOptions {
  std::optional<std::int64_t> n;       // fixed size; disables refinement
  std::optional<std::int64_t> stride;  // fixed sublattice spacing
  bool refine = true;                  // double n until the sup change is below refine_tol
  double refine_tol = 1e-9;
  std::int64_t max_n = 4096;
  unsigned threads = 0;
};

struct EvolutionResult {
  double t = 0.0;
  LatticeField field;             // cropped to the requested window
  double captured_mass = 0.0;     // mass of the full periodic quadrature grid
  double window_mass = 0.0;       // mass inside the returned window
  std::int64_t grid_n = 0;
  std::int64_t stride = 1;
  double refinement_error = 0.0;  // sup change of the last doubling (0 when not refined)
  double imaginary_residue = 0.0;
};

// Scale on which e^{-t lambda} is resolved: the radius where t lambda reaches 1
// along the p axis, inverted to a lattice length.
[[nodiscard]] double spread_length(const SymbolSpec& spec, double t);

// Heuristic mesh: stride keeps the region where t lambda < 36 inside the
// reduced Brillouin zone and at least 8 samples per t^{1/alpha}; n covers
// 32 spread lengths and the requested window, rounded up to a power of two.
[[nodiscard]] GridPlan plan_grid(const SymbolSpec& spec, double t, std::int64_t window_radius,
                                 std::int64_t max_n = 4096);

// u(t) for u(0) = e_{0,0} on the window [-R, R]^2.
[[nodiscard]] EvolutionResult spectral_solve_delta(const SymbolSpec& spec, double t, std::int64_t window_radius,
                                                   const GridOptions& options = {});

// u(t) for a finitely supported initial field (unit stride only).
[[nodiscard]] EvolutionResult spectral_solve_general(const SymbolSpec& spec, double t, const LatticeField& u0,
                                                     std::int64_t window_radius, const GridOptions& options = {});

struct TimeDomainOptions {
  double rel_tol = 1e-8;
  std::int64_t max_steps = 1'000'000;
  unsigned threads = 0;
};

// Dormand-Prince 5(4) integration of u' = -P L P u on the window, with P L P the
// absorbing compression of the truncated operator.
[[nodiscard]] LatticeField time_domain_solve(const lattice::Window& window, const SymbolSpec& spec, double t,
                                             const LatticeField& u0, const TimeDomainOptions& options = {});

}  // namespace superlattice::evolution
