#pragma once

// Entanglement and teleportation-fidelity functionals for two- and
// three-qubit states.

#include <array>

#include "ctpower/optimize.hpp"
#include "ctpower/states.hpp"

namespace ctpower {

/// 3x3 real matrix of Pauli expectations T(m, n) = tr(rho sigma_m (x) sigma_n),
/// m, n in {x, y, z} stored 0-based.
struct CorrelationMatrix {
  std::array<std::array<double, 3>, 3> t{};

  double operator()(int m, int n) const { return t[m][n]; }
  CMatrix to_cmatrix() const;
  double trace_norm() const;
  double determinant() const;
};

/// Wootters concurrence of a two-qubit state, in [0, 1].
double concurrence(const DensityMatrix& rho);

/// C^2_{j(kl)} = 4 det(rho_j) for a three-qubit pure state.
double one_side_tangle(const PureState& psi, int j);

struct ThreeTangleParts {
  std::array<double, 3> by_focus{};  // C^2_{j(kl)} - C^2_{jk} - C^2_{jl} for j = 1, 2, 3
  double value = 0.0;                // mean of by_focus
  double spread = 0.0;               // max - min of by_focus
};

/// Computes the residual tangle for all three focus qubits. Does not throw on
/// disagreement; three_tangle() does.
ThreeTangleParts three_tangle_parts(const PureState& psi);

/// Three-tangle; throws std::logic_error if the three focus choices disagree
/// by more than 1e-8.
double three_tangle(const PureState& psi);

struct PartialTangleForms {
  double via_one_side = 0.0;  // sqrt(C^2_{j(kl)} - C^2_{jl})
  double via_tangle = 0.0;    // sqrt(tau + C^2_{jk})
};

PartialTangleForms partial_tangle_forms(const PureState& psi, int j, int k);

/// tau_{jk}; asserts (std::logic_error) that both forms agree within 1e-8.
double partial_tangle(const PureState& psi, int j, int k);

CorrelationMatrix correlation_matrix(const DensityMatrix& rho);

/// (3 + ||T||_1) / 6.
double fidelity_from_T(const DensityMatrix& rho);

/// Fully entangled fraction via the largest eigenvalue of Re(rho) in the magic basis.
double fully_entangled_fraction(const DensityMatrix& rho);

/// Direct maximisation of <e|rho|e> over |e> = (I (x) W)|Phi+>, W in SU(2).
double fully_entangled_fraction_numeric(const DensityMatrix& rho,
                                        const AngleSearchOptions& opts = {});

/// (2 f + 1) / 3; throws std::domain_error unless f is in [0, 1].
double fidelity_from_f(double f);

/// Columns are the magic basis vectors.
const CMatrix& magic_basis();

}  // namespace ctpower
