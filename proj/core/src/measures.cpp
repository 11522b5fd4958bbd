#include "ctpower/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ctpower {

namespace {

void require_two_qubits(const DensityMatrix& rho, const char* who) {
  if (rho.dim() != 4) throw InvalidDensityMatrix(std::string(who) + ": expected a two-qubit state");
}

void require_three_qubits(const PureState& psi, const char* who) {
  if (psi.n_qubits() != 3) throw std::invalid_argument(std::string(who) + ": expected three qubits");
}

void require_index(int q, const char* who) {
  if (q < 1 || q > 3) throw std::invalid_argument(std::string(who) + ": qubit index must be 1..3");
}

int third_of(int j, int k) { return 6 - j - k; }

// rho = A A^dagger. Eigenvalues at round-off level are dropped so that exact
// rank deficiency survives the square roots.
CMatrix density_factor(const DensityMatrix& rho) {
  if (rho.factor()) return *rho.factor();
  const auto eig = hermitian_eigs(rho.matrix());
  std::size_t rank = 0;
  while (rank < eig.values.size() && eig.values[rank] > 1e-14) ++rank;
  CMatrix a(rho.dim(), std::max<std::size_t>(rank, 1));
  for (std::size_t c = 0; c < rank; ++c) {
    const double s = std::sqrt(eig.values[c]);
    for (std::size_t r = 0; r < rho.dim(); ++r) a(r, c) = s * eig.vectors(r, c);
  }
  return a;
}

double pair_concurrence_sq(const PureState& psi, int a, int b) {
  const double c = concurrence(psi.reduced({std::min(a, b), std::max(a, b)}));
  return c * c;
}

}  // namespace

CMatrix CorrelationMatrix::to_cmatrix() const {
  CMatrix m(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = t[i][j];
  return m;
}

double CorrelationMatrix::trace_norm() const { return ctpower::trace_norm(to_cmatrix()); }

double CorrelationMatrix::determinant() const {
  return t[0][0] * (t[1][1] * t[2][2] - t[1][2] * t[2][1]) -
         t[0][1] * (t[1][0] * t[2][2] - t[1][2] * t[2][0]) +
         t[0][2] * (t[1][0] * t[2][1] - t[1][1] * t[2][0]);
}

double concurrence(const DensityMatrix& rho) {
  require_two_qubits(rho, "concurrence");
  // The spin-flip spectrum sqrt(eig(rho rho~)) equals the singular values of
  // A^T (sy (x) sy) A for any factor rho = A A^dagger.
  const CMatrix a = density_factor(rho);
  CMatrix yy(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  auto lambda = singular_values(a.transpose() * yy * a);
  lambda.resize(4, 0.0);
  return std::clamp(lambda[0] - lambda[1] - lambda[2] - lambda[3], 0.0, 1.0);
}

double one_side_tangle(const PureState& psi, int j) {
  require_three_qubits(psi, "one_side_tangle");
  require_index(j, "one_side_tangle");
  const CMatrix r = psi.reduced({j}).matrix();
  const double det = (r(0, 0) * r(1, 1) - r(0, 1) * r(1, 0)).real();
  return std::clamp(4.0 * det, 0.0, 1.0);
}

ThreeTangleParts three_tangle_parts(const PureState& psi) {
  require_three_qubits(psi, "three_tangle");
  const double c12 = pair_concurrence_sq(psi, 1, 2);
  const double c13 = pair_concurrence_sq(psi, 1, 3);
  const double c23 = pair_concurrence_sq(psi, 2, 3);
  ThreeTangleParts parts;
  parts.by_focus = {one_side_tangle(psi, 1) - c12 - c13, one_side_tangle(psi, 2) - c12 - c23,
                    one_side_tangle(psi, 3) - c13 - c23};
  const auto [lo, hi] = std::minmax_element(parts.by_focus.begin(), parts.by_focus.end());
  parts.spread = *hi - *lo;
  parts.value = (parts.by_focus[0] + parts.by_focus[1] + parts.by_focus[2]) / 3.0;
  return parts;
}

double three_tangle(const PureState& psi) {
  const auto parts = three_tangle_parts(psi);
  if (parts.spread > 1e-8)
    throw std::logic_error("three_tangle: focus-qubit choices disagree by " +
                           std::to_string(parts.spread));
  return parts.value;
}

PartialTangleForms partial_tangle_forms(const PureState& psi, int j, int k) {
  require_three_qubits(psi, "partial_tangle");
  require_index(j, "partial_tangle");
  require_index(k, "partial_tangle");
  if (j == k) throw std::invalid_argument("partial_tangle: j and k must differ");
  const int l = third_of(j, k);
  const double first = one_side_tangle(psi, j) - pair_concurrence_sq(psi, j, l);
  const double second = three_tangle(psi) + pair_concurrence_sq(psi, j, k);
  return {std::sqrt(std::max(first, 0.0)), std::sqrt(std::max(second, 0.0))};
}

double partial_tangle(const PureState& psi, int j, int k) {
  const auto forms = partial_tangle_forms(psi, j, k);
  const double a = forms.via_one_side;
  const double b = forms.via_tangle;
  // Near zero the square root magnifies round-off, so also accept agreement
  // of the squared forms.
  if (std::abs(a - b) > 1e-8 && std::abs(a * a - b * b) > 1e-12)
    throw std::logic_error("partial_tangle: the two forms disagree");
  return b;
}

CorrelationMatrix correlation_matrix(const DensityMatrix& rho) {
  require_two_qubits(rho, "correlation_matrix");
  CorrelationMatrix out;
  const CMatrix& r = rho.matrix();
  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n) {
      const CMatrix op = kron(pauli(m + 1), pauli(n + 1));
      Complex tr = 0.0;
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t q = 0; q < 4; ++q) tr += r(i, q) * op(q, i);
      if (std::abs(tr.imag()) > 1e-10)
        throw std::logic_error("correlation_matrix: Pauli expectation has an imaginary part");
      out.t[m][n] = tr.real();
    }
  return out;
}

double fidelity_from_T(const DensityMatrix& rho) {
  return (3.0 + correlation_matrix(rho).trace_norm()) / 6.0;
}

const CMatrix& magic_basis() {
  static const CMatrix m = [] {
    const double h = 1.0 / std::sqrt(2.0);
    const Complex i(0.0, 1.0);
    // Columns: (|00>+|11>)/sqrt2, i(|00>-|11>)/sqrt2, i(|01>+|10>)/sqrt2, (|01>-|10>)/sqrt2.
    return CMatrix{{h, i * h, 0.0, 0.0},
                   {0.0, 0.0, i * h, h},
                   {0.0, 0.0, i * h, -h},
                   {h, -i * h, 0.0, 0.0}};
  }();
  return m;
}

double fully_entangled_fraction(const DensityMatrix& rho) {
  require_two_qubits(rho, "fully_entangled_fraction");
  const CMatrix& m = magic_basis();
  CMatrix in_magic = m.adjoint() * rho.matrix() * m;
  // Maximally entangled states are the real unit vectors in this basis, so
  // only the symmetric real part contributes to <e|rho|e>.
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) in_magic(r, c) = in_magic(r, c).real();
  return std::clamp(hermitian_eigs(in_magic).values.front(), 0.0, 1.0);
}

double fully_entangled_fraction_numeric(const DensityMatrix& rho, const AngleSearchOptions& opts) {
  require_two_qubits(rho, "fully_entangled_fraction_numeric");
  const double h = 1.0 / std::sqrt(2.0);
  const CVector phi_plus{h, 0.0, 0.0, h};
  const CMatrix& r = rho.matrix();
  const auto overlap = [&](const CMatrix& w) {
    const CVector e = kron(CMatrix::identity(2), w) * phi_plus;
    return inner(e, r * e).real();
  };
  return maximize_over_su2(overlap, opts).value;
}

double fidelity_from_f(double f) {
  if (!(f >= 0.0 && f <= 1.0)) throw std::domain_error("fidelity_from_f: f must lie in [0, 1]");
  return (2.0 * f + 1.0) / 3.0;
}

}  // namespace ctpower
