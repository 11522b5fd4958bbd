#pragma once

// Dense complex linear algebra for small quantum systems (dimension <= 2^10).
//
// Qubits are labelled 1..n, with qubit 1 the most significant bit of the
// computational-basis index, so |q1 q2 ... qn> has index sum q_i 2^(n-i).

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace ctpower {

using Complex = std::complex<double>;
using Rng = std::mt19937_64;

/// Default tolerance for all approximate comparisons.
inline constexpr double kDefaultTol = 1e-9;

class CVector {
 public:
  CVector() = default;
  explicit CVector(std::size_t dim) : data_(dim) {}
  explicit CVector(std::vector<Complex> entries) : data_(std::move(entries)) {}
  CVector(std::initializer_list<Complex> entries) : data_(entries) {}

  static CVector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return data_.size(); }
  Complex& operator[](std::size_t i) { return data_[i]; }
  const Complex& operator[](std::size_t i) const { return data_[i]; }
  std::span<const Complex> entries() const { return data_; }
  std::span<Complex> entries() { return data_; }

  double norm() const;
  bool is_normalized(double tol = kDefaultTol) const;

  CVector& operator*=(Complex s);
  CVector& operator+=(const CVector& other);

  friend bool operator==(const CVector&, const CVector&) = default;

 private:
  std::vector<Complex> data_;
};

/// <a|b>, conjugate-linear in the first argument.
Complex inner(const CVector& a, const CVector& b);

/// Row-major dense complex matrix.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t dim);
  static CMatrix diag(std::span<const Complex> d);
  static CMatrix diag(std::initializer_list<Complex> d);
  /// |a><b|
  static CMatrix outer(const CVector& a, const CVector& b);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  std::span<const Complex> entries() const { return data_; }

  CMatrix adjoint() const;
  CMatrix transpose() const;
  CMatrix conj() const;
  Complex trace() const;
  double frobenius_norm() const;
  /// Largest |entry|.
  double max_abs() const;

  CVector column(std::size_t c) const;

  bool is_hermitian(double tol = kDefaultTol) const;
  bool is_unitary(double tol = kDefaultTol) const;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(Complex s);

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

CMatrix operator*(const CMatrix& a, const CMatrix& b);
CVector operator*(const CMatrix& a, const CVector& v);
CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(Complex s, CMatrix a);

/// Largest entrywise |a - b|; matrices must have equal shape.
double max_abs_diff(const CMatrix& a, const CMatrix& b);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(const CVector& a, const CVector& b);

/// Reduced matrix on the qubits in `keep` (1-based, any order; the result
/// keeps ascending qubit order). Throws std::invalid_argument on a dimension
/// mismatch or a bad index set.
CMatrix partial_trace(const CMatrix& rho, int n_qubits, std::span<const int> keep);
CMatrix partial_trace(const CMatrix& rho, int n_qubits, std::initializer_list<int> keep);

/// Rearranges |psi> as a 2^|keep| x 2^(n-|keep|) matrix A (rows indexed by the
/// kept qubits in ascending order) so that tr_rest |psi><psi| = A A^dagger.
CMatrix reshape_for_reduction(const CVector& psi, int n_qubits, std::span<const int> keep);

struct HermitianEigen {
  std::vector<double> values;  // descending
  CMatrix vectors;             // column i belongs to values[i]
};

/// Cyclic complex Jacobi. Throws std::invalid_argument if `m` is not
/// Hermitian within `tol` (relative to its largest entry).
HermitianEigen hermitian_eigs(const CMatrix& m, double tol = kDefaultTol);

/// Singular values, descending, by one-sided Jacobi (absolute accuracy of
/// order eps * ||m||, including for the zero singular values).
std::vector<double> singular_values(const CMatrix& m);

double trace_norm(const CMatrix& m);

/// Pauli matrices; index 0 is the identity.
const CMatrix& pauli(int index);

/// U(theta, phi, chi) = [[cos t, e^{i phi} sin t], [-e^{-i chi} sin t, e^{i(phi-chi)} cos t]].
/// Covers SU(2) up to global phase for theta in [0, pi/2].
CMatrix su2(double theta, double phi, double chi);

/// Unitarily invariant random pure state on n qubits.
CVector haar_state(int n_qubits, Rng& rng);
/// Haar-distributed dim x dim unitary (QR of a Ginibre matrix with phase fix).
CMatrix haar_unitary(std::size_t dim, Rng& rng);

}  // namespace ctpower
