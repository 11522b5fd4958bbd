#include "ctpower/qlinalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ctpower {

// ---------------------------------------------------------------- CVector

CVector CVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw std::invalid_argument("CVector::basis: index out of range");
  CVector v(dim);
  v[index] = 1.0;
  return v;
}

double CVector::norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

bool CVector::is_normalized(double tol) const { return std::abs(norm() - 1.0) <= tol; }

CVector& CVector::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

CVector& CVector::operator+=(const CVector& other) {
  if (other.dim() != dim()) throw std::invalid_argument("CVector +=: dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Complex inner(const CVector& a, const CVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("inner: dimension mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// ---------------------------------------------------------------- CMatrix

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols)
    throw std::invalid_argument("CMatrix: entry count does not match rows x cols");
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("CMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

CMatrix CMatrix::identity(std::size_t dim) {
  CMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diag(std::span<const Complex> d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

CMatrix CMatrix::diag(std::initializer_list<Complex> d) {
  return diag(std::span<const Complex>(d.begin(), d.size()));
}

CMatrix CMatrix::outer(const CVector& a, const CVector& b) {
  CMatrix m(a.dim(), b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) m(i, j) = a[i] * std::conj(b[j]);
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

CMatrix CMatrix::transpose() const {
  CMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

CMatrix CMatrix::conj() const {
  CMatrix m = *this;
  for (auto& z : m.data_) z = std::conj(z);
  return m;
}

Complex CMatrix::trace() const {
  if (!is_square()) throw std::invalid_argument("trace: matrix is not square");
  Complex s = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, i);
  return s;
}

double CMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

CVector CMatrix::column(std::size_t c) const {
  CVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

bool CMatrix::is_hermitian(double tol) const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
  return true;
}

bool CMatrix::is_unitary(double tol) const {
  if (!is_square()) return false;
  return max_abs_diff(adjoint() * *this, identity(rows_)) <= tol;
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  if (other.rows_ != rows_ || other.cols_ != cols_)
    throw std::invalid_argument("CMatrix +=: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  if (other.rows_ != rows_ || other.cols_ != cols_)
    throw std::invalid_argument("CMatrix -=: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("CMatrix product: shape mismatch");
  CMatrix m(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) m(i, j) += aik * b(k, j);
    }
  return m;
}

CVector operator*(const CMatrix& a, const CVector& v) {
  if (a.cols() != v.dim()) throw std::invalid_argument("CMatrix * CVector: shape mismatch");
  CVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(Complex s, CMatrix a) { return a *= s; }

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) m = std::max(m, std::abs(ea[i] - eb[i]));
  return m;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          m(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return m;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector v(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t k = 0; k < b.dim(); ++k) v[i * b.dim() + k] = a[i] * b[k];
  return v;
}

// ---------------------------------------------------------------- partial trace

namespace {

struct SplitIndex {
  std::vector<int> kept;    // ascending, 1-based
  std::vector<int> traced;  // ascending, 1-based
};

SplitIndex split_qubits(int n_qubits, std::span<const int> keep) {
  if (n_qubits < 1 || n_qubits > 20) throw std::invalid_argument("qubit count out of range");
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
  std::vector<bool> mark(static_cast<std::size_t>(n_qubits) + 1, false);
  for (int q : keep) {
    if (q < 1 || q > n_qubits)
      throw std::invalid_argument("partial_trace: qubit index " + std::to_string(q) +
                                  " out of range 1.." + std::to_string(n_qubits));
    if (mark[q]) throw std::invalid_argument("partial_trace: repeated qubit index");
    mark[q] = true;
  }
  SplitIndex s;
  for (int q = 1; q <= n_qubits; ++q) (mark[q] ? s.kept : s.traced).push_back(q);
  return s;
}

// Full basis index built from the kept-register value r and traced-register value t.
std::vector<std::size_t> compose_table(int n_qubits, const SplitIndex& s) {
  const std::size_t m = s.kept.size();
  const std::size_t rest = s.traced.size();
  const std::size_t dk = std::size_t{1} << m;
  const std::size_t dt = std::size_t{1} << rest;
  std::vector<std::size_t> table(dk * dt);
  for (std::size_t r = 0; r < dk; ++r)
    for (std::size_t t = 0; t < dt; ++t) {
      std::size_t x = 0;
      for (std::size_t i = 0; i < m; ++i)
        if ((r >> (m - 1 - i)) & 1U) x |= std::size_t{1} << (n_qubits - s.kept[i]);
      for (std::size_t i = 0; i < rest; ++i)
        if ((t >> (rest - 1 - i)) & 1U) x |= std::size_t{1} << (n_qubits - s.traced[i]);
      table[r * dt + t] = x;
    }
  return table;
}

}  // namespace

CMatrix partial_trace(const CMatrix& rho, int n_qubits, std::span<const int> keep) {
  const SplitIndex s = split_qubits(n_qubits, keep);
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (rho.rows() != dim || rho.cols() != dim)
    throw std::invalid_argument("partial_trace: matrix is not 2^n x 2^n");
  const std::size_t dk = std::size_t{1} << s.kept.size();
  const std::size_t dt = std::size_t{1} << s.traced.size();
  const auto table = compose_table(n_qubits, s);
  CMatrix out(dk, dk);
  for (std::size_t r = 0; r < dk; ++r)
    for (std::size_t c = 0; c < dk; ++c) {
      Complex acc = 0.0;
      for (std::size_t t = 0; t < dt; ++t) acc += rho(table[r * dt + t], table[c * dt + t]);
      out(r, c) = acc;
    }
  return out;
}

CMatrix partial_trace(const CMatrix& rho, int n_qubits, std::initializer_list<int> keep) {
  return partial_trace(rho, n_qubits, std::span<const int>(keep.begin(), keep.size()));
}

CMatrix reshape_for_reduction(const CVector& psi, int n_qubits, std::span<const int> keep) {
  const SplitIndex s = split_qubits(n_qubits, keep);
  if (psi.dim() != (std::size_t{1} << n_qubits))
    throw std::invalid_argument("reshape_for_reduction: vector is not of dimension 2^n");
  const std::size_t dk = std::size_t{1} << s.kept.size();
  const std::size_t dt = std::size_t{1} << s.traced.size();
  const auto table = compose_table(n_qubits, s);
  CMatrix a(dk, dt);
  for (std::size_t r = 0; r < dk; ++r)
    for (std::size_t t = 0; t < dt; ++t) a(r, t) = psi[table[r * dt + t]];
  return a;
}

// ---------------------------------------------------------------- spectra

HermitianEigen hermitian_eigs(const CMatrix& m, double tol) {
  if (!m.is_square()) throw std::invalid_argument("hermitian_eigs: matrix is not square");
  const double scale = m.max_abs();
  if (!m.is_hermitian(tol * std::max(1.0, scale)))
    throw std::invalid_argument("hermitian_eigs: matrix is not Hermitian");

  const std::size_t n = m.rows();
  CMatrix a = m;
  CMatrix v = CMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();

  const double target = 1e-15 * std::max(scale, 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= target) break;

    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= target * 1e-3) continue;
        const Complex phase = apq / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex ph_c = std::conj(phase);

        // a <- a G with G = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on columns p, q
        for (std::size_t r = 0; r < n; ++r) {
          const Complex ap = a(r, p);
          const Complex aq = a(r, q) * ph_c;
          a(r, p) = c * ap - s * aq;
          a(r, q) = s * ap + c * aq;
        }
        // a <- G^dagger a
        for (std::size_t col = 0; col < n; ++col) {
          const Complex ap = a(p, col);
          const Complex aq = a(q, col) * phase;
          a(p, col) = c * ap - s * aq;
          a(q, col) = s * ap + c * aq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const Complex vp = v(r, p);
          const Complex vq = v(r, q) * ph_c;
          v(r, p) = c * vp - s * vq;
          v(r, q) = s * vp + c * vq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });
  HermitianEigen out{std::vector<double>(n), CMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

std::vector<double> singular_values(const CMatrix& m) {
  // Work on whichever orientation has fewer columns.
  CMatrix w = m.cols() > m.rows() ? m.adjoint() : m;
  const std::size_t rows = w.rows();
  const std::size_t cols = w.cols();
  constexpr double eps = 1e-15;

  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p < cols; ++p)
      for (std::size_t q = p + 1; q < cols; ++q) {
        double alpha = 0.0, beta = 0.0;
        Complex gamma = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
          alpha += std::norm(w(r, p));
          beta += std::norm(w(r, q));
          gamma += std::conj(w(r, p)) * w(r, q);
        }
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Complex ph_c = std::conj(gamma / g);
        for (std::size_t r = 0; r < rows; ++r) {
          const Complex wp = w(r, p);
          const Complex wq = w(r, q) * ph_c;
          w(r, p) = c * wp - s * wq;
          w(r, q) = s * wp + c * wq;
        }
      }
    if (!rotated) break;
  }

  std::vector<double> sv(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < rows; ++r) s += std::norm(w(r, c));
    sv[c] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

double trace_norm(const CMatrix& m) {
  const auto sv = singular_values(m);
  return std::accumulate(sv.begin(), sv.end(), 0.0);
}

// ---------------------------------------------------------------- constants & sampling

const CMatrix& pauli(int index) {
  static const std::array<CMatrix, 4> paulis = {
      CMatrix{{1.0, 0.0}, {0.0, 1.0}},
      CMatrix{{0.0, 1.0}, {1.0, 0.0}},
      CMatrix{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}},
      CMatrix{{1.0, 0.0}, {0.0, -1.0}},
  };
  if (index < 0 || index > 3) throw std::out_of_range("pauli: index must be 0..3");
  return paulis[static_cast<std::size_t>(index)];
}

CMatrix su2(double theta, double phi, double chi) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return CMatrix{{c, std::polar(s, phi)}, {-std::polar(s, -chi), std::polar(c, phi - chi)}};
}

CVector haar_state(int n_qubits, Rng& rng) {
  if (n_qubits < 1) throw std::invalid_argument("haar_state: need at least one qubit");
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(std::size_t{1} << n_qubits);
  for (auto& z : v.entries()) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = Complex(re, im);
  }
  v *= 1.0 / v.norm();
  return v;
}

CMatrix haar_unitary(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  // Modified Gram-Schmidt on columns; R has a positive diagonal, which makes
  // Q Haar distributed.
  for (std::size_t c = 0; c < dim; ++c) {
    for (std::size_t prev = 0; prev < c; ++prev) {
      Complex proj = 0.0;
      for (std::size_t r = 0; r < dim; ++r) proj += std::conj(g(r, prev)) * g(r, c);
      for (std::size_t r = 0; r < dim; ++r) g(r, c) -= proj * g(r, prev);
    }
    double nrm = 0.0;
    for (std::size_t r = 0; r < dim; ++r) nrm += std::norm(g(r, c));
    nrm = std::sqrt(nrm);
    for (std::size_t r = 0; r < dim; ++r) g(r, c) /= nrm;
  }
  return g;
}

}  // namespace ctpower
