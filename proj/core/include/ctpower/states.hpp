#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ctpower/qlinalg.hpp"

namespace ctpower {

// Error kinds for state construction and state files.
struct StateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Amplitudes (or coefficients) are not normalized.
struct NormalizationError : StateError {
  using StateError::StateError;
};
/// Amplitude count is not 2^n, or disagrees with the declared qubit count.
struct DimensionError : StateError {
  using StateError::StateError;
};
/// File is missing, not JSON, or lacks the required fields.
struct StateFormatError : StateError {
  using StateError::StateError;
};
/// Matrix is not Hermitian, unit-trace and positive semidefinite.
struct InvalidDensityMatrix : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Hermitian, unit-trace, PSD matrix. When built from a pure state it also
/// keeps a factor A with rho = A A^dagger, which lets spectral functionals
/// avoid square roots of round-off eigenvalues.
class DensityMatrix {
 public:
  /// Validates `rho` and throws InvalidDensityMatrix on failure.
  explicit DensityMatrix(CMatrix rho, double tol = kDefaultTol);

  /// rho = A A^dagger; A is trusted to have unit Frobenius norm.
  static DensityMatrix from_factor(CMatrix factor);
  static DensityMatrix from_pure(const CVector& psi);

  const CMatrix& matrix() const { return rho_; }
  std::size_t dim() const { return rho_.rows(); }
  int n_qubits() const;
  const std::optional<CMatrix>& factor() const { return factor_; }

 private:
  struct Trusted {};
  DensityMatrix(Trusted, CMatrix rho, std::optional<CMatrix> factor)
      : rho_(std::move(rho)), factor_(std::move(factor)) {}

  CMatrix rho_;
  std::optional<CMatrix> factor_;
};

class PureState {
 public:
  /// Throws DimensionError unless dim is 2^n (n >= 1) and
  /// NormalizationError unless | ||amplitudes|| - 1 | <= tol.
  explicit PureState(CVector amplitudes, double tol = kDefaultTol);

  int n_qubits() const { return n_qubits_; }
  const CVector& amplitudes() const { return amplitudes_; }
  Complex amplitude(std::size_t index) const { return amplitudes_[index]; }

  DensityMatrix density() const;
  /// Reduced state on `keep` (1-based, ascending order in the result).
  DensityMatrix reduced(std::span<const int> keep) const;
  DensityMatrix reduced(std::initializer_list<int> keep) const;

  friend bool operator==(const PureState&, const PureState&) = default;

 private:
  int n_qubits_ = 0;
  CVector amplitudes_;
};

/// Controllers J (size n-2, ascending) and workers k < l, 1-based.
struct Partition {
  int n_qubits = 0;
  std::vector<int> controllers;
  int k = 0;
  int l = 0;

  /// Partition whose workers are {k, l}. Throws std::invalid_argument.
  static Partition from_workers(int n_qubits, int k, int l);
  /// Three-qubit partition with controller j.
  static Partition three_qubit(int j);

  friend bool operator==(const Partition&, const Partition&) = default;
};

/// All (n-2)-subsets J, in lexicographic order of J.
std::vector<Partition> all_partitions(int n_qubits);

// ---------------------------------------------------------------- families

/// a|0...0> + b|1...1>.
PureState make_ghz(int n_qubits, Complex a, Complex b);
/// lambda0|100> + lambda1|000> + lambda2|110> + lambda3|101>, lambda_i >= 0.
PureState make_w_class(const std::array<double, 4>& lambda);
/// sum_i alpha_i |0..1_i..0>, n = alphas.size() >= 3.
PureState make_w_ntype(std::span<const Complex> alphas);
PureState make_w_ntype(std::initializer_list<Complex> alphas);
/// Standard W state on n qubits (all alpha_i = 1/sqrt(n)).
PureState make_uniform_w(int n_qubits);

PureState random_pure_state(int n_qubits, Rng& rng);
/// Full-rank mixed state drawn from the Hilbert-Schmidt measure.
DensityMatrix random_density_matrix(int n_qubits, Rng& rng);

// ---------------------------------------------------------------- files

/// JSON: {"n": int, "amplitudes": [[re, im], ...]}, index order qubit 1 most
/// significant.
PureState load_state(const std::filesystem::path& path);
void save_state(const PureState& state, const std::filesystem::path& path);
PureState parse_state_json(const std::string& text);
std::string state_to_json(const PureState& state);

}  // namespace ctpower
