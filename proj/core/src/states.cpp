#include "ctpower/states.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ctpower {

namespace {

int qubits_for_dim(std::size_t dim) {
  if (dim < 2 || !std::has_single_bit(dim)) return -1;
  return static_cast<int>(std::countr_zero(dim));
}

}  // namespace

// ---------------------------------------------------------------- DensityMatrix

DensityMatrix::DensityMatrix(CMatrix rho, double tol) : rho_(std::move(rho)) {
  if (!rho_.is_square() || qubits_for_dim(rho_.rows()) < 0)
    throw InvalidDensityMatrix("density matrix must be 2^n x 2^n");
  if (!rho_.is_hermitian(tol)) throw InvalidDensityMatrix("density matrix is not Hermitian");
  if (std::abs(rho_.trace() - 1.0) > tol)
    throw InvalidDensityMatrix("density matrix does not have unit trace");
  const auto eig = hermitian_eigs(rho_, tol);
  if (eig.values.back() < -tol)
    throw InvalidDensityMatrix("density matrix is not positive semidefinite");
}

DensityMatrix DensityMatrix::from_factor(CMatrix factor) {
  CMatrix rho = factor * factor.adjoint();
  return DensityMatrix(Trusted{}, std::move(rho), std::move(factor));
}

DensityMatrix DensityMatrix::from_pure(const CVector& psi) {
  CMatrix factor(psi.dim(), 1, std::vector<Complex>(psi.entries().begin(), psi.entries().end()));
  return from_factor(std::move(factor));
}

int DensityMatrix::n_qubits() const { return qubits_for_dim(rho_.rows()); }

// ---------------------------------------------------------------- PureState

PureState::PureState(CVector amplitudes, double tol) : amplitudes_(std::move(amplitudes)) {
  n_qubits_ = qubits_for_dim(amplitudes_.dim());
  if (n_qubits_ < 1)
    throw DimensionError("amplitude count " + std::to_string(amplitudes_.dim()) +
                         " is not a power of 2 (>= 2)");
  const double norm = amplitudes_.norm();
  if (std::abs(norm * norm - 1.0) > tol)
    throw NormalizationError("state is not normalized: sum |c|^2 = " + std::to_string(norm * norm));
}

DensityMatrix PureState::density() const { return DensityMatrix::from_pure(amplitudes_); }

DensityMatrix PureState::reduced(std::span<const int> keep) const {
  return DensityMatrix::from_factor(reshape_for_reduction(amplitudes_, n_qubits_, keep));
}

DensityMatrix PureState::reduced(std::initializer_list<int> keep) const {
  return reduced(std::span<const int>(keep.begin(), keep.size()));
}

// ---------------------------------------------------------------- Partition

Partition Partition::from_workers(int n_qubits, int k, int l) {
  if (n_qubits < 3) throw std::invalid_argument("partition needs at least three qubits");
  if (k == l) throw std::invalid_argument("partition workers must differ");
  if (k < 1 || l < 1 || k > n_qubits || l > n_qubits)
    throw std::invalid_argument("partition worker index out of range");
  Partition p;
  p.n_qubits = n_qubits;
  p.k = std::min(k, l);
  p.l = std::max(k, l);
  for (int q = 1; q <= n_qubits; ++q)
    if (q != p.k && q != p.l) p.controllers.push_back(q);
  return p;
}

Partition Partition::three_qubit(int j) {
  if (j < 1 || j > 3) throw std::invalid_argument("three-qubit controller must be 1, 2 or 3");
  const int k = j == 1 ? 2 : 1;
  const int l = j == 3 ? 2 : 3;
  return from_workers(3, k, l);
}

std::vector<Partition> all_partitions(int n_qubits) {
  if (n_qubits < 3) throw std::invalid_argument("partitions need at least three qubits");
  // Lexicographic order of J is reverse lexicographic order of the
  // complementary worker pair.
  std::vector<Partition> out;
  for (int k = n_qubits - 1; k >= 1; --k)
    for (int l = n_qubits; l > k; --l) out.push_back(Partition::from_workers(n_qubits, k, l));
  std::sort(out.begin(), out.end(),
            [](const Partition& a, const Partition& b) { return a.controllers < b.controllers; });
  return out;
}

// ---------------------------------------------------------------- families

PureState make_ghz(int n_qubits, Complex a, Complex b) {
  if (n_qubits < 3) throw std::invalid_argument("make_ghz: need n >= 3");
  if (n_qubits > 20) throw std::invalid_argument("make_ghz: n too large");
  const double norm2 = std::norm(a) + std::norm(b);
  if (std::abs(norm2 - 1.0) > kDefaultTol)
    throw NormalizationError("make_ghz: |a|^2 + |b|^2 = " + std::to_string(norm2));
  CVector v(std::size_t{1} << n_qubits);
  v[0] = a;
  v[v.dim() - 1] = b;
  return PureState(std::move(v));
}

PureState make_w_class(const std::array<double, 4>& lambda) {
  double norm2 = 0.0;
  for (double x : lambda) {
    if (x < 0.0 || !std::isfinite(x))
      throw StateError("make_w_class: coefficients must be finite and non-negative");
    norm2 += x * x;
  }
  if (std::abs(norm2 - 1.0) > kDefaultTol)
    throw NormalizationError("make_w_class: sum lambda_i^2 = " + std::to_string(norm2));
  CVector v(8);
  v[0b100] = lambda[0];
  v[0b000] = lambda[1];
  v[0b110] = lambda[2];
  v[0b101] = lambda[3];
  return PureState(std::move(v));
}

PureState make_w_ntype(std::span<const Complex> alphas) {
  const int n = static_cast<int>(alphas.size());
  if (n < 3) throw std::invalid_argument("make_w_ntype: need n >= 3");
  if (n > 20) throw std::invalid_argument("make_w_ntype: n too large");
  double norm2 = 0.0;
  for (const auto& a : alphas) norm2 += std::norm(a);
  if (std::abs(norm2 - 1.0) > kDefaultTol)
    throw NormalizationError("make_w_ntype: sum |alpha_i|^2 = " + std::to_string(norm2));
  CVector v(std::size_t{1} << n);
  for (int i = 1; i <= n; ++i) v[std::size_t{1} << (n - i)] = alphas[static_cast<std::size_t>(i - 1)];
  return PureState(std::move(v));
}

PureState make_w_ntype(std::initializer_list<Complex> alphas) {
  return make_w_ntype(std::span<const Complex>(alphas.begin(), alphas.size()));
}

PureState make_uniform_w(int n_qubits) {
  if (n_qubits < 3) throw std::invalid_argument("make_uniform_w: need n >= 3");
  const std::vector<Complex> alphas(static_cast<std::size_t>(n_qubits),
                                    1.0 / std::sqrt(static_cast<double>(n_qubits)));
  return make_w_ntype(alphas);
}

PureState random_pure_state(int n_qubits, Rng& rng) { return PureState(haar_state(n_qubits, rng)); }

DensityMatrix random_density_matrix(int n_qubits, Rng& rng) {
  // Hilbert-Schmidt measure: reduce a Haar state on twice as many qubits.
  const CVector purified = haar_state(2 * n_qubits, rng);
  std::vector<int> keep(static_cast<std::size_t>(n_qubits));
  for (int q = 0; q < n_qubits; ++q) keep[static_cast<std::size_t>(q)] = q + 1;
  return DensityMatrix::from_factor(reshape_for_reduction(purified, 2 * n_qubits, keep));
}

// ---------------------------------------------------------------- files

PureState parse_state_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw StateFormatError(std::string("state file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("amplitudes"))
    throw StateFormatError("state file needs an object with \"n\" and \"amplitudes\"");
  if (!doc["n"].is_number_integer()) throw StateFormatError("\"n\" must be an integer");
  const auto& amps = doc["amplitudes"];
  if (!amps.is_array()) throw StateFormatError("\"amplitudes\" must be an array");

  std::vector<Complex> values;
  values.reserve(amps.size());
  for (const auto& entry : amps) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number())
      throw StateFormatError("each amplitude must be a [re, im] pair of numbers");
    values.emplace_back(entry[0].get<double>(), entry[1].get<double>());
  }

  const auto n = doc["n"].get<long long>();
  if (qubits_for_dim(values.size()) < 0)
    throw DimensionError("amplitude count " + std::to_string(values.size()) +
                         " is not a power of 2");
  if (n < 1 || n > 20 || (std::size_t{1} << n) != values.size())
    throw DimensionError("\"n\" = " + std::to_string(n) + " does not match " +
                         std::to_string(values.size()) + " amplitudes");
  return PureState(CVector(std::move(values)));
}

std::string state_to_json(const PureState& state) {
  nlohmann::json doc;
  doc["n"] = state.n_qubits();
  auto amps = nlohmann::json::array();
  for (const auto& z : state.amplitudes().entries()) amps.push_back({z.real(), z.imag()});
  doc["amplitudes"] = std::move(amps);
  return doc.dump(2) + "\n";
}

PureState load_state(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StateFormatError("cannot open state file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_state_json(buf.str());
}

void save_state(const PureState& state, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw StateFormatError("cannot write state file " + path.string());
  out << state_to_json(state);
}

}  // namespace ctpower
