#include "ctpower/control_power.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "ctpower/measures.hpp"
#include "ctpower/parallel.hpp"

namespace ctpower {

namespace {

constexpr double kTwoThirds = 2.0 / 3.0;

PartitionRecord make_record(const Partition& p, double f_ct, double f_no) {
  return {p, f_ct, f_no, (3.0 * f_no - 1.0) / 2.0, f_ct - f_no};
}

double fidelity_no_control(const PureState& psi, const Partition& p) {
  return fidelity_from_T(psi.reduced({p.k, p.l}));
}

void require_unit_norm(double norm2, const char* who) {
  if (std::abs(norm2 - 1.0) > kDefaultTol)
    throw NormalizationError(std::string(who) + ": coefficients are not normalized (norm^2 = " +
                             std::to_string(norm2) + ")");
}

}  // namespace

std::string_view to_string(ReportMethod m) {
  switch (m) {
    case ReportMethod::three_qubit: return "three-qubit";
    case ReportMethod::ghz: return "ghz";
    case ReportMethod::w_class: return "wclass";
    case ReportMethod::w_ntype: return "wntype";
    case ReportMethod::oracle: return "oracle";
  }
  return "unknown";
}

ControlReport assemble_report(int n_qubits, ReportMethod method, std::vector<PartitionRecord> records) {
  if (records.empty()) throw std::invalid_argument("assemble_report: no partitions");
  std::stable_sort(records.begin(), records.end(), [](const PartitionRecord& a, const PartitionRecord& b) {
    return a.partition.controllers < b.partition.controllers;
  });
  ControlReport r;
  r.n_qubits = n_qubits;
  r.method = method;
  const auto best = std::min_element(records.begin(), records.end(),
                                     [](const PartitionRecord& a, const PartitionRecord& b) { return a.P < b.P; });
  r.minimal_P = best->P;
  r.argmin = best->partition;
  r.meaningful = std::all_of(records.begin(), records.end(), [](const PartitionRecord& rec) {
    return rec.F_ct > kTwoThirds + 1e-12 && rec.F_no_control <= kTwoThirds + 1e-9;
  });
  r.records = std::move(records);
  return r;
}

double fct_three_qubit(const PureState& psi, int j) {
  const Partition p = Partition::three_qubit(j);
  return (2.0 + partial_tangle(psi, p.k, p.l)) / 3.0;
}

double control_power(const PureState& psi, int j) {
  return fct_three_qubit(psi, j) - fidelity_no_control(psi, Partition::three_qubit(j));
}

std::optional<std::pair<Complex, Complex>> as_ghz(const PureState& psi, double zero_tol) {
  const CVector& v = psi.amplitudes();
  const std::size_t last = v.dim() - 1;
  for (std::size_t i = 1; i < last; ++i)
    if (std::abs(v[i]) > zero_tol) return std::nullopt;
  return std::pair{v[0], v[last]};
}

std::optional<std::vector<Complex>> as_w_ntype(const PureState& psi, double zero_tol) {
  const CVector& v = psi.amplitudes();
  const int n = psi.n_qubits();
  for (std::size_t i = 0; i < v.dim(); ++i)
    if (std::popcount(i) != 1 && std::abs(v[i]) > zero_tol) return std::nullopt;
  std::vector<Complex> alphas(static_cast<std::size_t>(n));
  for (int q = 1; q <= n; ++q) alphas[static_cast<std::size_t>(q - 1)] = v[std::size_t{1} << (n - q)];
  return alphas;
}

ControlReport minimal_control_power(const PureState& psi, const std::optional<ProtocolConfig>& oracle) {
  const int n = psi.n_qubits();
  if (n < 3) throw std::invalid_argument("minimal_control_power: need at least three qubits");

  if (n == 3) {
    std::vector<PartitionRecord> records;
    for (int j = 1; j <= 3; ++j) {
      const Partition p = Partition::three_qubit(j);
      records.push_back(make_record(p, fct_three_qubit(psi, j), fidelity_no_control(psi, p)));
    }
    return assemble_report(3, ReportMethod::three_qubit, std::move(records));
  }

  if (const auto ghz = as_ghz(psi)) return ghz_closed_form(n, ghz->first, ghz->second);
  if (const auto alphas = as_w_ntype(psi)) return w_ntype_closed_form(*alphas);

  if (!oracle)
    throw UnsupportedStateError("state is outside the GHZ and W-type families; use verify with an oracle budget");
  if (n > 5)
    throw UnsupportedStateError("numeric oracle supports at most three controllers (n <= 5)");

  const auto partitions = all_partitions(n);
  std::vector<PartitionRecord> records(partitions.size());
  parallel_for(partitions.size(), [&](std::size_t i) {
    const Partition& p = partitions[i];
    const double f_ct = ct_fidelity_oracle_n(psi, p, *oracle).fidelity;
    records[i] = make_record(p, f_ct, fidelity_no_control(psi, p));
  });
  return assemble_report(n, ReportMethod::oracle, std::move(records));
}

ControlReport ghz_closed_form(int n_qubits, Complex a, Complex b) {
  require_unit_norm(std::norm(a) + std::norm(b), "ghz_closed_form");
  const double ab = std::abs(a) * std::abs(b);
  // Every worker pair is left in a classically correlated state (|T| = |T_zz| = 1).
  std::vector<PartitionRecord> records;
  for (const auto& p : all_partitions(n_qubits))
    records.push_back(make_record(p, 2.0 * (ab + 1.0) / 3.0, kTwoThirds));
  return assemble_report(n_qubits, ReportMethod::ghz, std::move(records));
}

ControlReport wclass_closed_form(const std::array<double, 4>& lambda) {
  const PureState psi = make_w_class(lambda);  // validates sign and norm
  const double l0sq = lambda[0] * lambda[0];
  std::vector<PartitionRecord> records;
  for (int j = 1; j <= 3; ++j) {
    const Partition p = Partition::three_qubit(j);
    const double lj = lambda[static_cast<std::size_t>(j)];
    const double lk = lambda[static_cast<std::size_t>(p.k)];
    const double ll = lambda[static_cast<std::size_t>(p.l)];
    const auto sq = [](double x) { return x * x; };
    const double upper = (l0sq + sq(-lj + lk + ll)) * (l0sq + sq(lj + lk + ll));
    const double lower = (l0sq + sq(lj - lk + ll)) * (l0sq + sq(lj + lk - ll));
    const double a_j = std::max(upper, lower);
    const double c_kl = 2.0 * lk * ll;  // the W class has zero three-tangle
    const double f_no = (3.0 + c_kl + std::sqrt(a_j)) / 6.0;

    const double check = fidelity_no_control(psi, p);
    if (std::abs(check - f_no) > 1e-9)
      throw std::logic_error("wclass_closed_form: F(rho_kl) disagrees with the correlation matrix by " +
                             std::to_string(std::abs(check - f_no)));
    records.push_back(make_record(p, (2.0 + c_kl) / 3.0, f_no));
  }
  return assemble_report(3, ReportMethod::w_class, std::move(records));
}

ControlReport w_ntype_closed_form(std::span<const Complex> alphas) {
  const int n = static_cast<int>(alphas.size());
  if (n < 3) throw std::invalid_argument("w_ntype_closed_form: need n >= 3");
  double norm2 = 0.0;
  for (const auto& a : alphas) norm2 += std::norm(a);
  require_unit_norm(norm2, "w_ntype_closed_form");

  std::vector<PartitionRecord> records;
  for (const auto& p : all_partitions(n)) {
    const double ak = std::abs(alphas[static_cast<std::size_t>(p.k - 1)]);
    const double al = std::abs(alphas[static_cast<std::size_t>(p.l - 1)]);
    const double s = ak * ak + al * al;
    // rho_kl = (1 - s)|00><00| + |phi><phi|: T has singular values
    // 2|a_k||a_l| (twice) and |1 - 2s|.
    const double f_no = (3.0 + 4.0 * ak * al + std::abs(1.0 - 2.0 * s)) / 6.0;
    records.push_back(make_record(p, (2.0 * ak * al + 2.0) / 3.0, f_no));
  }
  return assemble_report(n, ReportMethod::w_ntype, std::move(records));
}

}  // namespace ctpower
