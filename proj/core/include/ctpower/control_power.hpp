#pragma once

// Controlled-teleportation fidelity, control power and the family closed forms.

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "ctpower/simkit.hpp"
#include "ctpower/states.hpp"

namespace ctpower {

/// Raised for n > 3 states outside the GHZ and W-type families when no
/// numeric-oracle budget was supplied (or n is too large for the oracle).
struct UnsupportedStateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PartitionRecord {
  Partition partition;
  double F_ct = 0.0;
  double F_no_control = 0.0;
  double f_no_control = 0.0;  // (3 F_no_control - 1) / 2
  double P = 0.0;
};

enum class ReportMethod { three_qubit, ghz, w_class, w_ntype, oracle };
std::string_view to_string(ReportMethod m);

struct ControlReport {
  int n_qubits = 0;
  ReportMethod method = ReportMethod::three_qubit;
  std::vector<PartitionRecord> records;  // same order as all_partitions(n)
  double minimal_P = 0.0;
  Partition argmin;
  bool meaningful = false;
};

/// Builds minimal_P, argmin and the meaningfulness verdict from `records`.
/// Ties in P go to the first partition.
ControlReport assemble_report(int n_qubits, ReportMethod method, std::vector<PartitionRecord> records);

/// (2 + tau_kl) / 3 with workers {k, l} = {1, 2, 3} \ {j}.
double fct_three_qubit(const PureState& psi, int j);

/// fct_three_qubit(psi, j) - fidelity_from_T(rho_kl).
double control_power(const PureState& psi, int j);

/// n = 3: partial tangles and correlation matrices. n > 3: GHZ or W-type
/// closed form when the amplitudes fit (zero tolerance 1e-12), else the
/// product-measurement oracle if `oracle` is given and n <= 5.
/// Throws UnsupportedStateError otherwise.
ControlReport minimal_control_power(const PureState& psi, const std::optional<ProtocolConfig>& oracle = {});

/// a|0...0> + b|1...1>; throws NormalizationError unless |a|^2 + |b|^2 = 1.
ControlReport ghz_closed_form(int n_qubits, Complex a, Complex b);

/// Three-qubit W class with coefficients (lambda0..lambda3). Checks its
/// F(rho_kl) against the correlation-matrix route on the explicit state and
/// throws std::logic_error on a mismatch above 1e-9.
ControlReport wclass_closed_form(const std::array<double, 4>& lambda);

/// Single-excitation states sum_i alpha_i |0..1_i..0>, n >= 3.
ControlReport w_ntype_closed_form(std::span<const Complex> alphas);

/// If psi is a GHZ-type state a|0..0> + b|1..1>, returns (a, b).
std::optional<std::pair<Complex, Complex>> as_ghz(const PureState& psi, double zero_tol = 1e-12);
/// If psi has support only on single-excitation basis states, returns the alphas.
std::optional<std::vector<Complex>> as_w_ntype(const PureState& psi, double zero_tol = 1e-12);

}  // namespace ctpower
