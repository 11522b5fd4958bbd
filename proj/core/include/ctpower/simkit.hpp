#pragma once

// Brute-force protocol simulation. Nothing here goes through the closed forms
// in control_power.hpp; the only shared functionals are the fully entangled
// fraction and fidelity_from_f.

#include <cstdint>
#include <vector>

#include "ctpower/measures.hpp"
#include "ctpower/states.hpp"

namespace ctpower {

struct OptimizerConfig {
  int grid_resolution = 16;
  int refinement_iterations = 500;
};

struct ProtocolConfig {
  std::size_t mc_samples = 100000;
  OptimizerConfig optimizer;
  std::uint64_t seed = 0;
  /// Coordinate-ascent stopping threshold on the objective improvement.
  double tolerance = 1e-10;

  /// Throws std::invalid_argument if mc_samples < 1 or grid_resolution < 8.
  void validate() const;
  AngleSearchOptions angle_search() const;
};

/// One run of standard teleportation over `channel` (sender qubit first,
/// receiver second): Bell measurement on input (x) sender, outcome drawn from
/// `rng`, Pauli correction on the receiver. Returns <xi|out|xi>.
double teleport_once(const DensityMatrix& channel, const CVector& input, Rng& rng);

/// Outcome-averaged fidelity for one input (exact sum over the four outcomes).
double teleport_average(const CMatrix& channel, const CVector& input);

struct McEstimate {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  std::size_t samples = 0;
  /// Exact fidelity of the optimised protocol (six-state design average).
  double design_fidelity = 0.0;
  CMatrix sender_unitary;
  CMatrix receiver_unitary;
};

/// Teleportation fidelity with local pre-processing U_A (x) U_B optimised on
/// the channel, then estimated from cfg.mc_samples Haar-random inputs.
McEstimate mc_teleportation_fidelity(const DensityMatrix& channel, const ProtocolConfig& cfg);

struct CtOracleResult {
  /// max over controller measurements of sum_t p_t F(rho_kl^t), joint outcome
  /// probabilities p_t.
  double fidelity = 0.0;
  /// Same objective with outcomes weighted by prod_i <t_i|U_i rho_{j_i} U_i^+|t_i>,
  /// evaluated at the optimum above (diagnostic).
  double product_weight_fidelity = 0.0;
  std::vector<CMatrix> unitaries;  // one per controller, in controller order
  double probability_sum = 0.0;
  int sweeps = 0;
  bool converged = false;
};

/// Single controller j on a three-qubit pure state.
CtOracleResult ct_fidelity_oracle(const PureState& psi, int j, const ProtocolConfig& cfg);

/// Product measurement on up to three controllers; coordinate ascent, so the
/// result is a lower bound on the true maximum. Throws std::invalid_argument
/// when |J| > 3.
CtOracleResult ct_fidelity_oracle_n(const PureState& psi, const Partition& partition,
                                    const ProtocolConfig& cfg);

struct ControllerOutcome {
  double probability = 0.0;       // joint probability
  double product_weight = 0.0;    // product of single-qubit marginal weights
  CVector worker_state;           // normalized; empty if probability < 1e-12
};

/// Outcomes of measuring the controllers of `partition` in the bases given by
/// rows of `unitaries`. Outcome index bits follow controller order.
std::vector<ControllerOutcome> controller_outcomes(const PureState& psi, const Partition& partition,
                                                   const std::vector<CMatrix>& unitaries);

}  // namespace ctpower
