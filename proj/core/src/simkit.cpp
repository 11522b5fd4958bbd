#include "ctpower/simkit.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ctpower/parallel.hpp"

namespace ctpower {

void ProtocolConfig::validate() const {
  if (mc_samples < 1) throw std::invalid_argument("ProtocolConfig: mc_samples must be >= 1");
  if (optimizer.grid_resolution < 8)
    throw std::invalid_argument("ProtocolConfig: grid_resolution must be >= 8");
  if (optimizer.refinement_iterations < 0)
    throw std::invalid_argument("ProtocolConfig: refinement_iterations must be >= 0");
}

AngleSearchOptions ProtocolConfig::angle_search() const {
  AngleSearchOptions opts;
  opts.grid_resolution = optimizer.grid_resolution;
  opts.refine.max_iterations = optimizer.refinement_iterations;
  return opts;
}

// ---------------------------------------------------------------- teleportation

namespace {

struct BellBranch {
  double probability = 0.0;
  double overlap = 0.0;  // p_t * F_t
};

// Bell outcome t projects input (x) sender onto (sigma_t (x) I)|Phi+>; the
// receiver then applies sigma_t.
std::array<BellBranch, 4> bell_branches(const CMatrix& rho, const CVector& xi) {
  std::array<BellBranch, 4> out;
  const double h = 1.0 / std::sqrt(2.0);
  for (int t = 0; t < 4; ++t) {
    const CMatrix& s = pauli(t);
    // u = sigma_t^dagger xi (Paulis are Hermitian)
    const Complex u0 = s(0, 0) * xi[0] + s(0, 1) * xi[1];
    const Complex u1 = s(1, 0) * xi[0] + s(1, 1) * xi[1];
    const std::array<Complex, 2> w = {h * u0, h * u1};
    // Receiver block M(c, c') = sum_{b,b'} w_b rho(2b+c, 2b'+c') conj(w_b')
    std::array<Complex, 4> m{};
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t cp = 0; cp < 2; ++cp) {
        Complex acc = 0.0;
        for (std::size_t b = 0; b < 2; ++b)
          for (std::size_t bp = 0; bp < 2; ++bp)
            acc += w[b] * rho(2 * b + c, 2 * bp + cp) * std::conj(w[bp]);
        m[2 * c + cp] = acc;
      }
    out[t].probability = (m[0] + m[3]).real();
    const Complex ov = std::conj(u0) * (m[0] * u0 + m[1] * u1) + std::conj(u1) * (m[2] * u0 + m[3] * u1);
    out[t].overlap = ov.real();
  }
  return out;
}

CMatrix rotate_channel(const CMatrix& rho, const CMatrix& ua, const CMatrix& ub) {
  const CMatrix u = kron(ua, ub);
  return u * rho * u.adjoint();
}

const std::array<CVector, 6>& pauli_eigenstates() {
  static const std::array<CVector, 6> states = [] {
    const double h = 1.0 / std::sqrt(2.0);
    const Complex i(0.0, 1.0);
    return std::array<CVector, 6>{CVector{1.0, 0.0},    CVector{0.0, 1.0},   CVector{h, h},
                                  CVector{h, -h},       CVector{h, i * h},   CVector{h, -i * h}};
  }();
  return states;
}

double design_average(const CMatrix& rho) {
  double acc = 0.0;
  for (const auto& xi : pauli_eigenstates()) acc += teleport_average(rho, xi);
  return acc / 6.0;
}

}  // namespace

double teleport_average(const CMatrix& channel, const CVector& input) {
  if (channel.rows() != 4 || channel.cols() != 4 || input.dim() != 2)
    throw std::invalid_argument("teleport_average: expects a 4x4 channel and a qubit input");
  double f = 0.0;
  for (const auto& b : bell_branches(channel, input)) f += b.overlap;
  return f;
}

double teleport_once(const DensityMatrix& channel, const CVector& input, Rng& rng) {
  if (channel.dim() != 4 || input.dim() != 2)
    throw std::invalid_argument("teleport_once: expects a two-qubit channel and a qubit input");
  const auto branches = bell_branches(channel.matrix(), input);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  double u = uniform(rng);
  std::size_t t = 0;
  for (; t < 3; ++t) {
    if (u < branches[t].probability) break;
    u -= branches[t].probability;
  }
  if (branches[t].probability <= 0.0) return 0.0;
  return branches[t].overlap / branches[t].probability;
}

McEstimate mc_teleportation_fidelity(const DensityMatrix& channel, const ProtocolConfig& cfg) {
  cfg.validate();
  if (channel.dim() != 4) throw std::invalid_argument("mc_teleportation_fidelity: two-qubit channel expected");
  const CMatrix& rho = channel.matrix();
  const CMatrix id = CMatrix::identity(2);

  // Only U_B U_A^T enters the fidelity, so a grid over the receiver rotation
  // seeds a joint six-angle refinement.
  const auto seed = maximize_over_su2(
      [&](const CMatrix& ub) { return design_average(rotate_channel(rho, id, ub)); }, cfg.angle_search());
  NelderMeadOptions nm;
  nm.max_iterations = cfg.optimizer.refinement_iterations;
  const auto joint = nelder_mead_minimize(
      [&](std::span<const double> x) {
        return -design_average(rotate_channel(rho, su2(x[0], x[1], x[2]), su2(x[3], x[4], x[5])));
      },
      {0.0, 0.0, 0.0, seed.theta, seed.phi, seed.chi}, nm);

  McEstimate est;
  if (-joint.value > seed.value) {
    est.sender_unitary = su2(joint.x[0], joint.x[1], joint.x[2]);
    est.receiver_unitary = su2(joint.x[3], joint.x[4], joint.x[5]);
    est.design_fidelity = -joint.value;
  } else {
    est.sender_unitary = id;
    est.receiver_unitary = seed.unitary();
    est.design_fidelity = seed.value;
  }
  const DensityMatrix optimised(rotate_channel(rho, est.sender_unitary, est.receiver_unitary));

  constexpr std::size_t kChunk = 4096;
  const std::size_t n = cfg.mc_samples;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> sums(chunks, 0.0), sums_sq(chunks, 0.0);
  parallel_for(chunks, [&](std::size_t c) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(c), 0x7e1e9047U};
    Rng rng(seq);
    const std::size_t begin = c * kChunk;
    const std::size_t end = std::min(n, begin + kChunk);
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const CVector xi = haar_state(1, rng);
      const double f = teleport_once(optimised, xi, rng);
      s += f;
      s2 += f * f;
    }
    sums[c] = s;
    sums_sq[c] = s2;
  });
  double total = 0.0, total_sq = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    total += sums[c];
    total_sq += sums_sq[c];
  }
  const double count = static_cast<double>(n);
  est.samples = n;
  est.mean = total / count;
  if (n > 1) {
    const double var = std::max(0.0, (total_sq - count * est.mean * est.mean) / (count - 1.0));
    est.stderr_of_mean = std::sqrt(var / count);
  }
  return est;
}

// ---------------------------------------------------------------- controlled teleportation

std::vector<ControllerOutcome> controller_outcomes(const PureState& psi, const Partition& partition,
                                                   const std::vector<CMatrix>& unitaries) {
  const auto& ctrl = partition.controllers;
  const std::size_t m = ctrl.size();
  if (psi.n_qubits() != partition.n_qubits)
    throw std::invalid_argument("controller_outcomes: partition does not match the state");
  if (unitaries.size() != m)
    throw std::invalid_argument("controller_outcomes: one unitary per controller required");

  // Rows: controller register; columns: workers (k, l) in ascending order.
  const CMatrix amps = reshape_for_reduction(psi.amplitudes(), psi.n_qubits(), ctrl);
  CMatrix u_all = unitaries[0];
  for (std::size_t i = 1; i < m; ++i) u_all = kron(u_all, unitaries[i]);
  const CMatrix projected = u_all * amps;

  std::vector<std::array<double, 2>> marginal_weights(m);
  for (std::size_t i = 0; i < m; ++i) {
    const CMatrix r = psi.reduced({ctrl[i]}).matrix();
    const CMatrix rotated = unitaries[i] * r * unitaries[i].adjoint();
    marginal_weights[i] = {rotated(0, 0).real(), rotated(1, 1).real()};
  }

  const std::size_t outcomes = std::size_t{1} << m;
  std::vector<ControllerOutcome> out(outcomes);
  for (std::size_t t = 0; t < outcomes; ++t) {
    auto& o = out[t];
    double p = 0.0;
    for (std::size_t w = 0; w < 4; ++w) p += std::norm(projected(t, w));
    o.probability = p;
    o.product_weight = 1.0;
    for (std::size_t i = 0; i < m; ++i) o.product_weight *= marginal_weights[i][(t >> (m - 1 - i)) & 1U];
    if (p >= 1e-12) {
      o.worker_state = CVector(4);
      const double s = 1.0 / std::sqrt(p);
      for (std::size_t w = 0; w < 4; ++w) o.worker_state[w] = s * projected(t, w);
    }
  }
  return out;
}

namespace {

struct CtObjective {
  double joint = 0.0;
  double product = 0.0;
  double probability_sum = 0.0;
};

CtObjective evaluate_ct(const PureState& psi, const Partition& partition, const std::vector<CMatrix>& unitaries) {
  CtObjective obj;
  for (const auto& o : controller_outcomes(psi, partition, unitaries)) {
    obj.probability_sum += o.probability;
    if (o.worker_state.dim() == 0) continue;
    const double f = fidelity_from_f(fully_entangled_fraction(DensityMatrix::from_pure(o.worker_state)));
    obj.joint += o.probability * f;
    obj.product += o.product_weight * f;
  }
  return obj;
}

struct AscentResult {
  std::vector<CMatrix> unitaries;
  double value = 0.0;
  int sweeps = 0;
  bool converged = false;
};

AscentResult coordinate_ascent(const PureState& psi, const Partition& partition, std::vector<CMatrix> start,
                               const ProtocolConfig& cfg) {
  AscentResult res;
  res.unitaries = std::move(start);
  res.value = evaluate_ct(psi, partition, res.unitaries).joint;
  const auto search = cfg.angle_search();
  constexpr int kMaxSweeps = 50;
  for (int sweep = 1; sweep <= kMaxSweeps; ++sweep) {
    const double before = res.value;
    for (std::size_t i = 0; i < res.unitaries.size(); ++i) {
      auto trial = res.unitaries;
      const auto best = maximize_over_su2(
          [&](const CMatrix& u) {
            trial[i] = u;
            return evaluate_ct(psi, partition, trial).joint;
          },
          search);
      if (best.value > res.value) {
        res.value = best.value;
        res.unitaries[i] = best.unitary();
      }
    }
    res.sweeps = sweep;
    // A single controller is solved globally by one grid-seeded search.
    if (res.unitaries.size() == 1 || res.value - before < cfg.tolerance) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace

CtOracleResult ct_fidelity_oracle_n(const PureState& psi, const Partition& partition, const ProtocolConfig& cfg) {
  cfg.validate();
  const std::size_t m = partition.controllers.size();
  if (m == 0 || m > 3) throw std::invalid_argument("ct_fidelity_oracle_n: supports 1 to 3 controllers");
  if (psi.n_qubits() != partition.n_qubits)
    throw std::invalid_argument("ct_fidelity_oracle_n: partition does not match the state");

  std::vector<std::vector<CMatrix>> starts;
  starts.emplace_back(m, CMatrix::identity(2));
  if (m > 1) {
    // The computational basis is a flat plateau for GHZ-like states, so also
    // start from a balanced basis and from a seeded random configuration.
    starts.emplace_back(m, su2(std::numbers::pi / 4, 0.0, 0.0));
    Rng rng(cfg.seed ^ 0x5bd1e995ULL);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<CMatrix> random_start;
    for (std::size_t i = 0; i < m; ++i) {
      const double a = angle(rng), b = angle(rng), c = angle(rng);
      random_start.push_back(su2(a / 4.0, b, c));
    }
    starts.push_back(std::move(random_start));
  }

  AscentResult best;
  best.value = -1.0;
  int sweeps = 0;
  for (auto& s : starts) {
    auto r = coordinate_ascent(psi, partition, std::move(s), cfg);
    sweeps += r.sweeps;
    if (r.value > best.value) best = std::move(r);
  }

  const auto at_opt = evaluate_ct(psi, partition, best.unitaries);
  CtOracleResult out;
  out.fidelity = at_opt.joint;
  out.product_weight_fidelity = at_opt.product;
  out.probability_sum = at_opt.probability_sum;
  out.unitaries = std::move(best.unitaries);
  out.sweeps = sweeps;
  out.converged = best.converged;
  return out;
}

CtOracleResult ct_fidelity_oracle(const PureState& psi, int j, const ProtocolConfig& cfg) {
  if (psi.n_qubits() != 3) throw std::invalid_argument("ct_fidelity_oracle: expected three qubits");
  return ct_fidelity_oracle_n(psi, Partition::three_qubit(j), cfg);
}

}  // namespace ctpower
