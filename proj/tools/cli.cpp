#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "ctpower/control_power.hpp"
#include "ctpower/measures.hpp"
#include "ctpower/parallel.hpp"
#include "ctpower/simkit.hpp"
#include "ctpower/states.hpp"

namespace ctpower::cli {

namespace {

using nlohmann::json;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 12 significant digits; anything below 1e-13 in magnitude is round-off
// around an exact zero (e.g. 2/3 - 2/3 computed along two routes).
std::string format_number(double x) {
  if (std::abs(x) < 1e-13) x = 0.0;
  return fmt::format("{:.12g}", x);
}

double rounded(double x) { return std::stod(format_number(x)); }

json partition_json(const Partition& p) { return {{"J", p.controllers}, {"k", p.k}, {"l", p.l}}; }

json report_json(const ControlReport& r) {
  json records = json::array();
  for (const auto& rec : r.records) {
    json j = partition_json(rec.partition);
    j["F_ct"] = rounded(rec.F_ct);
    j["F_no_control"] = rounded(rec.F_no_control);
    j["f_no_control"] = rounded(rec.f_no_control);
    j["P"] = rounded(rec.P);
    records.push_back(std::move(j));
  }
  return {{"n", r.n_qubits},
          {"method", std::string(to_string(r.method))},
          {"records", std::move(records)},
          {"minimal_P", rounded(r.minimal_P)},
          {"argmin", partition_json(r.argmin)},
          {"meaningful", r.meaningful}};
}

// Writes to --out when given, else to the command's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw InputError("cannot open output file '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::uint64_t seed_or_default(const CLI::Option* opt, std::uint64_t seed, std::ostream& err) {
  if (opt->count() == 0) {
    fmt::print(err, "notice: --seed not given, using seed 0\n");
    return 0;
  }
  return seed;
}

struct Range {
  double start = 0.0, stop = 0.0, step = 0.0;
  std::vector<double> values() const {
    if (!(step > 0.0) || stop < start) throw InputError("empty range");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) v[i] = std::min(start + static_cast<double>(i) * step, stop);
    return v;
  }
};

Range parse_range(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("malformed range '" + text + "', expected start:stop[:step]");
    }
  }
  if (parts.size() == 2) parts.push_back(1.0);
  if (parts.size() != 3) throw InputError("malformed range '" + text + "', expected start:stop[:step]");
  return {parts[0], parts[1], parts[2]};
}

std::pair<Complex, Complex> ghz_coefficients(double a2) {
  if (!(a2 >= 0.0 && a2 <= 1.0)) throw InputError("--a2 must lie in [0, 1]");
  return {std::sqrt(a2), std::sqrt(1.0 - a2)};
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string state_path;
  std::string family;
  int n = 3;
  double a2 = 0.5;
  std::vector<double> lambda;
  std::vector<double> alphas;
  bool oracle = false;
  int grid = 16;
  std::uint64_t seed = 0;
  std::string out;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* a2_opt = nullptr;
  CLI::Option* n_opt = nullptr;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  if (a.state_path.empty() == a.family.empty()) throw InputError("give exactly one of --state or --family");
  ControlReport report;
  if (!a.state_path.empty()) {
    const PureState psi = load_state(a.state_path);
    std::optional<ProtocolConfig> cfg;
    if (a.oracle) {
      cfg.emplace();
      cfg->optimizer.grid_resolution = a.grid;
      cfg->seed = seed_or_default(a.seed_opt, a.seed, err);
      cfg->validate();
    }
    report = minimal_control_power(psi, cfg);
  } else if (a.family == "ghz") {
    if (a.a2_opt->count() == 0) throw InputError("--family ghz needs --a2");
    const auto [ca, cb] = ghz_coefficients(a.a2);
    if (a.n < 3) throw InputError("--n must be at least 3");
    report = ghz_closed_form(a.n, ca, cb);
  } else if (a.family == "wclass") {
    if (a.lambda.size() != 4) throw InputError("--family wclass needs --l l0,l1,l2,l3");
    report = wclass_closed_form({a.lambda[0], a.lambda[1], a.lambda[2], a.lambda[3]});
  } else {  // wntype
    std::vector<Complex> alphas;
    if (!a.alphas.empty()) {
      alphas.assign(a.alphas.begin(), a.alphas.end());
    } else {
      if (a.n < 3) throw InputError("--n must be at least 3");
      alphas.assign(static_cast<std::size_t>(a.n), 1.0 / std::sqrt(static_cast<double>(a.n)));
    }
    report = w_ntype_closed_form(alphas);
  }
  Sink sink(a.out, out);
  sink.stream() << report_json(report).dump(2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string family;
  int n = 3;
  std::string a2_range = "0:1:0.01";
  std::string n_range;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::string out;
  CLI::Option* seed_opt = nullptr;
};

struct SweepRow {
  std::string params;
  ControlReport report;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  std::string header;
  std::vector<std::function<SweepRow()>> jobs;

  if (a.family == "ghz") {
    if (a.n < 3) throw InputError("--n must be at least 3");
    header = "index,n,a2,minimal_P,meaningful";
    for (double a2 : parse_range(a.a2_range).values()) {
      const auto [ca, cb] = ghz_coefficients(a2);
      jobs.emplace_back([n = a.n, a2, ca, cb] {
        return SweepRow{fmt::format("{},{}", n, format_number(a2)), ghz_closed_form(n, ca, cb)};
      });
    }
  } else if (a.family == "wntype") {
    header = "index,n,abs_alphas,minimal_P,meaningful";
    std::vector<std::vector<Complex>> points;
    if (!a.n_range.empty()) {
      const auto r = parse_range(a.n_range);
      for (double x : r.values()) {
        const int n = static_cast<int>(std::lround(x));
        if (n < 3 || n > 20) throw InputError("--n-range values must lie in 3..20");
        points.emplace_back(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
      }
    } else {
      if (a.samples == 0) throw InputError("--family wntype needs --n-range or --samples");
      if (a.n < 3 || a.n > 20) throw InputError("--n must lie in 3..20");
      Rng rng(seed_or_default(a.seed_opt, a.seed, err));
      for (std::size_t i = 0; i < a.samples; ++i) {
        std::normal_distribution<double> gauss;
        std::vector<Complex> alphas(static_cast<std::size_t>(a.n));
        double norm2 = 0.0;
        for (auto& x : alphas) {
          x = Complex(gauss(rng), gauss(rng));
          norm2 += std::norm(x);
        }
        for (auto& x : alphas) x /= std::sqrt(norm2);
        points.push_back(std::move(alphas));
      }
    }
    for (auto& alphas : points)
      jobs.emplace_back([alphas = std::move(alphas)] {
        std::string mods;
        for (const auto& x : alphas) mods += (mods.empty() ? "" : ";") + format_number(std::abs(x));
        return SweepRow{fmt::format("{},{}", alphas.size(), mods), w_ntype_closed_form(alphas)};
      });
  } else {  // wclass
    if (a.samples == 0) throw InputError("--family wclass needs --samples");
    header = "index,lambda0,lambda1,lambda2,lambda3,minimal_P,meaningful";
    Rng rng(seed_or_default(a.seed_opt, a.seed, err));
    std::normal_distribution<double> gauss;
    for (std::size_t i = 0; i < a.samples; ++i) {
      std::array<double, 4> l{};
      double norm2 = 0.0;
      for (auto& x : l) {
        x = std::abs(gauss(rng));
        norm2 += x * x;
      }
      for (auto& x : l) x /= std::sqrt(norm2);
      jobs.emplace_back([l] {
        return SweepRow{fmt::format("{},{},{},{}", format_number(l[0]), format_number(l[1]), format_number(l[2]),
                                    format_number(l[3])),
                        wclass_closed_form(l)};
      });
    }
  }
  if (jobs.empty()) throw InputError("empty sweep");

  std::vector<SweepRow> rows(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) { rows[i] = jobs[i](); });

  Sink sink(a.out, out);
  auto& s = sink.stream();
  s << header << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i)
    s << fmt::format("{},{},{},{}\n", i, rows[i].params, format_number(rows[i].report.minimal_P),
                     rows[i].report.meaningful ? "true" : "false");
  return kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string suite;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  int grid = 16;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* samples_opt = nullptr;
};

class CheckLog {
 public:
  explicit CheckLog(std::ostream& out) : out_(out) {}
  // Passes when `value` <= `limit`.
  void at_most(const std::string& name, const std::string& quantity, double value, double limit) {
    const bool ok = value <= limit;
    failed_ |= !ok;
    fmt::print(out_, "{:<44} {} {:.3e} (limit {:.3e})  {}\n", name, quantity, value, limit, ok ? "PASS" : "FAIL");
  }
  void at_least(const std::string& name, const std::string& quantity, double value, double limit) {
    const bool ok = value >= limit;
    failed_ |= !ok;
    fmt::print(out_, "{:<44} {} {:.3e} (limit {:.3e})  {}\n", name, quantity, value, limit, ok ? "PASS" : "FAIL");
  }
  int exit_code() const { return failed_ ? kExitVerificationFailed : kExitOk; }

 private:
  std::ostream& out_;
  bool failed_ = false;
};

int verify_three_qubit(const VerifyArgs& a, const ProtocolConfig& cfg, std::ostream& out) {
  const std::size_t n = a.samples_opt->count() ? a.samples : 200;
  Rng rng(cfg.seed);
  std::vector<PureState> states;
  for (std::size_t i = 0; i < n; ++i) states.push_back(random_pure_state(3, rng));

  std::vector<std::array<double, 3>> dev(n), prob(n), margin(n);
  parallel_for(n, [&](std::size_t i) {
    for (int j = 1; j <= 3; ++j) {
      const auto r = ct_fidelity_oracle(states[i], j, cfg);
      const Partition p = Partition::three_qubit(j);
      const auto idx = static_cast<std::size_t>(j - 1);
      dev[i][idx] = std::abs(r.fidelity - fct_three_qubit(states[i], j));
      prob[i][idx] = std::abs(r.probability_sum - 1.0);
      margin[i][idx] = r.fidelity - fidelity_from_T(states[i].reduced({p.k, p.l}));
    }
  });
  double max_dev = 0.0, max_prob = 0.0, min_margin = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (int j = 0; j < 3; ++j) {
      max_dev = std::max(max_dev, dev[i][j]);
      max_prob = std::max(max_prob, prob[i][j]);
      min_margin = std::min(min_margin, margin[i][j]);
    }
  CheckLog log(out);
  fmt::print(out, "three-qubit: {} states x 3 controllers, seed {}\n", n, cfg.seed);
  log.at_most("oracle vs (2 + tau_kl)/3", "max deviation", max_dev, 1e-5);
  log.at_most("outcome probabilities sum to 1", "max deviation", max_prob, 1e-12);
  log.at_least("oracle >= F(rho_kl)", "min margin", min_margin, -1e-6);
  return log.exit_code();
}

int verify_nqubit(const VerifyArgs& a, const ProtocolConfig& cfg, std::ostream& out) {
  const std::size_t points = a.samples_opt->count() ? a.samples : 10;
  Rng rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  struct Job {
    PureState psi;
    Partition partition;
    double expected;
  };
  std::vector<Job> jobs;
  for (int n : {4, 5}) {
    for (std::size_t i = 0; i < points; ++i) {
      const double a2 = unit(rng);
      const double phase = 2.0 * std::numbers::pi * unit(rng);
      const Complex ca = std::sqrt(a2), cb = std::polar(std::sqrt(1.0 - a2), phase);
      const PureState psi = make_ghz(n, ca, cb);
      for (const auto& p : all_partitions(n)) jobs.push_back({psi, p, 2.0 * (std::abs(ca) * std::abs(cb) + 1.0) / 3.0});
    }
  }
  const PureState w4 = make_uniform_w(4);
  const std::size_t ghz_jobs = jobs.size();
  for (const auto& p : all_partitions(4)) jobs.push_back({w4, p, 2.5 / 3.0});

  std::vector<double> dev(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    dev[i] = std::abs(ct_fidelity_oracle_n(jobs[i].psi, jobs[i].partition, cfg).fidelity - jobs[i].expected);
  });
  CheckLog log(out);
  fmt::print(out, "nqubit: {} GHZ points for n = 4, 5 (all partitions), standard W(4); seed {}\n", points, cfg.seed);
  log.at_most("GHZ oracle vs 2(|a||b| + 1)/3", "max deviation",
              *std::max_element(dev.begin(), dev.begin() + static_cast<std::ptrdiff_t>(ghz_jobs)), 1e-5);
  log.at_most("W(4) oracle vs (2|a_k||a_l| + 2)/3", "max deviation",
              *std::max_element(dev.begin() + static_cast<std::ptrdiff_t>(ghz_jobs), dev.end()), 1e-5);
  return log.exit_code();
}

int verify_prop1(const VerifyArgs& a, const ProtocolConfig& cfg, std::ostream& out) {
  const std::size_t n = a.samples_opt->count() ? a.samples : 10000;
  Rng rng(cfg.seed);
  std::normal_distribution<double> gauss;
  double max_p = -1.0, max_gap = 0.0;
  std::array<double, 4> argmax{};
  for (std::size_t i = 0; i < n; ++i) {
    std::array<double, 4> l{};
    double norm2 = 0.0;
    for (auto& x : l) {
      x = std::abs(gauss(rng));
      norm2 += x * x;
    }
    for (auto& x : l) x /= std::sqrt(norm2);
    const auto closed = wclass_closed_form(l);
    const auto generic = minimal_control_power(make_w_class(l));
    max_gap = std::max(max_gap, std::abs(closed.minimal_P - generic.minimal_P));
    if (closed.minimal_P > max_p) {
      max_p = closed.minimal_P;
      argmax = l;
    }
  }
  CheckLog log(out);
  fmt::print(out, "prop1: {} W-class samples, seed {}\n", n, cfg.seed);
  log.at_most("max minimal_P vs 2/9", "max observed", max_p, 2.0 / 9.0 + 1e-9);
  fmt::print(out, "  attained at lambda = ({:.6f}, {:.6f}, {:.6f}, {:.6f})\n", argmax[0], argmax[1], argmax[2],
             argmax[3]);
  log.at_most("closed form vs generic three-qubit route", "max deviation", max_gap, 1e-9);
  return log.exit_code();
}

int verify_fef(const VerifyArgs& a, const ProtocolConfig& cfg, std::ostream& out) {
  const std::size_t n = a.samples_opt->count() ? a.samples : 1000;
  Rng rng(cfg.seed);
  std::vector<DensityMatrix> states;
  for (std::size_t i = 0; i < n; ++i) states.push_back(random_density_matrix(2, rng));
  std::vector<double> gap(n);
  const auto opts = cfg.angle_search();
  parallel_for(n, [&](std::size_t i) {
    gap[i] = std::abs(fully_entangled_fraction(states[i]) - fully_entangled_fraction_numeric(states[i], opts));
  });
  CheckLog log(out);
  fmt::print(out, "fef: {} random two-qubit mixed states, seed {}\n", n, cfg.seed);
  log.at_most("magic-basis vs numeric FEF", "max gap", *std::max_element(gap.begin(), gap.end()), 1e-6);
  return log.exit_code();
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  ProtocolConfig cfg;
  cfg.optimizer.grid_resolution = a.grid;
  cfg.seed = seed_or_default(a.seed_opt, a.seed, err);
  if (a.samples_opt->count() && a.samples == 0) throw InputError("--samples must be positive");
  cfg.validate();
  if (a.suite == "three-qubit") return verify_three_qubit(a, cfg, out);
  if (a.suite == "nqubit") return verify_nqubit(a, cfg, out);
  if (a.suite == "prop1") return verify_prop1(a, cfg, out);
  return verify_fef(a, cfg, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Control power of controlled teleportation", "ctpower"};
  app.require_subcommand(1);

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Control-power report for one state (JSON)");
  analyze->add_option("--state", an.state_path, "State file (JSON)");
  analyze->add_option("--family", an.family, "State family")->check(CLI::IsMember({"ghz", "wclass", "wntype"}));
  an.n_opt = analyze->add_option("--n", an.n, "Number of qubits (ghz, uniform wntype)");
  an.a2_opt = analyze->add_option("--a2", an.a2, "|a|^2 for ghz");
  analyze->add_option("--l", an.lambda, "lambda0,lambda1,lambda2,lambda3 for wclass")->delimiter(',');
  analyze->add_option("--alphas", an.alphas, "Real amplitudes for wntype")->delimiter(',');
  analyze->add_flag("--oracle", an.oracle, "Allow the numeric oracle for n > 3 states outside the families");
  analyze->add_option("--grid", an.grid, "Oracle angle-grid resolution")->capture_default_str();
  an.seed_opt = analyze->add_option("--seed", an.seed, "Oracle seed");
  analyze->add_option("--out", an.out, "Write the report here instead of stdout");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Minimal control power over a family grid (CSV)");
  sweep->add_option("--family", sw.family, "State family")
      ->required()
      ->check(CLI::IsMember({"ghz", "wclass", "wntype"}));
  sweep->add_option("--n", sw.n, "Number of qubits")->capture_default_str();
  sweep->add_option("--a2", sw.a2_range, "ghz: |a|^2 range start:stop:step")->capture_default_str();
  sweep->add_option("--n-range", sw.n_range, "wntype: qubit-count range start:stop (uniform amplitudes)");
  sweep->add_option("--samples", sw.samples, "wclass/wntype: number of random points");
  sw.seed_opt = sweep->add_option("--seed", sw.seed, "Sampling seed");
  sweep->add_option("--out", sw.out, "Write the CSV here instead of stdout");

  VerifyArgs ve;
  auto* verify = app.add_subcommand("verify", "Run a verification campaign");
  verify->add_option("suite", ve.suite, "Campaign")
      ->required()
      ->check(CLI::IsMember({"three-qubit", "nqubit", "prop1", "fef"}));
  ve.samples_opt = verify->add_option("--samples", ve.samples, "Number of random samples");
  ve.seed_opt = verify->add_option("--seed", ve.seed, "Sampling seed");
  verify->add_option("--grid", ve.grid, "Angle-grid resolution")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*analyze) return cmd_analyze(an, out, err);
    if (*sweep) return cmd_sweep(sw, out, err);
    return cmd_verify(ve, out, err);
  } catch (const UnsupportedStateError& e) {
    fmt::print(err, "unsupported: {}\n", e.what());
    return kExitUnsupported;
  } catch (const InputError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInputError;
  } catch (const StateError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInputError;
  } catch (const std::domain_error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInputError;
  } catch (const std::logic_error& e) {
    fmt::print(err, "internal check failed: {}\n", e.what());
    return kExitVerificationFailed;
  }
}

}  // namespace ctpower::cli
