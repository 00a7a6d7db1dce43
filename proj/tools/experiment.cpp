#include "experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "monoplay/diagnostics.hpp"
#include "monoplay/dynamics.hpp"
#include "monoplay/errors.hpp"
#include "monoplay/io.hpp"
#include "monoplay/operators.hpp"
#include "monoplay/potential.hpp"
#include "monoplay/scli.hpp"

namespace monoplay::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Caps that keep the stored potential matrices at desk scale.
constexpr int kMaxDim = 64;
constexpr long kMaxPotentialEntries = 400'000'000;

class Summary {
 public:
  explicit Summary(std::ostream& os) : os_(os) {}

  void check(const std::string& name, bool holds, const std::string& detail = "") {
    os_ << name << ": " << (holds ? "holds" : "fails");
    if (!detail.empty()) os_ << " (" << detail << ")";
    os_ << '\n';
    if (!holds) failed_ = true;
  }
  void vacuous(const std::string& name, const std::string& detail) {
    os_ << name << ": vacuous (" << detail << ")\n";
  }
  void value(const std::string& name, const std::string& v) { os_ << name << ": " << v << '\n'; }
  void value(const std::string& name, double v) { value(name, format_double(v)); }
  bool failed() const { return failed_; }

 private:
  std::ostream& os_;
  bool failed_ = false;
};

std::string g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void expect_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

const json& need(const json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("missing required key '" + key + "'");
  return j.at(key);
}

double as_double(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError("'" + key + "' must be finite");
  return d;
}

double positive(const json& j, const std::string& key) {
  const double d = as_double(need(j, key), key);
  if (!(d > 0.0)) throw ConfigError("'" + key + "' must be positive");
  return d;
}

double optional_positive(const json& j, const std::string& key, double fallback) {
  return j.contains(key) ? positive(j, key) : fallback;
}

int positive_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
  const long long x = v.get<long long>();
  if (x < 1 || x > 100'000'000) throw ConfigError("'" + key + "' must be a positive integer");
  return static_cast<int>(x);
}

int positive_int(const json& j, const std::string& key, std::optional<int> fallback) {
  if (!j.contains(key)) {
    if (!fallback) throw ConfigError("missing required key '" + key + "'");
    return *fallback;
  }
  return positive_int(j.at(key), key);
}

Vec as_vec(const json& v, const std::string& key) {
  if (!v.is_array() || v.empty()) throw ConfigError("'" + key + "' must be a nonempty array");
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = as_double(v[i], key);
  return out;
}

std::vector<double> as_list(const json& v, const std::string& key) {
  const Vec x = as_vec(v, key);
  return std::vector<double>(x.data(), x.data() + x.size());
}

Mat as_mat(const json& v, const std::string& key) {
  if (!v.is_array() || v.empty() || !v[0].is_array() || v[0].empty())
    throw ConfigError("'" + key + "' must be a nonempty list of rows");
  const std::size_t rows = v.size();
  const std::size_t cols = v[0].size();
  Mat out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!v[i].is_array() || v[i].size() != cols) throw ConfigError("'" + key + "' rows differ in length");
    for (std::size_t k = 0; k < cols; ++k) out(i, k) = as_double(v[i][k], key);
  }
  return out;
}

MonotoneOperator parse_operator(const json& j, double D) {
  expect_keys(j, {"kind", "M", "A", "S", "b", "b1", "b2", "epsilon", "nu", "n"}, "operator");
  const json& kind_j = need(j, "kind");
  if (!kind_j.is_string()) throw ConfigError("'kind' must be a string");
  OperatorKind kind;
  try {
    kind = operator_kind_from_string(kind_j.get<std::string>());
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
  auto check_only = [&](std::set<std::string> allowed) {
    allowed.insert("kind");
    expect_keys(j, allowed, "operator of kind " + kind_j.get<std::string>());
  };
  switch (kind) {
    case OperatorKind::kLinear: {
      check_only({"A", "b"});
      const Mat A = as_mat(need(j, "A"), "A");
      const Vec b = j.contains("b") ? as_vec(j.at("b"), "b") : Vec::Zero(A.rows());
      return make_linear(A, b, D);
    }
    case OperatorKind::kBilinear:
    case OperatorKind::kPerturbedBilinear: {
      const bool perturbed = kind == OperatorKind::kPerturbedBilinear;
      std::set<std::string> allowed{"M", "nu", "n", "b1", "b2"};
      if (perturbed) allowed.insert("epsilon");
      check_only(allowed);
      Mat M;
      if (j.contains("M")) {
        if (j.contains("nu") || j.contains("n")) throw ConfigError("give either M or nu and n");
        M = as_mat(j.at("M"), "M");
      } else {
        const double nu = positive(j, "nu");
        const int n = positive_int(j, "n", std::nullopt);
        if (n % 2 != 0) throw ConfigError("'n' must be even for min-max operators");
        M = nu * Mat::Identity(n / 2, n / 2);
      }
      const Vec b1 = j.contains("b1") ? as_vec(j.at("b1"), "b1") : Vec::Zero(M.rows());
      const Vec b2 = j.contains("b2") ? as_vec(j.at("b2"), "b2") : Vec::Zero(M.cols());
      if (perturbed) return make_perturbed_bilinear(M, b1, b2, positive(j, "epsilon"), D);
      return make_bilinear(M, b1, b2, D);
    }
    case OperatorKind::kQuadraticMin: {
      check_only({"S", "b"});
      const Mat S = as_mat(need(j, "S"), "S");
      const Vec b = j.contains("b") ? as_vec(j.at("b"), "b") : Vec::Zero(S.rows());
      return make_quadratic_min(S, b, D);
    }
  }
  throw ConfigError("unsupported operator kind");
}

std::vector<json> operator_specs(const json& config) {
  const json& o = need(config, "operator");
  if (o.is_array()) {
    if (o.empty()) throw ConfigError("'operator' list is empty");
    return std::vector<json>(o.begin(), o.end());
  }
  return {o};
}

SCLICoefficients parse_coefficients(const json& j) {
  if (j.is_string()) throw ConfigError("coefficient presets need an object, e.g. {\"preset\": \"og\", \"eta\": 0.01}");
  expect_keys(j, {"preset", "eta", "alpha", "beta", "gamma", "delta"}, "coefficients");
  if (j.contains("preset")) {
    expect_keys(j, {"preset", "eta"}, "coefficients with a preset");
    const std::string preset = need(j, "preset").get<std::string>();
    const double eta = positive(j, "eta");
    if (preset == "og") return og_as_scli(eta);
    if (preset == "gd") return gd_as_scli(eta);
    throw ConfigError("unknown coefficient preset '" + preset + "'");
  }
  SCLICoefficients c;
  c.alpha = as_list(need(j, "alpha"), "alpha");
  c.beta = as_list(need(j, "beta"), "beta");
  c.gamma = as_double(need(j, "gamma"), "gamma");
  c.delta = as_double(need(j, "delta"), "delta");
  if (c.alpha.size() != c.beta.size()) throw ConfigError("alpha and beta must have equal length");
  return c;
}

Algorithm parse_algorithm(const json& j) {
  if (!j.is_string()) throw ConfigError("'algorithm' must be a string");
  const std::string a = j.get<std::string>();
  if (a == "og") return Algorithm::kOG;
  if (a == "og-peg") return Algorithm::kOGPeg;
  if (a == "eg") return Algorithm::kEG;
  if (a == "gd") return Algorithm::kGD;
  if (a == "scli") return Algorithm::kSCLI;
  throw ConfigError("unknown algorithm '" + a + "'");
}

Vec sized(const Vec& v, const MonotoneOperator& op, const std::string& key) {
  if (v.size() != op.dim()) throw ConfigError("'" + key + "' has the wrong dimension");
  return v;
}

struct RunInput {
  Algorithm algorithm = Algorithm::kOG;
  double eta = 0.0;
  int T = 0;
};

double step_size(const json& config, std::size_t i, std::size_t count) {
  const json& e = need(config, "eta");
  if (!e.is_array()) return positive(config, "eta");
  if (e.size() != count) throw ConfigError("'eta' list must match the operator list");
  const double eta = as_double(e[i], "eta");
  if (!(eta > 0.0)) throw ConfigError("'eta' must be positive");
  return eta;
}

Trace run_from_config(const json& config, const MonotoneOperator& op, RunInput& in, std::size_t i,
                      std::size_t count) {
  in.algorithm = parse_algorithm(need(config, "algorithm"));
  in.T = positive_int(config, "T", std::nullopt);
  if (in.algorithm == Algorithm::kSCLI) {
    if (config.contains("eta")) throw ConfigError("'eta' is implied by the coefficients for scli runs");
    const SCLICoefficients c = parse_coefficients(need(config, "coefficients"));
    const json& inits_j = need(config, "inits");
    if (!inits_j.is_array()) throw ConfigError("'inits' must be a list of vectors");
    std::vector<Vec> inits;
    for (const json& v : inits_j) inits.push_back(sized(as_vec(v, "inits"), op, "inits"));
    Trace tr = run_scli(op, c, inits, in.T);
    return tr;
  }
  in.eta = step_size(config, i, count);
  const json& init = need(config, "init");
  expect_keys(init, {"z0", "z_minus1"}, "init");
  const Vec z0 = sized(as_vec(need(init, "z0"), "z0"), op, "z0");
  const Vec zm1 = init.contains("z_minus1") ? sized(as_vec(init.at("z_minus1"), "z_minus1"), op, "z_minus1") : z0;
  switch (in.algorithm) {
    case Algorithm::kOG: return run_og(op, zm1, z0, in.eta, in.T);
    case Algorithm::kOGPeg: return run_og_peg(op, zm1, z0, in.eta, in.T);
    case Algorithm::kEG: {
      std::optional<double> radius;
      if (config.contains("projection_radius")) radius = positive(config, "projection_radius");
      return run_eg(op, z0, in.eta, in.T, radius);
    }
    case Algorithm::kGD: return run_gd(op, z0, in.eta, in.T);
    case Algorithm::kSCLI: break;
  }
  throw ConfigError("unsupported algorithm");
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  body(os);
}

std::string indexed(const std::string& stem, std::size_t i, std::size_t count) {
  return count == 1 ? stem + ".csv" : stem + "_" + std::to_string(i) + ".csv";
}

void report_og_checks(Summary& s, const Trace& tr, const MonotoneOperator& op, double D,
                      const std::string& prefix) {
  const BoundCheck t1 = theorem1_check(tr, D, tr.eta, op.ell(), op.lambda());
  if (t1.vacuous)
    s.vacuous(prefix + "theorem1", "step size above min(1/(150 ell), 1/(1711 D Lambda)); margin " + g(t1.margin));
  else
    s.check(prefix + "theorem1", t1.holds, "margin " + g(t1.margin) + " at T=" + std::to_string(t1.worst_t));

  for (int S : {1, 3}) {
    if (S > 1 && !(3 * S < tr.steps())) continue;
    const BoundCheck l1 = lemma1_check(tr, D, tr.eta, op.ell(), S);
    const std::string name = prefix + (S == 1 ? "lemma1_best_iterate" : "lemma1_window_s" + std::to_string(S));
    if (l1.vacuous)
      s.vacuous(name, "10 eta^2 ell^2 >= 1");
    else
      s.check(name, l1.holds, "margin " + g(l1.margin));
  }

  const GrowthCheck gr = short_term_growth_check(tr, tr.eta, op.ell());
  s.check(prefix + "lemma4_short_term_growth", gr.holds,
          std::to_string(gr.violations) + " violations, worst log excess " + g(gr.worst_log_excess));

  if (op.equilibrium()) {
    const IterateBoundCheck bi = bounded_iterates_check(tr, *op.equilibrium());
    const std::string detail = "max distance " + g(bi.max_dist) + " vs " + g(bi.reference);
    if (bi.finding)
      s.value(prefix + "bounded_iterates", "finding (inits differ; " + detail + ")");
    else
      s.check(prefix + "bounded_iterates", bi.holds, detail);
  }
}

int cmd_simulate(const json& config, const fs::path& out, Summary& s) {
  expect_keys(config, {"command", "description", "operator", "algorithm", "coefficients", "eta", "T", "D",
                       "init", "inits", "projection_radius"},
              "simulate config");
  const double D = positive(config, "D");
  const auto specs = operator_specs(config);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const MonotoneOperator op = parse_operator(specs[i], D);
    RunInput in;
    const Trace tr = run_from_config(config, op, in, i, specs.size());
    write_file(out / indexed("trace", i, specs.size()), [&](std::ostream& os) { write_trace_csv(os, tr); });
    const std::string prefix = specs.size() == 1 ? "" : "run" + std::to_string(i) + ".";
    s.value(prefix + "final_grad_gap", tr.grad_norm(tr.last_t()));
    if (in.algorithm == Algorithm::kOG || in.algorithm == Algorithm::kOGPeg) {
      report_og_checks(s, tr, op, D, prefix);
      const Series avg = averaged_iterate_gap(tr, op);
      if (avg.x.size() >= 10) {
        try {
          const RateFit fit = rate_fit(avg.x, avg.y);
          s.value(prefix + "averaged_gap_slope", g(fit.slope));
        } catch (const NumericError&) {
        }
      }
    }
  }
  return s.failed() ? kCheckFailed : kOk;
}

int cmd_gap(const json& config, const fs::path& out, Summary& s) {
  expect_keys(config, {"command", "description", "operator", "algorithm", "coefficients", "eta", "T", "D",
                       "init", "inits", "projection_radius"},
              "gap config");
  const double D = positive(config, "D");
  const auto specs = operator_specs(config);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const MonotoneOperator op = parse_operator(specs[i], D);
    RunInput in;
    const Trace tr = run_from_config(config, op, in, i, specs.size());
    const auto reports = gap_reports(op, tr);
    write_file(out / indexed("gap", i, specs.size()), [&](std::ostream& os) { write_gap_csv(os, reports); });
    const std::string prefix = specs.size() == 1 ? "" : "run" + std::to_string(i) + ".";
    bool prop3 = true;
    bool exact = false;
    double worst = 0.0;
    for (const GapReport& r : reports) {
      if (!r.total_gap) continue;
      exact = true;
      prop3 = prop3 && *r.total_gap <= r.total_gap_bound + 1e-9;
      if (r.total_gap_bound > 0.0) worst = std::max(worst, *r.total_gap / r.total_gap_bound);
    }
    if (exact)
      s.check(prefix + "prop3_gap_bound", prop3, "max gap/bound " + g(worst));
    else
      s.value(prefix + "total_gap", "bound only (no closed form for this instance)");
    if (in.algorithm == Algorithm::kOG || in.algorithm == Algorithm::kOGPeg) {
      const BoundCheck t1 = theorem1_check(tr, D, tr.eta, op.ell(), op.lambda());
      if (t1.vacuous) {
        s.vacuous(prefix + "theorem1", "step size above min(1/(150 ell), 1/(1711 D Lambda))");
      } else {
        s.check(prefix + "theorem1", t1.holds, "margin " + g(t1.margin));
        if (exact) s.check(prefix + "corollary2", t1.holds && prop3, "last-iterate bound and gap bound both hold");
      }
    }
  }
  return s.failed() ? kCheckFailed : kOk;
}

int cmd_potential(const json& config, const fs::path& out, Summary& s) {
  expect_keys(config, {"command", "description", "operator", "eta", "T", "D", "init", "quad_order", "tol"},
              "potential config");
  const double D = positive(config, "D");
  const int T = positive_int(config, "T", std::nullopt);
  const int quad = positive_int(config, "quad_order", 2);
  if (quad > 16) throw ConfigError("'quad_order' must be at most 16");
  const double tol = optional_positive(config, "tol", 1e-8);
  const auto specs = operator_specs(config);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const MonotoneOperator op = parse_operator(specs[i], D);
    const double eta = step_size(config, i, specs.size());
    if (op.dim() > kMaxDim) throw ConfigError("potential runs are capped at dimension 64");
    if (static_cast<long>(T) * op.dim() * op.dim() * 6 > kMaxPotentialEntries)
      throw ConfigError("T * n^2 exceeds the potential memory cap");
    const json& init = need(config, "init");
    expect_keys(init, {"z0", "z_minus1"}, "init");
    const Vec z0 = sized(as_vec(need(init, "z0"), "z0"), op, "z0");
    const Vec zm1 = init.contains("z_minus1") ? sized(as_vec(init.at("z_minus1"), "z_minus1"), op, "z_minus1") : z0;
    const Trace tr = run_og_peg(op, zm1, z0, eta, T);
    const PotentialTrace pt = backward_C(op, tr, quad);
    const IdentityReport id = verify_potential_identity(pt, tol);
    write_file(out / indexed("potential", i, specs.size()),
               [&](std::ostream& os) { write_potential_csv(os, pt, id); });
    const std::string prefix = specs.size() == 1 ? "" : "run" + std::to_string(i) + ".";
    s.check(prefix + "potential_identity", id.holds, "max residual " + g(id.max_residual));
    s.check(prefix + "potential_step_inequality", id.step_inequality_holds);
    s.check(prefix + "potential_fw_consistency", id.fw_consistency_holds);
    const Lemma5Report l5 = lemma5_report(pt, op.ell());
    if (l5.vacuous)
      s.vacuous(prefix + "lemma5", "eta ell above sqrt(1/200)");
    else
      s.check(prefix + "lemma5", l5.holds,
              l5.holds ? "items 1-3 at every step" : "first failure at t=" + std::to_string(l5.first_failure));
    const DIdentityReport di = d_matrix_identity_check(pt, tol);
    s.check(prefix + "d_matrix_identity", di.holds, "max residual " + g(di.max_residual));
    if (op.is_affine() && T > 50 && spectral_norm(2.0 * eta * op.A()) < 1.0) {
      const Mat Cc = closed_form_C_linear(op.A(), eta);
      double worst = 0.0;
      for (int t = 0; t <= T - 50; ++t) worst = std::max(worst, spectral_norm(pt.C(t) - Cc));
      const double quad_res = spectral_norm(Cc * Cc + Cc - eta * eta * op.A() * op.A());
      s.check(prefix + "closed_form_c", worst <= 1e-6 && quad_res <= 1e-10,
              "max |C^t - C| " + g(worst) + ", quadratic residual " + g(quad_res));
    }
  }
  return s.failed() ? kCheckFailed : kOk;
}

SweepFamily parse_family(const json& config) {
  if (!config.contains("problem")) return SweepFamily::kConvexMin;
  const std::string p = config.at("problem").get<std::string>();
  if (p == "convexmin") return SweepFamily::kConvexMin;
  if (p == "minmax") return SweepFamily::kMinMax;
  throw ConfigError("'problem' must be minmax or convexmin");
}

int cmd_scli_sweep(const json& config, const fs::path& out, Summary& s) {
  expect_keys(config, {"command", "description", "mode", "coefficients", "mu", "ell", "grid_points",
                       "problem", "pairs", "p_max", "seed", "cases", "n"},
              "scli-sweep config");
  const std::string mode = config.contains("mode") ? config.at("mode").get<std::string>() : "coefficients";

  if (mode == "characteristic") {
    const int cases = positive_int(config, "cases", std::nullopt);
    const double ell = positive(config, "ell");
    std::vector<int> dims{2, 4};
    if (config.contains("n")) {
      dims.clear();
      for (const json& v : config.at("n")) dims.push_back(positive_int(v, "n"));
    }
    if (!config.contains("seed")) throw ConfigError("missing required key 'seed'");
    std::mt19937_64 rng(config.at("seed").get<std::uint64_t>());
    std::uniform_int_distribution<int> pick_p(1, 4);
    std::uniform_real_distribution<double> pick_nu(0.0, ell);
    double worst = 0.0;
    write_file(out / "characteristic.csv", [&](std::ostream& os) {
      os << "case,p,n,nu,gap\n";
      for (int c = 0; c < cases; ++c) {
        const int p = pick_p(rng);
        const SCLICoefficients co = random_consistent_coefficients(rng, p);
        const double nu = pick_nu(rng);
        const int n = dims[c % dims.size()];
        const double gap = characteristic_identity_gap(co, nu, n);
        worst = std::max(worst, gap);
        os << c << ',' << p << ',' << n << ',' << format_double(nu) << ',' << format_double(gap) << '\n';
      }
    });
    s.check("characteristic_identity", worst <= 1e-8, "max gap " + g(worst));
    return s.failed() ? kCheckFailed : kOk;
  }

  const double mu = positive(config, "mu");
  const double ell = positive(config, "ell");
  if (!(mu < ell)) throw ConfigError("need mu < ell");
  const int grid = positive_int(config, "grid_points", std::nullopt);
  if (grid < 2) throw ConfigError("'grid_points' must be at least 2");
  const double bound = conjecture_bound(mu, ell);
  s.value("conjecture_bound", bound);

  if (mode == "random") {
    const int pairs = positive_int(config, "pairs", std::nullopt);
    const int p_max = positive_int(config, "p_max", std::nullopt);
    if (!config.contains("seed")) throw ConfigError("missing required key 'seed'");
    std::mt19937_64 rng(config.at("seed").get<std::uint64_t>());
    std::uniform_int_distribution<int> pick_p(1, p_max);
    int below = 0;
    double worst = std::numeric_limits<double>::infinity();
    write_file(out / "sweep_pairs.csv", [&](std::ostream& os) {
      os << "pair,p,sup,bound\n";
      for (int k = 0; k < pairs; ++k) {
        const int p = pick_p(rng);
        const SCLICoefficients co = random_consistent_coefficients(rng, p);
        const SweepResult sw = radius_sweep(PolyPair::from_coefficients(co), mu, ell, grid);
        worst = std::min(worst, sw.sup - bound);
        if (sw.sup < bound - 1e-3) ++below;
        os << k << ',' << p << ',' << format_double(sw.sup) << ',' << format_double(bound) << '\n';
      }
    });
    s.check("theorem3_law", below == 0,
            std::to_string(pairs - below) + "/" + std::to_string(pairs) + " pairs, min sup - bound " + g(worst));
    return s.failed() ? kCheckFailed : kOk;
  }

  if (mode == "agd") {
    const PolyPair pair = agd_polys(mu, ell);
    const SweepResult sw = radius_sweep(pair, mu, ell, grid);
    write_file(out / "sweep.csv", [&](std::ostream& os) { write_sweep_csv(os, sw); });
    const double a = (std::sqrt(ell) - std::sqrt(mu)) / (std::sqrt(ell) + std::sqrt(mu));
    const double target = std::sqrt(a);
    double dev = 0.0;
    for (double r : sw.rho) dev = std::max(dev, std::abs(r - target));
    s.value("agd_alpha", a);
    s.value("sweep_sup", sw.sup);
    s.check("agd_flat", dev <= 1e-8, "max |rho - sqrt(alpha)| " + g(dev) + " over " + std::to_string(grid) + " points");
    return s.failed() ? kCheckFailed : kOk;
  }

  if (mode != "coefficients") throw ConfigError("unknown sweep mode '" + mode + "'");
  const SCLICoefficients co = parse_coefficients(need(config, "coefficients"));
  const SweepFamily family = parse_family(config);
  const SweepResult sw = radius_sweep(PolyPair::from_coefficients(co), mu, ell, grid, family);
  write_file(out / "sweep.csv", [&](std::ostream& os) { write_sweep_csv(os, sw); });
  s.value("sweep_sup", sw.sup);
  s.value("sweep_argmax_nu", sw.argmax);
  if (family == SweepFamily::kConvexMin && co.consistent())
    s.check("theorem3_law", sw.sup >= bound - 1e-3, "sup - bound " + g(sw.sup - bound));
  return s.failed() ? kCheckFailed : kOk;
}

int cmd_lowerbound(const json& config, const fs::path& out, Summary& s) {
  expect_keys(config, {"command", "description", "coefficients", "ell", "D", "T_list", "n", "problem",
                       "slope_range", "floor"},
              "lowerbound config");
  const SCLICoefficients co = parse_coefficients(need(config, "coefficients"));
  const double ell = positive(config, "ell");
  const double D = positive(config, "D");
  const int n = positive_int(config, "n", std::nullopt);
  std::vector<int> Ts;
  const json& tl = need(config, "T_list");
  if (!tl.is_array() || tl.empty()) throw ConfigError("'T_list' must be a nonempty list");
  for (const json& v : tl) Ts.push_back(positive_int(v, "T_list"));
  if (!std::is_sorted(Ts.begin(), Ts.end())) throw ConfigError("'T_list' must be ascending");
  const SweepFamily family = parse_family(config);
  const ProblemClass problem = family == SweepFamily::kMinMax ? ProblemClass::kMinMax : ProblemClass::kConvexMin;
  if (problem == ProblemClass::kMinMax && n % 2 != 0) throw ConfigError("'n' must be even for min-max");
  const double floor = optional_positive(config, "floor", 1e-3);

  const LowerBoundTable table = lowerbound_experiment(co, ell, D, Ts, n, problem);
  write_file(out / "lowerbound.csv", [&](std::ostream& os) { write_lowerbound_csv(os, table); });
  s.value("case", case_label(table.kase) + " (" + to_string(table.kase) + ")");
  if (table.kase != LowerBoundCase::kHardInstance) {
    for (const LowerBoundRow& r : table.rows)
      s.value("witness_T" + std::to_string(r.T),
              r.diverged ? std::string("diverged") : "measured " + g(r.measured));
    return kOk;
  }
  bool floor_ok = true;
  std::vector<double> x, y;
  double worst_identity = 0.0;
  for (const LowerBoundRow& r : table.rows) {
    floor_ok = floor_ok && r.ratio >= floor;
    x.push_back(r.T);
    y.push_back(r.measured);
    if (problem == ProblemClass::kConvexMin && !std::isnan(r.window_norm_sq))
      worst_identity = std::max(worst_identity, std::abs(r.window_sum - r.window_norm_sq) /
                                                    std::max(std::abs(r.window_norm_sq), 1e-300));
  }
  double min_ratio = std::numeric_limits<double>::infinity();
  for (const LowerBoundRow& r : table.rows) min_ratio = std::min(min_ratio, r.ratio);
  s.check("lowerbound_floor", floor_ok, "min ratio " + g(min_ratio) + " vs " + g(floor));
  if (problem == ProblemClass::kConvexMin)
    s.check("window_identity", worst_identity <= 1e-8, "max relative error " + g(worst_identity));
  if (x.size() >= 3) {
    const RateFit fit = rate_fit(x, y, 0.0);
    s.value("slope", fit.slope);
    if (config.contains("slope_range")) {
      const std::vector<double> range = as_list(config.at("slope_range"), "slope_range");
      if (range.size() != 2) throw ConfigError("'slope_range' must have two entries");
      s.check("lowerbound_slope", fit.slope >= range[0] && fit.slope <= range[1],
              "slope " + g(fit.slope) + " in [" + g(range[0]) + ", " + g(range[1]) + "]");
    }
  }
  return s.failed() ? kCheckFailed : kOk;
}

int cmd_regret(const json& config, const fs::path& out, Summary& s) {
  expect_keys(config, {"command", "description", "algorithm", "T", "eta", "D", "L", "schedule",
                       "max_avg_regret"},
              "regret config");
  const int T = positive_int(config, "T", std::nullopt);
  std::vector<std::string> algs;
  const json& a = need(config, "algorithm");
  if (a.is_string())
    algs.push_back(a.get<std::string>());
  else
    for (const json& v : a) algs.push_back(v.get<std::string>());
  for (const std::string& alg : algs) {
    if (alg == "eg") {
      const RegretRun run = eg_regret_demo(T, positive(config, "eta"));
      bool formula = true;
      for (int t = 1; t <= T; ++t) formula = formula && run.regret[t - 1] == std::ceil(t / 2.0);
      write_file(out / "regret_eg.csv", [&](std::ostream& os) {
        os << "t,action,opponent,loss,regret\n";
        for (int t = 0; t < T; ++t)
          os << t + 1 << ',' << format_double(run.actions[t]) << ',' << format_double(run.opponent[t]) << ','
             << format_double(run.losses[t]) << ',' << format_double(run.regret[t]) << '\n';
      });
      s.value("eg_regret", run.regret.back());
      s.value("eg_cumulative_loss", run.cumulative_loss);
      s.check("eg_regret_formula", formula && run.cumulative_loss == 0.0, "regret ceil(t/2) for t <= " + std::to_string(T));
    } else if (alg == "og") {
      const double D = positive(config, "D");
      const std::string sched = config.contains("schedule") ? config.at("schedule").get<std::string>() : "inverse-sqrt";
      OGRegretResult res;
      if (sched == "inverse-sqrt")
        res = og_regret_run(alternating_adversary(), 1, D, T, StepSchedule::kInverseSqrt, positive(config, "L"));
      else if (sched == "constant")
        res = og_regret_run(alternating_adversary(), 1, D, T, StepSchedule::kConstant, 0.0, positive(config, "eta"));
      else
        throw ConfigError("'schedule' must be inverse-sqrt or constant");
      write_file(out / "regret_og.csv", [&](std::ostream& os) {
        os << "t,action,regret\n";
        for (int t = 0; t < T; ++t)
          os << t + 1 << ',' << format_double(res.actions[t](0)) << ',' << format_double(res.regret[t]) << '\n';
      });
      const double avg = res.regret.back() / T;
      const double cap = optional_positive(config, "max_avg_regret", 0.1);
      s.value("og_regret", res.regret.back());
      s.check("og_sublinear_regret", avg <= cap, "regret/T " + g(avg) + " vs " + g(cap));
    } else {
      throw ConfigError("regret algorithm must be eg or og");
    }
  }
  return s.failed() ? kCheckFailed : kOk;
}

std::vector<double> csv_column(const fs::path& path, const std::string& column) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read " + path.string());
  std::string line;
  if (!std::getline(is, line)) throw ConfigError(path.string() + " is empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  const auto it = std::find(header.begin(), header.end(), column);
  if (it == header.end()) throw ConfigError("column '" + column + "' not found in " + path.string());
  const std::size_t idx = static_cast<std::size_t>(it - header.begin());
  std::vector<double> out;
  while (std::getline(is, line)) {
    std::stringstream ss(line);
    std::string cell;
    for (std::size_t k = 0; k <= idx && std::getline(ss, cell, ','); ++k) {
    }
    try {
      out.push_back(cell.empty() ? std::nan("") : std::stod(cell));
    } catch (const std::exception&) {
      throw ConfigError("non-numeric value in column '" + column + "'");
    }
  }
  return out;
}

int cmd_ratefit(const json& config, const fs::path& config_dir, Summary& s) {
  expect_keys(config, {"command", "description", "x", "y", "csv", "x_column", "y_column", "burn_in",
                       "slope_range"},
              "ratefit config");
  std::vector<double> x, y;
  if (config.contains("csv")) {
    fs::path p = config.at("csv").get<std::string>();
    if (p.is_relative()) p = config_dir / p;
    x = csv_column(p, need(config, "x_column").get<std::string>());
    y = csv_column(p, need(config, "y_column").get<std::string>());
  } else {
    x = as_list(need(config, "x"), "x");
    y = as_list(need(config, "y"), "y");
  }
  double burn = 0.1;
  if (config.contains("burn_in")) {
    burn = as_double(config.at("burn_in"), "burn_in");
    if (!(burn >= 0.0 && burn < 1.0)) throw ConfigError("'burn_in' must be in [0, 1)");
  }
  const RateFit fit = rate_fit(x, y, burn);
  for (const std::string& w : fit.warnings) s.value("warning", w);
  s.value("slope", fit.slope);
  s.value("intercept", fit.intercept);
  s.value("r2", fit.r2);
  if (config.contains("slope_range")) {
    const std::vector<double> range = as_list(config.at("slope_range"), "slope_range");
    if (range.size() != 2) throw ConfigError("'slope_range' must have two entries");
    s.check("slope_in_range", fit.slope >= range[0] && fit.slope <= range[1]);
  }
  return s.failed() ? kCheckFailed : kOk;
}

int dispatch(const std::string& command, const json& config, const fs::path& out_dir,
             const fs::path& config_dir, std::ostream& summary, std::ostream& err) {
  Summary s(summary);
  try {
    if (!config.is_object()) throw ConfigError("config must be a JSON object");
    if (config.contains("command") && config.at("command") != command)
      throw ConfigError("config is for command '" + config.at("command").get<std::string>() + "'");
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + out_dir.string());
    if (command == "simulate") return cmd_simulate(config, out_dir, s);
    if (command == "gap") return cmd_gap(config, out_dir, s);
    if (command == "potential") return cmd_potential(config, out_dir, s);
    if (command == "scli-sweep") return cmd_scli_sweep(config, out_dir, s);
    if (command == "lowerbound") return cmd_lowerbound(config, out_dir, s);
    if (command == "regret") return cmd_regret(config, out_dir, s);
    if (command == "ratefit") return cmd_ratefit(config, config_dir, s);
    throw ConfigError("unknown command '" + command + "'");
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ContractViolation& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const UnsupportedInstance& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumericError;
  }
}

}  // namespace

int run_command(const std::string& command, const json& config, const fs::path& out_dir,
                std::ostream& summary, std::ostream& err) {
  return dispatch(command, config, out_dir, fs::current_path(), summary, err);
}

int run_command_file(const std::string& command, const fs::path& config_path,
                     const fs::path& out_dir, std::ostream& summary, std::ostream& err) {
  std::ifstream is(config_path);
  if (!is) {
    err << "config error: cannot read " << config_path.string() << '\n';
    return kConfigError;
  }
  json config;
  try {
    config = json::parse(is);
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  return dispatch(command, config, out_dir, config_path.parent_path(), summary, err);
}

}  // namespace monoplay::cli
