#include "monoplay/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "monoplay/errors.hpp"

namespace monoplay {

namespace {

constexpr double kDivergenceFactor = 1e12;

void require_step(double eta, int T) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ContractViolation("step size must be positive");
  if (T < 1) throw ContractViolation("T must be >= 1");
}

void require_dim(const MonotoneOperator& op, const Vec& z, const char* name) {
  if (z.size() != op.dim())
    throw ContractViolation(std::string(name) + " has the wrong dimension");
}

// Aborts runs that produced a non-finite iterate or left every reasonable scale.
class DivergenceGuard {
 public:
  explicit DivergenceGuard(const Vec& z0) : limit_(kDivergenceFactor * (1.0 + z0.norm())) {}

  void check(const Vec& z, long t) const {
    if (!z.allFinite()) throw DivergenceError(t, "non-finite iterate");
    if (z.norm() > limit_) throw DivergenceError(t, "iterate norm exceeded divergence threshold");
  }

 private:
  double limit_;
};

void push(Trace& tr, const MonotoneOperator& op, Vec z) {
  tr.grads.push_back(op.eval(z));
  tr.points.push_back(std::move(z));
}

}  // namespace

std::string to_string(Algorithm alg) {
  switch (alg) {
    case Algorithm::kOG: return "og";
    case Algorithm::kOGPeg: return "og-peg";
    case Algorithm::kEG: return "eg";
    case Algorithm::kGD: return "gd";
    case Algorithm::kSCLI: return "scli";
  }
  return "unknown";
}

bool SCLICoefficients::consistent(double tol) const {
  const double s = std::accumulate(beta.begin(), beta.end(), 0.0);
  return std::abs(s - 1.0) <= tol;
}

void SCLICoefficients::validate() const {
  if (alpha.empty()) throw ContractViolation("SCLI order p must be >= 1");
  if (alpha.size() != beta.size()) throw ContractViolation("alpha and beta must have length p");
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(alpha.begin(), alpha.end(), finite) ||
      !std::all_of(beta.begin(), beta.end(), finite) || !std::isfinite(gamma) ||
      !std::isfinite(delta))
    throw ContractViolation("SCLI coefficients must be finite");
}

SCLICoefficients og_as_scli(double eta) {
  if (!(eta > 0.0)) throw ContractViolation("step size must be positive");
  return SCLICoefficients{{eta, -2.0 * eta}, {0.0, 1.0}, 0.0, -eta};
}

SCLICoefficients gd_as_scli(double eta) {
  if (!(eta > 0.0)) throw ContractViolation("step size must be positive");
  return SCLICoefficients{{-eta}, {1.0}, 0.0, -eta};
}

Trace run_og(const MonotoneOperator& op, const Vec& z_minus1, const Vec& z0, double eta, int T) {
  require_step(eta, T);
  require_dim(op, z_minus1, "z^{-1}");
  require_dim(op, z0, "z^0");
  Trace tr;
  tr.algorithm = Algorithm::kOG;
  tr.eta = eta;
  tr.p = 2;
  tr.points.reserve(T + 2);
  tr.grads.reserve(T + 2);
  push(tr, op, z_minus1);
  push(tr, op, z0);
  const DivergenceGuard guard(z0);
  for (int t = 0; t < T; ++t) {
    const std::size_t cur = tr.points.size() - 1;
    Vec next = tr.points[cur] - 2.0 * eta * tr.grads[cur] + eta * tr.grads[cur - 1];
    guard.check(next, t + 1);
    push(tr, op, std::move(next));
  }
  return tr;
}

Trace run_og_peg(const MonotoneOperator& op, const Vec& z_minus1, const Vec& z0, double eta,
                 int T) {
  require_step(eta, T);
  require_dim(op, z_minus1, "z^{-1}");
  require_dim(op, z0, "z^0");
  Trace tr;
  tr.algorithm = Algorithm::kOGPeg;
  tr.eta = eta;
  tr.p = 2;
  tr.aux_first = 0;
  push(tr, op, z_minus1);
  push(tr, op, z0);
  tr.aux.push_back(z0 + eta * tr.grads[0]);
  const DivergenceGuard guard(z0);
  for (int t = 0; t < T; ++t) {
    const Vec& g = tr.grads.back();
    Vec w_next = tr.aux.back() - eta * g;
    Vec z_next = w_next - eta * g;
    guard.check(z_next, t + 1);
    tr.aux.push_back(std::move(w_next));
    push(tr, op, std::move(z_next));
  }
  return tr;
}

Vec project_blocks(const Vec& z, const std::vector<int>& dims, double radius) {
  Vec out = z;
  Eigen::Index offset = 0;
  for (int d : dims) {
    auto blk = out.segment(offset, d);
    const double nrm = blk.norm();
    if (nrm > radius) blk *= radius / nrm;
    offset += d;
  }
  return out;
}

Trace run_eg(const MonotoneOperator& op, const Vec& u0, double eta, int T,
             std::optional<double> projection_radius) {
  require_step(eta, T);
  require_dim(op, u0, "u^0");
  if (projection_radius && !(*projection_radius > 0.0))
    throw ContractViolation("projection radius must be positive");
  const auto dims = op.player_dims();
  auto proj = [&](const Vec& v) {
    return projection_radius ? project_blocks(v, dims, *projection_radius) : v;
  };
  Trace tr;
  tr.algorithm = Algorithm::kEG;
  tr.eta = eta;
  tr.p = 1;
  tr.aux_first = 0;
  const DivergenceGuard guard(u0);
  Vec u = proj(u0);
  tr.aux.push_back(u);
  Vec z = proj(u - eta * op.eval(u));
  guard.check(z, 0);
  push(tr, op, std::move(z));
  for (int t = 1; t <= T; ++t) {
    u = proj(u - eta * tr.grads.back());
    guard.check(u, t);
    tr.aux.push_back(u);
    Vec zt = proj(u - eta * op.eval(u));
    guard.check(zt, t);
    push(tr, op, std::move(zt));
  }
  return tr;
}

Trace run_gd(const MonotoneOperator& op, const Vec& z0, double eta, int T) {
  require_step(eta, T);
  require_dim(op, z0, "z^0");
  Trace tr;
  tr.algorithm = Algorithm::kGD;
  tr.eta = eta;
  tr.p = 1;
  push(tr, op, z0);
  const DivergenceGuard guard(z0);
  for (int t = 0; t < T; ++t) {
    Vec next = tr.points.back() - eta * tr.grads.back();
    guard.check(next, t + 1);
    push(tr, op, std::move(next));
  }
  return tr;
}

Trace run_scli(const MonotoneOperator& op, const SCLICoefficients& coeffs,
               const std::vector<Vec>& inits, int T) {
  coeffs.validate();
  if (!op.is_affine()) throw ContractViolation("p-SCLI runner requires an affine operator");
  if (T < 1) throw ContractViolation("T must be >= 1");
  const int p = coeffs.p();
  if (static_cast<int>(inits.size()) != p)
    throw ContractViolation("run_scli needs exactly p initial points");
  for (const Vec& z : inits) require_dim(op, z, "init");

  const Eigen::Index n = op.dim();
  const Mat I = Mat::Identity(n, n);
  std::vector<Mat> C;
  C.reserve(p);
  for (int j = 0; j < p; ++j) C.push_back(coeffs.alpha[j] * op.A() + coeffs.beta[j] * I);
  const Vec Nb = (coeffs.gamma * op.A() + coeffs.delta * I) * op.b();

  Trace tr;
  tr.algorithm = Algorithm::kSCLI;
  tr.p = p;
  tr.points.reserve(T + p);
  tr.grads.reserve(T + p);
  for (const Vec& z : inits) push(tr, op, z);
  const DivergenceGuard guard(inits.back());
  for (int t = 1; t <= T; ++t) {
    const std::size_t base = tr.points.size() - p;
    Vec next = Nb;
    for (int j = 0; j < p; ++j) next.noalias() += C[j] * tr.points[base + j];
    guard.check(next, t);
    push(tr, op, std::move(next));
  }
  return tr;
}

RegretRun eg_regret_demo(int T, double eta) {
  if (T < 1) throw ContractViolation("T must be >= 1");
  if (!(eta > 0.0)) throw ContractViolation("step size must be positive");
  RegretRun run;
  run.actions.resize(T);
  run.opponent.resize(T);
  for (int s = 0; s < T; ++s) run.opponent[s] = (s % 2 == 0) ? 1.0 : 0.0;
  auto proj = [](double v) { return std::clamp(v, -1.0, 1.0); };
  for (int s = 0; s < T; ++s) {
    if (s == 0) {
      run.actions[s] = 0.0;
    } else if (s % 2 == 0) {
      // v^{2t} = P(v^{2t-2} - eta * grad at round 2t-1)
      run.actions[s] = proj(run.actions[s - 2] - eta * run.opponent[s - 1]);
    } else {
      // v^{2t+1} = P(v^{2t} - eta * grad at round 2t)
      run.actions[s] = proj(run.actions[s - 1] - eta * run.opponent[s - 1]);
    }
  }
  double loss = 0.0;
  double opp_sum = 0.0;
  run.losses.resize(T);
  run.regret.resize(T);
  for (int s = 0; s < T; ++s) {
    run.losses[s] = run.actions[s] * run.opponent[s];
    loss += run.losses[s];
    opp_sum += run.opponent[s];
    run.regret[s] = loss + std::abs(opp_sum);
  }
  run.cumulative_loss = loss;
  return run;
}

OGRegretResult og_regret_run(const GradientOracle& gradient, int dim, double D, int T,
                             StepSchedule schedule, double L, double eta) {
  if (T < 1) throw ContractViolation("T must be >= 1");
  if (dim < 1) throw ContractViolation("dimension must be >= 1");
  if (!(D > 0.0)) throw ContractViolation("D must be positive");
  if (schedule == StepSchedule::kInverseSqrt && !(L > 0.0))
    throw ContractViolation("gradient bound L must be positive");
  if (schedule == StepSchedule::kConstant && !(eta > 0.0))
    throw ContractViolation("constant schedule needs a positive step size");
  const std::vector<int> dims{dim};
  OGRegretResult out;
  out.actions.reserve(T);
  out.regret.reserve(T);
  Vec v = Vec::Zero(dim);
  Vec g_prev = Vec::Zero(dim);
  Vec g_sum = Vec::Zero(dim);
  double loss = 0.0;
  for (int t = 0; t < T; ++t) {
    out.actions.push_back(v);
    const Vec g = gradient(t, v);
    if (g.size() != dim) throw ContractViolation("gradient oracle returned wrong dimension");
    loss += g.dot(v);
    g_sum += g;
    out.regret.push_back(loss + D * g_sum.norm());
    const double eta_t =
        schedule == StepSchedule::kInverseSqrt ? D / (L * std::sqrt(t + 1.0)) : eta;
    v = project_blocks(v - 2.0 * eta_t * g + eta_t * g_prev, dims, D);
    g_prev = g;
  }
  return out;
}

OGRegretResult og_regret_run(const std::vector<Vec>& gradients, double D, StepSchedule schedule,
                             double L, double eta) {
  if (gradients.empty()) throw ContractViolation("empty gradient sequence");
  const int dim = static_cast<int>(gradients.front().size());
  auto oracle = [&gradients](int t, const Vec&) { return gradients.at(t); };
  return og_regret_run(oracle, dim, D, static_cast<int>(gradients.size()), schedule, L, eta);
}

GradientOracle alternating_adversary() {
  return [](int t, const Vec&) {
    Vec g(1);
    g(0) = (t % 2 == 0) ? 1.0 : 0.0;
    return g;
  };
}

}  // namespace monoplay
