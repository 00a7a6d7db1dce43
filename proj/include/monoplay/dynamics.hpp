#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "monoplay/linalg.hpp"
#include "monoplay/operators.hpp"

namespace monoplay {

enum class Algorithm { kOG, kOGPeg, kEG, kGD, kSCLI };

std::string to_string(Algorithm alg);

// Iterates z^{-p+1}, ..., z^0 (the inits) followed by z^1, ..., z^T, with the
// operator value cached for every stored point. Index by t directly.
struct Trace {
  Algorithm algorithm = Algorithm::kOG;
  double eta = 0.0;
  int p = 1;
  std::vector<Vec> points;  // points[t + p - 1] = z^t
  std::vector<Vec> grads;   // grads[i] = F(points[i])
  // Secondary sequence (w^t for PEG, u^t for EG) starting at t = aux_first.
  std::vector<Vec> aux;
  int aux_first = 0;

  int first_t() const { return 1 - p; }
  int last_t() const { return static_cast<int>(points.size()) - p; }
  int steps() const { return last_t(); }
  int dim() const { return points.empty() ? 0 : static_cast<int>(points.front().size()); }

  const Vec& z(int t) const { return points.at(static_cast<std::size_t>(t + p - 1)); }
  const Vec& grad(int t) const { return grads.at(static_cast<std::size_t>(t + p - 1)); }
  double grad_norm(int t) const { return grad(t).norm(); }
  const Vec& aux_at(int t) const { return aux.at(static_cast<std::size_t>(t - aux_first)); }
};

// Linear-coefficient p-SCLI: z^t = sum_j (alpha_j A + beta_j I) z^{t-p+j} + (gamma A + delta I) b.
struct SCLICoefficients {
  std::vector<double> alpha;
  std::vector<double> beta;
  double gamma = 0.0;
  double delta = 0.0;

  int p() const { return static_cast<int>(alpha.size()); }
  bool consistent(double tol = 1e-12) const;
  void validate() const;
};

SCLICoefficients og_as_scli(double eta);
SCLICoefficients gd_as_scli(double eta);

// OG: z^{t+1} = z^t - 2 eta F(z^t) + eta F(z^{t-1}); one F evaluation per step.
Trace run_og(const MonotoneOperator& op, const Vec& z_minus1, const Vec& z0, double eta, int T);

// Same iterates through w^{t+1} = w^t - eta F(z^t), z^{t+1} = w^{t+1} - eta F(z^t).
Trace run_og_peg(const MonotoneOperator& op, const Vec& z_minus1, const Vec& z0, double eta,
                 int T);

// Extragradient. The trace holds z^0..z^T (z^0 in the init slot) and aux = u^0..u^T.
// With a projection radius, every player block is projected onto B(0, radius).
Trace run_eg(const MonotoneOperator& op, const Vec& u0, double eta, int T,
             std::optional<double> projection_radius = std::nullopt);

Trace run_gd(const MonotoneOperator& op, const Vec& z0, double eta, int T);

// Affine operators only. inits are ordered oldest first: z^{-p+1}, ..., z^0.
Trace run_scli(const MonotoneOperator& op, const SCLICoefficients& coeffs,
               const std::vector<Vec>& inits, int T);

// Euclidean projection of every player block onto B(0, radius).
Vec project_blocks(const Vec& z, const std::vector<int>& dims, double radius);

struct RegretRun {
  std::vector<double> actions;   // learner action v^t, t = 0..T-1
  std::vector<double> opponent;  // adversary action
  std::vector<double> losses;
  std::vector<double> regret;    // regret[t-1] = regret after t rounds
  double cumulative_loss = 0.0;
};

// EG played as an online learner on f(v1, v2) = v1 * v2 over [-1, 1] against
// the alternating adversary (v2 = 1 on even rounds, 0 on odd rounds).
RegretRun eg_regret_demo(int T, double eta);

enum class StepSchedule { kConstant, kInverseSqrt };

struct OGRegretResult {
  std::vector<Vec> actions;
  std::vector<double> regret;  // regret[t-1] after t rounds
};

// Gradient feedback g^t = gradient(t, v^t) for linear losses <g^t, v>.
using GradientOracle = std::function<Vec(int, const Vec&)>;

// Projected OG on B(0, D). kInverseSqrt uses eta_t = D / (L sqrt(t + 1));
// kConstant uses eta_t = eta.
OGRegretResult og_regret_run(const GradientOracle& gradient, int dim, double D, int T,
                             StepSchedule schedule, double L, double eta = 0.0);

OGRegretResult og_regret_run(const std::vector<Vec>& gradients, double D, StepSchedule schedule,
                             double L, double eta = 0.0);

// Loss gradients of the alternating adversary above, as seen by player 1.
GradientOracle alternating_adversary();

}  // namespace monoplay
