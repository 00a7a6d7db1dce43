#include "monoplay/io.hpp"

#include <cstdio>

namespace monoplay {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
  os << "t,algorithm,eta";
  for (int i = 0; i < trace.dim(); ++i) os << ",z_" << i;
  os << ",grad_norm\n";
  const std::string alg = to_string(trace.algorithm);
  for (int t = trace.first_t(); t <= trace.last_t(); ++t) {
    os << t << ',' << alg << ',' << format_double(trace.eta);
    const Vec& z = trace.z(t);
    for (Eigen::Index i = 0; i < z.size(); ++i) os << ',' << format_double(z(i));
    os << ',' << format_double(trace.grad_norm(t)) << '\n';
  }
}

void write_gap_csv(std::ostream& os, const std::vector<GapReport>& reports) {
  os << "t,grad_gap,total_gap,total_gap_bound,dist_to_eq\n";
  for (const GapReport& r : reports) {
    os << r.t << ',' << format_double(r.grad_gap) << ',';
    if (r.total_gap) os << format_double(*r.total_gap);
    os << ',' << format_double(r.total_gap_bound) << ',';
    if (r.dist_to_eq) os << format_double(*r.dist_to_eq);
    os << '\n';
  }
}

void write_potential_csv(std::ostream& os, const PotentialTrace& pt, const IdentityReport& rep) {
  os << "t,ftilde_norm,step_spec_norm,c_norm,identity_residual\n";
  for (int t = 0; t <= pt.T; ++t) {
    os << t << ',' << format_double(pt.Ftilde(t).norm()) << ','
       << format_double(pt.step_norms[t]) << ',' << format_double(spectral_norm(pt.C(t))) << ',';
    if (t < static_cast<int>(rep.residuals.size())) os << format_double(rep.residuals[t]);
    os << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
  os << "nu,rho\n";
  for (std::size_t i = 0; i < sweep.nu.size(); ++i)
    os << format_double(sweep.nu[i]) << ',' << format_double(sweep.rho[i]) << '\n';
}

void write_lowerbound_csv(std::ostream& os, const LowerBoundTable& table) {
  os << "T,nu,max_gradgap,ratio\n";
  for (const LowerBoundRow& r : table.rows)
    os << r.T << ',' << format_double(r.nu) << ',' << format_double(r.measured) << ','
       << format_double(r.ratio) << '\n';
}

}  // namespace monoplay
