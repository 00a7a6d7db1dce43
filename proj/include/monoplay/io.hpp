#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "monoplay/diagnostics.hpp"
#include "monoplay/dynamics.hpp"
#include "monoplay/potential.hpp"
#include "monoplay/scli.hpp"

namespace monoplay {

// 17 significant digits, round-trip exact.
std::string format_double(double v);

void write_trace_csv(std::ostream& os, const Trace& trace);
void write_gap_csv(std::ostream& os, const std::vector<GapReport>& reports);
void write_potential_csv(std::ostream& os, const PotentialTrace& pt, const IdentityReport& rep);
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);
void write_lowerbound_csv(std::ostream& os, const LowerBoundTable& table);

}  // namespace monoplay
