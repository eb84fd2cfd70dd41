#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "errors.hpp"

namespace tgp {

// Everything one chain produced: per-parameter traces keyed by column name,
// per-block acceptance rates, and run provenance. Wall-clock time is carried
// for logging but never serialised into trace or summary files, which must be
// byte-identical across reruns of the same seed/config/data.
struct RunReport {
  uint64_t seed = 0;
  uint64_t config_hash = 0;
  int input_dim = 0;  // d (number of length-scale axes)
  std::vector<std::string> columns;
  std::vector<std::vector<double>> trace;  // one vector per column
  std::map<std::string, double> acceptance;
  double wall_seconds = 0.0;

  int iterations() const { return trace.empty() ? 0 : static_cast<int>(trace[0].size()); }
  bool has_column(const std::string& name) const;
  const std::vector<double>& column(const std::string& name) const;
};

// Trace CSV: provenance comment, then a mandatory header row
//   iter,loglik,q_1..q_d,ell_1..ell_d,a_1..a_d,delta_1..delta_d,
//   sigma11,sigma22,rho,s1_test..sd_test,accept_block1,accept_block2
// with absent fields left empty.
void write_trace_csv(const RunReport& report, const std::string& path);

// Concatenates chains with identical columns (independent seeded chains of
// one run). Associative; acceptance rates are iteration-weighted.
RunReport merge_reports(const RunReport& a, const RunReport& b);

}  // namespace tgp
