#include "report.hpp"

#include <cstdio>
#include <fstream>

#include "text_io.hpp"

namespace tgp {

bool RunReport::has_column(const std::string& name) const {
  for (const auto& c : columns)
    if (c == name) return true;
  return false;
}

const std::vector<double>& RunReport::column(const std::string& name) const {
  for (size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return trace[i];
  throw validation_error("RunReport: no column named '" + name + "'");
}

namespace {

// Full trace schema for d input axes. Fields a run does not produce stay in
// the header with empty cells.
std::vector<std::string> trace_schema(int d) {
  std::vector<std::string> cols;
  cols.push_back("loglik");
  for (int c = 1; c <= d; ++c) cols.push_back("q_" + std::to_string(c));
  for (int c = 1; c <= d; ++c) cols.push_back("ell_" + std::to_string(c));
  for (int c = 1; c <= d; ++c) cols.push_back("a_" + std::to_string(c));
  for (int c = 1; c <= d; ++c) cols.push_back("delta_" + std::to_string(c));
  cols.push_back("sigma11");
  cols.push_back("sigma22");
  cols.push_back("rho");
  for (int c = 1; c <= d; ++c) cols.push_back("s" + std::to_string(c) + "_test");
  cols.push_back("accept_block1");
  cols.push_back("accept_block2");
  return cols;
}

}  // namespace

void write_trace_csv(const RunReport& report, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw io_error("cannot write trace file " + path);
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(report.config_hash));
  f << "# seed=" << report.seed << " config_hash=" << hash << "\n";

  const auto schema = trace_schema(report.input_dim);
  std::vector<const std::vector<double>*> cols(schema.size(), nullptr);
  for (size_t s = 0; s < schema.size(); ++s)
    if (report.has_column(schema[s])) cols[s] = &report.column(schema[s]);

  f << "iter";
  for (const auto& name : schema) f << "," << name;
  f << "\n";
  const int n = report.iterations();
  for (int t = 0; t < n; ++t) {
    f << (t + 1);
    for (size_t s = 0; s < schema.size(); ++s) {
      f << ",";
      if (cols[s]) f << fmt_double((*cols[s])[t]);
    }
    f << "\n";
  }
  if (!f) throw io_error("failed writing trace file " + path);
}

RunReport merge_reports(const RunReport& a, const RunReport& b) {
  if (a.columns != b.columns)
    throw validation_error("merge_reports: reports have different column sets");
  RunReport out = a;
  for (size_t c = 0; c < out.trace.size(); ++c)
    out.trace[c].insert(out.trace[c].end(), b.trace[c].begin(), b.trace[c].end());
  const double na = a.iterations(), nb = b.iterations();
  for (auto& [k, v] : out.acceptance) {
    auto it = b.acceptance.find(k);
    const double vb = it == b.acceptance.end() ? 0.0 : it->second;
    v = (v * na + vb * nb) / (na + nb);
  }
  out.wall_seconds = a.wall_seconds + b.wall_seconds;
  return out;
}

}  // namespace tgp
