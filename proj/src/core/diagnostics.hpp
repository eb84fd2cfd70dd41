#pragma once

#include "report.hpp"

namespace tgp {

// Shortest contiguous interval over the sorted samples containing
// ceil(mass * n) of them.
struct HpdInterval {
  double lo = 0.0;
  double hi = 0.0;
  double mass = 0.95;
};

HpdInterval hpd(std::vector<double> samples, double mass = 0.95);

// Histogram mode with Freedman-Diaconis bin width, Sturges fallback when the
// IQR degenerates or the sample is tiny. Ties resolve to the lowest bin.
double histogram_mode(const std::vector<double>& samples);

// Geweke convergence score: first 10% vs last 50% of the sequence, standard
// errors from batch means.
double geweke_z(const std::vector<double>& samples);

struct ParamSummary {
  std::string name;
  double mean = 0.0;
  double mode = 0.0;
  double sd = 0.0;
  HpdInterval hpd95;
  double geweke = 0.0;
};

struct PosteriorSummary {
  uint64_t seed = 0;
  uint64_t config_hash = 0;
  double burnin_frac = 0.5;
  std::vector<ParamSummary> params;
  std::map<std::string, double> acceptance;

  const ParamSummary* find(const std::string& name) const;
};

// Per-parameter mode/mean/sd/HPD/Geweke over the post-burn-in trace. Pure in
// (report, burnin_frac). Accept indicator columns are skipped.
PosteriorSummary summarize(const RunReport& report, double burnin_frac, double hpd_mass = 0.95);

// Burn-in is applied per chain before pooling; the pooled Geweke column is
// left at zero (meaningless across chains).
PosteriorSummary summarize_pooled(const std::vector<const RunReport*>& reports,
                                  double burnin_frac, double hpd_mass = 0.95);

void write_summary_csv(const PosteriorSummary& s, const std::string& path);
void write_summary_text(const PosteriorSummary& s, const std::string& path);
PosteriorSummary read_summary_csv(const std::string& path);

// Galactic quantities derived from the learnt radial location: with the solar
// radius fixed at 8 kpc and circular speed 220 km/s, one model length unit is
// 8/s1 kpc and the bar pattern speed is 220/(8/s1) km/s/kpc.
struct GalacticDerived {
  double length_unit_kpc = 0.0;
  double omega_bar_kms_kpc = 0.0;
  HpdInterval bar_angle_deg;
};

GalacticDerived galactic_convert(double s1, const HpdInterval& s2_radians);

}  // namespace tgp
