#include "diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "text_io.hpp"

namespace tgp {

HpdInterval hpd(std::vector<double> samples, double mass) {
  const int n = static_cast<int>(samples.size());
  if (n < 20) throw validation_error("hpd: need at least 20 samples, got " + std::to_string(n));
  if (!(mass > 0.0 && mass < 1.0)) throw validation_error("hpd: mass must be in (0,1)");
  std::sort(samples.begin(), samples.end());
  int w = static_cast<int>(std::ceil(mass * n));
  w = std::clamp(w, 1, n);

  int best = 0;
  double best_width = samples[w - 1] - samples[0];
  for (int i = 1; i + w <= n; ++i) {
    const double width = samples[i + w - 1] - samples[i];
    if (width < best_width) {
      best_width = width;
      best = i;
    }
  }
  return {samples[best], samples[best + w - 1], mass};
}

double histogram_mode(const std::vector<double>& samples) {
  if (samples.empty()) throw validation_error("histogram_mode: empty sample");
  std::vector<double> s(samples);
  std::sort(s.begin(), s.end());
  const int n = static_cast<int>(s.size());
  const double lo = s.front(), hi = s.back();
  if (lo == hi || n < 4) return s[n / 2];

  const double iqr = s[(3 * n) / 4] - s[n / 4];
  double width = 2.0 * iqr * std::pow(static_cast<double>(n), -1.0 / 3.0);  // Freedman-Diaconis
  int bins;
  if (width > 0.0) {
    bins = static_cast<int>(std::ceil((hi - lo) / width));
  } else {
    bins = static_cast<int>(std::ceil(std::log2(static_cast<double>(n)))) + 1;  // Sturges
  }
  bins = std::clamp(bins, 1, 100000);

  std::vector<int> count(bins, 0);
  for (double x : s) {
    int b = static_cast<int>((x - lo) / (hi - lo) * bins);
    if (b == bins) b = bins - 1;
    ++count[b];
  }
  int best = 0;
  for (int b = 1; b < bins; ++b)
    if (count[b] > count[best]) best = b;
  return lo + (hi - lo) * (best + 0.5) / bins;
}

namespace {

double mean_of(const double* x, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += x[i];
  return n > 0 ? s / n : 0.0;
}

double sd_of(const double* x, int n) {
  if (n < 2) return 0.0;
  const double m = mean_of(x, n);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += (x[i] - m) * (x[i] - m);
  return std::sqrt(s / (n - 1));
}

// Squared standard error of the mean from batch means (batch size ~ sqrt(n)),
// which absorbs the chain's autocorrelation.
double batch_se_sq(const double* x, int n) {
  if (n < 4) return 0.0;
  const int bsize = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n))));
  const int nb = n / bsize;
  std::vector<double> bm(nb);
  for (int b = 0; b < nb; ++b) bm[b] = mean_of(x + b * bsize, bsize);
  const double sd = sd_of(bm.data(), nb);
  return sd * sd / nb;
}

}  // namespace

double geweke_z(const std::vector<double>& samples) {
  const int n = static_cast<int>(samples.size());
  if (n < 20) return 0.0;
  const int na = std::max(2, n / 10);
  const int nb = std::max(2, n / 2);
  const double* a = samples.data();
  const double* b = samples.data() + (n - nb);
  const double se2 = batch_se_sq(a, na) + batch_se_sq(b, nb);
  if (se2 <= 0.0) return 0.0;
  return (mean_of(a, na) - mean_of(b, nb)) / std::sqrt(se2);
}

const ParamSummary* PosteriorSummary::find(const std::string& name) const {
  for (const auto& p : params)
    if (p.name == name) return &p;
  return nullptr;
}

PosteriorSummary summarize(const RunReport& report, double burnin_frac, double hpd_mass) {
  if (!(burnin_frac >= 0.0 && burnin_frac < 1.0))
    throw validation_error("summarize: burn-in fraction must be in [0,1)");
  const int n = report.iterations();
  if (n == 0) throw validation_error("summarize: empty trace");
  const int skip = static_cast<int>(burnin_frac * n);

  PosteriorSummary out;
  out.seed = report.seed;
  out.config_hash = report.config_hash;
  out.burnin_frac = burnin_frac;
  out.acceptance = report.acceptance;
  for (size_t c = 0; c < report.columns.size(); ++c) {
    const std::string& name = report.columns[c];
    if (name.rfind("accept_", 0) == 0) continue;
    std::vector<double> post(report.trace[c].begin() + skip, report.trace[c].end());
    ParamSummary p;
    p.name = name;
    p.mean = mean_of(post.data(), static_cast<int>(post.size()));
    p.sd = sd_of(post.data(), static_cast<int>(post.size()));
    p.mode = histogram_mode(post);
    p.geweke = geweke_z(post);
    if (static_cast<int>(post.size()) >= 20)
      p.hpd95 = hpd(post, hpd_mass);
    else
      p.hpd95 = {p.mean, p.mean, hpd_mass};
    out.params.push_back(std::move(p));
  }
  return out;
}

PosteriorSummary summarize_pooled(const std::vector<const RunReport*>& reports,
                                  double burnin_frac, double hpd_mass) {
  if (reports.empty()) throw validation_error("summarize_pooled: no reports");
  if (reports.size() == 1) return summarize(*reports[0], burnin_frac, hpd_mass);

  PosteriorSummary out;
  out.seed = reports[0]->seed;
  out.config_hash = reports[0]->config_hash;
  out.burnin_frac = burnin_frac;

  double total_iters = 0.0;
  for (const RunReport* r : reports) {
    total_iters += r->iterations();
    for (const auto& [k, v] : r->acceptance) out.acceptance[k] += v * r->iterations();
  }
  for (auto& [k, v] : out.acceptance) v /= total_iters;

  for (size_t c = 0; c < reports[0]->columns.size(); ++c) {
    const std::string& name = reports[0]->columns[c];
    if (name.rfind("accept_", 0) == 0) continue;
    std::vector<double> pooled;
    for (const RunReport* r : reports) {
      const auto& col = r->column(name);
      const int skip = static_cast<int>(burnin_frac * col.size());
      pooled.insert(pooled.end(), col.begin() + skip, col.end());
    }
    ParamSummary p;
    p.name = name;
    p.mean = mean_of(pooled.data(), static_cast<int>(pooled.size()));
    p.sd = sd_of(pooled.data(), static_cast<int>(pooled.size()));
    p.mode = histogram_mode(pooled);
    p.geweke = 0.0;
    if (static_cast<int>(pooled.size()) >= 20)
      p.hpd95 = hpd(pooled, hpd_mass);
    else
      p.hpd95 = {p.mean, p.mean, hpd_mass};
    out.params.push_back(std::move(p));
  }
  return out;
}

void write_summary_csv(const PosteriorSummary& s, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw io_error("cannot write summary file " + path);
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(s.config_hash));
  f << "# seed=" << s.seed << " config_hash=" << hash << " burnin_frac=" << fmt_double(s.burnin_frac)
    << "\n";
  for (const auto& [k, v] : s.acceptance) f << "# acceptance " << k << "=" << fmt_double(v) << "\n";
  f << "param,mean,mode,sd,hpd95_lo,hpd95_hi,geweke_z\n";
  for (const auto& p : s.params) {
    f << p.name << "," << fmt_double(p.mean) << "," << fmt_double(p.mode) << ","
      << fmt_double(p.sd) << "," << fmt_double(p.hpd95.lo) << "," << fmt_double(p.hpd95.hi) << ","
      << fmt_double(p.geweke) << "\n";
  }
  if (!f) throw io_error("failed writing summary file " + path);
}

void write_summary_text(const PosteriorSummary& s, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw io_error("cannot write summary file " + path);
  char line[256];
  std::snprintf(line, sizeof(line), "%-12s %12s %12s %12s %26s %10s\n", "param", "mean", "mode",
                "sd", "95% HPD", "geweke_z");
  f << line;
  for (const auto& p : s.params) {
    char interval[64];
    std::snprintf(interval, sizeof(interval), "[%.6g, %.6g]", p.hpd95.lo, p.hpd95.hi);
    std::snprintf(line, sizeof(line), "%-12s %12.6g %12.6g %12.6g %26s %10.3f\n", p.name.c_str(),
                  p.mean, p.mode, p.sd, interval, p.geweke);
    f << line;
  }
  for (const auto& [k, v] : s.acceptance) {
    std::snprintf(line, sizeof(line), "acceptance[%s] = %.4f\n", k.c_str(), v);
    f << line;
  }
}

PosteriorSummary read_summary_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot read summary file " + path);
  PosteriorSummary out;
  std::string line;
  bool header_seen = false;
  while (std::getline(f, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto toks = split(line.substr(1), ' ');
      for (const auto& t : toks) {
        auto kv = split(t, '=');
        if (kv.size() == 2 && kv[0] == "seed") out.seed = std::stoull(kv[1]);
        if (kv.size() == 2 && kv[0] == "burnin_frac") out.burnin_frac = std::stod(kv[1]);
      }
      continue;
    }
    if (!header_seen) {
      if (line.rfind("param,", 0) != 0)
        throw validation_error("summary file " + path + ": missing header row");
      header_seen = true;
      continue;
    }
    auto cells = split(line, ',');
    if (cells.size() != 7)
      throw validation_error("summary file " + path + ": bad row '" + line + "'");
    ParamSummary p;
    p.name = cells[0];
    p.mean = std::stod(cells[1]);
    p.mode = std::stod(cells[2]);
    p.sd = std::stod(cells[3]);
    p.hpd95 = {std::stod(cells[4]), std::stod(cells[5]), 0.95};
    p.geweke = std::stod(cells[6]);
    out.params.push_back(std::move(p));
  }
  if (!header_seen) throw validation_error("summary file " + path + ": empty");
  return out;
}

GalacticDerived galactic_convert(double s1, const HpdInterval& s2_radians) {
  if (!(s1 > 0.0)) throw validation_error("galactic_convert: s1 must be positive");
  constexpr double kSolarRadiusKpc = 8.0;
  constexpr double kCircularSpeedKms = 220.0;
  constexpr double kDegPerRad = 57.295779513082320876798;
  GalacticDerived g;
  g.length_unit_kpc = kSolarRadiusKpc / s1;
  g.omega_bar_kms_kpc = kCircularSpeedKms / g.length_unit_kpc;
  g.bar_angle_deg = {s2_radians.lo * kDegPerRad, s2_radians.hi * kDegPerRad, s2_radians.mass};
  return g;
}

}  // namespace tgp
