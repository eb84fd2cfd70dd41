#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "text_io.hpp"

namespace tgp {

namespace {

double parse_double(const std::string& s, const std::string& key) {
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw validation_error("config: bad number '" + s + "' for key " + key);
  }
}

long long parse_int(const std::string& s, const std::string& key) {
  try {
    size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw validation_error("config: bad integer '" + s + "' for key " + key);
  }
}

bool parse_bool(const std::string& s, const std::string& key) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw validation_error("config: bad boolean '" + s + "' for key " + key);
}

std::vector<double> parse_list(const std::string& s, const std::string& key) {
  std::vector<double> out;
  for (const auto& tok : split(s, ',')) out.push_back(parse_double(trim(tok), key));
  if (out.empty()) throw validation_error("config: empty list for key " + key);
  return out;
}

PriorSpec parse_prior(const std::string& s, const std::string& key) {
  if (s == "flat") return {};
  auto toks = split(s, ':');
  if (toks.size() == 3 && toks[0] == "gaussian") {
    PriorSpec p;
    p.gaussian = true;
    p.mean = parse_double(trim(toks[1]), key);
    p.sd = parse_double(trim(toks[2]), key);
    if (!(p.sd > 0.0)) throw validation_error("config: prior sd must be positive for " + key);
    return p;
  }
  throw validation_error("config: bad prior '" + s + "' for key " + key +
                         " (want flat or gaussian:<mean>:<sd>)");
}

std::string prior_str(const PriorSpec& p) {
  if (!p.gaussian) return "flat";
  return "gaussian:" + fmt_double(p.mean) + ":" + fmt_double(p.sd);
}

std::string list_str(const std::vector<double>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += fmt_double(v[i]);
  }
  return s;
}

void parse_bounds(const std::string& s, RunConfig& cfg) {
  cfg.s_lo.clear();
  cfg.s_hi.clear();
  for (const auto& axis : split(s, ',')) {
    auto lohi = split(axis, ':');
    if (lohi.size() != 2)
      throw validation_error("config: bad bounds '" + s + "' (want lo:hi,lo:hi,...)");
    cfg.s_lo.push_back(parse_double(trim(lohi[0]), "predict.bounds"));
    cfg.s_hi.push_back(parse_double(trim(lohi[1]), "predict.bounds"));
  }
}

std::string bounds_str(const RunConfig& cfg) {
  std::string s;
  for (size_t i = 0; i < cfg.s_lo.size(); ++i) {
    if (i) s += ",";
    s += fmt_double(cfg.s_lo[i]) + ":" + fmt_double(cfg.s_hi[i]);
  }
  return s;
}

void set_kv(RunConfig& cfg, const std::string& sec, const std::string& key,
            const std::string& value) {
  const std::string full = sec + "." + key;
  if (sec == "run") {
    if (key == "model") {
      if (value == "nonnested")
        cfg.flavour = ModelFlavour::Nonnested;
      else if (value == "nested")
        cfg.flavour = ModelFlavour::Nested;
      else
        throw validation_error("config: run.model must be nonnested or nested, got '" + value +
                               "'");
    } else if (key == "iterations") {
      cfg.iterations = static_cast<int>(parse_int(value, full));
    } else if (key == "seed") {
      cfg.seed = static_cast<uint64_t>(parse_int(value, full));
    } else if (key == "t0") {
      cfg.t0 = static_cast<int>(parse_int(value, full));
    } else if (key == "burnin_frac") {
      cfg.burnin_frac = parse_double(value, full);
    } else if (key == "chains") {
      cfg.chains = static_cast<int>(parse_int(value, full));
    } else {
      throw validation_error("config: unknown key " + full);
    }
  } else if (sec == "model") {
    if (key == "kernel_mode") {
      cfg.kernel_mode = value == "last" ? 0 : static_cast<int>(parse_int(value, full));
    } else if (key == "direct_mode") {
      if (value == "none")
        cfg.direct_mode = RunConfig::kNoDirectMode;
      else if (value == "auto")
        cfg.direct_mode = 0;
      else
        cfg.direct_mode = static_cast<int>(parse_int(value, full));
    } else {
      throw validation_error("config: unknown key " + full);
    }
  } else if (sec == "init") {
    if (key == "ell") {
      if (value == "auto") {
        cfg.ell0_auto = true;
        cfg.ell0 = {1.0};
      } else {
        cfg.ell0_auto = false;
        cfg.ell0 = parse_list(value, full);
      }
    } else if (key == "a") {
      cfg.a0 = parse_list(value, full);
    } else if (key == "delta") {
      cfg.delta0 = parse_list(value, full);
    } else if (key == "sigma11") {
      cfg.sigma11_0 = parse_double(value, full);
    } else if (key == "sigma22") {
      cfg.sigma22_0 = parse_double(value, full);
    } else if (key == "rho") {
      cfg.rho_0 = parse_double(value, full);
    } else {
      throw validation_error("config: unknown key " + full);
    }
  } else if (sec == "proposals") {
    if (key == "v_ell") {
      cfg.v_ell = value == "auto" ? std::vector<double>{-1.0} : parse_list(value, full);
    } else if (key == "v_a") {
      cfg.v_a = value == "auto" ? std::vector<double>{-1.0} : parse_list(value, full);
    } else if (key == "v_delta") {
      cfg.v_delta = value == "auto" ? std::vector<double>{-1.0} : parse_list(value, full);
    } else if (key == "v_sigma") {
      cfg.v_sigma = value == "auto" ? -1.0 : parse_double(value, full);
    } else if (key == "v_s") {
      cfg.v_s = value == "auto" ? std::vector<double>{-1.0} : parse_list(value, full);
    } else if (key == "adapt") {
      cfg.adapt = parse_bool(value, full);
    } else {
      throw validation_error("config: unknown key " + full);
    }
  } else if (sec == "priors") {
    if (key == "ell_prior") {
      if (value == "gaussian")
        cfg.ell_prior_gaussian = true;
      else if (value == "flat")
        cfg.ell_prior_gaussian = false;
      else
        throw validation_error("config: priors.ell_prior must be gaussian or flat");
    } else if (key == "ell_prior_sd_scale") {
      cfg.ell_prior_sd_scale = parse_double(value, full);
    } else if (key == "sigma_prior") {
      if (value == "jeffreys")
        cfg.sigma_prior = SigmaPriorKind::Jeffreys;
      else if (value == "gaussian")
        cfg.sigma_prior = SigmaPriorKind::Gaussian;
      else
        throw validation_error("config: priors.sigma_prior must be jeffreys or gaussian");
    } else if (key == "sigma_prior_sd") {
      cfg.sigma_prior_sd = parse_double(value, full);
    } else if (key == "a_prior") {
      cfg.a_prior = parse_prior(value, full);
    } else if (key == "delta_prior") {
      cfg.delta_prior = parse_prior(value, full);
    } else {
      throw validation_error("config: unknown key " + full);
    }
  } else if (sec == "test") {
    if (key == "flat_likelihood") {
      cfg.flat_likelihood = parse_bool(value, full);
    } else if (key == "disable_lookback") {
      cfg.disable_lookback = parse_bool(value, full);
    } else {
      throw validation_error("config: unknown key " + full);
    }
  } else if (sec == "predict") {
    if (key == "bounds") {
      parse_bounds(value, cfg);
    } else {
      throw validation_error("config: unknown key " + full);
    }
  } else if (sec == "modelcheck") {
    if (key == "iterations") {
      cfg.mc_iterations = static_cast<int>(parse_int(value, full));
    } else if (key == "tail") {
      cfg.mc_tail = static_cast<int>(parse_int(value, full));
    } else if (key == "step_scale") {
      cfg.mc_step_scale = parse_double(value, full);
    } else if (key == "adapt") {
      cfg.mc_adapt = parse_bool(value, full);
    } else if (key == "prior_pad") {
      cfg.mc_prior_pad = parse_double(value, full);
    } else {
      throw validation_error("config: unknown key " + full);
    }
  } else {
    throw validation_error("config: unknown section [" + sec + "]");
  }
}

}  // namespace

void RunConfig::validate() const {
  if (iterations < 1) throw validation_error("config: run.iterations must be >= 1");
  if (t0 < 1) throw validation_error("config: run.t0 must be >= 1");
  if (!(burnin_frac >= 0.0 && burnin_frac < 1.0))
    throw validation_error("config: run.burnin_frac must be in [0,1)");
  if (chains < 1) throw validation_error("config: run.chains must be >= 1");
  for (double x : ell0)
    if (!(x > 0.0)) throw validation_error("config: init.ell entries must be positive");
  for (double x : a0)
    if (!(x > 0.0)) throw validation_error("config: init.a entries must be positive");
  for (double x : delta0)
    if (!(x > 0.0)) throw validation_error("config: init.delta entries must be positive");
  if (!(sigma11_0 > 0.0) || !(sigma22_0 > 0.0) || !(rho_0 > -1.0 && rho_0 < 1.0))
    throw validation_error("config: init sigma seeds must satisfy sigma > 0, |rho| < 1");
  auto check_v = [](const std::vector<double>& v, const char* name) {
    for (double x : v)
      if (x != -1.0 && !(x >= 0.0))
        throw validation_error(std::string("config: proposals.") + name +
                               " entries must be >= 0 (or auto)");
  };
  check_v(v_ell, "v_ell");
  check_v(v_a, "v_a");
  check_v(v_delta, "v_delta");
  check_v(v_s, "v_s");
  if (v_sigma != -1.0 && !(v_sigma >= 0.0))
    throw validation_error("config: proposals.v_sigma must be >= 0 (or auto)");
  if (!(ell_prior_sd_scale > 0.0))
    throw validation_error("config: priors.ell_prior_sd_scale must be positive");
  if (!(sigma_prior_sd > 0.0))
    throw validation_error("config: priors.sigma_prior_sd must be positive");
  if (s_lo.size() != s_hi.size())
    throw validation_error("config: predict.bounds lo/hi length mismatch");
  for (size_t i = 0; i < s_lo.size(); ++i)
    if (!(s_lo[i] <= s_hi[i])) throw validation_error("config: predict.bounds must have lo <= hi");
  if (mc_iterations < 1 || mc_tail < 1 || mc_tail > mc_iterations)
    throw validation_error("config: modelcheck.iterations/tail invalid");
  if (!(mc_step_scale > 0.0)) throw validation_error("config: modelcheck.step_scale must be > 0");
  if (!(mc_prior_pad > 0.0)) throw validation_error("config: modelcheck.prior_pad must be > 0");
}

void RunConfig::resolve_axes(int d) {
  auto expand = [d](std::vector<double>& v, const char* name) {
    if (static_cast<int>(v.size()) == d) return;
    if (v.size() == 1) {
      v.assign(d, v[0]);
      return;
    }
    throw validation_error(std::string("config: ") + name + " has " + std::to_string(v.size()) +
                           " entries for " + std::to_string(d) + " input axes");
  };
  expand(ell0, "init.ell");
  expand(a0, "init.a");
  expand(delta0, "init.delta");
  expand(v_ell, "proposals.v_ell");
  expand(v_a, "proposals.v_a");
  expand(v_delta, "proposals.v_delta");
  expand(v_s, "proposals.v_s");
  if (static_cast<int>(s_lo.size()) != d) {
    if (s_lo.size() == 1) {
      s_lo.assign(d, s_lo[0]);
      s_hi.assign(d, s_hi[0]);
    } else if (s_lo.size() == 2) {
      // the astronomical default bounds fit d=2 only; fall back to a unit box
      s_lo.assign(d, 0.0);
      s_hi.assign(d, 1.0);
    } else {
      throw validation_error("config: predict.bounds has " + std::to_string(s_lo.size()) +
                             " axes for input dimension " + std::to_string(d));
    }
  }
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw validation_error("config " + origin + ":" + std::to_string(lineno) +
                               ": bad section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw validation_error("config " + origin + ":" + std::to_string(lineno) +
                             ": expected key = value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw validation_error("config " + origin + ":" + std::to_string(lineno) +
                             ": key '" + key + "' outside any [section]");
    set_kv(cfg, section, key, value);
  }
  cfg.validate();
  return cfg;
}

RunConfig read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw io_error("cannot read config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream o;
  o << "[run]\n";
  o << "model = " << (cfg.flavour == ModelFlavour::Nested ? "nested" : "nonnested") << "\n";
  o << "iterations = " << cfg.iterations << "\n";
  o << "seed = " << cfg.seed << "\n";
  o << "t0 = " << cfg.t0 << "\n";
  o << "burnin_frac = " << fmt_double(cfg.burnin_frac) << "\n";
  o << "chains = " << cfg.chains << "\n";
  o << "[model]\n";
  o << "kernel_mode = " << (cfg.kernel_mode == 0 ? std::string("last")
                                                 : std::to_string(cfg.kernel_mode)) << "\n";
  o << "direct_mode = "
    << (cfg.direct_mode == RunConfig::kNoDirectMode
            ? std::string("none")
            : (cfg.direct_mode == 0 ? std::string("auto") : std::to_string(cfg.direct_mode)))
    << "\n";
  o << "[init]\n";
  o << "ell = " << (cfg.ell0_auto ? std::string("auto") : list_str(cfg.ell0)) << "\n";
  o << "a = " << list_str(cfg.a0) << "\n";
  o << "delta = " << list_str(cfg.delta0) << "\n";
  o << "sigma11 = " << fmt_double(cfg.sigma11_0) << "\n";
  o << "sigma22 = " << fmt_double(cfg.sigma22_0) << "\n";
  o << "rho = " << fmt_double(cfg.rho_0) << "\n";
  o << "[proposals]\n";
  auto v_str = [](const std::vector<double>& v) {
    return (v.size() == 1 && v[0] == -1.0) ? std::string("auto") : list_str(v);
  };
  o << "v_ell = " << v_str(cfg.v_ell) << "\n";
  o << "v_a = " << v_str(cfg.v_a) << "\n";
  o << "v_delta = " << v_str(cfg.v_delta) << "\n";
  o << "v_sigma = " << (cfg.v_sigma == -1.0 ? std::string("auto") : fmt_double(cfg.v_sigma))
    << "\n";
  o << "v_s = " << v_str(cfg.v_s) << "\n";
  o << "adapt = " << (cfg.adapt ? "true" : "false") << "\n";
  o << "[priors]\n";
  o << "ell_prior = " << (cfg.ell_prior_gaussian ? "gaussian" : "flat") << "\n";
  o << "ell_prior_sd_scale = " << fmt_double(cfg.ell_prior_sd_scale) << "\n";
  o << "sigma_prior = " << (cfg.sigma_prior == SigmaPriorKind::Jeffreys ? "jeffreys" : "gaussian")
    << "\n";
  o << "sigma_prior_sd = " << fmt_double(cfg.sigma_prior_sd) << "\n";
  o << "a_prior = " << prior_str(cfg.a_prior) << "\n";
  o << "delta_prior = " << prior_str(cfg.delta_prior) << "\n";
  o << "[test]\n";
  o << "flat_likelihood = " << (cfg.flat_likelihood ? "true" : "false") << "\n";
  o << "disable_lookback = " << (cfg.disable_lookback ? "true" : "false") << "\n";
  o << "[predict]\n";
  o << "bounds = " << bounds_str(cfg) << "\n";
  o << "[modelcheck]\n";
  o << "iterations = " << cfg.mc_iterations << "\n";
  o << "tail = " << cfg.mc_tail << "\n";
  o << "step_scale = " << fmt_double(cfg.mc_step_scale) << "\n";
  o << "adapt = " << (cfg.mc_adapt ? "true" : "false") << "\n";
  o << "prior_pad = " << fmt_double(cfg.mc_prior_pad) << "\n";
  return o.str();
}

void write_config_file(const RunConfig& cfg, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw io_error("cannot write config file " + path);
  f << serialize_config(cfg);
  if (!f) throw io_error("failed writing config file " + path);
}

void config_set(RunConfig& cfg, const std::string& dotted_key, const std::string& value) {
  auto dot = dotted_key.find('.');
  if (dot == std::string::npos)
    throw validation_error("config: override key '" + dotted_key + "' must be section.key");
  set_kv(cfg, dotted_key.substr(0, dot), dotted_key.substr(dot + 1), trim(value));
}

uint64_t config_hash(const RunConfig& cfg) {
  const std::string s = serialize_config(cfg);
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace tgp
