#include "arcpinn/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

namespace arcpinn {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, int line, const std::string& key) {
  const char* begin = v.c_str();
  char* end = nullptr;
  double x = std::strtod(begin, &end);
  if (end == begin || *end != '\0') fail(line, "invalid number for '" + key + "': " + v);
  return x;
}

std::int64_t parse_int(const std::string& v, int line, const std::string& key) {
  const char* begin = v.c_str();
  char* end = nullptr;
  long long x = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0') fail(line, "invalid integer for '" + key + "': " + v);
  return x;
}

bool parse_bool(const std::string& v, int line, const std::string& key) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  fail(line, "invalid boolean for '" + key + "': " + v);
}

// "auto" or a positive number; auto encoded as -1.
double parse_auto_double(const std::string& v, int line, const std::string& key) {
  if (v == "auto") return -1.0;
  return parse_double(v, line, key);
}

std::vector<double> parse_list(const std::string& v, char sep, int line,
                               const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_double(item, line, key));
  }
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

[[noreturn]] void violation(const std::string& field, const std::string& what) {
  throw ConfigError("invariant violation: " + field + " " + what);
}

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) violation(field, what);
}

}  // namespace

void RunConfig::finalize() {
  if (goldak.t_on < 0) goldak.t_on = domain.t_end;

  require(material.rho > 0, "material.rho", "must be > 0");
  require(material.cp > 0, "material.cp", "must be > 0");
  require(material.k > 0, "material.k", "must be > 0");
  require(material.emissivity >= 0 && material.emissivity <= 1,
          "material.emissivity", "must be in [0, 1]");
  require(material.h_conv >= 0, "material.h_conv", "must be >= 0");

  require(goldak.a_f > 0, "goldak.a_f", "must be > 0");
  require(goldak.a_r > 0, "goldak.a_r", "must be > 0");
  require(goldak.b > 0, "goldak.b", "must be > 0");
  require(goldak.c > 0, "goldak.c", "must be > 0");
  require(std::abs(goldak.f_f + goldak.f_r - 2.0) <= 1e-9, "goldak.f_f+f_r",
          "must equal 2");
  require(goldak.efficiency > 0 && goldak.efficiency <= 1, "goldak.efficiency",
          "must be in (0, 1]");
  require(goldak.power >= 0, "goldak.power", "must be >= 0");
  require(goldak.t_on > 0, "goldak.t_on", "must be > 0");
  const double front = goldak.f_f / goldak.a_f;
  const double rear = goldak.f_r / goldak.a_r;
  require(std::abs(front - rear) / front < 1e-2, "goldak.f_f/a_f",
          "front and rear branches must agree at the source plane within 1%");

  require(domain.lx > 0, "domain.lx", "must be > 0");
  require(domain.ly > 0, "domain.ly", "must be > 0");
  require(domain.lz > 0, "domain.lz", "must be > 0");
  require(domain.t_end > 0, "domain.t_end", "must be > 0");

  require(sampling.dt > 0, "sampling.dt", "must be > 0");
  const double steps = domain.t_end / sampling.dt;
  require(std::abs(steps - std::llround(steps)) <= 1e-9, "sampling.dt",
          "must divide domain.t_end");
  require(sampling.scale > 0, "sampling.scale", "must be > 0");
  require(sampling.z_warp_exponent > 0, "sampling.z_warp_exponent",
          "must be > 0");
  require(sampling.ellipsoid_scale > 0, "sampling.ellipsoid_scale",
          "must be > 0");
  require(sampling.n_boundary >= 0, "sampling.n_boundary", "must be >= 0");
  require(sampling.n_domain >= 0, "sampling.n_domain", "must be >= 0");
  require(sampling.n_initial >= 0, "sampling.n_initial", "must be >= 0");
  require(sampling.source_per_step >= 0, "sampling.source_per_step",
          "must be >= 0");

  require(network.depth >= 1, "network.depth", "must be >= 1");
  require(network.width >= 1, "network.width", "must be >= 1");
  require(network.delta_t > 0, "network.delta_t", "must be > 0");

  require(training.adam_lr > 0, "training.adam_lr", "must be > 0");
  require(training.adam_beta1 >= 0 && training.adam_beta1 < 1,
          "training.adam_beta1", "must be in [0, 1)");
  require(training.adam_beta2 >= 0 && training.adam_beta2 < 1,
          "training.adam_beta2", "must be in [0, 1)");
  require(training.adam_epsilon > 0, "training.adam_epsilon", "must be > 0");
  require(training.adam_epochs >= 0, "training.adam_epochs", "must be >= 0");
  require(training.lbfgs_lr > 0, "training.lbfgs_lr", "must be > 0");
  require(training.lbfgs_max_iterations >= 1, "training.lbfgs_max_iterations",
          "must be >= 1");
  require(training.lbfgs_max_evaluations >= 1,
          "training.lbfgs_max_evaluations", "must be >= 1");
  require(training.lbfgs_epochs >= 0, "training.lbfgs_epochs", "must be >= 0");
  require(training.lbfgs_history >= 1, "training.lbfgs_history",
          "must be >= 1");
  require(training.weight_update_period >= 1, "training.weight_update_period",
          "must be >= 1");
  require(training.weight_alpha >= 0 && training.weight_alpha < 1,
          "training.weight_alpha", "must be in [0, 1)");
  require(training.threads >= 0, "training.threads", "must be >= 0");
  require(training.minibatch_size >= 0, "training.minibatch_size",
          "must be >= 0");

  require(residuals.scale_pde < 0 || residuals.scale_pde > 0,
          "residuals.scale_pde", "must be positive or auto");
  require(residuals.scale_bc < 0 || residuals.scale_bc > 0,
          "residuals.scale_bc", "must be positive or auto");

  for (const auto& p : probes.points) {
    const bool inside = p[0] >= 0 && p[0] <= domain.lx && p[1] >= 0 &&
                        p[1] <= domain.ly && p[2] >= 0 && p[2] <= domain.lz;
    require(inside, "probes.points", "must lie inside the plate");
  }
  for (double t : probes.times)
    require(t >= 0 && t <= domain.t_end, "probes.times",
            "must lie inside [0, t_end]");
}

double RunConfig::pde_scale() const {
  if (!residuals.scaling) return 1.0;
  if (residuals.scale_pde > 0) return residuals.scale_pde;
  return 1.0 / (material.rho * material.cp);
}

double RunConfig::bc_scale() const {
  if (!residuals.scaling) return 1.0;
  if (residuals.scale_bc > 0) return residuals.scale_bc;
  return material.h_conv > 0 ? 1.0 / material.h_conv : 1.0;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;

  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;

    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "material" && section != "goldak" &&
          section != "domain" && section != "sampling" &&
          section != "network" && section != "training" &&
          section != "residuals" && section != "probes")
        fail(line, "unknown section [" + section + "]");
      continue;
    }

    auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (section.empty())
      fail(line, "key '" + key + "' appears before any section header");

    auto num = [&] { return parse_double(val, line, key); };
    auto integer = [&] { return parse_int(val, line, key); };

    if (section == "material") {
      if (key == "rho") cfg.material.rho = num();
      else if (key == "cp") cfg.material.cp = num();
      else if (key == "k") cfg.material.k = num();
      else if (key == "emissivity") cfg.material.emissivity = num();
      else if (key == "h_conv") cfg.material.h_conv = num();
      else if (key == "t_ambient") cfg.material.t_ambient = num();
      else fail(line, "unknown key '" + key + "' in [material]");
    } else if (section == "goldak") {
      if (key == "a_f") cfg.goldak.a_f = num();
      else if (key == "a_r") cfg.goldak.a_r = num();
      else if (key == "b") cfg.goldak.b = num();
      else if (key == "c") cfg.goldak.c = num();
      else if (key == "f_f") cfg.goldak.f_f = num();
      else if (key == "f_r") cfg.goldak.f_r = num();
      else if (key == "power") cfg.goldak.power = num();
      else if (key == "efficiency") cfg.goldak.efficiency = num();
      else if (key == "x0") cfg.goldak.x0 = num();
      else if (key == "y0") cfg.goldak.y0 = num();
      else if (key == "velocity") cfg.goldak.velocity = num();
      else if (key == "t_on") cfg.goldak.t_on = num();
      else fail(line, "unknown key '" + key + "' in [goldak]");
    } else if (section == "domain") {
      if (key == "lx") cfg.domain.lx = num();
      else if (key == "ly") cfg.domain.ly = num();
      else if (key == "lz") cfg.domain.lz = num();
      else if (key == "t_end") cfg.domain.t_end = num();
      else fail(line, "unknown key '" + key + "' in [domain]");
    } else if (section == "sampling") {
      if (key == "n_boundary") cfg.sampling.n_boundary = integer();
      else if (key == "n_domain") cfg.sampling.n_domain = integer();
      else if (key == "n_initial") cfg.sampling.n_initial = integer();
      else if (key == "source_per_step") cfg.sampling.source_per_step = integer();
      else if (key == "dt") cfg.sampling.dt = num();
      else if (key == "scale") cfg.sampling.scale = num();
      else if (key == "z_warp_exponent") cfg.sampling.z_warp_exponent = num();
      else if (key == "ellipsoid_scale") cfg.sampling.ellipsoid_scale = num();
      else if (key == "seed")
        cfg.sampling.seed = static_cast<std::uint64_t>(integer());
      else fail(line, "unknown key '" + key + "' in [sampling]");
    } else if (section == "network") {
      if (key == "depth") cfg.network.depth = static_cast<int>(integer());
      else if (key == "width") cfg.network.width = static_cast<int>(integer());
      else if (key == "delta_t") cfg.network.delta_t = num();
      else fail(line, "unknown key '" + key + "' in [network]");
    } else if (section == "training") {
      if (key == "adam_lr") cfg.training.adam_lr = num();
      else if (key == "adam_beta1") cfg.training.adam_beta1 = num();
      else if (key == "adam_beta2") cfg.training.adam_beta2 = num();
      else if (key == "adam_epsilon") cfg.training.adam_epsilon = num();
      else if (key == "adam_epochs")
        cfg.training.adam_epochs = static_cast<int>(integer());
      else if (key == "lbfgs_lr") cfg.training.lbfgs_lr = num();
      else if (key == "lbfgs_max_iterations")
        cfg.training.lbfgs_max_iterations = static_cast<int>(integer());
      else if (key == "lbfgs_max_evaluations")
        cfg.training.lbfgs_max_evaluations = static_cast<int>(integer());
      else if (key == "lbfgs_epochs")
        cfg.training.lbfgs_epochs = static_cast<int>(integer());
      else if (key == "lbfgs_history")
        cfg.training.lbfgs_history = static_cast<int>(integer());
      else if (key == "weight_update_period")
        cfg.training.weight_update_period = static_cast<int>(integer());
      else if (key == "weight_alpha") cfg.training.weight_alpha = num();
      else if (key == "threads")
        cfg.training.threads = static_cast<int>(integer());
      else if (key == "minibatch_size")
        cfg.training.minibatch_size = integer();
      else fail(line, "unknown key '" + key + "' in [training]");
    } else if (section == "residuals") {
      if (key == "radiation_convention") {
        if (val == "kelvin-shifted")
          cfg.residuals.radiation = RadiationConvention::kKelvinShifted;
        else if (val == "celsius-raw")
          cfg.residuals.radiation = RadiationConvention::kCelsiusRaw;
        else fail(line, "radiation_convention must be kelvin-shifted or celsius-raw");
      } else if (key == "scaling") {
        cfg.residuals.scaling = parse_bool(val, line, key);
      } else if (key == "scale_pde") {
        cfg.residuals.scale_pde = parse_auto_double(val, line, key);
      } else if (key == "scale_bc") {
        cfg.residuals.scale_bc = parse_auto_double(val, line, key);
      } else {
        fail(line, "unknown key '" + key + "' in [residuals]");
      }
    } else if (section == "probes") {
      if (key == "points") {
        cfg.probes.points.clear();
        std::stringstream ss(val);
        std::string triple;
        while (std::getline(ss, triple, ';')) {
          triple = trim(triple);
          if (triple.empty()) continue;
          auto xs = parse_list(triple, ',', line, key);
          if (xs.size() != 3) fail(line, "probe points need 3 coordinates");
          cfg.probes.points.push_back({xs[0], xs[1], xs[2]});
        }
      } else if (key == "times") {
        cfg.probes.times = parse_list(val, ',', line, key);
      } else {
        fail(line, "unknown key '" + key + "' in [probes]");
      }
    }
  }

  // Environment override for the random seed only.
  if (const char* env = std::getenv("ARCPINN_SEED")) {
    char* end = nullptr;
    long long s = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0')
      cfg.sampling.seed = static_cast<std::uint64_t>(s);
  }

  cfg.finalize();
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream o;
  o << "[material]\n"
    << "rho = " << fmt(c.material.rho) << "\n"
    << "cp = " << fmt(c.material.cp) << "\n"
    << "k = " << fmt(c.material.k) << "\n"
    << "emissivity = " << fmt(c.material.emissivity) << "\n"
    << "h_conv = " << fmt(c.material.h_conv) << "\n"
    << "t_ambient = " << fmt(c.material.t_ambient) << "\n\n";
  o << "[goldak]\n"
    << "a_f = " << fmt(c.goldak.a_f) << "\n"
    << "a_r = " << fmt(c.goldak.a_r) << "\n"
    << "b = " << fmt(c.goldak.b) << "\n"
    << "c = " << fmt(c.goldak.c) << "\n"
    << "f_f = " << fmt(c.goldak.f_f) << "\n"
    << "f_r = " << fmt(c.goldak.f_r) << "\n"
    << "power = " << fmt(c.goldak.power) << "\n"
    << "efficiency = " << fmt(c.goldak.efficiency) << "\n"
    << "x0 = " << fmt(c.goldak.x0) << "\n"
    << "y0 = " << fmt(c.goldak.y0) << "\n"
    << "velocity = " << fmt(c.goldak.velocity) << "\n"
    << "t_on = " << fmt(c.goldak.t_on) << "\n\n";
  o << "[domain]\n"
    << "lx = " << fmt(c.domain.lx) << "\n"
    << "ly = " << fmt(c.domain.ly) << "\n"
    << "lz = " << fmt(c.domain.lz) << "\n"
    << "t_end = " << fmt(c.domain.t_end) << "\n\n";
  o << "[sampling]\n"
    << "n_boundary = " << c.sampling.n_boundary << "\n"
    << "n_domain = " << c.sampling.n_domain << "\n"
    << "n_initial = " << c.sampling.n_initial << "\n"
    << "source_per_step = " << c.sampling.source_per_step << "\n"
    << "dt = " << fmt(c.sampling.dt) << "\n"
    << "scale = " << fmt(c.sampling.scale) << "\n"
    << "z_warp_exponent = " << fmt(c.sampling.z_warp_exponent) << "\n"
    << "ellipsoid_scale = " << fmt(c.sampling.ellipsoid_scale) << "\n"
    << "seed = " << c.sampling.seed << "\n\n";
  o << "[network]\n"
    << "depth = " << c.network.depth << "\n"
    << "width = " << c.network.width << "\n"
    << "delta_t = " << fmt(c.network.delta_t) << "\n\n";
  o << "[training]\n"
    << "adam_lr = " << fmt(c.training.adam_lr) << "\n"
    << "adam_beta1 = " << fmt(c.training.adam_beta1) << "\n"
    << "adam_beta2 = " << fmt(c.training.adam_beta2) << "\n"
    << "adam_epsilon = " << fmt(c.training.adam_epsilon) << "\n"
    << "adam_epochs = " << c.training.adam_epochs << "\n"
    << "lbfgs_lr = " << fmt(c.training.lbfgs_lr) << "\n"
    << "lbfgs_max_iterations = " << c.training.lbfgs_max_iterations << "\n"
    << "lbfgs_max_evaluations = " << c.training.lbfgs_max_evaluations << "\n"
    << "lbfgs_epochs = " << c.training.lbfgs_epochs << "\n"
    << "lbfgs_history = " << c.training.lbfgs_history << "\n"
    << "weight_update_period = " << c.training.weight_update_period << "\n"
    << "weight_alpha = " << fmt(c.training.weight_alpha) << "\n"
    << "threads = " << c.training.threads << "\n"
    << "minibatch_size = " << c.training.minibatch_size << "\n\n";
  o << "[residuals]\n"
    << "radiation_convention = "
    << (c.residuals.radiation == RadiationConvention::kKelvinShifted
            ? "kelvin-shifted"
            : "celsius-raw")
    << "\n"
    << "scaling = " << (c.residuals.scaling ? "on" : "off") << "\n"
    << "scale_pde = "
    << (c.residuals.scale_pde < 0 ? std::string("auto") : fmt(c.residuals.scale_pde))
    << "\n"
    << "scale_bc = "
    << (c.residuals.scale_bc < 0 ? std::string("auto") : fmt(c.residuals.scale_bc))
    << "\n\n";
  o << "[probes]\n" << "points = ";
  for (std::size_t i = 0; i < c.probes.points.size(); ++i) {
    const auto& p = c.probes.points[i];
    if (i) o << "; ";
    o << fmt(p[0]) << "," << fmt(p[1]) << "," << fmt(p[2]);
  }
  o << "\n" << "times = ";
  for (std::size_t i = 0; i < c.probes.times.size(); ++i) {
    if (i) o << ",";
    o << fmt(c.probes.times[i]);
  }
  o << "\n";
  return o.str();
}

std::array<double, 4> normalize_point(const std::array<double, 4>& p,
                                      const DomainSpec& dom) {
  const double ext[4] = {dom.lx, dom.ly, dom.lz, dom.t_end};
  std::array<double, 4> q;
  for (int i = 0; i < 4; ++i) {
    const double slack = 1e-9 * ext[i];
    if (p[i] < -slack || p[i] > ext[i] + slack)
      throw NumericError("point outside domain: coordinate " +
                         std::to_string(i) + " = " + std::to_string(p[i]));
    q[i] = 2.0 * p[i] / ext[i] - 1.0;
  }
  return q;
}

std::array<double, 4> denormalize_point(const std::array<double, 4>& q,
                                        const DomainSpec& dom) {
  const double ext[4] = {dom.lx, dom.ly, dom.lz, dom.t_end};
  std::array<double, 4> p;
  for (int i = 0; i < 4; ++i) p[i] = 0.5 * (q[i] + 1.0) * ext[i];
  return p;
}

DerivedConstants derived_constants(const MaterialProps& mat) {
  return {mat.k / (mat.rho * mat.cp), kStefanBoltzmann};
}

}  // namespace arcpinn
