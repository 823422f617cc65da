#include "qwalk/config.hpp"

#include <charconv>
#include <sstream>

#include "qwalk/csv.hpp"
#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

double real_field(const std::string& field, const std::string& v) {
  double d = 0;
  if (!parse_double(v, d)) throw ConfigError(field, "expected a number, got '" + v + "'");
  return d;
}

std::int64_t int_field(const std::string& field, const std::string& v) {
  std::int64_t i = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), i);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError(field, "expected an integer, got '" + v + "'");
  return i;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

void put(std::ostream& os, const char* key, const std::optional<double>& v) {
  if (v) os << key << " = " << format_real(*v) << '\n';
}

void put(std::ostream& os, const char* key, const std::optional<std::int64_t>& v) {
  if (v) os << key << " = " << *v << '\n';
}

}  // namespace

std::string to_string(WalkKind w) {
  switch (w) {
    case WalkKind::two_site: return "two_site";
    case WalkKind::three_site: return "three_site";
    case WalkKind::coined: return "coined";
  }
  return {};
}

std::string to_string(Topology t) { return t == Topology::line ? "line" : "cycle"; }

std::string to_string(InitialKind k) {
  return k == InitialKind::delta_origin ? "delta" : "symmetric";
}

double parse_angle(const std::string& text, const std::string& field) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s.push_back(c);
  double d = 0;
  if (parse_double(s, d)) return d;
  const auto at = s.find("pi");
  const auto fail = [&] { return ConfigError(field, "cannot parse angle '" + text + "'"); };
  if (at == std::string::npos) throw fail();
  std::string coef = s.substr(0, at);
  std::string rest = s.substr(at + 2);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  double c = 1;
  if (coef == "-") c = -1;
  else if (!coef.empty() && coef != "+" && !parse_double(coef, c)) throw fail();
  double den = 1;
  if (!rest.empty()) {
    if (rest.front() != '/' || !parse_double(std::string_view(rest).substr(1), den) || den == 0)
      throw fail();
  }
  return c * kPi / den;
}

void apply_setting(RunConfig& c, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key), v = trim(raw_value);
  if (key == "walk") {
    if (v == "two_site") c.walk = WalkKind::two_site;
    else if (v == "three_site") c.walk = WalkKind::three_site;
    else if (v == "coined") c.walk = WalkKind::coined;
    else throw ConfigError(key, "expected two_site, three_site or coined");
  } else if (key == "topology") {
    if (v == "line") c.topology = Topology::line;
    else if (v == "cycle") c.topology = Topology::cycle;
    else throw ConfigError(key, "expected line or cycle");
  } else if (key == "N") {
    c.n_sites.clear();
    for (const auto& item : split(v, ',')) c.n_sites.push_back(int_field(key, item));
    if (c.n_sites.empty()) throw ConfigError(key, "empty list");
  } else if (key == "alpha") c.alpha = parse_angle(v, key);
  else if (key == "beta") c.beta = parse_angle(v, key);
  else if (key == "phi1") c.phi1 = parse_angle(v, key);
  else if (key == "phi2") c.phi2 = parse_angle(v, key);
  else if (key == "rho") c.rho = parse_angle(v, key);
  else if (key == "theta") c.theta = parse_angle(v, key);
  else if (key == "varphi") c.varphi = parse_angle(v, key);
  else if (key == "steps") c.steps = int_field(key, v);
  else if (key == "initial") {
    if (v == "delta") c.initial = InitialKind::delta_origin;
    else if (v == "symmetric") c.initial = InitialKind::symmetric;
    else throw ConfigError(key, "expected delta or symmetric");
  } else if (key == "output") {
    if (v.empty()) throw ConfigError(key, "empty path");
    c.output = v;
  } else if (key == "epsilon") c.epsilon = real_field(key, v);
  else if (key == "horizon") c.horizon = int_field(key, v);
  else if (key == "quadrature") c.quadrature = int_field(key, v);
  else if (key == "kgrid") c.kgrid = int_field(key, v);
  else if (key == "vmax") c.vmax = real_field(key, v);
  else if (key == "bin") c.bin = real_field(key, v);
  else if (key == "calibration") c.calibration = real_field(key, v);
  else if (key == "tessellation") {
    c.tessellation = split(v, ',');
    if (c.tessellation.empty() || c.tessellation.size() > 2)
      throw ConfigError(key, "expected one or two files");
  } else if (key == "seed") {
    c.seed = static_cast<std::uint64_t>(int_field(key, v));
  } else {
    throw ConfigError(key, "unknown key");
  }
}

RunConfig parse_config(const std::string& text, RunConfig base) {
  std::istringstream in(text);
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      const auto col = line.find_first_not_of(" \t");
      throw ParseError("expected key = value", no, col + 1);
    }
    apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream os;
  os << "walk = " << to_string(c.walk) << '\n';
  os << "topology = " << to_string(c.topology) << '\n';
  if (!c.n_sites.empty()) {
    os << "N = ";
    for (std::size_t i = 0; i < c.n_sites.size(); ++i) os << (i ? "," : "") << c.n_sites[i];
    os << '\n';
  }
  put(os, "alpha", c.alpha);
  put(os, "beta", c.beta);
  put(os, "phi1", c.phi1);
  put(os, "phi2", c.phi2);
  put(os, "rho", c.rho);
  put(os, "theta", c.theta);
  put(os, "varphi", c.varphi);
  os << "steps = " << c.steps << '\n';
  os << "initial = " << to_string(c.initial) << '\n';
  os << "output = " << c.output << '\n';
  put(os, "epsilon", c.epsilon);
  put(os, "horizon", c.horizon);
  put(os, "quadrature", c.quadrature);
  put(os, "kgrid", c.kgrid);
  put(os, "vmax", c.vmax);
  put(os, "bin", c.bin);
  put(os, "calibration", c.calibration);
  if (!c.tessellation.empty()) {
    os << "tessellation = ";
    for (std::size_t i = 0; i < c.tessellation.size(); ++i)
      os << (i ? "," : "") << c.tessellation[i];
    os << '\n';
  }
  os << "seed = " << static_cast<std::int64_t>(c.seed) << '\n';
  return os.str();
}

WalkParams RunConfig::walk_params() const {
  return {alpha.value_or(0), beta.value_or(0), phi1.value_or(0), phi2.value_or(0)};
}

CoinParams RunConfig::coin_params() const {
  return {rho.value_or(0), theta.value_or(0), varphi.value_or(0)};
}

Site RunConfig::cycle_length() const {
  if (n_sites.size() != 1) throw ConfigError("N", "expected a single cycle length");
  return n_sites.front();
}

void validate_config(const RunConfig& c, Command cmd) {
  const bool coinless_set = c.alpha || c.beta || c.phi1 || c.phi2;
  const bool coin_set = c.rho || c.theta || c.varphi;
  if (c.walk == WalkKind::coined && coinless_set)
    throw ConfigError(c.alpha ? "alpha" : c.beta ? "beta" : c.phi1 ? "phi1" : "phi2",
                      "not a coined-walk parameter");
  if (c.walk != WalkKind::coined && coin_set)
    throw ConfigError(c.rho ? "rho" : c.theta ? "theta" : "varphi",
                      "only valid for walk = coined");
  if (c.walk == WalkKind::three_site && coinless_set)
    throw ConfigError(c.alpha ? "alpha" : c.beta ? "beta" : c.phi1 ? "phi1" : "phi2",
                      "three_site walk takes no parameters");
  if (c.walk == WalkKind::two_site && cmd != Command::validate) {
    if (!c.alpha) throw ConfigError("alpha", "required for two_site walk");
    if (!c.beta) throw ConfigError("beta", "required for two_site walk");
  }
  if (c.walk == WalkKind::coined && !c.rho) throw ConfigError("rho", "required for coined walk");
  if (!c.walk_params().finite()) throw ConfigError("alpha", "angles must be finite");
  if (c.steps < 0) throw ConfigError("steps", "must be non-negative");
  for (Site n : c.n_sites) {
    if (n <= 0 || n % 2 != 0) throw ConfigError("N", "cycle length must be positive and even");
  }
  const bool multi = cmd == Command::mixing;
  if (c.topology == Topology::cycle || multi) {
    if (c.n_sites.empty()) throw ConfigError("N", "required for topology = cycle");
    if (!multi && c.n_sites.size() != 1) throw ConfigError("N", "expected a single cycle length");
    if (c.walk == WalkKind::three_site)
      for (Site n : c.n_sites)
        if (n % 4 != 0) throw ConfigError("N", "three_site walk on a cycle needs 4 | N");
  }
  if (c.epsilon && !(*c.epsilon > 0 && *c.epsilon < 1))
    throw ConfigError("epsilon", "must lie in (0, 1)");
  if (c.horizon && *c.horizon < 1) throw ConfigError("horizon", "must be positive");
  if (c.quadrature && *c.quadrature < 1) throw ConfigError("quadrature", "must be positive");
  if (c.kgrid && *c.kgrid < 1) throw ConfigError("kgrid", "must be positive");
  if (c.vmax && !(*c.vmax > 0 && *c.vmax < 1)) throw ConfigError("vmax", "must lie in (0, 1)");
  if (c.bin && !(*c.bin > 0)) throw ConfigError("bin", "must be positive");
  if (c.calibration && !(*c.calibration > 0)) throw ConfigError("calibration", "must be positive");

  switch (cmd) {
    case Command::simulate:
      break;
    case Command::spectrum:
      if (c.walk != WalkKind::two_site) throw ConfigError("walk", "spectrum needs two_site");
      break;
    case Command::asymptotic:
      if (c.walk != WalkKind::two_site) throw ConfigError("walk", "asymptotic needs two_site");
      if (c.topology != Topology::line) throw ConfigError("topology", "asymptotic needs line");
      if (c.steps < 1) throw ConfigError("steps", "asymptotic needs steps >= 1");
      if (std::abs(std::remainder(*c.alpha + *c.beta - kPi, 2 * kPi)) > 1e-9)
        throw ConfigError("beta", "asymptotic needs alpha + beta = pi");
      if (std::abs(std::sin(*c.alpha)) < 1e-12 || std::abs(std::sin(*c.alpha)) > 1 - 1e-12)
        throw ConfigError("alpha", "asymptotic needs 0 < sin(alpha) < 1");
      break;
    case Command::mixing:
      if (c.walk != WalkKind::two_site) throw ConfigError("walk", "mixing needs two_site");
      if (!c.epsilon) throw ConfigError("epsilon", "required for mixing");
      if (c.output == "-") throw ConfigError("output", "mixing writes a directory");
      break;
    case Command::validate:
      if (c.walk == WalkKind::coined && c.tessellation.empty())
        throw ConfigError("walk", "coined walk has no tessellation");
      break;
  }
}

}  // namespace qwalk
