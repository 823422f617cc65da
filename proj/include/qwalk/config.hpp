#ifndef QWALK_CONFIG_HPP
#define QWALK_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qwalk/evolution.hpp"
#include "qwalk/walk_core.hpp"

namespace qwalk {

enum class WalkKind { two_site, three_site, coined };
enum class Topology { line, cycle };

struct RunConfig {
  WalkKind walk = WalkKind::two_site;
  Topology topology = Topology::line;
  std::vector<Site> n_sites;  // key N; several values only for mixing
  std::optional<double> alpha, beta, phi1, phi2;
  std::optional<double> rho, theta, varphi;
  std::int64_t steps = 0;
  InitialKind initial = InitialKind::delta_origin;
  std::string output = "-";
  std::optional<double> epsilon;
  std::optional<std::int64_t> horizon;
  std::optional<std::int64_t> quadrature;
  std::optional<std::int64_t> kgrid;
  std::optional<double> vmax;
  std::optional<double> bin;
  std::optional<double> calibration;
  std::vector<std::string> tessellation;  // validate: one or two files
  std::uint64_t seed = 0;

  bool operator==(const RunConfig&) const = default;

  WalkParams walk_params() const;  // missing phases default to 0
  CoinParams coin_params() const;  // missing theta, varphi default to 0
  Site cycle_length() const;       // the single N
};

// Decimal radians or rational multiples of pi: pi/2, -3pi/4, 2*pi/3.
double parse_angle(const std::string& text, const std::string& field = "angle");

// Apply one key=value assignment.
void apply_setting(RunConfig& c, const std::string& key, const std::string& value);

// key=value lines, '#' comments.
RunConfig parse_config(const std::string& text, RunConfig base = {});
std::string emit_config(const RunConfig& c);

enum class Command { simulate, spectrum, asymptotic, mixing, validate };

// Throws ConfigError naming the offending field.
void validate_config(const RunConfig& c, Command cmd);

std::string to_string(WalkKind w);
std::string to_string(Topology t);
std::string to_string(InitialKind k);

}  // namespace qwalk

#endif  // QWALK_CONFIG_HPP
