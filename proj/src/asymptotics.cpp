#include "qwalk/asymptotics.hpp"

#include <algorithm>
#include <cmath>

namespace qwalk {

namespace {

void require_inside(double v, double v0) {
  if (!(v0 > 0.0 && v0 < 1.0))
    throw DomainError("v0 must lie in (0, 1), got " + std::to_string(v0));
  if (!(std::abs(v) < v0))
    throw DomainError("|v| = " + std::to_string(std::abs(v)) +
                      " is outside the light cone v0 = " + std::to_string(v0));
}

double clamp_unit(double c) { return std::clamp(c, -1.0, 1.0); }

}  // namespace

double dispersion_theta(double k, double v0) {
  const double s = std::sin(k);
  return std::acos(clamp_unit(1.0 - 2.0 * v0 * v0 * s * s));
}

double effective_hamiltonian(double k, double v, double v0, int sign) {
  return 2.0 * v * k - (sign > 0 ? 1.0 : -1.0) * dispersion_theta(k, v0);
}

SaddleData saddle(double v, double v0) {
  require_inside(v, v0);
  SaddleData s;
  s.v = v;
  s.v0 = v0;
  const double r = (v / v0) * std::sqrt((1.0 - v0 * v0) / (1.0 - v * v));
  s.k_plus = std::acos(clamp_unit(r));
  s.k_minus = std::acos(clamp_unit(-r));
  const double phase = std::acos(clamp_unit((1.0 + v * v - 2.0 * v0 * v0) / (1.0 - v * v)));
  s.H_plus = 2.0 * v * s.k_plus - phase;
  s.H_minus = 2.0 * v * s.k_minus + phase;
  s.H2abs = (1.0 - v * v) * std::sqrt((v0 * v0 - v * v) / (1.0 - v0 * v0));
  return s;
}

double envelope(double v, double v0, EnvelopeKind kind) {
  require_inside(v, v0);
  const double amp = std::sqrt((1.0 - v0 * v0) / (v0 * v0 - v * v)) / (kPi * (1.0 - v));
  return kind == EnvelopeKind::mean ? 0.5 * amp : amp;
}

double effective_velocity(const WalkParams& p) {
  const double miss = std::remainder(p.alpha + p.beta - kPi, 2.0 * kPi);
  if (std::abs(miss) > 1e-9)
    throw DomainError("asymptotic form requires alpha + beta = pi");
  return std::abs(std::sin(p.alpha));
}

double asymptotic_pdf(Site x, std::int64_t t, const WalkParams& p, int sign,
                      double calibration) {
  if (t < 1) throw DomainError("asymptotic form needs t >= 1");
  const double v0 = effective_velocity(p);
  const double v = static_cast<double>(x) / (2.0 * static_cast<double>(t));
  const SaddleData s = saddle(v, v0);
  const double h = sign > 0 ? s.H_plus : s.H_minus;
  const double c = std::cos(kPi / 4.0 + static_cast<double>(t) * h);
  return calibration * envelope(v, v0, EnvelopeKind::max) * c * c;
}

std::vector<Bin> bin_sites(Site first, Site last, std::int64_t t, double v_min, double v_max,
                           double width, const std::function<double(Site)>& f) {
  if (!(width > 0.0) || !(v_max > v_min)) throw DomainError("invalid binning");
  if (t < 1) throw DomainError("binning needs t >= 1");
  const int n = static_cast<int>(std::llround((v_max - v_min) / width));
  std::vector<Bin> bins(n);
  for (int i = 0; i < n; ++i) {
    bins[i].v_lo = v_min + i * width;
    bins[i].v_hi = v_min + (i + 1) * width;
  }
  const double tt = static_cast<double>(t);
  for (Site x = first; x <= last; ++x) {
    const double v = static_cast<double>(x) / (2.0 * tt);
    const int i = static_cast<int>(std::floor((v - v_min) / width + 1e-12));
    if (i < 0 || i >= n) continue;
    bins[i].value += f(x);
    ++bins[i].sites;
  }
  for (auto& b : bins)
    if (b.sites > 0) b.value /= b.sites;
  return bins;
}

namespace {
std::pair<Site, Site> site_range(std::int64_t t, double v_min, double v_max) {
  const double tt = 2.0 * static_cast<double>(t);
  return {static_cast<Site>(std::floor(v_min * tt)) - 1,
          static_cast<Site>(std::ceil(v_max * tt)) + 1};
}
}  // namespace

std::vector<Bin> bin_rescaled_pdf(const LineState<double>& psi, std::int64_t t, double v_min,
                                  double v_max, double width) {
  const auto [lo, hi] = site_range(t, v_min, v_max);
  const double tt = static_cast<double>(t);
  return bin_sites(lo, hi, t, v_min, v_max, width,
                   [&](Site x) { return tt * std::norm(psi(x)); });
}

std::vector<Bin> bin_envelope(Site first, Site last, std::int64_t t, double v0, double v_min,
                              double v_max, double width, EnvelopeKind kind) {
  const double tt = static_cast<double>(t);
  return bin_sites(first, last, t, v_min, v_max, width, [&](Site x) {
    return envelope(static_cast<double>(x) / (2.0 * tt), v0, kind);
  });
}

double calibrate_envelope(const LineState<double>& psi, std::int64_t t, double v0,
                          double v_max, double width) {
  const auto sim = bin_rescaled_pdf(psi, t, -v_max, v_max, width);
  const auto [lo, hi] = site_range(t, -v_max, v_max);
  const auto env = bin_envelope(lo, hi, t, v0, -v_max, v_max, width);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < sim.size(); ++i) {
    num += sim[i].value * env[i].value;
    den += env[i].value * env[i].value;
  }
  if (!(den > 0.0)) throw DomainError("no sites to calibrate against");
  return num / den;
}

EnvelopeComparison compare_envelope(const LineState<double>& psi, std::int64_t t, double v0,
                                    double calibration, double v_max, double width) {
  EnvelopeComparison c;
  c.calibration = calibration;
  c.simulated = bin_rescaled_pdf(psi, t, -v_max, v_max, width);
  const auto [lo, hi] = site_range(t, -v_max, v_max);
  c.predicted = bin_envelope(lo, hi, t, v0, -v_max, v_max, width);
  for (std::size_t i = 0; i < c.simulated.size(); ++i) {
    c.predicted[i].value *= calibration;
    if (c.simulated[i].sites == 0) continue;
    const double dev = std::abs(c.simulated[i].value / c.predicted[i].value - 1.0);
    c.max_relative_deviation = std::max(c.max_relative_deviation, dev);
  }
  return c;
}

std::pair<double, double> outer_peaks(const LineState<double>& psi, std::int64_t t) {
  double best_l = -1.0, best_r = -1.0;
  Site xl = 0, xr = 0;
  for (Site x = psi.offset(); x < psi.end(); ++x) {
    const double p = std::norm(psi(x));
    if (x < 0 && p > best_l) {
      best_l = p;
      xl = x;
    }
    if (x >= 0 && p > best_r) {
      best_r = p;
      xr = x;
    }
  }
  const double tt = 2.0 * static_cast<double>(t);
  return {static_cast<double>(xl) / tt, static_cast<double>(xr) / tt};
}

}  // namespace qwalk
