#ifndef QWALK_ASYMPTOTICS_HPP
#define QWALK_ASYMPTOTICS_HPP

#include <functional>
#include <vector>

#include "qwalk/walk_core.hpp"

namespace qwalk {

// Stationary points of H+-(k) = 2vk -+ theta(k) for the alpha + beta = pi
// family, theta(k) = acos(1 - 2 v0^2 sin^2 k).
struct SaddleData {
  double v = 0.0;
  double v0 = 0.0;
  double k_plus = 0.0;
  double k_minus = 0.0;
  double H_plus = 0.0;
  double H_minus = 0.0;
  double H2abs = 0.0;  // |H''(k+-)| / 2, the quadratic Taylor coefficient
};

SaddleData saddle(double v, double v0);

double dispersion_theta(double k, double v0);
double effective_hamiltonian(double k, double v, double v0, int sign);

enum class EnvelopeKind { mean, max };

// Rescaled density t p_x at v = x/(2t), with cos^2 averaged (mean) or
// replaced by 1 (max). (p_2x + p_2x+1)/2 convention.
double envelope(double v, double v0, EnvelopeKind kind = EnvelopeKind::mean);

// v0 = |sin alpha|; requires alpha + beta = pi (mod 2pi).
double effective_velocity(const WalkParams& p);

// Oscillatory rescaled density t p_x from the saddle-point form.
double asymptotic_pdf(Site x, std::int64_t t, const WalkParams& p, int sign = +1,
                      double calibration = 1.0);

struct Bin {
  double v_lo = 0.0;
  double v_hi = 0.0;
  int sites = 0;
  double value = 0.0;  // mean of f over sites in the bin
  double center() const { return 0.5 * (v_lo + v_hi); }
};

// Mean of f(x) over sites x in [first, last] with v = x/(2t) falling in each
// bin [v_min + i w, v_min + (i+1) w).
std::vector<Bin> bin_sites(Site first, Site last, std::int64_t t, double v_min, double v_max,
                           double width, const std::function<double(Site)>& f);

// t p_x of a line state, binned.
std::vector<Bin> bin_rescaled_pdf(const LineState<double>& psi, std::int64_t t, double v_min,
                                  double v_max, double width);

// Mean envelope over the same sites as bin_rescaled_pdf.
std::vector<Bin> bin_envelope(Site first, Site last, std::int64_t t, double v0, double v_min,
                              double v_max, double width,
                              EnvelopeKind kind = EnvelopeKind::mean);

// Least-squares constant c with sim ~ c env over |v| <= v_max.
double calibrate_envelope(const LineState<double>& psi, std::int64_t t, double v0,
                          double v_max = 0.6, double width = 0.1);

struct EnvelopeComparison {
  double calibration = 1.0;
  double max_relative_deviation = 0.0;
  std::vector<Bin> simulated;
  std::vector<Bin> predicted;
};

EnvelopeComparison compare_envelope(const LineState<double>& psi, std::int64_t t, double v0,
                                    double calibration, double v_max = 0.6,
                                    double width = 0.1);

// Sites of the largest rescaled probability for x < 0 and x >= 0, as v.
std::pair<double, double> outer_peaks(const LineState<double>& psi, std::int64_t t);

}  // namespace qwalk

#endif  // QWALK_ASYMPTOTICS_HPP
