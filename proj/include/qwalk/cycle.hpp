#ifndef QWALK_CYCLE_HPP
#define QWALK_CYCLE_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qwalk/walk_core.hpp"

namespace qwalk {

using MatrixXcd = Eigen::MatrixXcd;

// One momentum block k of the 2-site walk on an N-cycle.
struct CycleMode {
  Site k = 0;
  std::complex<double> A, B;
  double theta = 0.0;
  double c_plus = 0.0, c_minus = 0.0;
  bool closed_form = true;  // false: eigenvectors from a direct 2x2 solve
  Eigen::Vector2cd w_plus, w_minus;  // unit sublattice weights
  double lambda_plus = 0.0, lambda_minus = 0.0;
};

// Eigensystem of U on an even cycle. Eigenvector j < N/2 is the + branch of
// mode j, j >= N/2 the - branch of mode j - N/2.
class CycleSpectrum {
 public:
  CycleSpectrum(Site n_sites, const WalkParams& p);

  Site n_sites() const { return n_; }
  const WalkParams& params() const { return params_; }
  const std::vector<CycleMode>& modes() const { return modes_; }
  bool closed_form() const;  // every mode used the closed-form eigenvectors

  double phase(Site j) const;                        // lambda_j
  std::complex<double> component(Site j, Site x) const;  // <x|v_j>
  std::complex<double> overlap(Site j) const { return component(j, 0); }  // c_j

  Eigen::VectorXd phases() const;
  Eigen::VectorXcd overlaps() const;
  MatrixXcd eigenvectors() const;  // columns, dense N x N
  MatrixXcd reconstruct() const;   // sum e^{i lambda} |v><v|

  // Index groups with equal eigenphase (mod 2pi, within tol).
  std::vector<std::vector<Site>> degenerate_groups(double tol = 1e-9) const;

 private:
  Site n_;
  WalkParams params_;
  std::vector<CycleMode> modes_;
};

// Threshold on C+- and sin(theta) below which a mode is solved directly.
inline constexpr double kCycleDegenerateThreshold = 1e-6;

// U on the cycle as a dense matrix built from the two reflections.
MatrixXcd dense_propagator(Site n_sites, const WalkParams& p);

// pi_x from the eigenphase groups.
Eigen::VectorXd limiting_pdf(const CycleSpectrum& s, double tol = 1e-9);
Eigen::VectorXd limiting_pdf(Site n_sites, const WalkParams& p);

// The explicit even/odd sums; throws DomainError at degenerate modes.
Eigen::VectorXd limiting_pdf_closed_form(Site n_sites, const WalkParams& p);

// (1/T) sum_{t<T} p(t) from |0> by direct evolution.
Eigen::VectorXd time_averaged_pdf(Site n_sites, const WalkParams& p, std::int64_t T);

// Same quantity from the double eigen-sum; O(N^3).
Eigen::VectorXd time_averaged_pdf_spectral(const CycleSpectrum& s, std::int64_t T);

// D(t) from the double eigen-sum over unequal phases; O(N^3) per t.
double tvd(const CycleSpectrum& s, std::int64_t t, double tol = 1e-9);

// D(t) = (1/2) sum_x |pbar_x(t) - pi_x| for t = 1..horizon, direct evolution.
std::vector<double> tvd_series(Site n_sites, const WalkParams& p, std::int64_t horizon,
                               const Eigen::VectorXd& pi);

struct MixingReport {
  Site n_sites = 0;
  WalkParams params;
  Eigen::VectorXd pi;
  std::vector<std::pair<std::int64_t, double>> tvd_samples;
  std::int64_t tau = 0;
  double epsilon = 0.0;
  std::int64_t horizon = 0;
  std::int64_t stride = 1;
};

std::int64_t default_horizon(Site n_sites, double epsilon);

// Last sampled t with D(t) > eps, plus one.
std::int64_t mixing_time_from_series(const std::vector<double>& series, double epsilon);

MixingReport mixing_time(Site n_sites, const WalkParams& p, double epsilon,
                         std::optional<std::int64_t> horizon = std::nullopt);

struct TermF {
  double term1 = 0.0;
  double term2 = 0.0;
  double term3 = 0.0;
  double sum() const { return term1 + term2 + term3; }
};

// Three-term simplification of sum_x |sum_{k,k'} f_{k,k',x}|.
TermF termf_decomposition(Site n_sites, const WalkParams& p);

// Both pieces of the TVD upper bound: sum_x |sum f| and sum_x |sum f e^{i Delta t}|.
std::pair<double, double> tvd_bound_terms(const CycleSpectrum& s, std::int64_t t,
                                          double tol = 1e-9);

}  // namespace qwalk

#endif  // QWALK_CYCLE_HPP
