#ifndef QWALK_SPECTRAL_LINE_HPP
#define QWALK_SPECTRAL_LINE_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <iosfwd>
#include <vector>

#include "qwalk/evolution.hpp"
#include "qwalk/walk_core.hpp"

namespace qwalk {

template <typename Scalar>
using Matrix4c = Eigen::Matrix<std::complex<Scalar>, 4, 4>;

// Per-momentum block of the 2-site walk: [[A, -B*], [B, A*]].
template <typename Scalar = double>
struct ReducedPropagator2 {
  using Complex = std::complex<Scalar>;
  Scalar k{};
  Complex A, B;
  Scalar theta{};  // in [0, pi]
  Scalar c_plus{}, c_minus{};

  Matrix2c<Scalar> matrix() const {
    Matrix2c<Scalar> m;
    m << A, -std::conj(B), B, std::conj(A);
    return m;
  }

  Scalar c(int sign) const { return sign > 0 ? c_plus : c_minus; }

  // (-B*, e^{+-i theta} - A) / sqrt(C+-). Undefined where C+- = 0.
  Eigen::Matrix<Complex, 2, 1> eigenvector(int sign) const {
    const Complex lam = std::exp(Complex(0, sign > 0 ? theta : -theta));
    Eigen::Matrix<Complex, 2, 1> v(-std::conj(B), lam - A);
    return v / std::sqrt(c(sign));
  }
};

template <typename Scalar>
std::complex<Scalar> reduced_a(Scalar k, const WalkParams& p) {
  using C = std::complex<Scalar>;
  const Scalar a = Scalar(p.alpha), b = Scalar(p.beta);
  return C(-std::cos(a) * std::cos(b)) +
         std::sin(a) * std::sin(b) * std::exp(C(0, Scalar(p.phi1 + p.phi2) + 2 * k));
}

template <typename Scalar>
std::complex<Scalar> reduced_b(Scalar k, const WalkParams& p) {
  using C = std::complex<Scalar>;
  const Scalar a = Scalar(p.alpha), b = Scalar(p.beta);
  return std::sin(a) * std::cos(b) * std::exp(C(0, Scalar(p.phi1) + k)) +
         std::cos(a) * std::sin(b) * std::exp(C(0, -Scalar(p.phi2) - k));
}

template <typename Scalar>
void fill_eigendata(ReducedPropagator2<Scalar>& r) {
  const Scalar re = std::clamp(r.A.real(), Scalar(-1), Scalar(1));
  r.theta = std::acos(re);
  const Scalar s = std::sin(r.theta);
  // i (A - A*) = -2 Im A
  r.c_plus = s * (2 * s - 2 * r.A.imag());
  r.c_minus = s * (2 * s + 2 * r.A.imag());
}

template <typename Scalar = double>
ReducedPropagator2<Scalar> reduced2(Scalar k, const WalkParams& p) {
  ReducedPropagator2<Scalar> r;
  r.k = k;
  r.A = reduced_a(k, p);
  r.B = reduced_b(k, p);
  fill_eigendata(r);
  return r;
}

// Momenta in [-pi, pi] at which C+ or C- vanishes.
std::vector<double> degenerate_k(const WalkParams& p, double tol = 1e-12);

inline constexpr double kDegenerateThreshold = 1e-4;

namespace detail {

// sin(n theta)/sin(theta) by recurrence, valid at theta = 0, pi.
template <typename Scalar>
Scalar chebyshev_u(std::int64_t n_minus_1, Scalar c) {
  if (n_minus_1 < 0) return n_minus_1 == -1 ? Scalar(0) : -chebyshev_u(-n_minus_1 - 2, c);
  Scalar u0(1), u1(2 * c);
  if (n_minus_1 == 0) return u0;
  for (std::int64_t i = 1; i < n_minus_1; ++i) {
    const Scalar u2 = 2 * c * u1 - u0;
    u0 = u1;
    u1 = u2;
  }
  return u1;
}

// Momentum-space amplitudes of U^t |0> on the even and odd sublattices.
template <typename Scalar>
std::pair<std::complex<Scalar>, std::complex<Scalar>> evolved_symbol(
    const ReducedPropagator2<Scalar>& r, std::int64_t t) {
  using C = std::complex<Scalar>;
  const Scalar s = std::sin(r.theta);
  const Scalar smallest = std::min({std::abs(r.c_plus), std::abs(r.c_minus), s});
  if (smallest < Scalar(kDegenerateThreshold)) {
    const Scalar c = r.A.real();
    const Scalar u1 = chebyshev_u(t - 1, c), u2 = chebyshev_u(t - 2, c);
    return {r.A * u1 - u2, r.B * u1};
  }
  const Scalar th = r.theta * Scalar(t);
  const Scalar b2 = std::norm(r.B);
  const C even = b2 * (std::exp(C(0, th)) / r.c_plus + std::exp(C(0, -th)) / r.c_minus);
  const C odd = r.B * (std::sin(th) / s);
  return {even, odd};
}

}  // namespace detail

template <typename Scalar>
void require_quadrature(std::int64_t t, std::int64_t m) {
  if (t < 0) throw DomainError("time must be non-negative");
  if (m < 4 * t + 4)
    throw AccuracyError("quadrature needs at least 4t+4 = " + std::to_string(4 * t + 4) +
                        " points, got " + std::to_string(m));
}

// psi_x(t) from |0> via the momentum integrals, trapezoid rule on m points.
template <typename Scalar = double>
std::complex<Scalar> wavefunction_spectral(Site x, std::int64_t t, const WalkParams& p,
                                           std::int64_t m) {
  using C = std::complex<Scalar>;
  require_quadrature<Scalar>(t, m);
  if (x > 2 * t + 1 || x < -(2 * t + 1)) return C(0);
  const bool even = floor_mod(x, 2) == 0;
  const Scalar pi = std::acos(Scalar(-1));
  C sum(0);
  for (std::int64_t j = 0; j < m; ++j) {
    const Scalar k = -pi + 2 * pi * Scalar(j) / Scalar(m);
    const auto r = reduced2(k, p);
    const auto [ev, od] = detail::evolved_symbol(r, t);
    sum += (even ? ev : od) * std::exp(C(0, -Scalar(x) * k));
  }
  return sum / Scalar(m);
}

// All sites of U^t |0> within the light cone, as a line state.
template <typename Scalar = double>
LineState<Scalar> wavefunction_spectral(std::int64_t t, const WalkParams& p, std::int64_t m) {
  using C = std::complex<Scalar>;
  require_quadrature<Scalar>(t, m);
  const Site lo = -(2 * t + 1), hi = 2 * t + 1;
  AmplitudeVector<Scalar> out = AmplitudeVector<Scalar>::Zero(hi - lo + 1);
  const Scalar pi = std::acos(Scalar(-1));
  for (std::int64_t j = 0; j < m; ++j) {
    const Scalar k = -pi + 2 * pi * Scalar(j) / Scalar(m);
    const auto r = reduced2(k, p);
    const auto [ev, od] = detail::evolved_symbol(r, t);
    const C step = std::exp(C(0, -k));
    C phase = std::exp(C(0, -Scalar(lo) * k));
    for (Site x = lo; x <= hi; ++x) {
      out(x - lo) += (floor_mod(x, 2) == 0 ? ev : od) * phase;
      phase *= step;
    }
  }
  out /= Scalar(m);
  return LineState<Scalar>(lo, std::move(out), t);
}

// True if U_RED(k) has eigenvalue 1 at every sampled k.
template <typename Scalar = double>
bool has_unit_flat_band(const WalkParams& p, int samples = 64, Scalar tol = Scalar(1e-10)) {
  const Scalar pi = std::acos(Scalar(-1));
  for (int j = 0; j < samples; ++j) {
    const Scalar k = -pi + 2 * pi * Scalar(j) / Scalar(samples);
    if (std::abs(reduced2(k, p).theta) > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------- 3-site

// Reduced operator of the 3-site walk in the basis
// |psi~_k^j> = sum_x e^{-(4x+j)ik} |4x+j>, columns are images.
template <typename Scalar = double>
Matrix4c<Scalar> reduced4(Scalar k) {
  using C = std::complex<Scalar>;
  auto e = [k](int c, int n) { return Scalar(c) * std::exp(C(0, Scalar(n) * k)); };
  Matrix4c<Scalar> m;
  m << C(3), e(-6, -1), C(0), e(-6, 1),
       e(4, -3) + e(-2, 1), e(4, -4) + C(1), e(-6, -1), e(-2, -2) + e(-2, 2),
       e(4, -2) + e(4, 2), e(4, -3) + e(-2, 1), C(3), e(-2, -1) + e(4, 3),
       e(-2, -1) + e(4, 3), e(-2, -2) + e(-2, 2), e(-6, 1), C(1) + e(4, 4);
  return m / Scalar(9);
}

template <typename Scalar = double>
Scalar reduced4_cos_theta(Scalar k) {
  return (4 * std::cos(4 * k) - 5) / 9;
}

// Orthogonal projector onto the eigenvalue-1 eigenspace of reduced4(k).
template <typename Scalar = double>
Matrix4c<Scalar> flat_band_projector(Scalar k) {
  const Matrix4c<Scalar> d = reduced4(k) - Matrix4c<Scalar>::Identity();
  Eigen::SelfAdjointEigenSolver<Matrix4c<Scalar>> es(d.adjoint() * d);
  const auto v = es.eigenvectors().leftCols(2);
  return v * v.adjoint();
}

// phi_j(k) = sum_{x = j mod 4} psi_x e^{ixk}
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 4, 1> staggered_components(const LineState<Scalar>& psi,
                                                                Scalar k) {
  using C = std::complex<Scalar>;
  Eigen::Matrix<C, 4, 1> phi = Eigen::Matrix<C, 4, 1>::Zero();
  for (Site x = psi.offset(); x < psi.end(); ++x)
    phi(floor_mod(x, 4)) += psi(x) * std::exp(C(0, Scalar(x) * k));
  return phi;
}

// Probability that stays in the flat band forever.
template <typename Scalar = double>
Scalar localization_weight(const LineState<Scalar>& initial, int m = 1024) {
  if (m <= 0) throw DomainError("quadrature size must be positive");
  detail::require_normalized(norm_squared(initial));
  const Scalar pi = std::acos(Scalar(-1));
  Scalar sum(0);
  for (int j = 0; j < m; ++j) {
    const Scalar k = -pi + 2 * pi * Scalar(j) / Scalar(m);
    sum += (flat_band_projector(k) * staggered_components(initial, k)).squaredNorm();
  }
  return std::clamp(sum / Scalar(m), Scalar(0), Scalar(1));
}

// Flat-band component of the initial state on [lo - reach, hi + reach].
template <typename Scalar = double>
LineState<Scalar> flat_band_state(const LineState<Scalar>& initial, Site reach = 64,
                                  int m = 2048) {
  using C = std::complex<Scalar>;
  const Site lo = initial.offset() - reach, hi = initial.end() + reach;
  if (m < 2 * (hi - lo)) throw AccuracyError("quadrature too coarse for the requested window");
  AmplitudeVector<Scalar> out = AmplitudeVector<Scalar>::Zero(hi - lo);
  const Scalar pi = std::acos(Scalar(-1));
  for (int j = 0; j < m; ++j) {
    const Scalar k = -pi + 2 * pi * Scalar(j) / Scalar(m);
    const Eigen::Matrix<C, 4, 1> f = flat_band_projector(k) * staggered_components(initial, k);
    for (Site x = lo; x < hi; ++x)
      out(x - lo) += std::exp(C(0, -Scalar(x) * k)) * f(floor_mod(x, 4));
  }
  out /= Scalar(m);
  return LineState<Scalar>(lo, std::move(out), initial.time());
}

// k,theta,reA,imA,reB,imB on k_j = -pi + 2 pi j / n
void write_dispersion_csv(std::ostream& os, const WalkParams& p, int n);

}  // namespace qwalk

#endif  // QWALK_SPECTRAL_LINE_HPP
