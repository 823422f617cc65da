#ifndef QWALK_EVOLUTION_HPP
#define QWALK_EVOLUTION_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <type_traits>
#include <utility>

#include "qwalk/tessellation.hpp"
#include "qwalk/walk_core.hpp"

namespace qwalk {

template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

// Coefficients of the one-step update for the 2-site family.
//   psi'_{2x}   = e0 psi_{2x-2} + e1 psi_{2x-1} + e2 psi_{2x} + e3 psi_{2x+1}
//   psi'_{2x+1} = o0 psi_{2x}   + o1 psi_{2x+1} + o2 psi_{2x+2} + o3 psi_{2x+3}
template <typename Scalar>
struct TwoSiteStencil {
  std::complex<Scalar> e[4];
  std::complex<Scalar> o[4];

  explicit TwoSiteStencil(const WalkParams& p) {
    using C = std::complex<Scalar>;
    const Scalar ca = std::cos(Scalar(p.alpha)), sa = std::sin(Scalar(p.alpha));
    const Scalar cb = std::cos(Scalar(p.beta)), sb = std::sin(Scalar(p.beta));
    const C e1 = std::exp(C(0, Scalar(p.phi1)));
    const C e2 = std::exp(C(0, Scalar(p.phi2)));
    e[0] = sa * sb * e1 * e2;
    e[1] = -ca * sb * e2;
    e[2] = C(-ca * cb);
    e[3] = -sa * cb * std::conj(e1);
    o[0] = sa * cb * e1;
    o[1] = C(-ca * cb);
    o[2] = ca * sb * std::conj(e2);
    o[3] = sa * sb * std::conj(e1 * e2);
  }
};

template <typename Scalar>
LineState<Scalar> step_coinless2(const LineState<Scalar>& psi,
                                 const TwoSiteStencil<Scalar>& s) {
  const Site lo = psi.offset() - 2, hi = psi.end() + 2;
  AmplitudeVector<Scalar> out(hi - lo);
  for (Site y = lo; y < hi; ++y) {
    std::complex<Scalar> v;
    if (floor_mod(y, 2) == 0)
      v = s.e[0] * psi(y - 2) + s.e[1] * psi(y - 1) + s.e[2] * psi(y) + s.e[3] * psi(y + 1);
    else
      v = s.o[0] * psi(y - 1) + s.o[1] * psi(y) + s.o[2] * psi(y + 1) + s.o[3] * psi(y + 2);
    out(y - lo) = v;
  }
  return LineState<Scalar>(lo, std::move(out), psi.time() + 1);
}

template <typename Scalar>
CycleState<Scalar> step_coinless2(const CycleState<Scalar>& psi,
                                  const TwoSiteStencil<Scalar>& s) {
  const Site n = psi.n_sites();
  const auto& a = psi.amplitudes();
  auto at = [&](Site x) { return a(floor_mod(x, n)); };
  AmplitudeVector<Scalar> out(n);
  for (Site y = 0; y < n; y += 2) {
    out(y) = s.e[0] * at(y - 2) + s.e[1] * at(y - 1) + s.e[2] * a(y) + s.e[3] * a(y + 1);
    out(y + 1) = s.o[0] * a(y) + s.o[1] * a(y + 1) + s.o[2] * at(y + 2) + s.o[3] * at(y + 3);
  }
  return CycleState<Scalar>(std::move(out), psi.time() + 1);
}

template <typename State>
State step_coinless2(const State& psi, const WalkParams& p) {
  using Scalar = typename State::Complex::value_type;
  return step_coinless2(psi, TwoSiteStencil<Scalar>(p));
}

// Apply step(psi) repeatedly.
template <typename State, typename Step>
State evolve(State psi, std::int64_t steps, Step&& step) {
  for (std::int64_t i = 0; i < steps; ++i) psi = step(psi);
  return psi;
}

template <typename State>
State evolve_coinless2(const State& psi, const WalkParams& p, std::int64_t steps) {
  using Scalar = typename State::Complex::value_type;
  const TwoSiteStencil<Scalar> s(p);
  return evolve(psi, steps, [&](const State& x) { return step_coinless2(x, s); });
}

// One step U1 U0 built from two reflection operators.
template <typename Scalar>
class StaggeredWalk {
 public:
  StaggeredWalk(ReflectionOperator<Scalar> u0, ReflectionOperator<Scalar> u1)
      : u0_(std::move(u0)), u1_(std::move(u1)) {}

  explicit StaggeredWalk(
      const std::pair<Tessellation<Scalar>, Tessellation<Scalar>>& tess)
      : u0_(tess.first), u1_(tess.second) {}

  template <typename State>
  State step(const State& psi) const {
    auto half = u1_.apply(u0_.apply(psi));
    if constexpr (std::is_same_v<State, LineState<Scalar>>)
      return LineState<Scalar>(half.offset(), half.amplitudes(), psi.time() + 1);
    else
      return CycleState<Scalar>(half.amplitudes(), psi.time() + 1);
  }

  const ReflectionOperator<Scalar>& first() const { return u0_; }
  const ReflectionOperator<Scalar>& second() const { return u1_; }

  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> matrix(Site n_sites) const {
    return u1_.matrix(n_sites) * u0_.matrix(n_sites);
  }

 private:
  ReflectionOperator<Scalar> u0_;
  ReflectionOperator<Scalar> u1_;
};

template <typename Scalar>
StaggeredWalk<Scalar> two_site_walk(const WalkParams& p) {
  return StaggeredWalk<Scalar>(two_site_tessellations<Scalar>(p));
}

template <typename Scalar>
StaggeredWalk<Scalar> three_site_walk() {
  return StaggeredWalk<Scalar>(three_site_tessellations<Scalar>());
}

template <typename State>
State step_coinless3(const State& psi) {
  using Scalar = typename State::Complex::value_type;
  static const StaggeredWalk<Scalar> walk = three_site_walk<Scalar>();
  return walk.step(psi);
}

// ---------------------------------------------------------------- coined

struct CoinParams {
  double rho = 0.0;
  double theta = 0.0;
  double varphi = 0.0;
  bool operator==(const CoinParams&) const = default;
};

template <typename Scalar = double>
Matrix2c<Scalar> coin_matrix(const CoinParams& c) {
  using C = std::complex<Scalar>;
  const Scalar cr = std::cos(Scalar(c.rho)), sr = std::sin(Scalar(c.rho));
  const C et = std::exp(C(0, Scalar(c.theta))), ep = std::exp(C(0, Scalar(c.varphi)));
  Matrix2c<Scalar> m;
  m << C(cr), sr * et, sr * ep, -cr * et * ep;
  return m;
}

template <typename Scalar = double>
Matrix2c<Scalar> projector_p() {
  Matrix2c<Scalar> m = Matrix2c<Scalar>::Zero();
  m(0, 0) = 1;
  return m;
}

template <typename Scalar = double>
Matrix2c<Scalar> projector_q() {
  Matrix2c<Scalar> m = Matrix2c<Scalar>::Zero();
  m(1, 1) = 1;
  return m;
}

// Two-component amplitudes psi_x = (upper_x, lower_x) on a window of nodes.
template <typename Scalar = double>
class CoinedLineState {
 public:
  using Amplitudes = AmplitudeVector<Scalar>;
  using Complex = std::complex<Scalar>;

  CoinedLineState(Site offset, Amplitudes upper, Amplitudes lower, std::int64_t time = 0)
      : offset_(offset), upper_(std::move(upper)), lower_(std::move(lower)), time_(time) {
    if (upper_.size() != lower_.size() || upper_.size() == 0)
      throw ShapeError("coined components must be non-empty and of equal length");
    if (time_ < 0) throw DomainError("time must be non-negative");
  }

  Site offset() const { return offset_; }
  Site end() const { return offset_ + static_cast<Site>(upper_.size()); }
  Eigen::Index size() const { return upper_.size(); }
  std::int64_t time() const { return time_; }
  const Amplitudes& upper() const { return upper_; }
  const Amplitudes& lower() const { return lower_; }

  Eigen::Matrix<Complex, 2, 1> operator()(Site x) const {
    Eigen::Matrix<Complex, 2, 1> v = Eigen::Matrix<Complex, 2, 1>::Zero();
    if (x >= offset_ && x < end()) {
      v(0) = upper_(x - offset_);
      v(1) = lower_(x - offset_);
    }
    return v;
  }

 private:
  Site offset_;
  Amplitudes upper_, lower_;
  std::int64_t time_;
};

template <typename Scalar = double>
class CoinedCycleState {
 public:
  using Amplitudes = AmplitudeVector<Scalar>;
  using Complex = std::complex<Scalar>;

  CoinedCycleState(Amplitudes upper, Amplitudes lower, std::int64_t time = 0)
      : upper_(std::move(upper)), lower_(std::move(lower)), time_(time) {
    if (upper_.size() != lower_.size() || upper_.size() == 0)
      throw ShapeError("coined components must be non-empty and of equal length");
    if (time_ < 0) throw DomainError("time must be non-negative");
  }

  Site n_sites() const { return upper_.size(); }
  std::int64_t time() const { return time_; }
  const Amplitudes& upper() const { return upper_; }
  const Amplitudes& lower() const { return lower_; }

  Eigen::Matrix<Complex, 2, 1> operator()(Site x) const {
    const Site i = floor_mod(x, n_sites());
    return {upper_(i), lower_(i)};
  }

 private:
  Amplitudes upper_, lower_;
  std::int64_t time_;
};

template <typename Scalar>
Scalar norm_squared(const CoinedLineState<Scalar>& s) {
  return s.upper().squaredNorm() + s.lower().squaredNorm();
}

template <typename Scalar>
Scalar norm_squared(const CoinedCycleState<Scalar>& s) {
  return s.upper().squaredNorm() + s.lower().squaredNorm();
}

// Site probabilities |upper_x|^2 + |lower_x|^2.
template <typename Scalar>
ProbabilityVector<Scalar> pdf(const CoinedLineState<Scalar>& s) {
  detail::require_normalized(norm_squared(s));
  return s.upper().cwiseAbs2() + s.lower().cwiseAbs2();
}

template <typename Scalar>
ProbabilityVector<Scalar> pdf(const CoinedCycleState<Scalar>& s) {
  detail::require_normalized(norm_squared(s));
  return s.upper().cwiseAbs2() + s.lower().cwiseAbs2();
}

// Upper component at the origin.
template <typename Scalar = double>
CoinedLineState<Scalar> coined_origin_state() {
  AmplitudeVector<Scalar> u(1), l(1);
  u(0) = 1;
  l(0) = 0;
  return CoinedLineState<Scalar>(0, u, l);
}

// psi'_n = from_left psi_{n-1} + on_site psi_n + from_right psi_{n+1}
template <typename Scalar = double>
struct BlockHop {
  Matrix2c<Scalar> from_left;
  Matrix2c<Scalar> on_site;
  Matrix2c<Scalar> from_right;
};

template <typename Scalar>
CoinedLineState<Scalar> step_hop(const CoinedLineState<Scalar>& psi,
                                 const BlockHop<Scalar>& h) {
  const Site lo = psi.offset() - 1, hi = psi.end() + 1;
  AmplitudeVector<Scalar> u(hi - lo), l(hi - lo);
  for (Site x = lo; x < hi; ++x) {
    const Eigen::Matrix<std::complex<Scalar>, 2, 1> v =
        h.from_left * psi(x - 1) + h.on_site * psi(x) + h.from_right * psi(x + 1);
    u(x - lo) = v(0);
    l(x - lo) = v(1);
  }
  return CoinedLineState<Scalar>(lo, std::move(u), std::move(l), psi.time() + 1);
}

template <typename Scalar>
CoinedCycleState<Scalar> step_hop(const CoinedCycleState<Scalar>& psi,
                                  const BlockHop<Scalar>& h) {
  const Site n = psi.n_sites();
  AmplitudeVector<Scalar> u(n), l(n);
  for (Site x = 0; x < n; ++x) {
    const Eigen::Matrix<std::complex<Scalar>, 2, 1> v =
        h.from_left * psi(x - 1) + h.on_site * psi(x) + h.from_right * psi(x + 1);
    u(x) = v(0);
    l(x) = v(1);
  }
  return CoinedCycleState<Scalar>(std::move(u), std::move(l), psi.time() + 1);
}

// A = P C from the left neighbour, B = Q C from the right neighbour.
template <typename Scalar = double>
BlockHop<Scalar> coined_hop(const CoinParams& c) {
  const Matrix2c<Scalar> coin = coin_matrix<Scalar>(c);
  return {projector_p<Scalar>() * coin, Matrix2c<Scalar>::Zero(),
          projector_q<Scalar>() * coin};
}

template <typename State>
State step_coined(const State& psi, const CoinParams& c) {
  using Scalar = typename State::Complex::value_type;
  return step_hop(psi, coined_hop<Scalar>(c));
}

//   upper'_x = cos r upper_{x+1} - sin r lower_{x+1}
//   lower'_x = sin r upper_{x-1} + cos r lower_{x-1}
template <typename Scalar = double>
BlockHop<Scalar> rotation_hop(double rho) {
  const Scalar c = std::cos(Scalar(rho)), s = std::sin(Scalar(rho));
  BlockHop<Scalar> h{Matrix2c<Scalar>::Zero(), Matrix2c<Scalar>::Zero(),
                     Matrix2c<Scalar>::Zero()};
  h.from_left(1, 0) = s;
  h.from_left(1, 1) = c;
  h.from_right(0, 0) = c;
  h.from_right(0, 1) = -s;
  return h;
}

template <typename State>
State step_coined_rotation(const State& psi, double rho) {
  using Scalar = typename State::Complex::value_type;
  return step_hop(psi, rotation_hop<Scalar>(rho));
}

template <typename Scalar = double>
struct CoinlessCoinedMap {
  BlockHop<Scalar> hop;
  CoinParams coin;
  double phase = 0.0;  // per-step global phase between the two walks
  bool exact = false;  // on-site term vanishes
};

inline constexpr double kExactMappingTolerance = 1e-12;

template <typename Scalar = double>
CoinlessCoinedMap<Scalar> coinless_to_coined(const WalkParams& p) {
  using C = std::complex<Scalar>;
  CoinlessCoinedMap<Scalar> m;
  m.coin = {kPi / 2 - p.alpha, kPi - p.phi1, -(p.phi1 + 2 * p.phi2)};
  m.phase = p.phi1 + p.phi2;
  const Matrix2c<Scalar> coin = coin_matrix<Scalar>(m.coin);
  const C g = std::exp(C(0, Scalar(m.phase)));
  const C e2 = std::exp(C(0, Scalar(p.phi2)));
  Matrix2c<Scalar> r;
  r << C(0), -e2, std::conj(e2), C(0);
  const Scalar sb = std::sin(Scalar(p.beta)), cb = std::cos(Scalar(p.beta));
  m.hop.from_left = sb * g * projector_p<Scalar>() * coin;
  m.hop.from_right = sb * g * projector_q<Scalar>() * coin;
  m.hop.on_site = cb * g * r * coin;
  m.exact = std::abs(std::cos(p.beta)) <= kExactMappingTolerance;
  return m;
}

// Sites (2n, 2n+1) become node n with (upper, lower).
template <typename Scalar>
CoinedLineState<Scalar> pair_sites(const LineState<Scalar>& psi) {
  if (floor_mod(psi.offset(), 2) != 0 || psi.size() % 2 != 0)
    throw ShapeError("line window is not aligned to (2x, 2x+1) pairs");
  const Eigen::Index n = psi.size() / 2;
  const auto& a = psi.amplitudes();
  AmplitudeVector<Scalar> u = Eigen::Map<const AmplitudeVector<Scalar>, 0, Eigen::InnerStride<2>>(a.data(), n);
  AmplitudeVector<Scalar> l = Eigen::Map<const AmplitudeVector<Scalar>, 0, Eigen::InnerStride<2>>(a.data() + 1, n);
  return CoinedLineState<Scalar>(psi.offset() / 2, std::move(u), std::move(l), psi.time());
}

template <typename Scalar>
CoinedCycleState<Scalar> pair_sites(const CycleState<Scalar>& psi) {
  const Eigen::Index n = psi.n_sites() / 2;
  const auto& a = psi.amplitudes();
  AmplitudeVector<Scalar> u = Eigen::Map<const AmplitudeVector<Scalar>, 0, Eigen::InnerStride<2>>(a.data(), n);
  AmplitudeVector<Scalar> l = Eigen::Map<const AmplitudeVector<Scalar>, 0, Eigen::InnerStride<2>>(a.data() + 1, n);
  return CoinedCycleState<Scalar>(std::move(u), std::move(l), psi.time());
}

template <typename Scalar>
LineState<Scalar> unpair_sites(const CoinedLineState<Scalar>& s) {
  AmplitudeVector<Scalar> a(2 * s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    a(2 * i) = s.upper()(i);
    a(2 * i + 1) = s.lower()(i);
  }
  return LineState<Scalar>(2 * s.offset(), std::move(a), s.time());
}

template <typename Scalar>
CycleState<Scalar> unpair_sites(const CoinedCycleState<Scalar>& s) {
  AmplitudeVector<Scalar> a(2 * s.n_sites());
  for (Eigen::Index i = 0; i < s.n_sites(); ++i) {
    a(2 * i) = s.upper()(i);
    a(2 * i + 1) = s.lower()(i);
  }
  return CycleState<Scalar>(std::move(a), s.time());
}

// Pad a line window outward to even alignment.
template <typename Scalar>
LineState<Scalar> pair_aligned(const LineState<Scalar>& psi) {
  const Site lo = psi.offset() - floor_mod(psi.offset(), 2);
  const Site hi = psi.end() + floor_mod(psi.end(), 2);
  return psi.windowed(lo, hi);
}

template <typename State>
State step_blockvec(const State& psi,
                    const BlockHop<typename State::Complex::value_type>& h) {
  return unpair_sites(step_hop(pair_sites(psi), h));
}

template <typename Scalar>
GeneralizedHop<Scalar> to_generalized(const BlockHop<Scalar>& h) {
  GeneralizedHop<Scalar> g;
  g.stay = h.on_site;
  g.hops = {h.from_left, h.from_right};
  g.pairing = {1, 0};
  return g;
}

}  // namespace qwalk

#endif  // QWALK_EVOLUTION_HPP
