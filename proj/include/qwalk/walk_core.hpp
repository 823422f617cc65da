#ifndef QWALK_WALK_CORE_HPP
#define QWALK_WALK_CORE_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <utility>

#include "qwalk/errors.hpp"

namespace qwalk {

using Site = std::int64_t;

template <typename Scalar>
using AmplitudeVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using ProbabilityVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

inline constexpr double kPi = std::numbers::pi;

// Tolerance above which pdf() refuses a state as unnormalized.
inline constexpr double kNormalizationGuard = 1e-6;

// Wrap an angle into [0, 2pi).
inline double wrap_angle(double angle) {
  double wrapped = std::fmod(angle, 2.0 * kPi);
  if (wrapped < 0.0) wrapped += 2.0 * kPi;
  return wrapped;
}

// Floor-mod for site indices (result in [0, n)).
inline Site floor_mod(Site value, Site n) {
  const Site r = value % n;
  return r < 0 ? r + n : r;
}

// Angles of the two-site block family. The dynamics are 2pi-periodic in
// each angle; canonical() is for reporting only.
struct WalkParams {
  double alpha = 0.0;
  double beta = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;

  WalkParams canonical() const {
    return {wrap_angle(alpha), wrap_angle(beta), wrap_angle(phi1),
            wrap_angle(phi2)};
  }
  bool finite() const {
    return std::isfinite(alpha) && std::isfinite(beta) &&
           std::isfinite(phi1) && std::isfinite(phi2);
  }
  bool operator==(const WalkParams&) const = default;
};

enum class InitialKind { delta_origin, symmetric };

// Inclusive range of sites.
struct SiteRange {
  Site first = 0;
  Site last = 0;
  Site width() const { return last - first + 1; }
};

// Amplitudes on the infinite line, stored as a dense window
// [offset, offset + size). Everything outside the window is zero.
template <typename Scalar = double>
class LineState {
 public:
  using Amplitudes = AmplitudeVector<Scalar>;
  using Complex = std::complex<Scalar>;

  LineState() : amps_(Amplitudes::Zero(1)) { amps_(0) = Complex(1); }

  LineState(Site offset, Amplitudes amps, std::int64_t time = 0)
      : offset_(offset), amps_(std::move(amps)), time_(time) {
    if (amps_.size() == 0) throw ShapeError("line state window is empty");
    if (time_ < 0) throw DomainError("time must be non-negative");
  }

  Site offset() const { return offset_; }
  // One past the last stored site.
  Site end() const { return offset_ + static_cast<Site>(amps_.size()); }
  Eigen::Index size() const { return amps_.size(); }
  std::int64_t time() const { return time_; }
  const Amplitudes& amplitudes() const { return amps_; }

  bool stores(Site x) const { return x >= offset_ && x < end(); }

  Complex operator()(Site x) const {
    return stores(x) ? amps_(static_cast<Eigen::Index>(x - offset_))
                     : Complex(0);
  }

  // Drop leading and trailing amplitudes with modulus <= threshold.
  LineState trimmed(Scalar threshold = Scalar(0)) const {
    Eigen::Index lo = 0;
    Eigen::Index hi = amps_.size() - 1;
    while (lo < hi && std::abs(amps_(lo)) <= threshold) ++lo;
    while (hi > lo && std::abs(amps_(hi)) <= threshold) --hi;
    return LineState(offset_ + lo, amps_.segment(lo, hi - lo + 1), time_);
  }

  // Same amplitudes re-windowed onto [first, last_exclusive).
  LineState windowed(Site first, Site last_exclusive) const {
    if (last_exclusive <= first) throw ShapeError("empty window");
    Amplitudes out(last_exclusive - first);
    for (Site x = first; x < last_exclusive; ++x) out(x - first) = (*this)(x);
    return LineState(first, std::move(out), time_);
  }

 private:
  Site offset_ = 0;
  Amplitudes amps_;
  std::int64_t time_ = 0;
};

// Amplitudes on an even-length cycle; site indices wrap mod N.
template <typename Scalar = double>
class CycleState {
 public:
  using Amplitudes = AmplitudeVector<Scalar>;
  using Complex = std::complex<Scalar>;

  CycleState(Amplitudes amps, std::int64_t time = 0)
      : amps_(std::move(amps)), time_(time) {
    if (amps_.size() <= 0 || amps_.size() % 2 != 0)
      throw TopologyError("cycle needs an even, positive number of sites (got " +
                          std::to_string(amps_.size()) + ")");
    if (time_ < 0) throw DomainError("time must be non-negative");
  }

  Site n_sites() const { return static_cast<Site>(amps_.size()); }
  std::int64_t time() const { return time_; }
  const Amplitudes& amplitudes() const { return amps_; }

  Complex operator()(Site x) const {
    return amps_(static_cast<Eigen::Index>(floor_mod(x, n_sites())));
  }

 private:
  Amplitudes amps_;
  std::int64_t time_ = 0;
};

template <typename Scalar>
Scalar norm_squared(const LineState<Scalar>& state) {
  return state.amplitudes().squaredNorm();
}

template <typename Scalar>
Scalar norm_squared(const CycleState<Scalar>& state) {
  return state.amplitudes().squaredNorm();
}

template <typename Scalar>
bool all_finite(const AmplitudeVector<Scalar>& amps) {
  return amps.real().allFinite() && amps.imag().allFinite();
}

namespace detail {
template <typename Scalar>
void require_normalized(Scalar norm2) {
  using std::abs;
  if (!(abs(norm2 - Scalar(1)) <= Scalar(kNormalizationGuard)))
    throw NormalizationError("state norm^2 = " +
                             std::to_string(static_cast<double>(norm2)) +
                             " deviates from 1");
}
}  // namespace detail

// Site probabilities |psi_x|^2 over the stored window.
template <typename Scalar>
ProbabilityVector<Scalar> pdf(const LineState<Scalar>& state) {
  detail::require_normalized(norm_squared(state));
  return state.amplitudes().cwiseAbs2();
}

template <typename Scalar>
ProbabilityVector<Scalar> pdf(const CycleState<Scalar>& state) {
  detail::require_normalized(norm_squared(state));
  return state.amplitudes().cwiseAbs2();
}

template <typename Scalar>
LineState<Scalar> normalized(const LineState<Scalar>& state) {
  const Scalar n = std::sqrt(norm_squared(state));
  if (!(n > Scalar(0))) throw NormalizationError("cannot normalize a zero state");
  return LineState<Scalar>(state.offset(), state.amplitudes() / n, state.time());
}

template <typename Scalar>
CycleState<Scalar> normalized(const CycleState<Scalar>& state) {
  const Scalar n = std::sqrt(norm_squared(state));
  if (!(n > Scalar(0))) throw NormalizationError("cannot normalize a zero state");
  return CycleState<Scalar>(state.amplitudes() / n, state.time());
}

// delta_origin = |0>; symmetric = (|0> + i|1>)/sqrt(2).
template <typename Scalar = double>
LineState<Scalar> initial_line_state(InitialKind kind = InitialKind::delta_origin) {
  using C = std::complex<Scalar>;
  if (kind == InitialKind::delta_origin) {
    AmplitudeVector<Scalar> amps(1);
    amps(0) = C(1);
    return LineState<Scalar>(0, std::move(amps));
  }
  const Scalar h = Scalar(1) / std::sqrt(Scalar(2));
  AmplitudeVector<Scalar> amps(2);
  amps(0) = C(h, 0);
  amps(1) = C(0, h);
  return LineState<Scalar>(0, std::move(amps));
}

template <typename Scalar = double>
CycleState<Scalar> initial_cycle_state(InitialKind kind, Site n_sites) {
  if (n_sites <= 0 || n_sites % 2 != 0)
    throw TopologyError("cycle needs an even, positive number of sites");
  AmplitudeVector<Scalar> amps = AmplitudeVector<Scalar>::Zero(n_sites);
  const auto line = initial_line_state<Scalar>(kind);
  for (Site x = line.offset(); x < line.end(); ++x)
    amps(floor_mod(x, n_sites)) += line(x);
  return CycleState<Scalar>(std::move(amps));
}

// First and last site with |psi_x| > threshold, if any.
template <typename Scalar>
std::optional<SiteRange> support(const LineState<Scalar>& state,
                                 Scalar threshold = Scalar(0)) {
  std::optional<SiteRange> range;
  const auto& a = state.amplitudes();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(a(i)) > threshold) {
      const Site x = state.offset() + i;
      if (!range) range = SiteRange{x, x};
      range->last = x;
    }
  }
  return range;
}

// max_x |a_x - b_x| over the union of both windows.
template <typename Scalar>
Scalar max_abs_difference(const LineState<Scalar>& a,
                          const LineState<Scalar>& b) {
  const Site lo = std::min(a.offset(), b.offset());
  const Site hi = std::max(a.end(), b.end());
  Scalar worst(0);
  for (Site x = lo; x < hi; ++x) worst = std::max(worst, std::abs(a(x) - b(x)));
  return worst;
}

template <typename Scalar>
Scalar max_abs_difference(const CycleState<Scalar>& a,
                          const CycleState<Scalar>& b) {
  if (a.n_sites() != b.n_sites()) throw ShapeError("cycle sizes differ");
  return (a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff();
}

}  // namespace qwalk

#endif  // QWALK_WALK_CORE_HPP
