#ifndef QWALK_TESSELLATION_HPP
#define QWALK_TESSELLATION_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <iosfwd>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qwalk/walk_core.hpp"

namespace qwalk {

template <typename Scalar = double>
struct Block {
  std::vector<Site> sites;
  std::vector<std::complex<Scalar>> coeffs;

  Site min_site() const { return *std::min_element(sites.begin(), sites.end()); }
  Site max_site() const { return *std::max_element(sites.begin(), sites.end()); }
  Scalar norm_squared() const {
    Scalar s(0);
    for (const auto& c : coeffs) s += std::norm(c);
    return s;
  }
};

// One period of blocks; the full tessellation is the pattern translated by
// every multiple of period.
template <typename Scalar = double>
class Tessellation {
 public:
  Tessellation(std::vector<Block<Scalar>> pattern, Site period)
      : pattern_(std::move(pattern)), period_(period) {
    if (period_ <= 0) throw ConstructionError("period must be positive");
    if (pattern_.empty()) throw ConstructionError("tessellation has no blocks");
    for (const auto& b : pattern_) {
      if (b.sites.empty()) throw ConstructionError("empty block");
      if (b.sites.size() != b.coeffs.size())
        throw ConstructionError("block sites and coefficients differ in length");
      std::set<Site> distinct(b.sites.begin(), b.sites.end());
      if (distinct.size() != b.sites.size())
        throw ConstructionError("block repeats a site");
    }
  }

  const std::vector<Block<Scalar>>& pattern() const { return pattern_; }
  Site period() const { return period_; }

  // Block b of the pattern shifted by n periods.
  Block<Scalar> translate(std::size_t b, Site n) const {
    Block<Scalar> out = pattern_[b];
    for (auto& s : out.sites) s += n * period_;
    return out;
  }

 private:
  std::vector<Block<Scalar>> pattern_;
  Site period_;
};

struct TessellationDiagnostics {
  bool unit_norms = true;
  double max_norm_error = 0.0;
  bool disjoint = true;
  Site period = 1;
  std::vector<Site> covered;  // residues mod period
  std::vector<Site> gaps;     // residues mod period not covered

  bool covers_all() const { return gaps.empty(); }
  bool ok() const { return unit_norms && disjoint; }
};

struct PairDiagnostics {
  TessellationDiagnostics first;
  TessellationDiagnostics second;
  Site period = 1;             // lcm of both periods
  std::vector<Site> gaps;      // residues covered by neither
  std::vector<Site> overlap;   // residues covered by both

  bool combined_covers_all() const { return gaps.empty(); }
};

inline constexpr double kBlockNormTolerance = 1e-12;

// modulus must be a multiple of the period.
template <typename Scalar>
std::vector<Site> covered_residues(const Tessellation<Scalar>& t, Site modulus) {
  std::set<Site> seen;
  for (std::size_t b = 0; b < t.pattern().size(); ++b)
    for (Site n = 0; n < modulus / t.period(); ++n)
      for (Site s : t.translate(b, n).sites) seen.insert(floor_mod(s, modulus));
  return {seen.begin(), seen.end()};
}

template <typename Scalar>
TessellationDiagnostics validate_tessellation(const Tessellation<Scalar>& t) {
  TessellationDiagnostics d;
  d.period = t.period();
  std::map<Site, int> residue_count;
  for (const auto& b : t.pattern()) {
    const double err = std::abs(static_cast<double>(b.norm_squared()) - 1.0);
    d.max_norm_error = std::max(d.max_norm_error, err);
    for (Site s : b.sites) ++residue_count[floor_mod(s, t.period())];
  }
  d.unit_norms = d.max_norm_error <= kBlockNormTolerance;
  for (const auto& [r, n] : residue_count) {
    if (n > 1) d.disjoint = false;
    d.covered.push_back(r);
  }
  for (Site r = 0; r < t.period(); ++r)
    if (!residue_count.count(r)) d.gaps.push_back(r);
  return d;
}

template <typename Scalar>
PairDiagnostics validate_pair(const Tessellation<Scalar>& a,
                              const Tessellation<Scalar>& b) {
  PairDiagnostics d;
  d.first = validate_tessellation(a);
  d.second = validate_tessellation(b);
  d.period = std::lcm(a.period(), b.period());
  const auto ca = covered_residues(a, d.period);
  const auto cb = covered_residues(b, d.period);
  std::set<Site> sa(ca.begin(), ca.end()), sb(cb.begin(), cb.end());
  for (Site r = 0; r < d.period; ++r) {
    const bool ina = sa.count(r) > 0, inb = sb.count(r) > 0;
    if (!ina && !inb) d.gaps.push_back(r);
    if (ina && inb) d.overlap.push_back(r);
  }
  return d;
}

// U = 2 sum_b |u_b><u_b| - I, applied stencil-wise.
template <typename Scalar = double>
class ReflectionOperator {
 public:
  using Complex = std::complex<Scalar>;

  explicit ReflectionOperator(Tessellation<Scalar> t) : t_(std::move(t)) {
    const auto d = validate_tessellation(t_);
    if (!d.unit_norms)
      throw ConstructionError("block coefficients are not normalized");
    if (!d.disjoint) throw ConstructionError("blocks overlap");
  }

  const Tessellation<Scalar>& tessellation() const { return t_; }

  LineState<Scalar> apply(const LineState<Scalar>& psi) const {
    const Site p = t_.period();
    const Site lo = psi.offset(), hi = psi.end() - 1;
    struct Hit { std::size_t b; Site n_first, n_last; };
    std::vector<Hit> hits;
    Site new_lo = lo, new_hi = hi;
    for (std::size_t b = 0; b < t_.pattern().size(); ++b) {
      const auto& blk = t_.pattern()[b];
      const Site smin = blk.min_site(), smax = blk.max_site();
      const Site n0 = ceil_div(lo - smax, p), n1 = floor_div(hi - smin, p);
      if (n0 > n1) continue;
      hits.push_back({b, n0, n1});
      new_lo = std::min(new_lo, smin + n0 * p);
      new_hi = std::max(new_hi, smax + n1 * p);
    }
    AmplitudeVector<Scalar> out = -psi.windowed(new_lo, new_hi + 1).amplitudes();
    for (const auto& h : hits) {
      const auto& blk = t_.pattern()[h.b];
      for (Site n = h.n_first; n <= h.n_last; ++n) {
        Complex overlap(0);
        for (std::size_t j = 0; j < blk.sites.size(); ++j)
          overlap += std::conj(blk.coeffs[j]) * psi(blk.sites[j] + n * p);
        overlap *= Scalar(2);
        for (std::size_t j = 0; j < blk.sites.size(); ++j)
          out(blk.sites[j] + n * p - new_lo) += overlap * blk.coeffs[j];
      }
    }
    return LineState<Scalar>(new_lo, std::move(out), psi.time());
  }

  CycleState<Scalar> apply(const CycleState<Scalar>& psi) const {
    const Site n_sites = psi.n_sites();
    require_cycle(n_sites);
    const auto& a = psi.amplitudes();
    AmplitudeVector<Scalar> out = -a;
    const Site p = t_.period();
    for (Site n = 0; n < n_sites / p; ++n) {
      for (const auto& blk : t_.pattern()) {
        Complex overlap(0);
        for (std::size_t j = 0; j < blk.sites.size(); ++j)
          overlap += std::conj(blk.coeffs[j]) * a(floor_mod(blk.sites[j] + n * p, n_sites));
        overlap *= Scalar(2);
        for (std::size_t j = 0; j < blk.sites.size(); ++j)
          out(floor_mod(blk.sites[j] + n * p, n_sites)) += overlap * blk.coeffs[j];
      }
    }
    return CycleState<Scalar>(std::move(out), psi.time());
  }

  // Dense N x N matrix on the cycle (small-N oracle).
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic> matrix(Site n_sites) const {
    require_cycle(n_sites);
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic> u =
        -Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>::Identity(n_sites, n_sites);
    const Site p = t_.period();
    for (Site n = 0; n < n_sites / p; ++n)
      for (const auto& blk : t_.pattern())
        for (std::size_t i = 0; i < blk.sites.size(); ++i)
          for (std::size_t j = 0; j < blk.sites.size(); ++j)
            u(floor_mod(blk.sites[i] + n * p, n_sites),
              floor_mod(blk.sites[j] + n * p, n_sites)) +=
                Scalar(2) * blk.coeffs[i] * std::conj(blk.coeffs[j]);
    return u;
  }

  void require_cycle(Site n_sites) const {
    if (n_sites <= 0 || n_sites % t_.period() != 0)
      throw TopologyError("cycle length " + std::to_string(n_sites) +
                          " is not a multiple of the tessellation period " +
                          std::to_string(t_.period()));
    std::set<Site> seen;
    std::size_t count = 0;
    for (const auto& blk : t_.pattern())
      for (Site s : blk.sites) {
        seen.insert(floor_mod(s, n_sites));
        ++count;
      }
    if (seen.size() != count)
      throw TopologyError("blocks wrap onto themselves on a cycle of length " +
                          std::to_string(n_sites));
  }

 private:
  static Site floor_div(Site a, Site b) {
    Site q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
  }
  static Site ceil_div(Site a, Site b) { return -floor_div(-a, b); }

  Tessellation<Scalar> t_;
};

// T0: {2x, 2x+1} with (cos a/2, e^{i phi1} sin a/2).
// T1: {2x+1, 2x+2} with (cos b/2, e^{i phi2} sin b/2).
template <typename Scalar = double>
std::pair<Tessellation<Scalar>, Tessellation<Scalar>> two_site_tessellations(
    const WalkParams& p) {
  using C = std::complex<Scalar>;
  const Scalar a = Scalar(p.alpha) / 2, b = Scalar(p.beta) / 2;
  const C e1 = std::exp(C(0, Scalar(p.phi1))), e2 = std::exp(C(0, Scalar(p.phi2)));
  Block<Scalar> b0{{0, 1}, {C(std::cos(a)), std::sin(a) * e1}};
  Block<Scalar> b1{{1, 2}, {C(std::cos(b)), std::sin(b) * e2}};
  return {Tessellation<Scalar>({b0}, 2), Tessellation<Scalar>({b1}, 2)};
}

// T0: {4x-1, 4x, 4x+1}, T1: {4x+1, 4x+2, 4x+3}, all coefficients 1/sqrt(3).
template <typename Scalar = double>
std::pair<Tessellation<Scalar>, Tessellation<Scalar>> three_site_tessellations() {
  const std::complex<Scalar> c(Scalar(1) / std::sqrt(Scalar(3)));
  Block<Scalar> b0{{-1, 0, 1}, {c, c, c}};
  Block<Scalar> b1{{1, 2, 3}, {c, c, c}};
  return {Tessellation<Scalar>({b0}, 4), Tessellation<Scalar>({b1}, 4)};
}

// Generalized propagator psi'_x = M psi_x + sum_mu A_mu psi_{x + e_mu}.
template <typename Scalar = double>
struct GeneralizedHop {
  using Matrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix stay;
  std::vector<Matrix> hops;
  std::vector<int> pairing;  // nu(mu): the opposite direction of mu
};

struct GeneralizedResiduals {
  double completeness = 0.0;    // |M^+M + sum A^+A - I|
  double cross = 0.0;           // |A_mu^+ M + M^+ A_nu(mu)|
  double orthogonality = 0.0;   // |A_mu^+ A_nu|, mu != nu
  double sum_unitarity = 0.0;   // |S^+S - I|, S = M + sum A
  double max() const {
    return std::max(std::max(completeness, cross), std::max(orthogonality, sum_unitarity));
  }
  bool passes(double tol = 1e-12) const { return max() <= tol; }
};

template <typename Scalar>
GeneralizedResiduals validate_generalized(const GeneralizedHop<Scalar>& g) {
  using Matrix = typename GeneralizedHop<Scalar>::Matrix;
  const Eigen::Index r = g.stay.rows();
  if (r == 0 || g.stay.cols() != r) throw ShapeError("stay operator must be square");
  for (const auto& a : g.hops)
    if (a.rows() != r || a.cols() != r)
      throw ShapeError("hop matrices must match the stay operator's rank");
  const std::size_t d = g.hops.size();
  if (g.pairing.size() != d) throw ShapeError("pairing length differs from number of hops");
  std::vector<int> sorted(g.pairing);
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < d; ++i)
    if (sorted[i] != static_cast<int>(i)) throw ShapeError("pairing is not a permutation");

  auto maxabs = [](const Matrix& m) {
    return m.size() == 0 ? 0.0 : static_cast<double>(m.cwiseAbs().maxCoeff());
  };
  const Matrix id = Matrix::Identity(r, r);
  GeneralizedResiduals res;
  Matrix comp = g.stay.adjoint() * g.stay - id;
  Matrix sum = g.stay;
  for (const auto& a : g.hops) {
    comp += a.adjoint() * a;
    sum += a;
  }
  res.completeness = maxabs(comp);
  for (std::size_t mu = 0; mu < d; ++mu) {
    res.cross = std::max(res.cross, maxabs(g.hops[mu].adjoint() * g.stay +
                                           g.stay.adjoint() * g.hops[g.pairing[mu]]));
    for (std::size_t nu = 0; nu < d; ++nu)
      if (nu != mu)
        res.orthogonality =
            std::max(res.orthogonality, maxabs(g.hops[mu].adjoint() * g.hops[nu]));
  }
  res.sum_unitarity = maxabs(sum.adjoint() * sum - id);
  return res;
}

// Text form:
//   period: P
//   base: (offset:re,im) (offset:re,im) ...
// Blank lines and '#' comments are ignored.
Tessellation<double> parse_tessellation(const std::string& text);
// Several tessellations, each opened by its own 'period:' header.
std::vector<Tessellation<double>> parse_tessellations(const std::string& text);
std::string format_tessellation(const Tessellation<double>& t);
std::string describe(const TessellationDiagnostics& d);
std::string describe(const PairDiagnostics& d);

}  // namespace qwalk

#endif  // QWALK_TESSELLATION_HPP
