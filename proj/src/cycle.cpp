#include "qwalk/cycle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "qwalk/evolution.hpp"
#include "qwalk/spectral_line.hpp"

namespace qwalk {

namespace {

using cd = std::complex<double>;

void require_even(Site n) {
  if (n <= 0 || n % 2 != 0)
    throw TopologyError("cycle needs an even, positive number of sites (got " +
                        std::to_string(n) + ")");
}

double wrap_phase(double a) { return wrap_angle(a); }

CycleMode make_mode(Site k, Site n, const WalkParams& p) {
  const auto r = reduced2(2.0 * kPi * static_cast<double>(k) / static_cast<double>(n), p);
  CycleMode m;
  m.k = k;
  m.A = r.A;
  m.B = r.B;
  m.theta = r.theta;
  m.c_plus = r.c_plus;
  m.c_minus = r.c_minus;
  const double smallest = std::min({r.c_plus, r.c_minus, std::sin(r.theta)});
  if (smallest >= kCycleDegenerateThreshold) {
    m.w_plus = r.eigenvector(+1);
    m.w_minus = r.eigenvector(-1);
    m.lambda_plus = r.theta;
    m.lambda_minus = -r.theta;
    return m;
  }
  m.closed_form = false;
  Eigen::ComplexSchur<Eigen::Matrix2cd> schur(r.matrix());
  const Eigen::Matrix2cd& q = schur.matrixU();
  const Eigen::Matrix2cd& t = schur.matrixT();
  const double l0 = std::arg(t(0, 0)), l1 = std::arg(t(1, 1));
  const int plus = std::sin(l0) >= std::sin(l1) ? 0 : 1;
  m.w_plus = q.col(plus);
  m.w_minus = q.col(1 - plus);
  m.lambda_plus = plus == 0 ? l0 : l1;
  m.lambda_minus = plus == 0 ? l1 : l0;
  return m;
}

// Table of e^{-2 pi i m / N}.
std::vector<cd> inverse_roots(Site n) {
  std::vector<cd> w(n);
  for (Site m = 0; m < n; ++m)
    w[m] = std::exp(cd(0.0, -2.0 * kPi * static_cast<double>(m) / static_cast<double>(n)));
  return w;
}

// a_{j,x} = c_j^* v_{j,x} for all j at fixed x.
class ProjectionTable {
 public:
  explicit ProjectionTable(const CycleSpectrum& s)
      : s_(s), n_(s.n_sites()), roots_(inverse_roots(n_)), c_(s.overlaps()) {}

  void fill(Site x, Eigen::VectorXcd& a) const {
    a.resize(n_);
    const Site half = n_ / 2;
    const double norm = std::sqrt(2.0 / static_cast<double>(n_));
    const int parity = static_cast<int>(floor_mod(x, 2));
    for (Site j = 0; j < n_; ++j) {
      const auto& m = s_.modes()[j % half];
      const cd w = (j < half ? m.w_plus : m.w_minus)(parity);
      const cd v = norm * w * roots_[floor_mod(x * m.k, n_)];
      a(j) = std::conj(c_(j)) * v;
    }
  }

 private:
  const CycleSpectrum& s_;
  Site n_;
  std::vector<cd> roots_;
  Eigen::VectorXcd c_;
};

std::vector<int> group_index(const CycleSpectrum& s, double tol) {
  std::vector<int> g(s.n_sites());
  const auto groups = s.degenerate_groups(tol);
  for (std::size_t i = 0; i < groups.size(); ++i)
    for (Site j : groups[i]) g[j] = static_cast<int>(i);
  return g;
}

}  // namespace

CycleSpectrum::CycleSpectrum(Site n_sites, const WalkParams& p) : n_(n_sites), params_(p) {
  require_even(n_sites);
  modes_.reserve(n_ / 2);
  for (Site k = 0; k < n_ / 2; ++k) modes_.push_back(make_mode(k, n_, p));
}

bool CycleSpectrum::closed_form() const {
  return std::all_of(modes_.begin(), modes_.end(),
                     [](const CycleMode& m) { return m.closed_form; });
}

double CycleSpectrum::phase(Site j) const {
  const Site half = n_ / 2;
  const auto& m = modes_[j % half];
  return j < half ? m.lambda_plus : m.lambda_minus;
}

std::complex<double> CycleSpectrum::component(Site j, Site x) const {
  const Site half = n_ / 2;
  const auto& m = modes_[j % half];
  const cd w = (j < half ? m.w_plus : m.w_minus)(floor_mod(x, 2));
  const Site e = floor_mod(x * m.k, n_);
  return std::sqrt(2.0 / static_cast<double>(n_)) * w *
         std::exp(cd(0.0, -2.0 * kPi * static_cast<double>(e) / static_cast<double>(n_)));
}

Eigen::VectorXd CycleSpectrum::phases() const {
  Eigen::VectorXd l(n_);
  for (Site j = 0; j < n_; ++j) l(j) = phase(j);
  return l;
}

Eigen::VectorXcd CycleSpectrum::overlaps() const {
  Eigen::VectorXcd c(n_);
  for (Site j = 0; j < n_; ++j) c(j) = overlap(j);
  return c;
}

MatrixXcd CycleSpectrum::eigenvectors() const {
  MatrixXcd v(n_, n_);
  for (Site j = 0; j < n_; ++j)
    for (Site x = 0; x < n_; ++x) v(x, j) = component(j, x);
  return v;
}

MatrixXcd CycleSpectrum::reconstruct() const {
  const MatrixXcd v = eigenvectors();
  Eigen::VectorXcd d(n_);
  for (Site j = 0; j < n_; ++j) d(j) = std::exp(cd(0.0, phase(j)));
  return v * d.asDiagonal() * v.adjoint();
}

std::vector<std::vector<Site>> CycleSpectrum::degenerate_groups(double tol) const {
  std::vector<Site> order(n_);
  std::iota(order.begin(), order.end(), Site{0});
  std::vector<double> lam(n_);
  for (Site j = 0; j < n_; ++j) lam[j] = wrap_phase(phase(j));
  std::stable_sort(order.begin(), order.end(), [&](Site a, Site b) { return lam[a] < lam[b]; });
  std::vector<std::vector<Site>> groups;
  for (Site j : order) {
    if (!groups.empty() && lam[j] - lam[groups.back().back()] <= tol)
      groups.back().push_back(j);
    else
      groups.push_back({j});
  }
  if (groups.size() > 1) {
    const double first = lam[groups.front().front()];
    const double last = lam[groups.back().back()];
    if (first + 2.0 * kPi - last <= tol) {
      groups.front().insert(groups.front().end(), groups.back().begin(), groups.back().end());
      groups.pop_back();
    }
  }
  for (auto& g : groups) std::sort(g.begin(), g.end());
  return groups;
}

MatrixXcd dense_propagator(Site n_sites, const WalkParams& p) {
  require_even(n_sites);
  return two_site_walk<double>(p).matrix(n_sites);
}

Eigen::VectorXd limiting_pdf(const CycleSpectrum& s, double tol) {
  const Site n = s.n_sites();
  const auto g = group_index(s, tol);
  const int n_groups = *std::max_element(g.begin(), g.end()) + 1;
  const ProjectionTable table(s);
  Eigen::VectorXd pi(n);
  Eigen::VectorXcd a, acc(n_groups);
  for (Site x = 0; x < n; ++x) {
    table.fill(x, a);
    acc.setZero();
    for (Site j = 0; j < n; ++j) acc(g[j]) += a(j);
    pi(x) = acc.squaredNorm();
  }
  return pi;
}

Eigen::VectorXd limiting_pdf(Site n_sites, const WalkParams& p) {
  return limiting_pdf(CycleSpectrum(n_sites, p));
}

Eigen::VectorXd limiting_pdf_closed_form(Site n_sites, const WalkParams& p) {
  const CycleSpectrum s(n_sites, p);
  if (!s.closed_form())
    throw DomainError("closed-form limiting distribution undefined at a degenerate mode");
  const Site n = n_sites, half = n / 2;
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  const bool quarter = n % 4 == 0;
  Eigen::VectorXd pi(n);
  double odd_const = 0.0;
  for (const auto& m : s.modes()) odd_const += std::norm(m.B) / std::pow(std::sin(m.theta), 2);
  odd_const *= 2.0 / nn;
  for (Site x = 0; x < half; ++x) {
    double even = 2.0 / nn;
    double odd = odd_const;
    for (Site k = 1; k < half; ++k) {
      const auto& m = s.modes()[k];
      const double excl = (quarter && k == n / 4) ? 0.0 : 1.0;
      const double b2 = std::norm(m.B);
      const double ang = 8.0 * kPi * static_cast<double>(floor_mod(k * x, n)) / static_cast<double>(n);
      even += 4.0 / nn * b2 * b2 *
              (1.0 / (m.c_plus * m.c_plus) + 1.0 / (m.c_minus * m.c_minus) +
               excl * 2.0 * std::cos(ang) / (m.c_plus * m.c_minus));
      const double s2 = std::pow(std::sin(m.theta), 2);
      const cd w = std::exp(cd(0.0, -2.0 * kPi *
                                        static_cast<double>(floor_mod(2 * k * (2 * x + 1), n)) /
                                        static_cast<double>(n)));
      odd += excl / nn / s2 * 2.0 * (m.B * m.B * w).real();
    }
    pi(2 * x) = even;
    pi(2 * x + 1) = odd;
  }
  return pi;
}

Eigen::VectorXd time_averaged_pdf(Site n_sites, const WalkParams& p, std::int64_t T) {
  if (T < 1) throw DomainError("averaging window must be at least 1");
  const TwoSiteStencil<double> st(p);
  auto psi = initial_cycle_state<double>(InitialKind::delta_origin, n_sites);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n_sites);
  for (std::int64_t t = 0; t < T; ++t) {
    sum += psi.amplitudes().cwiseAbs2();
    if (t + 1 < T) psi = step_coinless2(psi, st);
  }
  return sum / static_cast<double>(T);
}

Eigen::VectorXd time_averaged_pdf_spectral(const CycleSpectrum& s, std::int64_t T) {
  if (T < 1) throw DomainError("averaging window must be at least 1");
  const Site n = s.n_sites();
  const auto g = group_index(s, 1e-9);
  MatrixXcd G(n, n);
  const double tt = static_cast<double>(T);
  for (Site j = 0; j < n; ++j)
    for (Site l = 0; l < n; ++l) {
      if (g[j] == g[l]) {
        G(j, l) = 1.0;
        continue;
      }
      const double d = s.phase(j) - s.phase(l);
      G(j, l) = (std::exp(cd(0.0, d * tt)) - 1.0) / (tt * (std::exp(cd(0.0, d)) - 1.0));
    }
  const ProjectionTable table(s);
  Eigen::VectorXd pbar(n);
  Eigen::VectorXcd a;
  for (Site x = 0; x < n; ++x) {
    table.fill(x, a);
    pbar(x) = (a.transpose() * G * a.conjugate()).value().real();
  }
  return pbar;
}

double tvd(const CycleSpectrum& s, std::int64_t t, double tol) {
  if (t < 1) throw DomainError("TVD needs t >= 1");
  const Site n = s.n_sites();
  const auto g = group_index(s, tol);
  MatrixXcd K(n, n);
  const double tt = static_cast<double>(t);
  for (Site j = 0; j < n; ++j)
    for (Site l = 0; l < n; ++l) {
      if (g[j] == g[l]) {
        K(j, l) = 0.0;
        continue;
      }
      const double d = s.phase(j) - s.phase(l);
      K(j, l) = (std::exp(cd(0.0, d * tt)) - 1.0) / (std::exp(cd(0.0, d)) - 1.0);
    }
  const ProjectionTable table(s);
  Eigen::VectorXcd a;
  double total = 0.0;
  for (Site x = 0; x < n; ++x) {
    table.fill(x, a);
    total += std::abs((a.transpose() * K * a.conjugate()).value());
  }
  return total / (2.0 * tt);
}

std::pair<double, double> tvd_bound_terms(const CycleSpectrum& s, std::int64_t t, double tol) {
  const Site n = s.n_sites();
  const auto g = group_index(s, tol);
  MatrixXcd F(n, n), Fo(n, n);
  const double tt = static_cast<double>(t);
  for (Site j = 0; j < n; ++j)
    for (Site l = 0; l < n; ++l) {
      if (g[j] == g[l]) {
        F(j, l) = Fo(j, l) = 0.0;
        continue;
      }
      const double d = s.phase(j) - s.phase(l);
      F(j, l) = 1.0 / (std::exp(cd(0.0, d)) - 1.0);
      Fo(j, l) = F(j, l) * std::exp(cd(0.0, d * tt));
    }
  const ProjectionTable table(s);
  Eigen::VectorXcd a;
  double first = 0.0, second = 0.0;
  for (Site x = 0; x < n; ++x) {
    table.fill(x, a);
    first += std::abs((a.transpose() * F * a.conjugate()).value());
    second += std::abs((a.transpose() * Fo * a.conjugate()).value());
  }
  return {first, second};
}

std::vector<double> tvd_series(Site n_sites, const WalkParams& p, std::int64_t horizon,
                               const Eigen::VectorXd& pi) {
  require_even(n_sites);
  if (horizon < 1) throw DomainError("horizon must be at least 1");
  if (pi.size() != n_sites) throw ShapeError("limiting distribution has the wrong length");
  const TwoSiteStencil<double> st(p);
  auto psi = initial_cycle_state<double>(InitialKind::delta_origin, n_sites);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n_sites);
  std::vector<double> out;
  out.reserve(horizon);
  for (std::int64_t t = 1; t <= horizon; ++t) {
    sum += psi.amplitudes().cwiseAbs2();
    out.push_back(0.5 * (sum / static_cast<double>(t) - pi).cwiseAbs().sum());
    if (t < horizon) psi = step_coinless2(psi, st);
  }
  return out;
}

std::int64_t default_horizon(Site n_sites, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  return static_cast<std::int64_t>(std::ceil(0.5 * static_cast<double>(n_sites) / epsilon));
}

std::int64_t mixing_time_from_series(const std::vector<double>& series, double epsilon) {
  for (std::size_t i = series.size(); i-- > 0;)
    if (series[i] > epsilon) return static_cast<std::int64_t>(i) + 2;
  return 1;
}

MixingReport mixing_time(Site n_sites, const WalkParams& p, double epsilon,
                         std::optional<std::int64_t> horizon) {
  MixingReport r;
  r.n_sites = n_sites;
  r.params = p;
  r.epsilon = epsilon;
  r.horizon = horizon ? *horizon : default_horizon(n_sites, epsilon);
  r.pi = limiting_pdf(n_sites, p);
  const auto series = tvd_series(n_sites, p, r.horizon, r.pi);
  if (series.back() >= epsilon / 2)
    throw InconclusiveError("TVD at the horizon (" + std::to_string(series.back()) +
                                ") is not below epsilon/2; extend the horizon",
                            series.back());
  r.tau = mixing_time_from_series(series, epsilon);
  r.tvd_samples.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i)
    r.tvd_samples.emplace_back(static_cast<std::int64_t>(i) + 1, series[i]);
  return r;
}

TermF termf_decomposition(Site n_sites, const WalkParams& p) {
  const CycleSpectrum s(n_sites, p);
  if (!s.closed_form()) throw DomainError("term decomposition undefined at a degenerate mode");
  const Site n = n_sites, half = n / 2;
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  const auto& m = s.modes();
  auto g = [&](Site k, Site l, int sign) {
    const Site d = k - l;
    const double ang = 2.0 * kPi * static_cast<double>(d) / static_cast<double>(n);
    const double num = (d % 2 == 0 ? 1.0 : -1.0) - std::cos(ang);
    const double th = 0.5 * (m[k].theta + sign * m[l].theta);
    return num / std::sin(ang) * std::cos(th) / std::sin(th);
  };
  TermF f;
  for (Site k = 0; k < half; ++k) {
    const double bk = std::norm(m[k].B);
    for (Site l = 0; l < half; ++l) {
      const double bl = std::norm(m[l].B);
      if (k != l && k + l != half)
        f.term1 += bk * bl / (m[k].c_plus * m[l].c_plus) * (1.0 - g(k, l, -1));
      f.term2 += bk * bl / (m[k].c_plus * m[l].c_minus) * (k == l ? 1.0 : 1.0 - g(k, l, +1));
    }
    const cd e = std::exp(cd(0.0, m[k].theta));
    f.term3 += (bk / (m[k].c_plus * m[k].c_minus) * (e - m[k].A) * (std::conj(e) - m[k].A)).real();
  }
  f.term1 *= 4.0 / nn;
  f.term2 *= 4.0 / nn;
  f.term3 *= 2.0 / static_cast<double>(n);
  return f;
}

}  // namespace qwalk
