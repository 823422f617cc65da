#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qwalk/cycle.hpp"
#include "qwalk/errors.hpp"

using namespace qwalk;
using oracle::C;

namespace {

const WalkParams kFig{oracle::pi / 2, 2 * oracle::pi / 3, 0, 0};

// greedy match of e^{i lambda} against dense eigenvalues
double phase_mismatch(const Eigen::VectorXd& lambda, const Eigen::MatrixXcd& u) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(u);
  std::vector<C> pool(es.eigenvalues().data(), es.eigenvalues().data() + u.rows());
  double worst = 0;
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    const C z = std::polar(1.0, lambda(j));
    auto best = pool.begin();
    for (auto it = pool.begin(); it != pool.end(); ++it)
      if (std::abs(*it - z) < std::abs(*best - z)) best = it;
    worst = std::max(worst, std::abs(*best - z));
    pool.erase(best);
  }
  return worst;
}

double r_squared_through_origin(const std::vector<double>& x, const std::vector<double>& y) {
  double sxy = 0, sxx = 0, mean = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += x[i] * y[i], sxx += x[i] * x[i], mean += y[i];
  mean /= y.size();
  const double c = sxy / sxx;
  double res = 0, tot = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    res += (y[i] - c * x[i]) * (y[i] - c * x[i]);
    tot += (y[i] - mean) * (y[i] - mean);
  }
  return 1 - res / tot;
}

}  // namespace

TEST(CycleSpectrum, OddLengthRejected) {
  EXPECT_THROW(CycleSpectrum(7, kFig), TopologyError);
}

TEST(CycleSpectrum, SmallCycleMatchesDenseEigensolver) {
  const WalkParams p{oracle::pi / 4, 3 * oracle::pi / 4, 0, 0};
  const CycleSpectrum s(4, p);
  EXPECT_LT(phase_mismatch(s.phases(), oracle::two_site_cycle_step(4, p)), 1e-10);
  EXPECT_LT((s.reconstruct() - oracle::two_site_cycle_step(4, p)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(CycleSpectrum, FigureParametersNonDegenerate) {
  const CycleSpectrum s(200, kFig);
  EXPECT_TRUE(s.closed_form());
  for (const auto& m : s.modes()) {
    EXPECT_GT(m.c_plus, 1e-6);
    EXPECT_GT(m.c_minus, 1e-6);
  }
}

TEST(CycleSpectrum, DegenerateModeUsesDirectSolve) {
  const WalkParams p{oracle::pi / 3, oracle::pi / 3, 0, 0};
  const CycleSpectrum s(8, p);
  EXPECT_FALSE(s.closed_form());
  EXPECT_FALSE(s.modes()[2].closed_form);
  EXPECT_LT((s.reconstruct() - oracle::two_site_cycle_step(8, p)).cwiseAbs().maxCoeff(), 1e-10);
  const auto v = s.eigenvectors();
  EXPECT_LT((v.adjoint() * v - Eigen::MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(CycleSpectrum, ReconstructionRandomParams) {
  std::mt19937_64 rng(oracle::seed());
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = oracle::random_params(rng);
    const Site n = 2 * (2 + trial % 15);
    const CycleSpectrum s(n, p);
    EXPECT_LT((s.reconstruct() - oracle::two_site_cycle_step(n, p)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(s.overlaps().squaredNorm(), 1.0, 1e-10);
  }
}

TEST(CycleSpectrum, DensePropagatorIsTheTwoReflections) {
  EXPECT_LT((dense_propagator(12, kFig) - oracle::two_site_cycle_step(12, kFig)).cwiseAbs().maxCoeff(),
            1e-14);
}

TEST(LimitingPdf, NormalizedAndMatchesClosedForm) {
  const auto pi = limiting_pdf(200, kFig);
  EXPECT_NEAR(pi.sum(), 1.0, 1e-10);
  EXPECT_GE(pi.minCoeff(), 0.0);
  EXPECT_LT((pi - limiting_pdf_closed_form(200, kFig)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(LimitingPdf, NoSpikeOppositeWhenNotDivisibleByFour) {
  const auto pi = limiting_pdf(198, kFig);
  std::vector<double> v(pi.data(), pi.data() + pi.size());
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  EXPECT_LT(pi(99) / v[v.size() / 2], 1.2);
}

TEST(LimitingPdf, SpikesAtOriginAndOpposite) {
  const auto pi = limiting_pdf(200, kFig);
  std::vector<double> v(pi.data(), pi.data() + pi.size());
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  const double median = v[v.size() / 2];
  EXPECT_GT(pi(0), median);
  EXPECT_GT(pi(100), median);
  EXPECT_NEAR(pi(0), pi(100), 1e-12);
}

TEST(LimitingPdf, LongAverageOracle) {
  const std::int64_t T = 1000000;
  const auto pi = limiting_pdf(16, kFig);
  const auto avg = time_averaged_pdf(16, kFig, T);
  EXPECT_LT((pi - avg).cwiseAbs().maxCoeff(), 10.0 / T);
}

TEST(TimeAverage, FirstStepIsDelta) {
  const auto a = time_averaged_pdf(16, kFig, 1);
  EXPECT_EQ(a(0), 1.0);
  EXPECT_EQ(a.sum(), 1.0);
}

TEST(TimeAverage, SpectralMatchesDirect) {
  const CycleSpectrum s(16, kFig);
  EXPECT_LT((time_averaged_pdf_spectral(s, 100) - time_averaged_pdf(16, kFig, 100)).cwiseAbs().maxCoeff(),
            1e-10);
}

TEST(Tvd, SpectralMatchesDirect) {
  const CycleSpectrum s(16, kFig);
  const auto pi = limiting_pdf(s);
  const auto series = tvd_series(16, kFig, 100, pi);
  for (std::int64_t t : {10, 100}) {
    const double direct = 0.5 * (time_averaged_pdf(16, kFig, t) - pi).cwiseAbs().sum();
    EXPECT_NEAR(tvd(s, t), direct, 1e-8);
    EXPECT_NEAR(series[t - 1], direct, 1e-12);
  }
}

TEST(Tvd, DecaysLikeOneOverT) {
  const auto pi = limiting_pdf(16, kFig);
  const auto series = tvd_series(16, kFig, 4000, pi);
  double c = 0;
  for (std::size_t i = 99; i < series.size(); ++i) c = std::max(c, (i + 1) * series[i]);
  EXPECT_LT(c, 10.0);
  EXPECT_LT(series.back(), series[99]);
}

TEST(Tvd, EnvelopeScalesWithNOverT) {
  const Site n = 500;
  const auto pi = limiting_pdf(n, kFig);
  const auto series = tvd_series(n, kFig, 10 * n, pi);
  double tail = 0, c = 0;
  for (std::size_t i = series.size(); i-- > n / 2;) {
    tail = std::max(tail, series[i]);
    c = std::max(c, tail * static_cast<double>(i + 1) / n);
  }
  EXPECT_LT(c, 1.0);
}

TEST(Tvd, BoundTermsDominate) {
  const CycleSpectrum s(16, kFig);
  const TermF f = termf_decomposition(16, kFig);
  for (std::int64_t t : {5, 20, 80}) {
    const auto [first, second] = tvd_bound_terms(s, t);
    EXPECT_LE(2 * t * tvd(s, t), first + second + 1e-9);
    EXPECT_GE(f.sum() + 1e-9, first);
  }
}

TEST(Mixing, LargeEpsilonGivesOne) {
  EXPECT_EQ(mixing_time_from_series({0.3, 0.2, 0.1}, 0.5), 1);
  EXPECT_EQ(mixing_time_from_series({0.3, 0.6, 0.1}, 0.5), 3);
  const auto r = mixing_time(16, kFig, 0.999, 200);
  EXPECT_EQ(r.tau, 1);
}

TEST(Mixing, InconclusiveHorizon) {
  try {
    mixing_time(100, kFig, 0.05, 50);
    FAIL();
  } catch (const InconclusiveError& e) {
    EXPECT_GT(e.last_tvd(), 0.025);
  }
}

TEST(Mixing, TauLinearInOneOverEpsilon) {
  std::vector<double> x, y;
  for (double eps : {0.05, 0.02, 0.01}) {
    const auto r = mixing_time(500, kFig, eps);
    x.push_back(500 / eps);
    y.push_back(static_cast<double>(r.tau));
  }
  EXPECT_GT(r_squared_through_origin(x, y), 0.98);
}

TEST(TermF, Term1LinearTerm3Flat) {
  std::vector<double> n, t1;
  for (Site N = 100; N <= 1000; N += 300) {
    n.push_back(static_cast<double>(N));
    t1.push_back(termf_decomposition(N, kFig).term1);
  }
  EXPECT_GT(r_squared_through_origin(n, t1), 0.99);
  std::vector<double> t3;
  for (Site N : {200, 400, 800}) t3.push_back(termf_decomposition(N, kFig).term3);
  const auto [lo, hi] = std::minmax_element(t3.begin(), t3.end());
  EXPECT_LT((*hi - *lo) / *hi, 0.05);
}
