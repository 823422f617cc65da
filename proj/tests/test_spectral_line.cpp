#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/evolution.hpp"
#include "qwalk/spectral_line.hpp"

using namespace qwalk;
using oracle::C;

TEST(Reduced2, AlphaPlusBetaPiDispersion) {
  const double a = 0.9;
  const WalkParams p{a, oracle::pi - a, 0, 0};
  for (int j = 0; j < 64; ++j) {
    const double k = -oracle::pi + 2 * oracle::pi * j / 64;
    const double s = std::sin(a) * std::sin(k);
    EXPECT_NEAR(std::cos(reduced2(k, p).theta), 1 - 2 * s * s, 1e-12);
  }
  EXPECT_NEAR(reduced2(0.0, p).theta, 0.0, 1e-7);
}

TEST(Reduced2, OscillationCaseHasZeroA) {
  const WalkParams p{0, oracle::pi / 2, 0, 0};
  for (double k : {-2.0, -0.3, 0.0, 1.1, 3.0}) EXPECT_LT(std::abs(reduced2(k, p).A), 1e-15);
}

TEST(Reduced2, UnitNormAndUnitary) {
  std::mt19937_64 rng(oracle::seed());
  std::uniform_real_distribution<double> kd(-oracle::pi, oracle::pi);
  double worst = 0, worst_u = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto p = oracle::random_params(rng);
    const auto r = reduced2(kd(rng), p);
    worst = std::max(worst, std::abs(std::norm(r.A) + std::norm(r.B) - 1));
    const auto m = r.matrix();
    worst_u = std::max(worst_u, (m.adjoint() * m - Matrix2c<double>::Identity()).cwiseAbs().maxCoeff());
  }
  EXPECT_LT(worst, 1e-12);
  EXPECT_LT(worst_u, 1e-12);
}

TEST(Reduced2, MatchesStepSymbol) {
  // U acting on e^{-ik x} waves, read off from the stencil applied to a long window
  const WalkParams p{0.7, 1.3, 0.4, -0.2};
  const double k = 0.37;
  const Site half = 40;
  AmplitudeVector<double> even(2 * half), odd(2 * half);
  for (Site x = -half; x < half; ++x) {
    const C w = std::exp(C(0, -k * static_cast<double>(x)));
    even(x + half) = floor_mod(x, 2) == 0 ? w : C(0);
    odd(x + half) = floor_mod(x, 2) == 1 ? w : C(0);
  }
  const auto ue = step_coinless2(LineState<double>(-half, even), p);
  const auto uo = step_coinless2(LineState<double>(-half, odd), p);
  const auto r = reduced2(k, p);
  const Site x0 = 0, x1 = 1;
  const C w0 = std::exp(C(0, -k * x0)), w1 = std::exp(C(0, -k * x1));
  const auto m = r.matrix();
  EXPECT_NEAR(std::abs(ue(x0) / w0 - m(0, 0)), 0, 1e-13);
  EXPECT_NEAR(std::abs(ue(x1) / w1 - m(1, 0)), 0, 1e-13);
  EXPECT_NEAR(std::abs(uo(x0) / w0 - m(0, 1)), 0, 1e-13);
  EXPECT_NEAR(std::abs(uo(x1) / w1 - m(1, 1)), 0, 1e-13);
}

TEST(Reduced2, EigenvectorsAndCompleteness) {
  std::mt19937_64 rng(oracle::seed() + 1);
  std::uniform_real_distribution<double> kd(-oracle::pi, oracle::pi);
  for (int i = 0; i < 200; ++i) {
    const auto p = oracle::random_params(rng);
    const auto r = reduced2(kd(rng), p);
    if (std::min({r.c_plus, r.c_minus, std::sin(r.theta)}) < 1e-4) continue;
    const auto vp = r.eigenvector(+1), vm = r.eigenvector(-1);
    const auto m = r.matrix();
    EXPECT_LT((m * vp - std::exp(C(0, r.theta)) * vp).norm(), 1e-10);
    EXPECT_LT((m * vm - std::exp(C(0, -r.theta)) * vm).norm(), 1e-10);
    const Matrix2c<double> id = vp * vp.adjoint() + vm * vm.adjoint();
    EXPECT_LT((id - Matrix2c<double>::Identity()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(DegenerateK, KnownCases) {
  auto near = [](std::vector<double> got, std::vector<double> want) {
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
  };
  near(degenerate_k({oracle::pi / 3, oracle::pi / 3, 0, 0}), {-oracle::pi / 2, oracle::pi / 2});
  near(degenerate_k({1.0, oracle::pi - 1.0, 0, 0}), {-oracle::pi, 0.0, oracle::pi});
  EXPECT_TRUE(degenerate_k({oracle::pi / 5, oracle::pi / 3, 0.1, 0.2}).empty());
  // C+- really vanish there
  const WalkParams p{oracle::pi / 3, oracle::pi / 3, 0, 0};
  for (double k : degenerate_k(p)) {
    const auto r = reduced2(k, p);
    EXPECT_LT(std::min(r.c_plus, r.c_minus), 1e-12);
  }
}

TEST(Spectral, TimeZeroIsDelta) {
  const WalkParams p{0.5, 2.0, 0.1, 0.3};
  const auto s = wavefunction_spectral<double>(0, p, 4);
  EXPECT_LT(max_abs_difference(s, initial_line_state<double>()), 1e-15);
}

TEST(Spectral, LockstepSiteZeroEmpties) {
  const WalkParams p{oracle::pi / 2, oracle::pi / 2, 0, 0};
  EXPECT_NEAR(std::abs(wavefunction_spectral<double>(0, 1, p, 8)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(wavefunction_spectral<double>(2, 1, p, 8) - C(1)), 0.0, 1e-15);
}

TEST(Spectral, MatchesDirectEvolutionFig2Parameters) {
  const double a = std::asin(0.75);
  const WalkParams p{a, oracle::pi - a, 0, 0};
  const auto direct = evolve_coinless2(initial_line_state<double>(), p, 30);
  const auto spec = wavefunction_spectral<double>(30, p, 4 * 30 + 4);
  EXPECT_LT(max_abs_difference(direct, spec), 1e-10);
}

TEST(Spectral, MatchesDirectEvolutionRandomParams) {
  std::mt19937_64 rng(oracle::seed() + 2);
  std::uniform_int_distribution<int> td(1, 50);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = oracle::random_params(rng);
    const int t = td(rng);
    const auto direct = evolve_coinless2(initial_line_state<double>(), p, t);
    EXPECT_LT(max_abs_difference(direct, wavefunction_spectral<double>(t, p, 4 * t + 4)), 1e-9);
  }
}

TEST(Spectral, DegenerateMomentaOnTheGrid) {
  for (const WalkParams p : {WalkParams{oracle::pi / 3, oracle::pi / 3, 0, 0},
                             WalkParams{1.0, oracle::pi - 1.0, 0, 0}}) {
    const auto direct = evolve_coinless2(initial_line_state<double>(), p, 20);
    EXPECT_LT(max_abs_difference(direct, wavefunction_spectral<double>(20, p, 84)), 1e-9);
  }
}

TEST(Spectral, QuadratureTooCoarse) {
  EXPECT_THROW(wavefunction_spectral<double>(0, 10, WalkParams{1, 1, 0, 0}, 43), AccuracyError);
}

TEST(Spectral, LongDouble) {
  const WalkParams p{0.8, 2.2, 0.3, 0.1};
  const auto direct = evolve_coinless2(initial_line_state<long double>(), p, 15);
  const auto spec = wavefunction_spectral<long double>(15, p, 64);
  EXPECT_LT(max_abs_difference(direct, spec), 1e-15L);
}

TEST(FlatBand, TwoSiteHasNone) {
  EXPECT_FALSE(has_unit_flat_band<double>({0.7, 1.3, 0.2, 0.1}));
  EXPECT_FALSE(has_unit_flat_band<double>({1.0, oracle::pi - 1.0, 0, 0}));
}

TEST(Reduced4, UnitaryWithDoubleUnitEigenvalue) {
  for (int j = 0; j < 64; ++j) {
    const double k = -oracle::pi + 2 * oracle::pi * j / 64;
    const auto m = reduced4(k);
    EXPECT_LT((m.adjoint() * m - Matrix4c<double>::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    Eigen::ComplexEigenSolver<Matrix4c<double>> es(m);
    int ones = 0;
    double other_re = 0;
    for (int i = 0; i < 4; ++i) {
      if (std::abs(es.eigenvalues()(i) - C(1)) < 1e-8) ++ones;
      else other_re = es.eigenvalues()(i).real();
    }
    EXPECT_EQ(ones, 2) << k;
    EXPECT_NEAR(other_re, (4 * std::cos(4 * k) - 5) / 9, 1e-10);
  }
  EXPECT_NEAR(reduced4_cos_theta(0.0), -1.0 / 9, 1e-15);
  EXPECT_NEAR(reduced4_cos_theta(oracle::pi / 4), -1.0, 1e-15);
}

TEST(Reduced4, MatchesThreeSiteStep) {
  // column j of reduced4 is the image of sum_x e^{-(4x+j)ik}|4x+j>
  const double k = 0.29;
  const Site cells = 12;
  const auto m = reduced4(k);
  for (int j = 0; j < 4; ++j) {
    AmplitudeVector<double> a = AmplitudeVector<double>::Zero(8 * cells);
    const Site lo = -4 * cells;
    for (Site x = lo; x < -lo; ++x)
      if (floor_mod(x, 4) == j) a(x - lo) = std::exp(C(0, -k * static_cast<double>(x)));
    const auto out = step_coinless3(LineState<double>(lo, a));
    for (int i = 0; i < 4; ++i) {
      const Site x = i;  // sample one site of each class near the centre
      EXPECT_NEAR(std::abs(out(x) - m(i, j) * std::exp(C(0, -k * static_cast<double>(x)))), 0,
                  1e-13);
    }
  }
}

TEST(Localization, OrthogonalInitialHasNoWeight) {
  const auto zero = initial_line_state<double>();
  const auto f = flat_band_state(zero, 48, 1024);
  const auto w = zero.windowed(f.offset(), f.end());
  const LineState<double> rest(w.offset(), w.amplitudes() - f.amplitudes());
  EXPECT_LT(localization_weight(normalized(rest), 1024), 1e-10);
}

TEST(Localization, OriginWeightAndLongRunAverage) {
  const auto zero = initial_line_state<double>();
  const double w = localization_weight(zero);
  EXPECT_GT(w, 0.0);
  const double predicted = std::norm(flat_band_state(zero)(0));
  auto s = zero;
  double avg = 0;
  for (int t = 1; t <= 200; ++t) {
    s = step_coinless3(s);
    if (t >= 100) avg += std::norm(s(0));
  }
  avg /= 101;
  EXPECT_NEAR(avg / predicted, 1.0, 0.02);
}

TEST(Localization, LongDoubleWeight) {
  const double wd = localization_weight(initial_line_state<double>(), 256);
  const long double wl = localization_weight(initial_line_state<long double>(), 256);
  EXPECT_NEAR(wd, static_cast<double>(wl), 1e-13);
}

TEST(Dispersion, CsvColumns) {
  std::ostringstream os;
  write_dispersion_csv(os, {1.0, oracle::pi - 1.0, 0, 0}, 4);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "k,theta,reA,imA,reB,imB");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
}
