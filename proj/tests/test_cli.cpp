#include <gtest/gtest.h>

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "qwalk/commands.hpp"
#include "qwalk/config.hpp"
#include "qwalk/errors.hpp"

using namespace qwalk;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> rows(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> out;
  while (std::getline(in, line)) {
    std::vector<double> r;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) r.push_back(std::stod(cell));
    out.push_back(r);
  }
  return out;
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("qwalk_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Angles, Literals) {
  EXPECT_DOUBLE_EQ(parse_angle("pi/2"), oracle::pi / 2);
  EXPECT_DOUBLE_EQ(parse_angle("-3pi/4"), -3 * oracle::pi / 4);
  EXPECT_DOUBLE_EQ(parse_angle("2*pi/3"), 2 * oracle::pi / 3);
  EXPECT_DOUBLE_EQ(parse_angle("pi"), oracle::pi);
  EXPECT_DOUBLE_EQ(parse_angle("-pi"), -oracle::pi);
  EXPECT_DOUBLE_EQ(parse_angle("0.25"), 0.25);
  EXPECT_DOUBLE_EQ(parse_angle(" 1.5 pi "), 1.5 * oracle::pi);
  EXPECT_THROW(parse_angle("pi/0"), ConfigError);
  EXPECT_THROW(parse_angle("tau"), ConfigError);
  EXPECT_THROW(parse_angle("pi*2"), ConfigError);
}

TEST(Config, RoundTrip) {
  std::mt19937_64 rng(oracle::seed());
  std::uniform_real_distribution<double> u(-4, 4);
  for (int i = 0; i < 50; ++i) {
    RunConfig c;
    c.walk = i % 3 == 0 ? WalkKind::coined : WalkKind::two_site;
    c.topology = i % 2 ? Topology::cycle : Topology::line;
    if (c.walk == WalkKind::coined) {
      c.rho = u(rng);
      if (i % 4 == 0) c.varphi = u(rng);
    } else {
      c.alpha = u(rng);
      c.beta = u(rng);
      c.phi2 = u(rng);
    }
    c.n_sites = {2 * (i + 1), 4 * (i + 3)};
    c.steps = i * 7;
    c.initial = i % 2 ? InitialKind::symmetric : InitialKind::delta_origin;
    c.output = "out_" + std::to_string(i) + ".csv";
    if (i % 5 == 0) c.epsilon = 1.0 / (i + 3);
    if (i % 7 == 0) c.horizon = 1000 + i;
    if (i % 3 == 1) c.quadrature = 4 * i + 4, c.kgrid = 256, c.vmax = 0.6, c.bin = 0.1;
    if (i % 9 == 0) c.tessellation = {"a.tess", "b.tess"};
    if (i % 11 == 0) c.calibration = 0.98 + i * 1e-3;
    c.seed = 12345 + i;
    EXPECT_EQ(parse_config(emit_config(c)), c) << emit_config(c);
  }
}

TEST(Config, CommentsOverridesAndErrors) {
  const auto c = parse_config("# comment\nwalk = three_site  # trailing\n\nsteps=20\nsteps = 21\n");
  EXPECT_EQ(c.walk, WalkKind::three_site);
  EXPECT_EQ(c.steps, 21);
  try {
    parse_config("walk = two_site\n  oops\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 3u);
  }
  try {
    parse_config("colour = blue\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "colour");
  }
}

TEST(Config, ValidationNamesField) {
  auto field_of = [](const std::string& text, Command cmd) {
    try {
      validate_config(parse_config(text), cmd);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("none");
  };
  EXPECT_EQ(field_of("alpha=1\nbeta=1\ntopology=cycle\n", Command::simulate), "N");
  EXPECT_EQ(field_of("alpha=1\nbeta=1\ntopology=cycle\nN=7\n", Command::simulate), "N");
  EXPECT_EQ(field_of("walk=three_site\ntopology=cycle\nN=6\n", Command::simulate), "N");
  EXPECT_EQ(field_of("walk=three_site\ntopology=cycle\nN=8\n", Command::simulate), "none");
  EXPECT_EQ(field_of("walk=coined\nrho=1\nbeta=1\n", Command::simulate), "beta");
  EXPECT_EQ(field_of("alpha=1\nbeta=1\nrho=1\n", Command::simulate), "rho");
  EXPECT_EQ(field_of("beta=1\n", Command::simulate), "alpha");
  EXPECT_EQ(field_of("walk=coined\n", Command::simulate), "rho");
  EXPECT_EQ(field_of("alpha=1\nbeta=1\nsteps=-1\n", Command::simulate), "steps");
  EXPECT_EQ(field_of("alpha=1\nbeta=1\nsteps=5\n", Command::asymptotic), "beta");
  EXPECT_EQ(field_of("alpha=pi/2\nbeta=2pi/3\nN=100\noutput=d\n", Command::mixing), "epsilon");
  EXPECT_EQ(field_of("alpha=pi/2\nbeta=2pi/3\nN=100\nepsilon=0.05\n", Command::mixing), "output");
  EXPECT_EQ(field_of("alpha=pi/2\nbeta=2pi/3\nN=100,200\nepsilon=2\noutput=d\n", Command::mixing),
            "epsilon");
}

TEST(Cli, SimulateZeroStepsIsInitialPdf) {
  const auto r = cli({"simulate", "alpha=pi/3", "beta=pi/4", "steps=0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "t,site,prob\n0,0,1\n");
  const auto s = rows(cli({"simulate", "walk=three_site", "initial=symmetric"}).out);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0][1], 0.0);
  EXPECT_EQ(s[1][1], 1.0);
  EXPECT_NEAR(s[0][2], 0.5, 1e-15);
  EXPECT_NEAR(s[1][2], 0.5, 1e-15);
}

TEST(Cli, SimulateRowsSumToOne) {
  const auto r = cli({"simulate", "walk=three_site", "steps=20"});
  ASSERT_EQ(r.code, 0);
  std::map<int, double> total;
  for (const auto& row : rows(r.out)) total[static_cast<int>(row[0])] += row[2];
  EXPECT_EQ(total.size(), 21u);
  for (const auto& [t, s] : total) EXPECT_NEAR(s, 1.0, 1e-12) << t;
  const auto c = cli({"simulate", "walk=coined", "rho=pi/4", "topology=cycle", "N=10", "steps=5"});
  ASSERT_EQ(c.code, 0);
  EXPECT_EQ(rows(c.out).size(), 60u);
}

TEST(Cli, Determinism) {
  const std::vector<std::string> args{"simulate", "alpha=0.848062078981481",
                                      "beta=2.293530574608312", "steps=30"};
  const auto a = cli(args), b = cli(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"bogus"}).code, 2);
  const auto r = cli({"simulate", "topology=cycle", "alpha=1", "beta=1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("N:"), std::string::npos);
  EXPECT_EQ(cli({"simulate", "alpha=1", "beta=1", "nonsense"}).code, 2);
  EXPECT_EQ(cli({"simulate", "alpha=1", "beta=1", "output=/nonexistent-dir/x.csv"}).code, 2);
  const auto d = scratch("inconclusive");
  EXPECT_EQ(cli({"mixing", "alpha=pi/2", "beta=2pi/3", "N=100", "epsilon=0.05", "horizon=50",
                 "output=" + d.string()})
                .code,
            3);
  EXPECT_EQ(cli({"simulate", "--help"}).code, 0);
}

TEST(Cli, ConfigFileWithOverride) {
  const auto d = scratch("config");
  std::ofstream(d / "run.conf") << "walk = two_site\nalpha = pi/2\nbeta = pi/2\nsteps = 3\n";
  const auto r = cli({"simulate", "--config", (d / "run.conf").string(), "steps=1",
                      "output=" + (d / "out.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto t = rows(slurp(d / "out.csv"));
  ASSERT_EQ(t.size(), 6u);
  EXPECT_EQ(t.back()[0], 1.0);
  EXPECT_EQ(t.back()[1], 2.0);
  EXPECT_NEAR(t.back()[2], 1.0, 1e-15);
}

TEST(Cli, SpectrumThetaColumn) {
  const double v0 = 0.75, a = std::asin(v0);
  std::ostringstream alpha, beta;
  alpha.precision(17);
  beta.precision(17);
  alpha << a;
  beta << oracle::pi - a;
  const auto r = cli({"spectrum", "alpha=" + alpha.str(), "beta=" + beta.str(), "kgrid=256"});
  ASSERT_EQ(r.code, 0);
  const auto t = rows(r.out);
  ASSERT_EQ(t.size(), 256u);
  for (const auto& row : t) {
    const double s = std::sin(row[0]);
    EXPECT_NEAR(row[1], std::acos(1 - 2 * v0 * v0 * s * s), 1e-7);
  }
  const auto c = cli({"spectrum", "alpha=pi/2", "beta=2pi/3", "topology=cycle", "N=20"});
  EXPECT_EQ(rows(c.out).size(), 10u);
}

TEST(Cli, ValidateThreeSiteFile) {
  const auto r = cli({"validate", std::string("tessellation=") + QWALK_DATA_DIR + "/three_site.tess"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("gaps: 2\n"), std::string::npos);
  EXPECT_NE(r.out.find("gaps: 0\n"), std::string::npos);
  EXPECT_NE(r.out.find("combined coverage: full"), std::string::npos);
  const auto b = cli({"validate", "walk=three_site"});
  EXPECT_EQ(b.out, r.out);
  const auto g = cli({"validate", "alpha=0.3", "beta=1.2", "phi1=0.4"});
  EXPECT_NE(g.out.find("generalized propagator: pass"), std::string::npos);
  const auto bad = scratch("badtess");
  std::ofstream(bad / "x.tess") << "period: 2\n0: (0:1,0) (1:1,0\n";
  EXPECT_EQ(cli({"validate", "tessellation=" + (bad / "x.tess").string()}).code, 2);
}

TEST(Cli, AsymptoticCsv) {
  const double a = std::asin(0.75);
  std::ostringstream alpha, beta;
  alpha.precision(17);
  beta.precision(17);
  alpha << a;
  beta << oracle::pi - a;
  const auto r = cli({"asymptotic", "alpha=" + alpha.str(), "beta=" + beta.str(), "steps=30",
                      "calibration=1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "v,rho_sim,rho_asym,rho_env");
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1 + 123);
}

TEST(Cli, MixingBundle) {
  const auto d = scratch("mixing");
  const auto r = cli({"mixing", "alpha=pi/2", "beta=2pi/3", "N=40,60", "epsilon=0.1",
                      "output=" + d.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"pi_N40.csv", "pi_N60.csv", "tvd_N40.csv", "tvd_N60.csv", "termf.csv",
                        "summary.csv"})
    EXPECT_TRUE(fs::exists(d / f)) << f;
  const auto tvd = rows(slurp(d / "tvd_N40.csv"));
  EXPECT_EQ(tvd.size(), 200u);
  EXPECT_NEAR(tvd[9][3], 10 * tvd[9][1] / 40, 1e-15);
  const auto pi = rows(slurp(d / "pi_N60.csv"));
  double s = 0;
  for (const auto& row : pi) s += row[1];
  EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(Cli, BinaryExitStatus) {
  const std::string bin = QWALK_BINARY;
  const int ok = std::system((bin + " simulate alpha=1 beta=1 steps=2 > /dev/null").c_str());
  const int bad = std::system((bin + " simulate topology=cycle alpha=1 beta=1 2> /dev/null").c_str());
  EXPECT_EQ(WEXITSTATUS(ok), 0);
  EXPECT_EQ(WEXITSTATUS(bad), 2);
}
