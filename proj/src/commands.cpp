#include "qwalk/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "qwalk/asymptotics.hpp"
#include "qwalk/csv.hpp"
#include "qwalk/cycle.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/evolution.hpp"
#include "qwalk/spectral_line.hpp"
#include "qwalk/tessellation.hpp"

namespace qwalk {

namespace {

void emit(const std::string& path, std::ostream& out,
          const std::function<void(std::ostream&)>& writer) {
  if (path == "-") {
    writer(out);
    out.flush();
  } else {
    write_file_atomic(path, writer);
  }
}

template <typename State>
void pdf_rows(std::ostream& os, const State& s, Site first) {
  const auto p = pdf(s);
  for (Eigen::Index i = 0; i < p.size(); ++i)
    os << s.time() << ',' << first + static_cast<Site>(i) << ',' << format_real(p(i)) << '\n';
}

template <typename State, typename Step, typename First>
void simulate_rows(std::ostream& os, State s, std::int64_t steps, Step step, First first) {
  os << "t,site,prob\n";
  pdf_rows(os, s, first(s));
  for (std::int64_t t = 0; t < steps; ++t) {
    s = step(s);
    pdf_rows(os, s, first(s));
  }
}

CoinedLineState<double> coined_initial_line(InitialKind kind) {
  if (kind == InitialKind::delta_origin) return coined_origin_state<double>();
  AmplitudeVector<double> u(1), l(1);
  u(0) = 1.0 / std::sqrt(2.0);
  l(0) = std::complex<double>(0, 1.0 / std::sqrt(2.0));
  return CoinedLineState<double>(0, u, l);
}

CoinedCycleState<double> coined_initial_cycle(InitialKind kind, Site n) {
  AmplitudeVector<double> u = AmplitudeVector<double>::Zero(n), l = u;
  if (kind == InitialKind::delta_origin) {
    u(0) = 1.0;
  } else {
    u(0) = 1.0 / std::sqrt(2.0);
    l(0) = std::complex<double>(0, 1.0 / std::sqrt(2.0));
  }
  return CoinedCycleState<double>(u, l);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string residual_report(const GeneralizedResiduals& r) {
  std::ostringstream os;
  os << "generalized propagator: " << (r.passes() ? "pass" : "FAIL") << '\n'
     << "  completeness " << format_real(r.completeness) << '\n'
     << "  cross " << format_real(r.cross) << '\n'
     << "  orthogonality " << format_real(r.orthogonality) << '\n'
     << "  sum unitarity " << format_real(r.sum_unitarity) << '\n';
  return os.str();
}

}  // namespace

void cmd_simulate(const RunConfig& c, std::ostream& out) {
  validate_config(c, Command::simulate);
  const auto line_first = [](const auto& s) { return s.offset(); };
  const auto cycle_first = [](const auto&) { return Site(0); };
  emit(c.output, out, [&](std::ostream& os) {
    if (c.topology == Topology::line) {
      switch (c.walk) {
        case WalkKind::two_site: {
          const TwoSiteStencil<double> st(c.walk_params());
          simulate_rows(os, initial_line_state<double>(c.initial), c.steps,
                        [&](const auto& s) { return step_coinless2(s, st); }, line_first);
          break;
        }
        case WalkKind::three_site: {
          const auto w = three_site_walk<double>();
          simulate_rows(os, initial_line_state<double>(c.initial), c.steps,
                        [&](const auto& s) { return w.step(s); }, line_first);
          break;
        }
        case WalkKind::coined: {
          const auto hop = coined_hop<double>(c.coin_params());
          simulate_rows(os, coined_initial_line(c.initial), c.steps,
                        [&](const auto& s) { return step_hop(s, hop); }, line_first);
          break;
        }
      }
    } else {
      const Site n = c.cycle_length();
      switch (c.walk) {
        case WalkKind::two_site: {
          const TwoSiteStencil<double> st(c.walk_params());
          simulate_rows(os, initial_cycle_state<double>(c.initial, n), c.steps,
                        [&](const auto& s) { return step_coinless2(s, st); }, cycle_first);
          break;
        }
        case WalkKind::three_site: {
          const auto w = three_site_walk<double>();
          simulate_rows(os, initial_cycle_state<double>(c.initial, n), c.steps,
                        [&](const auto& s) { return w.step(s); }, cycle_first);
          break;
        }
        case WalkKind::coined: {
          const auto hop = coined_hop<double>(c.coin_params());
          simulate_rows(os, coined_initial_cycle(c.initial, n), c.steps,
                        [&](const auto& s) { return step_hop(s, hop); }, cycle_first);
          break;
        }
      }
    }
  });
}

void cmd_spectrum(const RunConfig& c, std::ostream& out) {
  validate_config(c, Command::spectrum);
  const WalkParams p = c.walk_params();
  if (c.topology == Topology::line) {
    const auto n = c.kgrid.value_or(256);
    if (n > std::numeric_limits<int>::max()) throw ConfigError("kgrid", "too large");
    emit(c.output, out, [&](std::ostream& os) { write_dispersion_csv(os, p, static_cast<int>(n)); });
    return;
  }
  const Site n = c.cycle_length();
  const CycleSpectrum s(n, p);
  emit(c.output, out, [&](std::ostream& os) {
    os << "k,theta,reA,imA,reB,imB\n";
    for (const auto& m : s.modes()) {
      const double k = 2.0 * kPi * static_cast<double>(m.k) / static_cast<double>(n);
      os << format_real(k) << ',' << format_real(m.theta) << ',' << format_real(m.A.real())
         << ',' << format_real(m.A.imag()) << ',' << format_real(m.B.real()) << ','
         << format_real(m.B.imag()) << '\n';
    }
  });
}

void cmd_asymptotic(const RunConfig& c, std::ostream& out, std::ostream& log) {
  validate_config(c, Command::asymptotic);
  if (c.initial != InitialKind::delta_origin)
    throw ConfigError("initial", "asymptotic form assumes initial = delta");
  const WalkParams p = c.walk_params();
  const double v0 = effective_velocity(p);
  const double vmax = c.vmax.value_or(0.6), width = c.bin.value_or(0.1);
  const TwoSiteStencil<double> st(p);
  const auto start = initial_line_state<double>(InitialKind::delta_origin);
  double cal = 1.0;
  if (c.calibration) {
    cal = *c.calibration;
  } else {
    constexpr std::int64_t kCalibrationTime = 200;
    const auto ref = evolve(start, kCalibrationTime,
                            [&](const auto& s) { return step_coinless2(s, st); });
    cal = calibrate_envelope(ref, kCalibrationTime, v0, vmax, width);
  }
  log << "calibration = " << format_real(cal) << '\n';
  const std::int64_t t = c.steps;
  const auto psi = evolve(start, t, [&](const auto& s) { return step_coinless2(s, st); });
  const double tt = static_cast<double>(t);
  emit(c.output, out, [&](std::ostream& os) {
    os << "v,rho_sim,rho_asym,rho_env\n";
    for (Site x = -(2 * t + 1); x <= 2 * t + 1; ++x) {
      const double v = static_cast<double>(x) / (2.0 * tt);
      os << format_real(v) << ',' << format_real(tt * std::norm(psi(x))) << ',';
      if (std::abs(v) < v0) {
        os << format_real(asymptotic_pdf(x, t, p, +1, cal)) << ','
           << format_real(cal * envelope(v, v0, EnvelopeKind::mean)) << '\n';
      } else {
        os << "nan,nan\n";
      }
    }
  });
}

void cmd_mixing(const RunConfig& c, std::ostream& out, unsigned threads) {
  validate_config(c, Command::mixing);
  namespace fs = std::filesystem;
  const fs::path dir(c.output);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string());

  const WalkParams p = c.walk_params();
  const double eps = *c.epsilon;
  struct Job {
    Site n = 0;
    std::int64_t horizon = 0, tau = 0;
    double last = 0.0;
    TermF terms;
    std::optional<std::string> error;
    bool inconclusive = false;
  };
  std::vector<Job> jobs(c.n_sites.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) jobs[i].n = c.n_sites[i];

  auto run = [&](Job& job) {
    try {
      const Site n = job.n;
      job.horizon = c.horizon.value_or(default_horizon(n, eps));
      const CycleSpectrum spec(n, p);
      const Eigen::VectorXd pi = limiting_pdf(spec);
      const auto series = tvd_series(n, p, job.horizon, pi);
      job.last = series.back();
      job.tau = mixing_time_from_series(series, eps);
      job.inconclusive = job.last >= eps / 2;
      if (spec.closed_form()) {
        job.terms = termf_decomposition(n, p);
      } else {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        job.terms = {nan, nan, nan};
      }
      const std::string tag = std::to_string(n);
      write_file_atomic((dir / ("pi_N" + tag + ".csv")).string(), [&](std::ostream& os) {
        os << "x,pi\n";
        for (Eigen::Index x = 0; x < pi.size(); ++x) os << x << ',' << format_real(pi(x)) << '\n';
      });
      write_file_atomic((dir / ("tvd_N" + tag + ".csv")).string(), [&](std::ostream& os) {
        os << "t,tvd,t_over_N,rescaled\n";
        const double nn = static_cast<double>(n);
        for (std::size_t i = 0; i < series.size(); ++i) {
          const double t = static_cast<double>(i + 1);
          os << i + 1 << ',' << format_real(series[i]) << ',' << format_real(t / nn) << ','
             << format_real(t * series[i] / nn) << '\n';
        }
      });
    } catch (const std::exception& e) {
      job.error = e.what();
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, jobs.size()));
  std::size_t next = 0;
  std::mutex m;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lock(m);
          if (next >= jobs.size()) return;
          i = next++;
        }
        run(jobs[i]);
      }
    });
  for (auto& th : pool) th.join();

  for (const auto& j : jobs)
    if (j.error) throw Error("N=" + std::to_string(j.n) + ": " + *j.error);

  write_file_atomic((dir / "termf.csv").string(), [&](std::ostream& os) {
    os << "N,term1,term2,term3\n";
    for (const auto& j : jobs)
      os << j.n << ',' << format_real(j.terms.term1) << ',' << format_real(j.terms.term2) << ','
         << format_real(j.terms.term3) << '\n';
  });
  const auto summary = [&](std::ostream& os) {
    os << "N,epsilon,horizon,tau,tvd_at_horizon,status\n";
    for (const auto& j : jobs)
      os << j.n << ',' << format_real(eps) << ',' << j.horizon << ',' << j.tau << ','
         << format_real(j.last) << ',' << (j.inconclusive ? "inconclusive" : "ok") << '\n';
  };
  write_file_atomic((dir / "summary.csv").string(), summary);
  summary(out);
  out.flush();
  for (const auto& j : jobs)
    if (j.inconclusive)
      throw InconclusiveError("N=" + std::to_string(j.n) + ": TVD at the horizon (" +
                                  format_real(j.last) + ") is not below epsilon/2",
                              j.last);
}

void cmd_validate(const RunConfig& c, std::ostream& out) {
  validate_config(c, Command::validate);
  std::vector<Tessellation<double>> ts;
  std::optional<GeneralizedResiduals> residuals;
  if (!c.tessellation.empty()) {
    for (const auto& path : c.tessellation) {
      try {
        for (auto& t : parse_tessellations(read_file(path))) ts.push_back(std::move(t));
      } catch (const ParseError& e) {
        throw ConfigError("tessellation", path + ": " + e.what());
      } catch (const ConstructionError& e) {
        throw ConfigError("tessellation", path + ": " + e.what());
      }
    }
    if (ts.size() > 2) throw ConfigError("tessellation", "expected one or two tessellations");
  } else if (c.walk == WalkKind::three_site) {
    auto [a, b] = three_site_tessellations<double>();
    ts = {a, b};
  } else {
    const WalkParams p = c.walk_params();
    auto [a, b] = two_site_tessellations<double>(p);
    ts = {a, b};
    const auto map = coinless_to_coined<double>(p);
    residuals = validate_generalized(to_generalized(map.hop));
  }
  emit(c.output, out, [&](std::ostream& os) {
    if (ts.size() == 1) os << describe(validate_tessellation(ts[0]));
    else os << describe(validate_pair(ts[0], ts[1]));
    if (residuals) os << residual_report(*residuals);
  });
}

unsigned thread_count_from_env() {
  const char* v = std::getenv("QWALK_THREADS");
  if (!v || !*v) return 1;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1) return 1;
  return static_cast<unsigned>(std::min(n, 256L));
}

}  // namespace qwalk
