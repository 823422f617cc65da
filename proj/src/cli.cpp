#include <CLI11.hpp>

#include <fstream>
#include <sstream>

#include "qwalk/commands.hpp"
#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

struct Invocation {
  std::string config_file;
  std::vector<std::string> settings;
};

RunConfig load(const Invocation& inv) {
  RunConfig c;
  if (!inv.config_file.empty()) {
    std::ifstream in(inv.config_file, std::ios::binary);
    if (!in) throw ConfigError("config", "cannot read " + inv.config_file);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
      c = parse_config(ss.str(), c);
    } catch (const ParseError& e) {
      throw ConfigError("config", inv.config_file + ": " + e.what());
    }
  }
  for (const auto& s : inv.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(s, "expected key=value");
    apply_setting(c, s.substr(0, eq), s.substr(eq + 1));
  }
  return c;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete-time quantum walks on the line and on cycles"};
  app.require_subcommand(1);
  const char* names[] = {"simulate", "spectrum", "asymptotic", "mixing", "validate"};
  const char* help[] = {"PDF time series as t,site,prob",
                        "dispersion relation theta(k)",
                        "simulated vs asymptotic rescaled density",
                        "limiting distribution, TVD and mixing time on cycles",
                        "tessellation diagnostics"};
  Invocation inv[5];
  CLI::App* subs[5];
  for (int i = 0; i < 5; ++i) {
    subs[i] = app.add_subcommand(names[i], help[i]);
    subs[i]->add_option("--config", inv[i].config_file, "key=value config file");
    subs[i]->add_option("settings", inv[i].settings, "key=value overrides");
  }

  std::vector<std::string> argv_store{"qwalk"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    for (int i = 0; i < 5; ++i) {
      if (!subs[i]->parsed()) continue;
      const RunConfig c = load(inv[i]);
      switch (i) {
        case 0: cmd_simulate(c, out); break;
        case 1: cmd_spectrum(c, out); break;
        case 2: cmd_asymptotic(c, out, err); break;
        case 3: cmd_mixing(c, out, thread_count_from_env()); break;
        case 4: cmd_validate(c, out); break;
      }
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    err << "output error: " << e.what() << '\n';
    return 2;
  } catch (const InconclusiveError& e) {
    err << "inconclusive: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace qwalk
