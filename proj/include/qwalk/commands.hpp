#ifndef QWALK_COMMANDS_HPP
#define QWALK_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "qwalk/config.hpp"

namespace qwalk {

// output = "-" writes to `out`; mixing writes into the directory `output`.
void cmd_simulate(const RunConfig& c, std::ostream& out);
void cmd_spectrum(const RunConfig& c, std::ostream& out);
void cmd_asymptotic(const RunConfig& c, std::ostream& out, std::ostream& log);
void cmd_mixing(const RunConfig& c, std::ostream& out, unsigned threads = 1);
void cmd_validate(const RunConfig& c, std::ostream& out);

// Worker count from QWALK_THREADS, else 1.
unsigned thread_count_from_env();

// Entry point; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qwalk

#endif  // QWALK_COMMANDS_HPP
