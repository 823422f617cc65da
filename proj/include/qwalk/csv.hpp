#ifndef QWALK_CSV_HPP
#define QWALK_CSV_HPP

#include <functional>
#include <iosfwd>
#include <string>

#include "qwalk/walk_core.hpp"

namespace qwalk {

// Shortest decimal that round-trips to the same double.
std::string format_real(double value);

// site,re,im,prob
void write_state_csv(std::ostream& os, const LineState<double>& state);
void write_state_csv(std::ostream& os, const CycleState<double>& state);

// Write via a temporary file and rename. "-" writes to stdout.
void write_file_atomic(const std::string& path,
                       const std::function<void(std::ostream&)>& writer);

}  // namespace qwalk

#endif  // QWALK_CSV_HPP
