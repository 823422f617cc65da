#include "qwalk/csv.hpp"

#include "qwalk/errors.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <system_error>

namespace qwalk {

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

template <typename State>
void write_rows(std::ostream& os, const State& state, Site first, Site last) {
  os << "site,re,im,prob\n";
  for (Site x = first; x < last; ++x) {
    const auto a = state(x);
    os << x << ',' << format_real(a.real()) << ',' << format_real(a.imag())
       << ',' << format_real(std::norm(a)) << '\n';
  }
}

}  // namespace

void write_state_csv(std::ostream& os, const LineState<double>& state) {
  write_rows(os, state, state.offset(), state.end());
}

void write_state_csv(std::ostream& os, const CycleState<double>& state) {
  write_rows(os, state, 0, state.n_sites());
}

void write_file_atomic(const std::string& path,
                       const std::function<void(std::ostream&)>& writer) {
  if (path == "-") {
    writer(std::cout);
    std::cout.flush();
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(path);
  std::random_device rd;
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    writer(out);
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot write " + target.string());
  }
}

}  // namespace qwalk
