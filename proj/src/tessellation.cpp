#include "qwalk/tessellation.hpp"

#include <charconv>
#include <cstdlib>
#include <sstream>

#include "qwalk/csv.hpp"

namespace qwalk {

namespace {

class Cursor {
 public:
  Cursor(const std::string& line, std::size_t line_no) : s_(line), line_(line_no) {}

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ >= s_.size();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, pos_ + 1);
  }
  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  Site integer() {
    skip_ws();
    Site v = 0;
    const char* b = s_.data() + pos_;
    const char* e = s_.data() + s_.size();
    if (b < e && *b == '+') ++b;
    auto r = std::from_chars(b, e, v);
    if (r.ec != std::errc()) fail("expected an integer");
    pos_ = static_cast<std::size_t>(r.ptr - s_.data());
    return v;
  }
  double real() {
    skip_ws();
    double v = 0;
    const char* b = s_.data() + pos_;
    const char* e = s_.data() + s_.size();
    if (b < e && *b == '+') ++b;
    auto r = std::from_chars(b, e, v);
    if (r.ec != std::errc()) fail("expected a number");
    pos_ = static_cast<std::size_t>(r.ptr - s_.data());
    return v;
  }
  bool keyword(const std::string& word) {
    skip_ws();
    if (s_.compare(pos_, word.size(), word) == 0) {
      pos_ += word.size();
      return true;
    }
    return false;
  }
  std::size_t column() const { return pos_ + 1; }

 private:
  const std::string& s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

std::string join(const std::vector<Site>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(v[i]);
  }
  return v.empty() ? "none" : out;
}

}  // namespace

std::vector<Tessellation<double>> parse_tessellations(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  std::optional<Site> period;
  std::vector<Block<double>> blocks;
  std::vector<Tessellation<double>> out;
  auto finish = [&] {
    if (blocks.empty()) throw ParseError("no blocks", line_no, 1);
    out.emplace_back(std::move(blocks), *period);
    blocks.clear();
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
    if (Cursor probe(line, line_no); period && probe.keyword("period")) {
      finish();
      period.reset();
    }
    Cursor cur(line, line_no);
    if (cur.done()) continue;
    if (!period) {
      if (!cur.keyword("period")) cur.fail("expected 'period:' header");
      cur.expect(':');
      const Site p = cur.integer();
      if (p <= 0) cur.fail("period must be positive");
      if (!cur.done()) cur.fail("trailing characters after period");
      period = p;
      continue;
    }
    Block<double> blk;
    const Site base = cur.integer();
    cur.expect(':');
    while (!cur.done()) {
      cur.expect('(');
      const std::size_t col = cur.column();
      const Site off = cur.integer();
      cur.expect(':');
      const double re = cur.real();
      cur.expect(',');
      const double im = cur.real();
      cur.expect(')');
      for (Site s : blk.sites)
        if (s == base + off) throw ParseError("site repeated within block", line_no, col);
      blk.sites.push_back(base + off);
      blk.coeffs.emplace_back(re, im);
    }
    if (blk.sites.empty()) cur.fail("block has no entries");
    blocks.push_back(std::move(blk));
  }
  ++line_no;
  if (!period) throw ParseError("missing 'period:' header", line_no, 1);
  finish();
  return out;
}

Tessellation<double> parse_tessellation(const std::string& text) {
  auto all = parse_tessellations(text);
  if (all.size() != 1) throw ParseError("expected a single tessellation", 1, 1);
  return std::move(all.front());
}

std::string format_tessellation(const Tessellation<double>& t) {
  std::ostringstream out;
  out << "period: " << t.period() << '\n';
  for (const auto& blk : t.pattern()) {
    const Site base = blk.sites.front();
    out << base << ':';
    for (std::size_t j = 0; j < blk.sites.size(); ++j)
      out << " (" << blk.sites[j] - base << ':' << format_real(blk.coeffs[j].real())
          << ',' << format_real(blk.coeffs[j].imag()) << ')';
    out << '\n';
  }
  return out.str();
}

std::string describe(const TessellationDiagnostics& d) {
  std::ostringstream out;
  out << "period " << d.period << '\n'
      << "unit norms: " << (d.unit_norms ? "pass" : "FAIL")
      << " (max error " << format_real(d.max_norm_error) << ")\n"
      << "disjoint: " << (d.disjoint ? "pass" : "FAIL") << '\n'
      << "covered residues: " << join(d.covered) << '\n'
      << "gaps: " << join(d.gaps) << '\n';
  return out.str();
}

std::string describe(const PairDiagnostics& d) {
  std::ostringstream out;
  out << "[T0]\n" << describe(d.first) << "[T1]\n" << describe(d.second)
      << "[combined] period " << d.period << '\n'
      << "combined gaps: " << join(d.gaps) << '\n'
      << "combined coverage: " << (d.combined_covers_all() ? "full" : "incomplete") << '\n'
      << "overlap residues: " << join(d.overlap) << '\n';
  return out.str();
}

}  // namespace qwalk
