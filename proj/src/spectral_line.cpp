#include "qwalk/spectral_line.hpp"

#include <ostream>

#include "qwalk/csv.hpp"

namespace qwalk {

namespace {

// Representative of angle in (-pi, pi].
double principal(double angle) {
  double a = std::remainder(angle, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

bool same_angle(double a, double b, double tol) {
  return std::abs(principal(a - b)) <= tol;
}

}  // namespace

std::vector<double> degenerate_k(const WalkParams& p, double tol) {
  const double phi = principal(p.phi1 + p.phi2);
  std::vector<double> candidates;
  if (same_angle(p.alpha, p.beta, tol)) {
    candidates.push_back((kPi - phi) / 2);
    candidates.push_back((-kPi - phi) / 2);
  }
  if (same_angle(p.alpha + p.beta, kPi, tol)) {
    candidates.push_back(-phi / 2);
    candidates.push_back((2 * kPi - phi) / 2);
    candidates.push_back((-2 * kPi - phi) / 2);
  }
  std::vector<double> out;
  for (double k : candidates) {
    if (k < -kPi - tol || k > kPi + tol) continue;
    k = std::clamp(k, -kPi, kPi);
    bool dup = false;
    for (double q : out) dup = dup || std::abs(q - k) <= tol;
    if (!dup) out.push_back(k);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void write_dispersion_csv(std::ostream& os, const WalkParams& p, int n) {
  if (n <= 0) throw DomainError("grid size must be positive");
  os << "k,theta,reA,imA,reB,imB\n";
  for (int j = 0; j < n; ++j) {
    const double k = -kPi + 2.0 * kPi * j / n;
    const auto r = reduced2(k, p);
    os << format_real(k) << ',' << format_real(r.theta) << ',' << format_real(r.A.real())
       << ',' << format_real(r.A.imag()) << ',' << format_real(r.B.real()) << ','
       << format_real(r.B.imag()) << '\n';
  }
}

}  // namespace qwalk
