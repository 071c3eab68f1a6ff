#include "conjtime/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace conjtime {

Polynomial::Polynomial(std::vector<double> coefficients) : c_(std::move(coefficients)) {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial();
  std::vector<double> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
  return Polynomial(std::move(d));
}

double Polynomial::scale() const {
  double s = 0.0;
  for (double v : c_) s = std::max(s, std::abs(v));
  return s;
}

double Polynomial::root_bound() const {
  if (degree() < 1) return 0.0;
  double m = 0.0;
  for (int i = 0; i < degree(); ++i) m = std::max(m, std::abs(c_[i] / c_.back()));
  return 1.0 + m;
}

int Polynomial::deflate_zero_roots() {
  int k = 0;
  while (c_.size() > 1 && c_.front() == 0.0) {
    c_.erase(c_.begin());
    ++k;
  }
  return k;
}

namespace {

Polynomial remainder(const Polynomial& a, const Polynomial& b) {
  std::vector<double> r = a.coefficients();
  const std::vector<double>& d = b.coefficients();
  const int db = b.degree();
  for (int k = static_cast<int>(r.size()) - 1; k >= db; --k) {
    const double q = r[k] / d[db];
    for (int j = 0; j <= db; ++j) r[k - db + j] -= q * d[j];
    r[k] = 0.0;
  }
  r.resize(static_cast<std::size_t>(std::max(db, 0)));
  return Polynomial(std::move(r));
}

}  // namespace

std::vector<Polynomial> sturm_sequence(const Polynomial& p, double relative_zero) {
  if (p.is_zero()) throw std::invalid_argument("Sturm sequence of the zero polynomial");
  std::vector<Polynomial> seq{p};
  Polynomial d = p.derivative();
  if (d.is_zero()) return seq;
  seq.push_back(d);
  const double floor = relative_zero * p.scale();
  while (seq.back().degree() > 0) {
    Polynomial r = remainder(seq[seq.size() - 2], seq.back());
    if (r.scale() <= floor) break;
    std::vector<double> neg = r.coefficients();
    for (double& v : neg) v = -v;
    seq.emplace_back(std::move(neg));
  }
  return seq;
}

int sign_changes(const std::vector<Polynomial>& sequence, double x) {
  int changes = 0;
  double prev = 0.0;
  for (const Polynomial& q : sequence) {
    const double v = q(x);
    if (v == 0.0) continue;
    if (prev != 0.0 && (v > 0.0) != (prev > 0.0)) ++changes;
    prev = v;
  }
  return changes;
}

std::vector<RealRoot> real_roots(const Polynomial& p, double a, double b, double tolerance,
                                 double simplicity_threshold) {
  if (!(a < b)) throw std::invalid_argument("root search interval must satisfy a < b");
  std::vector<RealRoot> out;
  if (p.degree() < 1) return out;
  const std::vector<Polynomial> seq = sturm_sequence(p);
  const Polynomial dp = p.derivative();
  auto count = [&](double lo, double hi) { return sign_changes(seq, lo) - sign_changes(seq, hi); };

  struct Interval {
    double lo, hi;
    int n;
  };
  std::vector<Interval> stack{{a, b, count(a, b)}};
  std::vector<Interval> isolated;
  while (!stack.empty()) {
    Interval iv = stack.back();
    stack.pop_back();
    if (iv.n <= 0) continue;
    if (iv.n == 1 || iv.hi - iv.lo <= tolerance) {
      isolated.push_back(iv);
      continue;
    }
    const double mid = 0.5 * (iv.lo + iv.hi);
    stack.push_back({mid, iv.hi, count(mid, iv.hi)});
    stack.push_back({iv.lo, mid, count(iv.lo, mid)});
  }

  // The last Sturm element is gcd(p, p'); multiple roots of p are its roots.
  std::vector<Polynomial> gcd_seq;
  if (seq.size() >= 2 && seq.back().degree() >= 1) gcd_seq = sturm_sequence(seq.back());
  auto near_multiple = [&](double x) {
    if (gcd_seq.empty()) return false;
    const double w = 1e-6 * (1.0 + std::abs(x));
    return sign_changes(gcd_seq, x - w) - sign_changes(gcd_seq, x + w) > 0;
  };

  const double scale = p.scale();
  for (Interval iv : isolated) {
    while (iv.hi - iv.lo > tolerance) {
      const double mid = 0.5 * (iv.lo + iv.hi);
      if (mid <= iv.lo || mid >= iv.hi) break;
      if (count(iv.lo, mid) > 0) {
        iv.hi = mid;
      } else {
        iv.lo = mid;
      }
    }
    RealRoot r;
    r.value = 0.5 * (iv.lo + iv.hi);
    r.derivative = dp(r.value);
    r.simple = std::abs(r.derivative) >= simplicity_threshold * scale && !near_multiple(r.value);
    out.push_back(r);
  }
  std::sort(out.begin(), out.end(),
            [](const RealRoot& x, const RealRoot& y) { return x.value < y.value; });
  return out;
}

}  // namespace conjtime
