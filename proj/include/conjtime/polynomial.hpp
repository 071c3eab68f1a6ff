#pragma once

#include <vector>

namespace conjtime {

/// Real polynomial c[0] + c[1] x + ... + c[d] x^d.
class Polynomial {
 public:
  Polynomial() = default;
  /// Trailing exact zeros are dropped; an empty list is the zero polynomial.
  explicit Polynomial(std::vector<double> coefficients);

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<double>& coefficients() const { return c_; }
  double leading() const { return c_.empty() ? 0.0 : c_.back(); }

  double operator()(double x) const;
  Polynomial derivative() const;
  /// Largest absolute coefficient.
  double scale() const;
  /// Cauchy bound: every root satisfies |x| <= 1 + max |c_i / c_d|.
  double root_bound() const;

  /// Removes factors of x (exact zero constant terms); returns how many.
  int deflate_zero_roots();

 private:
  std::vector<double> c_;
};

/// Sturm sequence p, p', -rem(p, p'), ... Remainders whose coefficients
/// fall below relative_zero * scale(p) are treated as zero.
std::vector<Polynomial> sturm_sequence(const Polynomial& p, double relative_zero = 1e-12);

/// Number of sign changes of the sequence evaluated at x (zeros skipped).
int sign_changes(const std::vector<Polynomial>& sequence, double x);

struct RealRoot {
  double value = 0.0;
  /// |p'(value)| >= simplicity_threshold * scale(p) and no root of
  /// gcd(p, p') within 1e-6 (1 + |value|).
  bool simple = false;
  double derivative = 0.0;
};

/// Distinct real roots in (a, b], isolated by Sturm counting and refined by
/// bisection to width `tolerance`. Ascending order.
std::vector<RealRoot> real_roots(const Polynomial& p, double a, double b,
                                 double tolerance = 1e-13,
                                 double simplicity_threshold = 1e-9);

}  // namespace conjtime
