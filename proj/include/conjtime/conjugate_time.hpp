#pragma once

#include <limits>
#include <string>
#include <string_view>

namespace conjtime {

enum class Verdict { kFinite, kNoneUpToHorizon, kCertifiedInfinite };

enum class Witness {
  kNone,
  kSignChange,  // det N changes sign across [t_lo, t_hi]
  kRankDrop,    // smallest singular value of N dips to zero without a sign change
  kBlowUp,      // Riccati solution left every bounded set
  kClosedForm,
};

std::string_view to_string(Verdict v);
std::string_view to_string(Witness w);

/// Outcome of a first-conjugate-time search.
struct ConjugateTimeResult {
  Verdict verdict = Verdict::kNoneUpToHorizon;
  double time = std::numeric_limits<double>::quiet_NaN();
  double t_lo = std::numeric_limits<double>::quiet_NaN();
  double t_hi = std::numeric_limits<double>::quiet_NaN();
  double horizon = std::numeric_limits<double>::quiet_NaN();
  Witness witness = Witness::kNone;
  /// Source of a CertifiedInfinite verdict.
  std::string certificate;
  /// Set when the search met a singular-value dip it could not confirm;
  /// the run should be repeated with tighter tolerances.
  bool flagged = false;
  std::string diagnostic;

  bool is_finite() const { return verdict == Verdict::kFinite; }

  /// Time value usable in inequalities: +inf unless Finite.
  double time_or_infinity() const {
    return is_finite() ? time : std::numeric_limits<double>::infinity();
  }

  static ConjugateTimeResult finite(double t, double lo, double hi, Witness w) {
    ConjugateTimeResult r;
    r.verdict = Verdict::kFinite;
    r.time = t;
    r.t_lo = lo;
    r.t_hi = hi;
    r.witness = w;
    return r;
  }
  static ConjugateTimeResult none_up_to(double horizon) {
    ConjugateTimeResult r;
    r.verdict = Verdict::kNoneUpToHorizon;
    r.horizon = horizon;
    return r;
  }
  static ConjugateTimeResult certified_infinite(std::string certificate) {
    ConjugateTimeResult r;
    r.verdict = Verdict::kCertifiedInfinite;
    r.certificate = std::move(certificate);
    return r;
  }
};

}  // namespace conjtime
