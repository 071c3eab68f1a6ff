#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "conjtime/conjugate_time.hpp"
#include "conjtime/jacobi.hpp"
#include "conjtime/polynomial.hpp"
#include "conjtime/young_diagram.hpp"

namespace conjtime {

/// Constant-curvature comparison model LQ(Y; Q).
class LqModel {
 public:
  /// Throws std::invalid_argument if Q is not n x n symmetric (1e-12).
  LqModel(YoungDiagram diagram, Matrix q);

  const YoungDiagram& diagram() const { return diagram_; }
  const Matrix& potential() const { return q_; }
  const StructuralMatrices& structural() const { return structural_; }
  int dimension() const { return diagram_.total_boxes(); }

  /// [[-G1, -Q], [G2, G1^T]]
  Matrix hamiltonian_matrix() const;

  bool is_riemannian() const { return diagram_.max_row_length() == 1; }
  /// kappa when Q == kappa * I exactly.
  std::optional<double> isotropic_value() const;

 private:
  YoungDiagram diagram_;
  Matrix q_;
  StructuralMatrices structural_;
};

/// LQ(kappa_1, ..., kappa_l): a single row of length l, Q = diag(kappas).
class DiagonalRowModel {
 public:
  /// Throws std::invalid_argument when kappas is empty or not finite.
  explicit DiagonalRowModel(std::vector<double> kappas);

  int length() const { return static_cast<int>(kappas_.size()); }
  const std::vector<double>& kappas() const { return kappas_; }
  LqModel to_model() const;

  /// p(s) = s^l - sum_{i<l} (-1)^(l-i) kappa_{l-i} s^i, so that
  /// P(x) = p(x^2) is the polynomial of the Bonnet-Myers condition.
  Polynomial finiteness_polynomial() const;

 private:
  std::vector<double> kappas_;
};

enum class Finiteness { kFinite, kInfinite, kNotCertified };
std::string_view to_string(Finiteness f);

struct FinitenessClassification {
  Finiteness verdict = Finiteness::kNotCertified;
  /// A simple negative root of p when Finite.
  std::optional<double> witness_root;
  /// Distinct negative roots of p (zero roots are ignored).
  std::vector<RealRoot> negative_roots;
  Polynomial polynomial;
};

/// Finite iff p has a simple negative root. For l <= 2 a failure is a
/// certificate of infinity; for l >= 3 it is reported as NotCertified.
FinitenessClassification classify_finiteness(const DiagonalRowModel& model);

/// Finite iff (k1 > 0 and 4 k2 > -k1^2) or (k1 <= 0 and k2 > 0).
Finiteness classify_finiteness_l2(double kappa1, double kappa2);

/// pi / sqrt(kappa) for Riemannian Q = kappa I (+inf when kappa <= 0) and
/// 2 pi / sqrt(kappa1) for LQ(kappa1, 0) with kappa1 > 0. Absent otherwise.
std::optional<double> closed_form_tc(const LqModel& model);
std::optional<double> closed_form_tc(const DiagonalRowModel& model);

struct LqOptions {
  JacobiOptions jacobi;
  ConjugateSearchOptions search;
  double horizon = 50.0;
};

/// Dense det N scan with R == Q, without any certificate shortcut.
ConjugateTimeResult lq_numeric_conjugate_time(const LqModel& model, const LqOptions& options = {});

/// CertifiedInfinite for Q = 0, for Riemannian Q = kappa I with kappa <= 0,
/// and for single-row diagonal models with l <= 2 that fail the finiteness
/// condition. Otherwise the numeric scan; a closed form, when available,
/// is cross-checked and a mismatch beyond 1e-6 relative flags the result.
ConjugateTimeResult lq_conjugate_time(const LqModel& model, const LqOptions& options = {});
ConjugateTimeResult lq_conjugate_time(const DiagonalRowModel& model, const LqOptions& options = {});

struct SpectrumEntry {
  std::complex<double> value;
  int multiplicity = 1;
  bool purely_imaginary = false;
};

/// Eigenvalues of the Hamiltonian matrix, clustered within
/// cluster_tolerance * (1 + |lambda|). Diagnostic only: Jordan structure is
/// not resolved numerically.
std::vector<SpectrumEntry> hamiltonian_spectrum(const LqModel& model,
                                                double cluster_tolerance = 1e-5);

}  // namespace conjtime
