#include "conjtime/lq_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace conjtime {

LqModel::LqModel(YoungDiagram diagram, Matrix q)
    : diagram_(std::move(diagram)), q_(std::move(q)) {
  const int n = diagram_.total_boxes();
  if (q_.rows() != n || q_.cols() != n) {
    throw std::invalid_argument("potential Q must be " + std::to_string(n) + " x " +
                                std::to_string(n) + " for diagram " + diagram_.to_string());
  }
  if (!q_.allFinite()) throw std::invalid_argument("potential Q has non-finite entries");
  if ((q_ - q_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + q_.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("potential Q must be symmetric");
  }
  q_ = symmetrized(q_);
  structural_ = build_structural_matrices(diagram_);
}

Matrix LqModel::hamiltonian_matrix() const {
  const int n = dimension();
  Matrix h(2 * n, 2 * n);
  h.topLeftCorner(n, n) = -structural_.gamma1;
  h.topRightCorner(n, n) = -q_;
  h.bottomLeftCorner(n, n) = structural_.gamma2;
  h.bottomRightCorner(n, n) = structural_.gamma1.transpose();
  return h;
}

std::optional<double> LqModel::isotropic_value() const {
  const double k = q_(0, 0);
  if ((q_ - k * Matrix::Identity(q_.rows(), q_.cols())).cwiseAbs().maxCoeff() != 0.0) {
    return std::nullopt;
  }
  return k;
}

DiagonalRowModel::DiagonalRowModel(std::vector<double> kappas) : kappas_(std::move(kappas)) {
  if (kappas_.empty()) throw std::invalid_argument("LQ(kappa_1..kappa_l) needs l >= 1");
  if (static_cast<int>(kappas_.size()) > YoungDiagram::kMaxBoxes) {
    throw std::invalid_argument("row length exceeds the supported diagram size");
  }
  for (double k : kappas_) {
    if (!std::isfinite(k)) throw std::invalid_argument("kappas must be finite");
  }
}

LqModel DiagonalRowModel::to_model() const {
  const Vector d = Eigen::Map<const Vector>(kappas_.data(), length());
  return LqModel(YoungDiagram::single_row(length()), d.asDiagonal().toDenseMatrix());
}

Polynomial DiagonalRowModel::finiteness_polynomial() const {
  const int l = length();
  std::vector<double> c(l + 1, 0.0);
  c[l] = 1.0;
  for (int i = 0; i < l; ++i) {
    const double sign = ((l - i) % 2 == 0) ? 1.0 : -1.0;
    c[i] = -sign * kappas_[l - i - 1] + 0.0;  // + 0.0 drops the sign of zero
  }
  return Polynomial(std::move(c));
}

std::string_view to_string(Finiteness f) {
  switch (f) {
    case Finiteness::kFinite: return "finite";
    case Finiteness::kInfinite: return "infinite";
    case Finiteness::kNotCertified: return "not_certified";
  }
  return "unknown";
}

Finiteness classify_finiteness_l2(double k1, double k2) {
  const bool finite = (k1 > 0.0 && 4.0 * k2 > -k1 * k1) || (k1 <= 0.0 && k2 > 0.0);
  return finite ? Finiteness::kFinite : Finiteness::kInfinite;
}

FinitenessClassification classify_finiteness(const DiagonalRowModel& model) {
  FinitenessClassification out;
  out.polynomial = model.finiteness_polynomial();
  Polynomial p = out.polynomial;
  p.deflate_zero_roots();
  if (p.degree() >= 1) {
    const double bound = p.root_bound();
    const double gap = 1e-12 * std::max(1.0, bound);
    if (bound > gap) {
      for (const RealRoot& r : real_roots(p, -bound - 1.0, -gap)) {
        if (r.value < 0.0) out.negative_roots.push_back(r);
      }
    }
  }
  for (auto it = out.negative_roots.rbegin(); it != out.negative_roots.rend(); ++it) {
    if (it->simple) {
      out.witness_root = it->value;
      break;
    }
  }
  if (model.length() <= 2) {
    const double k1 = model.kappas()[0];
    const double k2 = model.length() == 2 ? model.kappas()[1] : 0.0;
    out.verdict = model.length() == 1 ? (k1 > 0.0 ? Finiteness::kFinite : Finiteness::kInfinite)
                                      : classify_finiteness_l2(k1, k2);
    if (out.verdict == Finiteness::kFinite && !out.witness_root) {
      // Exact rule and root isolation disagree only within rounding of a
      // near-double root; use the closed-form root.
      const double disc = k1 * k1 + 4.0 * k2;
      out.witness_root = model.length() == 1 ? -k1 : 0.5 * (-k1 - std::sqrt(std::max(disc, 0.0)));
    }
    return out;
  }
  out.verdict = out.witness_root ? Finiteness::kFinite : Finiteness::kNotCertified;
  return out;
}

std::optional<double> closed_form_tc(const LqModel& model) {
  if (model.is_riemannian()) {
    const auto k = model.isotropic_value();
    if (!k) return std::nullopt;
    if (*k <= 0.0) return std::numeric_limits<double>::infinity();
    return std::numbers::pi / std::sqrt(*k);
  }
  const Matrix& q = model.potential();
  if (model.diagram().num_rows() == 1 && model.dimension() == 2 && q(0, 1) == 0.0 &&
      q(1, 1) == 0.0 && q(0, 0) > 0.0) {
    return 2.0 * std::numbers::pi / std::sqrt(q(0, 0));
  }
  return std::nullopt;
}

std::optional<double> closed_form_tc(const DiagonalRowModel& model) {
  return closed_form_tc(model.to_model());
}

ConjugateTimeResult lq_numeric_conjugate_time(const LqModel& model, const LqOptions& options) {
  const JacobiTrajectory traj = integrate_jacobi(
      model.structural(), CurvatureField::constant(model.potential()), options.horizon,
      options.jacobi);
  return first_conjugate_time(traj, options.search);
}

namespace {

bool is_single_row_diagonal(const LqModel& model) {
  if (model.diagram().num_rows() != 1) return false;
  const Matrix& q = model.potential();
  return (q - Matrix(q.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
}

}  // namespace

ConjugateTimeResult lq_conjugate_time(const LqModel& model, const LqOptions& options) {
  if (model.potential().cwiseAbs().maxCoeff() == 0.0) {
    return ConjugateTimeResult::certified_infinite("zero-potential");
  }
  if (model.is_riemannian()) {
    const auto k = model.isotropic_value();
    if (k && *k <= 0.0) return ConjugateTimeResult::certified_infinite("riemannian-nonpositive");
  }
  if (is_single_row_diagonal(model) && model.dimension() <= 2) {
    const Vector d = model.potential().diagonal();
    const DiagonalRowModel row(std::vector<double>(d.data(), d.data() + d.size()));
    if (classify_finiteness(row).verdict == Finiteness::kInfinite) {
      return ConjugateTimeResult::certified_infinite("finiteness-polynomial");
    }
  }
  ConjugateTimeResult r = lq_numeric_conjugate_time(model, options);
  if (const auto exact = closed_form_tc(model); exact && std::isfinite(*exact)) {
    const double got = r.time_or_infinity();
    if (*exact <= options.horizon && !(std::abs(got - *exact) <= 1e-6 * *exact)) {
      r.flagged = true;
      r.diagnostic = "numeric conjugate time " + std::to_string(got) +
                     " disagrees with the closed form " + std::to_string(*exact);
    }
  }
  return r;
}

ConjugateTimeResult lq_conjugate_time(const DiagonalRowModel& model, const LqOptions& options) {
  return lq_conjugate_time(model.to_model(), options);
}

std::vector<SpectrumEntry> hamiltonian_spectrum(const LqModel& model, double cluster_tolerance) {
  Eigen::EigenSolver<Matrix> solver(model.hamiltonian_matrix(), false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigenvalue computation of the Hamiltonian matrix failed");
  }
  std::vector<std::complex<double>> values(solver.eigenvalues().data(),
                                           solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(values.begin(), values.end(), [](auto a, auto b) {
    return a.imag() != b.imag() ? a.imag() < b.imag() : a.real() < b.real();
  });

  // Single-linkage clustering; a cluster is replaced by its mean.
  std::vector<std::vector<std::complex<double>>> clusters;
  std::vector<bool> used(values.size(), false);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::complex<double>> c{values[i]};
    used[i] = true;
    for (std::size_t k = 0; k < c.size(); ++k) {
      for (std::size_t j = 0; j < values.size(); ++j) {
        if (!used[j] && std::abs(values[j] - c[k]) <= cluster_tolerance * (1.0 + std::abs(c[k]))) {
          used[j] = true;
          c.push_back(values[j]);
        }
      }
    }
    clusters.push_back(std::move(c));
  }

  std::vector<SpectrumEntry> out;
  for (const auto& c : clusters) {
    std::complex<double> mean = 0.0;
    for (auto v : c) mean += v;
    mean /= static_cast<double>(c.size());
    SpectrumEntry e;
    e.value = mean;
    e.multiplicity = static_cast<int>(c.size());
    e.purely_imaginary = std::abs(mean.real()) <= 1e-9 * (1.0 + std::abs(mean));
    out.push_back(e);
  }
  std::sort(out.begin(), out.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) {
    return a.value.imag() != b.value.imag() ? a.value.imag() < b.value.imag()
                                            : a.value.real() < b.value.real();
  });
  return out;
}

}  // namespace conjtime
