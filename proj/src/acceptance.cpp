#include "conjtime/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "conjtime/comparison.hpp"
#include "conjtime/lie3d.hpp"
#include "conjtime/lq_models.hpp"
#include "conjtime/riccati.hpp"

namespace conjtime {
namespace {

constexpr double kPi = std::numbers::pi;

CriterionResult start(int id, const std::string& title) {
  CriterionResult r;
  r.id = id;
  r.title = title;
  return r;
}

struct DetectorCase {
  std::string label;
  YoungDiagram diagram;
  Matrix q;
  double horizon;
};

struct Context {
  std::mt19937_64 rng;
  std::vector<DetectorCase> detector_cases;

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  Matrix uniform_matrix(int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = uniform(-1.0, 1.0);
    return m;
  }
  Matrix random_symmetric(int n) { return symmetrized(uniform_matrix(n, n)); }
  Matrix random_psd(int n) {
    const Matrix a = uniform_matrix(n, n);
    return a * a.transpose();
  }
};

bool rel_close(double got, double want, double rel) {
  return std::abs(got - want) <= rel * std::abs(want);
}

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 4) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  bool passed() const { return failed_ == 0 && checks_ > 0; }
  std::string summary(const std::string& extra = "") const {
    std::ostringstream os;
    os << (checks_ - failed_) << "/" << checks_ << " checks";
    if (!extra.empty()) os << "; " << extra;
    for (const auto& f : failures_) os << "; FAILED " << f;
    return os.str();
  }

 private:
  int checks_ = 0;
  int failed_ = 0;
  std::vector<std::string> failures_;
};

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

// The chi = 0 numeric path integrates diag(h0^2 + kappa, 0) on the single-row diagram.
CriterionResult chi0_exactness(Context& ctx, int id, const std::string& title, double kappa,
                               const std::vector<double>& h0s, const std::vector<double>& none_h0s) {
  CriterionResult out = start(id, title);
  Checker c;
  const ContactStructure3D s(0.0, kappa);
  Lie3dOptions numeric;
  numeric.chi0_closed_form = false;
  double worst = 0.0;
  for (double h0 : h0s) {
    const double want = 2.0 * kPi / std::sqrt(h0 * h0 + kappa);
    const CovectorState init{h0, 1.0, 0.0};
    const ConjugateTimeResult exact = conjugate_time_3d(s, init, 100.0);
    const ConjugateTimeResult num = conjugate_time_3d(s, init, 100.0, numeric);
    c.expect(exact.is_finite() && rel_close(exact.time, want, 1e-6), "closed form h0=" + fmt("%g", h0));
    c.expect(num.is_finite() && rel_close(num.time, want, 1e-6), "numeric h0=" + fmt("%g", h0));
    if (num.is_finite()) worst = std::max(worst, std::abs(num.time - want) / want);
    ctx.detector_cases.push_back({title + " h0=" + fmt("%g", h0), YoungDiagram::single_row(2),
                                  diag2(h0 * h0 + kappa, 0.0), 100.0});
  }
  for (double h0 : none_h0s) {
    const CovectorState init{h0, 1.0, 0.0};
    const ConjugateTimeResult num = conjugate_time_3d(s, init, 100.0, numeric);
    const ConjugateTimeResult exact = conjugate_time_3d(s, init, 100.0);
    c.expect(num.verdict == Verdict::kNoneUpToHorizon, "numeric none h0=" + fmt("%g", h0));
    c.expect(!exact.is_finite(), "closed form infinite h0=" + fmt("%g", h0));
    ctx.detector_cases.push_back({title + " none h0=" + fmt("%g", h0), YoungDiagram::single_row(2),
                                  diag2(h0 * h0 + kappa, 0.0), 100.0});
  }
  out.passed = c.passed();
  out.detail = c.summary("max rel err " + fmt("%.2e", worst));
  return out;
}

CriterionResult criterion1(Context& ctx) {
  return chi0_exactness(ctx, 1, "Heisenberg exactness", 0.0, {0.5, 1.0, 2.0, 4.0}, {});
}

CriterionResult criterion2(Context& ctx) {
  CriterionResult su2 = chi0_exactness(ctx, 2, "SU(2)/SL(2) exactness", 1.0, {0.0, 1.0, 2.0}, {});
  CriterionResult sl2 =
      chi0_exactness(ctx, 2, "SU(2)/SL(2) exactness", -1.0, {std::sqrt(2.0), 2.0}, {0.0, 1.0});
  CriterionResult out = start(2, "SU(2)/SL(2) exactness");
  out.passed = su2.passed && sl2.passed;
  out.detail = "SU(2) " + su2.detail + " | SL(2) " + sl2.detail;
  return out;
}

CriterionResult criterion3(Context& ctx) {
  CriterionResult out = start(3, "LQ closed forms");
  Checker c;
  double worst = 0.0;
  auto check = [&](const LqModel& m, double want, const std::string& label) {
    const ConjugateTimeResult r = lq_numeric_conjugate_time(m);
    const bool ok = r.is_finite() && rel_close(r.time, want, 1e-6);
    c.expect(ok, label);
    if (r.is_finite()) worst = std::max(worst, std::abs(r.time - want) / want);
    const auto closed = closed_form_tc(m);
    c.expect(closed && rel_close(*closed, want, 1e-15), label + " closed form");
    c.expect(!lq_conjugate_time(m).flagged, label + " consistency");
    ctx.detector_cases.push_back({"LQ " + label, m.diagram(), m.potential(), 50.0});
  };
  for (int n = 1; n <= 3; ++n) {
    for (double k : {1.0, 4.0}) {
      check(LqModel(YoungDiagram::riemannian(n), k * Matrix::Identity(n, n)), kPi / std::sqrt(k),
            "riemannian n=" + std::to_string(n) + " k=" + fmt("%g", k));
    }
  }
  for (double k1 : {1.0, 9.0}) {
    check(DiagonalRowModel({k1, 0.0}).to_model(), 2.0 * kPi / std::sqrt(k1),
          "LQ(" + fmt("%g", k1) + ",0)");
  }
  out.passed = c.passed();
  out.detail = c.summary("max rel err " + fmt("%.2e", worst));
  return out;
}

double distance_to_parabola(double k1, double k2) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 40000; ++i) {
    const double x = 4.0 * i / 40000.0;
    best = std::min(best, std::hypot(k1 - x, k2 + 0.25 * x * x));
  }
  return best;
}

CriterionResult criterion4(Context& ctx) {
  CriterionResult out = start(4, "l=2 dichotomy grid");
  Checker c;
  int used = 0, finite = 0;
  for (double k1 : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    for (double k2 : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      if (std::abs(k2) < 0.05) continue;
      if (k1 > 0.0 && distance_to_parabola(k1, k2) < 0.05) continue;
      ++used;
      const DiagonalRowModel row({k1, k2});
      const bool exact = classify_finiteness_l2(k1, k2) == Finiteness::kFinite;
      const ConjugateTimeResult scan = lq_numeric_conjugate_time(row.to_model());
      finite += exact;
      c.expect(exact == scan.is_finite(),
               "(" + fmt("%g", k1) + "," + fmt("%g", k2) + ")");
      c.expect(classify_finiteness(row).verdict == classify_finiteness_l2(k1, k2),
               "classifiers agree at (" + fmt("%g", k1) + "," + fmt("%g", k2) + ")");
      ctx.detector_cases.push_back({"grid (" + fmt("%g", k1) + "," + fmt("%g", k2) + ")",
                                    YoungDiagram::single_row(2), diag2(k1, k2), 50.0});
    }
  }
  out.passed = c.passed();
  out.detail = c.summary(std::to_string(used) + " grid points, " + std::to_string(finite) + " finite");
  return out;
}

CriterionResult criterion5(Context& ctx) {
  CriterionResult out = start(5, "Comparison inequality");
  Checker c;
  const YoungDiagram y = YoungDiagram::single_row(2);
  const Matrix qplus = diag2(1.0, 0.0);
  const CurvatureBoundSpec spec = CurvatureBoundSpec::sectional_lower(y, qplus);
  const double horizon = 10.0;
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    const Matrix r = qplus + ctx.random_psd(2);
    const ComparisonReport rep = verify_comparison(CurvatureField::constant(r), spec, horizon);
    const bool ok = rep.geodesic.is_finite() && rep.geodesic.time <= 2.0 * kPi + 1e-5 &&
                    rep.verdict == ComparisonVerdict::kPass;
    c.expect(ok, "random field " + std::to_string(i));
    if (rep.geodesic.is_finite()) worst = std::max(worst, rep.geodesic.time - 2.0 * kPi);
    ctx.detector_cases.push_back({"comparison " + std::to_string(i), y, r, horizon});
  }
  const ComparisonReport eq = verify_comparison(CurvatureField::constant(qplus), spec, horizon);
  const double err = eq.geodesic.is_finite() ? std::abs(eq.geodesic.time - 2.0 * kPi) : INFINITY;
  c.expect(err <= 1e-6 && eq.verdict == ComparisonVerdict::kPass, "equality case");
  ctx.detector_cases.push_back({"comparison equality", y, qplus, horizon});
  out.passed = c.passed();
  out.detail = c.summary("max t_c - 2pi " + fmt("%.3g", worst) + ", equality err " + fmt("%.2e", err));
  return out;
}

CriterionResult criterion6(Context& ctx) {
  CriterionResult out = start(6, "Flat certificate");
  Checker c;
  const double horizon = 100.0;
  for (int i = 0; i < 50; ++i) {
    const YoungDiagram y = i % 2 == 0 ? YoungDiagram::single_row(2) : YoungDiagram::riemannian(3);
    const int n = y.total_boxes();
    const Matrix r = -ctx.random_psd(n);
    const JacobiTrajectory traj =
        integrate_jacobi(build_structural_matrices(y), CurvatureField::constant(r), horizon);
    const ConjugateTimeResult res = first_conjugate_time(traj);
    c.expect(res.verdict == Verdict::kNoneUpToHorizon && !res.flagged,
             "field " + std::to_string(i) + " on " + y.to_string());
    ctx.detector_cases.push_back({"flat " + std::to_string(i), y, r, horizon});
  }
  out.passed = c.passed();
  out.detail = c.summary("rows (2) and (1,1,1), horizon 100");
  return out;
}

struct FlowSample {
  ContactStructure3D s;
  CovectorState init;
};

std::vector<FlowSample> conservation_flows(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi), h0(-3.0, 3.0), kappa(-1.0, 1.0);
  const double chis[] = {0.5, 1.0, 2.0};
  std::vector<FlowSample> flows;
  for (int i = 0; i < 20; ++i) {
    const double th = angle(rng);
    flows.push_back({ContactStructure3D(chis[i % 3], kappa(rng)),
                     CovectorState{h0(rng), std::cos(th), std::sin(th)}});
  }
  return flows;
}

CriterionResult criterion7(Context& ctx, std::uint64_t seed) {
  (void)ctx;
  CriterionResult out = start(7, "Conservation");
  Checker c;
  double worst_h = 0.0, worst_e = 0.0, worst_bound = 0.0;
  for (const FlowSample& f : conservation_flows(seed)) {
    const ExtremalTrajectory tr = extremal_flow(f.s, f.init, 20.0);
    const double chi = f.s.chi(), e0 = f.init.energy(chi);
    double dh = 0.0, de = 0.0, bound = 0.0;
    for (double t : tr.grid_times()) {
      const CovectorState h = tr.at(t);
      dh = std::max(dh, std::abs(h.hamiltonian() - 0.5));
      de = std::max(de, std::abs(h.energy(chi) - e0));
      const double z = h.h0 * h.h0;
      bound = std::max({bound, 2.0 * chi * (e0 - 1.0) - z, z - 2.0 * chi * e0});
    }
    dh = std::max(dh, tr.max_hamiltonian_drift());
    de = std::max(de, tr.max_energy_drift());
    c.expect(dh <= 1e-9 && de <= 1e-9 && bound <= 1e-9, "flow chi=" + fmt("%g", chi));
    worst_h = std::max(worst_h, dh);
    worst_e = std::max(worst_e, de);
    worst_bound = std::max(worst_bound, bound);
  }
  out.passed = c.passed();
  out.detail = c.summary("max |H-1/2| " + fmt("%.2e", worst_h) + ", max |E-E0| " +
                         fmt("%.2e", worst_e) + ", max h0 bound excess " + fmt("%.2e", worst_bound));
  return out;
}

CriterionResult criterion8(std::uint64_t seed) {
  CriterionResult out = start(8, "Curvature identity");
  Checker c;
  double worst = 0.0;
  for (const FlowSample& f : conservation_flows(seed)) {
    const ExtremalTrajectory tr = extremal_flow(f.s, f.init, 20.0);
    const double e0 = f.init.energy(f.s.chi());
    double err = 0.0;
    for (double t : tr.grid_times()) {
      const CovectorState h = tr.at(t);
      const RicciPair a = curvature_along(f.s, h);
      const RicciPair b = curvature_energy_form(f.s, h.h0, e0);
      err = std::max({err, std::abs(a.r11 - b.r11), std::abs(a.r22 - b.r22)});
    }
    c.expect(err <= 1e-10, "flow chi=" + fmt("%g", f.s.chi()) + " err " + fmt("%.2e", err));
    worst = std::max(worst, err);
  }
  out.passed = c.passed();
  out.detail = c.summary("max |difference| " + fmt("%.2e", worst));
  return out;
}

CriterionResult criterion9(Context& ctx) {
  CriterionResult out = start(9, "Energy threshold at desk scale");
  Checker c;
  const double chi = 1.0, kappa = 0.0;
  const double eb = ebar(chi, kappa);
  // Quadratic-root oracle: 4 E^2 - 228 E + 145.
  const double oracle = (228.0 + std::sqrt(228.0 * 228.0 - 16.0 * 145.0)) / 8.0;
  c.expect(std::abs(eb - oracle) <= 1e-12 * oracle && std::abs(eb - 56.357) < 5e-4, "E bar value");
  auto disc = [&](double e) {
    const auto k = ricci_bounds_egrande(chi, kappa, e);
    return 4.0 * k[1] + k[0] * k[0];
  };
  c.expect(disc(57.0) > 0.0 && disc(56.0) < 0.0, "sign of 4 k2 + k1^2 around E bar");

  const ContactStructure3D s(chi, kappa);
  const double energies[] = {1.01 * eb, 1.5 * eb, 2.0 * eb};
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 20; ++i) {
    const double e = energies[i % 3];
    const double h2 = ctx.uniform(-1.0, 1.0);
    const int s0 = ctx.uniform(0.0, 1.0) < 0.5 ? -1 : 1;
    const int s1 = ctx.uniform(0.0, 1.0) < 0.5 ? -1 : 1;
    const CovectorState init = CovectorState::from_energy(chi, e, h2, s0, s1);
    const auto k = ricci_bounds_egrande(chi, kappa, e);
    const ConjugateTimeResult model = lq_conjugate_time(DiagonalRowModel({k[0], k[1]}));
    if (!model.is_finite()) {
      c.expect(false, "model LQ(k1,k2) finite at E=" + fmt("%g", e));
      continue;
    }
    const ConjugateTimeResult geo = conjugate_time_3d(s, init, model.time + 1.0);
    c.expect(geo.is_finite() && geo.time <= model.time + 1e-4,
             "covector " + std::to_string(i) + " E=" + fmt("%g", e));
    if (geo.is_finite()) worst = std::max(worst, geo.time - model.time);
  }
  out.passed = c.passed();
  out.detail = c.summary("E bar " + fmt("%.6f", eb) + ", max t_c - t_c(k1,k2) " + fmt("%.3g", worst));
  return out;
}

CriterionResult criterion10(Context& ctx) {
  CriterionResult out = start(10, "Riccati property suites");
  Checker c;
  double worst_order = std::numeric_limits<double>::infinity();

  // Riccati comparison: half regular data with random coefficients, half
  // limit data with Jacobi coefficients R1 <= R2.
  const std::vector<YoungDiagram> three = {YoungDiagram({1, 1, 1}), YoungDiagram({2, 1}),
                                           YoungDiagram({3})};
  for (int i = 0; i < 20; ++i) {
    RiccatiOrderingReport rep;
    if (i % 2 == 0) {
      const Matrix m2 = ctx.random_symmetric(6);
      const Matrix m1 = m2 + ctx.random_psd(6);
      ComparisonInitialData init;
      init.kind = ComparisonInitialData::Kind::kRegular;
      init.second = ctx.random_symmetric(3);
      init.first = init.second + ctx.random_psd(3);
      rep = riccati_comparison_check([m1](double) { return m1; }, [m2](double) { return m2; },
                                     init, 0.0, 1.0);
    } else {
      const YoungDiagram& y = three[(i / 2) % 3];
      const StructuralMatrices s = build_structural_matrices(y);
      const Matrix r1 = ctx.random_symmetric(3);
      const Matrix r2 = r1 + ctx.random_psd(3);
      ComparisonInitialData init;
      init.kind = ComparisonInitialData::Kind::kLimit;
      init.first = Matrix::Zero(3, 3);
      init.second = Matrix::Zero(3, 3);
      rep = riccati_comparison_check(
          jacobi_riccati_coefficients(s, CurvatureField::constant(r1)),
          jacobi_riccati_coefficients(s, CurvatureField::constant(r2)), init, 0.0, 3.0);
    }
    c.expect(rep.status == RiccatiOrderingReport::Status::kHolds && rep.min_margin >= -1e-8,
             "Riccati pair " + std::to_string(i));
    worst_order = std::min(worst_order, rep.min_margin);
  }

  double worst_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 200; ++i) {
    const int r = 1 + static_cast<int>(ctx.uniform(0.0, 4.0));
    const int l = 1 + static_cast<int>(ctx.uniform(0.0, 3.0));
    std::vector<Matrix> xs, ys;
    for (int a = 0; a < r; ++a) {
      xs.push_back(ctx.uniform_matrix(l, l));
      ys.push_back(ctx.uniform_matrix(l, l));
    }
    const double m = min_eigenvalue(matrix_cauchy_schwarz_gap(xs, ys));
    c.expect(m >= -1e-10, "Cauchy-Schwarz instance " + std::to_string(i));
    worst_gap = std::min(worst_gap, m);
  }

  const std::vector<YoungDiagram> small = {YoungDiagram({1}),    YoungDiagram({2}),
                                           YoungDiagram({3}),    YoungDiagram({1, 1}),
                                           YoungDiagram({2, 1}), YoungDiagram({3, 1}),
                                           YoungDiagram({2, 2}), YoungDiagram({3, 2, 1})};
  double worst_increase = 0.0;
  for (int i = 0; i < 10; ++i) {
    const YoungDiagram& y = small[static_cast<std::size_t>(ctx.uniform(0.0, 1.0) * small.size())];
    const Matrix q = 2.0 * ctx.random_symmetric(y.total_boxes());
    const MonotonicityReport rep =
        riccati_monotonicity_check(build_structural_matrices(y), q, 5.0);
    c.expect(rep.holds, "monotone V on " + y.to_string());
    worst_increase = std::max(worst_increase, rep.worst_increase);
  }
  out.passed = c.passed();
  out.detail = c.summary("min ordering margin " + fmt("%.2e", worst_order) + ", min gap eig " +
                         fmt("%.2e", worst_gap) + ", max V increase " + fmt("%.2e", worst_increase));
  return out;
}

CriterionResult criterion11(const Context& ctx) {
  CriterionResult out = start(11, "Detector cross-validation");
  Checker c;
  const ConjugateSearchOptions search;
  const double allowed = 10.0 * search.refinement_tolerance;
  double worst = 0.0;
  for (const DetectorCase& dc : ctx.detector_cases) {
    const StructuralMatrices s = build_structural_matrices(dc.diagram);
    const CurvatureField field = CurvatureField::constant(dc.q);
    const ConjugateTimeResult jac = first_conjugate_time(integrate_jacobi(s, field, dc.horizon), search);
    const ConjugateTimeResult ric = integrate_riccati_limit_ic(s, field, dc.horizon).conjugate;
    bool ok = jac.verdict == ric.verdict;
    if (ok && jac.is_finite()) {
      const double d = std::abs(jac.time - ric.time);
      worst = std::max(worst, d);
      ok = d <= allowed;
    }
    c.expect(ok, dc.label + " (" + std::string(to_string(jac.verdict)) + " " +
                     fmt("%.12g", jac.time) + " vs " + std::string(to_string(ric.verdict)) + " " +
                     fmt("%.12g", ric.time) + ")");
  }
  out.passed = c.passed();
  out.detail = c.summary(std::to_string(ctx.detector_cases.size()) + " inputs, max |dt| " +
                         fmt("%.2e", worst) + " (allowed " + fmt("%.0e", allowed) + ")");
  return out;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const CriterionCallback& on_result) {
  Context ctx{std::mt19937_64(options.seed), {}};
  std::vector<CriterionResult> results;
  auto run = [&](int id, const std::string& title, auto&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = body();
    } catch (const std::exception& e) {
      r = start(id, title);
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (on_result) on_result(r);
    results.push_back(r);
  };
  run(1, "Heisenberg exactness", [&] { return criterion1(ctx); });
  run(2, "SU(2)/SL(2) exactness", [&] { return criterion2(ctx); });
  run(3, "LQ closed forms", [&] { return criterion3(ctx); });
  run(4, "l=2 dichotomy grid", [&] { return criterion4(ctx); });
  run(5, "Comparison inequality", [&] { return criterion5(ctx); });
  run(6, "Flat certificate", [&] { return criterion6(ctx); });
  run(7, "Conservation", [&] { return criterion7(ctx, options.seed); });
  run(8, "Curvature identity", [&] { return criterion8(options.seed); });
  run(9, "Energy threshold at desk scale", [&] { return criterion9(ctx); });
  run(10, "Riccati property suites", [&] { return criterion10(ctx); });
  run(11, "Detector cross-validation", [&] { return criterion11(ctx); });
  return results;
}

std::string format_criterion(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.title << ": " << r.detail << " ("
     << fmt("%.2f", r.seconds) << " s)";
  return os.str();
}

}  // namespace conjtime
