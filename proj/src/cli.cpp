#include "conjtime/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>

#include "conjtime/acceptance.hpp"
#include "conjtime/comparison.hpp"
#include "conjtime/lie3d.hpp"
#include "conjtime/lq_models.hpp"
#include "conjtime/serialization.hpp"

namespace conjtime {
namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

constexpr const char* kFooter = R"(CSV output (--format csv; written to --output, or stdout when absent):
  lq-tc            verdict,tc,t_lo,t_hi,witness,certificate,flagged,closed_form_tc
  lq-classify      l,kappas,verdict,witness_root,negative_roots
  lie3d-tc         t,h0,h1,h2,R11,R22,detN   (one row per Jacobi grid point)
  lie3d-sweep      index,chi,kappa,E,h0,h1,h2,verdict,tc,t_lo,t_hi,witness,flagged,ebar,error
  compare-verify   verdict,direction,tc_geodesic,tc_model,margin,hypothesis_margin
  selftest         id,title,passed,detail
Empty cells mean "not applicable"; infinite times are written as inf.
Sweep points that fail keep their row with verdict "error" or "invalid".

Lists (sweep parameters, --kappas) are "a,b,c" or "start:stop:count".
Matrices (--Q, --R) are "a,b;c,d" or [[a,b],[c,d]].
--config reads key = value lines (keys are long flag names, # starts a comment);
flags given on the command line take precedence.

Exit codes: 0 success, 1 usage error, 2 vacuous verification (hypothesis
violated), 3 numerical failure or failed check.)";

double parse_double(const std::string& text, const std::string& what) {
  const std::string s = [&] {
    const auto b = text.find_first_not_of(" \t");
    const auto e = text.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : text.substr(b, e - b + 1);
  }();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw UsageError(what + ": cannot parse \"" + text + "\" as a number");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += csv_escape(cells[i]);
  }
  return line + "\n";
}

double scalar(const std::optional<std::string>& v, const std::string& name) {
  if (!v) throw UsageError("--" + name + " is required");
  return parse_double(*v, "--" + name);
}

std::optional<double> optional_scalar(const std::optional<std::string>& v, const std::string& name) {
  if (!v) return std::nullopt;
  return parse_double(*v, "--" + name);
}

std::vector<double> list_or(const std::optional<std::string>& v, std::vector<double> fallback) {
  return v ? parse_number_list(*v) : std::move(fallback);
}

int parse_sign(const std::optional<std::string>& v, const std::string& name) {
  if (!v) return 1;
  const double s = parse_double(*v, "--" + name);
  if (s != 1.0 && s != -1.0) throw UsageError("--" + name + " must be 1 or -1");
  return static_cast<int>(s);
}

void reject(const RunConfig& cfg, std::initializer_list<std::pair<const char*, bool>> unused) {
  for (const auto& [name, present] : unused) {
    if (present) throw UsageError("--" + std::string(name) + " is not used by " + cfg.subcommand);
  }
}

LqOptions lq_options(const RunConfig& cfg) {
  LqOptions o;
  o.jacobi.tol = cfg.tol;
  o.search.refinement_tolerance = cfg.refinement;
  o.horizon = cfg.horizon;
  return o;
}

Lie3dOptions lie3d_options(const RunConfig& cfg) {
  Lie3dOptions o;
  o.jacobi.tol = cfg.tol;
  o.search.refinement_tolerance = cfg.refinement;
  return o;
}

struct CovectorInput {
  std::optional<double> energy, h0, h1, h2;
  int h0_sign = 1;
  int h1_sign = 1;
};

CovectorState make_covector(double chi, const CovectorInput& in) {
  if (in.energy) {
    if (in.h0 || in.h1) throw UsageError("--E excludes --h0 and --h1");
    if (!(chi > 0.0)) throw UsageError("--E needs chi > 0");
    return CovectorState::from_energy(chi, *in.energy, in.h2.value_or(0.0), in.h0_sign,
                                      in.h1_sign);
  }
  if (!in.h0) throw UsageError("give either --h0 or --E");
  CovectorState s;
  s.h0 = *in.h0;
  if (in.h1 && in.h2) {
    s.h1 = *in.h1;
    s.h2 = *in.h2;
  } else if (in.h1) {
    s.h1 = *in.h1;
    s.h2 = std::sqrt(std::max(0.0, 1.0 - s.h1 * s.h1));
  } else {
    s.h2 = in.h2.value_or(0.0);
    s.h1 = in.h1_sign * std::sqrt(std::max(0.0, 1.0 - s.h2 * s.h2));
  }
  s.require_length_parametrized();
  return s;
}

CovectorInput covector_input(const RunConfig& cfg) {
  CovectorInput in;
  in.energy = optional_scalar(cfg.energy, "E");
  in.h0 = optional_scalar(cfg.h0, "h0");
  in.h1 = optional_scalar(cfg.h1, "h1");
  in.h2 = optional_scalar(cfg.h2, "h2");
  in.h0_sign = parse_sign(cfg.h0_sign, "h0-sign");
  in.h1_sign = parse_sign(cfg.h1_sign, "h1-sign");
  return in;
}

Json covector_json(const ContactStructure3D& s, const CovectorState& c) {
  Json j;
  j["chi"] = s.chi();
  j["kappa"] = s.kappa();
  j["h0"] = c.h0;
  j["h1"] = c.h1;
  j["h2"] = c.h2;
  if (s.chi() > 0.0) j["E"] = c.energy(s.chi());
  return j;
}

class Output {
 public:
  Output(const RunConfig& cfg, std::ostream& out) : out_(&out) {
    if (!cfg.output.empty() && cfg.output != "-") {
      file_ = std::make_unique<std::ofstream>(cfg.output);
      if (!*file_) throw UsageError("cannot open output file " + cfg.output);
      out_ = file_.get();
    }
  }
  std::ostream& stream() { return *out_; }
  void json(const Json& j) { *out_ << j.dump(2) << "\n"; }

 private:
  std::ostream* out_;
  std::unique_ptr<std::ofstream> file_;
};

bool csv(const RunConfig& cfg) { return cfg.format == "csv"; }

std::vector<std::string> result_cells(const ConjugateTimeResult& r) {
  const bool fin = r.is_finite();
  return {std::string(to_string(r.verdict)), fin ? number(r.time) : "",
          fin ? number(r.t_lo) : "", fin ? number(r.t_hi) : "",
          fin ? std::string(to_string(r.witness)) : "", r.certificate,
          r.flagged ? "true" : "false"};
}

int cmd_lq_tc(const RunConfig& cfg, std::ostream& out) {
  reject(cfg, {{"chi", cfg.chi.has_value()}, {"E", cfg.energy.has_value()}});
  const LqOptions opts = lq_options(cfg);
  ConjugateTimeResult result;
  Json model_json;
  std::optional<double> closed;
  if (cfg.kappas) {
    if (cfg.rows || cfg.q) throw UsageError("--kappas excludes --rows and --Q");
    const DiagonalRowModel model(parse_number_list(*cfg.kappas));
    if (cfg.l && parse_double(*cfg.l, "--l") != model.length()) {
      throw UsageError("--l does not match the number of kappas");
    }
    result = lq_conjugate_time(model, opts);
    closed = closed_form_tc(model);
    model_json = to_json(model);
  } else {
    if (!cfg.rows || !cfg.q) throw UsageError("lq-tc needs --kappas, or --rows with --Q");
    const LqModel model(YoungDiagram::parse(*cfg.rows), parse_matrix(*cfg.q));
    result = lq_conjugate_time(model, opts);
    closed = closed_form_tc(model);
    model_json = to_json(model);
  }
  Output o(cfg, out);
  if (csv(cfg)) {
    o.stream() << csv_row({"verdict", "tc", "t_lo", "t_hi", "witness", "certificate", "flagged",
                           "closed_form_tc"});
    auto cells = result_cells(result);
    cells.push_back(closed ? number(*closed) : "");
    o.stream() << csv_row(cells);
  } else {
    Json j = to_json(result);
    if (closed) j["closed_form_tc"] = std::isfinite(*closed) ? Json(*closed) : Json(nullptr);
    j["model"] = model_json;
    o.json(j);
  }
  return kExitOk;
}

int cmd_lq_classify(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.kappas) throw UsageError("lq-classify needs --kappas");
  const DiagonalRowModel model(parse_number_list(*cfg.kappas));
  if (cfg.l && parse_double(*cfg.l, "--l") != model.length()) {
    throw UsageError("--l does not match the number of kappas");
  }
  const FinitenessClassification c = classify_finiteness(model);
  Output o(cfg, out);
  if (csv(cfg)) {
    std::string kappas, roots;
    for (double k : model.kappas()) kappas += (kappas.empty() ? "" : ";") + number(k);
    for (const RealRoot& r : c.negative_roots) roots += (roots.empty() ? "" : ";") + number(r.value);
    o.stream() << csv_row({"l", "kappas", "verdict", "witness_root", "negative_roots"});
    o.stream() << csv_row({std::to_string(model.length()), kappas,
                           std::string(to_string(c.verdict)),
                           c.witness_root ? number(*c.witness_root) : "", roots});
  } else {
    Json j;
    j["verdict"] = std::string(to_string(c.verdict));
    j["l"] = model.length();
    j["kappas"] = model.kappas();
    const Json details = to_json(c);
    for (const auto& [key, value] : details.items()) {
      if (key != "verdict") j[key] = value;
    }
    o.json(j);
  }
  return kExitOk;
}

/// Rows t, h0, h1, h2, R11, R22, detN on the Jacobi grid.
void write_trajectory_csv(const ContactStructure3D& s, const CovectorState& init, double horizon,
                          const Lie3dOptions& opts, std::ostream& os) {
  const StructuralMatrices structural = build_structural_matrices(YoungDiagram::single_row(2));
  std::shared_ptr<const ExtremalTrajectory> flow;
  CurvatureField field = CurvatureField::constant(Matrix::Zero(2, 2));
  if (s.chi() > 0.0) {
    flow = std::make_shared<const ExtremalTrajectory>(extremal_flow(s, init, horizon, opts.flow));
    field = curvature_field_along(s, flow);
  } else {
    Matrix q = Matrix::Zero(2, 2);
    q(0, 0) = curvature_along(s, init).r11;
    field = CurvatureField::constant(q);
  }
  const JacobiTrajectory traj = integrate_jacobi(structural, field, horizon, opts.jacobi);
  os << csv_row({"t", "h0", "h1", "h2", "R11", "R22", "detN"});
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double t = traj.times[k];
    CovectorState st = init;
    if (flow) {
      st = flow->at(t);
    } else {
      // chi = 0: h0 is constant and (h1, h2) rotates with angular speed h0.
      const double c = std::cos(init.h0 * t), sn = std::sin(init.h0 * t);
      st.h1 = init.h1 * c + init.h2 * sn;
      st.h2 = -init.h1 * sn + init.h2 * c;
    }
    const RicciPair ric = curvature_along(s, st);
    os << csv_row({number(t), number(st.h0), number(st.h1), number(st.h2), number(ric.r11),
                   number(ric.r22), number(traj.raw_det_n(k))});
  }
}

int cmd_lie3d_tc(const RunConfig& cfg, std::ostream& out) {
  reject(cfg, {{"rows", cfg.rows.has_value()}, {"Q", cfg.q.has_value()},
               {"kappas", cfg.kappas.has_value()}});
  const ContactStructure3D s(scalar(cfg.chi, "chi"), scalar(cfg.kappa, "kappa"));
  const CovectorState init = make_covector(s.chi(), covector_input(cfg));
  const Lie3dOptions opts = lie3d_options(cfg);
  Output o(cfg, out);
  if (csv(cfg)) {
    write_trajectory_csv(s, init, cfg.horizon, opts, o.stream());
    return kExitOk;
  }
  const ConjugateTimeResult r = conjugate_time_3d(s, init, cfg.horizon, opts);
  Json j = to_json(r);
  j["input"] = covector_json(s, init);
  if (s.chi() > 0.0) j["input"]["ebar"] = ebar(s.chi(), s.kappa());
  o.json(j);
  return kExitOk;
}

struct SweepPoint {
  double chi = 0.0, kappa = 0.0;
  CovectorInput covector;
};

struct SweepResult {
  std::string verdict;
  std::optional<CovectorState> state;
  ConjugateTimeResult result;
  std::optional<double> ebar;
  std::string error;
};

SweepResult evaluate(const SweepPoint& p, const RunConfig& cfg) {
  SweepResult out;
  try {
    const ContactStructure3D s(p.chi, p.kappa);
    if (p.chi > 0.0) out.ebar = ebar(p.chi, p.kappa);
    out.state = make_covector(p.chi, p.covector);
  } catch (const std::exception& e) {
    out.verdict = "invalid";
    out.error = e.what();
    return out;
  }
  try {
    out.result = conjugate_time_3d(ContactStructure3D(p.chi, p.kappa), *out.state, cfg.horizon,
                                   lie3d_options(cfg));
    out.verdict = std::string(to_string(out.result.verdict));
  } catch (const std::exception& e) {
    out.verdict = "error";
    out.error = e.what();
  }
  return out;
}

int cmd_lie3d_sweep(const RunConfig& cfg, std::ostream& out) {
  if (cfg.h1) throw UsageError("lie3d-sweep derives h1 from h2; --h1 is not accepted");
  if (cfg.energy && cfg.h0) throw UsageError("--E excludes --h0");
  if (!cfg.energy && !cfg.h0) throw UsageError("lie3d-sweep needs --E or --h0 values");
  const std::vector<double> chis = list_or(cfg.chi, {});
  const std::vector<double> kappas = list_or(cfg.kappa, {});
  if (chis.empty() || kappas.empty()) throw UsageError("lie3d-sweep needs --chi and --kappa values");
  const std::vector<double> firsts = parse_number_list(cfg.energy ? *cfg.energy : *cfg.h0);
  const std::vector<double> h2s = list_or(cfg.h2, {0.0});
  const int h0_sign = parse_sign(cfg.h0_sign, "h0-sign");
  const int h1_sign = parse_sign(cfg.h1_sign, "h1-sign");

  std::vector<SweepPoint> points;
  for (double chi : chis)
    for (double kappa : kappas)
      for (double v : firsts)
        for (double h2 : h2s) {
          SweepPoint p{chi, kappa, {}};
          (cfg.energy ? p.covector.energy : p.covector.h0) = v;
          p.covector.h2 = h2;
          p.covector.h0_sign = h0_sign;
          p.covector.h1_sign = h1_sign;
          points.push_back(p);
        }

  std::vector<SweepResult> results(points.size());
  const int jobs = std::max(
      1, std::min<int>(cfg.jobs > 0 ? cfg.jobs
                                    : std::min(8u, std::max(1u, std::thread::hardware_concurrency())),
                       static_cast<int>(points.size())));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < points.size(); i = next++) results[i] = evaluate(points[i], cfg);
    });
  }
  for (auto& t : workers) t.join();

  Output o(cfg, out);
  if (csv(cfg)) {
    o.stream() << csv_row({"index", "chi", "kappa", "E", "h0", "h1", "h2", "verdict", "tc", "t_lo",
                           "t_hi", "witness", "flagged", "ebar", "error"});
  }
  Json rows = Json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const SweepPoint& p = points[i];
    const SweepResult& r = results[i];
    const bool solved = r.verdict != "invalid" && r.verdict != "error";
    const bool fin = solved && r.result.is_finite();
    std::optional<double> energy;
    if (r.state && p.chi > 0.0) energy = r.state->energy(p.chi);
    if (csv(cfg)) {
      o.stream() << csv_row(
          {std::to_string(i), number(p.chi), number(p.kappa), energy ? number(*energy) : "",
           r.state ? number(r.state->h0) : "", r.state ? number(r.state->h1) : "",
           r.state ? number(r.state->h2) : "", r.verdict, fin ? number(r.result.time) : "",
           fin ? number(r.result.t_lo) : "", fin ? number(r.result.t_hi) : "",
           fin ? std::string(to_string(r.result.witness)) : "",
           solved ? (r.result.flagged ? "true" : "false") : "", r.ebar ? number(*r.ebar) : "",
           r.error});
      continue;
    }
    Json j;
    j["index"] = i;
    j["chi"] = p.chi;
    j["kappa"] = p.kappa;
    if (energy) j["E"] = *energy;
    if (r.state) {
      j["h0"] = r.state->h0;
      j["h1"] = r.state->h1;
      j["h2"] = r.state->h2;
    }
    if (r.ebar) j["ebar"] = *r.ebar;
    if (solved) {
      const Json result = to_json(r.result);
      for (const auto& [key, value] : result.items()) j[key] = value;
    } else {
      j["verdict"] = r.verdict;
      j["error"] = r.error;
    }
    rows.push_back(std::move(j));
  }
  if (!csv(cfg)) o.json(Json{{"horizon", cfg.horizon}, {"points", std::move(rows)}});
  return kExitOk;
}

CurvatureBoundSpec bound_spec(const RunConfig& cfg, const YoungDiagram& diagram) {
  const std::string kind = cfg.bound.value_or("sectional-lower");
  if (kind == "sectional-lower" || kind == "sectional-upper") {
    if (!cfg.q) throw UsageError("--bound " + kind + " needs --Q");
    const Matrix q = parse_matrix(*cfg.q);
    return kind == "sectional-lower" ? CurvatureBoundSpec::sectional_lower(diagram, q)
                                     : CurvatureBoundSpec::sectional_upper(diagram, q);
  }
  if (kind == "ricci") {
    if (!cfg.kappas) throw UsageError("--bound ricci needs --kappas");
    const int level = cfg.level ? static_cast<int>(parse_double(*cfg.level, "--level")) : 0;
    return CurvatureBoundSpec::ricci_level(diagram, level, parse_number_list(*cfg.kappas));
  }
  throw UsageError("--bound must be sectional-lower, sectional-upper or ricci");
}

int cmd_compare_verify(const RunConfig& cfg, std::ostream& out) {
  std::optional<CurvatureField> field;
  std::optional<YoungDiagram> diagram;
  if (cfg.rows) diagram = YoungDiagram::parse(*cfg.rows);
  const int sources = cfg.field.has_value() + cfg.r.has_value() + cfg.chi.has_value();
  if (sources != 1) throw UsageError("give exactly one of --field, --R or a 3D geodesic (--chi ...)");
  if (cfg.field) {
    std::ifstream in(*cfg.field);
    if (!in) throw UsageError("cannot read " + *cfg.field);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::exception& e) {
      throw UsageError(std::string("invalid field JSON: ") + e.what());
    }
    field = curvature_field_from_json(j);
  } else if (cfg.r) {
    field = CurvatureField::constant(parse_matrix(*cfg.r));
  } else {
    const ContactStructure3D s(scalar(cfg.chi, "chi"), scalar(cfg.kappa, "kappa"));
    const CovectorState init = make_covector(s.chi(), covector_input(cfg));
    if (!diagram) diagram = YoungDiagram::single_row(2);
    if (s.chi() > 0.0) {
      field = curvature_field_along(s, std::make_shared<const ExtremalTrajectory>(extremal_flow(
                                           s, init, cfg.horizon, lie3d_options(cfg).flow)));
    } else {
      Matrix q = Matrix::Zero(2, 2);
      q(0, 0) = curvature_along(s, init).r11;
      field = CurvatureField::constant(q);
    }
  }
  if (!diagram) throw UsageError("--rows is required with --field or --R");

  ComparisonOptions opts;
  opts.lq = lq_options(cfg);
  const CurvatureBoundSpec spec = bound_spec(cfg, *diagram);
  const ComparisonReport report = verify_comparison(*field, spec, cfg.horizon, opts);
  Output o(cfg, out);
  if (csv(cfg)) {
    o.stream() << csv_row({"verdict", "direction", "tc_geodesic", "tc_model", "margin",
                           "hypothesis_margin"});
    const Json j = to_json(report);
    o.stream() << csv_row({j["verdict"].get<std::string>(), j["direction"].get<std::string>(),
                           number(report.geodesic.time_or_infinity()),
                           number(report.model.time_or_infinity()), number(report.margin),
                           number(report.hypothesis_margin)});
  } else {
    Json j = to_json(report);
    j["bound"] = std::string(to_string(spec.kind));
    o.json(j);
  }
  switch (report.verdict) {
    case ComparisonVerdict::kVacuous: return kExitVacuous;
    case ComparisonVerdict::kFail: return kExitNumerical;
    default: return kExitOk;
  }
}

int cmd_selftest(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  AcceptanceOptions opts;
  opts.seed = cfg.seed;
  const auto results =
      run_acceptance(opts, [&](const CriterionResult& r) { err << format_criterion(r) << std::endl; });
  const bool all = std::all_of(results.begin(), results.end(),
                               [](const CriterionResult& r) { return r.passed; });
  Output o(cfg, out);
  if (csv(cfg)) {
    o.stream() << csv_row({"id", "title", "passed", "detail"});
    for (const auto& r : results) {
      o.stream() << csv_row({std::to_string(r.id), r.title, r.passed ? "true" : "false", r.detail});
    }
  } else {
    Json list = Json::array();
    for (const auto& r : results) {
      list.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
    }
    o.json(Json{{"seed", cfg.seed}, {"passed", all}, {"criteria", std::move(list)}});
  }
  return all ? kExitOk : kExitNumerical;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

/// key = value lines turned into "--key value" arguments.
std::vector<std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::vector<std::string> args;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty() || key == "config") {
      throw UsageError(path + ":" + std::to_string(number) + ": invalid key");
    }
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

std::optional<std::string> find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text) {
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("range must be start:stop:count, got \"" + text + "\"");
    const double a = parse_double(parts[0], "range start");
    const double b = parse_double(parts[1], "range stop");
    const double n = parse_double(parts[2], "range count");
    if (!(n >= 1.0) || n != std::floor(n)) throw UsageError("range count must be a positive integer");
    if (n == 1.0 && a != b) throw UsageError("a range with one point needs start == stop");
    std::vector<double> out;
    for (int i = 0; i < static_cast<int>(n); ++i) {
      out.push_back(n == 1.0 ? a : a + (b - a) * i / (n - 1.0));
    }
    return out;
  }
  std::vector<double> out;
  for (const std::string& p : split(text, ',')) out.push_back(parse_double(p, "list entry"));
  if (out.empty()) throw UsageError("empty list");
  return out;
}

Matrix parse_matrix(const std::string& text) {
  const std::string t = trim(text);
  if (!t.empty() && t.front() == '[') {
    try {
      return matrix_from_json(Json::parse(t));
    } catch (const Json::exception& e) {
      throw UsageError(std::string("invalid matrix JSON: ") + e.what());
    }
  }
  std::vector<std::vector<double>> rows;
  for (const std::string& r : split(t, ';')) {
    std::vector<double> row;
    for (const std::string& x : split(r, ',')) row.push_back(parse_double(x, "matrix entry"));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw UsageError("matrix rows must have equal length");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw UsageError("empty matrix");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

int run_cli(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Conjugate times along sub-Riemannian geodesics", "conjtime"};
  app.footer(kFooter);
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::string config_path;
  app.add_option("--config", config_path, "key = value file; command-line flags take precedence");
  app.add_option("--rel", cfg.tol.rel, "Relative tolerance of the Jacobi/Riccati integrators")
      ->check(CLI::PositiveNumber);
  app.add_option("--abs", cfg.tol.abs, "Absolute tolerance of the Jacobi/Riccati integrators")
      ->check(CLI::PositiveNumber);
  app.add_option("--refine", cfg.refinement, "Final bracket width for conjugate times")
      ->check(CLI::PositiveNumber);
  app.add_option("--horizon", cfg.horizon, "Search horizon (default 50)")
      ->check(CLI::PositiveNumber);
  app.add_option("--output", cfg.output, "Output file (default stdout)");
  app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", cfg.seed, "Seed for selftest property suites");
  app.add_option("--jobs", cfg.jobs, "Sweep worker threads (default min(cores, 8))")
      ->check(CLI::NonNegativeNumber);

  app.add_option("--rows", cfg.rows, "Young diagram row lengths, e.g. 2,1");
  app.add_option("--Q", cfg.q, "Constant potential / sectional bound matrix");
  app.add_option("--kappas", cfg.kappas, "kappa_1,...,kappa_l");
  app.add_option("--l", cfg.l, "Row length; must match the number of kappas");
  app.add_option("--level", cfg.level, "Level index for --bound ricci (default 0)");
  app.add_option("--bound", cfg.bound, "sectional-lower (default), sectional-upper or ricci");
  app.add_option("--field", cfg.field, "Curvature field JSON file for compare-verify");
  app.add_option("--R", cfg.r, "Constant curvature matrix for compare-verify");
  app.add_option("--chi", cfg.chi, "3D invariant chi >= 0 (list in sweeps)");
  app.add_option("--kappa", cfg.kappa, "3D invariant kappa (list in sweeps)");
  app.add_option("--h0", cfg.h0, "Initial h0 (list in sweeps)");
  app.add_option("--h1", cfg.h1, "Initial h1 (default sqrt(1 - h2^2))");
  app.add_option("--h2", cfg.h2, "Initial h2 (default 0; list in sweeps)");
  app.add_option("--E", cfg.energy, "Energy h0^2/(2 chi) + h2^2; replaces --h0 (list in sweeps)");
  app.add_option("--h0-sign", cfg.h0_sign, "Sign of h0 when --E is given (default 1)");
  app.add_option("--h1-sign", cfg.h1_sign, "Sign of h1 when it is derived (default 1)");

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"lq-tc", "First conjugate time of an LQ model (--kappas, or --rows with --Q)"},
      {"lq-classify", "Finiteness of t_c for LQ(kappa_1..kappa_l) (--kappas)"},
      {"lie3d-tc", "Conjugate time on a 3D unimodular group (--chi --kappa, --h0 or --E)"},
      {"lie3d-sweep", "Conjugate times over a grid of chi, kappa, E or h0, and h2"},
      {"compare-verify", "Check a comparison bound (--bound) on a curvature field"},
      {"selftest", "Run the acceptance suite"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    std::vector<std::string> args;
    if (const auto path = find_config(args_in)) args = read_config(*path);
    args.insert(args.end(), args_in.begin(), args_in.end());
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();

  try {
    if (cfg.subcommand == "lq-tc") return cmd_lq_tc(cfg, out);
    if (cfg.subcommand == "lq-classify") return cmd_lq_classify(cfg, out);
    if (cfg.subcommand == "lie3d-tc") return cmd_lie3d_tc(cfg, out);
    if (cfg.subcommand == "lie3d-sweep") return cmd_lie3d_sweep(cfg, out);
    if (cfg.subcommand == "compare-verify") return cmd_compare_verify(cfg, out);
    return cmd_selftest(cfg, out, err);
  } catch (const IntegrationError& e) {
    err << "numerical failure: " << e.what() << " (last valid t = " << e.last_valid_time() << ")\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace conjtime
