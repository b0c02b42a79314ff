#include "spectralfield/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spectralfield/calculus.hpp"
#include "spectralfield/diagnostics.hpp"
#include "spectralfield/errors.hpp"
#include "spectralfield/oracle.hpp"
#include "spectralfield/spectral.hpp"

using nlohmann::json;

namespace spectralfield::cli {

namespace {

Polynomial parseTerms(const json& arr, int n) {
  if (!arr.is_array()) throw DimensionError("polynomial must be an array of terms");
  std::vector<Monomial> terms;
  for (const auto& t : arr) {
    Monomial m;
    m.coeff = t.at("c").get<double>();
    m.exponents = t.at("e").get<std::vector<int>>();
    if (static_cast<int>(m.exponents.size()) != n)
      throw DimensionError("term exponent vector length does not match n");
    terms.push_back(std::move(m));
  }
  return Polynomial(n, std::move(terms));
}

std::vector<double> parseCsv(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t pos = 0;
    const double v = std::stod(item, &pos);
    if (pos != item.size()) throw DimensionError("malformed number in list: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw DimensionError("empty list");
  return out;
}

Eigen::VectorXd toVector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
}

json vecJson(const Eigen::VectorXd& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json matJson(const Eigen::MatrixXd& M) {
  json out = json::array();
  for (int i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    out.push_back(row);
  }
  return out;
}

void dumpValue(const json& v, std::string& out) {
  switch (v.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {  // nlohmann objects iterate sorted
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        dumpValue(it.value(), out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        dumpValue(v[i], out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d)) {
        out += "null";
      } else {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", d);
        out += buf;
      }
      break;
    }
    default:
      out += v.dump();
  }
}

ClusterConfig clusterFromEnv() {
  ClusterConfig cfg;
  if (const char* tol = std::getenv("SPECTRALFIELD_GAP_TOL")) cfg.relative_gap = std::atof(tol);
  return cfg;
}

struct FieldInput {
  std::string builtin;
  std::string spec_path;

  PolyMatrixField load() const {
    if (!builtin.empty()) return builtinField(builtin);
    std::ifstream in(spec_path);
    if (!in) throw DimensionError("cannot open spec file: " + spec_path);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& ex) {
      throw DimensionError(std::string("JSON parse error: ") + ex.what());
    }
    return parseFieldSpec(doc);
  }
};

json decompositionJson(const SpectralDecomposition& d) {
  json groups = json::array();
  for (int g = 0; g < d.groupCount(); ++g) {
    const EigenGroup& grp = d.groups[g];
    const IndexReport ir = indexReport(d, grp.first + 1);
    groups.push_back({{"value", grp.value},
                      {"multiplicity", grp.multiplicity},
                      {"projection", matJson(grp.projection)},
                      {"j_star_lo", ir.j_star_lo},
                      {"j_star_hi", ir.j_star_hi},
                      {"s_upto_j", ir.s_upto_j}});
  }
  return {{"eigenvalues", vecJson(d.spectrum.values)},
          {"groups", groups},
          {"group_count", d.groupCount()},
          {"cluster_gap_used", d.cluster_gap_used},
          {"nearest_gap_margin", d.nearest_gap_margin},
          {"inv_mult_sum", indexReport(d, 1).inv_mult_sum}};
}

void emit(const json& report, const std::string& out_path, std::ostream& out) {
  const std::string text = dumpReport(report);
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    f << text << '\n';
  } else {
    out << text << '\n';
  }
}

int cmdEval(const FieldInput& fin, const std::string& point_csv, const std::string& out_path,
            std::ostream& out) {
  const PolyMatrixField field = fin.load();
  const Eigen::VectorXd x = toVector(parseCsv(point_csv));
  const Eigen::MatrixXd H = field.eval(x);
  const SpectralDecomposition d = decompose(H, clusterFromEnv());
  json report = {{"command", "eval"},
                 {"point", vecJson(x)},
                 {"H", matJson(H)},
                 {"decomposition", decompositionJson(d)}};
  emit(report, out_path, out);
  return kExitOk;
}

int cmdDerive(const FieldInput& fin, const std::string& point_csv, int j, bool want_grad,
              bool want_hess, bool want_dproj, const std::string& e_csv,
              const std::string& q_csv, bool want_second, const std::string& a_csv,
              const std::string& b_csv, bool validate, bool force,
              const std::string& out_path, std::ostream& out, std::ostream& err) {
  const PolyMatrixField field = fin.load();
  const Eigen::VectorXd x = toVector(parseCsv(point_csv));
  if (j < 1 || j > field.rows()) throw DimensionError("--j out of range");
  const ClusterConfig cluster = clusterFromEnv();
  const EigenDerivativeContext ctx = makeContext(field, x, j - 1, cluster);

  json report = {{"command", "derive"},
                 {"point", vecJson(x)},
                 {"j", j},
                 {"lambda", ctx.lambda()},
                 {"multiplicity", ctx.multiplicity()},
                 {"hypotheses_unverified", force}};
  bool within_tol = true;

  try {
    if (want_grad) {
      const Eigen::RowVectorXd g = gradLambda(ctx, !force);
      report["grad"] = vecJson(g.transpose());
      if (validate) {
        FDConfig fd;
        fd.cluster = cluster;
        const Eigen::VectorXd og = fdGradLambda(field, x, j - 1, fd);
        const double disc = (g.transpose() - og).norm() / (1.0 + og.norm());
        report["grad_oracle"] = vecJson(og);
        report["grad_discrepancy"] = disc;
        within_tol = within_tol && disc <= 1e-6;
      }
    }
    if (want_hess) {
      const Eigen::MatrixXd Hl = hessLambda(ctx, !force);
      report["hess"] = matJson(Hl);
      if (validate) {
        FDConfig fd;
        fd.cluster = cluster;
        const Eigen::MatrixXd oh = fdHessLambda(field, x, j - 1, fd);
        const double disc = (Hl - oh).norm() / (1.0 + oh.norm());
        report["hess_oracle"] = matJson(oh);
        report["hess_discrepancy"] = disc;
        within_tol = within_tol && disc <= 1e-4;
      }
    }
    if (want_dproj) {
      if (!e_csv.empty()) {
        const Eigen::VectorXd e = toVector(parseCsv(e_csv));
        const Eigen::MatrixXd DP = dirDerivProj(ctx, e);
        report["dproj_e"] = matJson(DP);
        if (validate) {
          FDConfig fd;
          fd.cluster = cluster;
          const Eigen::MatrixXd op = fdDProj(field, x, j - 1, e, fd);
          const double disc = (DP - op).norm() / (1.0 + op.norm());
          report["dproj_oracle"] = matJson(op);
          report["dproj_discrepancy"] = disc;
          within_tol = within_tol && disc <= 1e-5;
        }
      } else if (!q_csv.empty()) {
        report["dproj_q"] = matJson(jacDerivProj(ctx, toVector(parseCsv(q_csv))));
      } else {
        throw DimensionError("--dproj requires --e or --q");
      }
    }
    if (want_second) {
      if (a_csv.empty() || b_csv.empty())
        throw DimensionError("--second requires --a and --b");
      report["second"] =
          secondDirLambda(ctx, toVector(parseCsv(a_csv)), toVector(parseCsv(b_csv)));
    }
  } catch (const InconsistentDerivativeError& ex) {
    report["crossing"] = {{"witness", vecJson(x)},
                          {"discrepancy", ex.discrepancy},
                          {"message", ex.what()}};
    emit(report, out_path, out);
    err << "crossing detected at the requested point\n";
    return kExitHypothesisViolation;
  }

  if (validate) report["validated"] = within_tol;
  emit(report, out_path, out);
  return within_tol ? kExitOk : kExitHypothesisViolation;
}

int cmdExpand(const FieldInput& fin, const std::string& point_csv, int j,
              const std::string& y_csv, const std::string& e_csv,
              const std::string& steps_csv, const std::string& out_path, std::ostream& out,
              std::ostream& err) {
  const PolyMatrixField field = fin.load();
  const Eigen::VectorXd x = toVector(parseCsv(point_csv));
  if (j < 1 || j > field.rows()) throw DimensionError("--j out of range");
  const ClusterConfig cluster = clusterFromEnv();
  const EigenDerivativeContext ctx = makeContext(field, x, j - 1, cluster);

  json report = {{"command", "expand"}, {"point", vecJson(x)}, {"j", j}};
  try {
    const Expansion2 exp2 = taylor2Lambda(ctx);
    report["base"] = exp2.base;
    report["linear"] = vecJson(exp2.linear.transpose());
    report["quadratic"] = matJson(exp2.quadratic);
    if (!y_csv.empty()) {
      const Eigen::VectorXd y = toVector(parseCsv(y_csv));
      const double predicted = exp2.predict(y);
      const double actual = eigSym(field.eval(x + y)).values[j - 1];
      report["displacement"] = vecJson(y);
      report["predicted"] = predicted;
      report["actual"] = actual;
      report["residual"] = std::abs(actual - predicted);
    }
    if (!e_csv.empty() && !steps_csv.empty()) {
      const Eigen::VectorXd e = toVector(parseCsv(e_csv));
      const SlopeFit fit =
          fitExpansionOrder(field, x, j - 1, e, parseCsv(steps_csv), cluster);
      json table = json::array();
      for (size_t i = 0; i < fit.steps.size(); ++i)
        table.push_back({{"h", fit.steps[i]}, {"residual", fit.residuals[i]}});
      report["fit"] = {{"table", table},
                       {"fitted_order", fit.fitted_order},
                       {"exact", fit.exact}};
    }
  } catch (const InconsistentDerivativeError& ex) {
    report["crossing"] = {{"witness", vecJson(x)},
                          {"discrepancy", ex.discrepancy},
                          {"message", ex.what()}};
    emit(report, out_path, out);
    err << "crossing detected at the requested point\n";
    return kExitHypothesisViolation;
  }
  emit(report, out_path, out);
  return kExitOk;
}

int cmdScan(const FieldInput& fin, const std::string& box_csv, const std::string& grid_csv,
            int j, const std::string& out_path, std::ostream& out) {
  const PolyMatrixField field = fin.load();
  const int n = field.ambientDim();
  const std::vector<double> box_vals = parseCsv(box_csv);
  if (static_cast<int>(box_vals.size()) != 2 * n)
    throw DimensionError("--box needs lo,hi per axis");
  Box box;
  box.lo.resize(n);
  box.hi.resize(n);
  for (int a = 0; a < n; ++a) {
    box.lo[a] = box_vals[2 * a];
    box.hi[a] = box_vals[2 * a + 1];
    if (box.hi[a] < box.lo[a]) throw DimensionError("box hi < lo on axis " + std::to_string(a));
  }
  std::vector<int> grid;
  for (double g : parseCsv(grid_csv)) grid.push_back(static_cast<int>(g));
  if (static_cast<int>(grid.size()) != n) throw DimensionError("--grid needs a count per axis");

  const ConditionReport rep =
      checkEquivalenceConditions(field, box, grid, j, clusterFromEnv());

  json crossings = json::array();
  for (const auto& c : rep.scan.crossings)
    crossings.push_back({{"segment_a", vecJson(c.segment_a)},
                         {"segment_b", vecJson(c.segment_b)},
                         {"bracket_a", vecJson(c.bracket_a)},
                         {"bracket_b", vecJson(c.bracket_b)}});
  json report = {{"command", "scan"},
                 {"j", j},
                 {"verdict", to_string(rep.verdict)},
                 {"detail", rep.detail},
                 {"constant_dim", rep.constant_dim},
                 {"constant_group_count", rep.constant_group_count},
                 {"max_proj_jump", rep.max_proj_jump},
                 {"proj_jump_threshold", rep.proj_jump_threshold},
                 {"min_gap", rep.scan.min_gap},
                 {"sample_count", rep.scan.sample_points.size()},
                 {"crossings", crossings}};
  if (rep.witness.size() > 0) report["witness"] = vecJson(rep.witness);
  emit(report, out_path, out);
  switch (rep.verdict) {
    case Verdict::Supported: return kExitOk;
    case Verdict::Refuted: return kExitHypothesisViolation;
    default: return kExitInconclusive;
  }
}

int cmdKyFan(const FieldInput& fin, const std::string& matrix_csv,
             const std::string& point_csv, int k, int samples, std::uint64_t seed,
             const std::string& out_path, std::ostream& out) {
  Eigen::MatrixXd X;
  json report = {{"command", "kyfan"}, {"k", k}};
  if (!matrix_csv.empty()) {
    const std::vector<double> vals = parseCsv(matrix_csv);
    const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(vals.size()))));
    if (m * m != static_cast<int>(vals.size()))
      throw DimensionError("--matrix needs m*m row-major entries");
    X.resize(m, m);
    for (int i = 0; i < m; ++i)
      for (int c = 0; c < m; ++c) X(i, c) = vals[i * m + c];
    X = requireSymmetric(X);
  } else {
    const PolyMatrixField field = fin.load();
    const Eigen::VectorXd x = toVector(parseCsv(point_csv));
    X = field.eval(x);
    report["point"] = vecJson(x);
  }
  const SpectralDecomposition d = decompose(X, clusterFromEnv());
  const KyFanResult r = kyFanSum(X, k, d);
  report["value"] = r.value;
  if (r.minimizer) report["minimizer"] = matJson(*r.minimizer);
  if (samples > 0) {
    const double bf = kyFanBruteForce(X, k, samples, seed);
    report["bruteforce"] = bf;
    report["bruteforce_excess"] = bf - r.value;
    report["samples"] = samples;
    report["seed"] = seed;
  }
  emit(report, out_path, out);
  return kExitOk;
}

}  // namespace

PolyMatrixField parseFieldSpec(const json& doc) {
  const int n = doc.at("n").get<int>();
  if (doc.contains("potential")) return PolyMatrixField::fromPotential(parseTerms(doc["potential"], n));
  const int m = doc.at("m").get<int>();
  const json& grid = doc.at("entries");
  if (!grid.is_array() || static_cast<int>(grid.size()) != m)
    throw DimensionError("entries must be an m x m grid");
  std::vector<Polynomial> entries;
  entries.reserve(static_cast<size_t>(m) * m);
  for (const auto& row : grid) {
    if (!row.is_array() || static_cast<int>(row.size()) != m)
      throw DimensionError("entries must be an m x m grid");
    for (const auto& cell : row) entries.push_back(parseTerms(cell, n));
  }
  // The PolyMatrixField constructor rejects asymmetric grids.
  return PolyMatrixField(m, n, std::move(entries));
}

PolyMatrixField builtinField(const std::string& name) {
  if (name == "cubic") return cubicField();
  if (name == "quartic") return quarticField();
  throw DimensionError("unknown builtin field: " + name);
}

std::string dumpReport(const json& report) {
  std::string out;
  dumpValue(report, out);
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"derivatives of eigenvalues and eigenprojections of polynomial symmetric matrix fields"};
  app.require_subcommand(1);

  FieldInput fin;
  std::string point_csv, e_csv, q_csv, a_csv, b_csv, y_csv, box_csv, grid_csv, steps_csv;
  std::string matrix_csv, out_path;
  int j = 1, k = 0, samples = 0;
  std::uint64_t seed = 0;
  bool want_grad = false, want_hess = false, want_dproj = false, want_second = false;
  bool validate = false, force = false;

  auto addField = [&](CLI::App* cmd, bool required) {
    auto* b = cmd->add_option("--builtin", fin.builtin, "builtin field name (cubic, quartic)");
    auto* s = cmd->add_option("--spec", fin.spec_path, "FieldSpec JSON file");
    b->excludes(s);
    if (required) {
      cmd->callback([&, b, s]() {
        if (b->empty() && s->empty()) throw CLI::ValidationError("need --builtin or --spec");
      });
    }
  };

  auto* eval = app.add_subcommand("eval", "evaluate H and its spectral decomposition");
  addField(eval, true);
  eval->add_option("--point", point_csv)->required();
  eval->add_option("--out", out_path);

  auto* derive = app.add_subcommand("derive", "closed-form derivatives at a point");
  addField(derive, true);
  derive->add_option("--point", point_csv)->required();
  derive->add_option("--j", j)->required();
  derive->add_flag("--grad", want_grad);
  derive->add_flag("--hess", want_hess);
  derive->add_flag("--dproj", want_dproj);
  derive->add_flag("--second", want_second);
  derive->add_option("--e", e_csv);
  derive->add_option("--q", q_csv);
  derive->add_option("--a", a_csv);
  derive->add_option("--b", b_csv);
  derive->add_flag("--validate", validate, "compare against finite-difference oracles");
  derive->add_flag("--force", force, "compute formula values without the crossing guard");
  derive->add_option("--out", out_path);

  auto* expand = app.add_subcommand("expand", "second-order expansion of an eigenvalue");
  addField(expand, true);
  expand->add_option("--point", point_csv)->required();
  expand->add_option("--j", j)->required();
  expand->add_option("--y", y_csv, "displacement to predict at");
  expand->add_option("--e", e_csv, "direction for the residual-order fit");
  expand->add_option("--steps", steps_csv, "decreasing step sizes for the fit");
  expand->add_option("--out", out_path);

  auto* scan = app.add_subcommand("scan", "constant-dimension and continuity evidence on a box");
  addField(scan, true);
  scan->add_option("--box", box_csv, "lo,hi per axis")->required();
  scan->add_option("--grid", grid_csv, "sample counts per axis")->required();
  scan->add_option("--j", j)->required();
  scan->add_option("--out", out_path);

  auto* kyfan = app.add_subcommand("kyfan", "partial eigenvalue sums and their minimizers");
  addField(kyfan, false);
  kyfan->add_option("--matrix", matrix_csv, "row-major m*m symmetric matrix");
  kyfan->add_option("--point", point_csv);
  kyfan->add_option("--k", k)->required();
  kyfan->add_option("--samples", samples, "brute-force sample count");
  kyfan->add_option("--seed", seed);
  kyfan->add_option("--out", out_path);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    if (ex.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << ex.what() << '\n';
    return kExitInputError;
  }

  try {
    if (eval->parsed()) return cmdEval(fin, point_csv, out_path, out);
    if (derive->parsed())
      return cmdDerive(fin, point_csv, j, want_grad, want_hess, want_dproj, e_csv, q_csv,
                       want_second, a_csv, b_csv, validate, force, out_path, out, err);
    if (expand->parsed())
      return cmdExpand(fin, point_csv, j, y_csv, e_csv, steps_csv, out_path, out, err);
    if (scan->parsed()) return cmdScan(fin, box_csv, grid_csv, j, out_path, out);
    if (kyfan->parsed()) {
      if (matrix_csv.empty() && fin.builtin.empty() && fin.spec_path.empty())
        throw DimensionError("kyfan needs --matrix or a field with --point");
      if (matrix_csv.empty() && point_csv.empty())
        throw DimensionError("kyfan with a field needs --point");
      return cmdKyFan(fin, matrix_csv, point_csv, k, samples, seed, out_path, out);
    }
  } catch (const DimensionError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitInputError;
  } catch (const UnstableTrackingError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitHypothesisViolation;
  } catch (const DegenerateGapError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitHypothesisViolation;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace spectralfield::cli
