// grreg: command-line front end over the library.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "grreg/error.hpp"
#include "grreg/experiments.hpp"
#include "grreg/matrix_symbol.hpp"
#include "grreg/symbol.hpp"
#include "grreg/toeplitz.hpp"
#include "grreg/transforms.hpp"

using namespace grreg;
using nlohmann::json;

namespace {

constexpr const char* kSchema = "grreg.report/1";

enum Exit { Ok = 0, InputError = 1, VerifiedFailure = 2, Internal = 3 };

int exit_for(Errc c) {
  switch (c) {
    case Errc::SyntaxError:
    case Errc::InvalidInput:
    case Errc::BadParameters:
    case Errc::DescriptorMismatch:
    case Errc::DegreeTooLarge:
      return InputError;
    default:
      return VerifiedFailure;
  }
}

json cj(cd z) { return json::array({z.real(), z.imag()}); }

json mat_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(cj(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

cd cd_from(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw Error(Errc::InvalidInput, "expected a number or [re, im], got " + j.dump());
}

Mat mat_from(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw Error(Errc::InvalidInput, "expected a matrix");
  Mat m(j.size(), j[0].size());
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (j[r].size() != j[0].size()) throw Error(Errc::InvalidInput, "ragged matrix");
    for (std::size_t c = 0; c < j[r].size(); ++c) m(r, c) = cd_from(j[r][c]);
  }
  return m;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidInput, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidInput, path + ": " + e.what());
  }
}

double rel(const Mat& a, const Mat& b) { return opnorm(a - b) / std::max(1.0, opnorm(b)); }

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw Error(Errc::BadParameters, "bad integer list '" + s + "'");
    }
  if (out.empty()) throw Error(Errc::BadParameters, "empty integer list");
  return out;
}

// ------------------------------------------------------------ analyze

struct AnalyzeArgs {
  std::string file;
};

int cmd_analyze(const AnalyzeArgs& a, const Config& cfg, json& res) {
  const json j = read_json(a.file);
  if (j.contains("name")) res["name"] = j["name"];
  PiecewiseSymbol m = verify_declarations(PiecewiseSymbol::from_json(j), cfg);
  const RegularityReport rep = regularity_report(m, cfg);
  res["symbol"] = m.to_json();
  res["report"] = rep.to_json();
  int code = Ok;
  json diffs = json::array();
  auto expect = [&](const std::string& what, bool want, bool got) {
    if (want != got) {
      diffs.push_back({{"check", what}, {"expected", want}, {"observed", got}});
      code = VerifiedFailure;
    }
  };
  if (j.contains("expect"))
    for (const auto& [k, v] : j["expect"].items()) {
      const json& verdicts = res["report"]["verdicts"];
      if (!verdicts.contains(k)) throw Error(Errc::InvalidInput, "unknown expectation '" + k + "'");
      expect(k, v.get<bool>(), verdicts[k].get<bool>());
    }
  if (j.contains("domain_witnesses")) {
    json out = json::array();
    for (const auto& w : j["domain_witnesses"]) {
      const std::string op = w.value("operator", "m");
      PiecewiseSymbol n = m;
      if (op == "conj")
        n = m.conj().with_declarations(m.declarations());
      else if (op == "abs")
        n = m.abs().with_declarations(m.declarations());
      else if (op != "m")
        throw Error(Errc::InvalidInput, "unknown witness operator '" + op + "'");
      const bool got = domain_membership(verify_declarations(n, cfg), PiecewiseSymbol::from_json(w.at("f")), cfg);
      const std::string label = w.value("label", op);
      out.push_back({{"label", label}, {"operator", op}, {"member", got}});
      if (w.contains("expect")) expect(label, w["expect"].get<bool>(), got);
    }
    res["domain_witnesses"] = out;
  }
  if (j.contains("range_witnesses")) {
    json out = json::array();
    for (const auto& w : j["range_witnesses"]) {
      const PiecewiseSymbol g = PiecewiseSymbol::from_json(w.at("g"));
      const bool got = range_membership_one_plus_tt(m, g, cfg);
      const std::string label = "g = " + g.pieces().front().expr.str();
      out.push_back({{"label", label}, {"member", got}});
      if (w.contains("expect")) expect(label, w["expect"].get<bool>(), got);
    }
    res["range_one_plus_tstar_t_witnesses"] = out;
  }
  if (rep.graph_regular) {
    const SymbolTriple tr = symbol_aab(m, cfg);
    const SymbolAxiomReport ax = symbol_axioms(tr, cfg);
    res["symbol_axioms"] = {{"bb", ax.bb}, {"abstar", ax.abstar}, {"normal", ax.normal}, {"valid", ax.valid}};
    res["inverse_residual"] = symbol_inverse_residual(tr, m, cfg);
    const SymbolBounded z = symbol_bounded_transform(m, cfg);
    res["bounded_transform"] = {{"extends_continuously", z.extends_continuously}, {"obstructions", z.obstructions}};
  }
  res["expectation_diffs"] = diffs;
  return code;
}

// ------------------------------------------------------------ transform

struct TransformArgs {
  std::string op, input, f = "1/(1+abs(w)^2)";
  int n = 4;
  bool zero = false;
  double beta = 0.0;
};

Mat random_normal(Rng& rng, int n) {
  const Mat u = rng.unitary(n);
  Vec d(n);
  for (int k = 0; k < n; ++k) d(k) = 2.0 * rng.cnormal();
  return u * d.asDiagonal() * u.adjoint();
}

int cmd_transform(const TransformArgs& a, const Config& cfg, json& res) {
  Rng rng(cfg.seed);
  json in = a.input.empty() ? json::object() : read_json(a.input);
  if (a.n < 1 || a.n > 64) throw Error(Errc::BadParameters, "n must lie in [1, 64]");
  Mat t;
  std::string source;
  if (in.contains("t")) {
    t = mat_from(in["t"]);
    source = "input";
  } else if (a.zero) {
    t = Mat::Zero(a.n, a.n);
    source = "zero";
  } else if (a.op == "calc") {
    t = random_normal(rng, a.n);
    source = "random normal";
  } else {
    t = random_operator(rng, a.n);
    source = "random";
  }
  const bool have_triple = in.contains("a") && in.contains("a_star") && in.contains("b");
  if (have_triple && a.op == "inverse") source = "input triple";
  res["op"] = a.op;
  res["source"] = source;
  if (!have_triple || a.op != "inverse") res["t"] = mat_json(t);

  if (a.op == "aab") {
    const AabTriple tr = aab_forward(t);
    const AxiomReport ax = ab_axioms_check(tr, cfg);
    res["a"] = mat_json(tr.a);
    res["a_star"] = mat_json(tr.a_star);
    res["b"] = mat_json(tr.b);
    res["axioms"] = ax.to_json();
    if (!ax.valid) return VerifiedFailure;
    const Mat back = aab_inverse(tr, cfg);
    const AabTriple again = aab_forward(back);
    res["roundtrip_operator"] = rel(back, t);
    res["roundtrip_triple"] = std::max({rel(again.a, tr.a), rel(again.a_star, tr.a_star), rel(again.b, tr.b)});
    const Mat p = graph_projection(tr, cfg);
    res["graph_projection"] = {{"idempotent", opnorm(p * p - p)}, {"selfadjoint", opnorm(p - p.adjoint())}};
    return Ok;
  }
  if (a.op == "inverse") {
    AabTriple tr = have_triple ? AabTriple{mat_from(in["a"]), mat_from(in["a_star"]), mat_from(in["b"])} : aab_forward(t);
    const AxiomReport ax = ab_axioms_check(tr, cfg);
    res["axioms"] = ax.to_json();
    if (!ax.valid) return VerifiedFailure;
    const Mat s = aab_inverse(tr, cfg);
    const AabTriple again = aab_forward(s);
    res["t_recovered"] = mat_json(s);
    res["roundtrip_triple"] = std::max({rel(again.a, tr.a), rel(again.a_star, tr.a_star), rel(again.b, tr.b)});
    if (!have_triple) res["roundtrip_operator"] = rel(s, t);
    return Ok;
  }
  if (a.op == "bounded") {
    const BoundedTransform z = bounded_transform(t, cfg);
    res["z"] = mat_json(z.z);
    res["norm"] = z.norm;
    res["in_Z"] = z.in_Z;
    res["in_Zd"] = z.in_Zd;
    res["min_sv_defect"] = z.min_sv_defect;
    const Mat back = from_bounded(z, cfg);
    res["reconstruction"] = rel(back, t);
    return Ok;
  }
  if (a.op == "abs") {
    const AabTriple tr = aab_forward(t);
    const AabTriple ab = absolute_value(tr, cfg);
    const Mat m = abs_operator(t);
    const AabTriple direct = aab_forward(m);
    res["abs"] = mat_json(m);
    res["axioms"] = ab_axioms_check(ab, cfg).to_json();
    res["triple_agreement"] = std::max({rel(direct.a, ab.a), rel(direct.a_star, ab.a_star), rel(direct.b, ab.b)});
    res["square_vs_tstar_t"] = rel(m * m, t.adjoint() * t);
    return Ok;
  }
  if (a.op == "polar") {
    const Polar p = polar_decompose(t, cfg);
    res["v"] = mat_json(p.v);
    res["abs"] = mat_json(p.abs);
    res["factorization"] = rel(p.v * p.abs, t);
    res["partial_isometry"] = opnorm(p.v * p.v.adjoint() * p.v - p.v);
    return Ok;
  }
  if (a.op == "calc") {
    const Expr g = Expr::parse(a.f);
    const AabTriple tr = aab_forward(t);
    const Mat r = functional_calculus(tr, g, a.beta, cfg);
    Eigen::ComplexEigenSolver<Mat> es(t);
    Vec gv(t.rows());
    for (Eigen::Index k = 0; k < gv.size(); ++k) gv(k) = g.eval(es.eigenvalues()(k));
    const Mat V = es.eigenvectors();
    const Mat direct = V * gv.asDiagonal() * V.inverse();
    res["f"] = g.str();
    res["result"] = mat_json(r);
    res["residual_vs_spectral"] = rel(r, direct);
    res["residual_vs_a"] = rel(r, tr.a);
    return Ok;
  }
  throw Error(Errc::BadParameters, "unknown op '" + a.op + "'");
}

// ------------------------------------------------------------ toeplitz

struct ToeplitzArgs {
  std::string p, q;
  int N = 256;
};

int cmd_toeplitz(const ToeplitzArgs& a, const Config& cfg, json& res) {
  if (a.N < 64) throw Error(Errc::BadParameters, "N must be at least 64");
  const Poly p = poly_parse(a.p), q = poly_parse(a.q);
  const TrigData d = trig_data(p, q, cfg);
  res["trig"] = d.to_json();
  res["affiliation"] = affiliation_verdict(p, q, cfg).to_json();
  json table = json::array();
  bool monotone = true;
  double prev = 0;
  for (int N = 64; N <= a.N; N *= 2) {
    const InteriorResiduals r = interior_residuals_quad(d, N);
    table.push_back({{"param", N}, {"value", r.max()}, {"bb", r.bb}, {"bbstar", r.bbstar}, {"abstar", r.abstar}});
    if (N > 64 && !(r.max() < prev)) monotone = false;
    prev = r.max();
  }
  res["interior_residuals"] = table;
  res["interior_monotone"] = monotone;
  const ToeplitzTriple tr = toeplitz_aab(d, std::min(a.N, 256));
  res["interior_residual_double"] = interior_residuals(tr).max();
  if (poly_degree(p) == 0 && q.size() == 2 && q[0] == cd(1.0) && q[1] == cd(-1.0))
    res["inverse_shift_residual"] = inverse_shift_residual(tr);
  return d.valid ? Ok : VerifiedFailure;
}

// ------------------------------------------------------------ experiment

struct ExperimentArgs {
  std::string which, Ks = "8,16,32", Ms = "256,512";
  bool control = false;
  double alpha = 1, beta = -1, L = 20, lambda = 0;
  int limits_M = 8192, n = 4, trials = 20;
};

int cmd_experiment(const ExperimentArgs& a, const Config& cfg, json& res) {
  res["which"] = a.which;
  if (a.which == "counterdensity") {
    const auto rows = density_sweep(parse_int_list(a.Ks), cfg, a.control);
    res["table"] = density_table_json(rows, cfg, a.control);
    if (a.control) return Ok;
    return res["table"]["left_strictly_decreasing"].get<bool>() && res["table"]["star_above_floor"].get<bool>()
               ? Ok
               : VerifiedFailure;
  }
  if (a.which == "weyl") {
    json rel = json::array();
    for (int M : parse_int_list(a.Ms)) rel.push_back(weyl_relations(weyl_build(a.alpha, a.beta, M, a.L)).to_json());
    res["relations"] = rel;
    const WeylGrid w = weyl_build(a.alpha, a.beta, a.limits_M, a.L, false);
    res["limits"] = weyl_limits(w, a.lambda, weyl_default_eps(w, cfg), cfg).to_json();
    res["limits"]["M"] = a.limits_M;
    res["note"] = "xyrel2 is reported for both signs of the i x y^2 x term";
    return Ok;
  }
  if (a.which == "resolvent") {
    json cases = json::array();
    const GridModel g = grid_model();
    Eigen::Matrix2cd n;
    n << 0, 0, 1, 0;
    cases.push_back({{"case", "grid t=(0 0;1 0), lambda=i"},
                     {"verdict", resolvent_affiliation_check(g.A.algebra, grid_operator(n, n, n), cd(0, 1), cfg).to_json()}});
    Rng rng(cfg.seed);
    const AlgebraDescriptor full = AlgebraDescriptor::matrix_blocks({a.n});
    int affiliated = 0, checked = 0;
    double worst_inverse = 0;
    for (int k = 0; k < a.trials; ++k) {
      const Mat t = random_operator(rng, a.n);
      const cd lambda = 2.0 * rng.cnormal();
      ResolventVerdict v;
      try {
        v = resolvent_affiliation_check(full, t, lambda, cfg);
      } catch (const Error& e) {
        if (e.code() != Errc::LambdaInSpectrum) throw;
        continue;
      }
      ++checked;
      affiliated += v.affiliated;
      const Mat shifted = t - lambda * Mat::Identity(a.n, a.n);
      worst_inverse = std::max(worst_inverse, opnorm(shifted * v.resolvent - Mat::Identity(a.n, a.n)));
    }
    cases.push_back({{"case", "random M_n battery"},
                     {"n", a.n},
                     {"checked", checked},
                     {"affiliated", affiliated},
                     {"worst_inverse_residual", worst_inverse}});
    res["cases"] = cases;
    return Ok;
  }
  throw Error(Errc::BadParameters, "unknown experiment '" + a.which + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph regular operators: symbols, transforms, Toeplitz and experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, json_path;
  std::uint64_t seed = 0;
  bool quiet = false;
  app.add_option("--config", config_path, "config file (JSON)");
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  app.add_option("--json", json_path, "write the report to this path");
  app.add_flag("--quiet", quiet, "no report on stdout");

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "classify a symbol file");
  analyze->add_option("file", aa.file)->required();

  TransformArgs ta;
  auto* transform = app.add_subcommand("transform", "matrix transforms");
  transform->add_option("--op", ta.op)->required()->check(CLI::IsMember({"aab", "inverse", "bounded", "abs", "polar", "calc"}));
  transform->add_option("--input", ta.input, "JSON with t, or a, a_star, b");
  transform->add_option("--n", ta.n, "size of the random operator");
  transform->add_flag("--zero", ta.zero, "use the zero operator");
  transform->add_option("--f", ta.f, "function of w for calc");
  transform->add_option("--beta", ta.beta, "value at infinity for calc");

  ToeplitzArgs tp;
  auto* toeplitz = app.add_subcommand("toeplitz", "Toeplitz truncation of a trigonometric pair");
  toeplitz->add_option("p", tp.p)->required();
  toeplitz->add_option("q", tp.q)->required();
  toeplitz->add_option("--N", tp.N, "largest truncation");

  ExperimentArgs ea;
  auto* experiment = app.add_subcommand("experiment", "resolvent, density and Weyl experiments");
  experiment->add_option("--which", ea.which)->required()->check(CLI::IsMember({"counterdensity", "weyl", "resolvent"}));
  experiment->add_option("--K", ea.Ks, "comma separated K values");
  experiment->add_flag("--control", ea.control, "r = identity");
  experiment->add_option("--alpha", ea.alpha);
  experiment->add_option("--beta", ea.beta);
  experiment->add_option("--L", ea.L);
  experiment->add_option("--M", ea.Ms, "comma separated grid sizes");
  experiment->add_option("--limits-M", ea.limits_M, "grid size for the limit study");
  experiment->add_option("--lambda", ea.lambda);
  experiment->add_option("--n", ea.n);
  experiment->add_option("--trials", ea.trials);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? Ok : InputError;
  }

  json report;
  report["schema"] = kSchema;
  json cmd = json::array();
  for (int k = 1; k < argc; ++k) cmd.push_back(argv[k]);
  report["command"] = cmd;
  int code = Ok;
  json res = json::object();
  try {
    Config cfg = config_path.empty() ? Config{} : Config::load(config_path);
    if (*seed_opt) cfg.seed = seed;
    report["config"] = cfg.to_json();
    report["seed"] = cfg.seed;
    if (analyze->parsed())
      code = cmd_analyze(aa, cfg, res);
    else if (transform->parsed())
      code = cmd_transform(ta, cfg, res);
    else if (toeplitz->parsed())
      code = cmd_toeplitz(tp, cfg, res);
    else
      code = cmd_experiment(ea, cfg, res);
  } catch (const Error& e) {
    code = exit_for(e.code());
    report["error"] = {{"code", errc_name(e.code())}, {"message", e.what()}};
  } catch (const std::exception& e) {
    code = Internal;
    report["error"] = {{"code", "Internal"}, {"message", e.what()}};
  }
  report["results"] = res;
  report["exit_code"] = code;

  const std::string text = report.dump(2) + "\n";
  if (!json_path.empty()) {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << json_path << "\n";
      return InputError;
    }
    out << text;
  }
  if (!quiet) std::cout << text;
  return code;
}
