#include "grreg/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "grreg/error.hpp"

namespace grreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

Expr constant(cd v) {
  if (v.imag() == 0.0) return Expr::number(v.real());
  if (v.real() == 0.0) return Expr::number(v.imag()) * Expr::imag();
  return Expr::number(v.real()) + Expr::number(v.imag()) * Expr::imag();
}

nlohmann::json number_json(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

double number_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw Error(Errc::InvalidInput, "expected a number or \"inf\"/\"-inf\", got " + j.dump());
}

cd complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return cd(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2) return cd(j[0].get<double>(), j[1].get<double>());
  throw Error(Errc::InvalidInput, "expected a complex number (number or [re, im]), got " + j.dump());
}

nlohmann::json complex_json(cd v) { return nlohmann::json::array({v.real(), v.imag()}); }

PointClass class_from_string(const std::string& s) {
  if (s == "RegB") return PointClass::RegB;
  if (s == "RegInf") return PointClass::RegInf;
  if (s == "SingSupp") return PointClass::SingSupp;
  if (s == "Removable") return PointClass::Removable;
  throw Error(Errc::InvalidInput, "unknown point class '" + s + "'");
}

}  // namespace

const char* point_class_name(PointClass c) {
  switch (c) {
    case PointClass::RegB: return "RegB";
    case PointClass::RegInf: return "RegInf";
    case PointClass::SingSupp: return "SingSupp";
    case PointClass::Removable: return "Removable";
    case PointClass::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string Location::str() const {
  if (infinity) return "inf";
  nlohmann::json j = x;
  return j.dump();
}

// ---------------------------------------------------------------- DomainSpec

DomainSpec DomainSpec::interval(double lo, double hi, std::vector<double> p) {
  DomainSpec d;
  d.base = BaseKind::ClosedInterval;
  d.lo = lo;
  d.hi = hi;
  d.punctures = std::move(p);
  d.includes_infinity = false;
  d.validate();
  return d;
}

DomainSpec DomainSpec::half_line(double lo, std::vector<double> p) {
  DomainSpec d;
  d.base = BaseKind::HalfLine;
  d.lo = lo;
  d.hi = kInf;
  d.punctures = std::move(p);
  d.includes_infinity = true;
  d.validate();
  return d;
}

DomainSpec DomainSpec::real_line(std::vector<double> p) {
  DomainSpec d;
  d.base = BaseKind::RealLine;
  d.lo = -kInf;
  d.hi = kInf;
  d.punctures = std::move(p);
  d.includes_infinity = true;
  d.validate();
  return d;
}

double DomainSpec::left() const { return base == BaseKind::RealLine ? -kInf : lo; }
double DomainSpec::right() const { return base == BaseKind::ClosedInterval ? hi : kInf; }

bool DomainSpec::contains(double x) const { return x >= left() && x <= right(); }

bool DomainSpec::is_puncture(double x) const {
  return std::binary_search(punctures.begin(), punctures.end(), x);
}

void DomainSpec::validate() const {
  if (base == BaseKind::ClosedInterval && !(lo < hi))
    throw Error(Errc::InvalidInput, "interval domain needs lo < hi");
  if (base == BaseKind::HalfLine && !std::isfinite(lo))
    throw Error(Errc::InvalidInput, "half-line domain needs a finite lo");
  for (std::size_t k = 0; k < punctures.size(); ++k) {
    if (!std::isfinite(punctures[k]) || !contains(punctures[k]))
      throw Error(Errc::InvalidInput, "puncture outside the domain");
    if (k > 0 && !(punctures[k - 1] < punctures[k]))
      throw Error(Errc::InvalidInput, "punctures must be sorted and distinct");
  }
  if (includes_infinity == compact())
    throw Error(Errc::InvalidInput, "includes_infinity must be set exactly for non-compact bases");
}

bool DomainSpec::operator==(const DomainSpec& o) const {
  return base == o.base && left() == o.left() && right() == o.right() && punctures == o.punctures;
}

// ---------------------------------------------------------- PiecewiseSymbol

PiecewiseSymbol::PiecewiseSymbol(DomainSpec d, std::vector<Piece> pieces, std::vector<Declaration> decls)
    : domain_(std::move(d)), pieces_(std::move(pieces)), decls_(std::move(decls)) {
  domain_.validate();
  std::vector<const Piece*> intervals;
  for (const auto& p : pieces_) {
    if (p.lo > p.hi) throw Error(Errc::InvalidInput, "piece with lo > hi");
    if (!domain_.contains(p.lo) || !domain_.contains(p.hi))
      throw Error(Errc::InvalidInput, "piece outside the domain");
    if (p.lo < p.hi) intervals.push_back(&p);
  }
  if (intervals.empty()) throw Error(Errc::InvalidInput, "symbol has no pieces");
  std::sort(intervals.begin(), intervals.end(), [](auto a, auto b) { return a->lo < b->lo; });
  if (intervals.front()->lo != domain_.left() || intervals.back()->hi != domain_.right())
    throw Error(Errc::InvalidInput, "pieces do not cover the domain");
  for (std::size_t k = 1; k < intervals.size(); ++k)
    if (intervals[k - 1]->hi != intervals[k]->lo)
      throw Error(Errc::InvalidInput, "pieces overlap or leave a gap");
  // each expression must evaluate to a finite value inside its piece
  for (const Piece* p : intervals) {
    double a = std::isfinite(p->lo) ? p->lo : std::min(p->hi, 0.0) - 10.0;
    double b = std::isfinite(p->hi) ? p->hi : std::max(a, 0.0) + 10.0;
    for (int j = 1; j <= 7; ++j) {
      double x = a + (b - a) * j / 8.0;
      cd v = p->expr(x);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw Error(Errc::InvalidInput, "expression '" + p->expr.str() + "' is not finite inside its piece");
    }
  }
  for (const auto& d : decls_) {
    if (!d.at.infinity && !domain_.is_puncture(d.at.x))
      throw Error(Errc::InvalidInput, "declaration at " + d.at.str() + " which is not a puncture");
    if (d.at.infinity && domain_.compact())
      throw Error(Errc::InvalidInput, "declaration at infinity on a compact domain");
    if (d.cls == PointClass::Inconclusive) throw Error(Errc::InvalidInput, "cannot declare Inconclusive");
  }
}

PiecewiseSymbol PiecewiseSymbol::uniform(DomainSpec d, const Expr& e, std::vector<Declaration> decls) {
  std::vector<double> br{d.left()};
  for (double p : d.punctures)
    if (p > d.left() && p < d.right()) br.push_back(p);
  br.push_back(d.right());
  std::vector<Piece> pieces;
  for (std::size_t k = 0; k + 1 < br.size(); ++k) pieces.push_back({br[k], br[k + 1], e});
  return PiecewiseSymbol(std::move(d), std::move(pieces), std::move(decls));
}

const Declaration* PiecewiseSymbol::declaration_at(const Location& l) const {
  for (const auto& d : decls_)
    if (d.at == l) return &d;
  return nullptr;
}

cd PiecewiseSymbol::eval(double x) const {
  for (const auto& p : pieces_)
    if (p.lo == p.hi && p.lo == x) return p.expr(x);
  if (domain_.is_puncture(x) || !domain_.contains(x)) return cd(nan(), nan());
  for (const auto& p : pieces_)
    if (p.lo < p.hi && x >= p.lo && x <= p.hi) return p.expr(x);
  return cd(nan(), nan());
}

PiecewiseSymbol PiecewiseSymbol::map(const std::function<Expr(const Expr&)>& f) const {
  std::vector<Piece> out;
  for (const auto& p : pieces_) out.push_back({p.lo, p.hi, f(p.expr)});
  return PiecewiseSymbol(domain_, std::move(out));
}

PiecewiseSymbol PiecewiseSymbol::combine(const PiecewiseSymbol& m, const PiecewiseSymbol& n,
                                         const std::function<Expr(const Expr&, const Expr&)>& f) {
  if (m.domain_.base != n.domain_.base || m.domain_.left() != n.domain_.left() ||
      m.domain_.right() != n.domain_.right())
    throw Error(Errc::DescriptorMismatch, "symbols live on different domains");
  DomainSpec d = m.domain_;
  std::vector<double> punct = m.domain_.punctures;
  punct.insert(punct.end(), n.domain_.punctures.begin(), n.domain_.punctures.end());
  std::sort(punct.begin(), punct.end());
  punct.erase(std::unique(punct.begin(), punct.end()), punct.end());
  d.punctures = punct;

  auto expr_on = [](const PiecewiseSymbol& s, double a, double b) -> const Expr* {
    for (const auto& p : s.pieces_)
      if (p.lo < p.hi && p.lo <= a && b <= p.hi) return &p.expr;
    return nullptr;
  };
  auto expr_at = [](const PiecewiseSymbol& s, double x) -> const Expr* {
    for (const auto& p : s.pieces_)
      if (p.lo == p.hi && p.lo == x) return &p.expr;
    if (s.domain_.is_puncture(x)) return nullptr;
    for (const auto& p : s.pieces_)
      if (p.lo < p.hi && x >= p.lo && x <= p.hi) return &p.expr;
    return nullptr;
  };

  std::vector<double> br;
  for (const auto* s : {&m, &n})
    for (const auto& p : s->pieces_) {
      br.push_back(p.lo);
      br.push_back(p.hi);
    }
  for (double p : punct) br.push_back(p);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());

  std::vector<Piece> pieces;
  for (std::size_t k = 0; k + 1 < br.size(); ++k) {
    const Expr* e1 = expr_on(m, br[k], br[k + 1]);
    const Expr* e2 = expr_on(n, br[k], br[k + 1]);
    if (!e1 || !e2) throw Error(Errc::InvalidInput, "symbols do not cover a common interval");
    pieces.push_back({br[k], br[k + 1], f(*e1, *e2)});
  }
  // point values survive where both factors have a value
  for (const auto* s : {&m, &n})
    for (const auto& p : s->pieces_) {
      if (p.lo != p.hi) continue;
      bool dup = std::any_of(pieces.begin(), pieces.end(),
                             [&](const Piece& q) { return q.lo == q.hi && q.lo == p.lo; });
      const Expr* e1 = expr_at(m, p.lo);
      const Expr* e2 = expr_at(n, p.lo);
      if (!dup && e1 && e2) pieces.push_back({p.lo, p.lo, f(*e1, *e2)});
    }
  // a puncture of one factor where both now have values is no longer a puncture
  std::vector<double> keep;
  for (double p : punct) {
    bool valued = std::any_of(pieces.begin(), pieces.end(),
                              [&](const Piece& q) { return q.lo == q.hi && q.lo == p; });
    if (!valued) keep.push_back(p);
  }
  d.punctures = keep;
  return PiecewiseSymbol(d, std::move(pieces));
}

PiecewiseSymbol PiecewiseSymbol::conj() const {
  return map([](const Expr& e) { return Expr::func(Expr::Fn::Conj, e); });
}

PiecewiseSymbol PiecewiseSymbol::abs() const {
  return map([](const Expr& e) { return Expr::func(Expr::Fn::Abs, e); });
}

PiecewiseSymbol PiecewiseSymbol::with_declarations(std::vector<Declaration> d) const {
  return PiecewiseSymbol(domain_, pieces_, std::move(d));
}

void PiecewiseSymbol::mark_verified(std::vector<Detection> det) {
  verified_ = true;
  detections_ = std::move(det);
}

nlohmann::json PiecewiseSymbol::to_json() const {
  nlohmann::json j;
  const char* base = domain_.base == BaseKind::ClosedInterval ? "ClosedInterval"
                     : domain_.base == BaseKind::HalfLine     ? "HalfLine"
                                                              : "RealLine";
  j["domain"] = {{"base", base},
                 {"lo", number_json(domain_.left())},
                 {"hi", number_json(domain_.right())},
                 {"punctures", domain_.punctures},
                 {"infinity", domain_.includes_infinity}};
  j["pieces"] = nlohmann::json::array();
  for (const auto& p : pieces_)
    j["pieces"].push_back({{"lo", number_json(p.lo)}, {"hi", number_json(p.hi)}, {"expr", p.expr.str()}});
  j["declarations"] = nlohmann::json::array();
  for (const auto& d : decls_) {
    nlohmann::json dj;
    dj["at"] = d.at.infinity ? nlohmann::json("inf") : nlohmann::json(d.at.x);
    dj["class"] = point_class_name(d.cls);
    if (d.limit) dj["limit"] = complex_json(*d.limit);
    j["declarations"].push_back(dj);
  }
  return j;
}

PiecewiseSymbol PiecewiseSymbol::from_json(const nlohmann::json& j) {
  try {
    const auto& dj = j.at("domain");
    std::string base = dj.at("base").get<std::string>();
    std::vector<double> punct;
    if (dj.contains("punctures"))
      for (const auto& p : dj["punctures"]) punct.push_back(number_from_json(p));
    DomainSpec d;
    if (base == "ClosedInterval")
      d = DomainSpec::interval(number_from_json(dj.at("lo")), number_from_json(dj.at("hi")), punct);
    else if (base == "HalfLine")
      d = DomainSpec::half_line(number_from_json(dj.at("lo")), punct);
    else if (base == "RealLine")
      d = DomainSpec::real_line(punct);
    else
      throw Error(Errc::InvalidInput, "unknown domain base '" + base + "'");
    if (dj.contains("infinity") && dj["infinity"].get<bool>() != d.includes_infinity)
      throw Error(Errc::InvalidInput, "'infinity' flag contradicts the base");

    std::vector<Piece> pieces;
    for (const auto& pj : j.at("pieces"))
      pieces.push_back({number_from_json(pj.at("lo")), number_from_json(pj.at("hi")),
                        Expr::parse(pj.at("expr").get<std::string>())});
    std::vector<Declaration> decls;
    if (j.contains("declarations"))
      for (const auto& dd : j["declarations"]) {
        Declaration decl;
        const auto& at = dd.at("at");
        if (at.is_string() && (at.get<std::string>() == "inf" || at.get<std::string>() == "infinity"))
          decl.at = Location::inf();
        else
          decl.at = Location::at(number_from_json(at));
        decl.cls = class_from_string(dd.at("class").get<std::string>());
        if (dd.contains("limit")) decl.limit = complex_from_json(dd["limit"]);
        decls.push_back(decl);
      }
    return PiecewiseSymbol(d, std::move(pieces), std::move(decls));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidInput, std::string("symbol file: ") + e.what());
  }
}

PiecewiseSymbol PiecewiseSymbol::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidInput, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidInput, path + ": " + e.what());
  }
  return from_json(j);
}

// --------------------------------------------------------------- Detection

namespace {

enum class Pattern { Converges, BlowsUp, Oscillates, None };

struct Side {
  Pattern pattern = Pattern::None;
  cd limit{0.0};
  std::string label;
};

Side classify_sequence(const std::vector<cd>& v, const Config& cfg) {
  Side s;
  const int n = static_cast<int>(v.size());
  const int w = std::min(cfg.tail_window, n);
  for (const auto& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      s.label = "non-finite sample";
      return s;
    }
  double maxabs = 0.0;
  for (const auto& z : v) maxabs = std::max(maxabs, std::abs(z));
  const cd last = v.back();
  double spread = 0.0;
  for (int k = n - w; k < n; ++k) spread = std::max(spread, std::abs(v[k] - last));
  if (spread < cfg.tol_lim) {
    s.pattern = Pattern::Converges;
    s.limit = last;
    s.label = "converges";
    return s;
  }
  bool up = true;
  for (int k = n - w; k < n; ++k) {
    if (std::abs(v[k]) <= cfg.blowup) up = false;
    if (k > n - w && !(std::abs(v[k]) > std::abs(v[k - 1]))) up = false;
  }
  if (up) {
    s.pattern = Pattern::BlowsUp;
    s.label = "blows up";
    return s;
  }
  if (maxabs <= cfg.blowup) {
    cd mean(0.0);
    double msq = 0.0;
    for (int k = n - w; k < n; ++k) {
      mean += v[k];
      msq += std::norm(v[k]);
    }
    mean /= double(w);
    msq /= double(w);
    double var = 0.0;
    for (int k = n - w; k < n; ++k) var += std::norm(v[k] - mean);
    var /= double(w);
    if (var > cfg.osc_rel * msq) {
      s.pattern = Pattern::Oscillates;
      s.label = "bounded oscillation";
      return s;
    }
  }
  s.label = "no pattern";
  return s;
}

// breakpoints adjacent to x (domain ends and other punctures)
std::pair<double, double> neighbours(const DomainSpec& d, double x) {
  double l = d.left(), r = d.right();
  for (double p : d.punctures) {
    if (p < x) l = std::max(l, p);
    if (p > x) r = std::min(r, p);
  }
  return {l, r};
}

}  // namespace

Detection detect_class(const PiecewiseSymbol& m, const Location& at, const Config& cfg) {
  const DomainSpec& d = m.domain();
  std::vector<std::vector<cd>> seqs;
  Detection det;
  const int K = cfg.approach_steps;
  if (at.infinity) {
    if (d.compact()) throw Error(Errc::InvalidInput, "no point at infinity on a compact domain");
    double edge = d.punctures.empty() ? 0.0 : d.punctures.back();
    if (d.base == BaseKind::HalfLine) edge = std::max(edge, d.lo);
    double s0 = std::max(1.0, std::abs(edge) + 1.0);
    std::vector<cd> v;
    for (int k = 0; k < K; ++k) v.push_back(m(s0 * std::ldexp(1.0, k)));
    seqs.push_back(v);
    det.sides.push_back("+inf");
    if (d.base == BaseKind::RealLine) {
      double e2 = d.punctures.empty() ? 0.0 : d.punctures.front();
      double t0 = std::max(1.0, std::abs(e2) + 1.0);
      std::vector<cd> u;
      for (int k = 0; k < K; ++k) u.push_back(m(-t0 * std::ldexp(1.0, k)));
      seqs.push_back(u);
      det.sides.push_back("-inf");
    }
  } else {
    const double p = at.x;
    auto [l, r] = neighbours(d, p);
    if (p > d.left()) {
      double h0 = std::isfinite(l) ? std::min(1.0, (p - l) / 2) : 1.0;
      std::vector<cd> v;
      for (int k = 0; k < K; ++k) v.push_back(m(p - h0 * std::ldexp(1.0, -k)));
      seqs.push_back(v);
      det.sides.push_back("left");
    }
    if (p < d.right()) {
      double h0 = std::isfinite(r) ? std::min(1.0, (r - p) / 2) : 1.0;
      std::vector<cd> v;
      for (int k = 0; k < K; ++k) v.push_back(m(p + h0 * std::ldexp(1.0, -k)));
      seqs.push_back(v);
      det.sides.push_back("right");
    }
  }

  std::vector<Side> sides;
  for (const auto& s : seqs) sides.push_back(classify_sequence(s, cfg));
  for (std::size_t k = 0; k < sides.size(); ++k) det.sides[k] += ": " + sides[k].label;

  auto all = [&](Pattern p) {
    return std::all_of(sides.begin(), sides.end(), [p](const Side& s) { return s.pattern == p; });
  };
  auto any = [&](Pattern p) {
    return std::any_of(sides.begin(), sides.end(), [p](const Side& s) { return s.pattern == p; });
  };
  if (sides.empty()) {
    det.cls = PointClass::Inconclusive;
  } else if (all(Pattern::Converges)) {
    bool agree = true;
    for (const auto& s : sides)
      if (std::abs(s.limit - sides.front().limit) >= cfg.tol_lim) agree = false;
    det.cls = agree ? PointClass::RegB : PointClass::SingSupp;  // a jump has no continuous extension
    det.limit = sides.front().limit;
  } else if (all(Pattern::BlowsUp)) {
    det.cls = PointClass::RegInf;
  } else if (any(Pattern::Oscillates) && !any(Pattern::None)) {
    det.cls = PointClass::SingSupp;
  } else if (!any(Pattern::None)) {
    det.cls = PointClass::SingSupp;  // finite limit on one side, infinite on the other
  } else {
    det.cls = PointClass::Inconclusive;
  }
  return det;
}

Detection classify_point(const PiecewiseSymbol& m, const Declaration& d, const Config& cfg) {
  Detection det = detect_class(m, d.at, cfg);
  bool ok = false;
  switch (d.cls) {
    case PointClass::RegB:
      ok = det.cls == PointClass::RegB && (!d.limit || std::abs(det.limit - *d.limit) < cfg.tol_lim);
      break;
    case PointClass::Removable: ok = det.cls == PointClass::RegB; break;
    default: ok = det.cls == d.cls; break;
  }
  if (ok) return det;
  std::string msg = "at " + d.at.str() + ": declared " + point_class_name(d.cls) + ", detected " +
                    point_class_name(det.cls);
  for (const auto& s : det.sides) msg += "; " + s;
  if (det.cls == PointClass::Inconclusive) throw Error(Errc::Inconclusive, msg);
  throw Error(Errc::DeclarationMismatch, msg);
}

PiecewiseSymbol verify_declarations(const PiecewiseSymbol& m, const Config& cfg) {
  for (double p : m.domain().punctures)
    if (!m.declaration_at(Location::at(p)))
      throw Error(Errc::UnverifiedDeclaration, "puncture " + Location::at(p).str() + " has no declaration");
  std::vector<Detection> det;
  for (const auto& d : m.declarations()) det.push_back(classify_point(m, d, cfg));
  PiecewiseSymbol out = m;
  out.mark_verified(std::move(det));
  return out;
}

// ------------------------------------------------------------ hat & report

PiecewiseSymbol hat_extension(const PiecewiseSymbol& m) {
  if (!m.verified()) throw Error(Errc::UnverifiedDeclaration, "hat extension needs verified declarations");
  DomainSpec d = m.domain();
  std::vector<Piece> pieces;
  for (const auto& p : m.pieces())
    if (!(p.lo == p.hi && d.is_puncture(p.lo))) pieces.push_back(p);
  std::vector<Declaration> kept;
  std::vector<Detection> kept_det;
  std::vector<double> punct;
  const auto& decls = m.declarations();
  const auto& dets = m.detections();
  for (std::size_t k = 0; k < decls.size(); ++k) {
    const auto& dc = decls[k];
    bool absorb = !dc.at.infinity && (dc.cls == PointClass::RegB || dc.cls == PointClass::Removable);
    if (absorb) {
      cd lim = dc.limit ? *dc.limit : dets[k].limit;
      pieces.push_back({dc.at.x, dc.at.x, constant(lim)});
    } else {
      kept.push_back(dc);
      kept_det.push_back(dets[k]);
    }
  }
  for (double p : d.punctures) {
    const Declaration* dc = m.declaration_at(Location::at(p));
    if (dc && (dc->cls == PointClass::RegInf || dc->cls == PointClass::SingSupp)) punct.push_back(p);
  }
  d.punctures = punct;
  // keep point values the user attached to remaining punctures: they are irrelevant but harmless
  for (const auto& p : m.pieces())
    if (p.lo == p.hi && std::binary_search(punct.begin(), punct.end(), p.lo)) pieces.push_back(p);
  PiecewiseSymbol out(d, std::move(pieces), std::move(kept));
  out.mark_verified(std::move(kept_det));
  return out;
}

std::vector<double> nonregular_points(const PiecewiseSymbol& m) {
  if (!m.verified()) throw Error(Errc::UnverifiedDeclaration, "symbol not verified");
  std::vector<double> out;
  for (const auto& d : m.declarations())
    if (!d.at.infinity && (d.cls == PointClass::RegInf || d.cls == PointClass::SingSupp)) out.push_back(d.at.x);
  std::sort(out.begin(), out.end());
  return out;
}

RegularityReport regularity_report(const PiecewiseSymbol& m, const Config& cfg) {
  if (!m.verified()) throw Error(Errc::UnverifiedDeclaration, "regularity report needs verified declarations");
  RegularityReport r;
  const auto& decls = m.declarations();
  for (std::size_t k = 0; k < decls.size(); ++k) r.points.push_back({decls[k], m.detections()[k]});

  bool singsupp = false, reginf = false;
  for (const auto& d : decls) {
    if (d.at.infinity) continue;
    singsupp |= d.cls == PointClass::SingSupp;
    reginf |= d.cls == PointClass::RegInf;
  }
  r.reg_dense = true;
  r.reg_dense_reason = "finitely many punctures in a one-dimensional base have empty interior";
  r.essentially_defined = r.reg_dense;
  r.orthogonally_closed = r.essentially_defined;  // t_m is the adjoint of t_conj(m)
  r.graph_regular = r.reg_dense && !singsupp;
  r.regular = r.graph_regular && !reginf;

  if (r.graph_regular) {
    PiecewiseSymbol h = hat_extension(m);
    std::vector<Declaration> zero_at_inf;
    for (double p : h.domain().punctures) zero_at_inf.push_back({Location::at(p), PointClass::RegB, cd(0.0)});
    auto a = h.map([](const Expr& e) {
      return Expr::number(1.0) / (Expr::number(1.0) + Expr::func(Expr::Fn::Abs, e).pow(2));
    });
    auto b = h.map([](const Expr& e) {
      return e / (Expr::number(1.0) + Expr::func(Expr::Fn::Abs, e).pow(2));
    });
    r.a_symbol = hat_extension(verify_declarations(a.with_declarations(zero_at_inf), cfg));
    r.b_symbol = hat_extension(verify_declarations(b.with_declarations(zero_at_inf), cfg));
  }
  return r;
}

nlohmann::json RegularityReport::to_json() const {
  nlohmann::json j;
  j["points"] = nlohmann::json::array();
  for (const auto& p : points) {
    nlohmann::json pj;
    pj["at"] = p.declared.at.str();
    pj["declared"] = point_class_name(p.declared.cls);
    pj["detected"] = point_class_name(p.detected.cls);
    if (p.detected.cls == PointClass::RegB) pj["limit"] = complex_json(p.detected.limit);
    pj["sides"] = p.detected.sides;
    j["points"].push_back(pj);
  }
  j["verdicts"] = {{"reg_dense", reg_dense},
                   {"essentially_defined", essentially_defined},
                   {"orthogonally_closed", orthogonally_closed},
                   {"graph_regular", graph_regular},
                   {"regular", regular}};
  j["reg_dense_reason"] = reg_dense_reason;
  if (a_symbol) j["a_symbol"] = a_symbol->to_json();
  if (b_symbol) j["b_symbol"] = b_symbol->to_json();
  return j;
}

// ----------------------------------------------------- symbol relations

std::vector<double> sample_grid(const DomainSpec& d, int n, double R) {
  std::vector<double> br{d.left()};
  for (double p : d.punctures)
    if (p > d.left() && p < d.right()) br.push_back(p);
  br.push_back(d.right());
  const int parts = static_cast<int>(br.size()) - 1;
  const int per = std::max(8, n / std::max(1, parts));
  std::vector<double> xs;
  for (int k = 0; k < parts; ++k) {
    double a = br[k], b = br[k + 1];
    if (!std::isfinite(a)) a = std::min(-R, b - R);
    if (!std::isfinite(b)) b = std::max(R, a + R);
    const int nd = 20;
    const int nc = std::max(4, per - 2 * nd);
    for (int j = 0; j < nc; ++j)
      xs.push_back(0.5 * (a + b) + 0.5 * (b - a) * std::cos(std::numbers::pi * (j + 0.5) / nc));
    for (int j = 1; j <= nd; ++j) {
      double h = 0.5 * (b - a) * std::ldexp(1.0, -j);
      xs.push_back(a + h);
      xs.push_back(b - h);
    }
    if (!d.is_puncture(a)) xs.push_back(a);
    if (!d.is_puncture(b)) xs.push_back(b);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  xs.erase(std::remove_if(xs.begin(), xs.end(), [&](double x) { return d.is_puncture(x) || !d.contains(x); }),
           xs.end());
  return xs;
}

namespace {

PiecewiseSymbol verified(const PiecewiseSymbol& m, const Config& cfg) {
  return m.verified() ? m : verify_declarations(m, cfg);
}

}  // namespace

bool symbol_equivalent(const PiecewiseSymbol& m1, const PiecewiseSymbol& m2, const Config& cfg) {
  PiecewiseSymbol h1 = hat_extension(verified(m1, cfg));
  PiecewiseSymbol h2 = hat_extension(verified(m2, cfg));
  if (nonregular_points(h1) != nonregular_points(h2)) return false;
  DomainSpec common = h1.domain();
  for (double p : h2.domain().punctures) common.punctures.push_back(p);
  std::sort(common.punctures.begin(), common.punctures.end());
  common.punctures.erase(std::unique(common.punctures.begin(), common.punctures.end()), common.punctures.end());
  for (double x : sample_grid(common, 2000, cfg.window_R)) {
    cd a = h1(x), b = h2(x);
    if (std::abs(a - b) > cfg.symbol_tol * std::max(1.0, std::abs(a))) return false;
  }
  return true;
}

bool domain_membership(const PiecewiseSymbol& m, const PiecewiseSymbol& f, const Config& cfg) {
  PiecewiseSymbol mh = hat_extension(verified(m, cfg));
  PiecewiseSymbol fh = hat_extension(verified(f, cfg));
  if (!fh.domain().punctures.empty())
    throw Error(Errc::InvalidInput, "domain membership needs a continuous f (punctures remain after extension)");
  for (double p : nonregular_points(mh))
    if (std::abs(fh(p)) > cfg.vanish_tol) return false;
  PiecewiseSymbol prod = PiecewiseSymbol::combine(mh, fh, [](const Expr& a, const Expr& b) { return a * b; });
  for (double p : prod.domain().punctures)
    if (detect_class(prod, Location::at(p), cfg).cls != PointClass::RegB) return false;
  if (!prod.domain().compact()) {
    for (const auto* s : {&fh, &prod}) {
      Detection di = detect_class(*s, Location::inf(), cfg);
      if (di.cls != PointClass::RegB || std::abs(di.limit) > cfg.tol_lim) return false;
    }
  }
  return true;
}

bool range_membership_one_plus_tt(const PiecewiseSymbol& m, const PiecewiseSymbol& g, const Config& cfg) {
  PiecewiseSymbol mh = verified(m, cfg);
  PiecewiseSymbol gh = hat_extension(verified(g, cfg));
  for (const auto& d : mh.declarations()) {
    if (d.at.infinity || d.cls != PointClass::SingSupp) continue;
    cd v = gh(d.at.x);
    if (!std::isfinite(v.real()) || std::abs(v) > cfg.vanish_tol) return false;
  }
  return true;
}

}  // namespace grreg
