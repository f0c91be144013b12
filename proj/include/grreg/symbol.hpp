#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "grreg/config.hpp"
#include "grreg/expr.hpp"

namespace grreg {

enum class BaseKind { ClosedInterval, HalfLine, RealLine };

struct DomainSpec {
  BaseKind base = BaseKind::ClosedInterval;
  double lo = 0.0, hi = 1.0;  // hi unused for HalfLine, both unused for RealLine
  std::vector<double> punctures;
  bool includes_infinity = false;

  static DomainSpec interval(double lo, double hi, std::vector<double> punctures = {});
  static DomainSpec half_line(double lo, std::vector<double> punctures = {});
  static DomainSpec real_line(std::vector<double> punctures = {});

  bool compact() const { return base == BaseKind::ClosedInterval; }
  double left() const;   // -inf for RealLine
  double right() const;  // +inf for HalfLine and RealLine
  bool contains(double x) const;
  bool is_puncture(double x) const;
  void validate() const;
  bool operator==(const DomainSpec& o) const;
};

enum class PointClass { RegB, RegInf, SingSupp, Removable, Inconclusive };
const char* point_class_name(PointClass c);

// A location where a symbol may misbehave: a finite puncture or the point at infinity.
struct Location {
  bool infinity = false;
  double x = 0.0;
  static Location at(double v) { return {false, v}; }
  static Location inf() { return {true, 0.0}; }
  std::string str() const;
  bool operator==(const Location& o) const { return infinity == o.infinity && (infinity || x == o.x); }
};

struct Declaration {
  Location at;
  PointClass cls = PointClass::RegB;
  std::optional<cd> limit;  // RegB only; absent means "some finite limit"
};

struct Piece {
  double lo, hi;  // lo == hi is a single point value
  Expr expr;
};

struct Detection {
  PointClass cls = PointClass::Inconclusive;
  cd limit{0.0};
  std::vector<std::string> sides;  // per-side pattern, for diagnostics
};

class PiecewiseSymbol {
public:
  PiecewiseSymbol() = default;
  PiecewiseSymbol(DomainSpec d, std::vector<Piece> pieces, std::vector<Declaration> decls = {});

  // A single expression on the whole domain minus punctures.
  static PiecewiseSymbol uniform(DomainSpec d, const Expr& e, std::vector<Declaration> decls = {});

  const DomainSpec& domain() const { return domain_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  const std::vector<Declaration>& declarations() const { return decls_; }
  const Declaration* declaration_at(const Location& l) const;

  // Value at x; NaN at punctures without a point value or outside the domain.
  cd eval(double x) const;
  cd operator()(double x) const { return eval(x); }

  // Pointwise constructions; declarations are dropped.
  PiecewiseSymbol map(const std::function<Expr(const Expr&)>& f) const;
  static PiecewiseSymbol combine(const PiecewiseSymbol& m, const PiecewiseSymbol& n,
                                 const std::function<Expr(const Expr&, const Expr&)>& f);
  PiecewiseSymbol conj() const;
  PiecewiseSymbol abs() const;
  PiecewiseSymbol with_declarations(std::vector<Declaration> d) const;

  bool verified() const { return verified_; }
  void mark_verified(std::vector<Detection> det);
  const std::vector<Detection>& detections() const { return detections_; }

  nlohmann::json to_json() const;
  static PiecewiseSymbol from_json(const nlohmann::json& j);
  static PiecewiseSymbol load(const std::string& path);

private:
  DomainSpec domain_;
  std::vector<Piece> pieces_;
  std::vector<Declaration> decls_;
  bool verified_ = false;
  std::vector<Detection> detections_;
};

// Numerical detector: samples along geometric sequences toward the location.
Detection detect_class(const PiecewiseSymbol& m, const Location& at, const Config& cfg);

// Declare-then-verify. Throws DeclarationMismatch or Inconclusive.
Detection classify_point(const PiecewiseSymbol& m, const Declaration& d, const Config& cfg);

// Verifies every declaration; throws UnverifiedDeclaration if a puncture has none.
PiecewiseSymbol verify_declarations(const PiecewiseSymbol& m, const Config& cfg);

struct PointReport {
  Declaration declared;
  Detection detected;
};

struct RegularityReport {
  std::vector<PointReport> points;
  bool reg_dense = false;
  std::string reg_dense_reason;
  bool essentially_defined = false;
  bool orthogonally_closed = false;
  bool graph_regular = false;
  bool regular = false;
  std::optional<PiecewiseSymbol> a_symbol, b_symbol;

  nlohmann::json to_json() const;
};

RegularityReport regularity_report(const PiecewiseSymbol& m, const Config& cfg);

// Absorbs RegB/Removable punctures as point values. Requires verification.
PiecewiseSymbol hat_extension(const PiecewiseSymbol& m);

// Punctures that are not in reg of m-hat (RegInf and SingSupp).
std::vector<double> nonregular_points(const PiecewiseSymbol& m);

bool symbol_equivalent(const PiecewiseSymbol& m1, const PiecewiseSymbol& m2, const Config& cfg);
bool domain_membership(const PiecewiseSymbol& m, const PiecewiseSymbol& f, const Config& cfg);
bool range_membership_one_plus_tt(const PiecewiseSymbol& m, const PiecewiseSymbol& g,
                                  const Config& cfg);

// Sample points of the domain (the puncture set excluded), Chebyshev-distributed on each
// regular interval with dyadic refinement toward punctures; infinite ends are cut at window_R.
std::vector<double> sample_grid(const DomainSpec& d, int n, double window_R);

}  // namespace grreg
