#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinweb/projcalc.hpp"
#include "spinweb/splitcore.hpp"
#include "spinweb/su2rep.hpp"

namespace spinweb::geo {

using Point = std::array<double, 2>;

/// Geometric and parameter tolerances for all coincidence decisions.
inline constexpr double kGeomTol = 1e-9;
inline constexpr double kParamTol = 1e-9;

/// Planar polyline with a strictly increasing parameter value per vertex,
/// running from parameter 0 to parameter 1.
class ParamPolyline {
public:
  ParamPolyline() = default;
  ParamPolyline(std::vector<Point> vertices, std::vector<double> params);

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<double>& params() const { return params_; }
  Point at(double t) const;

private:
  std::vector<Point> vertices_;
  std::vector<double> params_;
};

using EdgeTuple = std::vector<ParamPolyline>;

/// Outcome of the consistent-parametrization check: coinciding image points
/// must coincide in parameter.
struct ConsistencyViolation {
  std::size_t i = 0, j = 0; // path indices, 0-based
  double ti = 0.0, tj = 0.0;
};
struct ConsistencyReport {
  bool ok = true;
  std::vector<ConsistencyViolation> violations;
};
ConsistencyReport check_consistent(const EdgeTuple& t);

/// Closed parameter interval.
struct Interval {
  double lo = 0.0, hi = 0.0;
};

/// Maximal closed intervals on which paths i and j coincide as parametrized
/// maps; disjoint and sorted. Requires a consistent tuple.
std::vector<Interval> coincidence_intervals(const EdgeTuple& t, std::size_t i,
                                            std::size_t j);

/// One piece of a decomposition: the restriction to [lo, hi], with the
/// distinct restricted paths (first-occurrence representatives) and the
/// splitting of the path tuple by restricted-path identity.
struct DecompositionPiece {
  double lo = 0.0, hi = 0.0;
  std::vector<std::size_t> reduction; // representative path indices
  split::Splitting splitting;
};
struct DecompositionResult {
  std::vector<double> breakpoints;
  std::vector<DecompositionPiece> pieces;
};

/// Cut [interval] at the endpoints of all maximal pairwise coincidence
/// intervals; on each piece, distinct restricted paths share no nontrivial
/// parameter subinterval.
DecompositionResult decompose(const EdgeTuple& t, const Interval& interval);

/// Restriction of a path to [lo, hi], reparametrized affinely onto [0, 1].
ParamPolyline restrict_path(const ParamPolyline& p, double lo, double hi);

/// Distinct paths of the tuple in first-occurrence order plus the splitting
/// induced by path identity.
struct ReductionResult {
  std::vector<std::size_t> reduction;
  split::Splitting splitting;
};
ReductionResult reduction_and_splitting(const EdgeTuple& t);

/// Paths from a common base at parameter 0, with a periodic descriptor of
/// the splittings repeating toward the base and the number of repetitions
/// realized in the truncated geometry.
struct Web {
  EdgeTuple paths;
  std::vector<split::Splitting> tail;
  std::size_t realized = 0;

  std::size_t n() const { return paths.size(); }
};

/// Validate web structure (common base, consistency, tail lengths); throws
/// input_error on violation.
void validate_web(const Web& w);

struct SpinWeb {
  Web web;
  proj::RepTuple labels;

  SpinWeb(Web w, proj::RepTuple l);
};

/// Open parameter intervals avoiding vertices, endpoints, junctions and
/// isolated crossings of the realized polylines; the complement is finite.
std::vector<Interval> regular_set(const Web& w);

/// Splitting of strand coincidences at a regular parameter.
split::Splitting splitting_at(const Web& w, double tau);

/// Union of all realized regular splittings plus the tail descriptor.
split::OrderedTypeSet types_set(const Web& w);

/// The splittings recurring in every neighbourhood of the base, read off the
/// periodic tail descriptor.
std::vector<split::Splitting> limit_splittings(const Web& w);

/// Weak degeneracy: some regular splitting has a block whose selected spins
/// contain the trivial representation.
struct DegeneracyReport {
  bool degenerate = false;
  std::optional<double> tau;
  std::optional<split::BitVector> witness;
};
DegeneracyReport is_weakly_degenerate(const SpinWeb& sw);

/// Four-strand web of 2B shrinking double bubbles: along decreasing
/// parameter the regular splittings read V1, V2, V1, V2, ... with
/// V1 = {1100, 0011} and V2 = {1010, 0101}. Labels are supplied separately.
Web standard_web(std::size_t bubbles_per_type);

/// Product of spin-j matrix coefficients, one group variable per path slot.
struct CoefficientFactor {
  std::size_t slot = 0; // 0-based path index
  su2::Spin j;
  int mu = 1, nu = 1; // 1-based, 1 = highest weight
  bool conjugate = false;
};
struct CylinderFunction {
  std::size_t n = 0; // tuple length
  std::vector<CoefficientFactor> factors;
};

/// Integral of f over generalized connections, reduced to a finite Haar
/// integral through the tuple's splitting. Requires a nice tuple (reduction
/// is a hyph).
std::complex<double> integrate_cylinder(const CylinderFunction& f, const EdgeTuple& t);

/// Monte-Carlo estimate of the same integral with i.i.d. Haar assignments to
/// the reduction edges.
struct McResult {
  std::complex<double> estimate;
  double stderr_est = 0.0;
};
McResult mc_cylinder_expect(const CylinderFunction& f, const EdgeTuple& t,
                            std::size_t samples, std::uint64_t seed);

/// End-to-end decay series: witness filter from is_weakly_degenerate, gap
/// chains of at least min_gap projectors from the periodic tail.
std::vector<double> strong_degeneracy_series(const SpinWeb& sw, std::size_t l_steps,
                                             std::size_t min_gap = 20);

/// Parse the web JSON schema; error messages cite the offending field path.
SpinWeb parse_web_json(const std::string& text);

} // namespace spinweb::geo
