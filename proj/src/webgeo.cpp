#include "spinweb/webgeo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "json.hpp"

#include "spinweb/errors.hpp"

namespace spinweb::geo {

namespace {

double dist(const Point& a, const Point& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

bool points_equal(const Point& a, const Point& b) { return dist(a, b) <= kGeomTol; }

} // namespace

ParamPolyline::ParamPolyline(std::vector<Point> vertices, std::vector<double> params)
    : vertices_(std::move(vertices)), params_(std::move(params)) {
  if (vertices_.size() < 2) throw input_error("a polyline needs at least two vertices");
  if (params_.size() != vertices_.size())
    throw input_error("vertex and parameter counts differ");
  if (std::abs(params_.front()) > kParamTol || std::abs(params_.back() - 1.0) > kParamTol)
    throw input_error("polyline parameters must run from 0 to 1");
  params_.front() = 0.0;
  params_.back() = 1.0;
  for (std::size_t k = 1; k < params_.size(); ++k)
    if (params_[k] <= params_[k - 1] + kParamTol)
      throw input_error("polyline parameters must be strictly increasing");
  for (std::size_t k = 1; k < vertices_.size(); ++k)
    if (points_equal(vertices_[k], vertices_[k - 1]))
      throw input_error("consecutive polyline vertices must be distinct");
}

Point ParamPolyline::at(double t) const {
  t = std::clamp(t, 0.0, 1.0);
  auto it = std::upper_bound(params_.begin(), params_.end(), t);
  std::size_t seg = it == params_.begin() ? 0 : static_cast<std::size_t>(it - params_.begin()) - 1;
  seg = std::min(seg, params_.size() - 2);
  const double t0 = params_[seg], t1 = params_[seg + 1];
  const double u = (t - t0) / (t1 - t0);
  return {vertices_[seg][0] + u * (vertices_[seg + 1][0] - vertices_[seg][0]),
          vertices_[seg][1] + u * (vertices_[seg + 1][1] - vertices_[seg][1])};
}

namespace {

/// One geometric meeting of two segments: the parameter of the shared point
/// (or overlap endpoint) on each path.
struct Meeting {
  double ti, tj;
};

/// All meetings of segment `si` of path a with segment `sj` of path b.
void segment_meetings(const ParamPolyline& a, std::size_t si, const ParamPolyline& b,
                      std::size_t sj, std::vector<Meeting>& out) {
  const Point& a0 = a.vertices()[si];
  const Point& a1 = a.vertices()[si + 1];
  const Point& b0 = b.vertices()[sj];
  const Point& b1 = b.vertices()[sj + 1];
  const double ta0 = a.params()[si], ta1 = a.params()[si + 1];
  const double tb0 = b.params()[sj], tb1 = b.params()[sj + 1];
  const double dax = a1[0] - a0[0], day = a1[1] - a0[1];
  const double dbx = b1[0] - b0[0], dby = b1[1] - b0[1];
  const double la = std::hypot(dax, day), lb = std::hypot(dbx, dby);
  const double cross = dax * dby - day * dbx;
  if (std::abs(cross) > 1e-12 * la * lb) {
    // Proper crossing of the supporting lines.
    const double rx = b0[0] - a0[0], ry = b0[1] - a0[1];
    const double s = (rx * dby - ry * dbx) / cross;
    const double u = (rx * day - ry * dax) / cross;
    const double sa = kGeomTol / la, sb = kGeomTol / lb;
    if (s >= -sa && s <= 1 + sa && u >= -sb && u <= 1 + sb)
      out.push_back({ta0 + std::clamp(s, 0.0, 1.0) * (ta1 - ta0),
                     tb0 + std::clamp(u, 0.0, 1.0) * (tb1 - tb0)});
    return;
  }
  // Parallel: meetings only if collinear within tolerance.
  const double off = std::abs((b0[0] - a0[0]) * day - (b0[1] - a0[1]) * dax) / la;
  if (off > kGeomTol) return;
  // Project b's endpoints onto a's direction (arclength along a).
  const double p0 = ((b0[0] - a0[0]) * dax + (b0[1] - a0[1]) * day) / la;
  const double p1 = ((b1[0] - a0[0]) * dax + (b1[1] - a0[1]) * day) / la;
  const double lo = std::max(0.0, std::min(p0, p1));
  const double hi = std::min(la, std::max(p0, p1));
  if (hi < lo - kGeomTol) return;
  for (double pos : {lo, std::max(lo, hi)}) {
    const double s = pos / la;
    const double u = std::abs(p1 - p0) < 1e-300 ? 0.0 : (pos - p0) / (p1 - p0);
    out.push_back({ta0 + std::clamp(s, 0.0, 1.0) * (ta1 - ta0),
                   tb0 + std::clamp(u, 0.0, 1.0) * (tb1 - tb0)});
    if (hi - lo <= kGeomTol) break; // single touch point
  }
}

void pair_meetings(const ParamPolyline& a, const ParamPolyline& b,
                   std::vector<Meeting>& out) {
  for (std::size_t si = 0; si + 1 < a.vertices().size(); ++si)
    for (std::size_t sj = 0; sj + 1 < b.vertices().size(); ++sj)
      segment_meetings(a, si, b, sj, out);
}

void require_consistent(const EdgeTuple& t) {
  const ConsistencyReport rep = check_consistent(t);
  if (!rep.ok) throw precondition_error("edge tuple is not consistently parametrized");
}

/// Sorted, deduplicated union of the parameter grids of two paths.
std::vector<double> merged_grid(const ParamPolyline& a, const ParamPolyline& b) {
  std::vector<double> grid = a.params();
  grid.insert(grid.end(), b.params().begin(), b.params().end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](double x, double y) { return std::abs(x - y) <= kParamTol; }),
             grid.end());
  return grid;
}

bool paths_equal(const ParamPolyline& a, const ParamPolyline& b) {
  for (double t : merged_grid(a, b))
    if (!points_equal(a.at(t), b.at(t))) return false;
  return true;
}

} // namespace

ConsistencyReport check_consistent(const EdgeTuple& t) {
  ConsistencyReport rep;
  std::vector<Meeting> meetings;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      meetings.clear();
      pair_meetings(t[i], t[j], meetings);
      for (const Meeting& m : meetings)
        if (std::abs(m.ti - m.tj) > kParamTol) {
          rep.ok = false;
          rep.violations.push_back({i, j, m.ti, m.tj});
        }
    }
  return rep;
}

std::vector<Interval> coincidence_intervals(const EdgeTuple& t, std::size_t i,
                                            std::size_t j) {
  if (i >= t.size() || j >= t.size()) throw input_error("path index out of range");
  require_consistent(t);
  const std::vector<double> grid = merged_grid(t[i], t[j]);
  std::vector<Interval> out;
  // Both restrictions are linear on every grid cell, so endpoint equality
  // decides coincidence of the whole cell.
  bool open = false;
  double start = 0.0;
  std::vector<bool> at_grid(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k)
    at_grid[k] = points_equal(t[i].at(grid[k]), t[j].at(grid[k]));
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const bool cell = at_grid[k] && at_grid[k + 1];
    if (cell && !open) {
      open = true;
      start = grid[k];
    } else if (!cell && open) {
      open = false;
      out.push_back({start, grid[k]});
    }
  }
  if (open) out.push_back({start, grid.back()});
  return out;
}

namespace {

/// Coincidence intervals for every pair, indexed by (i, j), i < j.
std::vector<std::vector<std::vector<Interval>>> all_coincidences(const EdgeTuple& t) {
  std::vector<std::vector<std::vector<Interval>>> table(
      t.size(), std::vector<std::vector<Interval>>(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j)
      table[i][j] = coincidence_intervals(t, i, j);
  return table;
}

bool interval_covers(const std::vector<Interval>& intervals, double lo, double hi) {
  for (const Interval& iv : intervals)
    if (iv.lo <= lo + kParamTol && iv.hi >= hi - kParamTol) return true;
  return false;
}

/// First-occurrence class ids under an equivalence decided per pair.
template <typename SameFn>
std::vector<std::size_t> class_ids(std::size_t n, SameFn same) {
  std::vector<std::size_t> ids(n);
  for (std::size_t p = 0; p < n; ++p) {
    ids[p] = p;
    for (std::size_t q = 0; q < p; ++q)
      if (ids[q] == q && same(q, p)) {
        ids[p] = q;
        break;
      }
  }
  return ids;
}

std::vector<std::size_t> representatives(const std::vector<std::size_t>& ids) {
  std::vector<std::size_t> reps;
  for (std::size_t p = 0; p < ids.size(); ++p)
    if (ids[p] == p) reps.push_back(p);
  return reps;
}

} // namespace

DecompositionResult decompose(const EdgeTuple& t, const Interval& interval) {
  if (t.empty()) throw input_error("cannot decompose an empty tuple");
  if (interval.hi <= interval.lo + kParamTol)
    throw input_error("decomposition interval must be nontrivial");
  const auto table = all_coincidences(t);
  std::vector<double> cuts{interval.lo, interval.hi};
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j)
      for (const Interval& iv : table[i][j])
        for (double endpoint : {iv.lo, iv.hi})
          if (endpoint > interval.lo + kParamTol && endpoint < interval.hi - kParamTol)
            cuts.push_back(endpoint);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double x, double y) { return std::abs(x - y) <= kParamTol; }),
             cuts.end());
  DecompositionResult res;
  res.breakpoints = cuts;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k], hi = cuts[k + 1];
    auto same = [&](std::size_t p, std::size_t q) {
      return interval_covers(table[std::min(p, q)][std::max(p, q)], lo, hi);
    };
    const std::vector<std::size_t> ids = class_ids(t.size(), same);
    DecompositionPiece piece;
    piece.lo = lo;
    piece.hi = hi;
    piece.reduction = representatives(ids);
    piece.splitting = split::splitting_of_tuple(ids);
    res.pieces.push_back(std::move(piece));
  }
  return res;
}

ParamPolyline restrict_path(const ParamPolyline& p, double lo, double hi) {
  if (hi <= lo + kParamTol) throw input_error("restriction interval must be nontrivial");
  std::vector<Point> vertices{p.at(lo)};
  std::vector<double> params{0.0};
  for (std::size_t k = 0; k < p.params().size(); ++k) {
    const double t = p.params()[k];
    if (t <= lo + kParamTol || t >= hi - kParamTol) continue;
    vertices.push_back(p.vertices()[k]);
    params.push_back((t - lo) / (hi - lo));
  }
  vertices.push_back(p.at(hi));
  params.push_back(1.0);
  return ParamPolyline(std::move(vertices), std::move(params));
}

ReductionResult reduction_and_splitting(const EdgeTuple& t) {
  if (t.empty()) throw input_error("reduction of an empty tuple is undefined");
  const std::vector<std::size_t> ids =
      class_ids(t.size(), [&](std::size_t p, std::size_t q) { return paths_equal(t[p], t[q]); });
  return {representatives(ids), split::splitting_of_tuple(ids)};
}

void validate_web(const Web& w) {
  if (w.paths.empty()) throw input_error("a web needs at least one path");
  const Point base = w.paths[0].at(0.0);
  for (const auto& p : w.paths)
    if (!points_equal(p.at(0.0), base))
      throw input_error("web paths must share the base point at parameter 0");
  require_consistent(w.paths);
  for (const auto& v : w.tail)
    if (v.n() != w.paths.size())
      throw input_error("tail splitting length does not match the number of paths");
}

SpinWeb::SpinWeb(Web w, proj::RepTuple l) : web(std::move(w)), labels(std::move(l)) {
  validate_web(web);
  if (labels.n() != web.n())
    throw input_error("label count does not match the number of web paths");
}

namespace {

/// Finitely many excluded parameters: endpoints, vertex parameters,
/// coincidence-interval endpoints, isolated crossing parameters.
std::vector<double> special_params(const Web& w) {
  std::set<double> s{0.0, 1.0};
  for (const auto& p : w.paths)
    for (double t : p.params()) s.insert(t);
  std::vector<Meeting> meetings;
  for (std::size_t i = 0; i < w.paths.size(); ++i)
    for (std::size_t j = i + 1; j < w.paths.size(); ++j) {
      meetings.clear();
      pair_meetings(w.paths[i], w.paths[j], meetings);
      for (const Meeting& m : meetings) s.insert(m.ti);
      for (const Interval& iv : coincidence_intervals(w.paths, i, j)) {
        s.insert(iv.lo);
        s.insert(iv.hi);
      }
    }
  std::vector<double> out(s.begin(), s.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double x, double y) { return std::abs(x - y) <= kParamTol; }),
            out.end());
  return out;
}

} // namespace

std::vector<Interval> regular_set(const Web& w) {
  validate_web(w);
  const std::vector<double> cuts = special_params(w);
  std::vector<Interval> out;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
    if (cuts[k + 1] - cuts[k] > kParamTol) out.push_back({cuts[k], cuts[k + 1]});
  return out;
}

split::Splitting splitting_at(const Web& w, double tau) {
  bool regular = false;
  for (const Interval& iv : regular_set(w))
    if (tau > iv.lo + kParamTol && tau < iv.hi - kParamTol) {
      regular = true;
      break;
    }
  if (!regular) throw input_error("parameter is not in the regular set");
  std::vector<Point> pts;
  pts.reserve(w.paths.size());
  for (const auto& p : w.paths) pts.push_back(p.at(tau));
  const std::vector<std::size_t> ids = class_ids(
      pts.size(), [&](std::size_t p, std::size_t q) { return points_equal(pts[p], pts[q]); });
  return split::splitting_of_tuple(ids);
}

split::OrderedTypeSet types_set(const Web& w) {
  std::vector<split::Splitting> all;
  for (const Interval& iv : regular_set(w))
    all.push_back(splitting_at(w, 0.5 * (iv.lo + iv.hi)));
  for (const auto& v : w.tail) all.push_back(v);
  return split::union_of(all);
}

std::vector<split::Splitting> limit_splittings(const Web& w) {
  if (w.tail.empty()) throw input_error("web has no tail descriptor");
  std::vector<split::Splitting> out;
  for (const auto& v : w.tail)
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  return out;
}

DegeneracyReport is_weakly_degenerate(const SpinWeb& sw) {
  DegeneracyReport rep;
  for (const Interval& iv : regular_set(sw.web)) {
    const double tau = 0.5 * (iv.lo + iv.hi);
    const split::Splitting v = splitting_at(sw.web, tau);
    for (const auto& block : v.elements()) {
      std::vector<su2::Spin> spins;
      for (std::size_t k = 0; k < block.size(); ++k)
        if (block[k] == 1) spins.push_back(sw.labels.spins[k]);
      if (su2::trivial_multiplicity(spins) > 0) {
        rep.degenerate = true;
        rep.tau = tau;
        rep.witness = block;
        return rep;
      }
    }
  }
  return rep;
}

Web standard_web(std::size_t bubbles_per_type) {
  if (bubbles_per_type < 1) throw input_error("standard web needs at least one bubble per type");
  const std::size_t total = 2 * bubbles_per_type;
  // Bubble widths shrink geometrically toward the base at parameter 0.
  const double rho = 0.75;
  std::vector<double> width(total);
  double sum = 0.0;
  for (std::size_t m = 0; m < total; ++m) {
    width[m] = std::pow(rho, static_cast<double>(total - 1 - m));
    sum += width[m];
  }
  std::vector<double> junction(total + 1, 0.0);
  for (std::size_t m = 0; m < total; ++m) junction[m + 1] = junction[m] + width[m] / sum;
  junction[total] = 1.0;

  std::vector<std::vector<Point>> verts(4);
  std::vector<std::vector<double>> params(4);
  for (int s = 0; s < 4; ++s) {
    verts[s].push_back({0.0, 0.0});
    params[s].push_back(0.0);
  }
  for (std::size_t m = 0; m < total; ++m) {
    // The tail descriptor [V1, V2] repeats toward the base, so the bubble
    // nearest the base (m = 0) is V1 and the types alternate outward.
    const bool type1 = m % 2 == 0;
    const double midt = 0.5 * (junction[m] + junction[m + 1]);
    const double h = 0.25 * (junction[m + 1] - junction[m]);
    for (int s = 0; s < 4; ++s) {
      // V1 pairs strands {0,1} and {2,3}; V2 pairs {0,2} and {1,3}.
      const bool upper = type1 ? s < 2 : s % 2 == 0;
      verts[s].push_back({midt, upper ? h : -h});
      params[s].push_back(midt);
      verts[s].push_back({junction[m + 1], 0.0});
      params[s].push_back(junction[m + 1]);
    }
  }
  Web w;
  for (int s = 0; s < 4; ++s) w.paths.emplace_back(std::move(verts[s]), std::move(params[s]));
  w.tail = {split::Splitting({split::BitVector("1100"), split::BitVector("0011")}),
            split::Splitting({split::BitVector("1010"), split::BitVector("0101")})};
  w.realized = bubbles_per_type;
  validate_web(w);
  return w;
}

namespace {

void require_nice(const EdgeTuple& t, const ReductionResult& red) {
  require_consistent(t);
  for (std::size_t a = 0; a < red.reduction.size(); ++a)
    for (std::size_t b = a + 1; b < red.reduction.size(); ++b) {
      const std::size_t i = red.reduction[a], j = red.reduction[b];
      for (const Interval& iv : coincidence_intervals(t, std::min(i, j), std::max(i, j)))
        if (iv.hi - iv.lo > kParamTol)
          throw input_error("tuple is not nice: distinct reduced paths share a segment");
    }
}

std::complex<double> coefficient_value(const CoefficientFactor& f,
                                       const su2::GroupElement& g) {
  const la::CMatrix m = su2::wigner_matrix(f.j, g.angles());
  if (f.mu < 1 || f.nu < 1 || f.mu > f.j.dim() || f.nu > f.j.dim())
    throw input_error("coefficient index out of range for the spin label");
  const std::complex<double> v = m(static_cast<std::size_t>(f.mu - 1),
                                   static_cast<std::size_t>(f.nu - 1));
  return f.conjugate ? std::conj(v) : v;
}

} // namespace

std::complex<double> integrate_cylinder(const CylinderFunction& f, const EdgeTuple& t) {
  if (f.n != t.size()) throw input_error("cylinder function arity does not match the tuple");
  for (const auto& factor : f.factors)
    if (factor.slot >= t.size()) throw input_error("cylinder factor slot out of range");
  const ReductionResult red = reduction_and_splitting(t);
  require_nice(t, red);
  std::complex<double> result = 1.0;
  for (const auto& block : red.splitting.elements()) {
    std::vector<const CoefficientFactor*> factors;
    int degree = 0;
    for (const auto& factor : f.factors)
      if (block[factor.slot] == 1) {
        factors.push_back(&factor);
        degree += factor.j.twice_j;
      }
    if (factors.empty()) continue; // integral of 1 over the block variable
    const la::CMatrix val = su2::haar_integrate(
        [&factors](const su2::EulerAngles& a) {
          const su2::GroupElement g = su2::GroupElement::from_angles(a);
          la::CMatrix out(1, 1);
          std::complex<double> prod = 1.0;
          for (const auto* f : factors) prod *= coefficient_value(*f, g);
          out(0, 0) = prod;
          return out;
        },
        degree);
    result *= val(0, 0);
  }
  return result;
}

McResult mc_cylinder_expect(const CylinderFunction& f, const EdgeTuple& t,
                            std::size_t samples, std::uint64_t seed) {
  if (samples < 100) throw input_error("Monte-Carlo estimate needs at least 100 samples");
  if (f.n != t.size()) throw input_error("cylinder function arity does not match the tuple");
  const ReductionResult red = reduction_and_splitting(t);
  require_nice(t, red);
  const split::SectionMap s = split::section_map(red.splitting);
  std::mt19937_64 rng(seed);
  double sum_re = 0.0, sum_im = 0.0, sq_re = 0.0, sq_im = 0.0;
  std::vector<su2::GroupElement> assignment(t.size());
  for (std::size_t k = 0; k < samples; ++k) {
    // One independent Haar element per reduction edge, shared along each
    // coincidence class.
    for (std::size_t rep_idx : red.reduction) assignment[rep_idx] = su2::sample_haar(rng);
    std::complex<double> prod = 1.0;
    for (const auto& factor : f.factors)
      prod *= coefficient_value(factor, assignment[s.targets[factor.slot]]);
    sum_re += prod.real();
    sum_im += prod.imag();
    sq_re += prod.real() * prod.real();
    sq_im += prod.imag() * prod.imag();
  }
  const double n = static_cast<double>(samples);
  McResult res;
  res.estimate = {sum_re / n, sum_im / n};
  const double var = std::max(0.0, sq_re / n - res.estimate.real() * res.estimate.real()) +
                     std::max(0.0, sq_im / n - res.estimate.imag() * res.estimate.imag());
  res.stderr_est = std::sqrt(var / n);
  return res;
}

std::vector<double> strong_degeneracy_series(const SpinWeb& sw, std::size_t l_steps,
                                             std::size_t min_gap) {
  const std::vector<split::Splitting> limits = limit_splittings(sw.web);
  // Witness: a limit splitting with a block whose spins contain the trivial
  // representation; q is the first strand of that block (1-based).
  const split::Splitting* witness = nullptr;
  std::size_t q = 0;
  for (const auto& w : limits) {
    for (const auto& block : w.elements()) {
      std::vector<su2::Spin> spins;
      for (std::size_t k = 0; k < block.size(); ++k)
        if (block[k] == 1) spins.push_back(sw.labels.spins[k]);
      if (su2::trivial_multiplicity(spins) > 0) {
        witness = &w;
        for (std::size_t k = 0; k < block.size(); ++k)
          if (block[k] == 1) {
            q = k + 1;
            break;
          }
        break;
      }
    }
    if (witness) break;
  }
  if (!witness)
    throw input_error("spin web is not weakly degenerate: no degeneracy witness");
  if (sw.web.realized < 2 * (l_steps + 1))
    throw input_error("insufficient tail: need at least 2(L+1) realized repetitions");

  const std::vector<split::Splitting>& tail = sw.web.tail;
  const std::size_t period = tail.size();
  std::size_t first = period;
  for (std::size_t p = 0; p < period; ++p)
    if (tail[p] == *witness) {
      first = p;
      break;
    }
  if (first == period)
    throw input_error("degeneracy witness does not occur in the tail descriptor");
  // Space filter applications so that at least min_gap projectors sit in
  // every gap; the chain repeats the periodic tail pattern.
  const std::size_t strides = (min_gap + period) / period;
  std::vector<split::Splitting> gap;
  for (std::size_t idx = 1; idx < strides * period; ++idx)
    gap.push_back(tail[(first + idx) % period]);
  proj::FilterDescriptor filter(sw.labels, *witness, q);
  proj::DecaySchedule schedule(std::move(filter),
                               std::vector<std::vector<split::Splitting>>(l_steps + 1, gap),
                               l_steps, 0.5);
  return proj::decay_experiment(schedule);
}

namespace {

using nlohmann::json;

const json& require_field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key))
    throw input_error(path + ": missing required field");
  return obj.at(key);
}

double require_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw input_error(path + ": expected a number");
  return v.get<double>();
}

} // namespace

SpinWeb parse_web_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw input_error(std::string("JSON parse error: ") + e.what());
  }
  const json& jpaths = require_field(root, "paths", "paths");
  if (!jpaths.is_array() || jpaths.empty())
    throw input_error("paths: expected a non-empty array");
  EdgeTuple paths;
  for (std::size_t p = 0; p < jpaths.size(); ++p) {
    const std::string base = "paths[" + std::to_string(p) + "]";
    const json& jv = require_field(jpaths[p], "vertices", base + ".vertices");
    const json& jt = require_field(jpaths[p], "params", base + ".params");
    if (!jv.is_array()) throw input_error(base + ".vertices: expected an array");
    if (!jt.is_array()) throw input_error(base + ".params: expected an array");
    std::vector<Point> vertices;
    for (std::size_t k = 0; k < jv.size(); ++k) {
      const std::string vp = base + ".vertices[" + std::to_string(k) + "]";
      if (!jv[k].is_array() || jv[k].size() != 2)
        throw input_error(vp + ": expected an [x, y] pair");
      vertices.push_back({require_number(jv[k][0], vp + "[0]"),
                          require_number(jv[k][1], vp + "[1]")});
    }
    std::vector<double> params;
    for (std::size_t k = 0; k < jt.size(); ++k)
      params.push_back(require_number(jt[k], base + ".params[" + std::to_string(k) + "]"));
    try {
      paths.emplace_back(std::move(vertices), std::move(params));
    } catch (const input_error& e) {
      throw input_error(base + ": " + e.what());
    }
  }
  const json& jlabels = require_field(root, "labels", "labels");
  if (!jlabels.is_array() || jlabels.size() != paths.size())
    throw input_error("labels: expected one spin label per path");
  std::vector<su2::Spin> spins;
  for (std::size_t k = 0; k < jlabels.size(); ++k) {
    const std::string lp = "labels[" + std::to_string(k) + "]";
    if (!jlabels[k].is_string()) throw input_error(lp + ": expected a spin string");
    try {
      spins.push_back(su2::Spin::parse(jlabels[k].get<std::string>()));
    } catch (const input_error& e) {
      throw input_error(lp + ": " + e.what());
    }
  }
  const json& jtail = require_field(root, "tail", "tail");
  const json& jsplits = require_field(jtail, "splittings", "tail.splittings");
  if (!jsplits.is_array()) throw input_error("tail.splittings: expected an array");
  std::vector<split::Splitting> tail;
  for (std::size_t k = 0; k < jsplits.size(); ++k) {
    const std::string sp = "tail.splittings[" + std::to_string(k) + "]";
    if (!jsplits[k].is_array()) throw input_error(sp + ": expected an array of bitstrings");
    std::vector<split::BitVector> elems;
    for (std::size_t e = 0; e < jsplits[k].size(); ++e) {
      const std::string ep = sp + "[" + std::to_string(e) + "]";
      if (!jsplits[k][e].is_string()) throw input_error(ep + ": expected a bitstring");
      try {
        elems.emplace_back(jsplits[k][e].get<std::string>());
      } catch (const input_error& err) {
        throw input_error(ep + ": " + err.what());
      }
    }
    try {
      tail.emplace_back(std::move(elems));
    } catch (const input_error& err) {
      throw input_error(sp + ": " + err.what());
    }
  }
  const json& jreal = require_field(jtail, "realized", "tail.realized");
  if (!jreal.is_number_unsigned()) throw input_error("tail.realized: expected a nonnegative integer");
  Web w;
  w.paths = std::move(paths);
  w.tail = std::move(tail);
  w.realized = jreal.get<std::size_t>();
  return SpinWeb(std::move(w), proj::RepTuple(std::move(spins)));
}

} // namespace spinweb::geo
