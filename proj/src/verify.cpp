#include "spinweb/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "spinweb/errors.hpp"
#include "spinweb/projcalc.hpp"
#include "spinweb/splitcore.hpp"
#include "spinweb/su2rep.hpp"
#include "spinweb/webgeo.hpp"

namespace spinweb::verify {

namespace {

using la::CMatrix;
using la::cplx;

Check equal_check(std::string name, double expected, double actual, double tol) {
  Check c;
  c.name = std::move(name);
  c.expected = expected;
  c.actual = actual;
  c.tolerance = tol;
  c.ok = std::abs(expected - actual) <= tol;
  return c;
}

Check bound_check(std::string name, double bound, double actual) {
  Check c;
  c.name = std::move(name);
  c.expected = bound;
  c.actual = actual;
  c.tolerance = 0.0;
  c.ok = actual <= bound;
  return c;
}

proj::RepTuple four_half() {
  return proj::RepTuple(std::vector<su2::Spin>(4, su2::half()));
}

split::Splitting splitting_v1() {
  return split::Splitting({split::BitVector("1100"), split::BitVector("0011")});
}

split::Splitting splitting_v2() {
  return split::Splitting({split::BitVector("1010"), split::BitVector("0101")});
}

/// Quadrature value of <g^m1_n1 g^m2_n2, g^r1_s1 g^r2_s2> for spin 1/2.
double moment_by_quadrature(int m1, int n1, int m2, int n2, int r1, int s1, int r2,
                            int s2) {
  const CMatrix val = su2::haar_integrate(
      [&](const su2::EulerAngles& a) {
        const CMatrix g = su2::wigner_matrix(su2::half(), a);
        CMatrix out(1, 1);
        out(0, 0) = g(m1 - 1, n1 - 1) * g(m2 - 1, n2 - 1) *
                    std::conj(g(r1 - 1, s1 - 1) * g(r2 - 1, s2 - 1));
        return out;
      },
      4);
  return val(0, 0).real();
}

std::size_t projector_rank(const CMatrix& p, double* gap = nullptr) {
  const la::EigResult eig = la::hermitian_eig(p);
  std::size_t rank = 0;
  for (double v : eig.values)
    if (v > 1.0 - 1e-8) ++rank;
  if (gap) {
    const std::size_t first = eig.values.size() - rank;
    const double low = first == 0 ? 0.0 : eig.values[first - 1];
    *gap = rank == 0 ? 0.0 : eig.values[first] - low;
  }
  return rank;
}

} // namespace

RunReport check_pair_moment_table(double s) {
  RunReport rep;
  double max_diff = 0.0;
  int zero_pattern_mismatch = 0;
  int idx[8];
  for (int code = 0; code < 256; ++code) {
    for (int k = 0; k < 8; ++k) idx[k] = ((code >> k) & 1) + 1;
    const su2::Rational exact = su2::pair_moment(idx[0], idx[1], idx[2], idx[3], idx[4],
                                                 idx[5], idx[6], idx[7]);
    const double quad = moment_by_quadrature(idx[0], idx[1], idx[2], idx[3], idx[4],
                                             idx[5], idx[6], idx[7]);
    max_diff = std::max(max_diff, std::abs(exact.value() - quad));
    const bool nonzero_expected =
        idx[0] + idx[2] == idx[4] + idx[6] && idx[1] + idx[3] == idx[5] + idx[7];
    if ((exact.num != 0) != nonzero_expected) ++zero_pattern_mismatch;
  }
  rep.add(equal_check("pair moments: closed form vs quadrature (256 cases, max diff)",
                      0.0, max_diff, 1e-12 * s));
  rep.add(equal_check("pair moments: zero-pattern mismatches", 0.0,
                      zero_pattern_mismatch, 0.0));
  int diag_mismatch = 0;
  for (int code = 0; code < 16; ++code) {
    for (int k = 0; k < 4; ++k) idx[k] = ((code >> k) & 1) + 1;
    const su2::Rational m = su2::pair_moment(idx[0], idx[1], idx[2], idx[3], idx[0],
                                             idx[1], idx[2], idx[3]);
    const int six = static_cast<int>(std::llround(6.0 * m.value()));
    const int want = (idx[0] + idx[1] + idx[2] + idx[3]) % 2 == 0 ? 2 : 1;
    if (six != want) ++diag_mismatch;
  }
  rep.add(equal_check("pair moments: diagonal values {2,1} by parity (16 cases)", 0.0,
                      diag_mismatch, 0.0));
  for (int mu = 1; mu <= 2; ++mu) {
    const su2::Rational m = su2::pair_moment(1, 2, mu, 1, 1, 1, mu, 2);
    rep.add(equal_check("pair moments: signed sixth at mu=" + std::to_string(mu),
                        mu == 1 ? 1.0 / 6.0 : -1.0 / 6.0, m.value(), 0.0));
  }
  return rep;
}

RunReport check_product_entry(double s) {
  RunReport rep;
  const proj::RepTuple rep4 = four_half();
  const CMatrix p1 = proj::projector_PV(rep4, splitting_v1(), proj::PVEngine::lie_kernel).matrix;
  const CMatrix p2 = proj::projector_PV(rep4, splitting_v2(), proj::PVEngine::lie_kernel).matrix;
  const CMatrix prod = la::multiply(p1, p2);
  // Row ((1,1,1,1),(1,1,1,1)) = 0; column ((1,1,1,2),(1,2,1,1)) = 1*16 + 4.
  const cplx entry = prod(0, 20);
  rep.add(equal_check("product entry real part (target 1/216)", 1.0 / 216.0,
                      entry.real(), 1e-10 * s));
  rep.add(equal_check("product entry imaginary part", 0.0, entry.imag(), 1e-12 * s));
  rep.add(equal_check("same entry of the rank-one projector", 0.0,
                      std::abs(proj::projector_P0(rep4).matrix(0, 20)), 1e-12 * s));
  return rep;
}

RunReport check_p0_closed_form(double s) {
  RunReport rep;
  const proj::RepTuple rep4 = four_half();
  const CMatrix p0 = proj::projector_P0(rep4).matrix;
  const split::Splitting vmax = split::max_splitting(4);
  const CMatrix lie = proj::projector_PV(rep4, vmax, proj::PVEngine::lie_kernel).matrix;
  const CMatrix quad = proj::projector_PV(rep4, vmax, proj::PVEngine::quadrature).matrix;
  rep.add(equal_check("closed form vs kernel engine (max entry diff)", 0.0,
                      la::max_abs_diff(p0, lie), 1e-10 * s));
  rep.add(equal_check("closed form vs quadrature engine (max entry diff)", 0.0,
                      la::max_abs_diff(p0, quad), 1e-10 * s));
  rep.add(equal_check("trace of the closed form", 1.0, la::trace(p0).real(), 1e-12 * s));
  return rep;
}

RunReport check_rank_structure(double s) {
  RunReport rep;
  const proj::RepTuple rep4 = four_half();
  const proj::YOperator p1 = proj::projector_PV(rep4, splitting_v1(), proj::PVEngine::lie_kernel);
  const proj::YOperator p2 = proj::projector_PV(rep4, splitting_v2(), proj::PVEngine::lie_kernel);
  double gap1 = 0.0, gap2 = 0.0;
  rep.add(equal_check("rank of the first pair projector", 4.0,
                      static_cast<double>(projector_rank(p1.matrix, &gap1)), 0.0));
  rep.add(equal_check("rank of the second pair projector", 4.0,
                      static_cast<double>(projector_rank(p2.matrix, &gap2)), 0.0));
  rep.add(bound_check("spectral gap at least 0.1 (first projector)", -0.1, -gap1));
  rep.add(bound_check("spectral gap at least 0.1 (second projector)", -0.1, -gap2));
  const proj::YOperator inter = proj::intersection_projector({p1, p2});
  rep.add(equal_check("dimension of the common range", 1.0,
                      static_cast<double>(projector_rank(inter.matrix)), 0.0));
  rep.add(equal_check("common range vs rank-one projector", 0.0,
                      la::max_abs_diff(inter.matrix, proj::projector_P0(rep4).matrix),
                      1e-9 * s));
  return rep;
}

RunReport check_alternating_convergence(double s) {
  RunReport rep;
  const proj::RepTuple rep4 = four_half();
  const proj::YOperator p1 = proj::projector_PV(rep4, splitting_v1(), proj::PVEngine::lie_kernel);
  const proj::YOperator p2 = proj::projector_PV(rep4, splitting_v2(), proj::PVEngine::lie_kernel);
  const CMatrix p0 = proj::projector_P0(rep4).matrix;
  const proj::ConvergenceReport conv =
      proj::product_limit({p1, p2}, {0, 1}, 1e-9 / s, 200);
  rep.add(equal_check("alternating product converged", 1.0, conv.converged ? 1.0 : 0.0, 0.0));
  rep.add(equal_check("limit equals the rank-one projector (operator norm)", 0.0,
                      la::operator_norm(conv.limit.matrix - p0), 1e-8 * s));
  rep.add(bound_check("iterations within budget", 200.0,
                      static_cast<double>(conv.iterations)));
  rep.add(bound_check("measured contraction below one", 1.0 - 1e-12, conv.contraction));
  // Deflated running products must be non-increasing in operator norm.
  CMatrix a = p1.matrix;
  double prev = la::operator_norm(a - p0);
  int increases = 0;
  for (int k = 1; k < 40; ++k) {
    a = la::multiply((k % 2 == 1 ? p2 : p1).matrix, a);
    const double cur = la::operator_norm(a - p0);
    if (cur > prev + 1e-12) ++increases;
    prev = cur;
  }
  rep.add(equal_check("deflated product norm increases", 0.0, increases, 0.0));
  return rep;
}

RunReport check_exact_decay_law(double s) {
  RunReport rep;
  const proj::RepTuple rep4 = four_half();
  proj::FilterDescriptor filter(rep4, splitting_v1(), 1);
  const std::vector<split::Splitting> ideal_gap{split::max_splitting(4)};
  proj::DecaySchedule schedule(filter,
                               std::vector<std::vector<split::Splitting>>(7, ideal_gap),
                               6, 0.5);
  const std::vector<double> series = proj::decay_experiment(schedule);
  for (std::size_t l = 0; l < series.size(); ++l)
    rep.add(equal_check("ideal-gap decay at step " + std::to_string(l),
                        std::pow(0.75, static_cast<double>(l + 1)), series[l],
                        1e-9 * s));
  return rep;
}

RunReport check_strong_degeneracy(double s) {
  RunReport rep;
  geo::SpinWeb sw(geo::standard_web(12), four_half());
  const std::vector<double> series = geo::strong_degeneracy_series(sw, 5, 20);
  int non_decreasing = 0;
  for (std::size_t k = 1; k < series.size(); ++k)
    if (series[k] >= series[k - 1]) ++non_decreasing;
  rep.add(equal_check("degeneracy series strictly decreasing (violations)", 0.0,
                      non_decreasing, 0.0));
  rep.add(bound_check("final series value below 0.15", 0.15 * std::max(1.0, s),
                      series.back()));
  const geo::DegeneracyReport deg = geo::is_weakly_degenerate(sw);
  rep.add(equal_check("spin-1/2 labels weakly degenerate", 1.0, deg.degenerate ? 1 : 0, 0.0));
  rep.add(equal_check("witness block is the first pair", 1.0,
                      deg.witness && deg.witness->str() == "1100" ? 1 : 0, 0.0));
  proj::RepTuple mixed(std::vector<su2::Spin>{su2::Spin{1}, su2::Spin{2}, su2::Spin{3},
                                              su2::Spin{4}});
  geo::SpinWeb sw_mixed(geo::standard_web(2), mixed);
  rep.add(equal_check("mixed labels not weakly degenerate", 0.0,
                      geo::is_weakly_degenerate(sw_mixed).degenerate ? 1 : 0, 0.0));
  bool refused = false;
  try {
    geo::strong_degeneracy_series(sw_mixed, 1, 2);
  } catch (const input_error&) {
    refused = true;
  }
  rep.add(equal_check("series refuses without a witness", 1.0, refused ? 1 : 0, 0.0));
  return rep;
}

RunReport check_filter_norm_sweep(double s) {
  RunReport rep;
  std::mt19937_64 rng(20260823);
  double max_diff = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 3;
    std::vector<su2::Spin> spins;
    std::size_t dim = 1;
    for (std::size_t k = 0; k < n; ++k) {
      su2::Spin sp{static_cast<int>(rng() % 4)};
      while (dim * static_cast<std::size_t>(sp.dim()) > 64)
        sp = su2::Spin{static_cast<int>(rng() % 4)};
      dim *= static_cast<std::size_t>(sp.dim());
      spins.push_back(sp);
    }
    proj::RepTuple rept(spins);
    std::vector<std::size_t> labels(n);
    for (auto& l : labels) l = rng() % std::max<std::size_t>(1, n - 1);
    const split::Splitting v = split::splitting_of_tuple(labels);
    const std::size_t q = 1 + rng() % n;
    proj::FilterDescriptor fd(rept, v, q);
    const double quad = proj::frobenius_norm(proj::filter_descriptor_function(fd));
    // Closed form sqrt(1 - d0/d) on the block containing q.
    std::vector<su2::Spin> block_spins;
    long long d = 1;
    for (const auto& block : v.elements())
      if (block[q - 1] == 1)
        for (std::size_t k = 0; k < n; ++k)
          if (block[k] == 1) {
            block_spins.push_back(spins[k]);
            d *= spins[k].dim();
          }
    const double d0 = static_cast<double>(su2::trivial_multiplicity(block_spins));
    const double expected = std::sqrt(1.0 - d0 / static_cast<double>(d));
    max_diff = std::max(max_diff, std::abs(quad - expected));
  }
  rep.add(equal_check("filter Frobenius norm vs sqrt(1 - d0/d) (50 cases, max diff)",
                      0.0, max_diff, 1e-10 * s));
  return rep;
}

RunReport check_generation_rank(double s) {
  (void)s;
  RunReport rep;
  std::mt19937_64 rng(7);
  int failures = 0;
  int tested = 0;
  auto test_rich = [&](const split::OrderedTypeSet& v, std::size_t n) {
    ++tested;
    if (su2::subalgebra_closure_dim(v, n) != static_cast<int>(3 * n)) ++failures;
  };
  for (std::size_t n = 1; n <= 5; ++n)
    test_rich(split::max_splitting(n).elements(), n);
  test_rich({split::BitVector("1100"), split::BitVector("1010"), split::BitVector("0101"),
             split::BitVector("0011")},
            4);
  for (std::size_t n = 3; n <= 5; ++n) {
    int found = 0, attempts = 0;
    while (found < 5 && attempts < 400) {
      ++attempts;
      split::OrderedTypeSet v;
      for (std::size_t k = 0; k < n; ++k) {
        std::vector<std::uint8_t> bits(n);
        for (auto& b : bits) b = static_cast<std::uint8_t>(rng() % 2);
        if (std::count(bits.begin(), bits.end(), 1) == 0) bits[rng() % n] = 1;
        v.emplace_back(std::move(bits));
      }
      if (!split::is_rich(v, n)) continue;
      ++found;
      test_rich(v, n);
    }
  }
  rep.add(equal_check("rich catalog closures equal 3n (failures)", 0.0, failures, 0.0));
  rep.add(equal_check("rich catalog holds at least 20 sets", 1.0,
                      tested >= 20 ? 1.0 : 0.0, 0.0));
  const int nonrich = su2::subalgebra_closure_dim(
      {split::BitVector("1101"), split::BitVector("1011"), split::BitVector("0110")}, 4);
  rep.add(bound_check("non-rich closure at most 9", 9.0, static_cast<double>(nonrich)));
  return rep;
}

RunReport check_decomposition_properties(double s) {
  (void)s;
  RunReport rep;
  std::mt19937_64 rng(99);
  int coincidence_failures = 0;
  int breakpoint_failures = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 3;
    const double tstar = 0.25 * static_cast<double>(1 + rng() % 3);
    geo::EdgeTuple t;
    for (std::size_t p = 0; p < n; ++p) {
      // Shared prefixes/suffixes are encoded by class labels: equal labels
      // give identical sub-paths, distinct labels fork apart.
      const double pc = static_cast<double>(rng() % n);
      const double sc = static_cast<double>(rng() % n);
      t.emplace_back(
          std::vector<geo::Point>{{0.0, pc}, {tstar, 0.0}, {1.0, -1.0 - sc}},
          std::vector<double>{0.0, tstar, 1.0});
    }
    const geo::DecompositionResult dec = geo::decompose(t, {0.0, 1.0});
    for (const auto& piece : dec.pieces) {
      geo::EdgeTuple restricted;
      for (std::size_t idx : piece.reduction)
        restricted.push_back(geo::restrict_path(t[idx], piece.lo, piece.hi));
      for (std::size_t a = 0; a < restricted.size(); ++a)
        for (std::size_t b = a + 1; b < restricted.size(); ++b)
          for (const geo::Interval& iv : geo::coincidence_intervals(restricted, a, b))
            if (iv.hi - iv.lo > geo::kParamTol) ++coincidence_failures;
      geo::EdgeTuple full_piece;
      for (const auto& path : t)
        full_piece.push_back(geo::restrict_path(path, piece.lo, piece.hi));
      if (geo::decompose(full_piece, {0.0, 1.0}).breakpoints.size() != 2)
        ++breakpoint_failures;
    }
  }
  rep.add(equal_check("pieces with surviving pairwise coincidences", 0.0,
                      coincidence_failures, 0.0));
  rep.add(equal_check("pieces with interior breakpoints on re-decomposition", 0.0,
                      breakpoint_failures, 0.0));
  return rep;
}

RunReport check_monte_carlo(double s, std::size_t samples) {
  (void)s;
  RunReport rep;
  auto edge = [](double x0, double y0, double x1, double y1) {
    return geo::ParamPolyline({{x0, y0}, {x1, y1}}, {0.0, 1.0});
  };
  const geo::ParamPolyline e = edge(0, 0, 1, 0);
  const geo::ParamPolyline e1 = edge(0, 1, 1, 1);
  const geo::ParamPolyline e2 = edge(0, 2, 1, 2);
  const geo::ParamPolyline e3 = edge(0, 3, 1, 3);
  auto coeff = [](std::size_t slot, int tj, int mu, int nu, bool conj) {
    return geo::CoefficientFactor{slot, su2::Spin{tj}, mu, nu, conj};
  };
  struct Fixture {
    geo::CylinderFunction f;
    geo::EdgeTuple t;
  };
  std::vector<Fixture> fixtures;
  fixtures.push_back({{2, {coeff(0, 1, 1, 1, false), coeff(1, 1, 1, 1, true)}}, {e, e}});
  fixtures.push_back({{2, {coeff(0, 1, 1, 1, false), coeff(1, 1, 1, 1, true)}}, {e1, e2}});
  fixtures.push_back({{2, {}}, {e1, e2}});
  fixtures.push_back({{2, {coeff(0, 1, 1, 2, false), coeff(1, 1, 1, 2, true)}}, {e, e}});
  fixtures.push_back(
      {{3, {coeff(0, 1, 1, 1, false), coeff(1, 1, 1, 1, true), coeff(2, 1, 1, 1, false)}},
       {e, e, e1}});
  fixtures.push_back({{2, {coeff(0, 2, 1, 1, false), coeff(1, 2, 1, 1, true)}}, {e, e}});
  fixtures.push_back(
      {{3, {coeff(0, 1, 1, 1, false), coeff(1, 1, 1, 1, false), coeff(2, 1, 1, 1, false)}},
       {e1, e2, e3}});
  fixtures.push_back({{2, {coeff(0, 1, 1, 1, false), coeff(1, 1, 2, 2, false)}}, {e, e}});
  fixtures.push_back(
      {{3, {coeff(0, 1, 1, 1, false), coeff(2, 1, 1, 1, true), coeff(1, 1, 2, 1, false)}},
       {e, e1, e}});
  fixtures.push_back(
      {{2, {coeff(0, 1, 2, 2, false), coeff(1, 1, 2, 2, true)}}, {e2, e3}});
  int violations = 0;
  std::uint64_t seed = 424242;
  for (const auto& fx : fixtures) {
    const std::complex<double> exact = geo::integrate_cylinder(fx.f, fx.t);
    const geo::McResult mc = geo::mc_cylinder_expect(fx.f, fx.t, samples, seed++);
    if (std::abs(mc.estimate - exact) > 3.0 * mc.stderr_est + 1e-9) ++violations;
  }
  rep.add(equal_check("Monte-Carlo fixtures outside three standard errors", 0.0,
                      violations, 0.0));
  // Factorization over disjoint tuples.
  const geo::CylinderFunction fa{1, {coeff(0, 1, 1, 1, false)}};
  const geo::CylinderFunction fb{1, {coeff(0, 1, 2, 2, true)}};
  const geo::CylinderFunction fab{
      2, {coeff(0, 1, 1, 1, false), coeff(1, 1, 2, 2, true)}};
  const std::complex<double> product = geo::integrate_cylinder(fa, {e1}) *
                                       geo::integrate_cylinder(fb, {e2});
  const geo::McResult mc = geo::mc_cylinder_expect(fab, {e1, e2}, samples, 777);
  rep.add(bound_check("factorization over disjoint tuples (3-sigma defect)", 0.0,
                      std::abs(mc.estimate - product) - 3.0 * mc.stderr_est - 1e-9));
  return rep;
}

RunReport check_product_perturbation(double s) {
  (void)s;
  RunReport rep;
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t d = 4;
  const int n_factors = 8;
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double eps = 0.05 + 0.95 * unit(rng);
    CMatrix a(d, d);
    for (std::size_t k = 0; k < d; ++k) {
      const double phi = 2.0 * std::numbers::pi * unit(rng);
      a(k, k) = cplx(std::cos(phi), std::sin(phi));
    }
    CMatrix exact = CMatrix::identity(d);
    CMatrix perturbed = CMatrix::identity(d);
    for (int i = 1; i <= n_factors; ++i) {
      CMatrix b(d, d);
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
          b(r, c) = cplx(unit(rng) - 0.5, unit(rng) - 0.5);
      b *= unit(rng) / la::operator_norm(b);
      CMatrix err(d, d);
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
          err(r, c) = cplx(unit(rng) - 0.5, unit(rng) - 0.5);
      const double delta = (std::pow(1.0 + eps, std::pow(2.0, -i)) - 1.0) * unit(rng);
      err *= delta / la::operator_norm(err);
      exact = la::multiply(exact, la::multiply(a, b));
      perturbed = la::multiply(perturbed, la::multiply(a + err, b));
    }
    if (la::operator_norm(perturbed - exact) >= eps) ++violations;
  }
  rep.add(equal_check("perturbed-product inequality violations (100 trials)", 0.0,
                      violations, 0.0));
  return rep;
}

RunReport run_acceptance(double tol_scale, std::size_t mc_samples) {
  RunReport rep;
  for (int k = 1; k <= 12; ++k) rep.merge(run_criterion(k, tol_scale, mc_samples));
  return rep;
}

RunReport run_criterion(int number, double tol_scale, std::size_t mc_samples) {
  switch (number) {
    case 1: return check_pair_moment_table(tol_scale);
    case 2: return check_product_entry(tol_scale);
    case 3: return check_p0_closed_form(tol_scale);
    case 4: return check_rank_structure(tol_scale);
    case 5: return check_alternating_convergence(tol_scale);
    case 6: return check_exact_decay_law(tol_scale);
    case 7: return check_strong_degeneracy(tol_scale);
    case 8: return check_filter_norm_sweep(tol_scale);
    case 9: return check_generation_rank(tol_scale);
    case 10: return check_decomposition_properties(tol_scale);
    case 11: return check_monte_carlo(tol_scale, mc_samples);
    case 12: return check_product_perturbation(tol_scale);
    default: throw input_error("unknown criterion number: " + std::to_string(number));
  }
}

} // namespace spinweb::verify
