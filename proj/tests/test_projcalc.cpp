#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "spinweb/errors.hpp"
#include "spinweb/linalg.hpp"
#include "spinweb/projcalc.hpp"
#include "spinweb/splitcore.hpp"
#include "spinweb/su2rep.hpp"

using namespace spinweb;
using namespace spinweb::proj;
using la::CMatrix;
using la::cplx;
using split::BitVector;
using split::Splitting;
using su2::EulerAngles;
using su2::GroupElement;
using su2::Spin;
using su2::half;

namespace {

std::vector<BitVector> bits(const std::vector<std::string>& strings) {
  std::vector<BitVector> out;
  for (const auto& s : strings) out.emplace_back(s);
  return out;
}

RepTuple four_halves() { return RepTuple({half(), half(), half(), half()}); }

bool is_projector(const CMatrix& p, double tol) {
  return la::max_abs_diff(p, p.adjoint()) < tol &&
         la::max_abs_diff(la::multiply(p, p), p) < tol;
}

double rank_of(const CMatrix& p) { return la::trace(p).real(); }

std::vector<GroupElement> random_tuple(std::size_t n, std::mt19937_64& rng) {
  std::vector<GroupElement> g;
  for (std::size_t k = 0; k < n; ++k) g.push_back(su2::sample_haar(rng));
  return g;
}

} // namespace

TEST_CASE("rep tuple bookkeeping") {
  CHECK(four_halves().dim_x() == 16);
  CHECK(RepTuple({Spin{2}}).dim_x() == 3);
  CHECK_THROWS_AS(RepTuple(std::vector<Spin>{}), input_error);
  // Tuples beyond the dense cap are fine combinatorially but refuse to
  // materialize operators (dim 128 > 64).
  const RepTuple big(std::vector<Spin>(7, half()));
  CHECK(big.dim_x() == 128);
  CHECK_THROWS_AS(projector_P0(big), input_error);
}

TEST_CASE("tensor representation and its double") {
  std::mt19937_64 rng(41);
  const RepTuple rep({half(), Spin{2}});
  const auto g = random_tuple(2, rng);
  const CMatrix x = rep_tensor(rep, g);
  CHECK(x.rows() == 6);
  CHECK(la::max_abs_diff(la::multiply(x.adjoint(), x), CMatrix::identity(6)) < 1e-12);

  // Entry law of the doubled operator: Y^{im}_{jn} = conj(X^i_j) X^m_n.
  const YOperator y = double_rep(rep, g);
  CHECK(y.matrix.rows() == 36);
  for (std::size_t i : {0u, 3u})
    for (std::size_t m : {1u, 5u})
      for (std::size_t j : {2u, 4u})
        for (std::size_t n : {0u, 5u})
          CHECK(std::abs(y.matrix(i * 6 + m, j * 6 + n) -
                         std::conj(x(i, j)) * x(m, n)) < 1e-14);

  // Identity tuple gives the identity on Y.
  const std::vector<GroupElement> e(2);
  CHECK(la::max_abs_diff(double_rep(rep, e).matrix, CMatrix::identity(36)) < 1e-13);

  CHECK_THROWS_AS(rep_tensor(rep, random_tuple(3, rng)), input_error);
}

TEST_CASE("rank one projector closed form") {
  const RepTuple rep({half(), half()});
  const YOperator p0 = projector_P0(rep);
  CHECK(is_projector(p0.matrix, 1e-13));
  CHECK(rank_of(p0.matrix) == doctest::Approx(1.0));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(std::abs(p0.matrix(i * 4 + i, j * 4 + j) - cplx(0.25)) < 1e-15);
  CHECK(std::abs(p0.matrix(1, 2)) < 1e-15);
}

TEST_CASE("invariance projectors for splittings") {
  // Single slot, one block: the projector onto the trivial isotypic part of
  // conj(1/2) (x) 1/2 has rank 1 and the (1/2) delta pattern.
  const RepTuple one({half()});
  const YOperator p = projector_PV(one, Splitting(bits({"1"})), PVEngine::lie_kernel);
  CHECK(rank_of(p.matrix) == doctest::Approx(1.0));
  CHECK(la::max_abs_diff(p.matrix, projector_P0(one).matrix) < 1e-12);

  // Pairing {12}{34} on four spin-1/2 slots: one invariant per block pair.
  const Splitting v1(bits({"1100", "0011"}));
  const YOperator pv1 = projector_PV(four_halves(), v1, PVEngine::lie_kernel);
  CHECK(is_projector(pv1.matrix, 1e-12));
  CHECK(rank_of(pv1.matrix) == doctest::Approx(4.0));

  // The finest splitting projects onto the rank-one trivial part.
  const YOperator pmax =
      projector_PV(four_halves(), split::max_splitting(4), PVEngine::lie_kernel);
  CHECK(la::max_abs_diff(pmax.matrix, projector_P0(four_halves()).matrix) < 1e-11);

  // Both engines produce the same operator.
  const YOperator quad = projector_PV(four_halves(), v1, PVEngine::quadrature);
  CHECK(la::max_abs_diff(pv1.matrix, quad.matrix) < 1e-10);
}

TEST_CASE("projector ranges are invariant under the block subgroup") {
  std::mt19937_64 rng(42);
  const Splitting v(bits({"110", "001"}));
  const RepTuple rep({half(), half(), Spin{2}});
  const YOperator pv = projector_PV(rep, v, PVEngine::lie_kernel);
  for (int trial = 0; trial < 5; ++trial) {
    // One group element per block of v, copied along the block.
    const GroupElement a = su2::sample_haar(rng);
    const GroupElement b = su2::sample_haar(rng);
    const YOperator u = double_rep(rep, {a, a, b});
    const CMatrix moved = la::multiply(u.matrix, pv.matrix);
    CHECK(la::max_abs_diff(moved, pv.matrix) < 1e-11);
  }
}

TEST_CASE("projector order respects refinement") {
  const Splitting coarse(bits({"1111"}));
  const Splitting fine(bits({"1100", "0011"}));
  const YOperator pc = projector_PV(four_halves(), coarse, PVEngine::lie_kernel);
  const YOperator pf = projector_PV(four_halves(), fine, PVEngine::lie_kernel);
  // The finer splitting picks independent elements on more blocks, so its
  // subgroup is larger and its invariant subspace smaller: P_c absorbs P_f.
  CHECK(la::max_abs_diff(la::multiply(pc.matrix, pf.matrix), pf.matrix) < 1e-11);
  CHECK(la::max_abs_diff(la::multiply(pf.matrix, pc.matrix), pf.matrix) < 1e-11);
}

TEST_CASE("separable operators integrate block by block") {
  // Zero-valued descriptor integrates to zero.
  SeparableDescriptor zero;
  zero.rep = RepTuple({half(), half()});
  zero.blocks.push_back({{0, 1},
                         [](const GroupElement&) { return CMatrix(4, 4); },
                         0});
  CHECK(la::max_abs(q_operator(zero).matrix) < 1e-15);

  // A representation-valued factor per block reproduces the invariance
  // projector of the corresponding splitting.
  SeparableDescriptor rep_blocks;
  rep_blocks.rep = four_halves();
  rep_blocks.blocks.push_back(
      {{0, 1},
       [](const GroupElement& g) {
         const CMatrix u = su2::wigner_matrix(half(), g.angles());
         return la::kron(u, u);
       },
       2});
  rep_blocks.blocks.push_back(
      {{2, 3},
       [](const GroupElement& g) {
         const CMatrix u = su2::wigner_matrix(half(), g.angles());
         return la::kron(u, u);
       },
       2});
  const YOperator q = q_operator(rep_blocks);
  const YOperator pv = projector_PV(four_halves(), Splitting(bits({"1100", "0011"})),
                                    PVEngine::lie_kernel);
  CHECK(la::max_abs_diff(q.matrix, pv.matrix) < 1e-10);
  CHECK(is_projector(q.matrix, 1e-10));
}

TEST_CASE("assembled integrals match a brute-force tensor grid") {
  // For n = 2 with one variable per slot, integrate conj(D) (x) D directly on
  // the product of two quadrature grids and compare with the per-block path.
  const RepTuple rep({half(), half()});
  const auto factor = [](const GroupElement& g) {
    return su2::wigner_matrix(half(), g.angles());
  };
  SeparableDescriptor d;
  d.rep = rep;
  d.blocks.push_back({{0}, factor, 1});
  d.blocks.push_back({{1}, factor, 1});
  const YOperator assembled = q_operator(d);

  const su2::QuadratureRule& rule = su2::QuadratureRule::get(2);
  CMatrix brute(16, 16);
  for (const auto& n0 : rule.nodes)
    for (const auto& n1 : rule.nodes) {
      const CMatrix x = la::kron(su2::wigner_matrix(half(), n0.angles),
                                 su2::wigner_matrix(half(), n1.angles));
      CMatrix term = la::kron(x.conjugate(), x);
      term *= cplx(n0.weight * n1.weight);
      brute += term;
    }
  CHECK(la::max_abs_diff(assembled.matrix, brute) < 1e-12);
}

TEST_CASE("degeneracy filter operator") {
  // Four spin-1/2 slots, pairing {12}{34}, strip the first pair.
  const FilterDescriptor fd(four_halves(), Splitting(bits({"1100", "0011"})), 1);
  const YOperator q = degeneracy_filter_operator(fd);
  const SandwichResult s = sandwich_coefficient(q, four_halves());
  CHECK(s.coefficient == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(s.residual < 1e-9);

  // One slot of spin 1/2: the representation has no trivial part to strip,
  // so the filter reduces to the full invariance projector.
  const RepTuple one({half()});
  const FilterDescriptor single(one, Splitting(bits({"1"})), 1);
  const YOperator qs = degeneracy_filter_operator(single);
  CHECK(la::max_abs_diff(qs.matrix, projector_P0(one).matrix) < 1e-10);
  const SandwichResult ss = sandwich_coefficient(qs, one);
  CHECK(ss.coefficient == doctest::Approx(1.0).epsilon(1e-10));

  // Spin-0 slot: everything is trivial, the filter annihilates.
  const RepTuple trivial({Spin{0}});
  const FilterDescriptor nul(trivial, Splitting(bits({"1"})), 1);
  CHECK(la::max_abs(degeneracy_filter_operator(nul).matrix) < 1e-13);

  CHECK_THROWS_AS(FilterDescriptor(four_halves(), Splitting(bits({"1100", "0011"})), 0),
                  input_error);
  CHECK_THROWS_AS(FilterDescriptor(four_halves(), Splitting(bits({"1100", "0011"})), 5),
                  input_error);
}

TEST_CASE("frobenius norms of separable functions") {
  // A unitary-valued one-block descriptor has normalized norm 1.
  SeparableDescriptor uni;
  uni.rep = RepTuple({half(), half()});
  uni.blocks.push_back({{0, 1},
                        [](const GroupElement& g) {
                          const CMatrix u = su2::wigner_matrix(half(), g.angles());
                          return la::kron(u, u);
                        },
                        2});
  CHECK(frobenius_norm(uni) == doctest::Approx(1.0).epsilon(1e-12));

  // The deviation D_{V,q} on four spin-1/2 slots has norm sqrt(1 - 1/4).
  const FilterDescriptor fd(four_halves(), Splitting(bits({"1100", "0011"})), 1);
  CHECK(frobenius_norm(filter_descriptor_function(fd)) ==
        doctest::Approx(std::sqrt(0.75)).epsilon(1e-10));

  SeparableDescriptor zero;
  zero.rep = RepTuple({half()});
  zero.blocks.push_back({{0}, [](const GroupElement&) { return CMatrix(2, 2); }, 0});
  CHECK(frobenius_norm(zero) == doctest::Approx(0.0));
}

TEST_CASE("sandwich coefficient basics") {
  const YOperator p0 = projector_P0(four_halves());
  const SandwichResult sp = sandwich_coefficient(p0, four_halves());
  CHECK(sp.coefficient == doctest::Approx(1.0));
  CHECK(sp.residual < 1e-12);

  std::mt19937_64 rng(43);
  const YOperator u = double_rep(four_halves(), random_tuple(4, rng));
  const SandwichResult su = sandwich_coefficient(u, four_halves());
  CHECK(su.coefficient == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(su.residual < 1e-10);
}

TEST_CASE("products of projectors converge to the intersection") {
  const YOperator p1 =
      projector_PV(four_halves(), Splitting(bits({"1100", "0011"})), PVEngine::lie_kernel);
  const YOperator p2 =
      projector_PV(four_halves(), Splitting(bits({"1010", "0101"})), PVEngine::lie_kernel);
  const YOperator p0 = projector_P0(four_halves());

  const ConvergenceReport rep = product_limit({p1, p2}, {0, 1}, 1e-10, 500);
  CHECK(rep.converged);
  CHECK(la::max_abs_diff(rep.limit.matrix, p0.matrix) < 1e-8);
  CHECK(rep.contraction < 1.0);
  CHECK(rep.contraction > 0.0);

  // A constant projector stream converges immediately.
  const ConvergenceReport idem = product_limit({p1}, {0}, 1e-10, 10);
  CHECK(idem.converged);
  CHECK(la::max_abs_diff(idem.limit.matrix, p1.matrix) < 1e-12);

  // Commuting diagonal projectors: the limit is the entrywise product.
  CMatrix d1(4, 4), d2(4, 4);
  d1(0, 0) = d1(1, 1) = 1.0;
  d2(1, 1) = d2(2, 2) = 1.0;
  const RepTuple two({half()});
  const ConvergenceReport diag = product_limit(
      {YOperator(d1, two), YOperator(d2, two)}, {0, 1}, 1e-12, 50);
  CHECK(diag.converged);
  CHECK(diag.limit.matrix(1, 1).real() == doctest::Approx(1.0));
  CHECK(std::abs(diag.limit.matrix(0, 0)) < 1e-12);

  // Iteration budget exhaustion reports failure without throwing.
  const ConvergenceReport tight = product_limit({p1, p2}, {0, 1}, 1e-14, 2);
  CHECK_FALSE(tight.converged);

  // Non-projector input is rejected up front.
  CMatrix bad(4, 4);
  bad(0, 1) = 2.0;
  CHECK_THROWS_AS(product_limit({YOperator(bad, two)}, {0}, 1e-10, 10),
                  precondition_error);
}

TEST_CASE("intersection projector") {
  const YOperator p1 =
      projector_PV(four_halves(), Splitting(bits({"1100", "0011"})), PVEngine::lie_kernel);
  const YOperator p2 =
      projector_PV(four_halves(), Splitting(bits({"1010", "0101"})), PVEngine::lie_kernel);
  const YOperator p0 = projector_P0(four_halves());

  CHECK(la::max_abs_diff(intersection_projector({p1}).matrix, p1.matrix) < 1e-11);
  CHECK(la::max_abs_diff(intersection_projector({p1, p2}).matrix, p0.matrix) < 1e-10);
  const YOperator pmax =
      projector_PV(four_halves(), split::max_splitting(4), PVEngine::lie_kernel);
  CHECK(la::max_abs_diff(intersection_projector({pmax}).matrix, p0.matrix) < 1e-10);
}

TEST_CASE("alternating products never regain norm after deflation") {
  const YOperator p1 =
      projector_PV(four_halves(), Splitting(bits({"1100", "0011"})), PVEngine::lie_kernel);
  const YOperator p2 =
      projector_PV(four_halves(), Splitting(bits({"1010", "0101"})), PVEngine::lie_kernel);
  const YOperator p0 = projector_P0(four_halves());

  CMatrix prod = CMatrix::identity(256);
  double prev = 2.0;
  for (int n = 0; n < 50; ++n) {
    prod = la::multiply(p2.matrix, la::multiply(p1.matrix, prod));
    CMatrix deflated = prod;
    deflated -= la::multiply(p0.matrix, prod);
    const double norm = la::operator_norm(deflated);
    CHECK(norm > 0.0);
    CHECK(norm <= prev + 1e-12);
    prev = norm;
  }
}

TEST_CASE("tolerance split") {
  const std::vector<double> eps = epsilon_split(0.5, 2);
  REQUIRE(eps.size() == 3);
  CHECK(eps[0] == doctest::Approx(std::pow(1.5, 0.25) - 1.0));
  CHECK(eps[1] == doctest::Approx(std::pow(1.5, 0.125) - 1.0));
  CHECK(eps[2] == doctest::Approx(std::pow(1.5, 0.0625) - 1.0));
  // The split multiplies back up to at most 1 + eps.
  double product = 1.0;
  for (double e : epsilon_split(0.5, 6)) product *= (1.0 + e) * (1.0 + e);
  CHECK(product <= 1.5 + 1e-12);
}

TEST_CASE("decay experiment with ideal gaps") {
  const FilterDescriptor fd(four_halves(), Splitting(bits({"1100", "0011"})), 1);
  std::vector<std::vector<Splitting>> gaps(3, {split::max_splitting(4)});
  const DecaySchedule schedule(fd, gaps, 2, 0.5);
  const std::vector<double> s = decay_experiment(schedule);
  REQUIRE(s.size() == 3);
  CHECK(s[0] <= 1.0 + 1e-12);
  for (std::size_t l = 0; l < 3; ++l)
    CHECK(s[l] == doctest::Approx(std::pow(0.75, static_cast<double>(l + 1)))
                      .epsilon(1e-9));
  // The schedule must provide exactly L+1 gap blocks.
  CHECK_THROWS_AS(DecaySchedule(fd, gaps, 3, 0.5), input_error);
}
