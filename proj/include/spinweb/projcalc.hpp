#pragma once

#include <functional>
#include <vector>

#include "spinweb/linalg.hpp"
#include "spinweb/splitcore.hpp"
#include "spinweb/su2rep.hpp"

namespace spinweb::proj {

/// Spin labels for the n tensor slots of X = rho_1 (x) ... (x) rho_n.
struct RepTuple {
  std::vector<su2::Spin> spins;

  RepTuple() = default;
  explicit RepTuple(std::vector<su2::Spin> s);

  std::size_t n() const { return spins.size(); }
  std::size_t dim_x() const { return dim_x_; }

  bool operator==(const RepTuple&) const = default;

private:
  std::size_t dim_x_ = 1;
};

/// Operator on Y = conj(X) (x) X. Row index (i,m), column index (j,n), both
/// flattened as i*dimX + m with each multi-index flattened lexicographically,
/// leftmost slot most significant.
struct YOperator {
  la::CMatrix matrix;
  RepTuple rep;

  YOperator() = default;
  YOperator(la::CMatrix m, RepTuple r);
};

/// Block representation with the trivial isotypic part removed on the block
/// containing slot q (1-based), per splitting V.
struct FilterDescriptor {
  RepTuple rep;
  split::Splitting splitting;
  std::size_t q = 1; // 1-based slot index

  FilterDescriptor(RepTuple r, split::Splitting v, std::size_t q_slot);
};

/// One factor of a variable-separable operator-valued function on G^n: a
/// matrix-valued function of a single group element acting on the tensor
/// product of the listed slots.
struct BlockFactor {
  std::vector<std::size_t> slots; // ascending, 0-based
  std::function<la::CMatrix(const su2::GroupElement&)> op;
  int degree = 0; // spin-1/2 coefficient degree bound of op's entries
};

/// D(g_1..g_k) = permuted tensor product of per-variable block factors; the
/// slot lists partition [0, n).
struct SeparableDescriptor {
  RepTuple rep;
  std::vector<BlockFactor> blocks;
};

/// Tensor-product representation matrix on X at an n-tuple of group elements.
la::CMatrix rep_tensor(const RepTuple& rep, const std::vector<su2::GroupElement>& g);

/// conj(rep_tensor) (x) rep_tensor on Y.
YOperator double_rep(const RepTuple& rep, const std::vector<su2::GroupElement>& g);

/// Projector onto vectors of Y invariant under the subgroup picking one group
/// element per block of V.
enum class PVEngine { lie_kernel, quadrature };
YOperator projector_PV(const RepTuple& rep, const split::Splitting& v, PVEngine engine);

/// Closed-form rank-one projector (1/dimX) delta^{im} delta_{jn}.
YOperator projector_P0(const RepTuple& rep);

/// Q_D = integral of conj(D) (x) D over independent Haar variables, computed
/// variable-by-variable and assembled by entry products.
YOperator q_operator(const SeparableDescriptor& d);

/// The degeneracy filter Q_{V,q}.
YOperator degeneracy_filter_operator(const FilterDescriptor& fd);

/// Separable descriptor realizing D_{V,q} (used by q_operator and
/// frobenius_norm).
SeparableDescriptor filter_descriptor_function(const FilterDescriptor& fd);

/// Normalized Frobenius norm sqrt((1/dimX) * integral of tr(D* D)).
double frobenius_norm(const SeparableDescriptor& d);

/// Scalar c minimizing ||P_0 Q P_0 - c P_0||, plus the Frobenius residual.
struct SandwichResult {
  double coefficient = 0.0;
  double residual = 0.0;
};
SandwichResult sandwich_coefficient(const YOperator& q, const RepTuple& rep);

/// Result of iterating a product of projectors.
struct ConvergenceReport {
  YOperator limit;
  std::size_t iterations = 0;
  double final_error = 0.0;
  double contraction = 1.0; // estimated per-step factor
  bool converged = false;
};

/// Running product P_{seq[k mod len]} ... P_{seq[0]} (the index stream is
/// cycled); stops once successive products differ by < tol/10 and the limit
/// is idempotent, or after max_iter applications.
ConvergenceReport product_limit(const std::vector<YOperator>& projectors,
                                const std::vector<std::size_t>& sequence, double tol,
                                std::size_t max_iter);

/// Orthogonal projector onto the common range of hermitian idempotents,
/// extracted as the top eigenspace of their average.
YOperator intersection_projector(const std::vector<YOperator>& ops);

/// Driver of the decay experiment: L+1 filter applications with projector
/// chains (gap blocks) in between.
struct DecaySchedule {
  FilterDescriptor filter;
  std::vector<std::vector<split::Splitting>> gap_blocks; // size L+1
  std::size_t l_steps = 0;                               // the L above
  std::vector<double> epsilons;

  DecaySchedule(FilterDescriptor f, std::vector<std::vector<split::Splitting>> gaps,
                std::size_t l, double eps);
};

/// Tolerance split eps_nu = (1+eps)^(1/2^(nu+2)) - 1 for nu = 0..l.
std::vector<double> epsilon_split(double eps, std::size_t l);

/// s_l = || P_0 * (Q G_l) (Q G_{l-1}) ... (Q G_0) || for l = 0..L, where Q is
/// the filter operator and G_nu is the product of the gap-block projectors.
std::vector<double> decay_experiment(const DecaySchedule& schedule);

} // namespace spinweb::proj
