#include "spinweb/projcalc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "spinweb/errors.hpp"

namespace spinweb::proj {

using la::CMatrix;
using la::cplx;

RepTuple::RepTuple(std::vector<su2::Spin> s) : spins(std::move(s)) {
  if (spins.empty()) throw input_error("a representation tuple needs at least one spin");
  dim_x_ = 1;
  for (const auto& sp : spins) dim_x_ *= static_cast<std::size_t>(sp.dim());
}

namespace {

/// Dense X- and Y-operators are only materialized up to dimX = 64
/// (Y is at most 4096 x 4096). Purely combinatorial uses are unrestricted.
void require_dense_cap(const RepTuple& rep) {
  if (rep.dim_x() > 64)
    throw input_error("tensor dimension cap exceeded: dimX must be <= 64");
}

} // namespace

YOperator::YOperator(CMatrix m, RepTuple r) : matrix(std::move(m)), rep(std::move(r)) {
  const std::size_t dy = rep.dim_x() * rep.dim_x();
  if (matrix.rows() != dy || matrix.cols() != dy)
    throw input_error("operator dimension does not match (dimX)^2");
  if (!matrix.all_finite()) throw numerical_error("non-finite operator entries");
}

FilterDescriptor::FilterDescriptor(RepTuple r, split::Splitting v, std::size_t q_slot)
    : rep(std::move(r)), splitting(std::move(v)), q(q_slot) {
  if (splitting.n() != rep.n())
    throw input_error("splitting length does not match representation tuple");
  if (q < 1 || q > rep.n()) throw input_error("filter slot q must lie in [1..n]");
}

namespace {

std::vector<std::size_t> slot_dims(const RepTuple& rep) {
  std::vector<std::size_t> dims(rep.n());
  for (std::size_t k = 0; k < rep.n(); ++k)
    dims[k] = static_cast<std::size_t>(rep.spins[k].dim());
  return dims;
}

/// Strides for lexicographic flattening, leftmost slot most significant.
std::vector<std::size_t> slot_strides(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> strides(dims.size());
  std::size_t acc = 1;
  for (std::size_t k = dims.size(); k-- > 0;) {
    strides[k] = acc;
    acc *= dims[k];
  }
  return strides;
}

/// Flat sub-index of `flat` restricted to the given slots (ascending order).
std::size_t sub_index(std::size_t flat, const std::vector<std::size_t>& slots,
                      const std::vector<std::size_t>& dims,
                      const std::vector<std::size_t>& strides) {
  std::size_t out = 0;
  for (std::size_t s : slots) out = out * dims[s] + (flat / strides[s]) % dims[s];
  return out;
}

std::vector<std::size_t> block_slots(const split::BitVector& v) {
  std::vector<std::size_t> slots;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (v[k] == 1) slots.push_back(k);
  return slots;
}

RepTuple sub_rep(const RepTuple& rep, const std::vector<std::size_t>& slots) {
  std::vector<su2::Spin> spins;
  spins.reserve(slots.size());
  for (std::size_t s : slots) spins.push_back(rep.spins[s]);
  return RepTuple(std::move(spins));
}

int coefficient_degree(const RepTuple& rep) {
  int deg = 0;
  for (const auto& s : rep.spins) deg += s.twice_j;
  return deg;
}

CMatrix sub_rep_tensor(const RepTuple& rep, const su2::GroupElement& g) {
  const su2::EulerAngles a = g.angles();
  CMatrix m(1, 1);
  m(0, 0) = 1.0;
  for (const auto& s : rep.spins) m = la::kron(m, su2::wigner_matrix(s, a));
  return m;
}

void check_partition(const SeparableDescriptor& d) {
  std::vector<int> seen(d.rep.n(), 0);
  for (const auto& b : d.blocks)
    for (std::size_t s : b.slots) {
      if (s >= d.rep.n()) throw input_error("block slot out of range");
      if (seen[s]++) throw input_error("block slots overlap: descriptor is not separable");
    }
  for (int c : seen)
    if (!c) throw input_error("block slots do not cover every tensor slot");
}

/// Assemble a Y-operator from per-variable doubled-block integrals
/// Q_b[(i_b, m_b), (j_b, n_b)] by entry products.
YOperator assemble_blocks(const RepTuple& rep,
                          const std::vector<std::vector<std::size_t>>& slots,
                          const std::vector<CMatrix>& block_ops) {
  const std::vector<std::size_t> dims = slot_dims(rep);
  const std::vector<std::size_t> strides = slot_strides(dims);
  const std::size_t dx = rep.dim_x();
  const std::size_t nb = slots.size();
  std::vector<std::size_t> block_dim(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    std::size_t d = 1;
    for (std::size_t s : slots[b]) d *= dims[s];
    block_dim[b] = d;
  }
  CMatrix y(dx * dx, dx * dx);
  const std::ptrdiff_t nrows = static_cast<std::ptrdiff_t>(dx * dx);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t row = 0; row < nrows; ++row) {
    const std::size_t i = static_cast<std::size_t>(row) / dx;
    const std::size_t m = static_cast<std::size_t>(row) % dx;
    std::vector<std::size_t> row_sub(nb);
    for (std::size_t b = 0; b < nb; ++b)
      row_sub[b] = sub_index(i, slots[b], dims, strides) * block_dim[b] +
                   sub_index(m, slots[b], dims, strides);
    for (std::size_t col = 0; col < dx * dx; ++col) {
      const std::size_t j = col / dx;
      const std::size_t n = col % dx;
      cplx val = 1.0;
      for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t cs = sub_index(j, slots[b], dims, strides) * block_dim[b] +
                               sub_index(n, slots[b], dims, strides);
        val *= block_ops[b](row_sub[b], cs);
        if (val == 0.0) break;
      }
      y(static_cast<std::size_t>(row), col) = val;
    }
  }
  return YOperator(std::move(y), rep);
}

} // namespace

CMatrix rep_tensor(const RepTuple& rep, const std::vector<su2::GroupElement>& g) {
  require_dense_cap(rep);
  if (g.size() != rep.n())
    throw input_error("group tuple length does not match representation tuple");
  CMatrix m(1, 1);
  m(0, 0) = 1.0;
  for (std::size_t k = 0; k < rep.n(); ++k)
    m = la::kron(m, su2::wigner_matrix(rep.spins[k], g[k].angles()));
  return m;
}

YOperator double_rep(const RepTuple& rep, const std::vector<su2::GroupElement>& g) {
  const CMatrix x = rep_tensor(rep, g);
  return YOperator(la::kron(x.conjugate(), x), rep);
}

YOperator projector_P0(const RepTuple& rep) {
  require_dense_cap(rep);
  const std::size_t dx = rep.dim_x();
  CMatrix p(dx * dx, dx * dx);
  const cplx w = 1.0 / static_cast<double>(dx);
  for (std::size_t i = 0; i < dx; ++i)
    for (std::size_t j = 0; j < dx; ++j) p(i * dx + i, j * dx + j) = w;
  return YOperator(std::move(p), rep);
}

namespace {

/// Generator J_axis placed simultaneously in all slots selected by v, on X.
CMatrix placed_generator(const RepTuple& rep, const split::BitVector& v, int axis) {
  const std::size_t dx = rep.dim_x();
  CMatrix total(dx, dx);
  for (std::size_t k = 0; k < rep.n(); ++k) {
    if (v[k] != 1) continue;
    CMatrix m(1, 1);
    m(0, 0) = 1.0;
    for (std::size_t l = 0; l < rep.n(); ++l) {
      const std::size_t d = static_cast<std::size_t>(rep.spins[l].dim());
      m = la::kron(m, l == k ? su2::spin_generator(rep.spins[l], axis)
                             : CMatrix::identity(d));
    }
    total += m;
  }
  return total;
}

YOperator projector_pv_lie(const RepTuple& rep, const split::Splitting& v) {
  const std::size_t dx = rep.dim_x();
  const CMatrix idx = CMatrix::identity(dx);
  CMatrix k_op(dx * dx, dx * dx);
  for (const auto& block : v.elements())
    for (int axis = 0; axis < 3; ++axis) {
      const CMatrix j = placed_generator(rep, block, axis);
      // Infinitesimal action on Y = conj(X) (x) X.
      const CMatrix m = la::kron(j.conjugate(), idx) - la::kron(idx, j);
      k_op += la::multiply(m, m);
    }
  const la::EigResult eig = la::hermitian_eig(k_op);
  const double top = std::max(1.0, std::abs(eig.values.back()));
  std::size_t count = 0;
  while (count < eig.values.size() && eig.values[count] <= 1e-8 * top) ++count;
  return YOperator(la::projector_from_columns(eig.vectors, 0, count), rep);
}

SeparableDescriptor pv_descriptor(const RepTuple& rep, const split::Splitting& v) {
  SeparableDescriptor d;
  d.rep = rep;
  for (const auto& block : v.elements()) {
    BlockFactor f;
    f.slots = block_slots(block);
    const RepTuple sub = sub_rep(rep, f.slots);
    f.degree = coefficient_degree(sub);
    f.op = [sub](const su2::GroupElement& g) { return sub_rep_tensor(sub, g); };
    d.blocks.push_back(std::move(f));
  }
  return d;
}

} // namespace

YOperator projector_PV(const RepTuple& rep, const split::Splitting& v, PVEngine engine) {
  require_dense_cap(rep);
  if (v.n() != rep.n())
    throw input_error("splitting length does not match representation tuple");
  if (engine == PVEngine::lie_kernel) return projector_pv_lie(rep, v);
  return q_operator(pv_descriptor(rep, v));
}

YOperator q_operator(const SeparableDescriptor& d) {
  require_dense_cap(d.rep);
  check_partition(d);
  std::vector<std::vector<std::size_t>> slots;
  std::vector<CMatrix> integrals;
  for (const auto& b : d.blocks) {
    auto doubled = [&b](const su2::EulerAngles& a) {
      const su2::GroupElement g = su2::GroupElement::from_angles(a);
      const CMatrix op = b.op(g);
      return la::kron(op.conjugate(), op);
    };
    integrals.push_back(su2::haar_integrate(doubled, 2 * b.degree));
    slots.push_back(b.slots);
  }
  return assemble_blocks(d.rep, slots, integrals);
}

SeparableDescriptor filter_descriptor_function(const FilterDescriptor& fd) {
  SeparableDescriptor d;
  d.rep = fd.rep;
  const std::size_t q0 = fd.q - 1;
  for (const auto& block : fd.splitting.elements()) {
    BlockFactor f;
    f.slots = block_slots(block);
    const RepTuple sub = sub_rep(fd.rep, f.slots);
    f.degree = coefficient_degree(sub);
    const bool is_q_block = block[q0] == 1;
    if (!is_q_block) {
      f.op = [sub](const su2::GroupElement& g) { return sub_rep_tensor(sub, g); };
    } else {
      // Trivial-isotypic projector of the block: the first moment of its
      // tensor representation.
      const CMatrix pi = su2::haar_integrate(
          [&sub](const su2::EulerAngles& a) {
            return sub_rep_tensor(sub, su2::GroupElement::from_angles(a));
          },
          coefficient_degree(sub));
      CMatrix strip = CMatrix::identity(sub.dim_x());
      strip -= pi;
      f.op = [sub, strip](const su2::GroupElement& g) {
        return la::multiply(sub_rep_tensor(sub, g), strip);
      };
    }
    d.blocks.push_back(std::move(f));
  }
  return d;
}

YOperator degeneracy_filter_operator(const FilterDescriptor& fd) {
  return q_operator(filter_descriptor_function(fd));
}

double frobenius_norm(const SeparableDescriptor& d) {
  check_partition(d);
  double prod = 1.0;
  for (const auto& b : d.blocks) {
    const CMatrix val = su2::haar_integrate(
        [&b](const su2::EulerAngles& a) {
          const CMatrix op = b.op(su2::GroupElement::from_angles(a));
          CMatrix out(1, 1);
          out(0, 0) = la::trace(la::multiply(op.adjoint(), op));
          return out;
        },
        2 * b.degree);
    prod *= val(0, 0).real();
  }
  const double sq = prod / static_cast<double>(d.rep.dim_x());
  return std::sqrt(std::max(0.0, sq));
}

SandwichResult sandwich_coefficient(const YOperator& q, const RepTuple& rep) {
  const YOperator p0 = projector_P0(rep);
  const CMatrix inner = la::multiply(p0.matrix, la::multiply(q.matrix, p0.matrix));
  SandwichResult res;
  // P_0 has rank one and trace one, so the best coefficient is tr(P0 Q P0).
  res.coefficient = la::trace(inner).real();
  CMatrix diff = inner;
  CMatrix scaled = p0.matrix;
  scaled *= res.coefficient;
  diff -= scaled;
  res.residual = la::frobenius(diff);
  return res;
}

namespace {

void check_projector(const YOperator& p) {
  if (la::max_abs_diff(p.matrix, p.matrix.adjoint()) > 1e-10)
    throw precondition_error("product_limit input is not hermitian within 1e-10");
  if (la::max_abs_diff(la::multiply(p.matrix, p.matrix), p.matrix) > 1e-10)
    throw precondition_error("product_limit input is not idempotent within 1e-10");
}

} // namespace

ConvergenceReport product_limit(const std::vector<YOperator>& projectors,
                                const std::vector<std::size_t>& sequence, double tol,
                                std::size_t max_iter) {
  if (projectors.empty() || sequence.empty())
    throw input_error("product_limit needs at least one projector and one index");
  for (std::size_t idx : sequence)
    if (idx >= projectors.size()) throw input_error("sequence index out of range");
  for (const auto& p : projectors) check_projector(p);

  ConvergenceReport rep;
  CMatrix a = projectors[sequence[0]].matrix;
  rep.iterations = 1;
  std::vector<double> diffs;
  bool settled = false;
  for (std::size_t k = 1; k < max_iter; ++k) {
    const CMatrix next =
        la::multiply(projectors[sequence[k % sequence.size()]].matrix, a);
    const double delta = la::frobenius(next - a);
    diffs.push_back(delta);
    a = next;
    rep.iterations = k + 1;
    if (delta < tol * 0.1) {
      settled = true;
      break;
    }
  }
  rep.final_error = diffs.empty() ? 0.0 : diffs.back();
  // Geometric-mean contraction over the last few nonzero steps.
  double log_sum = 0.0;
  std::size_t ratios = 0;
  for (std::size_t k = diffs.size(); k-- > 1 && ratios < 10;) {
    if (diffs[k] > 1e-15 && diffs[k - 1] > 1e-15) {
      log_sum += std::log(diffs[k] / diffs[k - 1]);
      ++ratios;
    }
  }
  rep.contraction = ratios ? std::exp(log_sum / static_cast<double>(ratios)) : 0.0;
  rep.limit = YOperator(a, projectors[0].rep);
  const double idem = la::frobenius(la::multiply(a, a) - a);
  rep.converged = settled && idem < std::max(100.0 * tol, 1e-9);
  return rep;
}

YOperator intersection_projector(const std::vector<YOperator>& ops) {
  if (ops.empty()) throw input_error("intersection of an empty operator list is undefined");
  for (const auto& p : ops) check_projector(p);
  CMatrix mean(ops[0].matrix.rows(), ops[0].matrix.cols());
  for (const auto& p : ops) mean += p.matrix;
  mean *= 1.0 / static_cast<double>(ops.size());
  const la::EigResult eig = la::hermitian_eig(mean);
  // The common range is exactly the eigenvalue-1 eigenspace of the average.
  std::size_t first = eig.values.size();
  while (first > 0 && eig.values[first - 1] > 1.0 - 1e-8) --first;
  return YOperator(
      la::projector_from_columns(eig.vectors, first, eig.values.size() - first),
      ops[0].rep);
}

DecaySchedule::DecaySchedule(FilterDescriptor f,
                             std::vector<std::vector<split::Splitting>> gaps,
                             std::size_t l, double eps)
    : filter(std::move(f)), gap_blocks(std::move(gaps)), l_steps(l),
      epsilons(epsilon_split(eps, l)) {
  if (gap_blocks.size() != l_steps + 1)
    throw input_error("decay schedule needs exactly L+1 gap blocks");
  for (const auto& gap : gap_blocks)
    for (const auto& v : gap)
      if (v.n() != filter.rep.n())
        throw input_error("gap-block splitting length does not match the tuple");
}

std::vector<double> epsilon_split(double eps, std::size_t l) {
  if (eps <= 0) throw input_error("epsilon split needs eps > 0");
  std::vector<double> out(l + 1);
  for (std::size_t nu = 0; nu <= l; ++nu)
    out[nu] = std::pow(1.0 + eps, 1.0 / std::pow(2.0, static_cast<double>(nu) + 2.0)) - 1.0;
  return out;
}

std::vector<double> decay_experiment(const DecaySchedule& schedule) {
  const RepTuple& rep = schedule.filter.rep;
  const CMatrix q = degeneracy_filter_operator(schedule.filter).matrix;
  const CMatrix p0 = projector_P0(rep).matrix;
  std::map<std::vector<split::BitVector>, CMatrix> pv_cache;
  auto pv = [&](const split::Splitting& v) -> const CMatrix& {
    auto it = pv_cache.find(v.elements());
    if (it == pv_cache.end())
      it = pv_cache
               .emplace(v.elements(),
                        projector_PV(rep, v, PVEngine::lie_kernel).matrix)
               .first;
    return it->second;
  };
  std::vector<double> series;
  series.reserve(schedule.l_steps + 1);
  CMatrix running;
  for (std::size_t nu = 0; nu <= schedule.l_steps; ++nu) {
    CMatrix gap = CMatrix::identity(rep.dim_x() * rep.dim_x());
    for (const auto& v : schedule.gap_blocks[nu]) gap = la::multiply(gap, pv(v));
    CMatrix factor = la::multiply(q, gap);
    running = nu == 0 ? factor : la::multiply(factor, running);
    series.push_back(la::operator_norm(la::multiply(p0, running)));
  }
  return series;
}

} // namespace spinweb::proj
