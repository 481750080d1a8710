#include "spinweb/su2rep.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "spinweb/errors.hpp"

namespace spinweb::su2 {

using la::CMatrix;
using la::cplx;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
} // namespace

Spin Spin::parse(std::string_view text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) {
      int j = std::stoi(std::string(text));
      if (j < 0) throw input_error("spin must be nonnegative: " + std::string(text));
      return Spin{2 * j};
    }
    int num = std::stoi(std::string(text.substr(0, slash)));
    int den = std::stoi(std::string(text.substr(slash + 1)));
    if (den != 2 || num < 0 || num % 2 == 0)
      throw input_error("spin must be an integer or an odd multiple of 1/2: " + std::string(text));
    return Spin{num};
  } catch (const std::invalid_argument&) {
    throw input_error("cannot parse spin label: " + std::string(text));
  } catch (const std::out_of_range&) {
    throw input_error("spin label out of range: " + std::string(text));
  }
}

std::string Spin::str() const {
  if (twice_j % 2 == 0) return std::to_string(twice_j / 2);
  return std::to_string(twice_j) + "/2";
}

GroupElement::GroupElement() : m_(CMatrix::identity(2)) {}

GroupElement::GroupElement(CMatrix m) : m_(std::move(m)) {
  if (m_.rows() != 2 || m_.cols() != 2) throw input_error("group element must be 2x2");
  const cplx det = m_(0, 0) * m_(1, 1) - m_(0, 1) * m_(1, 0);
  const CMatrix gram = m_.adjoint() * m_;
  if (std::abs(det - 1.0) > 1e-12 || la::max_abs_diff(gram, CMatrix::identity(2)) > 1e-12)
    throw input_error("matrix is not in SU(2) within tolerance 1e-12");
}

GroupElement GroupElement::from_angles(const EulerAngles& a) {
  return GroupElement(wigner_matrix(half(), a));
}

GroupElement GroupElement::operator*(const GroupElement& other) const {
  return GroupElement(m_ * other.m_);
}

EulerAngles GroupElement::angles() const {
  const cplx a = m_(0, 0);
  const cplx b = m_(0, 1);
  EulerAngles ang;
  ang.beta = 2.0 * std::atan2(std::abs(b), std::abs(a));
  double sum = 0.0, diff = 0.0; // alpha+gamma and alpha-gamma
  if (std::abs(a) > 1e-14) sum = -2.0 * std::arg(a);
  if (std::abs(b) > 1e-14) diff = -2.0 * std::arg(-b);
  double alpha = 0.5 * (sum + diff);
  double gamma = 0.5 * (sum - diff);
  // Shifts (alpha -> alpha - 2pi, gamma -> gamma + 2pi) leave every irrep
  // matrix unchanged; use them to land in the canonical ranges.
  while (alpha < 0) { alpha += 2 * kPi; gamma -= 2 * kPi; }
  while (alpha >= 2 * kPi) { alpha -= 2 * kPi; gamma += 2 * kPi; }
  gamma = std::fmod(gamma, 4 * kPi);
  if (gamma < 0) gamma += 4 * kPi;
  ang.alpha = alpha;
  ang.gamma = gamma;
  return ang;
}

namespace {

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

/// Wigner small-d entry for weights given in twice-units.
double wigner_d_entry(int tj, int tmp, int tm, double beta) {
  const double c = std::cos(beta / 2.0);
  const double s = std::sin(beta / 2.0);
  const double logpref = 0.5 * (log_factorial((tj + tmp) / 2) + log_factorial((tj - tmp) / 2) +
                                log_factorial((tj + tm) / 2) + log_factorial((tj - tm) / 2));
  const int smin = std::max(0, (tm - tmp) / 2);
  const int smax = std::min((tj + tm) / 2, (tj - tmp) / 2);
  double acc = 0.0;
  for (int k = smin; k <= smax; ++k) {
    const int cexp = tj + (tm - tmp) / 2 - 2 * k; // exponent of cos(beta/2)
    const int sexp = (tmp - tm) / 2 + 2 * k;      // exponent of sin(beta/2)
    const double logden = log_factorial((tj + tm) / 2 - k) + log_factorial(k) +
                          log_factorial((tmp - tm) / 2 + k) + log_factorial((tj - tmp) / 2 - k);
    double term = std::exp(logpref - logden);
    if (((tmp - tm) / 2 + k) % 2 != 0) term = -term;
    // Powers of possibly-zero trig factors; 0^0 = 1.
    term *= std::pow(c, cexp) * std::pow(s, sexp);
    acc += term;
  }
  return acc;
}

} // namespace

CMatrix wigner_matrix(Spin j, const EulerAngles& a) {
  const int tj = j.twice_j;
  const int dim = tj + 1;
  CMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const int tmp = tj - 2 * r; // twice m'
    const cplx pa = std::exp(-kI * (0.5 * tmp * a.alpha));
    for (int c = 0; c < dim; ++c) {
      const int tm = tj - 2 * c; // twice m
      const cplx pg = std::exp(-kI * (0.5 * tm * a.gamma));
      m(r, c) = pa * wigner_d_entry(tj, tmp, tm, a.beta) * pg;
    }
  }
  return m;
}

CMatrix spin_generator(Spin j, int axis) {
  if (axis < 0 || axis > 2) throw input_error("generator axis must be 0, 1 or 2");
  const int tj = j.twice_j;
  const int dim = tj + 1;
  CMatrix jplus(dim, dim), jz(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const double m = 0.5 * (tj - 2 * r);
    jz(r, r) = m;
    if (r > 0) {
      const double jj = 0.5 * tj;
      jplus(r - 1, r) = std::sqrt(jj * (jj + 1.0) - m * (m + 1.0));
    }
  }
  if (axis == 2) return jz;
  const CMatrix jminus = jplus.transpose();
  if (axis == 0) return 0.5 * (jplus + jminus);
  return (-0.5 * kI) * (jplus - jminus);
}

namespace {

/// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int k = 0; k < (n + 1) / 2; ++k) {
    double xi = std::cos(kPi * (k + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int m = 0; m < n; ++m) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * m + 1.0) * xi * p1 - m * p2) / (m + 1.0);
      }
      pp = n * (xi * p0 - p1) / (xi * xi - 1.0);
      const double dx = p0 / pp;
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    x[k] = -xi;
    x[n - 1 - k] = xi;
    const double wk = 2.0 / ((1.0 - xi * xi) * pp * pp);
    w[k] = wk;
    w[n - 1 - k] = wk;
  }
}

std::map<int, QuadratureRule> g_rule_cache;
std::mutex g_rule_mutex;

QuadratureRule build_rule(int degree) {
  if (degree < 0) throw input_error("quadrature degree must be nonnegative");
  const int n = 2 * degree + 2;
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  QuadratureRule rule;
  rule.degree = degree;
  rule.nodes.reserve(static_cast<std::size_t>(n) * n * n);
  for (int ia = 0; ia < n; ++ia) {
    const double alpha = 2.0 * kPi * ia / n;
    for (int ib = 0; ib < n; ++ib) {
      const double beta = std::acos(x[ib]);
      const double wb = w[ib] / 2.0;
      for (int ig = 0; ig < n; ++ig) {
        const double gamma = 4.0 * kPi * ig / n;
        rule.nodes.push_back({{alpha, beta, gamma}, wb / (static_cast<double>(n) * n)});
      }
    }
  }
  return rule;
}

} // namespace

const QuadratureRule& QuadratureRule::get(int degree) {
  std::lock_guard<std::mutex> lock(g_rule_mutex);
  auto it = g_rule_cache.find(degree);
  if (it == g_rule_cache.end())
    it = g_rule_cache.emplace(degree, build_rule(degree)).first;
  return it->second;
}

CMatrix haar_integrate(const std::function<CMatrix(const EulerAngles&)>& f, int degree) {
  const QuadratureRule& rule = QuadratureRule::get(degree);
  // Fixed chunk decomposition keeps the reduction order independent of the
  // thread count.
  constexpr std::size_t kChunks = 64;
  const std::size_t total = rule.nodes.size();
  std::vector<CMatrix> partial(kChunks);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(kChunks); ++c) {
    const std::size_t lo = total * c / kChunks;
    const std::size_t hi = total * (c + 1) / kChunks;
    CMatrix acc;
    for (std::size_t k = lo; k < hi; ++k) {
      CMatrix val = f(rule.nodes[k].angles);
      val *= rule.nodes[k].weight;
      if (acc.rows() == 0)
        acc = std::move(val);
      else
        acc += val;
    }
    partial[c] = std::move(acc);
  }
  CMatrix result;
  for (auto& p : partial) {
    if (p.rows() == 0) continue;
    if (result.rows() == 0)
      result = std::move(p);
    else
      result += p;
  }
  if (!result.all_finite()) throw numerical_error("non-finite integrand in haar_integrate");
  return result;
}

GroupElement sample_haar(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  double u[4];
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& ui : u) {
      ui = normal(rng);
      norm2 += ui * ui;
    }
  } while (norm2 < 1e-12);
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& ui : u) ui *= inv;
  CMatrix m(2, 2);
  m(0, 0) = cplx(u[0], u[3]);
  m(0, 1) = cplx(u[2], u[1]);
  m(1, 0) = cplx(-u[2], u[1]);
  m(1, 1) = cplx(u[0], -u[3]);
  return GroupElement(std::move(m));
}

GroupElement sample_haar_seeded(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_haar(rng);
}

Rational pair_moment(int mu1, int nu1, int mu2, int nu2,
                     int rho1, int sigma1, int rho2, int sigma2) {
  for (int idx : {mu1, nu1, mu2, nu2, rho1, sigma1, rho2, sigma2})
    if (idx != 1 && idx != 2) throw input_error("pair_moment indices must be 1 or 2");
  auto d = [](int a, int b) { return a == b ? 1 : 0; };
  const long long s =
      2 * (d(mu1, rho1) * d(nu1, sigma1) * d(mu2, rho2) * d(nu2, sigma2) +
           d(mu1, rho2) * d(nu1, sigma2) * d(mu2, rho1) * d(nu2, sigma1)) -
      (d(mu1, rho1) * d(nu1, sigma2) * d(mu2, rho2) * d(nu2, sigma1) +
       d(mu1, rho2) * d(nu1, sigma1) * d(mu2, rho1) * d(nu2, sigma2));
  if (s == 0) return {0, 1};
  const long long g = std::gcd(std::abs(s), 6LL);
  return {s / g, 6 / g};
}

MultiplicityTable clebsch_multiplicities(const std::vector<Spin>& spins) {
  MultiplicityTable table{{0, 1}};
  for (const Spin& s : spins) {
    MultiplicityTable next;
    for (const auto& [tj, mult] : table)
      for (int t = std::abs(tj - s.twice_j); t <= tj + s.twice_j; t += 2)
        next[t] += mult;
    table = std::move(next);
  }
  return table;
}

long long trivial_multiplicity(const std::vector<Spin>& spins) {
  const MultiplicityTable table = clebsch_multiplicities(spins);
  auto it = table.find(0);
  return it == table.end() ? 0 : it->second;
}

namespace {

/// Slotwise su(2)^n bracket in coordinates where [e_a, e_b] = eps_abc e_c.
std::vector<double> slotwise_bracket(const std::vector<double>& x,
                                     const std::vector<double>& y, std::size_t n) {
  std::vector<double> z(3 * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double* a = &x[3 * k];
    const double* b = &y[3 * k];
    z[3 * k + 0] = a[1] * b[2] - a[2] * b[1];
    z[3 * k + 1] = a[2] * b[0] - a[0] * b[2];
    z[3 * k + 2] = a[0] * b[1] - a[1] * b[0];
  }
  return z;
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

/// Orthogonalize against basis; append normalized residual if it survives
/// the relative rank tolerance. Returns true if added.
bool add_to_basis(std::vector<std::vector<double>>& basis, std::vector<double> v) {
  const double norm0 = std::sqrt(dot(v, v));
  if (norm0 == 0.0) return false;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : basis) {
      const double c = dot(v, b);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
    }
  const double norm1 = std::sqrt(dot(v, v));
  if (norm1 <= 1e-9 * norm0) return false;
  for (double& x : v) x /= norm1;
  basis.push_back(std::move(v));
  return true;
}

} // namespace

int subalgebra_closure_dim(const split::OrderedTypeSet& v, std::size_t n) {
  for (const auto& b : v)
    if (b.size() != n) throw input_error("type-set vectors must have length n");
  std::vector<std::vector<double>> basis;
  for (const auto& b : v)
    for (int axis = 0; axis < 3; ++axis) {
      std::vector<double> gen(3 * n, 0.0);
      for (std::size_t k = 0; k < n; ++k)
        if (b[k] == 1) gen[3 * k + axis] = 1.0;
      add_to_basis(basis, std::move(gen));
    }
  std::size_t processed = 0;
  while (processed < basis.size()) {
    const std::size_t frontier = basis.size();
    for (std::size_t i = processed; i < frontier; ++i)
      for (std::size_t j = 0; j < frontier; ++j) {
        if (basis.size() >= 3 * n) return static_cast<int>(basis.size());
        add_to_basis(basis, slotwise_bracket(basis[i], basis[j], n));
      }
    processed = frontier;
  }
  return static_cast<int>(basis.size());
}

} // namespace spinweb::su2
