#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string_view>
#include <vector>

#include "spinweb/linalg.hpp"
#include "spinweb/splitcore.hpp"

namespace spinweb::su2 {

/// SU(2) irrep label; the spin j is stored as 2j to stay exact.
struct Spin {
  int twice_j = 0;

  int dim() const { return twice_j + 1; }
  bool operator==(const Spin&) const = default;
  auto operator<=>(const Spin&) const = default;

  /// Parse "0", "2", "1/2", "5/2".
  static Spin parse(std::string_view text);
  std::string str() const;
};

inline Spin half() { return Spin{1}; }

/// zyz Euler angles, alpha in [0,2pi), beta in [0,pi], gamma in [0,4pi).
struct EulerAngles {
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
};

/// Element of SU(2) as a 2x2 unitary with determinant 1.
class GroupElement {
public:
  GroupElement();
  explicit GroupElement(la::CMatrix m);
  static GroupElement from_angles(const EulerAngles& a);

  const la::CMatrix& matrix() const { return m_; }
  EulerAngles angles() const;
  GroupElement operator*(const GroupElement& other) const;

private:
  la::CMatrix m_;
};

/// Wigner matrix of the spin-j irrep in the convention
/// g(alpha,beta,gamma) = exp(-i alpha J3) exp(-i beta J2) exp(-i gamma J3),
/// rows/columns ordered from highest weight m = j down to m = -j.
la::CMatrix wigner_matrix(Spin j, const EulerAngles& a);

/// Matrix of the su(2) generator J_a (a = 0,1,2 for J1,J2,J3) in the spin-j
/// irrep, same basis ordering as wigner_matrix.
la::CMatrix spin_generator(Spin j, int axis);

/// Product rule exact for Haar integrals of products of at most `degree`
/// spin-1/2 matrix coefficients: trapezoid in alpha and gamma,
/// Gauss-Legendre in cos(beta), 2*degree+2 nodes per axis.
struct QuadratureRule {
  struct Node {
    EulerAngles angles;
    double weight;
  };
  std::vector<Node> nodes;
  int degree = 0;

  static const QuadratureRule& get(int degree); // cached
};

/// Haar integral of a matrix-valued function, exact for integrands of
/// spin-1/2 coefficient degree <= degree. Deterministic chunked reduction,
/// independent of the number of threads.
la::CMatrix haar_integrate(const std::function<la::CMatrix(const EulerAngles&)>& f,
                           int degree);

/// Haar-distributed group element; deterministic per generator state.
GroupElement sample_haar(std::mt19937_64& rng);
GroupElement sample_haar_seeded(std::uint64_t seed);

/// Exact rational value.
struct Rational {
  long long num = 0;
  long long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Closed-form Haar inner product <g^mu1_nu1 g^mu2_nu2, g^rho1_sigma1 g^rho2_sigma2>
/// for spin-1/2 matrix coefficients; all indices in {1,2}, 1 = highest weight.
Rational pair_moment(int mu1, int nu1, int mu2, int nu2,
                     int rho1, int sigma1, int rho2, int sigma2);

/// Multiplicities of each total spin in the iterated tensor product,
/// keyed by 2j.
using MultiplicityTable = std::map<int, long long>;
MultiplicityTable clebsch_multiplicities(const std::vector<Spin>& spins);
long long trivial_multiplicity(const std::vector<Spin>& spins);

/// Dimension of the real Lie algebra generated under brackets by copies of
/// su(2) placed diagonally along each element of V. Equals 3n exactly when
/// finite products of the corresponding subgroups fill SU(2)^n.
int subalgebra_closure_dim(const split::OrderedTypeSet& v, std::size_t n);

} // namespace spinweb::su2
