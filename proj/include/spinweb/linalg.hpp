#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace spinweb::la {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major storage.
class CMatrix {
public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static CMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  cplx* data() { return data_.data(); }
  const cplx* data() const { return data_.data(); }

  CMatrix adjoint() const;
  CMatrix conjugate() const;
  CMatrix transpose() const;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(cplx s);

  bool all_finite() const;

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cplx> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(cplx s, CMatrix a);

// Matrix product and Kronecker product. The plain names are the OpenMP
// kernels; the *_serial variants are the reference implementations the
// tests compare against (see bench/bench_kernels.cpp for timings).
CMatrix multiply(const CMatrix& a, const CMatrix& b);
CMatrix multiply_serial(const CMatrix& a, const CMatrix& b);
CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix kron_serial(const CMatrix& a, const CMatrix& b);

inline CMatrix operator*(const CMatrix& a, const CMatrix& b) { return multiply(a, b); }

cplx trace(const CMatrix& a);
double frobenius(const CMatrix& a);
double max_abs(const CMatrix& a);
double max_abs_diff(const CMatrix& a, const CMatrix& b);

/// Largest singular value (LAPACK zgesvd).
double operator_norm(const CMatrix& a);

/// Eigendecomposition of a Hermitian matrix (LAPACK zheev).
/// Eigenvalues ascending; eigenvectors in the columns of `vectors`.
struct EigResult {
  std::vector<double> values;
  CMatrix vectors;
};
EigResult hermitian_eig(const CMatrix& a);

/// V * V^H over the given column range of `vectors`.
CMatrix projector_from_columns(const CMatrix& vectors, std::size_t first, std::size_t count);

} // namespace spinweb::la
