#include "spinweb/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "spinweb/errors.hpp"

// LAPACK routines used for eigen/singular value decompositions.
extern "C" {
void zheev_(const char* jobz, const char* uplo, const int* n,
            std::complex<double>* a, const int* lda, double* w,
            std::complex<double>* work, const int* lwork, double* rwork,
            int* info);
void zgesvd_(const char* jobu, const char* jobvt, const int* m, const int* n,
             std::complex<double>* a, const int* lda, double* s,
             std::complex<double>* u, const int* ldu,
             std::complex<double>* vt, const int* ldvt,
             std::complex<double>* work, const int* lwork, double* rwork,
             int* info);
}

namespace spinweb::la {

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

CMatrix CMatrix::conjugate() const {
  CMatrix m(rows_, cols_);
  for (std::size_t k = 0; k < data_.size(); ++k) m.data_[k] = std::conj(data_[k]);
  return m;
}

CMatrix CMatrix::transpose() const {
  CMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw input_error("matrix dimension mismatch in addition");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw input_error("matrix dimension mismatch in subtraction");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  for (auto& x : data_) x *= s;
  return *this;
}

bool CMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](cplx x) {
    return std::isfinite(x.real()) && std::isfinite(x.imag());
  });
}

CMatrix operator+(CMatrix a, const CMatrix& b) { a += b; return a; }
CMatrix operator-(CMatrix a, const CMatrix& b) { a -= b; return a; }
CMatrix operator*(cplx s, CMatrix a) { a *= s; return a; }

CMatrix multiply_serial(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw input_error("matrix dimension mismatch in product");
  CMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

CMatrix multiply(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw input_error("matrix dimension mismatch in product");
  CMatrix c(a.rows(), b.cols());
  const std::ptrdiff_t nrows = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < nrows; ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

CMatrix kron_serial(const CMatrix& a, const CMatrix& b) {
  CMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ia = 0; ia < a.rows(); ++ia)
    for (std::size_t ja = 0; ja < a.cols(); ++ja) {
      const cplx f = a(ia, ja);
      for (std::size_t ib = 0; ib < b.rows(); ++ib)
        for (std::size_t jb = 0; jb < b.cols(); ++jb)
          c(ia * b.rows() + ib, ja * b.cols() + jb) = f * b(ib, jb);
    }
  return c;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  const std::ptrdiff_t narows = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ia = 0; ia < narows; ++ia)
    for (std::size_t ja = 0; ja < a.cols(); ++ja) {
      const cplx f = a(ia, ja);
      for (std::size_t ib = 0; ib < b.rows(); ++ib)
        for (std::size_t jb = 0; jb < b.cols(); ++jb)
          c(ia * b.rows() + ib, ja * b.cols() + jb) = f * b(ib, jb);
    }
  return c;
}

cplx trace(const CMatrix& a) {
  cplx t = 0.0;
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
  return t;
}

double frobenius(const CMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

double max_abs(const CMatrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j)));
  return m;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw input_error("matrix dimension mismatch in comparison");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

double operator_norm(const CMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  // zgesvd works on column-major data; pass the transpose, singular values
  // are unaffected.
  CMatrix work_mat = a.transpose();
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  std::vector<double> s(std::min(m, n));
  std::vector<double> rwork(5 * static_cast<std::size_t>(std::min(m, n)));
  int info = 0;
  int lwork = -1;
  cplx wkopt;
  zgesvd_("N", "N", &m, &n, work_mat.data(), &m, s.data(), nullptr, &m, nullptr,
          &n, &wkopt, &lwork, rwork.data(), &info);
  lwork = static_cast<int>(wkopt.real());
  std::vector<cplx> work(static_cast<std::size_t>(lwork));
  zgesvd_("N", "N", &m, &n, work_mat.data(), &m, s.data(), nullptr, &m, nullptr,
          &n, work.data(), &lwork, rwork.data(), &info);
  if (info != 0) throw numerical_error("zgesvd failed, info=" + std::to_string(info));
  return s.empty() ? 0.0 : s[0];
}

EigResult hermitian_eig(const CMatrix& a) {
  if (a.rows() != a.cols()) throw input_error("hermitian_eig needs a square matrix");
  const int n = static_cast<int>(a.rows());
  EigResult res;
  res.values.resize(a.rows());
  if (n == 0) return res;
  // LAPACK reads the buffer column-major, i.e. as the transpose of what we
  // store; for a Hermitian input, passing conj(a) makes LAPACK see a itself.
  CMatrix work_mat = a.conjugate();
  std::vector<double> rwork(std::max(1, 3 * n - 2));
  int info = 0;
  int lwork = -1;
  cplx wkopt;
  zheev_("V", "U", &n, work_mat.data(), &n, res.values.data(), &wkopt, &lwork,
         rwork.data(), &info);
  lwork = static_cast<int>(wkopt.real());
  std::vector<cplx> work(static_cast<std::size_t>(lwork));
  zheev_("V", "U", &n, work_mat.data(), &n, res.values.data(), work.data(),
         &lwork, rwork.data(), &info);
  if (info != 0) throw numerical_error("zheev failed, info=" + std::to_string(info));
  // The buffer now holds the eigenvectors of a, column-major: column k lives
  // in row k of our row-major view. Place them as columns.
  res.vectors = CMatrix(a.rows(), a.cols());
  for (std::size_t col = 0; col < a.cols(); ++col)
    for (std::size_t i = 0; i < a.rows(); ++i)
      res.vectors(i, col) = work_mat(col, i);
  return res;
}

CMatrix projector_from_columns(const CMatrix& vectors, std::size_t first, std::size_t count) {
  CMatrix p(vectors.rows(), vectors.rows());
  for (std::size_t i = 0; i < vectors.rows(); ++i)
    for (std::size_t j = 0; j < vectors.rows(); ++j) {
      cplx s = 0.0;
      for (std::size_t k = first; k < first + count; ++k)
        s += vectors(i, k) * std::conj(vectors(j, k));
      p(i, j) = s;
    }
  return p;
}

} // namespace spinweb::la
