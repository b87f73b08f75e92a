#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace jcd {

using Complex = std::complex<double>;

/// Thrown when matrix shapes or subsystem layouts do not fit together.
class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Largest row or column count a ComplexMatrix may have.
inline constexpr std::size_t kMaxDimension = 64;

/// Absolute tolerance on max |M - M^dagger| used to accept Hermitian input.
inline constexpr double kHermitianTolerance = 1e-10;

/// Dense row-major complex matrix for the small operators of this library
/// (density matrices, Pauli products, correlation matrices).
class ComplexMatrix {
public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> values);
  /// |v><v| for a column vector v.
  static ComplexMatrix outer(std::span<const Complex> v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  std::span<const Complex> entries() const { return data_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  /// Largest entrywise |M - M^dagger|; infinite for non-square input.
  double hermiticity_defect() const;
  bool is_hermitian(double tol = kHermitianTolerance) const { return hermiticity_defect() <= tol; }

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Ordered dimensions of the tensor factors a square matrix acts on.
class SubsystemDims {
public:
  SubsystemDims() = default;
  SubsystemDims(std::initializer_list<std::size_t> dims);
  explicit SubsystemDims(std::vector<std::size_t> dims);

  std::size_t count() const { return dims_.size(); }
  std::size_t operator[](std::size_t i) const { return dims_.at(i); }
  std::size_t total() const;
  std::span<const std::size_t> values() const { return dims_; }

  friend bool operator==(const SubsystemDims&, const SubsystemDims&) = default;

private:
  std::vector<std::size_t> dims_;
};

/// A density operator together with its tensor-factor layout.
struct DensityMatrix {
  ComplexMatrix matrix;
  SubsystemDims dims;

  DensityMatrix() = default;
  DensityMatrix(ComplexMatrix m, SubsystemDims d);
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Traces out every subsystem not listed in `keep`. Kept factors stay in
/// their original order regardless of the order given in `keep`.
ComplexMatrix partial_trace(const ComplexMatrix& rho, const SubsystemDims& dims,
                            std::span<const std::size_t> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::size_t> keep);

/// Reorders tensor factors: factor `order[k]` of the input becomes factor k.
DensityMatrix permute_subsystems(const DensityMatrix& rho, std::span<const std::size_t> order);
DensityMatrix permute_subsystems(const DensityMatrix& rho, std::initializer_list<std::size_t> order);

/// Eigenvalues of a Hermitian matrix in descending order.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

double frobenius_norm_sq(const ComplexMatrix& m);

/// Re tr(A B) without forming the product.
double real_trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);

namespace pauli {
// sigma_z = |0><0| - |1><1|, basis index 0 is |0>.
const ComplexMatrix& identity();
const ComplexMatrix& x();
const ComplexMatrix& y();
const ComplexMatrix& z();
/// sigma_x, sigma_y, sigma_z for i = 0, 1, 2.
const ComplexMatrix& by_index(std::size_t i);
}  // namespace pauli

}  // namespace jcd
