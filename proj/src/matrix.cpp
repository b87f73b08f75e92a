#include "jcdiscord/matrix.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

namespace jcd {

namespace {

void check_shape(std::size_t rows, std::size_t cols) {
  if (rows > kMaxDimension || cols > kMaxDimension) {
    throw DimensionError("matrix dimension " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " exceeds the supported maximum of " + std::to_string(kMaxDimension));
  }
}

void check_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + ": shape mismatch");
  }
}

void check_layout(const ComplexMatrix& m, const SubsystemDims& dims) {
  if (!m.is_square()) throw DimensionError("density matrix must be square");
  if (dims.total() != m.rows()) {
    throw DimensionError("subsystem dimensions multiply to " + std::to_string(dims.total()) +
                         " but the matrix has dimension " + std::to_string(m.rows()));
  }
}

// Mixed-radix digits of a flat index, most significant factor first.
std::vector<std::size_t> digits_of(std::size_t index, std::span<const std::size_t> dims) {
  std::vector<std::size_t> digits(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    digits[k] = index % dims[k];
    index /= dims[k];
  }
  return digits;
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols) {
  check_shape(rows, cols);
  data_.assign(rows * cols, Complex{});
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  check_shape(rows, cols);
  if (data_.size() != rows * cols) {
    throw DimensionError("entry count " + std::to_string(data_.size()) + " does not match " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  check_shape(rows_, cols_);
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionError("ragged matrix initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> v) {
  ComplexMatrix m(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
  }
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  }
  return m;
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw DimensionError("trace of a non-square matrix");
  Complex sum{};
  for (std::size_t i = 0; i < rows_; ++i) sum += (*this)(i, i);
  return sum;
}

double ComplexMatrix::hermiticity_defect() const {
  if (!is_square()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = i; j < cols_; ++j) {
      worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    }
  }
  return worst;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  check_same_shape(*this, o, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  check_same_shape(*this, o, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& v : data_) v *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("operator*: inner dimensions differ");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

SubsystemDims::SubsystemDims(std::initializer_list<std::size_t> dims)
    : SubsystemDims(std::vector<std::size_t>(dims)) {}

SubsystemDims::SubsystemDims(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  for (auto d : dims_) {
    if (d == 0) throw DimensionError("subsystem dimensions must be positive");
  }
}

std::size_t SubsystemDims::total() const {
  return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
}

DensityMatrix::DensityMatrix(ComplexMatrix m, SubsystemDims d)
    : matrix(std::move(m)), dims(std::move(d)) {
  check_layout(matrix, dims);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k) {
        for (std::size_t l = 0; l < b.cols(); ++l) {
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
      }
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, const SubsystemDims& dims,
                            std::span<const std::size_t> keep) {
  check_layout(rho, dims);
  std::vector<bool> kept(dims.count(), false);
  for (auto k : keep) {
    if (k >= dims.count()) throw DimensionError("partial_trace: subsystem index out of range");
    kept[k] = true;
  }

  // Split every flat index into (kept part, traced part).
  const std::size_t n = rho.rows();
  std::vector<std::size_t> kept_index(n), traced_index(n);
  std::size_t kept_dim = 1;
  for (std::size_t s = 0; s < dims.count(); ++s) {
    if (kept[s]) kept_dim *= dims[s];
  }
  for (std::size_t idx = 0; idx < n; ++idx) {
    const auto digits = digits_of(idx, dims.values());
    std::size_t ki = 0, ti = 0;
    for (std::size_t s = 0; s < dims.count(); ++s) {
      if (kept[s]) {
        ki = ki * dims[s] + digits[s];
      } else {
        ti = ti * dims[s] + digits[s];
      }
    }
    kept_index[idx] = ki;
    traced_index[idx] = ti;
  }

  ComplexMatrix out(kept_dim, kept_dim);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (traced_index[r] == traced_index[c]) out(kept_index[r], kept_index[c]) += rho(r, c);
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  std::vector<std::size_t> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::size_t> kept_dims;
  for (auto k : sorted) {
    if (k >= rho.dims.count()) throw DimensionError("partial_trace: subsystem index out of range");
    kept_dims.push_back(rho.dims[k]);
  }
  return {partial_trace(rho.matrix, rho.dims, sorted), SubsystemDims(std::move(kept_dims))};
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::size_t> keep) {
  return partial_trace(rho, std::span<const std::size_t>(keep.begin(), keep.size()));
}

DensityMatrix permute_subsystems(const DensityMatrix& rho, std::span<const std::size_t> order) {
  const std::size_t count = rho.dims.count();
  std::vector<bool> seen(count, false);
  if (order.size() != count) throw DimensionError("permute_subsystems: order has wrong length");
  for (auto o : order) {
    if (o >= count || seen[o]) throw DimensionError("permute_subsystems: not a permutation");
    seen[o] = true;
  }
  std::vector<std::size_t> new_dims(count);
  for (std::size_t k = 0; k < count; ++k) new_dims[k] = rho.dims[order[k]];

  const std::size_t n = rho.matrix.rows();
  std::vector<std::size_t> target(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const auto digits = digits_of(idx, rho.dims.values());
    std::size_t t = 0;
    for (std::size_t k = 0; k < count; ++k) t = t * new_dims[k] + digits[order[k]];
    target[idx] = t;
  }
  ComplexMatrix out(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) out(target[r], target[c]) = rho.matrix(r, c);
  }
  return {std::move(out), SubsystemDims(std::move(new_dims))};
}

DensityMatrix permute_subsystems(const DensityMatrix& rho, std::initializer_list<std::size_t> order) {
  return permute_subsystems(rho, std::span<const std::size_t>(order.begin(), order.size()));
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  const double defect = m.hermiticity_defect();
  if (!(defect <= kHermitianTolerance)) {
    throw std::invalid_argument("hermitian_eigenvalues: matrix is not Hermitian (defect " +
                                std::to_string(defect) + ")");
  }
  const auto n = static_cast<Eigen::Index>(m.rows());
  Eigen::MatrixXcd em(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      // Average with the mirrored entry so the solver sees an exactly Hermitian input.
      em(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(em, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eigenvalues: eigensolver did not converge");
  }
  std::vector<double> values(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

double frobenius_norm_sq(const ComplexMatrix& m) {
  double sum = 0.0;
  for (const auto& v : m.entries()) sum += std::norm(v);
  return sum;
}

double real_trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    throw DimensionError("real_trace_of_product: shapes do not form a square product");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) sum += (a(i, k) * b(k, i)).real();
  }
  return sum;
}

namespace pauli {

const ComplexMatrix& identity() {
  static const ComplexMatrix m = ComplexMatrix::identity(2);
  return m;
}

const ComplexMatrix& x() {
  static const ComplexMatrix m{{0.0, 1.0}, {1.0, 0.0}};
  return m;
}

const ComplexMatrix& y() {
  static const ComplexMatrix m{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}};
  return m;
}

const ComplexMatrix& z() {
  static const ComplexMatrix m{{1.0, 0.0}, {0.0, -1.0}};
  return m;
}

const ComplexMatrix& by_index(std::size_t i) {
  switch (i) {
    case 0: return x();
    case 1: return y();
    case 2: return z();
    default: throw std::out_of_range("pauli::by_index expects 0, 1 or 2");
  }
}

}  // namespace pauli

}  // namespace jcd
