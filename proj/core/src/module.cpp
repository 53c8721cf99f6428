#include "csf/module.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace csf {

namespace {

void check_same_spec(const AlgebraSpec& a, const AlgebraSpec& b) {
  if (!(a == b)) {
    throw Error(ErrorCode::SpecMismatch,
                "operands live over different algebras");
  }
}

void check_square(const ModuleOperator& t, const char* what) {
  if (t.rows() != t.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " requires a square operator, got " +
                    std::to_string(t.rows()) + "x" + std::to_string(t.cols()));
  }
}

void check_corner(const ModuleOperator& t, const ModuleOperator& corner,
                  const Tolerance& tol) {
  check_same_spec(t.spec(), corner.spec());
  check_square(t, "corner operation");
  if (corner.rows() != t.rows() || corner.cols() != t.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "corner projection does not match operator shape");
  }
  if (!is_projection(corner, tol)) {
    throw Error(ErrorCode::NotProjection, "corner is not a projection");
  }
}

double max_block_norm(const std::vector<Matrix>& blocks) {
  double scale = 0.0;
  for (const auto& b : blocks) {
    scale = std::max(scale, detail::spectral_norm(b));
  }
  return scale;
}

double max_asymmetry(const std::vector<Matrix>& blocks) {
  double asym = 0.0;
  for (const auto& b : blocks) {
    asym = std::max(asym, detail::spectral_norm(b - b.adjoint()));
  }
  return asym;
}

}  // namespace

namespace detail {

Matrix projection_range_basis(const Matrix& projection_block) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(projection_block));
  int rank = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > 0.5) ++rank;
  }
  return es.eigenvectors().rightCols(rank);
}

}  // namespace detail

ModuleVector::ModuleVector(AlgebraSpec spec,
                           std::vector<AlgebraElement> entries)
    : spec_(std::move(spec)), entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "module vector must be nonempty");
  }
  for (const auto& e : entries_) {
    check_same_spec(spec_, e.spec());
  }
}

ModuleVector ModuleVector::zero(const AlgebraSpec& spec, int length) {
  if (length < 1) {
    throw Error(ErrorCode::InvalidArgument, "module vector must be nonempty");
  }
  std::vector<AlgebraElement> entries(static_cast<size_t>(length),
                                      AlgebraElement::zero(spec));
  return ModuleVector(spec, std::move(entries));
}

ModuleVector ModuleVector::unit_basis(const AlgebraSpec& spec, int length,
                                      int index) {
  if (index < 0 || index >= length) {
    throw Error(ErrorCode::InvalidArgument,
                "basis index " + std::to_string(index) + " out of range");
  }
  ModuleVector v = zero(spec, length);
  v.entry(index) = AlgebraElement::identity(spec);
  return v;
}

ModuleOperator::ModuleOperator(AlgebraSpec spec, int rows, int cols,
                               std::vector<AlgebraElement> entries)
    : spec_(std::move(spec)), rows_(rows), cols_(cols),
      entries_(std::move(entries)) {
  if (rows_ < 1 || cols_ < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "operator shape must be at least 1x1");
  }
  if (entries_.size() != static_cast<size_t>(rows_) * static_cast<size_t>(cols_)) {
    throw Error(ErrorCode::InvalidArgument,
                "operator entry count does not match shape");
  }
  for (const auto& e : entries_) {
    check_same_spec(spec_, e.spec());
  }
}

ModuleOperator ModuleOperator::zero(const AlgebraSpec& spec, int rows,
                                    int cols) {
  if (rows < 1 || cols < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "operator shape must be at least 1x1");
  }
  std::vector<AlgebraElement> entries(
      static_cast<size_t>(rows) * static_cast<size_t>(cols),
      AlgebraElement::zero(spec));
  return ModuleOperator(spec, rows, cols, std::move(entries));
}

ModuleOperator ModuleOperator::identity(const AlgebraSpec& spec, int n) {
  ModuleOperator t = zero(spec, n, n);
  for (int i = 0; i < n; ++i) {
    t.entry(i, i) = AlgebraElement::identity(spec);
  }
  return t;
}

ModuleVector operator+(const ModuleVector& v, const ModuleVector& w) {
  check_same_spec(v.spec(), w.spec());
  if (v.length() != w.length()) {
    throw Error(ErrorCode::DimensionMismatch, "vector lengths differ");
  }
  std::vector<AlgebraElement> entries;
  entries.reserve(static_cast<size_t>(v.length()));
  for (int i = 0; i < v.length(); ++i) {
    entries.push_back(v.entry(i) + w.entry(i));
  }
  return ModuleVector(v.spec(), std::move(entries));
}

ModuleVector operator-(const ModuleVector& v, const ModuleVector& w) {
  return v + w * Complex(-1.0, 0.0);
}

ModuleVector operator*(const ModuleVector& v, Complex lambda) {
  std::vector<AlgebraElement> entries;
  entries.reserve(static_cast<size_t>(v.length()));
  for (int i = 0; i < v.length(); ++i) {
    entries.push_back(v.entry(i) * lambda);
  }
  return ModuleVector(v.spec(), std::move(entries));
}

ModuleVector module_action(const ModuleVector& v, const AlgebraElement& a) {
  check_same_spec(v.spec(), a.spec());
  std::vector<AlgebraElement> entries;
  entries.reserve(static_cast<size_t>(v.length()));
  for (int i = 0; i < v.length(); ++i) {
    entries.push_back(v.entry(i) * a);
  }
  return ModuleVector(v.spec(), std::move(entries));
}

AlgebraElement inner(const ModuleVector& xi, const ModuleVector& eta) {
  check_same_spec(xi.spec(), eta.spec());
  if (xi.length() != eta.length()) {
    throw Error(ErrorCode::DimensionMismatch, "vector lengths differ");
  }
  AlgebraElement acc = AlgebraElement::zero(xi.spec());
  for (int i = 0; i < xi.length(); ++i) {
    acc = acc + adjoint(xi.entry(i)) * eta.entry(i);
  }
  return acc;
}

double norm(const ModuleVector& v) { return std::sqrt(norm(inner(v, v))); }

ModuleOperator operator+(const ModuleOperator& s, const ModuleOperator& t) {
  check_same_spec(s.spec(), t.spec());
  if (s.rows() != t.rows() || s.cols() != t.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "operator shapes differ");
  }
  ModuleOperator out = ModuleOperator::zero(s.spec(), s.rows(), s.cols());
  for (int i = 0; i < s.rows(); ++i) {
    for (int j = 0; j < s.cols(); ++j) {
      out.entry(i, j) = s.entry(i, j) + t.entry(i, j);
    }
  }
  return out;
}

ModuleOperator operator-(const ModuleOperator& s, const ModuleOperator& t) {
  return s + t * Complex(-1.0, 0.0);
}

ModuleOperator operator*(const ModuleOperator& s, const ModuleOperator& t) {
  check_same_spec(s.spec(), t.spec());
  if (s.cols() != t.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "inner dimensions differ: " + std::to_string(s.cols()) +
                    " vs " + std::to_string(t.rows()));
  }
  // Multiply in the flattened picture: one dense product per block instead
  // of rows*cols*inner small-matrix products.
  const std::vector<Matrix> a = flatten(s);
  const std::vector<Matrix> b = flatten(t);
  std::vector<Matrix> blocks;
  blocks.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    blocks.push_back(a[k] * b[k]);
  }
  return unflatten(s.spec(), s.rows(), t.cols(), blocks);
}

ModuleOperator operator*(const ModuleOperator& t, Complex lambda) {
  ModuleOperator out = t;
  for (int i = 0; i < t.rows(); ++i) {
    for (int j = 0; j < t.cols(); ++j) {
      out.entry(i, j) = t.entry(i, j) * lambda;
    }
  }
  return out;
}

ModuleOperator operator*(Complex lambda, const ModuleOperator& t) {
  return t * lambda;
}

ModuleOperator adjoint(const ModuleOperator& t) {
  ModuleOperator out = ModuleOperator::zero(t.spec(), t.cols(), t.rows());
  for (int i = 0; i < t.rows(); ++i) {
    for (int j = 0; j < t.cols(); ++j) {
      out.entry(j, i) = adjoint(t.entry(i, j));
    }
  }
  return out;
}

ModuleVector apply(const ModuleOperator& t, const ModuleVector& v) {
  check_same_spec(t.spec(), v.spec());
  if (t.cols() != v.length()) {
    throw Error(ErrorCode::DimensionMismatch,
                "operator expects length " + std::to_string(t.cols()) +
                    ", got " + std::to_string(v.length()));
  }
  ModuleVector out = ModuleVector::zero(t.spec(), t.rows());
  for (int i = 0; i < t.rows(); ++i) {
    AlgebraElement acc = AlgebraElement::zero(t.spec());
    for (int j = 0; j < t.cols(); ++j) {
      acc = acc + t.entry(i, j) * v.entry(j);
    }
    out.entry(i) = std::move(acc);
  }
  return out;
}

ModuleVector operator*(const ModuleOperator& t, const ModuleVector& v) {
  return apply(t, v);
}

ModuleOperator rank_one(const ModuleVector& xi, const ModuleVector& eta) {
  check_same_spec(xi.spec(), eta.spec());
  ModuleOperator out =
      ModuleOperator::zero(xi.spec(), xi.length(), eta.length());
  for (int i = 0; i < xi.length(); ++i) {
    for (int j = 0; j < eta.length(); ++j) {
      out.entry(i, j) = xi.entry(i) * adjoint(eta.entry(j));
    }
  }
  return out;
}

double norm(const ModuleOperator& t) { return max_block_norm(flatten(t)); }

bool is_projection(const ModuleOperator& p, const Tolerance& tol) {
  check_square(p, "is_projection");
  const double slack = tol.unit_threshold(norm(p));
  return norm(p - adjoint(p)) <= slack && norm(p * p - p) <= slack;
}

bool is_positive(const ModuleOperator& t, const Tolerance& tol) {
  check_square(t, "is_positive");
  const std::vector<Matrix> blocks = flatten(t);
  const double slack = tol.threshold(max_block_norm(blocks));
  if (max_asymmetry(blocks) > slack) return false;
  for (const auto& b : blocks) {
    const Eigen::VectorXd eigs = detail::hermitian_eigenvalues(b);
    if (eigs.size() > 0 && eigs.minCoeff() < -slack) return false;
  }
  return true;
}

std::vector<Matrix> flatten(const ModuleOperator& t) {
  const auto& dims = t.spec().block_dims();
  std::vector<Matrix> out;
  out.reserve(dims.size());
  for (size_t k = 0; k < dims.size(); ++k) {
    const int n = dims[k];
    Matrix big(t.rows() * n, t.cols() * n);
    for (int i = 0; i < t.rows(); ++i) {
      for (int j = 0; j < t.cols(); ++j) {
        big.block(i * n, j * n, n, n) = t.entry(i, j).block(static_cast<int>(k));
      }
    }
    out.push_back(std::move(big));
  }
  return out;
}

std::vector<Matrix> flatten(const ModuleVector& v) {
  return flatten(as_column(v));
}

ModuleOperator unflatten(const AlgebraSpec& spec, int rows, int cols,
                         const std::vector<Matrix>& blocks) {
  if (static_cast<int>(blocks.size()) != spec.block_count()) {
    throw Error(ErrorCode::DimensionMismatch,
                "expected " + std::to_string(spec.block_count()) +
                    " flattened blocks, got " + std::to_string(blocks.size()));
  }
  ModuleOperator out = ModuleOperator::zero(spec, rows, cols);
  for (size_t k = 0; k < blocks.size(); ++k) {
    const int n = spec.block_dim(static_cast<int>(k));
    if (blocks[k].rows() != rows * n || blocks[k].cols() != cols * n) {
      throw Error(ErrorCode::DimensionMismatch,
                  "flattened block " + std::to_string(k) +
                      " has the wrong shape");
    }
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        out.entry(i, j).block(static_cast<int>(k)) =
            blocks[k].block(i * n, j * n, n, n);
      }
    }
  }
  return out;
}

ModuleOperator as_column(const ModuleVector& v) {
  std::vector<AlgebraElement> entries;
  entries.reserve(static_cast<size_t>(v.length()));
  for (int i = 0; i < v.length(); ++i) {
    entries.push_back(v.entry(i));
  }
  return ModuleOperator(v.spec(), v.length(), 1, std::move(entries));
}

ModuleVector as_vector(const ModuleOperator& column) {
  if (column.cols() != 1) {
    throw Error(ErrorCode::DimensionMismatch,
                "expected a single-column operator, got " +
                    std::to_string(column.cols()) + " columns");
  }
  std::vector<AlgebraElement> entries;
  entries.reserve(static_cast<size_t>(column.rows()));
  for (int i = 0; i < column.rows(); ++i) {
    entries.push_back(column.entry(i, 0));
  }
  return ModuleVector(column.spec(), std::move(entries));
}

SpectralRange hermitian_range(const ModuleOperator& t) {
  check_square(t, "hermitian_range");
  SpectralRange range{std::numeric_limits<double>::infinity(),
                      -std::numeric_limits<double>::infinity()};
  for (const auto& b : flatten(t)) {
    const Eigen::VectorXd eigs = detail::hermitian_eigenvalues(b);
    if (eigs.size() == 0) continue;
    range.min = std::min(range.min, eigs.minCoeff());
    range.max = std::max(range.max, eigs.maxCoeff());
  }
  return range;
}

SpectralRange corner_hermitian_range(const ModuleOperator& t,
                                     const ModuleOperator& corner) {
  check_corner(t, corner, {});
  SpectralRange range{std::numeric_limits<double>::infinity(),
                      -std::numeric_limits<double>::infinity()};
  const std::vector<Matrix> t_blocks = flatten(t);
  const std::vector<Matrix> c_blocks = flatten(corner);
  for (size_t k = 0; k < t_blocks.size(); ++k) {
    const Matrix w = detail::projection_range_basis(c_blocks[k]);
    if (w.cols() == 0) continue;
    const Matrix compressed = w.adjoint() * t_blocks[k] * w;
    const Eigen::VectorXd eigs = detail::hermitian_eigenvalues(compressed);
    range.min = std::min(range.min, eigs.minCoeff());
    range.max = std::max(range.max, eigs.maxCoeff());
  }
  if (range.min > range.max) {
    throw Error(ErrorCode::InvalidArgument,
                "corner projection is zero; spectrum is empty");
  }
  return range;
}

namespace {

// Shared backend for the (possibly corner-restricted) functional calculus.
// With corner == nullptr the corner is the identity.
ModuleOperator power_impl(const ModuleOperator& t, double p,
                          const ModuleOperator* corner, const Tolerance& tol) {
  check_square(t, "positive_power");
  const std::vector<Matrix> t_blocks = flatten(t);
  std::vector<Matrix> bases;
  std::vector<Matrix> compressed;
  compressed.reserve(t_blocks.size());
  if (corner != nullptr) {
    for (const auto& cb : flatten(*corner)) {
      bases.push_back(detail::projection_range_basis(cb));
    }
    for (size_t k = 0; k < t_blocks.size(); ++k) {
      compressed.push_back(bases[k].adjoint() * t_blocks[k] * bases[k]);
    }
  } else {
    compressed = t_blocks;
  }

  const double scale = max_block_norm(compressed);
  if (max_asymmetry(compressed) > tol.threshold(scale)) {
    throw Error(ErrorCode::NotPositive, "operator is not self-adjoint");
  }
  double min_eig = std::numeric_limits<double>::infinity();
  for (const auto& b : compressed) {
    const Eigen::VectorXd eigs = detail::hermitian_eigenvalues(b);
    if (eigs.size() > 0) min_eig = std::min(min_eig, eigs.minCoeff());
  }
  if (std::isfinite(min_eig) && min_eig < -tol.threshold(scale)) {
    throw Error(ErrorCode::NotPositive,
                "smallest eigenvalue " + std::to_string(min_eig), min_eig);
  }
  if (p < 0.0 && (!std::isfinite(min_eig) || min_eig <= tol.rel * scale)) {
    throw Error(ErrorCode::NotInvertible,
                "smallest eigenvalue " + std::to_string(min_eig) +
                    " is below the invertibility threshold",
                min_eig);
  }

  std::vector<Matrix> result_blocks;
  result_blocks.reserve(t_blocks.size());
  for (size_t k = 0; k < compressed.size(); ++k) {
    const Matrix powered = detail::hermitian_function(
        compressed[k], [p](double x) { return std::pow(std::max(x, 0.0), p); });
    if (corner != nullptr) {
      result_blocks.push_back(bases[k] * powered * bases[k].adjoint());
    } else {
      result_blocks.push_back(powered);
    }
  }
  return unflatten(t.spec(), t.rows(), t.cols(), result_blocks);
}

}  // namespace

ModuleOperator positive_power(const ModuleOperator& t, double p,
                              const Tolerance& tol) {
  return power_impl(t, p, nullptr, tol);
}

ModuleOperator corner_positive_power(const ModuleOperator& t, double p,
                                     const ModuleOperator& corner,
                                     const Tolerance& tol) {
  check_corner(t, corner, tol);
  return power_impl(t, p, &corner, tol);
}

ModuleOperator corner_inverse(const ModuleOperator& s,
                              const ModuleOperator& corner,
                              const Tolerance& tol) {
  check_corner(s, corner, tol);
  if (norm(s - corner * s * corner) > tol.unit_threshold(norm(s))) {
    throw Error(ErrorCode::NotInCorner,
                "operator does not live in the given corner");
  }
  const std::vector<Matrix> s_blocks = flatten(s);
  const std::vector<Matrix> c_blocks = flatten(corner);

  std::vector<Matrix> bases;
  std::vector<Matrix> compressed;
  for (size_t k = 0; k < s_blocks.size(); ++k) {
    bases.push_back(detail::projection_range_basis(c_blocks[k]));
    compressed.push_back(bases[k].adjoint() * s_blocks[k] * bases[k]);
  }
  double sigma_max = 0.0;
  for (const auto& b : compressed) {
    sigma_max = std::max(sigma_max, detail::spectral_norm(b));
  }
  std::vector<Matrix> result_blocks;
  for (size_t k = 0; k < compressed.size(); ++k) {
    const Matrix& c = compressed[k];
    if (c.rows() == 0) {
      result_blocks.push_back(
          Matrix::Zero(s_blocks[k].rows(), s_blocks[k].cols()));
      continue;
    }
    Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double sigma_min = svd.singularValues()(svd.singularValues().size() - 1);
    if (sigma_min <= tol.rel * sigma_max) {
      throw Error(ErrorCode::NotInvertibleInCorner,
                  "smallest singular value " + std::to_string(sigma_min) +
                      " is below the invertibility threshold",
                  sigma_min);
    }
    const Matrix inv = svd.matrixV() *
                       svd.singularValues().cwiseInverse().asDiagonal() *
                       svd.matrixU().adjoint();
    result_blocks.push_back(bases[k] * inv * bases[k].adjoint());
  }
  return unflatten(s.spec(), s.rows(), s.cols(), result_blocks);
}

std::vector<int> block_ranks(const ModuleOperator& t, const Tolerance& tol) {
  const std::vector<Matrix> blocks = flatten(t);
  double sigma_max = 0.0;
  std::vector<Eigen::VectorXd> singular_values;
  for (const auto& b : blocks) {
    Eigen::JacobiSVD<Matrix> svd(b);
    singular_values.push_back(svd.singularValues());
    if (svd.singularValues().size() > 0) {
      sigma_max = std::max(sigma_max, svd.singularValues()(0));
    }
  }
  const double cutoff = std::max(tol.abs, tol.rel * sigma_max);
  std::vector<int> ranks;
  for (const auto& sv : singular_values) {
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > cutoff) ++r;
    }
    ranks.push_back(r);
  }
  return ranks;
}

std::vector<int> projection_block_ranks(const ModuleOperator& p) {
  std::vector<int> ranks;
  for (const auto& b : flatten(p)) {
    const Eigen::VectorXd eigs = detail::hermitian_eigenvalues(b);
    int r = 0;
    for (Eigen::Index i = 0; i < eigs.size(); ++i) {
      if (eigs(i) > 0.5) ++r;
    }
    ranks.push_back(r);
  }
  return ranks;
}

ModuleOperator vstack(const std::vector<ModuleOperator>& parts) {
  if (parts.empty()) {
    throw Error(ErrorCode::InvalidArgument, "cannot stack zero operators");
  }
  const int cols = parts.front().cols();
  int total_rows = 0;
  for (const auto& part : parts) {
    check_same_spec(parts.front().spec(), part.spec());
    if (part.cols() != cols) {
      throw Error(ErrorCode::DimensionMismatch,
                  "stacked operators must share their column count");
    }
    total_rows += part.rows();
  }
  ModuleOperator out =
      ModuleOperator::zero(parts.front().spec(), total_rows, cols);
  int row = 0;
  for (const auto& part : parts) {
    for (int i = 0; i < part.rows(); ++i) {
      for (int j = 0; j < cols; ++j) {
        out.entry(row + i, j) = part.entry(i, j);
      }
    }
    row += part.rows();
  }
  return out;
}

ModuleOperator row_block(const ModuleOperator& t, int first_row,
                         int row_count) {
  if (first_row < 0 || row_count < 1 || first_row + row_count > t.rows()) {
    throw Error(ErrorCode::InvalidArgument,
                "row block [" + std::to_string(first_row) + ", " +
                    std::to_string(first_row + row_count) +
                    ") out of range for " + std::to_string(t.rows()) +
                    " rows");
  }
  ModuleOperator out = ModuleOperator::zero(t.spec(), row_count, t.cols());
  for (int i = 0; i < row_count; ++i) {
    for (int j = 0; j < t.cols(); ++j) {
      out.entry(i, j) = t.entry(first_row + i, j);
    }
  }
  return out;
}

ModuleOperator block_embedding(const AlgebraSpec& spec, int n, int count,
                               int index) {
  if (n < 1 || count < 1 || index < 0 || index >= count) {
    throw Error(ErrorCode::InvalidArgument,
                "invalid block embedding parameters");
  }
  ModuleOperator out = ModuleOperator::zero(spec, n * count, n);
  for (int i = 0; i < n; ++i) {
    out.entry(index * n + i, i) = AlgebraElement::identity(spec);
  }
  return out;
}

}  // namespace csf
