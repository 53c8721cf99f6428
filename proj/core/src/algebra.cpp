#include "csf/algebra.hpp"

#include <algorithm>
#include <cmath>

namespace csf {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SpecMismatch: return "SpecMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::NotAFrame: return "NotAFrame";
    case ErrorCode::NotUnitalVector: return "NotUnitalVector";
    case ErrorCode::NotProjection: return "NotProjection";
    case ErrorCode::NotInCorner: return "NotInCorner";
    case ErrorCode::NotInvertibleInCorner: return "NotInvertibleInCorner";
    case ErrorCode::NotCornerUnitary: return "NotCornerUnitary";
    case ErrorCode::NotParseval: return "NotParseval";
    case ErrorCode::NotCompatiblePartialIsometry:
      return "NotCompatiblePartialIsometry";
    case ErrorCode::NotEquivalent: return "NotEquivalent";
    case ErrorCode::NotLeftInvertible: return "NotLeftInvertible";
    case ErrorCode::IncompatibleRanges: return "IncompatibleRanges";
    case ErrorCode::InconsistentIndexing: return "InconsistentIndexing";
    case ErrorCode::DegenerateInnerFrame: return "DegenerateInnerFrame";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "UnknownError";
}

AlgebraSpec::AlgebraSpec(std::vector<int> block_dims)
    : block_dims_(std::move(block_dims)) {
  if (block_dims_.empty())
    throw Error(ErrorCode::InvalidArgument, "algebra needs at least one block");
  for (int n : block_dims_)
    if (n < 1)
      throw Error(ErrorCode::InvalidArgument, "block dimensions must be >= 1");
}

AlgebraElement::AlgebraElement(AlgebraSpec spec, std::vector<Matrix> blocks)
    : spec_(std::move(spec)), blocks_(std::move(blocks)) {
  if (static_cast<int>(blocks_.size()) != spec_.block_count())
    throw Error(ErrorCode::SpecMismatch, "wrong number of blocks");
  for (int k = 0; k < spec_.block_count(); ++k) {
    const Matrix& b = blocks_[static_cast<size_t>(k)];
    if (b.rows() != spec_.block_dim(k) || b.cols() != spec_.block_dim(k))
      throw Error(ErrorCode::SpecMismatch, "block shape does not match spec");
  }
}

AlgebraElement AlgebraElement::zero(const AlgebraSpec& spec) {
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<size_t>(spec.block_count()));
  for (int k = 0; k < spec.block_count(); ++k)
    blocks.push_back(Matrix::Zero(spec.block_dim(k), spec.block_dim(k)));
  return AlgebraElement(spec, std::move(blocks));
}

AlgebraElement AlgebraElement::identity(const AlgebraSpec& spec) {
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<size_t>(spec.block_count()));
  for (int k = 0; k < spec.block_count(); ++k)
    blocks.push_back(Matrix::Identity(spec.block_dim(k), spec.block_dim(k)));
  return AlgebraElement(spec, std::move(blocks));
}

namespace detail {

void require_same_spec(const AlgebraSpec& a, const AlgebraSpec& b,
                       const char* where) {
  if (!(a == b))
    throw Error(ErrorCode::SpecMismatch, where);
}

double spectral_norm(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.adjoint() * m,
                                               Eigen::EigenvaluesOnly);
  // Round-off can push the top eigenvalue of m^H m slightly below zero when
  // m itself is numerically zero.
  return std::sqrt(std::max(solver.eigenvalues().maxCoeff(), 0.0));
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(m),
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

Matrix hermitian_function(const Matrix& m,
                          const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(m));
  Eigen::VectorXd values = solver.eigenvalues();
  for (Eigen::Index i = 0; i < values.size(); ++i) values(i) = f(values(i));
  return solver.eigenvectors() * values.asDiagonal() *
         solver.eigenvectors().adjoint();
}

}  // namespace detail

namespace {

template <typename F>
AlgebraElement blockwise(const AlgebraElement& a, const AlgebraElement& b,
                         const char* where, F&& combine) {
  detail::require_same_spec(a.spec(), b.spec(), where);
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<size_t>(a.block_count()));
  for (int k = 0; k < a.block_count(); ++k)
    blocks.push_back(combine(a.block(k), b.block(k)));
  return AlgebraElement(a.spec(), std::move(blocks));
}

}  // namespace

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  return blockwise(a, b, "add", [](const Matrix& x, const Matrix& y) {
    return Matrix(x + y);
  });
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
  return blockwise(a, b, "subtract", [](const Matrix& x, const Matrix& y) {
    return Matrix(x - y);
  });
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  return blockwise(a, b, "multiply", [](const Matrix& x, const Matrix& y) {
    return Matrix(x * y);
  });
}

AlgebraElement operator*(const AlgebraElement& a, Complex lambda) {
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<size_t>(a.block_count()));
  for (int k = 0; k < a.block_count(); ++k)
    blocks.push_back(Matrix(lambda * a.block(k)));
  return AlgebraElement(a.spec(), std::move(blocks));
}

AlgebraElement operator*(Complex lambda, const AlgebraElement& a) {
  return a * lambda;
}

AlgebraElement adjoint(const AlgebraElement& a) {
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<size_t>(a.block_count()));
  for (int k = 0; k < a.block_count(); ++k)
    blocks.push_back(Matrix(a.block(k).adjoint()));
  return AlgebraElement(a.spec(), std::move(blocks));
}

double norm(const AlgebraElement& a) {
  double result = 0.0;
  for (int k = 0; k < a.block_count(); ++k)
    result = std::max(result, detail::spectral_norm(a.block(k)));
  return result;
}

bool is_positive(const AlgebraElement& a, const Tolerance& tol) {
  const double slack = tol.threshold(norm(a));
  double asymmetry = 0.0;
  double min_eig = 0.0;
  for (int k = 0; k < a.block_count(); ++k) {
    asymmetry = std::max(
        asymmetry, detail::spectral_norm(a.block(k) - a.block(k).adjoint()));
    Eigen::VectorXd eigs = detail::hermitian_eigenvalues(a.block(k));
    min_eig = std::min(min_eig, eigs.minCoeff());
  }
  return asymmetry <= slack && min_eig >= -slack;
}

AlgebraElement positive_power(const AlgebraElement& a, double p,
                              const Tolerance& tol) {
  if (!is_positive(a, tol))
    throw Error(ErrorCode::NotPositive, "positive_power input");
  const double scale = norm(a);
  if (p < 0.0) {
    double min_eig = std::numeric_limits<double>::infinity();
    for (int k = 0; k < a.block_count(); ++k)
      min_eig = std::min(
          min_eig, detail::hermitian_eigenvalues(a.block(k)).minCoeff());
    if (min_eig <= tol.rel * scale)
      throw Error(ErrorCode::NotInvertible,
                  "smallest eigenvalue " + std::to_string(min_eig), min_eig);
  }
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<size_t>(a.block_count()));
  for (int k = 0; k < a.block_count(); ++k)
    blocks.push_back(detail::hermitian_function(
        a.block(k),
        [p](double x) { return std::pow(std::max(x, 0.0), p); }));
  return AlgebraElement(a.spec(), std::move(blocks));
}

}  // namespace csf
