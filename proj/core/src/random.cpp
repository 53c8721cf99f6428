#include "csf/random.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <utility>

namespace csf {

namespace {

Matrix random_matrix(Rng& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      m(i, j) = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    }
  }
  return m;
}

Matrix random_unitary_matrix(Rng& rng, int n) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, n, n));
  return qr.householderQ();
}

Matrix random_isometry_matrix(Rng& rng, int rows, int cols) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, rows, cols));
  return qr.householderQ() * Matrix::Identity(rows, cols);
}

// U diag(sigma) V^* with sigma in [0.5, 2].
Matrix random_invertible_matrix(Rng& rng, int n) {
  Eigen::VectorXd sigma(n);
  for (int i = 0; i < n; ++i) sigma(i) = rng.uniform(0.5, 2.0);
  return random_unitary_matrix(rng, n) * sigma.asDiagonal() *
         random_unitary_matrix(rng, n).adjoint();
}

}  // namespace

AlgebraElement random_element(Rng& rng, const AlgebraSpec& spec) {
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<size_t>(spec.block_count()));
  for (int k = 0; k < spec.block_count(); ++k) {
    blocks.push_back(random_matrix(rng, spec.block_dim(k), spec.block_dim(k)));
  }
  return AlgebraElement(spec, std::move(blocks));
}

AlgebraElement random_positive_invertible(Rng& rng, const AlgebraSpec& spec) {
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<size_t>(spec.block_count()));
  for (int k = 0; k < spec.block_count(); ++k) {
    const int n = spec.block_dim(k);
    const Matrix u = random_unitary_matrix(rng, n);
    Eigen::VectorXd sigma(n);
    for (int i = 0; i < n; ++i) sigma(i) = rng.uniform(0.5, 2.0);
    blocks.push_back(Matrix(u * sigma.asDiagonal() * u.adjoint()));
  }
  return AlgebraElement(spec, std::move(blocks));
}

ModuleVector random_vector(Rng& rng, const AlgebraSpec& spec, int length) {
  std::vector<AlgebraElement> entries;
  entries.reserve(static_cast<size_t>(length));
  for (int i = 0; i < length; ++i) {
    entries.push_back(random_element(rng, spec));
  }
  return ModuleVector(spec, std::move(entries));
}

ModuleVector random_unital_vector(Rng& rng, const AlgebraSpec& spec,
                                  int length) {
  return as_vector(random_isometry(rng, spec, length, 1));
}

ModuleOperator random_operator(Rng& rng, const AlgebraSpec& spec, int rows,
                               int cols) {
  std::vector<AlgebraElement> entries;
  entries.reserve(static_cast<size_t>(rows) * static_cast<size_t>(cols));
  for (int i = 0; i < rows * cols; ++i) {
    entries.push_back(random_element(rng, spec));
  }
  return ModuleOperator(spec, rows, cols, std::move(entries));
}

ModuleOperator random_unitary(Rng& rng, const AlgebraSpec& spec, int n) {
  std::vector<Matrix> blocks;
  for (int k = 0; k < spec.block_count(); ++k) {
    blocks.push_back(random_unitary_matrix(rng, n * spec.block_dim(k)));
  }
  return unflatten(spec, n, n, blocks);
}

ModuleOperator random_invertible(Rng& rng, const AlgebraSpec& spec, int n) {
  std::vector<Matrix> blocks;
  for (int k = 0; k < spec.block_count(); ++k) {
    blocks.push_back(random_invertible_matrix(rng, n * spec.block_dim(k)));
  }
  return unflatten(spec, n, n, blocks);
}

ModuleOperator random_isometry(Rng& rng, const AlgebraSpec& spec, int rows,
                               int cols) {
  if (rows < cols) {
    throw Error(ErrorCode::InvalidArgument,
                "an isometry needs rows >= cols");
  }
  std::vector<Matrix> blocks;
  for (int k = 0; k < spec.block_count(); ++k) {
    const int d = spec.block_dim(k);
    blocks.push_back(random_isometry_matrix(rng, rows * d, cols * d));
  }
  return unflatten(spec, rows, cols, blocks);
}

ModuleOperator random_left_invertible(Rng& rng, const AlgebraSpec& spec,
                                      int rows, int cols) {
  return random_isometry(rng, spec, rows, cols) *
         random_invertible(rng, spec, cols);
}

ModuleOperator random_projection(Rng& rng, const AlgebraSpec& spec, int n,
                                 const std::vector<int>& block_ranks) {
  if (static_cast<int>(block_ranks.size()) != spec.block_count()) {
    throw Error(ErrorCode::InvalidArgument,
                "need one rank per algebra block");
  }
  std::vector<Matrix> blocks;
  for (int k = 0; k < spec.block_count(); ++k) {
    const int d = n * spec.block_dim(k);
    const int r = block_ranks[static_cast<size_t>(k)];
    if (r < 0 || r > d) {
      throw Error(ErrorCode::InvalidArgument,
                  "rank " + std::to_string(r) + " out of range for a " +
                      std::to_string(d) + "-dimensional block");
    }
    const Matrix u = random_unitary_matrix(rng, d);
    blocks.push_back(
        Matrix(u.leftCols(r) * u.leftCols(r).adjoint()));
  }
  return unflatten(spec, n, n, blocks);
}

OperatorFrame random_frame(Rng& rng, const AlgebraSpec& spec, int n,
                           int count) {
  std::vector<ModuleOperator> elements;
  elements.reserve(static_cast<size_t>(count));
  for (int j = 0; j < count; ++j) {
    elements.push_back(random_operator(rng, spec, n, n));
  }
  return OperatorFrame(std::move(elements));
}

OperatorFrame random_parseval_frame(Rng& rng, const AlgebraSpec& spec, int n,
                                    int count) {
  return parseval_normalize(random_frame(rng, spec, n, count));
}

OperatorFrame random_corner_frame(Rng& rng, const AlgebraSpec& spec, int n,
                                  int count, const ModuleOperator& codomain) {
  std::vector<ModuleOperator> elements;
  elements.reserve(static_cast<size_t>(count));
  for (int j = 0; j < count; ++j) {
    elements.push_back(codomain * random_operator(rng, spec, n, n));
  }
  return OperatorFrame(std::move(elements), codomain, {});
}

}  // namespace csf
