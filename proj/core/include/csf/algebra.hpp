#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "csf/errors.hpp"
#include "csf/tolerance.hpp"

namespace csf {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Shape of a finite-dimensional C*-algebra: a direct sum of full complex
// matrix algebras, one block per entry of block_dims.
class AlgebraSpec {
 public:
  explicit AlgebraSpec(std::vector<int> block_dims);

  int block_count() const { return static_cast<int>(block_dims_.size()); }
  int block_dim(int k) const { return block_dims_[static_cast<size_t>(k)]; }
  const std::vector<int>& block_dims() const { return block_dims_; }

  bool operator==(const AlgebraSpec&) const = default;

 private:
  std::vector<int> block_dims_;
};

// An element of the algebra: one dense complex matrix per block.
class AlgebraElement {
 public:
  AlgebraElement(AlgebraSpec spec, std::vector<Matrix> blocks);

  static AlgebraElement zero(const AlgebraSpec& spec);
  static AlgebraElement identity(const AlgebraSpec& spec);

  const AlgebraSpec& spec() const { return spec_; }
  int block_count() const { return spec_.block_count(); }
  const Matrix& block(int k) const { return blocks_[static_cast<size_t>(k)]; }
  Matrix& block(int k) { return blocks_[static_cast<size_t>(k)]; }

 private:
  AlgebraSpec spec_;
  std::vector<Matrix> blocks_;
};

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator*(const AlgebraElement& a, Complex lambda);
AlgebraElement operator*(Complex lambda, const AlgebraElement& a);

// Blockwise conjugate transpose.
AlgebraElement adjoint(const AlgebraElement& a);

// C*-norm: max over blocks of the largest singular value.
double norm(const AlgebraElement& a);

// Self-adjoint to tolerance with all eigenvalues of the Hermitian part
// above -(abs + rel*norm(a)).
bool is_positive(const AlgebraElement& a, const Tolerance& tol = {});

// a^p for positive a via blockwise Hermitian eigendecomposition.
// Negative powers require the smallest eigenvalue to clear the
// scale-invariant invertibility threshold rel*norm(a).
AlgebraElement positive_power(const AlgebraElement& a, double p,
                              const Tolerance& tol = {});

namespace detail {
double spectral_norm(const Matrix& m);
Eigen::VectorXd hermitian_eigenvalues(const Matrix& m);
Matrix hermitian_part(const Matrix& m);
// f applied to the spectrum of the Hermitian part of m.
Matrix hermitian_function(const Matrix& m, const std::function<double(double)>& f);
void require_same_spec(const AlgebraSpec& a, const AlgebraSpec& b,
                       const char* where);
}  // namespace detail

}  // namespace csf
