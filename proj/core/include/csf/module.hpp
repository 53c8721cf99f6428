#pragma once

#include <vector>

#include "csf/algebra.hpp"

namespace csf {

// Element of the standard right module A^N: a column of N algebra elements,
// with the A-valued inner product <xi, eta> = sum_i xi_i^* eta_i.
class ModuleVector {
 public:
  ModuleVector(AlgebraSpec spec, std::vector<AlgebraElement> entries);

  static ModuleVector zero(const AlgebraSpec& spec, int length);
  // e_index with the algebra unit as its only nonzero entry.
  static ModuleVector unit_basis(const AlgebraSpec& spec, int length,
                                 int index);

  const AlgebraSpec& spec() const { return spec_; }
  int length() const { return static_cast<int>(entries_.size()); }
  const AlgebraElement& entry(int i) const {
    return entries_[static_cast<size_t>(i)];
  }
  AlgebraElement& entry(int i) { return entries_[static_cast<size_t>(i)]; }

 private:
  AlgebraSpec spec_;
  std::vector<AlgebraElement> entries_;
};

// Adjointable operator A^N -> A^M stored densely as an M x N array of
// algebra elements (row-major).
class ModuleOperator {
 public:
  ModuleOperator(AlgebraSpec spec, int rows, int cols,
                 std::vector<AlgebraElement> entries);

  static ModuleOperator zero(const AlgebraSpec& spec, int rows, int cols);
  static ModuleOperator identity(const AlgebraSpec& spec, int n);

  const AlgebraSpec& spec() const { return spec_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const AlgebraElement& entry(int i, int j) const {
    return entries_[static_cast<size_t>(i * cols_ + j)];
  }
  AlgebraElement& entry(int i, int j) {
    return entries_[static_cast<size_t>(i * cols_ + j)];
  }

 private:
  AlgebraSpec spec_;
  int rows_;
  int cols_;
  std::vector<AlgebraElement> entries_;
};

// Same role as ModuleOperator; callers must have checked is_projection.
using ProjectionOperator = ModuleOperator;

ModuleVector operator+(const ModuleVector& v, const ModuleVector& w);
ModuleVector operator-(const ModuleVector& v, const ModuleVector& w);
ModuleVector operator*(const ModuleVector& v, Complex lambda);

// Right action (v * a)_i = v_i a.
ModuleVector module_action(const ModuleVector& v, const AlgebraElement& a);

AlgebraElement inner(const ModuleVector& xi, const ModuleVector& eta);
double norm(const ModuleVector& v);

ModuleOperator operator+(const ModuleOperator& s, const ModuleOperator& t);
ModuleOperator operator-(const ModuleOperator& s, const ModuleOperator& t);
ModuleOperator operator*(const ModuleOperator& s, const ModuleOperator& t);
ModuleOperator operator*(const ModuleOperator& t, Complex lambda);
ModuleOperator operator*(Complex lambda, const ModuleOperator& t);
ModuleOperator adjoint(const ModuleOperator& t);

ModuleVector apply(const ModuleOperator& t, const ModuleVector& v);
ModuleVector operator*(const ModuleOperator& t, const ModuleVector& v);

// theta_{xi,eta}: zeta -> xi <eta, zeta>. Entries xi_i eta_j^*.
ModuleOperator rank_one(const ModuleVector& xi, const ModuleVector& eta);

double norm(const ModuleOperator& t);
bool is_projection(const ModuleOperator& p, const Tolerance& tol = {});
// Self-adjoint with spectrum above -(abs + rel*norm).
bool is_positive(const ModuleOperator& t, const Tolerance& tol = {});

// The faithful *-homomorphism used as the dense oracle: an M x N operator
// restricted to algebra block k is one (M*n_k) x (N*n_k) complex matrix.
std::vector<Matrix> flatten(const ModuleOperator& t);
// A vector flattens as an N x 1 operator: (N*n_k) x n_k per block.
std::vector<Matrix> flatten(const ModuleVector& v);
ModuleOperator unflatten(const AlgebraSpec& spec, int rows, int cols,
                         const std::vector<Matrix>& blocks);

ModuleOperator as_column(const ModuleVector& v);
ModuleVector as_vector(const ModuleOperator& column);

// Extremal eigenvalues of the Hermitian part across all flattened blocks.
struct SpectralRange {
  double min;
  double max;
};
SpectralRange hermitian_range(const ModuleOperator& t);
// Spectrum of t compressed to the range of the projection `corner`
// (per block; blocks where the corner vanishes contribute nothing).
SpectralRange corner_hermitian_range(const ModuleOperator& t,
                                     const ModuleOperator& corner);

ModuleOperator positive_power(const ModuleOperator& t, double p,
                              const Tolerance& tol = {});
// t^p computed inside the corner algebra (corner acts as the unit); the
// result vanishes on the complement.
ModuleOperator corner_positive_power(const ModuleOperator& t, double p,
                                     const ModuleOperator& corner,
                                     const Tolerance& tol = {});
// Moore-Penrose inverse of s within the corner: s must satisfy
// s = corner*s*corner and be invertible there.
ModuleOperator corner_inverse(const ModuleOperator& s,
                              const ModuleOperator& corner,
                              const Tolerance& tol = {});

// Numerical rank per flattened block (singular values above rel*sigma_max).
std::vector<int> block_ranks(const ModuleOperator& t,
                             const Tolerance& tol = {});
// Rank per block counting eigenvalues above 1/2; input must be a projection.
std::vector<int> projection_block_ranks(const ModuleOperator& p);

// Vertical stack of same-width operators (the canonical dilation).
ModuleOperator vstack(const std::vector<ModuleOperator>& parts);
// Rows [first_row, first_row + row_count) as a standalone operator.
ModuleOperator row_block(const ModuleOperator& t, int first_row,
                         int row_count);
// L_j: the embedding of A^n onto slot `index` of A^(n*count).
ModuleOperator block_embedding(const AlgebraSpec& spec, int n, int count,
                               int index);

namespace detail {
// Orthonormal basis of the range of a flattened projection block, as the
// columns of a tall matrix.
Matrix projection_range_basis(const Matrix& projection_block);
}  // namespace detail

}  // namespace csf
