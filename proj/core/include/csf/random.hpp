#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "csf/frames.hpp"

namespace csf {

// Deterministic random source. The engine's output sequence is fixed by the
// standard and the uniform mapping is hand-rolled, so a seed reproduces the
// same values on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // [0, 1)
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  Complex complex_unit() {
    const double t = uniform(0.0, 6.283185307179586);
    return Complex(std::cos(t), std::sin(t));
  }
  int index(int count) {
    return static_cast<int>(engine_() % static_cast<std::uint64_t>(count));
  }

 private:
  std::mt19937_64 engine_;
};

// Entries uniform in the complex square [-1,1] x [-1,1]i.
AlgebraElement random_element(Rng& rng, const AlgebraSpec& spec);
AlgebraElement random_positive_invertible(Rng& rng, const AlgebraSpec& spec);

ModuleVector random_vector(Rng& rng, const AlgebraSpec& spec, int length);
// Unit vector with <eta,eta> = I exactly up to rounding (a random isometry
// column block).
ModuleVector random_unital_vector(Rng& rng, const AlgebraSpec& spec,
                                  int length);

ModuleOperator random_operator(Rng& rng, const AlgebraSpec& spec, int rows,
                               int cols);
ModuleOperator random_unitary(Rng& rng, const AlgebraSpec& spec, int n);
// Singular values kept inside [0.5, 2], so the condition number is <= 4.
ModuleOperator random_invertible(Rng& rng, const AlgebraSpec& spec, int n);
ModuleOperator random_isometry(Rng& rng, const AlgebraSpec& spec, int rows,
                               int cols);
ModuleOperator random_left_invertible(Rng& rng, const AlgebraSpec& spec,
                                      int rows, int cols);
// Projection with the given flattened rank per block.
ModuleOperator random_projection(Rng& rng, const AlgebraSpec& spec, int n,
                                 const std::vector<int>& block_ranks);

// `count` independent dense elements; generically a frame.
OperatorFrame random_frame(Rng& rng, const AlgebraSpec& spec, int n,
                           int count);
OperatorFrame random_parseval_frame(Rng& rng, const AlgebraSpec& spec, int n,
                                    int count);
// Elements compressed to the range of `codomain`, which becomes the frame's
// codomain projection; pick `count` large enough for the compressed sum to
// stay invertible.
OperatorFrame random_corner_frame(Rng& rng, const AlgebraSpec& spec, int n,
                                  int count, const ModuleOperator& codomain);

}  // namespace csf
