#pragma once

#include "csf/frames.hpp"

namespace csf {

// The composition {C_{i,j} = B_i A_j} of an outer frame (living on the
// submodule cut out by the inner frame's codomain projection) with an inner
// frame, indexed row-major over (i, j).
struct ComposedFrame {
  OperatorFrame outer;
  OperatorFrame inner;
  OperatorFrame frame;
};

// Requires every outer element to be supported on the inner frame's codomain
// submodule and both factors (and the product family) to be frames.
ComposedFrame compose(const OperatorFrame& outer, const OperatorFrame& inner,
                      const Tolerance& tol = {});

// Recovered factor plus the defect of re-multiplying it back; the recovered
// elements are returned on the ambient module (compare entrywise).
struct CancellationResult {
  OperatorFrame frame;
  double residual;
};

// Inner factor: A_j = D_B^{-1} sum_i B_i^* C_{i,j}.
CancellationResult cancel_right(const OperatorFrame& outer,
                                const ComposedFrame& c,
                                const Tolerance& tol = {});

// Outer factor, for non-degenerate inner frames:
// B_i = (sum_j C_{i,j} A_j^*) (sum_j A_j A_j^*)^+ with the pseudo-inverse
// taken in the codomain corner.
CancellationResult cancel_left(const OperatorFrame& inner,
                               const ComposedFrame& c,
                               const Tolerance& tol = {});

// The combined vector family {A_j^* xi_i} over row-major (i, j); its
// rank-one sum equals the frame operator of the composition of
// vector_to_operator_frame(vf, eta) with f.
VectorFrame multiframe_decompose(const OperatorFrame& f, const VectorFrame& vf,
                                 const ModuleVector& eta,
                                 const Tolerance& tol = {});

// {L_j^* t} for a left-invertible t: A^(n*count) <- A^n: the generic frame
// with frame operator t^*t; Parseval exactly when t is an isometry.
OperatorFrame frame_from_transform(const AlgebraSpec& spec, int ambient_rank,
                                   int count, const ModuleOperator& t,
                                   const Tolerance& tol = {});

}  // namespace csf
