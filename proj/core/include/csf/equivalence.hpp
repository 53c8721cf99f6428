#pragma once

#include <optional>
#include <vector>

#include "csf/frames.hpp"

namespace csf {

enum class SimilarityKind { right, right_unitary, left, left_unitary };

struct SimilarityWitness {
  SimilarityKind kind;
  ModuleOperator transform;  // T with B_j = A_j T (right) or S with B_j = S A_j
  double residual;           // max_j of the defect norm above
};

// {A_j T} for invertible T; the result shares f's frame projection.
OperatorFrame right_transform(const OperatorFrame& f, const ModuleOperator& t,
                              const Tolerance& tol = {});

struct SimilarityResult {
  std::optional<SimilarityWitness> witness;  // engaged iff the frames are similar
  double projection_gap;                     // ||P_A - P_B||
};

// Right similarity is decided by comparing frame projections; on a match the
// unique witness T = D_A^{-1} theta_A^* theta_B is returned together with
// its residual, and is flagged unitary when T^*T = I to tolerance.
SimilarityResult detect_right_similarity(const OperatorFrame& f,
                                         const OperatorFrame& g,
                                         const Tolerance& tol = {});

struct MvnEquivalence {
  // V with V V^* = p and V^* V = q; engaged iff the block ranks agree.
  std::optional<ModuleOperator> partial_isometry;
  std::vector<int> ranks_p;
  std::vector<int> ranks_q;
};

// Two projections are equivalent iff their flattened ranks agree per block;
// the witness is assembled from orthonormal range bases.
MvnEquivalence mv_equivalent(const ModuleOperator& p, const ModuleOperator& q,
                             const Tolerance& tol = {});

// Realizes a projection p on the dilated module as the frame projection of a
// new frame {L_j^* V theta_A}, which keeps f's frame operator. Throws
// NotEquivalent when p's block ranks differ from those of f's projection.
OperatorFrame frame_from_projection(const OperatorFrame& f,
                                    const ModuleOperator& p,
                                    const Tolerance& tol = {});

// Parametrization of Parseval frames: {L_j^* V theta_A} for a partial
// isometry V on the dilated module with V^* V = P_A; the result is Parseval
// with frame projection V V^*.
OperatorFrame parseval_parametrize(const OperatorFrame& f,
                                   const ModuleOperator& v,
                                   const Tolerance& tol = {});

// {S A_j} for S invertible in the corner cut out by f's codomain projection;
// the frame operator moves inside the sandwich
// ||S^{-1}||^{-2} D_A <= D_B <= ||S||^2 D_A.
OperatorFrame left_transform(const OperatorFrame& f, const ModuleOperator& s,
                             const Tolerance& tol = {});

struct CommutationCheck {
  bool commutes;          // s commutes with every A_j D^{-1} A_i^*
  double max_commutator;  // largest commutator norm over (i, j)
  // Set when commutes: U = D^{-1/2} (sum_i A_i^* s A_i) D^{-1/2}, its
  // distance from unitarity, and the right witness D^{-1/2} U D^{1/2}
  // reproducing {s A_j}.
  std::optional<ModuleOperator> unitary;
  double unitary_gap;
  std::optional<SimilarityWitness> right_witness;
};

// For corner-unitary s, {s A_j} is right-unitarily equivalent to {A_j}
// exactly when s commutes with all A_j D^{-1} A_i^*; on success the witness
// is constructed explicitly.
CommutationCheck corner_commutation_check(const OperatorFrame& f,
                                          const ModuleOperator& s,
                                          const Tolerance& tol = {});

}  // namespace csf
