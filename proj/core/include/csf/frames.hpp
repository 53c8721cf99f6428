#pragma once

#include <optional>
#include <vector>

#include "csf/module.hpp"

namespace csf {

// A finite family {A_j} of operators on A^N whose ranges lie in the
// submodule cut out by the codomain projection E_0 (E_0 A_j = A_j).
// A frame may additionally be supported on a domain submodule
// (A_j E_dom = A_j); that form shows up as the outer factor of a
// composition. By default both projections are the identity.
class OperatorFrame {
 public:
  OperatorFrame(std::vector<ModuleOperator> elements,
                std::optional<ModuleOperator> codomain_projection = {},
                std::optional<ModuleOperator> domain_projection = {},
                const Tolerance& tol = {});

  const AlgebraSpec& spec() const { return elements_.front().spec(); }
  int ambient_rank() const { return elements_.front().rows(); }
  int size() const { return static_cast<int>(elements_.size()); }
  const ModuleOperator& element(int j) const {
    return elements_[static_cast<size_t>(j)];
  }
  const std::vector<ModuleOperator>& elements() const { return elements_; }

  const ModuleOperator& codomain_projection() const {
    return codomain_projection_;
  }
  const ModuleOperator& domain_projection() const { return domain_projection_; }
  // True when the projection was defaulted rather than supplied.
  bool codomain_is_ambient() const { return codomain_is_ambient_; }
  bool domain_is_ambient() const { return domain_is_ambient_; }

 private:
  std::vector<ModuleOperator> elements_;
  ModuleOperator codomain_projection_;
  ModuleOperator domain_projection_;
  bool codomain_is_ambient_;
  bool domain_is_ambient_;
};

// Everything `analyze` derives from a frame. `inverse` is D^{-1}, taken
// within the domain corner when the frame lives on a submodule.
struct FrameAnalysis {
  ModuleOperator frame_operator;
  ModuleOperator inverse;
  double lower_bound;
  double upper_bound;
  ModuleOperator transform;   // vertical stack of the A_j
  ModuleOperator projection;  // range projection of the transform
};

ModuleOperator frame_operator(const OperatorFrame& f);

// Computes D, the optimal bounds, the frame transform on the dilated module
// A^(N*|J|), and the frame projection; throws NotAFrame (with the offending
// smallest eigenvalue) when D is not invertible on the frame's domain.
FrameAnalysis analyze(const OperatorFrame& f, const Tolerance& tol = {});

// D equals the domain projection, cross-checked against the transform
// having projection range (the two are equivalent).
bool is_parseval(const OperatorFrame& f, const Tolerance& tol = {});

// {A_j D^{-1/2}}: the canonical Parseval frame sharing f's frame projection.
OperatorFrame parseval_normalize(const OperatorFrame& f,
                                 const Tolerance& tol = {});

// D^{-1} sum_j A_j^*(A_j xi); equals xi (up to the domain projection).
ModuleVector reconstruct(const OperatorFrame& f, const FrameAnalysis& analysis,
                         const ModuleVector& xi);

// Ranges of the A_j jointly span the codomain submodule: per-block rank of
// sum_j A_j A_j^* equals the rank of E_0.
bool is_non_degenerate(const OperatorFrame& f, const Tolerance& tol = {});

// Finite family of module vectors subject to the frame inequality
// a<xi,xi> <= sum_j <xi,xi_j><xi_j,xi> <= b<xi,xi>.
class VectorFrame {
 public:
  explicit VectorFrame(std::vector<ModuleVector> vectors);

  const AlgebraSpec& spec() const { return vectors_.front().spec(); }
  int ambient_rank() const { return vectors_.front().length(); }
  int size() const { return static_cast<int>(vectors_.size()); }
  const ModuleVector& vector(int j) const {
    return vectors_[static_cast<size_t>(j)];
  }
  const std::vector<ModuleVector>& vectors() const { return vectors_; }

 private:
  std::vector<ModuleVector> vectors_;
};

// sum_j theta_{xi_j, xi_j}.
ModuleOperator rank_one_sum(const VectorFrame& vf);

struct VectorFrameBounds {
  double lower;
  double upper;
};

// Optimal bounds = extremal eigenvalues of the flattened rank-one sum;
// NotAFrame when the smallest clears zero by less than rel * largest.
VectorFrameBounds vector_frame_bounds(const VectorFrame& vf,
                                      const Tolerance& tol = {});

// The sampled (pointwise) frame inequality at one probe vector, checked in
// the positive-element order on both sides.
bool frame_inequality_holds(const VectorFrame& vf, double lower, double upper,
                            const ModuleVector& probe,
                            const Tolerance& tol = {});

// Unit-norm probe realizing the smallest eigenvalue of the rank-one sum,
// pulled back from the flattened picture; it witnesses the failure of any
// fixed positive lower bound when the family is not a frame.
ModuleVector minimal_spectral_probe(const VectorFrame& vf);

// A_j = theta_{eta, xi_j} with E_0 = theta_{eta,eta}; requires
// <eta,eta> = I so that A_j^* A_j = theta_{xi_j, xi_j} and both frames
// share their bounds.
OperatorFrame vector_to_operator_frame(const VectorFrame& vf,
                                       const ModuleVector& eta,
                                       const Tolerance& tol = {});

// Watches the partial sums D_k = sum_{j<=k} A_j^* A_j of a streamed frame.
// Stabilization is declared once `window` consecutive increments
// ||D_k - D_{k-1}|| fall below `increment_tol`, or when the stream is
// marked finished (a finite sum is its own limit).
class StabilizationMonitor {
 public:
  StabilizationMonitor(double increment_tol, int window);

  struct Step {
    double increment;
    double min_eigenvalue;
    double max_eigenvalue;
  };

  void push(const ModuleOperator& element);
  void finish();

  const std::vector<Step>& steps() const { return steps_; }
  bool stabilized() const { return stabilized_at_ >= 0; }
  // Number of elements consumed when stabilization was declared; -1 while
  // not stabilized.
  int stabilized_at() const { return stabilized_at_; }
  const ModuleOperator& partial_frame_operator() const;

 private:
  double increment_tol_;
  int window_;
  int stabilized_at_ = -1;
  bool finished_ = false;
  std::optional<ModuleOperator> partial_sum_;
  std::vector<Step> steps_;
};

}  // namespace csf
