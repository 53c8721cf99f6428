#include "csf/composition.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <string>
#include <utility>

namespace csf {

namespace {

std::optional<ModuleOperator> codomain_opt(const OperatorFrame& f) {
  if (f.codomain_is_ambient()) return {};
  return f.codomain_projection();
}

std::optional<ModuleOperator> domain_opt(const OperatorFrame& f) {
  if (f.domain_is_ambient()) return {};
  return f.domain_projection();
}

void check_consistent_indexing(const OperatorFrame& factor,
                               const OperatorFrame& stored,
                               const ComposedFrame& c, const char* which) {
  if (!(factor.spec() == c.frame.spec()) ||
      factor.ambient_rank() != c.frame.ambient_rank() ||
      factor.size() != stored.size()) {
    throw Error(ErrorCode::InconsistentIndexing,
                std::string("supplied ") + which +
                    " factor does not index the composition");
  }
}

}  // namespace

ComposedFrame compose(const OperatorFrame& outer, const OperatorFrame& inner,
                      const Tolerance& tol) {
  if (!(outer.spec() == inner.spec())) {
    throw Error(ErrorCode::SpecMismatch,
                "factors live over different algebras");
  }
  if (outer.ambient_rank() != inner.ambient_rank()) {
    throw Error(ErrorCode::DimensionMismatch,
                "factors act on modules of different rank");
  }
  const ModuleOperator& e0 = inner.codomain_projection();
  for (int i = 0; i < outer.size(); ++i) {
    const ModuleOperator& b = outer.element(i);
    if (norm(b * e0 - b) > tol.unit_threshold(norm(b))) {
      throw Error(ErrorCode::IncompatibleRanges,
                  "outer element " + std::to_string(i) +
                      " is not supported on the inner frame's codomain");
    }
  }
  // The outer factor is analyzed as a frame on the inner frame's codomain
  // submodule.
  OperatorFrame outer_on_corner(outer.elements(), codomain_opt(outer),
                                inner.codomain_is_ambient()
                                    ? std::optional<ModuleOperator>{}
                                    : std::optional<ModuleOperator>{e0},
                                tol);
  analyze(outer_on_corner, tol);
  analyze(inner, tol);

  std::vector<ModuleOperator> elements;
  elements.reserve(static_cast<size_t>(outer.size()) *
                   static_cast<size_t>(inner.size()));
  for (int i = 0; i < outer.size(); ++i) {
    for (int j = 0; j < inner.size(); ++j) {
      elements.push_back(outer.element(i) * inner.element(j));
    }
  }
  OperatorFrame combined(std::move(elements), codomain_opt(outer),
                         domain_opt(inner), tol);
  analyze(combined, tol);
  return ComposedFrame{std::move(outer_on_corner), inner,
                       std::move(combined)};
}

CancellationResult cancel_right(const OperatorFrame& outer,
                                const ComposedFrame& c, const Tolerance& tol) {
  check_consistent_indexing(outer, c.outer, c, "outer");
  const FrameAnalysis ba = analyze(outer, tol);
  const int j_count = c.inner.size();
  const int n = c.frame.ambient_rank();

  std::vector<ModuleOperator> recovered;
  recovered.reserve(static_cast<size_t>(j_count));
  for (int j = 0; j < j_count; ++j) {
    ModuleOperator acc = ModuleOperator::zero(c.frame.spec(), n, n);
    for (int i = 0; i < outer.size(); ++i) {
      acc = acc + adjoint(outer.element(i)) *
                      c.frame.element(i * j_count + j);
    }
    recovered.push_back(ba.inverse * acc);
  }

  double residual = 0.0;
  for (int i = 0; i < outer.size(); ++i) {
    for (int j = 0; j < j_count; ++j) {
      residual = std::max(
          residual, norm(c.frame.element(i * j_count + j) -
                         outer.element(i) *
                             recovered[static_cast<size_t>(j)]));
    }
  }
  return CancellationResult{OperatorFrame(std::move(recovered), {}, {}, tol),
                            residual};
}

CancellationResult cancel_left(const OperatorFrame& inner,
                               const ComposedFrame& c, const Tolerance& tol) {
  check_consistent_indexing(inner, c.inner, c, "inner");
  if (!is_non_degenerate(inner, tol)) {
    throw Error(ErrorCode::DegenerateInnerFrame,
                "inner frame ranges do not span its codomain submodule");
  }
  const int n = c.frame.ambient_rank();
  ModuleOperator g = ModuleOperator::zero(inner.spec(), n, n);
  for (int j = 0; j < inner.size(); ++j) {
    g = g + inner.element(j) * adjoint(inner.element(j));
  }
  const ModuleOperator g_pinv =
      corner_inverse(g, inner.codomain_projection(), tol);

  const int i_count = c.outer.size();
  std::vector<ModuleOperator> recovered;
  recovered.reserve(static_cast<size_t>(i_count));
  for (int i = 0; i < i_count; ++i) {
    ModuleOperator acc = ModuleOperator::zero(c.frame.spec(), n, n);
    for (int j = 0; j < inner.size(); ++j) {
      acc = acc + c.frame.element(i * inner.size() + j) *
                      adjoint(inner.element(j));
    }
    recovered.push_back(acc * g_pinv);
  }

  double residual = 0.0;
  for (int i = 0; i < i_count; ++i) {
    for (int j = 0; j < inner.size(); ++j) {
      residual = std::max(
          residual, norm(c.frame.element(i * inner.size() + j) -
                         recovered[static_cast<size_t>(i)] *
                             inner.element(j)));
    }
  }
  return CancellationResult{OperatorFrame(std::move(recovered), {}, {}, tol),
                            residual};
}

VectorFrame multiframe_decompose(const OperatorFrame& f, const VectorFrame& vf,
                                 const ModuleVector& eta,
                                 const Tolerance& tol) {
  if (!(vf.spec() == f.spec()) || vf.ambient_rank() != f.ambient_rank()) {
    throw Error(ErrorCode::DimensionMismatch,
                "vector family does not live in the frame's module");
  }
  const AlgebraElement gram = inner(eta, eta);
  const double gap = norm(gram - AlgebraElement::identity(f.spec()));
  if (eta.length() != f.ambient_rank() || !(eta.spec() == f.spec()) ||
      gap > tol.unit_threshold(1.0)) {
    throw Error(ErrorCode::NotUnitalVector,
                "pivot vector has <eta,eta> != I", gap);
  }
  const ModuleOperator& e0 = f.codomain_projection();
  for (int i = 0; i < vf.size(); ++i) {
    const ModuleVector& xi = vf.vector(i);
    if (norm(apply(e0, xi) - xi) > tol.unit_threshold(norm(xi))) {
      throw Error(ErrorCode::IncompatibleRanges,
                  "family vector " + std::to_string(i) +
                      " is not supported on the frame's codomain");
    }
  }

  std::vector<ModuleVector> combined;
  combined.reserve(static_cast<size_t>(vf.size()) *
                   static_cast<size_t>(f.size()));
  for (int i = 0; i < vf.size(); ++i) {
    for (int j = 0; j < f.size(); ++j) {
      combined.push_back(apply(adjoint(f.element(j)), vf.vector(i)));
    }
  }
  VectorFrame result(std::move(combined));
  vector_frame_bounds(result, tol);
  return result;
}

OperatorFrame frame_from_transform(const AlgebraSpec& spec, int ambient_rank,
                                   int count, const ModuleOperator& t,
                                   const Tolerance& tol) {
  if (ambient_rank < 1 || count < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "module rank and element count must be >= 1");
  }
  if (!(t.spec() == spec)) {
    throw Error(ErrorCode::SpecMismatch,
                "transform lives over a different algebra");
  }
  if (t.rows() != ambient_rank * count || t.cols() != ambient_rank) {
    throw Error(ErrorCode::DimensionMismatch,
                "transform must map A^" + std::to_string(ambient_rank) +
                    " into A^" +
                    std::to_string(ambient_rank * count));
  }
  double sigma_min = std::numeric_limits<double>::infinity();
  double sigma_max = 0.0;
  for (const auto& b : flatten(t)) {
    Eigen::JacobiSVD<Matrix> svd(b);
    const auto& sv = svd.singularValues();
    sigma_min = std::min(sigma_min, sv(sv.size() - 1));
    sigma_max = std::max(sigma_max, sv(0));
  }
  if (!(sigma_min > tol.rel * sigma_max)) {
    throw Error(ErrorCode::NotLeftInvertible,
                "smallest singular value " + std::to_string(sigma_min) +
                    " is below the left-invertibility threshold",
                sigma_min);
  }
  std::vector<ModuleOperator> elements;
  elements.reserve(static_cast<size_t>(count));
  for (int j = 0; j < count; ++j) {
    elements.push_back(row_block(t, j * ambient_rank, ambient_rank));
  }
  return OperatorFrame(std::move(elements), {}, {}, tol);
}

}  // namespace csf
