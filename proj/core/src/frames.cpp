#include "csf/frames.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace csf {

namespace {

ModuleOperator checked_projection(ModuleOperator p, int n, const char* what,
                                  const Tolerance& tol) {
  if (p.rows() != n || p.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " must be " + std::to_string(n) + "x" +
                    std::to_string(n));
  }
  if (!is_projection(p, tol)) {
    throw Error(ErrorCode::NotProjection,
                std::string(what) + " is not a projection");
  }
  return p;
}

}  // namespace

OperatorFrame::OperatorFrame(std::vector<ModuleOperator> elements,
                             std::optional<ModuleOperator> codomain_projection,
                             std::optional<ModuleOperator> domain_projection,
                             const Tolerance& tol)
    : elements_(std::move(elements)),
      codomain_projection_(
          elements_.empty()
              ? throw Error(ErrorCode::NotAFrame, "empty frame family")
              : (codomain_projection.has_value()
                     ? checked_projection(std::move(*codomain_projection),
                                          elements_.front().rows(),
                                          "codomain projection", tol)
                     : ModuleOperator::identity(elements_.front().spec(),
                                                elements_.front().rows()))),
      domain_projection_(
          domain_projection.has_value()
              ? checked_projection(std::move(*domain_projection),
                                   elements_.front().rows(),
                                   "domain projection", tol)
              : ModuleOperator::identity(elements_.front().spec(),
                                         elements_.front().rows())),
      codomain_is_ambient_(!codomain_projection.has_value()),
      domain_is_ambient_(!domain_projection.has_value()) {
  const int n = elements_.front().rows();
  for (size_t j = 0; j < elements_.size(); ++j) {
    const ModuleOperator& a = elements_[j];
    if (!(a.spec() == elements_.front().spec())) {
      throw Error(ErrorCode::SpecMismatch,
                  "frame elements live over different algebras");
    }
    if (a.rows() != n || a.cols() != n) {
      throw Error(ErrorCode::DimensionMismatch,
                  "frame elements must all be " + std::to_string(n) + "x" +
                      std::to_string(n));
    }
    if (!codomain_is_ambient_ &&
        norm(codomain_projection_ * a - a) > tol.unit_threshold(norm(a))) {
      throw Error(ErrorCode::IncompatibleRanges,
                  "element " + std::to_string(j) +
                      " does not map into the codomain submodule");
    }
    if (!domain_is_ambient_ &&
        norm(a * domain_projection_ - a) > tol.unit_threshold(norm(a))) {
      throw Error(ErrorCode::IncompatibleRanges,
                  "element " + std::to_string(j) +
                      " is not supported on the domain submodule");
    }
  }
}

ModuleOperator frame_operator(const OperatorFrame& f) {
  ModuleOperator d =
      ModuleOperator::zero(f.spec(), f.ambient_rank(), f.ambient_rank());
  for (int j = 0; j < f.size(); ++j) {
    d = d + adjoint(f.element(j)) * f.element(j);
  }
  return d;
}

FrameAnalysis analyze(const OperatorFrame& f, const Tolerance& tol) {
  const ModuleOperator d = frame_operator(f);
  const SpectralRange range =
      f.domain_is_ambient()
          ? hermitian_range(d)
          : corner_hermitian_range(d, f.domain_projection());
  if (!(range.min > tol.rel * range.max)) {
    throw Error(ErrorCode::NotAFrame,
                "frame operator is not invertible: smallest eigenvalue " +
                    std::to_string(range.min),
                range.min);
  }

  const ModuleOperator inverse =
      f.domain_is_ambient()
          ? positive_power(d, -1.0, tol)
          : corner_positive_power(d, -1.0, f.domain_projection(), tol);
  const ModuleOperator transform = vstack(f.elements());
  const ModuleOperator projection = transform * inverse * adjoint(transform);

  const double gram_gap = norm(adjoint(transform) * transform - d);
  if (gram_gap > tol.threshold(norm(d))) {
    throw Error(ErrorCode::NotAFrame,
                "transform gram does not reproduce the frame operator",
                gram_gap);
  }
  if (!is_projection(projection, tol)) {
    throw Error(ErrorCode::NotAFrame,
                "derived frame projection failed the projection test");
  }
  const ModuleOperator root_inverse =
      f.domain_is_ambient()
          ? positive_power(d, -0.5, tol)
          : corner_positive_power(d, -0.5, f.domain_projection(), tol);
  const ModuleOperator isometry = transform * root_inverse;
  const double isometry_gap =
      norm(adjoint(isometry) * isometry - f.domain_projection());
  if (isometry_gap > tol.unit_threshold(1.0)) {
    throw Error(ErrorCode::NotAFrame,
                "normalized transform is not an isometry", isometry_gap);
  }

  return FrameAnalysis{d,         inverse,    range.min,
                       range.max, transform, projection};
}

bool is_parseval(const OperatorFrame& f, const Tolerance& tol) {
  const ModuleOperator d = frame_operator(f);
  if (norm(d - f.domain_projection()) > tol.unit_threshold(1.0)) return false;
  const ModuleOperator transform = vstack(f.elements());
  return is_projection(transform * adjoint(transform), tol);
}

OperatorFrame parseval_normalize(const OperatorFrame& f, const Tolerance& tol) {
  const ModuleOperator d = frame_operator(f);
  const SpectralRange range =
      f.domain_is_ambient()
          ? hermitian_range(d)
          : corner_hermitian_range(d, f.domain_projection());
  if (!(range.min > tol.rel * range.max)) {
    throw Error(ErrorCode::NotAFrame,
                "frame operator is not invertible: smallest eigenvalue " +
                    std::to_string(range.min),
                range.min);
  }
  const ModuleOperator root_inverse =
      f.domain_is_ambient()
          ? positive_power(d, -0.5, tol)
          : corner_positive_power(d, -0.5, f.domain_projection(), tol);
  std::vector<ModuleOperator> elements;
  elements.reserve(static_cast<size_t>(f.size()));
  for (int j = 0; j < f.size(); ++j) {
    elements.push_back(f.element(j) * root_inverse);
  }
  std::optional<ModuleOperator> codomain;
  if (!f.codomain_is_ambient()) codomain = f.codomain_projection();
  std::optional<ModuleOperator> domain;
  if (!f.domain_is_ambient()) domain = f.domain_projection();
  return OperatorFrame(std::move(elements), std::move(codomain),
                       std::move(domain), tol);
}

ModuleVector reconstruct(const OperatorFrame& f, const FrameAnalysis& analysis,
                         const ModuleVector& xi) {
  ModuleVector acc = ModuleVector::zero(f.spec(), f.ambient_rank());
  for (int j = 0; j < f.size(); ++j) {
    acc = acc + apply(adjoint(f.element(j)), apply(f.element(j), xi));
  }
  return apply(analysis.inverse, acc);
}

bool is_non_degenerate(const OperatorFrame& f, const Tolerance& tol) {
  ModuleOperator g =
      ModuleOperator::zero(f.spec(), f.ambient_rank(), f.ambient_rank());
  for (int j = 0; j < f.size(); ++j) {
    g = g + f.element(j) * adjoint(f.element(j));
  }
  return block_ranks(g, tol) == projection_block_ranks(f.codomain_projection());
}

VectorFrame::VectorFrame(std::vector<ModuleVector> vectors)
    : vectors_(std::move(vectors)) {
  if (vectors_.empty()) {
    throw Error(ErrorCode::NotAFrame, "empty vector family");
  }
  for (const auto& v : vectors_) {
    if (!(v.spec() == vectors_.front().spec())) {
      throw Error(ErrorCode::SpecMismatch,
                  "family vectors live over different algebras");
    }
    if (v.length() != vectors_.front().length()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "family vectors must share their length");
    }
  }
}

ModuleOperator rank_one_sum(const VectorFrame& vf) {
  ModuleOperator s =
      ModuleOperator::zero(vf.spec(), vf.ambient_rank(), vf.ambient_rank());
  for (int j = 0; j < vf.size(); ++j) {
    s = s + rank_one(vf.vector(j), vf.vector(j));
  }
  return s;
}

VectorFrameBounds vector_frame_bounds(const VectorFrame& vf,
                                      const Tolerance& tol) {
  const SpectralRange range = hermitian_range(rank_one_sum(vf));
  if (!(range.min > tol.rel * range.max)) {
    throw Error(ErrorCode::NotAFrame,
                "rank-one sum is not invertible: smallest eigenvalue " +
                    std::to_string(range.min),
                range.min);
  }
  return VectorFrameBounds{range.min, range.max};
}

bool frame_inequality_holds(const VectorFrame& vf, double lower, double upper,
                            const ModuleVector& probe, const Tolerance& tol) {
  const AlgebraElement gram = inner(probe, probe);
  AlgebraElement mid = AlgebraElement::zero(vf.spec());
  for (int j = 0; j < vf.size(); ++j) {
    const AlgebraElement t = inner(vf.vector(j), probe);
    mid = mid + adjoint(t) * t;
  }
  return is_positive(mid - gram * Complex(lower, 0.0), tol) &&
         is_positive(gram * Complex(upper, 0.0) - mid, tol);
}

ModuleVector minimal_spectral_probe(const VectorFrame& vf) {
  const std::vector<Matrix> blocks = flatten(rank_one_sum(vf));
  int best_block = 0;
  double best_value = std::numeric_limits<double>::infinity();
  Eigen::VectorXcd best_vector;
  for (size_t k = 0; k < blocks.size(); ++k) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(
        detail::hermitian_part(blocks[k]));
    if (es.eigenvalues()(0) < best_value) {
      best_value = es.eigenvalues()(0);
      best_block = static_cast<int>(k);
      best_vector = es.eigenvectors().col(0);
    }
  }
  const int n = vf.spec().block_dim(best_block);
  ModuleVector probe = ModuleVector::zero(vf.spec(), vf.ambient_rank());
  for (int i = 0; i < vf.ambient_rank(); ++i) {
    probe.entry(i).block(best_block).col(0) = best_vector.segment(i * n, n);
  }
  return probe;
}

OperatorFrame vector_to_operator_frame(const VectorFrame& vf,
                                       const ModuleVector& eta,
                                       const Tolerance& tol) {
  if (eta.length() != vf.ambient_rank() || !(eta.spec() == vf.spec())) {
    throw Error(ErrorCode::DimensionMismatch,
                "pivot vector does not live in the family's module");
  }
  const AlgebraElement gram = inner(eta, eta);
  const double gap = norm(gram - AlgebraElement::identity(vf.spec()));
  if (gap > tol.unit_threshold(1.0)) {
    throw Error(ErrorCode::NotUnitalVector,
                "pivot vector has <eta,eta> != I", gap);
  }
  std::vector<ModuleOperator> elements;
  elements.reserve(static_cast<size_t>(vf.size()));
  for (int j = 0; j < vf.size(); ++j) {
    elements.push_back(rank_one(eta, vf.vector(j)));
  }
  return OperatorFrame(std::move(elements), rank_one(eta, eta), {}, tol);
}

StabilizationMonitor::StabilizationMonitor(double increment_tol, int window)
    : increment_tol_(increment_tol), window_(window) {
  if (!(increment_tol > 0.0) || window < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "monitor needs a positive tolerance and window >= 1");
  }
}

void StabilizationMonitor::push(const ModuleOperator& element) {
  if (finished_) {
    throw Error(ErrorCode::InvalidArgument, "stream already finished");
  }
  if (element.rows() != element.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "streamed elements must be square");
  }
  const ModuleOperator term = adjoint(element) * element;
  partial_sum_ = partial_sum_.has_value() ? *partial_sum_ + term : term;
  const SpectralRange range = hermitian_range(*partial_sum_);
  steps_.push_back(Step{norm(term), range.min, range.max});

  if (stabilized_at_ < 0 &&
      static_cast<int>(steps_.size()) >= window_) {
    bool quiet = true;
    for (size_t i = steps_.size() - static_cast<size_t>(window_);
         i < steps_.size(); ++i) {
      quiet = quiet && steps_[i].increment < increment_tol_;
    }
    if (quiet) stabilized_at_ = static_cast<int>(steps_.size());
  }
}

void StabilizationMonitor::finish() {
  finished_ = true;
  if (stabilized_at_ < 0) stabilized_at_ = static_cast<int>(steps_.size());
}

const ModuleOperator& StabilizationMonitor::partial_frame_operator() const {
  if (!partial_sum_.has_value()) {
    throw Error(ErrorCode::InvalidArgument, "no elements consumed yet");
  }
  return *partial_sum_;
}

}  // namespace csf
