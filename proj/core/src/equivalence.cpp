#include "csf/equivalence.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace csf {

namespace {

struct SingularRange {
  double min;
  double max;
};

SingularRange singular_range(const ModuleOperator& t) {
  SingularRange r{std::numeric_limits<double>::infinity(), 0.0};
  for (const auto& b : flatten(t)) {
    Eigen::JacobiSVD<Matrix> svd(b);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) continue;
    r.min = std::min(r.min, sv(sv.size() - 1));
    r.max = std::max(r.max, sv(0));
  }
  return r;
}

void check_invertible(const ModuleOperator& t, const Tolerance& tol) {
  const SingularRange r = singular_range(t);
  if (!(r.min > tol.rel * r.max)) {
    throw Error(ErrorCode::NotInvertible,
                "smallest singular value " + std::to_string(r.min) +
                    " is below the invertibility threshold",
                r.min);
  }
}

void check_transform_shape(const OperatorFrame& f, const ModuleOperator& t) {
  if (!(t.spec() == f.spec())) {
    throw Error(ErrorCode::SpecMismatch,
                "transform lives over a different algebra");
  }
  if (t.rows() != f.ambient_rank() || t.cols() != f.ambient_rank()) {
    throw Error(ErrorCode::DimensionMismatch,
                "transform must act on the frame's module");
  }
}

std::optional<ModuleOperator> codomain_opt(const OperatorFrame& f) {
  if (f.codomain_is_ambient()) return {};
  return f.codomain_projection();
}

std::optional<ModuleOperator> domain_opt(const OperatorFrame& f) {
  if (f.domain_is_ambient()) return {};
  return f.domain_projection();
}

void require_ambient_domain(const OperatorFrame& f, const char* what) {
  if (!f.domain_is_ambient()) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(what) + " expects a frame on the full module");
  }
}

std::string rank_list(const std::vector<int>& ranks) {
  std::string out = "[";
  for (size_t k = 0; k < ranks.size(); ++k) {
    if (k > 0) out += ",";
    out += std::to_string(ranks[k]);
  }
  return out + "]";
}

// B_j = L_j^* (v theta); the rows of v*theta sliced per index.
std::vector<ModuleOperator> sliced_elements(const ModuleOperator& v_theta,
                                            int ambient_rank, int count) {
  std::vector<ModuleOperator> elements;
  elements.reserve(static_cast<size_t>(count));
  for (int j = 0; j < count; ++j) {
    elements.push_back(row_block(v_theta, j * ambient_rank, ambient_rank));
  }
  return elements;
}

}  // namespace

OperatorFrame right_transform(const OperatorFrame& f, const ModuleOperator& t,
                              const Tolerance& tol) {
  check_transform_shape(f, t);
  if (f.domain_is_ambient()) {
    check_invertible(t, tol);
  } else {
    const ModuleOperator& e = f.domain_projection();
    if (norm(e * t * e - t) > tol.unit_threshold(norm(t))) {
      throw Error(ErrorCode::NotInCorner,
                  "transform does not live in the domain corner");
    }
    corner_inverse(t, e, tol);
  }
  std::vector<ModuleOperator> elements;
  elements.reserve(static_cast<size_t>(f.size()));
  for (int j = 0; j < f.size(); ++j) {
    elements.push_back(f.element(j) * t);
  }
  return OperatorFrame(std::move(elements), codomain_opt(f), domain_opt(f),
                       tol);
}

SimilarityResult detect_right_similarity(const OperatorFrame& f,
                                         const OperatorFrame& g,
                                         const Tolerance& tol) {
  if (!(f.spec() == g.spec())) {
    throw Error(ErrorCode::SpecMismatch,
                "frames live over different algebras");
  }
  if (f.ambient_rank() != g.ambient_rank()) {
    throw Error(ErrorCode::DimensionMismatch,
                "frames act on modules of different rank");
  }
  if (f.size() != g.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "frames must share their index set");
  }
  if (norm(f.codomain_projection() - g.codomain_projection()) >
      tol.unit_threshold(1.0)) {
    throw Error(ErrorCode::IncompatibleRanges,
                "codomain projections differ");
  }
  if (norm(f.domain_projection() - g.domain_projection()) >
      tol.unit_threshold(1.0)) {
    throw Error(ErrorCode::IncompatibleRanges, "domain projections differ");
  }

  const FrameAnalysis fa = analyze(f, tol);
  const FrameAnalysis ga = analyze(g, tol);
  const double gap = norm(fa.projection - ga.projection);
  if (gap > tol.unit_threshold(1.0)) {
    return SimilarityResult{{}, gap};
  }

  const ModuleOperator t = fa.inverse * adjoint(fa.transform) * ga.transform;
  if (f.domain_is_ambient()) {
    check_invertible(t, tol);
  } else {
    corner_inverse(t, f.domain_projection(), tol);
  }
  double residual = 0.0;
  for (int j = 0; j < f.size(); ++j) {
    residual = std::max(residual, norm(g.element(j) - f.element(j) * t));
  }
  const bool unitary =
      norm(adjoint(t) * t - f.domain_projection()) <= tol.unit_threshold(1.0);
  return SimilarityResult{
      SimilarityWitness{unitary ? SimilarityKind::right_unitary
                                : SimilarityKind::right,
                        t, residual},
      gap};
}

MvnEquivalence mv_equivalent(const ModuleOperator& p, const ModuleOperator& q,
                             const Tolerance& tol) {
  if (!(p.spec() == q.spec())) {
    throw Error(ErrorCode::SpecMismatch,
                "projections live over different algebras");
  }
  if (p.rows() != p.cols() || q.rows() != q.cols() || p.rows() != q.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "projections must be square and of equal size");
  }
  if (!is_projection(p, tol)) {
    throw Error(ErrorCode::NotProjection, "first argument");
  }
  if (!is_projection(q, tol)) {
    throw Error(ErrorCode::NotProjection, "second argument");
  }
  MvnEquivalence out;
  out.ranks_p = projection_block_ranks(p);
  out.ranks_q = projection_block_ranks(q);
  if (out.ranks_p != out.ranks_q) return out;

  const std::vector<Matrix> pb = flatten(p);
  const std::vector<Matrix> qb = flatten(q);
  std::vector<Matrix> vb;
  vb.reserve(pb.size());
  for (size_t k = 0; k < pb.size(); ++k) {
    const Matrix up = detail::projection_range_basis(pb[k]);
    const Matrix uq = detail::projection_range_basis(qb[k]);
    vb.push_back(up * uq.adjoint());
  }
  out.partial_isometry = unflatten(p.spec(), p.rows(), p.cols(), vb);
  return out;
}

OperatorFrame frame_from_projection(const OperatorFrame& f,
                                    const ModuleOperator& p,
                                    const Tolerance& tol) {
  require_ambient_domain(f, "frame_from_projection");
  const FrameAnalysis fa = analyze(f, tol);
  const MvnEquivalence eq = mv_equivalent(p, fa.projection, tol);
  if (!eq.partial_isometry.has_value()) {
    throw Error(ErrorCode::NotEquivalent,
                "projection block ranks " + rank_list(eq.ranks_p) +
                    " do not match the frame projection's " +
                    rank_list(eq.ranks_q));
  }
  const ModuleOperator v_theta = *eq.partial_isometry * fa.transform;
  return OperatorFrame(sliced_elements(v_theta, f.ambient_rank(), f.size()),
                       {}, {}, tol);
}

OperatorFrame parseval_parametrize(const OperatorFrame& f,
                                   const ModuleOperator& v,
                                   const Tolerance& tol) {
  require_ambient_domain(f, "parseval_parametrize");
  if (!is_parseval(f, tol)) {
    throw Error(ErrorCode::NotParseval, "input frame is not Parseval");
  }
  const FrameAnalysis fa = analyze(f, tol);
  if (!(v.spec() == f.spec()) || v.rows() != fa.projection.rows() ||
      v.cols() != fa.projection.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "partial isometry must act on the dilated module");
  }
  const double gap = norm(adjoint(v) * v - fa.projection);
  if (gap > tol.unit_threshold(1.0)) {
    throw Error(ErrorCode::NotCompatiblePartialIsometry,
                "V^*V differs from the frame projection", gap);
  }
  const ModuleOperator v_theta = v * fa.transform;
  return OperatorFrame(sliced_elements(v_theta, f.ambient_rank(), f.size()),
                       {}, {}, tol);
}

OperatorFrame left_transform(const OperatorFrame& f, const ModuleOperator& s,
                             const Tolerance& tol) {
  check_transform_shape(f, s);
  const ModuleOperator& corner = f.codomain_projection();
  if (norm(corner * s * corner - s) > tol.unit_threshold(norm(s))) {
    throw Error(ErrorCode::NotInCorner,
                "transform does not live in the codomain corner");
  }
  const ModuleOperator s_inv = corner_inverse(s, corner, tol);

  std::vector<ModuleOperator> elements;
  elements.reserve(static_cast<size_t>(f.size()));
  for (int j = 0; j < f.size(); ++j) {
    elements.push_back(s * f.element(j));
  }
  OperatorFrame out(std::move(elements), codomain_opt(f), domain_opt(f), tol);

  const ModuleOperator da = frame_operator(f);
  const ModuleOperator db = frame_operator(out);
  const double lo = 1.0 / (norm(s_inv) * norm(s_inv));
  const double hi = norm(s) * norm(s);
  if (!is_positive(db - da * Complex(lo, 0.0), tol) ||
      !is_positive(da * Complex(hi, 0.0) - db, tol)) {
    throw Error(ErrorCode::NotPositive,
                "transformed frame operator escapes the sandwich bounds");
  }
  return out;
}

CommutationCheck corner_commutation_check(const OperatorFrame& f,
                                          const ModuleOperator& s,
                                          const Tolerance& tol) {
  require_ambient_domain(f, "corner_commutation_check");
  check_transform_shape(f, s);
  const ModuleOperator& corner = f.codomain_projection();
  if (norm(corner * s * corner - s) > tol.unit_threshold(norm(s)) ||
      norm(adjoint(s) * s - corner) > tol.unit_threshold(1.0) ||
      norm(s * adjoint(s) - corner) > tol.unit_threshold(1.0)) {
    throw Error(ErrorCode::NotCornerUnitary,
                "transform is not unitary in the codomain corner");
  }

  const FrameAnalysis fa = analyze(f, tol);
  std::vector<ModuleOperator> inv_adj;
  inv_adj.reserve(static_cast<size_t>(f.size()));
  for (int i = 0; i < f.size(); ++i) {
    inv_adj.push_back(fa.inverse * adjoint(f.element(i)));
  }
  double max_comm = 0.0;
  double max_m = 0.0;
  for (int j = 0; j < f.size(); ++j) {
    for (int i = 0; i < f.size(); ++i) {
      const ModuleOperator m = f.element(j) * inv_adj[static_cast<size_t>(i)];
      max_m = std::max(max_m, norm(m));
      max_comm = std::max(max_comm, norm(s * m - m * s));
    }
  }

  CommutationCheck out;
  out.max_commutator = max_comm;
  out.commutes = max_comm <= tol.unit_threshold(max_m);
  out.unitary_gap = std::numeric_limits<double>::quiet_NaN();
  if (!out.commutes) return out;

  ModuleOperator k =
      ModuleOperator::zero(f.spec(), f.ambient_rank(), f.ambient_rank());
  for (int i = 0; i < f.size(); ++i) {
    k = k + adjoint(f.element(i)) * s * f.element(i);
  }
  const ModuleOperator root = positive_power(fa.frame_operator, 0.5, tol);
  const ModuleOperator root_inv = positive_power(fa.frame_operator, -0.5, tol);
  const ModuleOperator u = root_inv * k * root_inv;
  const ModuleOperator id =
      ModuleOperator::identity(f.spec(), f.ambient_rank());
  out.unitary_gap = std::max(norm(adjoint(u) * u - id),
                             norm(u * adjoint(u) - id));
  out.unitary = u;

  const ModuleOperator w = root_inv * u * root;
  double residual = 0.0;
  for (int j = 0; j < f.size(); ++j) {
    residual = std::max(residual, norm(s * f.element(j) - f.element(j) * w));
  }
  const bool w_unitary =
      norm(adjoint(w) * w - id) <= tol.unit_threshold(1.0);
  out.right_witness =
      SimilarityWitness{w_unitary ? SimilarityKind::right_unitary
                                  : SimilarityKind::right,
                        w, residual};
  return out;
}

}  // namespace csf
