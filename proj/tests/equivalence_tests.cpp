#include "test_support.hpp"

using namespace csf;
using namespace ts;

namespace {

double condition_number(const ModuleOperator& t) {
  double sigma_max = 0.0;
  double sigma_min = std::numeric_limits<double>::infinity();
  for (const Matrix& m : flatten(t)) {
    Eigen::JacobiSVD<Matrix> svd(m);
    sigma_max = std::max(sigma_max, svd.singularValues().maxCoeff());
    sigma_min = std::min(sigma_min, svd.singularValues().minCoeff());
  }
  return sigma_max / sigma_min;
}

}  // namespace

TEST_SUITE("right transforms") {

TEST_CASE("identity transform returns the same elements") {
  Rng rng(131);
  const OperatorFrame f = random_frame(rng, m2_spec(), 2, 3);
  const OperatorFrame g =
      right_transform(f, ModuleOperator::identity(m2_spec(), 2));
  for (int j = 0; j < f.size(); ++j) {
    CHECK(rel_gap(g.element(j), f.element(j)) == 0.0);
  }
}

TEST_CASE("transforming by the inverse root gives a parseval frame") {
  Rng rng(132);
  const OperatorFrame f = random_frame(rng, wide_spec(), 2, 3);
  const FrameAnalysis a = analyze(f);
  const OperatorFrame g =
      right_transform(f, positive_power(a.frame_operator, -0.5));
  CHECK(is_parseval(g));
}

TEST_CASE("transform moves the frame data as predicted") {
  Rng rng(133);
  for (int trial = 0; trial < 40; ++trial) {
    const AlgebraSpec spec = trial % 2 == 0 ? m2_spec() : sum_spec();
    const OperatorFrame f = random_frame(rng, spec, 2, 3);
    const ModuleOperator t = random_invertible(rng, spec, 2);
    const OperatorFrame g = right_transform(f, t);
    const FrameAnalysis fa = analyze(f);
    const FrameAnalysis ga = analyze(g);
    const double scale = std::max(1.0, norm(ga.frame_operator));
    CHECK(norm(ga.transform - fa.transform * t) <= 1e-10 * scale);
    CHECK(norm(ga.frame_operator - adjoint(t) * fa.frame_operator * t) <=
          1e-9 * scale);
    CHECK(norm(ga.projection - fa.projection) <= 1e-8);
  }
}

TEST_CASE("singular transforms are rejected") {
  Rng rng(134);
  const OperatorFrame f = random_frame(rng, m2_spec(), 2, 3);
  const auto e1 = ModuleVector::unit_basis(m2_spec(), 2, 0);
  CHECK_THROWS_WITH_AS(right_transform(f, rank_one(e1, e1)),
                       doctest::Contains("NotInvertible"), Error);
}

}  // TEST_SUITE

TEST_SUITE("right similarity detection") {

TEST_CASE("a frame is similar to itself with witness I") {
  Rng rng(141);
  const OperatorFrame f = random_frame(rng, sum_spec(), 2, 3);
  const SimilarityResult r = detect_right_similarity(f, f);
  REQUIRE(r.witness.has_value());
  CHECK(rel_gap(r.witness->transform,
                ModuleOperator::identity(sum_spec(), 2)) <= 1e-9);
  CHECK(r.witness->residual <= 1e-9);
  CHECK(r.projection_gap <= 1e-12);
}

TEST_CASE("round trip recovers the transform within condition headroom") {
  Rng rng(142);
  for (int trial = 0; trial < 50; ++trial) {
    const AlgebraSpec spec = trial % 2 == 0 ? m2_spec() : wide_spec();
    const OperatorFrame f = random_frame(rng, spec, 2, 4);
    const ModuleOperator t0 = random_invertible(rng, spec, 2);
    const OperatorFrame g = right_transform(f, t0);
    const SimilarityResult r = detect_right_similarity(f, g);
    REQUIRE(r.witness.has_value());
    CHECK(norm(r.witness->transform - t0) <=
          1e-6 * condition_number(t0) * std::max(1.0, norm(t0)));
    CHECK(r.witness->residual <= 1e-8 * std::max(1.0, norm(t0)));
  }
}

TEST_CASE("unitary transforms are flagged as unitary") {
  Rng rng(143);
  const OperatorFrame f = random_frame(rng, m2_spec(), 2, 3);
  const OperatorFrame g = right_transform(f, random_unitary(rng, m2_spec(), 2));
  const SimilarityResult r = detect_right_similarity(f, g);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->kind == SimilarityKind::right_unitary);
}

TEST_CASE("parseval similar pairs always get unitary witnesses") {
  Rng rng(144);
  for (int trial = 0; trial < 30; ++trial) {
    const OperatorFrame f = random_parseval_frame(rng, m2_spec(), 2, 3);
    const OperatorFrame g = right_transform(f, random_unitary(rng, m2_spec(), 2));
    REQUIRE(is_parseval(g));
    const SimilarityResult r = detect_right_similarity(f, g);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->kind == SimilarityKind::right_unitary);
    CHECK(norm(adjoint(r.witness->transform) * r.witness->transform -
               ModuleOperator::identity(m2_spec(), 2)) <= 1e-9);
  }
}

TEST_CASE("permuting basis projections breaks similarity") {
  // Frames of coordinate projections; swapping two of them moves the frame
  // projection on the dilated module.
  const AlgebraSpec spec = m2_spec();
  std::vector<ModuleOperator> ps;
  for (int i = 0; i < 2; ++i) {
    const auto ei = ModuleVector::unit_basis(spec, 2, i);
    ps.push_back(rank_one(ei, ei));
  }
  const OperatorFrame f({ps[0], ps[1]});
  const OperatorFrame g({ps[1], ps[0]});
  const SimilarityResult r = detect_right_similarity(f, g);
  CHECK(!r.witness.has_value());
  CHECK(r.projection_gap > 0.5);
}

TEST_CASE("independent random frames are typically not similar") {
  Rng rng(145);
  int rejected = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const OperatorFrame f = random_frame(rng, m2_spec(), 2, 3);
    const OperatorFrame g = random_frame(rng, m2_spec(), 2, 3);
    const SimilarityResult r = detect_right_similarity(f, g);
    if (!r.witness.has_value()) {
      ++rejected;
      CHECK(r.projection_gap > 1e-3);
    }
  }
  CHECK(rejected == 20);
}

TEST_CASE("shape preconditions are enforced") {
  Rng rng(146);
  const OperatorFrame f = random_frame(rng, m2_spec(), 2, 3);
  CHECK_THROWS_WITH_AS(
      detect_right_similarity(f, random_frame(rng, scalar_spec(), 2, 3)),
      doctest::Contains("SpecMismatch"), Error);
  CHECK_THROWS_WITH_AS(
      detect_right_similarity(f, random_frame(rng, m2_spec(), 3, 3)),
      doctest::Contains("DimensionMismatch"), Error);
  CHECK_THROWS_WITH_AS(
      detect_right_similarity(f, random_frame(rng, m2_spec(), 2, 4)),
      doctest::Contains("DimensionMismatch"), Error);
  const ModuleOperator e0 = random_projection(rng, m2_spec(), 2, {2});
  CHECK_THROWS_WITH_AS(
      detect_right_similarity(f, random_corner_frame(rng, m2_spec(), 2, 3, e0)),
      doctest::Contains("IncompatibleRanges"), Error);
}

}  // TEST_SUITE

TEST_SUITE("projection equivalence") {

TEST_CASE("a projection is equivalent to itself") {
  Rng rng(151);
  const ModuleOperator p = random_projection(rng, sum_spec(), 2, {1, 3});
  const MvnEquivalence eq = mv_equivalent(p, p);
  REQUIRE(eq.partial_isometry.has_value());
  CHECK(eq.ranks_p == eq.ranks_q);
  const ModuleOperator& v = *eq.partial_isometry;
  CHECK(norm(v * adjoint(v) - p) <= 1e-10);
  CHECK(norm(adjoint(v) * v - p) <= 1e-10);
}

TEST_CASE("matrix-unit projections are equivalent via a shift") {
  const AlgebraSpec spec = m2_spec();
  const auto e0 = ModuleVector::unit_basis(spec, 2, 0);
  const auto e1 = ModuleVector::unit_basis(spec, 2, 1);
  const ModuleOperator p = rank_one(e0, e0);
  const ModuleOperator q = rank_one(e1, e1);
  const MvnEquivalence eq = mv_equivalent(p, q);
  REQUIRE(eq.partial_isometry.has_value());
  const ModuleOperator& v = *eq.partial_isometry;
  CHECK(norm(v * adjoint(v) - p) <= 1e-10);
  CHECK(norm(adjoint(v) * v - q) <= 1e-10);
}

TEST_CASE("unitary conjugates are equivalent") {
  Rng rng(152);
  for (int trial = 0; trial < 40; ++trial) {
    const AlgebraSpec spec = trial % 2 == 0 ? m2_spec() : wide_spec();
    const ModuleOperator p = random_projection(
        rng, spec, 2, std::vector<int>(static_cast<size_t>(spec.block_count()), 2));
    const ModuleOperator u = random_unitary(rng, spec, 2);
    const ModuleOperator q = u * p * adjoint(u);
    const MvnEquivalence eq = mv_equivalent(p, q);
    REQUIRE(eq.partial_isometry.has_value());
    const ModuleOperator& v = *eq.partial_isometry;
    CHECK(norm(v * adjoint(v) - p) <= 1e-9);
    CHECK(norm(adjoint(v) * v - q) <= 1e-9);
  }
}

TEST_CASE("rank mismatches are reported, not bridged") {
  Rng rng(153);
  const ModuleOperator p = random_projection(rng, m2_spec(), 2, {1});
  const ModuleOperator q = random_projection(rng, m2_spec(), 2, {3});
  const MvnEquivalence eq = mv_equivalent(p, q);
  CHECK(!eq.partial_isometry.has_value());
  CHECK(eq.ranks_p == std::vector<int>{1});
  CHECK(eq.ranks_q == std::vector<int>{3});
}

TEST_CASE("non-projections are refused") {
  Rng rng(154);
  const ModuleOperator t = random_invertible(rng, m2_spec(), 2);
  const ModuleOperator p = random_projection(rng, m2_spec(), 2, {2});
  CHECK_THROWS_WITH_AS(mv_equivalent(t, p), doctest::Contains("NotProjection"),
                       Error);
}

}  // TEST_SUITE

TEST_SUITE("frames from projections") {

TEST_CASE("reusing the own frame projection gives a unitary relative") {
  Rng rng(161);
  const OperatorFrame f = random_frame(rng, m2_spec(), 2, 3);
  const FrameAnalysis a = analyze(f);
  const OperatorFrame g = frame_from_projection(f, a.projection);
  const SimilarityResult r = detect_right_similarity(f, g);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->kind == SimilarityKind::right_unitary);
}

TEST_CASE("output carries the requested projection and the old frame operator") {
  Rng rng(162);
  for (int trial = 0; trial < 30; ++trial) {
    const AlgebraSpec spec = m2_spec();
    const OperatorFrame f = random_frame(rng, spec, 2, 3);
    const FrameAnalysis fa = analyze(f);
    // Random projection with the same block ranks as P_A.
    const ModuleOperator p =
        random_projection(rng, spec, 6, projection_block_ranks(fa.projection));
    const OperatorFrame g = frame_from_projection(f, p);
    const FrameAnalysis ga = analyze(g);
    CHECK(norm(ga.projection - p) <= 1e-8);
    CHECK(norm(ga.frame_operator - fa.frame_operator) <=
          1e-8 * std::max(1.0, norm(fa.frame_operator)));
  }
}

TEST_CASE("wrong rank vectors yield NotEquivalent") {
  Rng rng(163);
  const OperatorFrame f = random_frame(rng, m2_spec(), 2, 3);
  const ModuleOperator p = random_projection(rng, m2_spec(), 6, {1});
  CHECK_THROWS_WITH_AS(frame_from_projection(f, p),
                       doctest::Contains("NotEquivalent"), Error);
}

}  // TEST_SUITE

TEST_SUITE("parseval parametrization") {

TEST_CASE("the frame projection itself reproduces the frame") {
  Rng rng(171);
  const OperatorFrame f = random_parseval_frame(rng, m2_spec(), 2, 3);
  const FrameAnalysis a = analyze(f);
  const OperatorFrame g = parseval_parametrize(f, a.projection);
  for (int j = 0; j < f.size(); ++j) {
    CHECK(rel_gap(g.element(j), f.element(j)) <= 1e-10);
  }
}

TEST_CASE("a unitary V on a singleton parseval frame replaces the element") {
  Rng rng(172);
  const OperatorFrame f({ModuleOperator::identity(m2_spec(), 2)});
  const ModuleOperator v = random_unitary(rng, m2_spec(), 2);
  const OperatorFrame g = parseval_parametrize(f, v);
  CHECK(is_parseval(g));
  CHECK(rel_gap(g.element(0), v) <= 1e-12);
  CHECK(norm(analyze(g).projection - v * adjoint(v)) <= 1e-9);
}

TEST_CASE("compatible partial isometries transport the projection") {
  Rng rng(173);
  for (int trial = 0; trial < 30; ++trial) {
    const OperatorFrame f = random_parseval_frame(rng, m2_spec(), 2, 3);
    const FrameAnalysis fa = analyze(f);
    // V with V*V = P_A: move the range to a random equivalent projection.
    const ModuleOperator target =
        random_projection(rng, m2_spec(), 6, projection_block_ranks(fa.projection));
    const MvnEquivalence eq = mv_equivalent(target, fa.projection);
    REQUIRE(eq.partial_isometry.has_value());
    const OperatorFrame g = parseval_parametrize(f, *eq.partial_isometry);
    CHECK(is_parseval(g));
    CHECK(norm(analyze(g).projection - target) <= 1e-8);
  }
}

TEST_CASE("two V choices differing by a commuting unitary are unitary kin") {
  Rng rng(174);
  const OperatorFrame f = random_parseval_frame(rng, m2_spec(), 2, 3);
  const FrameAnalysis fa = analyze(f);
  const ModuleOperator target =
      random_projection(rng, m2_spec(), 6, projection_block_ranks(fa.projection));
  const MvnEquivalence eq = mv_equivalent(target, fa.projection);
  REQUIRE(eq.partial_isometry.has_value());
  const ModuleOperator v = *eq.partial_isometry;
  // U = lambda P_A + mu (I - P_A) is unitary and commutes with P_A.
  const ModuleOperator id = ModuleOperator::identity(m2_spec(), 6);
  const ModuleOperator u = fa.projection * Complex(0.6, 0.8) +
                           (id - fa.projection) * Complex(0, 1);
  const OperatorFrame g1 = parseval_parametrize(f, v);
  const OperatorFrame g2 = parseval_parametrize(f, v * u);
  const SimilarityResult r = detect_right_similarity(g1, g2);
  REQUIRE(r.witness.has_value());
  CHECK(norm(adjoint(r.witness->transform) * r.witness->transform -
             ModuleOperator::identity(m2_spec(), 2)) <= 1e-8);
}

TEST_CASE("non-parseval frames and incompatible isometries are refused") {
  Rng rng(175);
  const OperatorFrame loose = random_frame(rng, m2_spec(), 2, 3);
  const FrameAnalysis la = analyze(loose);
  CHECK_THROWS_WITH_AS(parseval_parametrize(loose, la.projection),
                       doctest::Contains("NotParseval"), Error);

  const OperatorFrame f = random_parseval_frame(rng, m2_spec(), 2, 3);
  const ModuleOperator bad = random_unitary(rng, m2_spec(), 6);
  CHECK_THROWS_WITH_AS(parseval_parametrize(f, bad),
                       doctest::Contains("NotCompatiblePartialIsometry"),
                       Error);
}

}  // TEST_SUITE

TEST_SUITE("left transforms") {

TEST_CASE("the corner identity changes nothing") {
  Rng rng(181);
  const ModuleOperator e0 = random_projection(rng, m2_spec(), 2, {2});
  const OperatorFrame f = random_corner_frame(rng, m2_spec(), 2, 4, e0);
  const OperatorFrame g = left_transform(f, e0);
  for (int j = 0; j < f.size(); ++j) {
    CHECK(rel_gap(g.element(j), f.element(j)) <= 1e-12);
  }
}

TEST_CASE("scaling the corner identity scales the frame operator") {
  Rng rng(182);
  const ModuleOperator e0 = random_projection(rng, m2_spec(), 2, {2});
  const OperatorFrame f = random_corner_frame(rng, m2_spec(), 2, 4, e0);
  const OperatorFrame g = left_transform(f, e0 * Complex(2, 0));
  CHECK(rel_gap(frame_operator(g),
                frame_operator(f) * Complex(4, 0)) <= 1e-10);
}

TEST_CASE("corner-unitary transforms preserve the frame operator") {
  Rng rng(183);
  for (int trial = 0; trial < 30; ++trial) {
    const AlgebraSpec spec = m2_spec();
    const ModuleOperator e0 = random_projection(rng, spec, 2, {2});
    const OperatorFrame f = random_corner_frame(rng, spec, 2, 4, e0);
    // Corner unitary: compress an ambient unitary's corner polar factor.
    const ModuleOperator w = e0 * random_operator(rng, spec, 2, 2) * e0;
    const ModuleOperator ww = corner_positive_power(w * adjoint(w), -0.5, e0);
    const ModuleOperator s = ww * w;  // corner polar unitary
    REQUIRE(norm(s * adjoint(s) - e0) <= 1e-8);
    const OperatorFrame g = left_transform(f, s);
    CHECK(norm(frame_operator(g) - frame_operator(f)) <=
          1e-8 * std::max(1.0, norm(frame_operator(f))));
  }
}

TEST_CASE("the sandwich inequality holds in positive order") {
  Rng rng(184);
  for (int trial = 0; trial < 30; ++trial) {
    const AlgebraSpec spec = sum_spec();
    const ModuleOperator e0 = ModuleOperator::identity(spec, 2);
    const OperatorFrame f = random_frame(rng, spec, 2, 3);
    const ModuleOperator s = random_invertible(rng, spec, 2);
    const OperatorFrame g = left_transform(f, s);

    const ModuleOperator da = frame_operator(f);
    const ModuleOperator db = frame_operator(g);
    const double s_norm = norm(s);
    const double s_inv_norm = norm(positive_power(adjoint(s) * s, -0.5));
    const Tolerance tol;
    CHECK(is_positive(db - da * Complex(1.0 / (s_inv_norm * s_inv_norm), 0),
                      Tolerance{1e-8, 1e-10}));
    CHECK(is_positive(da * Complex(s_norm * s_norm, 0) - db,
                      Tolerance{1e-8, 1e-10}));
    (void)e0;
    (void)tol;
  }
}

TEST_CASE("operators outside the corner are rejected") {
  Rng rng(185);
  const ModuleOperator e0 = random_projection(rng, m2_spec(), 2, {2});
  const OperatorFrame f = random_corner_frame(rng, m2_spec(), 2, 4, e0);
  CHECK_THROWS_WITH_AS(left_transform(f, ModuleOperator::identity(m2_spec(), 2)),
                       doctest::Contains("NotInCorner"), Error);
}

TEST_CASE("corner-singular operators are rejected") {
  Rng rng(186);
  const AlgebraSpec spec = m2_spec();
  const ModuleOperator e0 = random_projection(rng, spec, 2, {3});
  const OperatorFrame f = random_corner_frame(rng, spec, 2, 5, e0);
  const ModuleOperator small = random_projection(rng, spec, 2, {1});
  const ModuleOperator s = e0 * small * e0;  // rank 1 < 3 in the corner
  CHECK_THROWS_AS(left_transform(f, s), Error);
}

}  // TEST_SUITE

TEST_SUITE("corner commutation criterion") {

TEST_CASE("the corner identity commutes with witness I") {
  Rng rng(191);
  const OperatorFrame f = random_frame(rng, m2_spec(), 2, 3);
  const CommutationCheck c =
      corner_commutation_check(f, ModuleOperator::identity(m2_spec(), 2));
  CHECK(c.commutes);
  CHECK(c.max_commutator <= 1e-10);
  REQUIRE(c.right_witness.has_value());
  CHECK(rel_gap(c.right_witness->transform,
                ModuleOperator::identity(m2_spec(), 2)) <= 1e-8);
  CHECK(c.right_witness->residual <= 1e-8);
}

TEST_CASE("unimodular scalars commute and give unitary witnesses") {
  Rng rng(192);
  const OperatorFrame f = random_frame(rng, wide_spec(), 2, 3);
  const ModuleOperator s =
      ModuleOperator::identity(wide_spec(), 2) * Complex(0.6, 0.8);
  const CommutationCheck c = corner_commutation_check(f, s);
  CHECK(c.commutes);
  REQUIRE(c.unitary.has_value());
  CHECK(c.unitary_gap <= 1e-9);
  REQUIRE(c.right_witness.has_value());
  CHECK(c.right_witness->residual <= 1e-8);
  // The witness really does reproduce {S A_j}.
  for (int j = 0; j < f.size(); ++j) {
    CHECK(norm(s * f.element(j) -
               f.element(j) * c.right_witness->transform) <= 1e-8);
  }
}

TEST_CASE("scalar-multiple frames commute with every ambient unitary") {
  Rng rng(193);
  // Elements c_j W share one invertible W, so A_j D^{-1} A_i* is scalar.
  const AlgebraSpec spec = m2_spec();
  const ModuleOperator w = random_invertible(rng, spec, 2);
  std::vector<ModuleOperator> elements;
  const Complex cs[3] = {{1, 0}, {0.5, 0.5}, {0, -1}};
  for (Complex cj : cs) elements.push_back(w * cj);
  const OperatorFrame f(elements);
  const ModuleOperator s = random_unitary(rng, spec, 2);
  const CommutationCheck c = corner_commutation_check(f, s);
  CHECK(c.commutes);
  REQUIRE(c.right_witness.has_value());
  CHECK(c.unitary_gap <= 1e-9);
  CHECK(c.right_witness->residual <= 1e-8);
}

TEST_CASE("a generic unitary fails to commute and no unitary witness exists") {
  Rng rng(194);
  const AlgebraSpec spec = m2_spec();
  const OperatorFrame f = random_frame(rng, spec, 2, 2);
  const ModuleOperator s = random_unitary(rng, spec, 2);
  const CommutationCheck c = corner_commutation_check(f, s);
  REQUIRE(!c.commutes);
  CHECK(c.max_commutator > 1e-6);
  CHECK(!c.right_witness.has_value());

  // Other direction: {S A_j} has no unitary right witness from f.
  std::vector<ModuleOperator> moved;
  for (const auto& a : f.elements()) moved.push_back(s * a);
  const SimilarityResult r = detect_right_similarity(f, OperatorFrame(moved));
  const bool unitary_witness =
      r.witness.has_value() && r.witness->kind == SimilarityKind::right_unitary;
  CHECK(!unitary_witness);
}

TEST_CASE("non-unitary s is refused") {
  Rng rng(195);
  const OperatorFrame f = random_frame(rng, m2_spec(), 2, 3);
  CHECK_THROWS_WITH_AS(
      corner_commutation_check(f, ModuleOperator::identity(m2_spec(), 2) *
                                      Complex(2, 0)),
      doctest::Contains("NotCornerUnitary"), Error);
}

}  // TEST_SUITE
