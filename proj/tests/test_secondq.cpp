#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "supq/secondq.hpp"

using namespace supq;

namespace {

Matrix qubit_c(double c) {
    Matrix m(2, 2);
    m << 0.5, 0.5 * c, 0.5 * c, 0.5;
    return m;
}

const Decomposition kQubit({1, 1});

}  // namespace

TEST_CASE("lift of a two-level system") {
    const LiftMap lift = build_lift(kQubit);
    CHECK(lift.targetDim() == 4);
    // |1> -> |1~ 0~> (flat index 2), |2> -> |0~ 1~> (flat index 1)
    CHECK(lift.isometry(2, 0).real() == doctest::Approx(1.0));
    CHECK(lift.isometry(1, 1).real() == doctest::Approx(1.0));
    CHECK(max_abs(lift.isometry.adjoint() * lift.isometry - Matrix::Identity(2, 2)) < 1e-15);

    const LiftMap wide = build_lift(Decomposition({2, 1}));
    CHECK(wide.targetDim() == 6);
    CHECK(max_abs(wide.isometry.adjoint() * wide.isometry - Matrix::Identity(3, 3)) < 1e-15);

    CHECK_THROWS_AS(build_lift(Decomposition({3, 3}), 10), Error);
}

TEST_CASE("lifted states") {
    const LiftMap lift = build_lift(kQubit);

    Vector psi(2);
    psi << std::sqrt(0.3), std::sqrt(0.7);
    const auto purePsi = make_density(psi * psi.adjoint());
    const auto lifted = lift_state(lift, purePsi);
    // entangled pure state alpha|1~0~> + beta|0~1~>
    CHECK(von_neumann_entropy(lifted) == doctest::Approx(0.0).epsilon(1e-10));
    const Matrix marginal = partial_trace(lifted.matrix(), {2, 2}, {0});
    const double expected = -(0.3 * std::log(0.3) + 0.7 * std::log(0.7));
    CHECK(entropy_of_spectrum(eigenvalues(marginal)) == doctest::Approx(expected).epsilon(1e-10));

    Matrix diag = Matrix::Zero(2, 2);
    diag(0, 0) = 0.3;
    diag(1, 1) = 0.7;
    const auto liftedDiag = lift_state(lift, make_density(diag));
    CHECK(wootters_ef(liftedDiag) == doctest::Approx(0.0).epsilon(1e-10));

    Rng rng(4);
    const auto rho = make_density(rng.density(2));
    CHECK(von_neumann_entropy(lift_state(lift, rho)) ==
          doctest::Approx(von_neumann_entropy(rho)).epsilon(1e-12));

    CHECK_THROWS_AS(lift_state(lift, make_density(Matrix::Identity(3, 3) / 3.0)), Error);
}

TEST_CASE("induced measures") {
    const LiftMap lift = build_lift(kQubit);
    const auto relent = lifted_relent_functional(lift);
    const auto formation = lifted_formation_functional(lift);

    const auto rho = make_density(qubit_c(0.6));
    CHECK(induced_measure(lift, relent, rho) ==
          doctest::Approx(a_s(rho, kQubit).value).epsilon(1e-10));
    CHECK(induced_measure(lift, formation, rho) ==
          doctest::Approx(a_f(rho, kQubit).value).epsilon(1e-4));

    const auto blockDiag = pinch(rho, kQubit);
    CHECK(induced_measure(lift, relent, blockDiag) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(induced_measure(lift, formation, blockDiag) == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(lifted_formation_functional(build_lift(Decomposition({2, 1}))), Error);
}

TEST_CASE("structured minimizing separable candidate") {
    const LiftMap lift = build_lift(kQubit);
    const BipartiteSplit split = lifted_split(lift);
    const PairedBlocks pairs = lifted_pair_blocks(lift);

    const auto rho = make_density(qubit_c(0.6));
    const auto sigma = lift_state(lift, rho);
    const auto candidate = candidate_min_separable(sigma, split, pairs);
    // the candidate is the pinch over the pair blocks
    const Matrix expected = pinch_sets(sigma.matrix(), pairs.all_pair_indices(split));
    CHECK(max_abs(candidate.matrix() - expected) < 1e-12);

    // localized product state: candidate equals the state, distance zero
    Matrix localized = Matrix::Zero(2, 2);
    localized(0, 0) = 1.0;
    const auto sigmaLoc = lift_state(lift, make_density(localized));
    const auto candLoc = candidate_min_separable(sigmaLoc, split, pairs);
    CHECK(max_abs(candLoc.matrix() - sigmaLoc.matrix()) < 1e-12);
    CHECK(relative_entropy(sigmaLoc, candLoc) == doctest::Approx(0.0).epsilon(1e-10));

    // equal superposition: distance ln 2
    const auto sigmaPlus = lift_state(lift, make_density(qubit_c(1.0)));
    const auto candPlus = candidate_min_separable(sigmaPlus, split, pairs);
    CHECK(relative_entropy(sigmaPlus, candPlus) == doctest::Approx(std::log(2.0)).epsilon(1e-10));

    // support leak outside the pair blocks is rejected
    Matrix outside = Matrix::Zero(4, 4);
    outside(0, 0) = 1.0;  // double vacuum
    CHECK_THROWS_AS(candidate_min_separable(make_density(outside), split, pairs), Error);
}

TEST_CASE("first-order minimizer certificate") {
    const LiftMap lift = build_lift(kQubit);
    const BipartiteSplit split = lifted_split(lift);
    const PairedBlocks pairs = lifted_pair_blocks(lift);

    const auto sigma = lift_state(lift, make_density(qubit_c(0.6)));
    const auto candidate = candidate_min_separable(sigma, split, pairs);

    // sigma = rho*: the objective is minimal at zero, derivative non-negative
    const auto trivial = first_order_min_check(candidate, candidate, split, 20, 3);
    CHECK(trivial.pass);

    const auto rep = first_order_min_check(sigma, candidate, split, 200, 3);
    CHECK(rep.pass);
    CHECK(rep.nonNegativeViolations == 0);

    // a separable but non-pinched candidate fails the certificate
    const auto flat = make_density(Matrix::Identity(4, 4) / 4.0);
    const auto wrong = first_order_min_check(sigma, flat, split, 200, 3);
    CHECK(wrong.nonNegativeViolations > 0);

    // support failure: candidate misses part of sigma's support
    Matrix tiny = Matrix::Zero(4, 4);
    tiny(1, 1) = 1.0;
    CHECK_THROWS_AS(first_order_min_check(sigma, make_density(tiny), split, 5, 3), Error);
}

TEST_CASE("relative entropy decomposition identity") {
    const LiftMap lift = build_lift(kQubit);
    const BipartiteSplit split = lifted_split(lift);
    const PairedBlocks pairs = lifted_pair_blocks(lift);

    const auto full = es_decomposition_identity(lift_state(lift, make_density(qubit_c(1.0))), split,
                                                pairs);
    CHECK(full.pass);
    CHECK(full.relEntropyToCandidate == doctest::Approx(std::log(2.0)).epsilon(1e-10));

    const auto partial = es_decomposition_identity(lift_state(lift, make_density(qubit_c(0.6))),
                                                   split, pairs);
    CHECK(partial.pass);
    CHECK(partial.relEntropyToCandidate == doctest::Approx(0.192745).epsilon(1e-5));

    Rng rng(8);
    const Decomposition wideDims({2, 1});
    const LiftMap wide = build_lift(wideDims);
    for (int s = 0; s < 20; ++s) {
        const auto rho = make_density(rng.density(3));
        const auto rep = es_decomposition_identity(lift_state(wide, rho), lifted_split(wide),
                                                   lifted_pair_blocks(wide));
        CHECK(rep.pass);
        CHECK(rep.blockRelEntropy == doctest::Approx(a_s(rho, wideDims).value).epsilon(1e-9));
    }
}

TEST_CASE("two-qubit formation oracle") {
    // product pure state
    Vector v = Vector::Zero(4);
    v(0) = 1.0;
    CHECK(wootters_ef(make_density(v * v.adjoint())) == doctest::Approx(0.0).epsilon(1e-12));

    // Bell state
    Vector bell = Vector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    CHECK(wootters_ef(make_density(bell * bell.adjoint())) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-10));

    // lifted c = 0.6 state: concurrence 0.6
    const LiftMap lift = build_lift(kQubit);
    const double x = 0.5 * (1.0 + std::sqrt(1.0 - 0.36));
    const double expected = -(x * std::log(x) + (1.0 - x) * std::log(1.0 - x));
    CHECK(wootters_ef(lift_state(lift, make_density(qubit_c(0.6)))) ==
          doctest::Approx(expected).epsilon(1e-12));

    CHECK_THROWS_AS(wootters_ef(make_density(Matrix::Identity(3, 3) / 3.0)), Error);
}

TEST_CASE("formation decomposition checks") {
    const LiftMap lift = build_lift(kQubit);
    const BipartiteSplit split = lifted_split(lift);
    const PairedBlocks pairs = lifted_pair_blocks(lift);

    // pure bipartite state in Schmidt form: formation equals the Schmidt entropy
    Rng rng(15);
    const RealVector schmidt = rng.simplex(2);
    Vector psi = Vector::Zero(4);
    psi(0) = std::sqrt(schmidt(0));  // |00>
    psi(3) = std::sqrt(schmidt(1));  // |11>
    PairedBlocks schmidtPairs{Decomposition({1, 1}), Decomposition({1, 1}), {{0, 0}, {1, 1}}};
    const auto pureRep = ef_superadditivity_check(make_density(psi * psi.adjoint()),
                                                  BipartiteSplit{2, 2}, schmidtPairs);
    CHECK(pureRep.inequalityHolds);
    CHECK(pureRep.equalityApplicable);
    CHECK(pureRep.equalityHolds);
    CHECK(pureRep.ef == doctest::Approx(entropy_of_spectrum(schmidt)).epsilon(1e-9));

    // lifted mixed qubit: Wootters oracle against the optimizer
    const auto mixedRep =
        ef_superadditivity_check(lift_state(lift, make_density(qubit_c(0.6))), split, pairs);
    CHECK(mixedRep.inequalityHolds);
    CHECK(mixedRep.equalityHolds);
    CHECK(mixedRep.ef == doctest::Approx(0.325083).epsilon(1e-5));

    // block-localized product state: both sides vanish
    Matrix localized = Matrix::Zero(2, 2);
    localized(1, 1) = 1.0;
    const auto zeroRep = ef_superadditivity_check(lift_state(lift, make_density(localized)), split,
                                                  pairs);
    CHECK(zeroRep.ef == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(zeroRep.af == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(zeroRep.inequalityHolds);
}
