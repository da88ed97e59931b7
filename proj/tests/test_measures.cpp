#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "supq/measures.hpp"
#include "supq/secondq.hpp"

using namespace supq;

namespace {

Matrix qubit_c(double c) {
    Matrix m(2, 2);
    m << 0.5, 0.5 * c, 0.5 * c, 0.5;
    return m;
}

double shannon2(double p) { return -(p * std::log(p) + (1.0 - p) * std::log(1.0 - p)); }

const Decomposition kQubit({1, 1});

}  // namespace

TEST_CASE("relative-entropy measure") {
    Matrix plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    CHECK(a_s(make_density(plus), kQubit).value == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    const auto rho = make_density(qubit_c(0.6));
    CHECK(a_s(pinch(rho, kQubit), kQubit).value == doctest::Approx(0.0).epsilon(1e-12));

    // eigenvalues of the c = 0.6 state are {0.8, 0.2}
    const double expected = std::log(2.0) - shannon2(0.8);
    CHECK(expected == doctest::Approx(0.192745).epsilon(1e-5));
    const auto rep = a_s(rho, kQubit);
    CHECK(rep.value == doctest::Approx(expected).epsilon(1e-12));
    CHECK(max_abs(rep.blockDiagonalWitness->matrix() - Matrix::Identity(2, 2) / 2.0) < 1e-14);
}

TEST_CASE("block-diagonal sampling never beats the pinched state") {
    const auto rho = make_density(qubit_c(0.6));
    const double direct = a_s_min_check(rho, kQubit, 0, 1);
    CHECK(direct == doctest::Approx(a_s(rho, kQubit).value).epsilon(1e-10));

    const double sampled = a_s_min_check(rho, kQubit, 500, 42);
    CHECK(sampled == doctest::Approx(a_s(rho, kQubit).value).epsilon(1e-10));

    const auto blockDiag = pinch(rho, kQubit);
    CHECK(a_s_min_check(blockDiag, kQubit, 50, 7) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("formation measure on pure and block-diagonal states") {
    for (double p : {0.5, 0.3, 0.9}) {
        Vector psi(2);
        psi << std::sqrt(p), std::sqrt(1.0 - p);
        const auto pure = make_density(psi * psi.adjoint());
        CHECK(a_f(pure, kQubit).value == doctest::Approx(shannon2(p)).epsilon(1e-9));
    }

    Rng rng(9);
    const auto blockDiag = pinch(make_density(rng.density(4)), Decomposition({2, 2}));
    const auto rep = a_f(blockDiag, Decomposition({2, 2}));
    CHECK(rep.value == 0.0);
    CHECK(max_abs(rep.ensembleWitness->assemble() - blockDiag.matrix()) < 1e-10);
}

TEST_CASE("formation measure matches the lifted two-qubit oracle") {
    // concurrence of the lifted c-state equals |c|
    const double c = 0.6;
    const auto rho = make_density(qubit_c(c));
    const double conc = c;
    const double expected =
        [&] {
            const double x = 0.5 * (1.0 + std::sqrt(1.0 - conc * conc));
            return -(x * std::log(x) + (1.0 - x) * std::log(1.0 - x));
        }();
    CHECK(expected == doctest::Approx(0.325083).epsilon(1e-5));

    const auto rep = a_f(rho, kQubit);
    CHECK(rep.value == doctest::Approx(expected).epsilon(1e-5));
    CHECK(rep.converged);

    const LiftMap lift = build_lift(kQubit);
    CHECK(wootters_ef(lift_state(lift, rho)) == doctest::Approx(expected).epsilon(1e-10));

    // witness replays the value and reassembles the state
    const auto& ens = *rep.ensembleWitness;
    CHECK(max_abs(ens.assemble() - rho.matrix()) < 1e-8);
    double replay = 0.0;
    for (std::size_t l = 0; l < ens.vectors.size(); ++l) {
        const double w0 = std::norm(ens.vectors[l](0));
        const double w1 = std::norm(ens.vectors[l](1));
        double h = 0.0;
        if (w0 > 0) h -= w0 * std::log(w0);
        if (w1 > 0) h -= w1 * std::log(w1);
        replay += ens.weights(static_cast<Eigen::Index>(l)) * h;
    }
    CHECK(replay == doctest::Approx(rep.value).epsilon(1e-9));
}

TEST_CASE("formation gradient matches finite differences") {
    Rng rng(21);
    const Decomposition L({2, 1});
    const auto rho = make_density(rng.density(3));
    const auto ws = detail::af_workspace(rho, L);
    const Eigen::Index r = ws.w.cols();
    const Eigen::Index m = r * r;
    const Matrix t = detail::qf_retract(rng.ginibre(m, r));
    const Matrix grad = detail::af_gradient(ws, t);

    const double h = 1e-6;
    for (Eigen::Index l = 0; l < m; ++l) {
        for (Eigen::Index j = 0; j < r; ++j) {
            Matrix tp = t, tm = t;
            tp(l, j) += h;
            tm(l, j) -= h;
            const double dRe = (detail::af_objective(ws, tp) - detail::af_objective(ws, tm)) / (2 * h);
            CHECK(dRe == doctest::Approx(2.0 * grad(l, j).real()).epsilon(1e-5));

            tp = t;
            tm = t;
            tp(l, j) += Cx(0, h);
            tm(l, j) -= Cx(0, h);
            const double dIm = (detail::af_objective(ws, tp) - detail::af_objective(ws, tm)) / (2 * h);
            CHECK(dIm == doctest::Approx(2.0 * grad(l, j).imag()).epsilon(1e-5));
        }
    }
}

TEST_CASE("Ky-Fan measures") {
    const auto rho = make_density(qubit_c(0.6));
    CHECK(kyfan_measure(rho, kQubit, 1) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(kyfan_measure(pinch(rho, kQubit), kQubit, 1) == doctest::Approx(0.0));

    // (identity/N) x |+><+| in path-major layout: all block singular values 1/(2N)
    for (int n : {2, 3}) {
        Matrix plus(2, 2);
        plus << 0.5, 0.5, 0.5, 0.5;
        const auto state = make_density(kron(plus, Matrix::Identity(n, n) / n));
        const Decomposition L({n, n});
        for (int k = 1; k <= n; ++k)
            CHECK(kyfan_measure(state, L, k) == doctest::Approx(k / (2.0 * n)).epsilon(1e-12));
    }

    CHECK_THROWS_AS(kyfan_measure(rho, kQubit, 2), Error);
    CHECK_THROWS_AS(kyfan_measure(rho, kQubit, 0), Error);
    Rng rng(2);
    CHECK_THROWS_AS(kyfan_measure(make_density(rng.density(3)), Decomposition({1, 1, 1}), 1), Error);
}

TEST_CASE("trace and Schatten measures") {
    const auto rho = make_density(qubit_c(0.6));
    CHECK(trace_measure(rho, kQubit) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(norm_measure(rho, kQubit, NormSpec::schatten(1.0)) ==
          doctest::Approx(trace_measure(rho, kQubit)).epsilon(1e-12));
    CHECK(norm_measure(rho, kQubit, NormSpec::schatten(2.0)) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(norm_measure(rho, kQubit, NormSpec::kyfan(1)) == doctest::Approx(0.3).epsilon(1e-12));

    Rng rng(31);
    for (int s = 0; s < 50; ++s) {
        const auto state = make_density(rng.density(4));
        const Decomposition L({2, 2});
        CHECK(trace_measure(state, L) <= 0.5 + 1e-10);
        CHECK(norm_measure(state, L, NormSpec::schatten(1.0)) ==
              doctest::Approx(trace_measure(state, L)).epsilon(1e-12));
        CHECK(norm_measure(state, L, NormSpec::kyfan(1)) ==
              doctest::Approx(kyfan_measure(state, L, 1)).epsilon(1e-12));
    }

    CHECK_THROWS_AS(NormSpec::schatten(0.5), Error);
}

TEST_CASE("dominance report") {
    Rng rng(13);
    const Decomposition L({2, 2});
    const auto sigma = make_density(rng.density(4));
    const std::vector<NormSpec> specs = {NormSpec::schatten(1.5), NormSpec::schatten(2.0),
                                         NormSpec::trace()};

    const auto pinchRep = dominance_check(pinch(sigma, L), sigma, L, specs);
    CHECK(pinchRep.kyfanDominated);
    CHECK(pinchRep.allSuppliedDominated);

    const auto selfRep = dominance_check(sigma, sigma, L, specs);
    CHECK(selfRep.kyfanDominated);
    CHECK(selfRep.allSuppliedDominated);

    // search for a pair ordered at k = 1 but reversed at k = 2
    bool found = false;
    for (int trial = 0; trial < 400 && !found; ++trial) {
        const auto a = make_density(rng.density(4));
        const auto b = make_density(rng.density(4));
        if (kyfan_measure(a, L, 1) <= kyfan_measure(b, L, 1) &&
            kyfan_measure(a, L, 2) > kyfan_measure(b, L, 2) + 1e-12) {
            const auto rep = dominance_check(a, b, L, specs);
            CHECK_FALSE(rep.kyfanDominated);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("predictability") {
    Matrix plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    CHECK(predictability(make_density(plus), kQubit) == doctest::Approx(0.0));

    Matrix localized = Matrix::Zero(2, 2);
    localized(0, 0) = 1.0;
    CHECK(predictability(make_density(localized), kQubit) == doctest::Approx(1.0));

    Matrix skew = Matrix::Zero(2, 2);
    skew(0, 0) = 0.7;
    skew(1, 1) = 0.3;
    CHECK(predictability(make_density(skew), kQubit) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("Ky-Fan bound") {
    const auto rho = make_density(qubit_c(0.6));
    CHECK(kyfan_bound(rho, kQubit, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(kyfan_measure(rho, kQubit, 1) <= kyfan_bound(rho, kQubit, 1) + 1e-12);

    // equal marginal spectra {0.7, 0.3}: classical fidelity 1 at full order
    const auto sharp = sharp_state(0.5, {0.7, 0.3}, {0.7, 0.3});
    const Decomposition L({2, 2});
    CHECK(kyfan_bound(sharp, L, 2) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(kyfan_bound(sharp, L, 1) == doctest::Approx(0.35).epsilon(1e-12));

    Matrix localized = Matrix::Zero(2, 2);
    localized(0, 0) = 1.0;
    CHECK(kyfan_bound(make_density(localized), kQubit, 1) == doctest::Approx(0.0));
}

TEST_CASE("sharp state attains the bound") {
    const auto pure = sharp_state(0.5, {1.0}, {1.0});
    CHECK(kyfan_measure(pure, kQubit, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(von_neumann_entropy(pure) == doctest::Approx(0.0).epsilon(1e-10));

    const auto sharp = sharp_state(0.5, {0.7, 0.3}, {0.7, 0.3});
    const Decomposition L({2, 2});
    CHECK(kyfan_measure(sharp, L, 1) == doctest::Approx(0.35).epsilon(1e-12));
    CHECK(trace_measure(sharp, L) == doctest::Approx(0.5).epsilon(1e-12));
    for (int k = 1; k <= 2; ++k)
        CHECK(kyfan_measure(sharp, L, k) == doctest::Approx(kyfan_bound(sharp, L, k)).epsilon(1e-10));

    const auto localized = sharp_state(1.0, {0.6, 0.4}, {1.0});
    const Decomposition L21({2, 1});
    CHECK(kyfan_measure(localized, L21, 1) == doctest::Approx(0.0).epsilon(1e-12));

    // unsorted spectra are sorted internally, keeping the contract intact
    const auto unsorted = sharp_state(0.4, {0.3, 0.7}, {0.2, 0.8});
    for (int k = 1; k <= 2; ++k)
        CHECK(kyfan_measure(unsorted, L, k) ==
              doctest::Approx(kyfan_bound(unsorted, L, k)).epsilon(1e-10));

    CHECK_THROWS_AS(sharp_state(1.5, {1.0}, {1.0}), Error);
    CHECK_THROWS_AS(sharp_state(0.5, {0.4, 0.4}, {1.0}), Error);
    CHECK_THROWS_AS(sharp_state(0.5, {-0.2, 1.2}, {1.0}), Error);
}
