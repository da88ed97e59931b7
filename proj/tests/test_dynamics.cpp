#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "supq/dynamics.hpp"

using namespace supq;

TEST_CASE("liouvillian basics") {
    const LindbladGenerator empty = LindbladGenerator::make(Matrix::Zero(2, 2), {});
    CHECK(max_abs(liouvillian(empty)) == 0.0);

    // Hermitian jump operator commuting with H annihilates diagonal states
    Matrix h = Matrix::Zero(2, 2);
    h(0, 0) = 1.0;
    Matrix l = Matrix::Zero(2, 2);
    l(0, 0) = 2.0;
    l(1, 1) = -1.0;
    const LindbladGenerator gen = LindbladGenerator::make(h, {l});
    Matrix diag = Matrix::Zero(2, 2);
    diag(0, 0) = 0.3;
    diag(1, 1) = 0.7;
    CHECK(max_abs(lindblad_action(gen, diag)) < 1e-14);

    CHECK_THROWS_AS(LindbladGenerator::make((Matrix(2, 2) << 0, 1, 0, 0).finished(), {}), Error);
}

TEST_CASE("vectorized superoperator matches the direct action") {
    Rng rng(23);
    for (int s = 0; s < 10; ++s) {
        const int dim = 2 + s % 4;
        Matrix h = rng.ginibre(dim, dim);
        h = 0.5 * (h + h.adjoint()).eval();
        const LindbladGenerator gen =
            LindbladGenerator::make(h, {rng.ginibre(dim, dim), rng.ginibre(dim, dim)});
        const Matrix liou = liouvillian(gen);
        const Matrix rho = rng.density(dim);
        const Vector vec = Eigen::Map<const Vector>(rho.data(), dim * dim);
        const Vector mapped = liou * vec;
        CHECK(max_abs(Eigen::Map<const Matrix>(mapped.data(), dim, dim) -
                      lindblad_action(gen, rho)) < 1e-12);
    }
}

TEST_CASE("nonlocal generator closed block equation") {
    // N = 2 uniform model: dB/dt = g Tr(B)|e1><e1| - g B on the path block
    const double g = 1.7;
    const LindbladGenerator gen = build_scenario(Scenario::simple(ScenarioKind::NonlocalF1, 2, g));
    Rng rng(29);
    for (int s = 0; s < 5; ++s) {
        const Matrix rho = rng.density(4);
        const Matrix f = lindblad_action(gen, rho);
        const Matrix b = rho.block(0, 2, 2, 2);
        Matrix expected = -g * b;
        expected(0, 0) += g * b.trace();
        CHECK(max_abs(f.block(0, 2, 2, 2) - expected) < 1e-12);
    }
}

TEST_CASE("evolution") {
    const Scenario f1 = Scenario::simple(ScenarioKind::NonlocalF1, 3, 1.0);
    const LindbladGenerator gen = build_scenario(f1);
    const DensityOperator rho0 = initial_state(3);

    CHECK(max_abs(evolve(gen, rho0, 0.0).matrix() - rho0.matrix()) == 0.0);

    // path weights stay balanced for path-identical jumps
    const Decomposition L({3, 3});
    for (double t : {0.3, 1.0, 4.0}) {
        const auto rho = evolve(gen, rho0, t);
        CHECK(rho.matrix().block(0, 0, 3, 3).trace().real() == doctest::Approx(0.5).epsilon(1e-10));
    }

    // local relaxation kills all superposition at long times
    const LindbladGenerator local = build_scenario(Scenario::simple(ScenarioKind::LocalF2, 3, 1.0));
    const auto late = evolve(local, rho0, 50.0);
    for (int k = 1; k <= 3; ++k) CHECK(kyfan_measure(late, L, k) <= 1e-8);

    CHECK_THROWS_AS(evolve(gen, rho0, -1.0), Error);
}

TEST_CASE("integrators agree") {
    const LindbladGenerator gen = build_scenario(Scenario::simple(ScenarioKind::NonlocalF1, 2, 1.0));
    const DensityOperator rho0 = initial_state(2);
    CHECK(max_abs(evolve(gen, rho0, 1.0).matrix() - evolve_rk4(gen, rho0, 1.0, 1e-3).matrix()) <
          1e-7);

    const LindbladGenerator mixed =
        build_scenario(Scenario::randomized(ScenarioKind::Mixture, 3, 99));
    const DensityOperator r3 = initial_state(3);
    CHECK(max_abs(evolve(mixed, r3, 0.7).matrix() - evolve_rk4(mixed, r3, 0.7, 5e-4).matrix()) <
          1e-7);
}

TEST_CASE("scenario construction") {
    const Scenario simple = Scenario::simple(ScenarioKind::NonlocalF1, 3, 2.0);
    CHECK(simple.rates(0, 2) == doctest::Approx(2.0));
    CHECK(simple.rates(1, 2) == 0.0);
    CHECK(build_scenario(simple).lindblads.size() == 3);  // one jump per level

    const Scenario local = Scenario::simple(ScenarioKind::LocalF2, 3, 2.0);
    CHECK(build_scenario(local).lindblads.size() == 6);  // per path

    Scenario bad = Scenario::simple(ScenarioKind::Mixture, 3, 1.0);
    bad.w1 = 0.9;
    bad.w2 = 0.3;
    CHECK_THROWS_AS(build_scenario(bad), Error);

    Scenario negative = Scenario::simple(ScenarioKind::NonlocalF1, 3, 1.0);
    negative.rates(0, 1) = -0.5;
    CHECK_THROWS_AS(build_scenario(negative), Error);

    const Scenario random = Scenario::randomized(ScenarioKind::Mixture, 3, 5);
    for (int k = 0; k < 3; ++k)
        for (int kp = k; kp < 3; ++kp) CHECK(random.rates(k, kp) >= 0.2);
    CHECK(random.rates(1, 0) == 0.0);  // lower triangle unused
    CHECK(random.hDiag(0) <= random.hDiag(1));
}

TEST_CASE("initial state") {
    const auto one = initial_state(1);
    CHECK(one.dim() == 2);
    CHECK(one.matrix()(0, 1).real() == doctest::Approx(0.5));

    const auto three = initial_state(3);
    const Decomposition L({3, 3});
    for (int k = 1; k <= 3; ++k)
        CHECK(kyfan_measure(three, L, k) == doctest::Approx(k / 6.0).epsilon(1e-12));
    CHECK(predictability(three, L) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("closed forms") {
    // k = 1 branch agrees with the general branch continued to k = 1
    for (double t : {0.0, 0.5, 1.0, 3.0})
        for (int n : {2, 3, 5}) {
            const double viaFirst = analytic_nonlocal(n, 1.0, t, 1);
            const double viaGeneral = 0.5 - std::exp(-t) * (0.5 - 1.0 / (2.0 * n));
            CHECK(viaFirst == doctest::Approx(viaGeneral).epsilon(1e-14));
            CHECK(analytic_nonlocal(n, 1.0, t, n) == doctest::Approx(0.5).epsilon(1e-14));
        }

    CHECK(analytic_nonlocal(3, 1.0, 0.0, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(analytic_nonlocal(3, 1.0, 1.0, 3) == doctest::Approx(0.5).epsilon(1e-14));
    // 1/6 + (1 - e^{-1})/3
    CHECK(analytic_nonlocal(3, 1.0, 1.0, 1) ==
          doctest::Approx(1.0 / 6.0 + (1.0 - std::exp(-1.0)) / 3.0).epsilon(1e-14));
    CHECK(analytic_nonlocal(3, 1.0, 1.0, 1) == doctest::Approx(0.3773735).epsilon(1e-6));

    for (int k = 1; k <= 3; ++k)
        CHECK(analytic_local(3, 1.0, 0.0, k) == doctest::Approx(k / 6.0).epsilon(1e-14));
    CHECK(analytic_local(3, 1.0, 1.0, 3) == doctest::Approx(3.0 * std::exp(-1.0) / 6.0).epsilon(1e-14));
    CHECK(analytic_local(3, 1.0, 1.0, 3) == doctest::Approx(0.183940).epsilon(1e-5));
    CHECK(analytic_local(3, 1.0, 40.0, 2) <= 1e-15);

    CHECK_THROWS_AS(analytic_nonlocal(3, 1.0, 1.0, 4), Error);
    CHECK_THROWS_AS(analytic_local(3, -1.0, 1.0, 1), Error);
}

TEST_CASE("time series against closed forms") {
    const std::vector<double> grid = {0.0, 0.25, 0.5, 1.0, 2.0, 5.0};

    const auto f1 = run_timeseries(Scenario::simple(ScenarioKind::NonlocalF1, 3, 1.0), grid);
    for (std::size_t r = 0; r < grid.size(); ++r)
        for (int k = 1; k <= 3; ++k)
            CHECK(f1.kyfan[r][static_cast<std::size_t>(k - 1)] ==
                  doctest::Approx(analytic_nonlocal(3, 1.0, grid[r], k)).epsilon(1e-8));

    const auto f2 = run_timeseries(Scenario::simple(ScenarioKind::LocalF2, 3, 1.0), grid);
    for (std::size_t r = 0; r < grid.size(); ++r)
        for (int k = 1; k <= 3; ++k)
            CHECK(f2.kyfan[r][static_cast<std::size_t>(k - 1)] ==
                  doctest::Approx(analytic_local(3, 1.0, grid[r], k)).epsilon(1e-8));

    CHECK_THROWS_AS(run_timeseries(Scenario::simple(ScenarioKind::LocalF2, 3, 1.0), {1.0, 0.5}),
                    Error);
}

TEST_CASE("CSV output") {
    const std::vector<double> grid = {0.0, 0.5, 1.0};
    const Scenario scen = Scenario::randomized(ScenarioKind::Mixture, 2, 7);
    const TimeSeries ts = run_timeseries(scen, grid);
    const std::string csv = ts.to_csv();
    CHECK(csv.rfind("t,A_1,A_2,A_S,predictability\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

    // deterministic: same scenario and grid give byte-identical output
    const TimeSeries again = run_timeseries(Scenario::randomized(ScenarioKind::Mixture, 2, 7), grid);
    CHECK(again.to_csv() == csv);
}
