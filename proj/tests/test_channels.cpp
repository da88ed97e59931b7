#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "supq/channels.hpp"
#include "supq/dynamics.hpp"
#include "supq/verify.hpp"

using namespace supq;

namespace {

Matrix range_projector(const Decomposition& L, int k) {
    Matrix p = Matrix::Zero(L.total(), L.total());
    p.block(L.offset(k), L.offset(k), L.dims[static_cast<std::size_t>(k)],
            L.dims[static_cast<std::size_t>(k)]) =
        Matrix::Identity(L.dims[static_cast<std::size_t>(k)], L.dims[static_cast<std::size_t>(k)]);
    return p;
}

}  // namespace

TEST_CASE("channel application") {
    Rng rng(1);
    const auto rho = make_density(rng.density(4));

    const KrausChannel identity = KrausChannel::from_kraus({Matrix::Identity(4, 4)});
    CHECK(max_abs(apply(identity, rho).matrix() - rho.matrix()) < 1e-14);

    const Decomposition L({2, 2});
    const KrausChannel pinchChannel =
        KrausChannel::from_kraus({range_projector(L, 0), range_projector(L, 1)});
    CHECK(max_abs(apply(pinchChannel, rho).matrix() - pinch(rho, L).matrix()) < 1e-13);

    std::vector<Matrix> depol;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Matrix k = Matrix::Zero(4, 4);
            k(i, j) = 0.5;  // 1/sqrt(dim)
            depol.push_back(k);
        }
    CHECK(max_abs(apply(KrausChannel::from_kraus(depol), rho).matrix() -
                  Matrix::Identity(4, 4) / 4.0) < 1e-13);

    CHECK_THROWS_AS(KrausChannel::from_kraus({0.5 * Matrix::Identity(2, 2)}), Error);
}

TEST_CASE("subspace preservation test") {
    Rng rng(2);
    const Decomposition L({2, 2});

    Matrix blockU = Matrix::Zero(4, 4);
    blockU.block(0, 0, 2, 2) = rng.unitary(2);
    blockU.block(2, 2, 2, 2) = rng.unitary(2);
    CHECK(is_sp(KrausChannel::from_kraus({blockU}), L));

    Matrix swap = Matrix::Zero(4, 4);
    swap.block(0, 2, 2, 2) = Matrix::Identity(2, 2);
    swap.block(2, 0, 2, 2) = Matrix::Identity(2, 2);
    const KrausChannel blockSwap = KrausChannel::from_kraus({swap});
    CHECK_FALSE(is_sp(blockSwap, L));
    CHECK(is_block_preserving(blockSwap, L));

    const KrausChannel pinchChannel =
        KrausChannel::from_kraus({range_projector(L, 0), range_projector(L, 1)});
    CHECK(is_sp(pinchChannel, L));
    CHECK(is_block_preserving(pinchChannel, L));

    // generic channels almost surely break block-diagonality
    const KrausChannel generic = random_generic_channel(rng, 4, 3);
    CHECK_FALSE(is_block_preserving(generic, L));

    const auto cls = classify(pinchChannel, L);
    CHECK(cls.isSP);
    CHECK(cls.isBlockPreserving);
    CHECK_FALSE(cls.lspCertificate.has_value());
}

TEST_CASE("SP channels preserve block-diagonality and contract the key measures") {
    Rng rng(3);
    for (int c = 0; c < 10; ++c) {
        const Decomposition L = random_bipartite_dims(rng, 3);
        const KrausChannel phi = random_sp_channel(rng, L, 2 + c % 3);
        CHECK(is_sp(phi, L));
        CHECK(is_block_preserving(phi, L));
        CHECK(monotonicity_harness(phi, L, {MeasureSelector::Kind::RelEntropy}, 40,
                                   rng.split(static_cast<std::uint64_t>(c)))
                  .pass);
        CHECK(monotonicity_harness(phi, L, {MeasureSelector::Kind::Trace}, 40,
                                   rng.split(100 + static_cast<std::uint64_t>(c)))
                  .pass);
    }
}

TEST_CASE("LSP compression") {
    Rng rng(5);
    const Decomposition L({2, 2});
    const LiftMap lift = build_lift(L);

    // occupation-preserving local unitaries give a block-local unitary channel
    auto localUnitary = [&](int modes) {
        Matrix u = Matrix::Zero(modes + 1, modes + 1);
        u(0, 0) = std::exp(Cx(0.0, rng.uniform(0.0, 6.28)));
        u.block(1, 1, modes, modes) = rng.unitary(modes);
        return KrausChannel::from_kraus({u});
    };
    ChannelClassification cls;
    const KrausChannel unitaryLsp = make_lsp(lift, localUnitary(2), localUnitary(2), &cls);
    CHECK(cls.isSP);
    CHECK(cls.lspCertificate.has_value());
    CHECK(unitaryLsp.kraus.size() == 1);

    // phase damping on factor 1 damps the off-diagonal path block
    const double gamma = 0.4;
    Matrix pd1 = Matrix::Identity(3, 3);
    pd1.block(1, 1, 2, 2) *= std::sqrt(1.0 - gamma);
    Matrix pd2 = Matrix::Zero(3, 3);
    pd2.block(1, 1, 2, 2) = std::sqrt(gamma) * Matrix::Identity(2, 2);
    const KrausChannel phaseDamping = KrausChannel::from_kraus({pd1, pd2});
    const KrausChannel idLocal = KrausChannel::from_kraus({Matrix::Identity(3, 3)});
    const KrausChannel damped = make_lsp(lift, phaseDamping, idLocal);
    const auto rho = make_density(rng.density(4));
    CHECK(trace_measure(apply(damped, rho), L) ==
          doctest::Approx(std::sqrt(1.0 - gamma) * trace_measure(rho, L)).epsilon(1e-10));

    // occupation-changing local (amplitude damping) leaks out of the sector
    Matrix ad1 = Matrix::Zero(3, 3);
    ad1(0, 0) = 1.0;
    ad1.block(1, 1, 2, 2) = std::sqrt(1.0 - gamma) * Matrix::Identity(2, 2);
    Matrix ad2 = Matrix::Zero(3, 3);
    ad2(0, 1) = std::sqrt(gamma);
    ad2(0, 2) = 0.0;
    Matrix ad3 = Matrix::Zero(3, 3);
    ad3(0, 2) = std::sqrt(gamma);
    const KrausChannel ampDamping = KrausChannel::from_kraus({ad1, ad2, ad3});
    CHECK_THROWS_AS(make_lsp(lift, ampDamping, idLocal), Error);

    // reset ⊗ reset stays on the sector but moves all weight to one path
    auto resetTo = [&](int modes, bool vacuum) {
        std::vector<Matrix> ops;
        for (int col = 0; col < modes + 1; ++col) {
            Matrix k = Matrix::Zero(modes + 1, modes + 1);
            k(vacuum ? 0 : 1, col) = 1.0;
            ops.push_back(k);
        }
        return KrausChannel::from_kraus(ops);
    };
    CHECK_THROWS_WITH_AS(make_lsp(lift, resetTo(2, true), resetTo(2, false)),
                         "compressed product channel transfers path weight", Error);
}

TEST_CASE("random LSP channels never increase norm measures") {
    Rng rng(7);
    for (int c = 0; c < 6; ++c) {
        const Decomposition L = random_bipartite_dims(rng, 2);
        const LiftMap lift = build_lift(L);
        ChannelClassification cls;
        const KrausChannel phi = random_lsp_channel(rng, lift, 3, &cls);
        CHECK(cls.isSP);
        for (int k = 1; k <= std::min(L.dims[0], L.dims[1]); ++k)
            CHECK(monotonicity_harness(phi, L, {MeasureSelector::Kind::KyFan, k}, 40,
                                       rng.split(static_cast<std::uint64_t>(c)))
                      .pass);
        CHECK(monotonicity_harness(phi, L, {MeasureSelector::Kind::SchattenP, 1, 2.5}, 40,
                                   rng.split(50 + static_cast<std::uint64_t>(c)))
                  .pass);
    }
}

TEST_CASE("SP channels may increase small Ky-Fan orders") {
    const int levels = 3;
    const Decomposition L({levels, levels});
    const KrausChannel reset = ground_reset_channel(levels, 0.6);
    CHECK(is_sp(reset, L));

    const DensityOperator probe = initial_state(levels);
    const double before = kyfan_measure(probe, L, 1);
    const double after = kyfan_measure(apply(reset, probe), L, 1);
    CHECK(after > before + 1e-3);

    // ... while the relative-entropy and trace measures still contract
    Rng rng(11);
    CHECK(monotonicity_harness(reset, L, {MeasureSelector::Kind::RelEntropy}, 60, rng.split(1),
                               {probe})
              .pass);
    CHECK(monotonicity_harness(reset, L, {MeasureSelector::Kind::Trace}, 60, rng.split(2), {probe})
              .pass);
}

TEST_CASE("channels breaking block-diagonality admit increase witnesses") {
    Rng rng(13);
    int constructed = 0, witnessed = 0;
    for (int c = 0; c < 20; ++c) {
        const Decomposition L = random_bipartite_dims(rng, 2);
        const KrausChannel phi = random_generic_channel(rng, L.total(), 3);
        if (is_block_preserving(phi, L)) continue;
        ++constructed;
        for (int s = 0; s < 30; ++s) {
            const DensityOperator probe = pinch(random_state(rng, L.total()), L);
            if (a_s(apply(phi, probe), L).value > 1e-9) {
                ++witnessed;
                break;
            }
        }
    }
    CHECK(constructed > 0);
    CHECK(witnessed >= 1);
}

TEST_CASE("trace-norm contraction") {
    Rng rng(17);
    const int dim = 3;
    const Matrix q = rng.ginibre(dim, dim);

    const SubChannel idFam = SubChannel::from_ops({Matrix::Identity(dim, dim)});
    const auto eq = trace_contraction_check(Matrix::Identity(1, 1), idFam, idFam, q);
    CHECK(eq.lhs == doctest::Approx(eq.rhs).epsilon(1e-12));

    const Decomposition L({1, 2});
    const SubChannel projFam = SubChannel::from_ops({range_projector(L, 0), range_projector(L, 1)});
    CHECK(trace_contraction_check(Matrix::Identity(2, 2), projFam, projFam, q).pass);

    for (int s = 0; s < 100; ++s) {
        auto family = [&](int count) {
            Matrix stacked = rng.ginibre(count * dim, dim);
            const double top = singular_values(stacked)(0);
            if (top > 1.0) stacked /= top;
            std::vector<Matrix> ops;
            for (int i = 0; i < count; ++i) ops.push_back(stacked.middleRows(i * dim, dim));
            return SubChannel::from_ops(std::move(ops));
        };
        const SubChannel v = family(2);
        const SubChannel w = family(3);
        Matrix coeff = rng.ginibre(2, 3);
        const double top = singular_values(coeff)(0);
        if (top > 1.0) coeff /= top;
        CHECK(trace_contraction_check(coeff, v, w, rng.ginibre(dim, dim)).pass);
    }

    CHECK_THROWS_AS(trace_contraction_check(2.0 * Matrix::Identity(1, 1), idFam, idFam, q), Error);
    CHECK_THROWS_AS(SubChannel::from_ops({2.0 * Matrix::Identity(dim, dim)}), Error);
}

TEST_CASE("SP block-restricted reconstruction") {
    Rng rng(19);
    const Decomposition L({2, 2});
    const Matrix p1 = range_projector(L, 0);
    const Matrix p2 = range_projector(L, 1);
    for (int c = 0; c < 5; ++c) {
        const KrausChannel phi = random_sp_channel(rng, L, 3);
        for (int s = 0; s < 5; ++s) {
            const Matrix r = rng.density(4);
            const Matrix rebuilt = p1 * phi.apply_matrix(p1 * r * p1) * p1 +
                                   p2 * phi.apply_matrix(p2 * r * p2) * p2 +
                                   p1 * phi.apply_matrix(p1 * r * p2) * p2 +
                                   p2 * phi.apply_matrix(p2 * r * p1) * p1;
            CHECK(max_abs(rebuilt - phi.apply_matrix(r)) < 1e-10);
        }
    }
}
