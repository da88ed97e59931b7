#include "supq/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace supq {

namespace {

struct Suite {
    SuiteResult result;
    explicit Suite(std::string name) { result.suite = std::move(name); }
    void add(const std::string& name, bool pass, int samples, std::string details = "") {
        result.results.push_back({name, pass, samples, std::move(details)});
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

const std::vector<std::vector<int>>& bipartite_dim_menu() {
    static const std::vector<std::vector<int>> menu = {{1, 1}, {2, 1}, {1, 2}, {2, 2},
                                                       {3, 1}, {3, 2}, {2, 3}, {3, 3}};
    return menu;
}

DensityOperator embed_in_block(const Matrix& blockState, const Decomposition& L, int k) {
    Matrix m = Matrix::Zero(L.total(), L.total());
    m.block(L.offset(k), L.offset(k), L.dims[static_cast<std::size_t>(k)],
            L.dims[static_cast<std::size_t>(k)]) = blockState;
    return make_density(m);
}

Matrix projector_range(const Decomposition& L, int k) {
    Matrix p = Matrix::Zero(L.total(), L.total());
    p.block(L.offset(k), L.offset(k), L.dims[static_cast<std::size_t>(k)],
            L.dims[static_cast<std::size_t>(k)]) =
        Matrix::Identity(L.dims[static_cast<std::size_t>(k)], L.dims[static_cast<std::size_t>(k)]);
    return p;
}

}  // namespace

// --------------------------- shared helpers ----------------------------------

Decomposition random_bipartite_dims(Rng& rng, int maxBlockDim) {
    std::vector<std::vector<int>> eligible;
    for (const auto& d : bipartite_dim_menu())
        if (d[0] <= maxBlockDim && d[1] <= maxBlockDim) eligible.push_back(d);
    const auto pick = eligible[static_cast<std::size_t>(rng.uniform() * eligible.size()) % eligible.size()];
    return Decomposition(pick);
}

DensityOperator random_state(Rng& rng, int dim, double identityMix) {
    Matrix m = (1.0 - identityMix) * rng.density(dim) +
               identityMix * Matrix::Identity(dim, dim) / static_cast<double>(dim);
    return make_density(m);
}

Matrix random_block_local_unitary(Rng& rng, const Decomposition& L) {
    Matrix u = Matrix::Zero(L.total(), L.total());
    for (int k = 0; k < L.blocks(); ++k) {
        const int o = L.offset(k);
        const int d = L.dims[static_cast<std::size_t>(k)];
        u.block(o, o, d, d) = rng.unitary(d);
    }
    return u;
}

std::pair<std::vector<int>, Decomposition> product_decomposition(const Decomposition& l1,
                                                                 const Decomposition& l2) {
    const int t2 = l2.total();
    std::vector<int> order;
    std::vector<int> dims;
    for (int i = 0; i < l1.blocks(); ++i) {
        for (int j = 0; j < l2.blocks(); ++j) {
            for (int a = l1.offset(i); a < l1.offset(i) + l1.dims[static_cast<std::size_t>(i)]; ++a)
                for (int b = l2.offset(j); b < l2.offset(j) + l2.dims[static_cast<std::size_t>(j)]; ++b)
                    order.push_back(a * t2 + b);
            dims.push_back(l1.dims[static_cast<std::size_t>(i)] * l2.dims[static_cast<std::size_t>(j)]);
        }
    }
    return {order, Decomposition(dims)};
}

Matrix apply_permutation(const Matrix& m, const std::vector<int>& order) {
    Matrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < order.size(); ++r)
        for (std::size_t c = 0; c < order.size(); ++c)
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(order[r], order[c]);
    return out;
}

KrausChannel random_sp_channel(Rng& rng, const Decomposition& L, int krausPerBlock) {
    if (L.blocks() != 2) fail(Errc::NotBipartite, "SP construction here is bipartite");
    const int n1 = L.dims[0];
    const int n2 = L.dims[1];
    const Matrix qa = detail::qf_retract(rng.ginibre(krausPerBlock * n1, n1));
    const Matrix qb = detail::qf_retract(rng.ginibre(krausPerBlock * n2, n2));
    std::vector<Matrix> kraus;
    for (int i = 0; i < krausPerBlock; ++i) {
        Matrix k = Matrix::Zero(L.total(), L.total());
        k.block(0, 0, n1, n1) = qa.middleRows(i * n1, n1);
        k.block(n1, n1, n2, n2) = qb.middleRows(i * n2, n2);
        kraus.push_back(std::move(k));
    }
    return KrausChannel::from_kraus(std::move(kraus));
}

KrausChannel random_lsp_channel(Rng& rng, const LiftMap& lift, int krausPerFactor,
                                ChannelClassification* cls) {
    auto occupation_preserving_local = [&](int modes) {
        Vector amps(krausPerFactor);
        for (int i = 0; i < krausPerFactor; ++i) amps(i) = rng.cgaussian();
        amps /= amps.norm();
        const Matrix qm = detail::qf_retract(rng.ginibre(krausPerFactor * modes, modes));
        std::vector<Matrix> ops;
        for (int i = 0; i < krausPerFactor; ++i) {
            Matrix a = Matrix::Zero(modes + 1, modes + 1);
            a(0, 0) = amps(i);
            a.block(1, 1, modes, modes) = qm.middleRows(i * modes, modes);
            ops.push_back(std::move(a));
        }
        return KrausChannel::from_kraus(std::move(ops));
    };
    const KrausChannel phi1 = occupation_preserving_local(lift.source.dims[0]);
    const KrausChannel phi2 = occupation_preserving_local(lift.source.dims[1]);
    return make_lsp(lift, phi1, phi2, cls);
}

KrausChannel random_generic_channel(Rng& rng, int dim, int nKraus) {
    const Matrix q = detail::qf_retract(rng.ginibre(nKraus * dim, dim));
    std::vector<Matrix> kraus;
    for (int i = 0; i < nKraus; ++i) kraus.push_back(q.middleRows(i * dim, dim));
    return KrausChannel::from_kraus(std::move(kraus));
}

KrausChannel ground_reset_channel(int levels, double resetWeight) {
    if (resetWeight < 0.0 || resetWeight > 1.0) fail(Errc::InvalidRates, "reset weight in [0,1]");
    const Matrix id2 = Matrix::Identity(2, 2);
    std::vector<Matrix> kraus;
    kraus.push_back(std::sqrt(1.0 - resetWeight) * Matrix::Identity(2 * levels, 2 * levels));
    for (int k = 0; k < levels; ++k) {
        Matrix jump = Matrix::Zero(levels, levels);
        jump(0, k) = 1.0;
        kraus.push_back(std::sqrt(resetWeight) * kron(id2, jump));
    }
    return KrausChannel::from_kraus(std::move(kraus));
}

// --------------------------- entropy / operator-core suite -------------------

SuiteResult verify_entropy(int samples, std::uint64_t seed) {
    Suite suite("entropy");
    Rng rng(seed);

    int pinchBad = 0, gapBad = 0, formBad = 0, svdBad = 0, alignBad = 0;
    double worstGap = 0.0, worstForm = 0.0;

    for (int s = 0; s < samples; ++s) {
        const int blocks = 2 + static_cast<int>(rng.uniform() * 3.0) % 3;
        std::vector<int> dims;
        int total = 0;
        for (int k = 0; k < blocks; ++k) {
            const int d = 1 + static_cast<int>(rng.uniform() * 3.0) % 3;
            dims.push_back(d);
            total += d;
        }
        if (total > 8) {
            dims.assign(static_cast<std::size_t>(blocks), 1);
            total = blocks;
        }
        const Decomposition L(dims);
        const DensityOperator rho = random_state(rng, total);
        const DensityOperator pinched = pinch(rho, L);

        const bool idem = max_abs(pinch(pinched, L).matrix() - pinched.matrix()) <= 1e-12;
        const bool tracePreserved = std::abs(pinched.matrix().trace().real() - 1.0) <= 1e-12;
        const bool positive = eigenvalues(pinched.matrix()).minCoeff() >= -1e-12;
        const bool mixingEnhancing =
            von_neumann_entropy(pinched) >= von_neumann_entropy(rho) - 1e-10;
        if (!(idem && tracePreserved && positive && mixingEnhancing)) ++pinchBad;

        const double gap = std::abs(relative_entropy(rho, pinched) -
                                    (von_neumann_entropy(pinched) - von_neumann_entropy(rho)));
        worstGap = std::max(worstGap, gap);
        if (gap > 1e-9) ++gapBad;

        const BlockForm form = block_form(rho, L);
        const double formErr = max_abs(form.reassemble(L) - rho.matrix());
        worstForm = std::max(worstForm, formErr);
        bool contractive = true;
        for (const auto& [pair, d] : form.offDiag)
            if (singular_values(d).size() > 0 && singular_values(d)(0) > 1.0 + 1e-8)
                contractive = false;
        if (formErr > 1e-8 || !contractive) ++formBad;

        const Matrix psd = rng.density(total);
        RealVector ev = eigenvalues(psd);
        std::sort(ev.data(), ev.data() + ev.size(), std::greater<double>());
        if ((singular_values(psd) - ev).cwiseAbs().maxCoeff() > 1e-10) ++svdBad;
    }

    for (int s = 0; s < std::min(samples, 50); ++s) {
        const Matrix u = rng.unitary(4);
        Matrix d1 = Matrix::Zero(4, 4);
        d1(0, 0) = d1(1, 1) = 1.0;
        const Matrix p1 = u * d1 * u.adjoint();
        const Matrix p2 = Matrix::Identity(4, 4) - p1;
        const DensityOperator rho = random_state(rng, 4);
        const auto [aligned, dims] = align_basis(rho, {p1, p2});
        const double direct =
            entropy_of_spectrum(eigenvalues(p1 * rho.matrix() * p1 + p2 * rho.matrix() * p2)) -
            von_neumann_entropy(rho);
        if (std::abs(a_s(aligned, dims).value - direct) > 1e-9) ++alignBad;
    }

    suite.add("pinch idempotent, trace/positivity preserving, mixing-enhancing", pinchBad == 0,
              samples, pinchBad ? std::to_string(pinchBad) + " violations" : "");
    suite.add("relative entropy to pinched state equals entropy gap", gapBad == 0, samples,
              "worst " + num(worstGap));
    suite.add("block form reassembles with contractive off-diagonal factors", formBad == 0, samples,
              "worst " + num(worstForm));
    suite.add("singular values of PSD matrices equal sorted eigenvalues", svdBad == 0, samples, "");
    suite.add("basis alignment agrees with projector pinching", alignBad == 0, std::min(samples, 50),
              "");
    return suite.result;
}

// --------------------------- axioms suite ------------------------------------

namespace {

struct MeasureUnderTest {
    std::string name;
    double tol;
    std::function<double(const DensityOperator&, const Decomposition&)> eval;
};

std::vector<MeasureUnderTest> closed_form_measures() {
    return {
        {"A_S", 1e-8, [](const DensityOperator& r, const Decomposition& L) { return a_s(r, L).value; }},
        {"A_(1)", 1e-8, [](const DensityOperator& r, const Decomposition& L) { return kyfan_measure(r, L, 1); }},
        {"A_(Tr)", 1e-8, [](const DensityOperator& r, const Decomposition& L) { return trace_measure(r, L); }},
        {"A_schatten:2", 1e-8,
         [](const DensityOperator& r, const Decomposition& L) { return norm_measure(r, L, NormSpec::schatten(2.0)); }},
    };
}

AfOptions axiom_af_options(std::uint64_t seed) {
    AfOptions opts;
    opts.starts = 12;
    opts.maxIters = 1500;
    opts.stallWindow = 100;
    opts.seed = seed;
    return opts;
}

}  // namespace

SuiteResult verify_axioms(int samples, std::uint64_t seed) {
    Suite suite("axioms");
    Rng rng(seed);
    const auto measures = closed_form_measures();
    const AfOptions afOpts = axiom_af_options(seed ^ 0xaf);

    int c1Bad = 0, c2Bad = 0, c3Bad = 0, c4Bad = 0;

    for (int s = 0; s < samples; ++s) {
        // closed-form measures on dims up to [3,3]
        {
            const Decomposition L = random_bipartite_dims(rng, 3);
            const DensityOperator rho = random_state(rng, L.total());
            const DensityOperator pinched = pinch(rho, L);
            const Matrix off = rho.matrix().block(0, L.dims[0], L.dims[0], L.dims[1]);
            const Matrix u = random_block_local_unitary(rng, L);
            const DensityOperator rotated = make_density(u * rho.matrix() * u.adjoint());
            const DensityOperator rho2 = random_state(rng, L.total());
            const double mu = rng.uniform();
            const DensityOperator mixed =
                make_density(mu * rho.matrix() + (1.0 - mu) * rho2.matrix());

            for (const auto& m : measures) {
                const double value = m.eval(rho, L);
                if (value < -1e-10) ++c1Bad;
                if (m.eval(pinched, L) > 1e-8) ++c2Bad;
                if (max_abs(off) > 1e-4 && value <= 1e-12) ++c2Bad;
                if (std::abs(m.eval(rotated, L) - value) > m.tol) ++c3Bad;
                if (m.eval(mixed, L) > mu * value + (1.0 - mu) * m.eval(rho2, L) + m.tol) ++c4Bad;
            }
        }
        // formation measure on small dims (optimizer-valued, tolerance 1e-4)
        {
            const Decomposition L = rng.uniform() < 0.5 ? Decomposition({1, 1}) : Decomposition({2, 1});
            const DensityOperator rho = random_state(rng, L.total());
            const DensityOperator pinched = pinch(rho, L);
            const Matrix off = rho.matrix().block(0, L.dims[0], L.dims[0], L.dims[1]);
            const Matrix u = random_block_local_unitary(rng, L);
            const DensityOperator rho2 = random_state(rng, L.total());
            const double mu = rng.uniform();

            const double value = a_f(rho, L, afOpts).value;
            if (value < -1e-10) ++c1Bad;
            if (a_f(pinched, L, afOpts).value > 1e-8) ++c2Bad;
            if (max_abs(off) > 1e-4 && value <= 1e-12) ++c2Bad;
            if (std::abs(a_f(make_density(u * rho.matrix() * u.adjoint()), L, afOpts).value - value) >
                1e-4)
                ++c3Bad;
            const DensityOperator mixed =
                make_density(mu * rho.matrix() + (1.0 - mu) * rho2.matrix());
            if (a_f(mixed, L, afOpts).value >
                mu * value + (1.0 - mu) * a_f(rho2, L, afOpts).value + 1e-4)
                ++c4Bad;
        }
    }
    suite.add("C1 non-negativity", c1Bad == 0, samples, c1Bad ? std::to_string(c1Bad) + " violations" : "");
    suite.add("C2 zero exactly on block-diagonal states", c2Bad == 0, samples,
              c2Bad ? std::to_string(c2Bad) + " violations" : "");
    suite.add("C3 invariance under block-local unitaries", c3Bad == 0, samples,
              c3Bad ? std::to_string(c3Bad) + " violations" : "");
    suite.add("C4 convexity", c4Bad == 0, samples, c4Bad ? std::to_string(c4Bad) + " violations" : "");

    int addBad = 0, monoBad = 0;
    for (int s = 0; s < samples; ++s) {
        const Decomposition l1 = random_bipartite_dims(rng, 2);
        const Decomposition l2 = random_bipartite_dims(rng, 2);
        const DensityOperator rho = random_state(rng, l1.total());
        const DensityOperator sig = random_state(rng, l2.total());
        const auto [order, prodDims] = product_decomposition(l1, l2);
        const DensityOperator joint =
            make_density(apply_permutation(kron(rho.matrix(), sig.matrix()), order));
        if (std::abs(a_s(joint, prodDims).value - a_s(rho, l1).value - a_s(sig, l2).value) > 1e-8)
            ++addBad;

        const Decomposition base = random_bipartite_dims(rng, 2);
        const int da = 2;
        const DensityOperator full = random_state(rng, base.total() * da);
        const Decomposition extended(
            {base.dims[0] * da, base.dims[1] * da});  // system-major, ancilla fastest
        const DensityOperator reduced =
            make_density(partial_trace(full.matrix(), {base.total(), da}, {0}));
        if (a_s(reduced, base).value > a_s(full, extended).value + 1e-8) ++monoBad;
    }
    suite.add("relative-entropy measure additive on product states", addBad == 0, samples,
              addBad ? std::to_string(addBad) + " violations" : "");
    suite.add("relative-entropy measure monotone under ancilla trace", monoBad == 0, samples,
              monoBad ? std::to_string(monoBad) + " violations" : "");

    int subBad = 0, fmonoBad = 0, boundBad = 0;
    for (int s = 0; s < samples; ++s) {
        const Decomposition qubitDims({1, 1});
        const DensityOperator rho = random_state(rng, 2);
        const DensityOperator sig = random_state(rng, 2);
        const auto [order, prodDims] = product_decomposition(qubitDims, qubitDims);
        const DensityOperator joint =
            make_density(apply_permutation(kron(rho.matrix(), sig.matrix()), order));
        const double lhs = a_f(joint, prodDims, afOpts).value;
        const double rhs = a_f(rho, qubitDims, afOpts).value + a_f(sig, qubitDims, afOpts).value;
        if (lhs > rhs + 1e-4) ++subBad;

        const DensityOperator full = random_state(rng, 4);
        const DensityOperator reduced = make_density(partial_trace(full.matrix(), {2, 2}, {0}));
        if (a_f(reduced, qubitDims, afOpts).value >
            a_f(full, Decomposition({2, 2}), afOpts).value + 1e-4)
            ++fmonoBad;

        if (a_s(rho, qubitDims).value > a_f(rho, qubitDims, afOpts).value + 1e-4) ++boundBad;
    }
    suite.add("formation measure subadditive on product states", subBad == 0, samples,
              subBad ? std::to_string(subBad) + " violations" : "");
    suite.add("formation measure monotone under ancilla trace", fmonoBad == 0, samples,
              fmonoBad ? std::to_string(fmonoBad) + " violations" : "");
    suite.add("relative-entropy measure bounded by formation measure", boundBad == 0, samples,
              boundBad ? std::to_string(boundBad) + " violations" : "");

    int predBad = 0, sharpBad = 0, domBad = 0;
    for (int s = 0; s < samples; ++s) {
        const Decomposition L = random_bipartite_dims(rng, 3);
        const DensityOperator rho = random_state(rng, L.total());
        const double pred = predictability(rho, L);
        const double p1 = rho.matrix().block(0, 0, L.dims[0], L.dims[0]).trace().real();
        const double cap = std::sqrt(std::max(0.0, p1 * (1.0 - p1)));
        for (int k = 1; k <= std::min(L.dims[0], L.dims[1]); ++k) {
            const double ak = kyfan_measure(rho, L, k);
            if (ak > kyfan_bound(rho, L, k) + 1e-9) ++predBad;
            if (ak > cap + 1e-9 || ak > 0.5 + 1e-9) ++predBad;
            if (ak * ak + pred * pred > 1.0 + 1e-9) ++predBad;
        }

        const double sp1 = rng.uniform();
        const int n1 = 1 + static_cast<int>(rng.uniform() * 3.0) % 3;
        const int n2 = 1 + static_cast<int>(rng.uniform() * 3.0) % 3;
        std::vector<double> spec1(static_cast<std::size_t>(n1)), spec2(static_cast<std::size_t>(n2));
        const RealVector w1 = rng.simplex(n1), w2 = rng.simplex(n2);
        for (int i = 0; i < n1; ++i) spec1[static_cast<std::size_t>(i)] = w1(i);
        for (int i = 0; i < n2; ++i) spec2[static_cast<std::size_t>(i)] = w2(i);
        const DensityOperator sharp = sharp_state(sp1, spec1, spec2);
        const Decomposition sharpL({n1, n2});
        for (int k = 1; k <= std::min(n1, n2); ++k)
            if (std::abs(kyfan_measure(sharp, sharpL, k) - kyfan_bound(sharp, sharpL, k)) > 1e-9)
                ++sharpBad;

        // dominated pair by construction: mixture of block-local rotations of sigma
        const DensityOperator sigma = random_state(rng, L.total());
        Matrix dominatedM = Matrix::Zero(L.total(), L.total());
        const RealVector mixW = rng.simplex(3);
        for (int i = 0; i < 3; ++i) {
            const Matrix u = random_block_local_unitary(rng, L);
            dominatedM += mixW(i) * u * sigma.matrix() * u.adjoint();
        }
        const DensityOperator dominated = make_density(dominatedM);
        const auto rep = dominance_check(dominated, sigma, L,
                                         {NormSpec::schatten(1.5), NormSpec::schatten(2.0),
                                          NormSpec::schatten(3.0), NormSpec::trace()});
        if (!rep.kyfanDominated || !rep.allSuppliedDominated) ++domBad;
    }
    suite.add("Ky-Fan bound, sqrt(p1 p2) cap, and predictability trade-off", predBad == 0, samples,
              predBad ? std::to_string(predBad) + " violations" : "");
    suite.add("sharp state attains the Ky-Fan bound at every order", sharpBad == 0, samples,
              sharpBad ? std::to_string(sharpBad) + " violations" : "");
    suite.add("Ky-Fan dominance implies dominance in sampled invariant norms", domBad == 0, samples,
              domBad ? std::to_string(domBad) + " violations" : "");
    return suite.result;
}

// --------------------------- formation suite ---------------------------------

SuiteResult verify_formation(int samples, std::uint64_t seed) {
    Suite suite("formation");
    Rng rng(seed);
    const Decomposition qubitDims({1, 1});
    AfOptions opts;
    opts.seed = seed ^ 0xf0;

    int oracleBad = 0, pureBad = 0, zeroBad = 0, witnessBad = 0, minBad = 0;
    double worstOracle = 0.0;

    const LiftMap lift = build_lift(qubitDims);
    const auto ef = lifted_formation_functional(lift);

    for (int s = 0; s < samples; ++s) {
        const DensityOperator rho = random_state(rng, 2);
        const auto rep = a_f(rho, qubitDims, opts);
        const double oracle = induced_measure(lift, ef, rho);
        worstOracle = std::max(worstOracle, std::abs(rep.value - oracle));
        if (std::abs(rep.value - oracle) > 1e-4) ++oracleBad;

        // pure states have a unique decomposition: value is the block-weight entropy
        const Decomposition L = random_bipartite_dims(rng, 3);
        const Vector psi = rng.state_vector(L.total());
        const DensityOperator pure = make_density(psi * psi.adjoint());
        RealVector weights(L.blocks());
        for (int k = 0; k < L.blocks(); ++k)
            weights(k) = psi.segment(L.offset(k), L.dims[static_cast<std::size_t>(k)]).squaredNorm();
        if (std::abs(a_f(pure, L, opts).value - entropy_of_spectrum(weights)) > 1e-6) ++pureBad;

        const DensityOperator blockDiag = pinch(random_state(rng, L.total()), L);
        const auto zeroRep = a_f(blockDiag, L, opts);
        if (zeroRep.value != 0.0 ||
            max_abs(zeroRep.ensembleWitness->assemble() - blockDiag.matrix()) > 1e-8)
            ++zeroBad;

        // witness consistency: reported value and state reproduce from the ensemble
        const auto& ens = *rep.ensembleWitness;
        double replay = 0.0;
        for (std::size_t l = 0; l < ens.vectors.size(); ++l) {
            RealVector bw(qubitDims.blocks());
            for (int k = 0; k < qubitDims.blocks(); ++k)
                bw(k) = ens.vectors[l]
                            .segment(qubitDims.offset(k), qubitDims.dims[static_cast<std::size_t>(k)])
                            .squaredNorm();
            replay += ens.weights(static_cast<Eigen::Index>(l)) * entropy_of_spectrum(bw);
        }
        if (std::abs(replay - rep.value) > 1e-9 ||
            max_abs(ens.assemble() - rho.matrix()) > 1e-8)
            ++witnessBad;

        // sampled block-diagonal states never beat the pinched state
        const double sampled = a_s_min_check(rho, qubitDims, 20, rng.split(static_cast<std::uint64_t>(s)));
        if (std::abs(sampled - a_s(rho, qubitDims).value) > 1e-9) ++minBad;
    }

    suite.add("optimizer matches the two-qubit lift oracle", oracleBad == 0, samples,
              "worst " + num(worstOracle));
    suite.add("pure-state value equals the block-weight entropy", pureBad == 0, samples, "");
    suite.add("block-diagonal states report zero with a valid ensemble", zeroBad == 0, samples, "");
    suite.add("witness reproduces the reported value and the state", witnessBad == 0, samples, "");
    suite.add("sampled block-diagonal states never beat the pinched state", minBad == 0, samples, "");
    return suite.result;
}

// --------------------------- second-quantization suite -----------------------

SuiteResult verify_secondq(int samples, std::uint64_t seed) {
    Suite suite("secondq");
    Rng rng(seed);

    int isoBad = 0, specBad = 0, prodBad = 0, mixBad = 0, basisBad = 0, pinchBad = 0;
    int prop5Bad = 0, prop6Bad = 0, candBad = 0, wrongBad = 0, esBad = 0, efBad = 0;
    double worstProp5 = 0.0;

    for (int s = 0; s < samples; ++s) {
        const Decomposition L = random_bipartite_dims(rng, 3);
        const LiftMap lift = build_lift(L);
        const Eigen::Index tdim = lift.targetDim();

        // isometry onto the single-particle sector
        Matrix pSingle = Matrix::Zero(tdim, tdim);
        for (const auto& set : lift.single_particle_sets())
            for (int idx : set) pSingle(idx, idx) = 1.0;
        if (max_abs(lift.isometry.adjoint() * lift.isometry -
                    Matrix::Identity(L.total(), L.total())) > 1e-12 ||
            max_abs(lift.isometry * lift.isometry.adjoint() - pSingle) > 1e-12)
            ++isoBad;

        const DensityOperator rho = random_state(rng, L.total());
        const DensityOperator lifted = lift_state(lift, rho);
        if (std::abs(von_neumann_entropy(lifted) - von_neumann_entropy(rho)) > 1e-10) ++specBad;

        // localized state -> K-fold product
        const int j = rng.uniform() < 0.5 ? 0 : 1;
        const DensityOperator localized =
            embed_in_block(rng.density(L.dims[static_cast<std::size_t>(j)]), L, j);
        const Matrix liftedLoc = lift_state(lift, localized).matrix();
        Matrix productOfMarginals = Matrix::Ones(1, 1);
        for (std::size_t f = 0; f < lift.targetDims.size(); ++f)
            productOfMarginals =
                kron(productOfMarginals,
                     partial_trace(liftedLoc, lift.targetDims, {static_cast<int>(f)}));
        if ((liftedLoc - productOfMarginals).norm() > 1e-8) ++prodBad;

        // pinch-invariant state -> convex combination of K-fold products
        const DensityOperator blockDiag = pinch(rho, L);
        Matrix recombined = Matrix::Zero(tdim, tdim);
        bool membersProduct = true;
        for (int k = 0; k < L.blocks(); ++k) {
            const int o = L.offset(k);
            const int d = L.dims[static_cast<std::size_t>(k)];
            Eigen::SelfAdjointEigenSolver<Matrix> solver(blockDiag.matrix().block(o, o, d, d));
            for (Eigen::Index i = 0; i < d; ++i) {
                const double w = solver.eigenvalues()(i);
                if (w <= 1e-14) continue;
                Vector v = Vector::Zero(L.total());
                v.segment(o, d) = solver.eigenvectors().col(i);
                const Vector liftedV = lift.isometry * v;
                const Matrix member = liftedV * liftedV.adjoint();
                recombined += w * member;
                for (std::size_t f = 0; f < lift.targetDims.size(); ++f) {
                    const Matrix marg = partial_trace(member, lift.targetDims, {static_cast<int>(f)});
                    if ((marg * marg).trace().real() < 1.0 - 1e-10) membersProduct = false;
                }
            }
        }
        if (!membersProduct ||
            max_abs(recombined - lift_state(lift, blockDiag).matrix()) > 1e-8)
            ++mixBad;

        // basis independence of induced measures
        const Matrix u = random_block_local_unitary(rng, L);
        LiftMap rotated(lift.source, lift.targetDims, lift.isometry * u);
        const auto eRel = lifted_relent_functional(lift);
        const auto eRelRot = lifted_relent_functional(rotated);
        if (std::abs(induced_measure(lift, eRel, rho) - induced_measure(rotated, eRelRot, rho)) >
            1e-9)
            ++basisBad;

        // pinch commutes with the lift
        auto sets = lift.single_particle_sets();
        const Matrix lhs = pinch_sets(lifted.matrix(), sets);
        const Matrix rhs =
            lift.isometry * pinch_matrix(rho.matrix(), L) * lift.isometry.adjoint();
        if (max_abs(lhs - rhs) > 1e-12) ++pinchBad;

        // induced relative-entropy measure
        const double induced = induced_measure(lift, eRel, rho);
        worstProp5 = std::max(worstProp5, std::abs(induced - a_s(rho, L).value));
        if (std::abs(induced - a_s(rho, L).value) > 1e-9) ++prop5Bad;

        // structured minimizer machinery on a well-conditioned lifted state
        const DensityOperator conditioned = random_state(rng, L.total(), 0.2);
        const DensityOperator sigma = lift_state(lift, conditioned);
        const BipartiteSplit split = lifted_split(lift);
        const PairedBlocks pairs = lifted_pair_blocks(lift);
        const DensityOperator cand = candidate_min_separable(sigma, split, pairs);
        const auto firstOrder = first_order_min_check(sigma, cand, split, 40,
                                                      rng.split(1000 + static_cast<std::uint64_t>(s)));
        if (!firstOrder.pass) ++candBad;

        const auto es = es_decomposition_identity(sigma, split, pairs);
        if (!es.pass || std::abs(es.blockRelEntropy - a_s(conditioned, L).value) > 1e-9) ++esBad;
    }

    // formation induced on the qubit lift + structured formation checks (small count)
    const int few = std::max(4, samples / 8);
    AfOptions opts;
    opts.seed = seed ^ 0x6e;
    {
        const Decomposition qubitDims({1, 1});
        const LiftMap lift = build_lift(qubitDims);
        const auto efFun = lifted_formation_functional(lift);
        for (int s = 0; s < few; ++s) {
            const DensityOperator rho = random_state(rng, 2);
            if (std::abs(induced_measure(lift, efFun, rho) - a_f(rho, qubitDims, opts).value) > 1e-4)
                ++prop6Bad;

            const DensityOperator sigma = lift_state(lift, rho);
            const auto rep =
                ef_superadditivity_check(sigma, lifted_split(lift), lifted_pair_blocks(lift), opts);
            if (!rep.inequalityHolds || !rep.equalityApplicable || !rep.equalityHolds) ++efBad;

            // corrupted candidate: the maximally mixed state is separable but not
            // pinched; the certificate must detect it
            const Matrix flat = Matrix::Identity(4, 4) / 4.0;
            const auto wrong = first_order_min_check(sigma, make_density(flat), lifted_split(lift),
                                                     60, rng.split(5000 + static_cast<std::uint64_t>(s)));
            if (wrong.nonNegativeViolations == 0) ++wrongBad;
        }
        // pure bipartite states in Schmidt form: formation equals block entropy
        for (int s = 0; s < few; ++s) {
            const int d = 2 + static_cast<int>(rng.uniform() * 2.0) % 2;
            const RealVector schmidt = rng.simplex(d);
            Vector psi = Vector::Zero(d * d);
            for (int k = 0; k < d; ++k) psi(k * d + k) = std::sqrt(schmidt(k));
            const DensityOperator pure = make_density(psi * psi.adjoint());
            PairedBlocks pairs{Decomposition(std::vector<int>(static_cast<std::size_t>(d), 1)),
                               Decomposition(std::vector<int>(static_cast<std::size_t>(d), 1)),
                               {}};
            for (int k = 0; k < d; ++k) pairs.pairs.push_back({k, k});
            const auto rep = ef_superadditivity_check(pure, BipartiteSplit{d, d}, pairs, opts);
            if (!rep.inequalityHolds || !rep.equalityHolds ||
                std::abs(rep.ef - entropy_of_spectrum(schmidt)) > 1e-9)
                ++efBad;
        }
    }

    suite.add("lift is an isometry onto the single-particle sector", isoBad == 0, samples, "");
    suite.add("lifting preserves the spectrum", specBad == 0, samples, "");
    suite.add("localized states lift to products", prodBad == 0, samples, "");
    suite.add("block-diagonal states lift to mixtures of products", mixBad == 0, samples, "");
    suite.add("induced measures ignore the basis choice inside subspaces", basisBad == 0, samples, "");
    suite.add("pinch commutes with the lift", pinchBad == 0, samples, "");
    suite.add("relative-entropy measure is induced by its entanglement analogue", prop5Bad == 0,
              samples, "worst " + num(worstProp5));
    suite.add("formation measure is induced on the qubit lift", prop6Bad == 0, few, "");
    suite.add("pinched candidates pass the first-order minimizer certificate", candBad == 0, samples,
              candBad ? std::to_string(candBad) + " violations" : "");
    suite.add("corrupted candidates are rejected by the certificate", wrongBad == 0, few, "");
    suite.add("block relative entropy equals the candidate distance", esBad == 0, samples, "");
    suite.add("formation decomposition inequality and one-dim-pair equality", efBad == 0, 2 * few, "");
    return suite.result;
}

// --------------------------- channels suite ----------------------------------

namespace {

// off-diagonal factors V, W of an LSP channel read off its local Kraus lists;
// requires occupation-block-diagonal locals (the form random_lsp_channel builds)
std::pair<Matrix, Matrix> fit_lsp_offdiagonal(const KrausChannel& phi1, const KrausChannel& phi2) {
    const int m1 = static_cast<int>(phi1.dim()) - 1;
    const int m2 = static_cast<int>(phi2.dim()) - 1;
    Matrix v = Matrix::Zero(m1, m1);
    for (const auto& a : phi1.kraus) v += std::conj(a(0, 0)) * a.block(1, 1, m1, m1);
    Matrix w = Matrix::Zero(m2, m2);
    for (const auto& b : phi2.kraus) w += std::conj(b(0, 0)) * b.block(1, 1, m2, m2);
    return {v, w};
}

}  // namespace

SuiteResult verify_channels(int samples, std::uint64_t seed) {
    Suite suite("channels");
    Rng rng(seed);

    const int channels = std::clamp(samples / 10, 4, 20);
    const int statesPerChannel = std::clamp(samples / 2, 20, 100);

    int spBad = 0, spMonoBad = 0, blockFormBad = 0;
    for (int c = 0; c < channels; ++c) {
        const Decomposition L = random_bipartite_dims(rng, 3);
        const KrausChannel phi = random_sp_channel(rng, L, 2 + c % 3);
        if (!is_sp(phi, L) || !is_block_preserving(phi, L)) ++spBad;

        const auto relRep = monotonicity_harness(phi, L, {MeasureSelector::Kind::RelEntropy},
                                                 statesPerChannel, rng.split(10 + static_cast<std::uint64_t>(c)));
        const auto trRep = monotonicity_harness(phi, L, {MeasureSelector::Kind::Trace},
                                                statesPerChannel, rng.split(40 + static_cast<std::uint64_t>(c)));
        if (!relRep.pass || !trRep.pass) ++spMonoBad;

        // block-restricted reconstruction of SP channels
        for (int s = 0; s < 5; ++s) {
            const DensityOperator rho = random_state(rng, L.total());
            const Matrix p1 = projector_range(L, 0);
            const Matrix p2 = projector_range(L, 1);
            const Matrix& r = rho.matrix();
            const Matrix rebuilt = p1 * phi.apply_matrix(p1 * r * p1) * p1 +
                                   p2 * phi.apply_matrix(p2 * r * p2) * p2 +
                                   p1 * phi.apply_matrix(p1 * r * p2) * p2 +
                                   p2 * phi.apply_matrix(p2 * r * p1) * p1;
            if (max_abs(rebuilt - phi.apply_matrix(r)) > 1e-10) ++blockFormBad;
        }
    }
    suite.add("random SP channels classify and preserve block-diagonality", spBad == 0, channels, "");
    suite.add("SP channels never increase the relative-entropy and trace measures", spMonoBad == 0,
              channels * statesPerChannel, "");
    suite.add("SP channels reconstruct from their block-restricted pieces", blockFormBad == 0,
              channels * 5, "");

    {
        const Decomposition L({2, 2});
        Matrix swap = Matrix::Zero(4, 4);
        swap.block(0, 2, 2, 2) = Matrix::Identity(2, 2);
        swap.block(2, 0, 2, 2) = Matrix::Identity(2, 2);
        const KrausChannel blockSwap = KrausChannel::from_kraus({swap});
        suite.add("block swap preserves block-diagonality but is not SP",
                  is_block_preserving(blockSwap, L) && !is_sp(blockSwap, L), 1, "");
    }

    int lspBad = 0, lspMonoBad = 0, lspFitBad = 0;
    for (int c = 0; c < channels; ++c) {
        const Decomposition L = random_bipartite_dims(rng, 2);
        const LiftMap lift = build_lift(L);
        // rebuild the locals so the fit below can read the certificate structure
        Rng localRng(rng.split(300 + static_cast<std::uint64_t>(c)));
        ChannelClassification cls;
        const KrausChannel phi = random_lsp_channel(localRng, lift, 3, &cls);
        if (!cls.isSP || !cls.lspCertificate.has_value()) ++lspBad;

        bool monoOk = true;
        for (int k = 1; k <= std::min(L.dims[0], L.dims[1]); ++k) {
            const auto rep = monotonicity_harness(phi, L, {MeasureSelector::Kind::KyFan, k},
                                                  statesPerChannel, rng.split(70 + static_cast<std::uint64_t>(c)));
            monoOk = monoOk && rep.pass;
        }
        for (double p : {1.5, 3.0}) {
            const auto rep =
                monotonicity_harness(phi, L, {MeasureSelector::Kind::SchattenP, 1, p},
                                     statesPerChannel, rng.split(90 + static_cast<std::uint64_t>(c)));
            monoOk = monoOk && rep.pass;
        }
        if (!monoOk) ++lspMonoBad;

        const auto [v, w] = fit_lsp_offdiagonal(cls.lspCertificate->first, cls.lspCertificate->second);
        if (singular_values(v)(0) > 1.0 + 1e-9 || singular_values(w)(0) > 1.0 + 1e-9) ++lspFitBad;
        for (int s = 0; s < 5; ++s) {
            const DensityOperator rho = random_state(rng, L.total());
            const Matrix out = phi.apply_matrix(rho.matrix());
            const Matrix offOut = out.block(0, L.dims[0], L.dims[0], L.dims[1]);
            const Matrix offIn = rho.matrix().block(0, L.dims[0], L.dims[0], L.dims[1]);
            if (max_abs(offOut - v * offIn * w.adjoint()) > 1e-10) ++lspFitBad;
        }
    }
    suite.add("lifted product channels certify as LSP", lspBad == 0, channels, "");
    suite.add("LSP channels never increase any sampled unitarily invariant measure",
              lspMonoBad == 0, channels, "");
    suite.add("LSP off-diagonal action is a contractive sandwich", lspFitBad == 0, channels, "");

    {
        const int levels = 3;
        const KrausChannel reset = ground_reset_channel(levels, 0.6);
        const Decomposition L({levels, levels});
        const auto search = monotonicity_harness(reset, L, {MeasureSelector::Kind::KyFan, 1}, 0, 1,
                                                 {initial_state(levels)});
        const auto relRep =
            monotonicity_harness(reset, L, {MeasureSelector::Kind::RelEntropy}, 50, rng.split(777));
        const auto trRep =
            monotonicity_harness(reset, L, {MeasureSelector::Kind::Trace}, 50, rng.split(778));
        suite.add("path-coherent relaxation is SP yet raises the smallest Ky-Fan measure",
                  is_sp(reset, L) && search.maxIncrease > 1e-3 && relRep.pass && trRep.pass, 101,
                  "increase " + num(search.maxIncrease));
    }

    {
        int witnesses = 0;
        int constructed = 0;
        for (int c = 0; c < 20; ++c) {
            const Decomposition L = random_bipartite_dims(rng, 2);
            const KrausChannel phi = random_generic_channel(rng, L.total(), 3);
            if (is_block_preserving(phi, L)) continue;
            ++constructed;
            bool found = false;
            for (int s = 0; s < 30 && !found; ++s) {
                const DensityOperator probe = pinch(random_state(rng, L.total()), L);
                found = a_s(apply(phi, probe), L).value > 1e-9;
            }
            if (found) ++witnesses;
        }
        suite.add("non-block-preserving channels admit relative-entropy increase witnesses",
                  constructed > 0 && witnesses >= 1, constructed,
                  std::to_string(witnesses) + "/" + std::to_string(constructed) + " witnessed");
    }

    {
        int contractionBad = 0;
        const int trials = std::max(samples, 100);
        for (int s = 0; s < trials; ++s) {
            const int dim = 2 + static_cast<int>(rng.uniform() * 3.0) % 3;
            const int nv = 1 + static_cast<int>(rng.uniform() * 3.0) % 3;
            const int nw = 1 + static_cast<int>(rng.uniform() * 3.0) % 3;
            auto contraction_family = [&](int count) {
                std::vector<Matrix> ops;
                Matrix stacked = rng.ginibre(count * dim, dim);
                const double norm = singular_values(stacked)(0);
                if (norm > 1.0) stacked /= norm;
                for (int i = 0; i < count; ++i) ops.push_back(stacked.middleRows(i * dim, dim));
                return SubChannel::from_ops(std::move(ops));
            };
            const SubChannel v = contraction_family(nv);
            const SubChannel w = contraction_family(nw);
            Matrix coeff = rng.ginibre(nv, nw);
            const double cNorm = singular_values(coeff)(0);
            if (cNorm > 1.0) coeff /= cNorm;
            const Matrix q = rng.ginibre(dim, dim);
            if (!trace_contraction_check(coeff, v, w, q).pass) ++contractionBad;
        }
        // identity instance attains equality
        const int dim = 3;
        const SubChannel idFam = SubChannel::from_ops({Matrix::Identity(dim, dim)});
        const Matrix q = rng.ginibre(dim, dim);
        const auto eq = trace_contraction_check(Matrix::Identity(1, 1), idFam, idFam, q);
        // pinching projector families contract
        const Decomposition L({1, 2});
        const SubChannel projFam =
            SubChannel::from_ops({projector_range(L, 0), projector_range(L, 1)});
        const auto pinchRep = trace_contraction_check(Matrix::Identity(2, 2), projFam, projFam, q);
        suite.add("trace-norm contraction for coefficient-mixed sandwiches",
                  contractionBad == 0 && std::abs(eq.lhs - eq.rhs) <= 1e-9 && pinchRep.pass,
                  trials + 2, contractionBad ? std::to_string(contractionBad) + " violations" : "");
    }
    return suite.result;
}

// --------------------------- dynamics suite ----------------------------------

SuiteResult verify_dynamics(int samples, std::uint64_t seed) {
    Suite suite("dynamics");
    Rng rng(seed);
    const std::vector<double> grid = {0.0, 0.25, 0.5, 1.0, 2.0, 5.0};

    {
        double worst = 0.0, worstTr = 0.0, worstLocal = 0.0;
        for (int n : {2, 3}) {
            const auto f1 = run_timeseries(Scenario::simple(ScenarioKind::NonlocalF1, n, 1.0), grid);
            for (std::size_t r = 0; r < grid.size(); ++r) {
                for (int k = 1; k <= n; ++k)
                    worst = std::max(worst, std::abs(f1.kyfan[r][static_cast<std::size_t>(k - 1)] -
                                                     analytic_nonlocal(n, 1.0, grid[r], k)));
                worstTr = std::max(worstTr,
                                   std::abs(f1.kyfan[r][static_cast<std::size_t>(n - 1)] - 0.5));
            }
            const auto f2 = run_timeseries(Scenario::simple(ScenarioKind::LocalF2, n, 1.0), grid);
            for (std::size_t r = 0; r < grid.size(); ++r)
                for (int k = 1; k <= n; ++k)
                    worstLocal = std::max(worstLocal,
                                          std::abs(f2.kyfan[r][static_cast<std::size_t>(k - 1)] -
                                                   analytic_local(n, 1.0, grid[r], k)));
        }
        suite.add("uniform nonlocal model matches its closed form", worst <= 1e-7, 2,
                  "worst " + num(worst));
        suite.add("trace measure constant at 1/2 for the nonlocal model", worstTr <= 1e-7, 2,
                  "worst " + num(worstTr));
        suite.add("uniform local model matches its closed form", worstLocal <= 1e-7, 2,
                  "worst " + num(worstLocal));
    }

    {
        // superoperator vectorization against the direct action
        int liouBad = 0;
        for (int s = 0; s < std::min(samples, 25); ++s) {
            const int dim = 2 + static_cast<int>(rng.uniform() * 4.0) % 4;
            Matrix h = rng.ginibre(dim, dim);
            h = 0.5 * (h + h.adjoint()).eval();
            const LindbladGenerator gen =
                LindbladGenerator::make(h, {rng.ginibre(dim, dim), rng.ginibre(dim, dim)});
            const Matrix liou = liouvillian(gen);
            const DensityOperator rho = random_state(rng, dim);
            const Vector vec = Eigen::Map<const Vector>(rho.matrix().data(), dim * dim);
            const Vector out = liou * vec;
            const Matrix direct = lindblad_action(gen, rho.matrix());
            if (max_abs(Eigen::Map<const Matrix>(out.data(), dim, dim) - direct) > 1e-12) ++liouBad;
        }
        suite.add("superoperator matches the direct master-equation action", liouBad == 0,
                  std::min(samples, 25), "");
    }

    {
        // simple nonlocal model, N = 2: the path-off-diagonal block obeys
        // dB/dt = g Tr(B)|e1><e1| - g B
        const LindbladGenerator gen = build_scenario(Scenario::simple(ScenarioKind::NonlocalF1, 2, 1.3));
        int reductionBad = 0;
        for (int s = 0; s < 10; ++s) {
            const DensityOperator rho = random_state(rng, 4);
            const Matrix f = lindblad_action(gen, rho.matrix());
            const Matrix b = rho.matrix().block(0, 2, 2, 2);
            Matrix expected = -1.3 * b;
            expected(0, 0) += 1.3 * b.trace();
            if (max_abs(f.block(0, 2, 2, 2) - expected) > 1e-12) ++reductionBad;
        }
        suite.add("nonlocal generator reduces to the closed block equation", reductionBad == 0, 10, "");
    }

    {
        // exponential vs RK4 integrator on fixed and randomized scenarios
        double worst = 0.0;
        const auto genSimple = build_scenario(Scenario::simple(ScenarioKind::NonlocalF1, 2, 1.0));
        const DensityOperator r0 = initial_state(2);
        worst = std::max(worst, max_abs(evolve(genSimple, r0, 1.0).matrix() -
                                        evolve_rk4(genSimple, r0, 1.0, 1e-3).matrix()));
        const auto genRand = build_scenario(Scenario::randomized(ScenarioKind::Mixture, 3, seed ^ 0xd));
        const DensityOperator r1 = initial_state(3);
        worst = std::max(worst, max_abs(evolve(genRand, r1, 0.8).matrix() -
                                        evolve_rk4(genRand, r1, 0.8, 5e-4).matrix()));
        suite.add("superoperator exponential agrees with RK4 cross-check", worst <= 1e-7, 2,
                  "worst " + num(worst));
    }

    {
        int weightBad = 0, monoBad = 0, localMonoBad = 0;
        for (int s = 0; s < std::min(samples, 10); ++s) {
            const auto scen = Scenario::randomized(ScenarioKind::NonlocalF1, 3,
                                                   seed + static_cast<std::uint64_t>(s));
            const auto ts = run_timeseries(scen, grid);
            const auto gen = build_scenario(scen);
            DensityOperator rho = initial_state(3);
            for (double t : grid) {
                const DensityOperator at = evolve(gen, initial_state(3), t);
                const double p1 = at.matrix().block(0, 0, 3, 3).trace().real();
                if (std::abs(p1 - 0.5) > 1e-9) ++weightBad;
            }
            for (std::size_t r = 1; r < grid.size(); ++r) {
                if (ts.relEntropy[r] > ts.relEntropy[r - 1] + 1e-8) ++monoBad;
                if (ts.kyfan[r][2] > ts.kyfan[r - 1][2] + 1e-8) ++monoBad;
            }

            const auto scen2 = Scenario::randomized(ScenarioKind::LocalF2, 3,
                                                    seed + 100 + static_cast<std::uint64_t>(s));
            const auto ts2 = run_timeseries(scen2, grid);
            for (std::size_t r = 1; r < grid.size(); ++r)
                for (int k = 0; k < 3; ++k)
                    if (ts2.kyfan[r][static_cast<std::size_t>(k)] >
                        ts2.kyfan[r - 1][static_cast<std::size_t>(k)] + 1e-8)
                        ++localMonoBad;
        }
        suite.add("path weights conserved for path-identical jumps", weightBad == 0,
                  std::min(samples, 10) * static_cast<int>(grid.size()), "");
        suite.add("relative-entropy and trace measures decay under nonlocal relaxation",
                  monoBad == 0, std::min(samples, 10), "");
        suite.add("all Ky-Fan measures decay under local relaxation", localMonoBad == 0,
                  std::min(samples, 10), "");
    }

    {
        const double tEnd = 12.0;
        const std::vector<double> longGrid = {0.0, tEnd};
        const auto f1 = run_timeseries(Scenario::simple(ScenarioKind::NonlocalF1, 3, 1.0), longGrid);
        const auto f2 = run_timeseries(Scenario::simple(ScenarioKind::LocalF2, 3, 1.0), longGrid);
        bool ok = true;
        for (int k = 0; k < 3; ++k) {
            ok = ok && f1.kyfan[1][static_cast<std::size_t>(k)] >= 0.49;
            ok = ok && f2.kyfan[1][static_cast<std::size_t>(k)] <= 0.01;
        }
        suite.add("long-time limits: nonlocal saturates 1/2, local vanishes", ok, 2, "");
    }

    {
        int seedsWithIncrease = 0;
        std::vector<double> fineGrid;
        for (int i = 0; i <= 40; ++i) fineGrid.push_back(0.25 * i);
        for (int s = 0; s < 5; ++s) {
            auto scen = Scenario::randomized(ScenarioKind::Mixture, 3, seed + 11 * static_cast<std::uint64_t>(s));
            const auto ts = run_timeseries(scen, fineGrid);
            for (int k = 0; k < 2; ++k) {
                double maxVal = 0.0;
                for (std::size_t r = 0; r < fineGrid.size(); ++r)
                    maxVal = std::max(maxVal, ts.kyfan[r][static_cast<std::size_t>(k)]);
                if (maxVal > ts.kyfan[0][static_cast<std::size_t>(k)] + 1e-3) {
                    ++seedsWithIncrease;
                    break;
                }
            }
        }
        suite.add("mixture trajectories witness non-LSP behaviour", seedsWithIncrease >= 1, 5,
                  std::to_string(seedsWithIncrease) + "/5 seeds");
    }
    return suite.result;
}

// --------------------------- interferometer suite ----------------------------

SuiteResult verify_interferometer(int samples, std::uint64_t seed) {
    Suite suite("interferometer");
    Rng rng(seed);

    int optBad = 0, outcomeBad = 0, monoBad = 0, affineBad = 0, traceBad = 0;
    for (int s = 0; s < samples; ++s) {
        const int n = 1 + static_cast<int>(rng.uniform() * 4.0) % 4;
        const Decomposition L({n, n});
        const DensityOperator rho = random_state(rng, 2 * n);

        double previous = 0.0;
        for (int k = 1; k <= n; ++k) {
            const auto [u, v, value] = optimal_uv(rho, k);
            if (std::abs(value - kyfan_measure(rho, L, k)) > 1e-10) ++optBad;
            Matrix filter = Matrix::Zero(n, n);
            filter.topLeftCorner(k, k) = Matrix::Identity(k, k);
            const auto outcome = run_protocol(rho, u, v, filter);
            if (std::abs(outcome.p1 - outcome.p2 - 2.0 * value) > 1e-10) ++outcomeBad;
            if (std::abs(outcome.p1 - (outcome.q1 + outcome.q2 + outcome.r)) > 1e-12 ||
                std::abs(outcome.p2 - (outcome.q1 + outcome.q2 - outcome.r)) > 1e-12 ||
                outcome.p1 + outcome.p2 > 1.0 + 1e-12)
                ++outcomeBad;
            if (value < previous - 1e-12) ++monoBad;
            previous = value;
        }

        // affinity in the state
        const DensityOperator sigma = random_state(rng, 2 * n);
        const double mu = rng.uniform();
        const DensityOperator mixed = make_density(mu * rho.matrix() + (1.0 - mu) * sigma.matrix());
        const Matrix u = rng.unitary(n);
        const Matrix v = rng.unitary(n);
        Matrix filter = Matrix::Zero(n, n);
        filter.topLeftCorner(std::max(1, n / 2), std::max(1, n / 2)) =
            Matrix::Identity(std::max(1, n / 2), std::max(1, n / 2));
        const auto a = run_protocol(rho, u, v, filter);
        const auto b = run_protocol(sigma, u, v, filter);
        const auto m = run_protocol(mixed, u, v, filter);
        if (std::abs(m.p1 - mu * a.p1 - (1.0 - mu) * b.p1) > 1e-12 ||
            std::abs(m.p2 - mu * a.p2 - (1.0 - mu) * b.p2) > 1e-12)
            ++affineBad;

        // single-unitary protocol attains 1/2 + trace measure
        const auto [uOpt, pMax] = optimal_single_u(rho);
        if (std::abs(pMax - 0.5 - trace_measure(rho, L)) > 1e-12 ||
            std::abs(single_u_probability(rho, uOpt) - pMax) > 1e-12)
            ++traceBad;
        const DensityOperator pinched = pinch(rho, L);
        const auto quiet = run_protocol(pinched, Matrix::Identity(n, n), Matrix::Identity(n, n),
                                        Matrix::Identity(n, n));
        if (std::abs(quiet.r) > 1e-12 || std::abs(quiet.p1 - quiet.p2) > 1e-12) ++traceBad;
    }
    suite.add("optimal unitaries attain the Ky-Fan measures", optBad == 0, samples, "");
    suite.add("protocol outcomes decompose and stay subnormalized", outcomeBad == 0, samples, "");
    suite.add("attainable difference grows with the filter rank", monoBad == 0, samples, "");
    suite.add("protocol outcomes are affine in the state", affineBad == 0, samples, "");
    suite.add("single-unitary protocol realizes the trace measure", traceBad == 0, samples, "");

    {
        int stochBad = 0;
        const int runs = std::clamp(samples / 10, 3, 20);
        for (int s = 0; s < runs; ++s) {
            const int n = 1 + static_cast<int>(rng.uniform() * 4.0) % 4;
            const DensityOperator rho = random_state(rng, 2 * n);
            const int k = 1 + static_cast<int>(rng.uniform() * n) % n;
            const auto [u, v, value] = stochastic_maximize(rho, k, 2000, rng.split(static_cast<std::uint64_t>(s)));
            const double target = kyfan_measure(rho, Decomposition({n, n}), k);
            if (value > target + 1e-12 || value < target - 1e-3) ++stochBad;
        }
        suite.add("stochastic search reaches the optimum within 1e-3", stochBad == 0, runs, "");
    }
    return suite.result;
}

std::vector<SuiteResult> verify_all(int samples, std::uint64_t seed) {
    return {verify_entropy(samples, seed),  verify_axioms(samples, seed),
            verify_formation(samples, seed), verify_secondq(samples, seed),
            verify_channels(samples, seed),  verify_dynamics(samples, seed),
            verify_interferometer(samples, seed)};
}

}  // namespace supq
