#include "supq/secondq.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <set>

namespace supq {

namespace {

Matrix restrict_to(const Matrix& m, const std::vector<int>& indices) {
    Matrix out(static_cast<Eigen::Index>(indices.size()), static_cast<Eigen::Index>(indices.size()));
    for (std::size_t r = 0; r < indices.size(); ++r)
        for (std::size_t c = 0; c < indices.size(); ++c)
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                m(indices[r], indices[c]);
    return out;
}

void validate_pairs(const PairedBlocks& pairL, const BipartiteSplit& split) {
    if (pairL.d1.total() != split.dimA || pairL.d2.total() != split.dimB)
        fail(Errc::DimensionMismatch, "paired decompositions do not match the split");
    if (pairL.pairs.size() < 2) fail(Errc::UnsupportedStructure, "need at least two pair blocks");
    std::set<int> firsts, seconds;
    for (const auto& [i, j] : pairL.pairs) {
        pairL.d1.check_index(i);
        pairL.d2.check_index(j);
        if (!firsts.insert(i).second || !seconds.insert(j).second)
            fail(Errc::UnsupportedStructure, "pair blocks must use distinct subspaces per factor");
    }
}

double support_leak(const Matrix& m, const std::vector<std::vector<int>>& sets, Eigen::Index n) {
    std::vector<char> inside(static_cast<std::size_t>(n), 0);
    for (const auto& s : sets)
        for (int idx : s) inside[static_cast<std::size_t>(idx)] = 1;
    double leak = 0.0;
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
            if (!inside[static_cast<std::size_t>(r)] || !inside[static_cast<std::size_t>(c)])
                leak = std::max(leak, std::abs(m(r, c)));
    return leak;
}

double binary_entropy(double x) {
    double h = 0.0;
    if (x > 0.0) h -= x * std::log(x);
    if (1.0 - x > 0.0) h -= (1.0 - x) * std::log(1.0 - x);
    return h;
}

double pure_block_entanglement(const Matrix& state, int dimA, int dimB) {
    const Matrix marginal = partial_trace(state, {dimA, dimB}, {0});
    return entropy_of_spectrum(eigenvalues(marginal));
}

bool is_pure(const Matrix& rho) { return (rho * rho).trace().real() > 1.0 - 1e-10; }

}  // namespace

int LiftMap::occupation_index(const std::vector<int>& levels) const {
    int idx = 0;
    for (std::size_t f = 0; f < targetDims.size(); ++f) idx = idx * targetDims[f] + levels[f];
    return idx;
}

std::vector<std::vector<int>> LiftMap::single_particle_sets() const {
    const int K = source.blocks();
    std::vector<std::vector<int>> sets(static_cast<std::size_t>(K));
    std::vector<int> levels(static_cast<std::size_t>(K), 0);
    for (int k = 0; k < K; ++k) {
        for (int l = 1; l <= source.dims[static_cast<std::size_t>(k)]; ++l) {
            std::fill(levels.begin(), levels.end(), 0);
            levels[static_cast<std::size_t>(k)] = l;
            sets[static_cast<std::size_t>(k)].push_back(occupation_index(levels));
        }
    }
    return sets;
}

LiftMap build_lift(const Decomposition& L, int targetCap) {
    long target = 1;
    std::vector<int> targetDims;
    for (int n : L.dims) {
        targetDims.push_back(n + 1);
        target *= n + 1;
        if (target > targetCap)
            fail(Errc::TargetTooLarge, "occupation space exceeds cap of " + std::to_string(targetCap));
    }

    Matrix m = Matrix::Zero(target, L.total());
    LiftMap lift(L, targetDims, std::move(m));
    std::vector<int> levels(static_cast<std::size_t>(L.blocks()), 0);
    int col = 0;
    for (int k = 0; k < L.blocks(); ++k) {
        for (int l = 1; l <= L.dims[static_cast<std::size_t>(k)]; ++l) {
            std::fill(levels.begin(), levels.end(), 0);
            levels[static_cast<std::size_t>(k)] = l;
            lift.isometry(lift.occupation_index(levels), col++) = 1.0;
        }
    }
    return lift;
}

DensityOperator lift_state(const LiftMap& m, const DensityOperator& rho) {
    if (rho.dim() != m.source.total()) fail(Errc::DimensionMismatch, "state does not match lift source");
    return make_density(m.isometry * rho.matrix() * m.isometry.adjoint());
}

double induced_measure(const LiftMap& m, const std::function<double(const DensityOperator&)>& e,
                       const DensityOperator& rho) {
    return e(lift_state(m, rho));
}

std::function<double(const DensityOperator&)> lifted_relent_functional(const LiftMap& m) {
    auto sets = m.single_particle_sets();
    // complete the pinch family with the complement of the single-particle sector
    std::vector<char> inside(static_cast<std::size_t>(m.targetDim()), 0);
    for (const auto& s : sets)
        for (int idx : s) inside[static_cast<std::size_t>(idx)] = 1;
    std::vector<int> rest;
    for (int i = 0; i < static_cast<int>(m.targetDim()); ++i)
        if (!inside[static_cast<std::size_t>(i)]) rest.push_back(i);
    if (!rest.empty()) sets.push_back(std::move(rest));

    return [sets](const DensityOperator& lifted) {
        const Matrix pinched = pinch_sets(lifted.matrix(), sets);
        return entropy_of_spectrum(eigenvalues(pinched)) - von_neumann_entropy(lifted);
    };
}

std::function<double(const DensityOperator&)> lifted_formation_functional(const LiftMap& m) {
    if (m.targetDims != std::vector<int>{2, 2})
        fail(Errc::UnsupportedStructure, "formation functional requires a two-qubit lift");
    return [](const DensityOperator& lifted) { return wootters_ef(lifted); };
}

// --------------------------- structured minimizers --------------------------

std::vector<int> PairedBlocks::pair_indices(const BipartiteSplit& split, int t) const {
    const auto [i, j] = pairs[static_cast<std::size_t>(t)];
    std::vector<int> out;
    for (int a = d1.offset(i); a < d1.offset(i) + d1.dims[static_cast<std::size_t>(i)]; ++a)
        for (int b = d2.offset(j); b < d2.offset(j) + d2.dims[static_cast<std::size_t>(j)]; ++b)
            out.push_back(a * split.dimB + b);
    return out;
}

std::vector<std::vector<int>> PairedBlocks::all_pair_indices(const BipartiteSplit& split) const {
    std::vector<std::vector<int>> sets;
    for (int t = 0; t < static_cast<int>(pairs.size()); ++t) sets.push_back(pair_indices(split, t));
    return sets;
}

bool PairedBlocks::has_one_dim_member(int t) const {
    const auto [i, j] = pairs[static_cast<std::size_t>(t)];
    return d1.dims[static_cast<std::size_t>(i)] == 1 || d2.dims[static_cast<std::size_t>(j)] == 1;
}

BipartiteSplit lifted_split(const LiftMap& m) {
    if (m.source.blocks() != 2) fail(Errc::NotBipartite, "lifted split defined for K = 2");
    return {m.targetDims[0], m.targetDims[1]};
}

PairedBlocks lifted_pair_blocks(const LiftMap& m) {
    if (m.source.blocks() != 2) fail(Errc::NotBipartite, "lifted pairs defined for K = 2");
    PairedBlocks pb{Decomposition({1, m.source.dims[0]}), Decomposition({1, m.source.dims[1]}), {}};
    pb.pairs = {{1, 0}, {0, 1}};  // modes(1)⊗vac(2), vac(1)⊗modes(2)
    return pb;
}

DensityOperator candidate_min_separable(const DensityOperator& sigma, const BipartiteSplit& split,
                                        const PairedBlocks& pairL) {
    split.check_dim(sigma.dim());
    validate_pairs(pairL, split);
    const auto sets = pairL.all_pair_indices(split);
    if (support_leak(sigma.matrix(), sets, sigma.dim()) > 1e-10)
        fail(Errc::UnsupportedStructure, "state leaks outside the paired product blocks");
    return make_density(pinch_sets(sigma.matrix(), sets));
}

FirstOrderReport first_order_min_check(const DensityOperator& sigma, const DensityOperator& rhoStar,
                                       const BipartiteSplit& split, int samples, std::uint64_t seed) {
    split.check_dim(sigma.dim());
    if (rhoStar.dim() != sigma.dim()) fail(Errc::DimensionMismatch, "candidate dimension mismatch");

    const double f0 = relative_entropy(sigma, rhoStar);
    if (!std::isfinite(f0))
        fail(Errc::SupportFailure, "sigma is not supported inside the candidate minimizer");

    FirstOrderReport rep;
    rep.samples = samples;
    rep.minDerivative = std::numeric_limits<double>::infinity();

    Rng rng(seed);
    constexpr double h1 = 1e-5;
    constexpr double h2 = 1e-6;
    for (int s = 0; s < samples; ++s) {
        const Vector psiA = rng.state_vector(split.dimA);
        const Vector psiB = rng.state_vector(split.dimB);
        const Matrix direction = kron(psiA * psiA.adjoint(), psiB * psiB.adjoint());

        auto f = [&](double x) {
            const Matrix mixed = (1.0 - x) * rhoStar.matrix() + x * direction;
            return relative_entropy(sigma, make_density(mixed));
        };
        const double d1 = (f(h1) - f0) / h1;
        const double d2 = (f(h2) - f0) / h2;
        const double fp = (h1 * d2 - h2 * d1) / (h1 - h2);

        rep.minDerivative = std::min(rep.minDerivative, fp);
        if (fp < -1e-4) ++rep.nonNegativeViolations;
        if (std::abs(1.0 - fp) > 1.0 + 1e-3) ++rep.rangeViolations;
    }
    rep.pass = rep.nonNegativeViolations == 0 && rep.rangeViolations == 0;
    return rep;
}

EsIdentityReport es_decomposition_identity(const DensityOperator& sigma, const BipartiteSplit& split,
                                           const PairedBlocks& pairL) {
    const DensityOperator rhoStar = candidate_min_separable(sigma, split, pairL);
    EsIdentityReport rep;
    rep.relEntropyToCandidate = relative_entropy(sigma, rhoStar);
    rep.blockRelEntropy = von_neumann_entropy(rhoStar) - von_neumann_entropy(sigma);
    rep.diff = rep.relEntropyToCandidate - rep.blockRelEntropy;
    rep.pass = std::isfinite(rep.diff) && std::abs(rep.diff) <= 1e-9;
    return rep;
}

double wootters_ef(const DensityOperator& rho2q) {
    if (rho2q.dim() != 4) fail(Errc::DimensionMismatch, "Wootters formula needs a two-qubit state");

    Matrix yy = Matrix::Zero(4, 4);
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;

    const Matrix r = rho2q.matrix() * yy * rho2q.matrix().conjugate() * yy;
    Eigen::ComplexEigenSolver<Matrix> solver(r);
    std::vector<double> lam;
    for (Eigen::Index i = 0; i < 4; ++i)
        lam.push_back(std::sqrt(std::max(0.0, solver.eigenvalues()(i).real())));
    std::sort(lam.begin(), lam.end(), std::greater<double>());

    const double c = std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
    return binary_entropy(0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))));
}

EfCheckReport ef_superadditivity_check(const DensityOperator& rho, const BipartiteSplit& split,
                                       const PairedBlocks& pairL, const AfOptions& opts) {
    split.check_dim(rho.dim());
    validate_pairs(pairL, split);
    const auto sets = pairL.all_pair_indices(split);
    if (support_leak(rho.matrix(), sets, rho.dim()) > 1e-10)
        fail(Errc::UnsupportedStructure, "state leaks outside the paired product blocks");

    EfCheckReport rep;

    // ---- oracle for the total state
    if (is_pure(rho.matrix())) {
        rep.ef = pure_block_entanglement(rho.matrix(), split.dimA, split.dimB);
        rep.oracle = "pure-state entanglement entropy";
    } else if (split.dimA == 2 && split.dimB == 2) {
        rep.ef = wootters_ef(rho);
        rep.oracle = "two-qubit spin-flip formula";
    } else {
        fail(Errc::UnsupportedStructure, "no formation oracle for mixed states on this split");
    }

    // ---- block terms sum_k p_k E_f(sigma_k)
    for (int t = 0; t < static_cast<int>(pairL.pairs.size()); ++t) {
        const auto idx = pairL.pair_indices(split, t);
        const Matrix blockRaw = restrict_to(rho.matrix(), idx);
        const double p = blockRaw.trace().real();
        if (p <= 1e-12) continue;
        if (pairL.has_one_dim_member(t)) continue;  // product block, zero entanglement
        const Matrix blockState = blockRaw / p;
        const auto [i, j] = pairL.pairs[static_cast<std::size_t>(t)];
        const int da = pairL.d1.dims[static_cast<std::size_t>(i)];
        const int db = pairL.d2.dims[static_cast<std::size_t>(j)];
        if (is_pure(blockState))
            rep.blockTermSum += p * pure_block_entanglement(blockState, da, db);
        else if (da == 2 && db == 2)
            rep.blockTermSum += p * wootters_ef(make_density(blockState));
        else
            fail(Errc::UnsupportedStructure, "no formation oracle for a mixed multi-dim block");
    }

    // ---- A_f over the pair blocks (basis permuted so blocks are contiguous)
    std::vector<int> order;
    std::vector<int> dims;
    for (const auto& s : sets) {
        order.insert(order.end(), s.begin(), s.end());
        dims.push_back(static_cast<int>(s.size()));
    }
    std::vector<char> used(static_cast<std::size_t>(rho.dim()), 0);
    for (int i : order) used[static_cast<std::size_t>(i)] = 1;
    int restCount = 0;
    for (int i = 0; i < static_cast<int>(rho.dim()); ++i)
        if (!used[static_cast<std::size_t>(i)]) {
            order.push_back(i);
            ++restCount;
        }
    if (restCount > 0) dims.push_back(restCount);

    Matrix permuted(rho.dim(), rho.dim());
    for (std::size_t r = 0; r < order.size(); ++r)
        for (std::size_t c = 0; c < order.size(); ++c)
            permuted(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                rho.matrix()(order[r], order[c]);

    const auto afReport = a_f(make_density(permuted), Decomposition(dims), opts);
    rep.af = afReport.value;

    constexpr double tol = 1e-4;
    rep.inequalityHolds = rep.ef >= rep.blockTermSum + rep.af - tol;
    rep.equalityApplicable = true;
    for (int t = 0; t < static_cast<int>(pairL.pairs.size()); ++t)
        rep.equalityApplicable = rep.equalityApplicable && pairL.has_one_dim_member(t);
    rep.equalityHolds = rep.equalityApplicable && std::abs(rep.ef - rep.af) <= tol;
    return rep;
}

}  // namespace supq
