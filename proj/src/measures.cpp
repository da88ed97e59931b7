#include "supq/measures.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace supq {

namespace {

void require_bipartite(const Decomposition& L) {
    if (L.blocks() != 2) fail(Errc::NotBipartite, "measure defined for K = 2 decompositions only");
}

// singular values of the (1,2) block as a compact submatrix
RealVector offdiag_singulars(const DensityOperator& rho, const Decomposition& L) {
    L.check_dim(rho.dim());
    const Matrix sub = rho.matrix().block(0, L.dims[0], L.dims[0], L.dims[1]);
    Eigen::JacobiSVD<Matrix> svd(sub);
    return svd.singularValues();
}

int check_kyfan_order(const Decomposition& L, int k) {
    const int kmax = std::min(L.dims[0], L.dims[1]);
    if (k < 1 || k > kmax) fail(Errc::KOutOfRange, "Ky-Fan order must satisfy 1 <= k <= min block dim");
    return kmax;
}

RealVector sorted_desc(RealVector v) {
    std::sort(v.data(), v.data() + v.size(), std::greater<double>());
    return v;
}

}  // namespace

MeasureReport a_s(const DensityOperator& rho, const Decomposition& L) {
    L.check_dim(rho.dim());
    MeasureReport rep;
    DensityOperator pinched = pinch(rho, L);
    rep.value = von_neumann_entropy(pinched) - von_neumann_entropy(rho);
    rep.blockDiagonalWitness = std::move(pinched);
    return rep;
}

double a_s_min_check(const DensityOperator& rho, const Decomposition& L, int trials,
                     std::uint64_t seed) {
    L.check_dim(rho.dim());
    double best = relative_entropy(rho, pinch(rho, L));
    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        const RealVector w = rng.simplex(L.blocks());
        Matrix sigma = Matrix::Zero(rho.dim(), rho.dim());
        for (int k = 0; k < L.blocks(); ++k) {
            const int o = L.offset(k);
            sigma.block(o, o, L.dims[k], L.dims[k]) = w(k) * rng.density(L.dims[k]);
        }
        best = std::min(best, relative_entropy(rho, make_density(sigma)));
    }
    return best;
}

// --------------------------- formation measure ------------------------------

namespace detail {

AfWorkspace af_workspace(const DensityOperator& rho, const Decomposition& L) {
    L.check_dim(rho.dim());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix());
    const RealVector mu = solver.eigenvalues();

    AfWorkspace ws;
    std::vector<Eigen::Index> support;
    for (Eigen::Index i = 0; i < mu.size(); ++i)
        if (mu(i) > 1e-12) support.push_back(i);
    ws.w.resize(rho.dim(), static_cast<Eigen::Index>(support.size()));
    for (std::size_t c = 0; c < support.size(); ++c)
        ws.w.col(static_cast<Eigen::Index>(c)) =
            solver.eigenvectors().col(support[c]) * std::sqrt(mu(support[c]));
    for (int k = 0; k < L.blocks(); ++k) {
        ws.blockOffsets.push_back(L.offset(k));
        ws.blockDims.push_back(L.dims[k]);
    }
    return ws;
}

// G(T) = sum_l lambda_l H(p^(l)) with lambda_l = |psi_l~|^2 and p_k^(l) the
// block weights of member l; equals -sum_{l,k} w_lk (ln w_lk - ln lambda_l)
double af_objective(const AfWorkspace& ws, const Matrix& t) {
    const Matrix psi = ws.w * t.transpose();  // dim x m, column l = psi_l~
    double g = 0.0;
    for (Eigen::Index l = 0; l < psi.cols(); ++l) {
        double lambda = 0.0;
        std::vector<double> w(ws.blockDims.size());
        for (std::size_t k = 0; k < ws.blockDims.size(); ++k) {
            w[k] = psi.col(l).segment(ws.blockOffsets[k], ws.blockDims[k]).squaredNorm();
            lambda += w[k];
        }
        if (lambda <= 0.0) continue;
        for (double wk : w)
            if (wk > 0.0) g -= wk * std::log(wk / lambda);
    }
    return g;
}

Matrix af_gradient(const AfWorkspace& ws, const Matrix& t) {
    const Eigen::Index m = t.rows();
    const Eigen::Index r = t.cols();
    const Matrix psi = ws.w * t.transpose();

    Matrix grad = Matrix::Zero(m, r);
    for (Eigen::Index l = 0; l < psi.cols(); ++l) {
        double lambda = 0.0;
        std::vector<double> w(ws.blockDims.size());
        for (std::size_t k = 0; k < ws.blockDims.size(); ++k) {
            w[k] = psi.col(l).segment(ws.blockOffsets[k], ws.blockDims[k]).squaredNorm();
            lambda += w[k];
        }
        if (lambda <= 0.0) continue;
        for (std::size_t k = 0; k < ws.blockDims.size(); ++k) {
            if (w[k] <= 0.0) continue;
            const double coeff = -std::log(w[k] / lambda);  // dG/dw_lk
            // dw_lk/d(conj T_la) = w_a† P_k psi_l
            const auto blockW = ws.w.middleRows(ws.blockOffsets[k], ws.blockDims[k]);
            const Vector blockPsi = psi.col(l).segment(ws.blockOffsets[k], ws.blockDims[k]);
            grad.row(l) += coeff * (blockW.adjoint() * blockPsi).transpose();
        }
    }
    return grad;
}

Matrix qf_retract(const Matrix& x) {
    Eigen::HouseholderQR<Matrix> qr(x);
    Matrix q = qr.householderQ() * Matrix::Identity(x.rows(), x.cols());
    const Matrix r = qr.matrixQR().topRows(x.cols()).triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const Cx d = r(j, j);
        if (std::abs(d) > 0.0) q.col(j) *= std::conj(d) / std::abs(d);
    }
    return q;
}

namespace {

struct StartResult {
    double value = 0.0;
    Matrix t;
    bool converged = false;
};

// Projected gradient descent with Barzilai-Borwein steps, a non-monotone
// acceptance window, and QR retraction back to orthonormal columns.
StartResult minimize_from(const AfWorkspace& ws, Matrix t, const AfOptions& opts) {
    double value = af_objective(ws, t);
    double windowBest = value;
    int sinceImprovement = 0;
    bool converged = false;

    Matrix prevT;
    Matrix prevTangent;
    double alpha = 0.1;
    std::vector<double> recent = {value};

    for (int iter = 0; iter < opts.maxIters; ++iter) {
        const Matrix grad = af_gradient(ws, t);
        const Matrix sym = 0.5 * (t.adjoint() * grad + grad.adjoint() * t);
        const Matrix tangent = grad - t * sym;
        const double slope = tangent.squaredNorm();
        if (slope < 1e-24) {
            converged = true;
            break;
        }

        if (iter > 0) {
            const Matrix s = t - prevT;
            const Matrix y = tangent - prevTangent;
            const double sy = (s.adjoint() * y).trace().real();
            if (sy > 1e-18) alpha = s.squaredNorm() / sy;
            alpha = std::clamp(alpha, 1e-8, 1e4);
        }

        const double reference = *std::max_element(recent.begin(), recent.end());
        bool accepted = false;
        double tryAlpha = alpha;
        for (int bt = 0; bt < 60; ++bt) {
            const Matrix cand = qf_retract(t - tryAlpha * tangent);
            const double candValue = af_objective(ws, cand);
            if (candValue <= reference - 1e-4 * tryAlpha * slope) {
                prevT = t;
                prevTangent = tangent;
                t = cand;
                value = candValue;
                accepted = true;
                break;
            }
            tryAlpha *= 0.5;
        }
        if (!accepted) {
            converged = true;  // no descent direction at line-search resolution
            break;
        }
        recent.push_back(value);
        if (recent.size() > 10) recent.erase(recent.begin());

        if (value < windowBest - opts.stallTol) {
            windowBest = value;
            sinceImprovement = 0;
        } else if (++sinceImprovement >= opts.stallWindow) {
            converged = true;
            break;
        }
    }
    return {value, std::move(t), converged};
}

}  // namespace

}  // namespace detail

MeasureReport a_f(const DensityOperator& rho, const Decomposition& L, const AfOptions& opts) {
    L.check_dim(rho.dim());
    MeasureReport rep;

    // block-diagonal states decompose into localized members: the measure is 0
    if (max_abs(rho.matrix() - pinch_matrix(rho.matrix(), L)) <= 1e-14) {
        PureStateEnsemble ens;
        std::vector<double> weights;
        for (int k = 0; k < L.blocks(); ++k) {
            const int o = L.offset(k);
            Eigen::SelfAdjointEigenSolver<Matrix> solver(
                rho.matrix().block(o, o, L.dims[k], L.dims[k]));
            for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
                if (solver.eigenvalues()(i) <= 1e-14) continue;
                Vector v = Vector::Zero(rho.dim());
                v.segment(o, L.dims[k]) = solver.eigenvectors().col(i);
                ens.vectors.push_back(v);
                weights.push_back(solver.eigenvalues()(i));
            }
        }
        ens.weights = Eigen::Map<RealVector>(weights.data(), static_cast<Eigen::Index>(weights.size()));
        rep.value = 0.0;
        rep.ensembleWitness = std::move(ens);
        return rep;
    }

    const auto ws = detail::af_workspace(rho, L);
    const Eigen::Index r = ws.w.cols();
    const Eigen::Index m = opts.ensembleSize > 0 ? opts.ensembleSize : r * r;
    if (m < r) fail(Errc::KOutOfRange, "ensemble size below state rank");

    detail::StartResult best;
    best.value = std::numeric_limits<double>::infinity();
    Rng seeder(opts.seed);
    for (int s = 0; s < std::max(1, opts.starts); ++s) {
        Matrix t0;
        if (s == 0) {
            t0 = Matrix::Zero(m, r);
            t0.topRows(r) = Matrix::Identity(r, r);
        } else {
            Rng rng(seeder.split(static_cast<std::uint64_t>(s)));
            t0 = detail::qf_retract(rng.ginibre(m, r));
        }
        auto result = detail::minimize_from(ws, std::move(t0), opts);
        if (result.value < best.value - 1e-15) best = std::move(result);
    }

    rep.value = std::max(0.0, best.value);
    rep.converged = best.converged;

    PureStateEnsemble ens;
    const Matrix psi = ws.w * best.t.transpose();
    std::vector<double> weights;
    for (Eigen::Index l = 0; l < psi.cols(); ++l) {
        const double lambda = psi.col(l).squaredNorm();
        if (lambda <= 1e-12) continue;
        weights.push_back(lambda);
        ens.vectors.push_back(psi.col(l) / std::sqrt(lambda));
    }
    ens.weights = Eigen::Map<RealVector>(weights.data(), static_cast<Eigen::Index>(weights.size()));
    rep.ensembleWitness = std::move(ens);
    return rep;
}

// --------------------------- norm measures ----------------------------------

double kyfan_measure(const DensityOperator& rho, const Decomposition& L, int k) {
    require_bipartite(L);
    check_kyfan_order(L, k);
    return offdiag_singulars(rho, L).head(k).sum();
}

double trace_measure(const DensityOperator& rho, const Decomposition& L) {
    require_bipartite(L);
    return offdiag_singulars(rho, L).sum();
}

double norm_measure(const DensityOperator& rho, const Decomposition& L, const NormSpec& spec) {
    require_bipartite(L);
    switch (spec.kind) {
        case NormSpec::Kind::KyFan:
            return kyfan_measure(rho, L, spec.k);
        case NormSpec::Kind::Trace:
            return trace_measure(rho, L);
        case NormSpec::Kind::SchattenP: {
            const RealVector s = offdiag_singulars(rho, L);
            double sum = 0.0;
            for (Eigen::Index i = 0; i < s.size(); ++i) sum += std::pow(s(i), spec.p);
            return std::pow(sum, 1.0 / spec.p);
        }
    }
    fail(Errc::KOutOfRange, "unknown norm kind");
}

DominanceReport dominance_check(const DensityOperator& rho, const DensityOperator& sigma,
                                const Decomposition& L, const std::vector<NormSpec>& specs) {
    require_bipartite(L);
    if (rho.dim() != sigma.dim()) fail(Errc::DimensionMismatch, "dominance_check needs equal dims");

    DominanceReport rep;
    const RealVector sr = offdiag_singulars(rho, L);
    const RealVector ss = offdiag_singulars(sigma, L);
    double accR = 0.0, accS = 0.0;
    rep.kyfanDominated = true;
    for (Eigen::Index i = 0; i < sr.size(); ++i) {
        accR += sr(i);
        accS += ss(i);
        rep.kyfanFirst.push_back(accR);
        rep.kyfanSecond.push_back(accS);
        if (accR > accS + 1e-12) rep.kyfanDominated = false;
    }
    rep.allSuppliedDominated = true;
    for (const auto& spec : specs) {
        const bool dominated = norm_measure(rho, L, spec) <= norm_measure(sigma, L, spec) + 1e-12;
        rep.suppliedDominated.push_back(dominated);
        rep.allSuppliedDominated = rep.allSuppliedDominated && dominated;
    }
    return rep;
}

double predictability(const DensityOperator& rho, const Decomposition& L) {
    require_bipartite(L);
    L.check_dim(rho.dim());
    const double p1 = rho.matrix().block(0, 0, L.dims[0], L.dims[0]).trace().real();
    const double p2 = rho.matrix().block(L.dims[0], L.dims[0], L.dims[1], L.dims[1]).trace().real();
    return std::abs(p1 - p2);
}

double kyfan_bound(const DensityOperator& rho, const Decomposition& L, int k) {
    require_bipartite(L);
    L.check_dim(rho.dim());
    check_kyfan_order(L, k);

    const Matrix b1 = rho.matrix().block(0, 0, L.dims[0], L.dims[0]);
    const Matrix b2 = rho.matrix().block(L.dims[0], L.dims[0], L.dims[1], L.dims[1]);
    const double p1 = b1.trace().real();
    const double p2 = b2.trace().real();
    if (p1 * p2 <= 0.0) return 0.0;

    const RealVector l1 = sorted_desc(eigenvalues(b1 / p1));
    const RealVector l2 = sorted_desc(eigenvalues(b2 / p2));
    double sum = 0.0;
    for (int l = 0; l < k; ++l) {
        const double a = l < l1.size() ? std::max(0.0, l1(l)) : 0.0;
        const double b = l < l2.size() ? std::max(0.0, l2(l)) : 0.0;
        sum += std::sqrt(a * b);
    }
    return std::sqrt(p1 * p2) * sum;
}

DensityOperator sharp_state(double p1, std::vector<double> spectrum1, std::vector<double> spectrum2) {
    if (!(p1 >= 0.0 && p1 <= 1.0)) fail(Errc::InvalidSpectrum, "p1 must lie in [0,1]");
    for (auto* spec : {&spectrum1, &spectrum2}) {
        if (spec->empty()) fail(Errc::InvalidSpectrum, "spectrum must be nonempty");
        double sum = 0.0;
        for (double v : *spec) {
            if (v < 0.0) fail(Errc::InvalidSpectrum, "spectrum entries must be non-negative");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-10) fail(Errc::InvalidSpectrum, "spectrum must sum to 1");
        std::sort(spec->begin(), spec->end(), std::greater<double>());
    }

    const int n1 = static_cast<int>(spectrum1.size());
    const int n2 = static_cast<int>(spectrum2.size());
    const double p2 = 1.0 - p1;
    Matrix rho = Matrix::Zero(n1 + n2, n1 + n2);
    for (int l = 0; l < n1; ++l) rho(l, l) = p1 * spectrum1[static_cast<std::size_t>(l)];
    for (int j = 0; j < n2; ++j) rho(n1 + j, n1 + j) = p2 * spectrum2[static_cast<std::size_t>(j)];
    for (int l = 0; l < std::min(n1, n2); ++l) {
        const double c = std::sqrt(p1 * p2) *
                         std::sqrt(spectrum1[static_cast<std::size_t>(l)] * spectrum2[static_cast<std::size_t>(l)]);
        rho(l, n1 + l) = c;
        rho(n1 + l, l) = c;
    }
    return make_density(rho);
}

}  // namespace supq
