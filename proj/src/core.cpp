#include "supq/core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace supq {

namespace {

constexpr double kHermTol = 1e-10;
constexpr double kTraceRepairTol = 1e-6;
constexpr double kEigErrorTol = -1e-6;
constexpr double kSupportTol = 1e-12;

Eigen::SelfAdjointEigenSolver<Matrix> eigensolve(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    if (solver.info() != Eigen::Success)
        fail(Errc::ValidationFailure, "eigendecomposition failed");
    return solver;
}

}  // namespace

DensityOperator make_density(const Matrix& entries) {
    if (entries.rows() != entries.cols() || entries.rows() == 0)
        fail(Errc::NotSquare, "density operator entries must be a nonempty square matrix");
    if (!finite_entries(entries)) fail(Errc::NonFinite, "density operator entries must be finite");

    const double hermErr = max_abs(entries - entries.adjoint());
    if (hermErr > kHermTol) fail(Errc::NotHermitian, "Hermiticity violation " + std::to_string(hermErr));

    Matrix h = 0.5 * (entries + entries.adjoint());
    const double tr = h.trace().real();
    if (std::abs(tr - 1.0) > kTraceRepairTol)
        fail(Errc::TraceDeviation, "trace deviates from 1 by " + std::to_string(tr - 1.0));
    if (std::abs(tr - 1.0) > 1e-14) h /= tr;

    const auto solver = eigensolve(h);
    const double eigMin = solver.eigenvalues().minCoeff();
    if (eigMin < kEigErrorTol)
        fail(Errc::NegativeEigenvalue, "eigenvalue " + std::to_string(eigMin) + " below tolerance");
    if (eigMin < 0.0) {
        RealVector lam = solver.eigenvalues().cwiseMax(0.0);
        h = solver.eigenvectors() * lam.asDiagonal() * solver.eigenvectors().adjoint();
        h /= h.trace().real();
        h = 0.5 * (h + h.adjoint()).eval();
    }
    return DensityOperator(h);
}

Matrix pinch_matrix(const Matrix& q, const Decomposition& L) {
    L.check_dim(q.rows());
    Matrix out = Matrix::Zero(q.rows(), q.cols());
    for (int k = 0; k < L.blocks(); ++k) {
        const int o = L.offset(k);
        out.block(o, o, L.dims[k], L.dims[k]) = q.block(o, o, L.dims[k], L.dims[k]);
    }
    return out;
}

Matrix pinch_sets(const Matrix& q, const std::vector<std::vector<int>>& sets) {
    Matrix out = Matrix::Zero(q.rows(), q.cols());
    for (const auto& s : sets)
        for (int r : s)
            for (int c : s) out(r, c) = q(r, c);
    return out;
}

DensityOperator pinch(const DensityOperator& rho, const Decomposition& L) {
    return make_density(pinch_matrix(rho.matrix(), L));
}

Matrix block(const DensityOperator& rho, const Decomposition& L, int i, int j) {
    L.check_dim(rho.dim());
    L.check_index(i);
    L.check_index(j);
    Matrix out = Matrix::Zero(rho.dim(), rho.dim());
    out.block(L.offset(i), L.offset(j), L.dims[i], L.dims[j]) =
        rho.matrix().block(L.offset(i), L.offset(j), L.dims[i], L.dims[j]);
    return out;
}

BlockForm block_form(const DensityOperator& rho, const Decomposition& L) {
    L.check_dim(rho.dim());
    const int K = L.blocks();
    const Eigen::Index n = rho.dim();

    BlockForm form;
    form.probs = RealVector::Zero(K);
    form.diagStates.assign(K, Matrix::Zero(n, n));
    std::vector<Matrix> sqrtPinv(K);  // pseudo-inverse of sqrt(sigma_k), block-local

    for (int k = 0; k < K; ++k) {
        const int o = L.offset(k);
        const Matrix sub = rho.matrix().block(o, o, L.dims[k], L.dims[k]);
        const double p = sub.trace().real();
        form.probs(k) = p;
        if (p <= kSupportTol) {
            sqrtPinv[k] = Matrix::Zero(L.dims[k], L.dims[k]);
            continue;
        }
        form.diagStates[k].block(o, o, L.dims[k], L.dims[k]) = sub / p;
        sqrtPinv[k] = psd_pseudo_inverse(psd_sqrt(sub / p));
    }

    for (int k = 0; k < K; ++k) {
        for (int kp = 0; kp < K; ++kp) {
            if (k == kp) continue;
            const double pp = form.probs(k) * form.probs(kp);
            Matrix d = Matrix::Zero(n, n);
            if (pp > kSupportTol * kSupportTol) {
                const Matrix off = rho.matrix().block(L.offset(k), L.offset(kp), L.dims[k], L.dims[kp]);
                d.block(L.offset(k), L.offset(kp), L.dims[k], L.dims[kp]) =
                    sqrtPinv[k] * off * sqrtPinv[kp] / std::sqrt(pp);
            }
            form.offDiag.emplace(std::make_pair(k, kp), std::move(d));
        }
    }
    return form;
}

Matrix BlockForm::reassemble(const Decomposition& L) const {
    const Eigen::Index n = diagStates.front().rows();
    Matrix out = Matrix::Zero(n, n);
    std::vector<Matrix> sqrts(static_cast<std::size_t>(L.blocks()), Matrix::Zero(n, n));
    for (int k = 0; k < L.blocks(); ++k) {
        out += probs(k) * diagStates[static_cast<std::size_t>(k)];
        const int o = L.offset(k);
        sqrts[static_cast<std::size_t>(k)].block(o, o, L.dims[k], L.dims[k]) =
            psd_sqrt(diagStates[static_cast<std::size_t>(k)].block(o, o, L.dims[k], L.dims[k]));
    }
    for (const auto& [pair, d] : offDiag) {
        const auto [k, kp] = pair;
        out += std::sqrt(probs(k) * probs(kp)) * sqrts[static_cast<std::size_t>(k)] * d *
               sqrts[static_cast<std::size_t>(kp)];
    }
    return out;
}

RealVector eigenvalues(const Matrix& hermitian) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (hermitian + hermitian.adjoint()),
                                                 Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

double entropy_of_spectrum(const RealVector& lambda) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
        if (lambda(i) > 0.0) s -= lambda(i) * std::log(lambda(i));
    return s;
}

double von_neumann_entropy(const DensityOperator& rho) {
    return entropy_of_spectrum(eigenvalues(rho.matrix()));
}

double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dim() != sigma.dim()) fail(Errc::DimensionMismatch, "relative entropy needs equal dims");

    const auto solver = eigensolve(sigma.matrix());
    const RealVector s = solver.eigenvalues();
    const Matrix& v = solver.eigenvectors();

    double outside = 0.0;
    double crossTerm = 0.0;  // Tr(rho ln sigma) over the support
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        const double weight = std::max(0.0, (v.col(i).adjoint() * rho.matrix() * v.col(i))(0).real());
        if (s(i) < kSupportTol)
            outside += weight;
        else
            crossTerm += weight * std::log(s(i));
    }
    if (outside > kSupportTol) return std::numeric_limits<double>::infinity();

    return -entropy_of_spectrum(eigenvalues(rho.matrix())) - crossTerm;
}

RealVector singular_values(const Matrix& c) {
    Eigen::JacobiSVD<Matrix> svd(c);
    return svd.singularValues();  // non-increasing, length min(rows, cols)
}

Matrix psd_sqrt(const Matrix& hermitianPsd) {
    const auto solver = eigensolve(0.5 * (hermitianPsd + hermitianPsd.adjoint()));
    RealVector lam = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return solver.eigenvectors() * lam.asDiagonal() * solver.eigenvectors().adjoint();
}

Matrix psd_pseudo_inverse(const Matrix& hermitianPsd) {
    const auto solver = eigensolve(0.5 * (hermitianPsd + hermitianPsd.adjoint()));
    const RealVector lam = solver.eigenvalues();
    const double cutoff = 1e-12 * std::max(lam.maxCoeff(), 0.0);
    RealVector inv = RealVector::Zero(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        if (lam(i) > cutoff && lam(i) > 0.0) inv(i) = 1.0 / lam(i);
    return solver.eigenvectors() * inv.asDiagonal() * solver.eigenvectors().adjoint();
}

std::pair<DensityOperator, Decomposition> align_basis(const DensityOperator& rho,
                                                      const std::vector<Matrix>& projectors) {
    const Eigen::Index n = rho.dim();
    if (projectors.size() < 2) fail(Errc::IncompleteResolution, "need at least two projectors");

    Matrix sum = Matrix::Zero(n, n);
    for (const auto& p : projectors) {
        if (p.rows() != n || p.cols() != n) fail(Errc::DimensionMismatch, "projector dimension mismatch");
        if (max_abs(p - p.adjoint()) > kHermTol) fail(Errc::NotAProjector, "projector not Hermitian");
        if (max_abs(p * p - p) > kHermTol) fail(Errc::NotAProjector, "projector not idempotent");
        sum += p;
    }
    for (std::size_t a = 0; a < projectors.size(); ++a)
        for (std::size_t b = a + 1; b < projectors.size(); ++b)
            if (max_abs(projectors[a] * projectors[b]) > kHermTol)
                fail(Errc::NotOrthogonal, "projectors are not mutually orthogonal");
    if (max_abs(sum - Matrix::Identity(n, n)) > kHermTol)
        fail(Errc::IncompleteResolution, "projectors do not resolve the identity");

    // Orthonormal range basis by modified Gram-Schmidt over projector columns;
    // for already basis-aligned projectors this reproduces the canonical basis
    // in order, so U becomes the identity.
    Matrix u(n, n);  // row r holds the adjoint of basis vector r
    std::vector<int> dims;
    Eigen::Index row = 0;
    for (const auto& p : projectors) {
        const int rank = static_cast<int>(std::lround(p.trace().real()));
        if (rank < 1) fail(Errc::NotAProjector, "projector has empty range");
        int found = 0;
        for (Eigen::Index j = 0; j < n && found < rank; ++j) {
            Vector v = p.col(j);
            for (int pass = 0; pass < 2; ++pass) {
                for (Eigen::Index r = 0; r < row; ++r) {
                    const Vector b = u.row(r).adjoint();
                    v -= b.dot(v) * b;
                }
            }
            if (v.norm() > 1e-6) {
                u.row(row) = (v / v.norm()).adjoint();
                ++row;
                ++found;
            }
        }
        if (found != rank) fail(Errc::NotAProjector, "projector range extraction failed");
        dims.push_back(rank);
    }
    if (row != n) fail(Errc::IncompleteResolution, "extracted basis does not span the space");

    return {make_density(u * rho.matrix() * u.adjoint()), Decomposition(dims)};
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix partial_trace(const Matrix& m, const std::vector<int>& factorDims,
                     const std::vector<int>& keep) {
    Eigen::Index total = 1;
    for (int d : factorDims) total *= d;
    if (m.rows() != total || m.cols() != total)
        fail(Errc::DimensionMismatch, "partial_trace: factor dims do not match matrix");

    const int nf = static_cast<int>(factorDims.size());
    std::vector<int> stride(nf, 1);
    for (int f = nf - 2; f >= 0; --f) stride[f] = stride[f + 1] * factorDims[f + 1];

    std::vector<char> kept(nf, 0);
    for (int f : keep) {
        if (f < 0 || f >= nf) fail(Errc::IndexOutOfRange, "partial_trace: bad factor index");
        kept[f] = 1;
    }

    Eigen::Index keptDim = 1, tracedDim = 1;
    std::vector<int> keptFactors, tracedFactors;
    for (int f = 0; f < nf; ++f) {
        if (kept[f]) {
            keptFactors.push_back(f);
            keptDim *= factorDims[f];
        } else {
            tracedFactors.push_back(f);
            tracedDim *= factorDims[f];
        }
    }

    auto fullIndex = [&](Eigen::Index keptIdx, Eigen::Index tracedIdx) {
        Eigen::Index idx = 0;
        for (int f = static_cast<int>(keptFactors.size()) - 1; f >= 0; --f) {
            const int d = factorDims[keptFactors[f]];
            idx += (keptIdx % d) * stride[keptFactors[f]];
            keptIdx /= d;
        }
        for (int f = static_cast<int>(tracedFactors.size()) - 1; f >= 0; --f) {
            const int d = factorDims[tracedFactors[f]];
            idx += (tracedIdx % d) * stride[tracedFactors[f]];
            tracedIdx /= d;
        }
        return idx;
    };

    Matrix out = Matrix::Zero(keptDim, keptDim);
    for (Eigen::Index r = 0; r < keptDim; ++r)
        for (Eigen::Index c = 0; c < keptDim; ++c)
            for (Eigen::Index t = 0; t < tracedDim; ++t) out(r, c) += m(fullIndex(r, t), fullIndex(c, t));
    return out;
}

}  // namespace supq
