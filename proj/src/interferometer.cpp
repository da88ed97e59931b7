#include "supq/interferometer.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

namespace supq {

namespace {

constexpr double kUnitaryTol = 1e-10;

Eigen::Index internal_dim(const DensityOperator& rho) {
    if (rho.dim() % 2 != 0) fail(Errc::DimensionMismatch, "state must live on internal ⊗ two paths");
    return rho.dim() / 2;
}

Matrix path_block(const DensityOperator& rho, int s, int sp) {
    const Eigen::Index n = internal_dim(rho);
    return rho.matrix().block(s * n, sp * n, n, n);
}

void check_unitary(const Matrix& u, Eigen::Index n, const char* label) {
    if (u.rows() != n || u.cols() != n) fail(Errc::DimensionMismatch, std::string(label) + " dimension mismatch");
    if (max_abs(u.adjoint() * u - Matrix::Identity(n, n)) > kUnitaryTol)
        fail(Errc::NotUnitary, std::string(label) + " is not unitary");
}

Matrix canonical_filter(Eigen::Index n, int k) {
    Matrix p = Matrix::Zero(n, n);
    p.topLeftCorner(k, k) = Matrix::Identity(k, k);
    return p;
}

// exp of a skew-Hermitian matrix i*A through the eigensystem of Hermitian A
Matrix unitary_exp_skew(const Matrix& skew) {
    const Matrix a = Cx(0.0, -1.0) * skew;  // Hermitian
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (a + a.adjoint()));
    Vector phases(a.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        phases(i) = std::exp(Cx(0.0, solver.eigenvalues()(i)));
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace

ProtocolOutcome run_protocol(const DensityOperator& rho, const Matrix& u, const Matrix& v,
                             const Matrix& filter) {
    const Eigen::Index n = internal_dim(rho);
    check_unitary(u, n, "U");
    check_unitary(v, n, "V");
    if (filter.rows() != n || filter.cols() != n) fail(Errc::DimensionMismatch, "filter dimension mismatch");
    if (max_abs(filter - filter.adjoint()) > kUnitaryTol || max_abs(filter * filter - filter) > kUnitaryTol)
        fail(Errc::NotProjector, "filter must be an orthogonal projector");

    ProtocolOutcome out;
    out.q1 = 0.5 * (filter * v * path_block(rho, 0, 0) * v.adjoint()).trace().real();
    out.q2 = 0.5 * (filter * u * path_block(rho, 1, 1) * u.adjoint()).trace().real();
    out.r = (filter * v * path_block(rho, 0, 1) * u.adjoint()).trace().real();
    out.p1 = out.q1 + out.q2 + out.r;
    out.p2 = out.q1 + out.q2 - out.r;
    return out;
}

std::tuple<Matrix, Matrix, double> optimal_uv(const DensityOperator& rho, int k) {
    const Eigen::Index n = internal_dim(rho);
    if (k < 1 || k > n) fail(Errc::KOutOfRange, "filter rank must lie in 1..N");

    // <1|rho|2> = sum_n s_n |a_n><b_n|; rotating a_n and b_n onto the first k
    // filter basis vectors turns Re Tr(PC V C U†) into the partial singular sum
    Eigen::JacobiSVD<Matrix> svd(path_block(rho, 0, 1), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix v = svd.matrixU().adjoint();
    const Matrix u = svd.matrixV().adjoint();
    const double value = svd.singularValues().head(k).sum();
    return {u, v, value};
}

std::tuple<Matrix, Matrix, double> stochastic_maximize(const DensityOperator& rho, int k, int iters,
                                                       std::uint64_t seed) {
    const Eigen::Index n = internal_dim(rho);
    if (k < 1 || k > n) fail(Errc::KOutOfRange, "filter rank must lie in 1..N");
    if (iters < 1) fail(Errc::KOutOfRange, "need at least one iteration");

    const Matrix filter = canonical_filter(n, k);
    const Matrix offdiag = path_block(rho, 0, 1);
    auto objective = [&](const Matrix& u, const Matrix& v) {
        return (filter * v * offdiag * u.adjoint()).trace().real();
    };

    Rng rng(seed);
    const int restarts = std::max(1, std::min(4, iters / 500));
    const int itersPerRestart = iters / restarts;

    Matrix bestU = Matrix::Identity(n, n), bestV = Matrix::Identity(n, n);
    double best = objective(bestU, bestV);

    for (int restart = 0; restart < restarts; ++restart) {
        Matrix u = restart == 0 ? Matrix::Identity(n, n) : rng.unitary(n);
        Matrix v = restart == 0 ? Matrix::Identity(n, n) : rng.unitary(n);
        double current = objective(u, v);
        double scale = 0.5;
        int sinceAccept = 0;
        for (int it = 0; it < itersPerRestart; ++it) {
            // perturb one side or both; shrink moves as rejections accumulate
            const int side = static_cast<int>(rng.uniform() * 3.0) % 3;
            Matrix uTry = u;
            Matrix vTry = v;
            if (side != 1) {
                const Matrix gu = rng.ginibre(n, n);
                uTry = unitary_exp_skew(scale * 0.5 * (gu - gu.adjoint())) * u;
            }
            if (side != 0) {
                const Matrix gv = rng.ginibre(n, n);
                vTry = unitary_exp_skew(scale * 0.5 * (gv - gv.adjoint())) * v;
            }
            const double trial = objective(uTry, vTry);
            if (trial > current) {
                u = uTry;
                v = vTry;
                current = trial;
                sinceAccept = 0;
                scale = std::min(scale * 1.1, 1.0);
            } else if (++sinceAccept > 12) {
                scale = std::max(scale * 0.5, 1e-5);
                sinceAccept = 0;
            }
        }
        if (current > best) {
            best = current;
            bestU = u;
            bestV = v;
        }
    }
    return {bestU, bestV, best};
}

double single_u_probability(const DensityOperator& rho, const Matrix& u) {
    const Eigen::Index n = internal_dim(rho);
    check_unitary(u, n, "U");
    return 0.5 + (path_block(rho, 0, 1) * u.adjoint()).trace().real();
}

std::pair<Matrix, double> optimal_single_u(const DensityOperator& rho) {
    // Re Tr(C U†) over unitary U peaks at the polar unitary of C = W S X†
    Eigen::JacobiSVD<Matrix> svd(path_block(rho, 0, 1), Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix u = svd.matrixU() * svd.matrixV().adjoint();
    return {u, 0.5 + svd.singularValues().sum()};
}

}  // namespace supq
