// types.hpp - shared aliases, error type, and deterministic random sampling

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace supq {

using Cx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

enum class Errc {
    NotSquare,
    NonFinite,
    NotHermitian,
    TraceDeviation,
    NegativeEigenvalue,
    DimensionMismatch,
    IndexOutOfRange,
    NotAProjector,
    NotOrthogonal,
    IncompleteResolution,
    KOutOfRange,
    NotBipartite,
    InvalidSpectrum,
    TargetTooLarge,
    UnsupportedStructure,
    SupportFailure,
    NotTracePreservingOnSector,
    NotSubspacePreserving,
    NotUnitary,
    NotProjector,
    InvalidRates,
    ValidationFailure,
    CoefficientMatrixTooLarge,
    ParseError,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool finite_entries(const Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    return true;
}

// Deterministic sampling. std::<dist> implementations differ across standard
// libraries, so uniform/gaussian draws are mapped from raw engine output here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    // child seed for a parallelizable sub-stream
    std::uint64_t split(std::uint64_t index) const {
        return seed_ ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    }

    double uniform() {  // [0,1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    double gaussian() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * EIGEN_PI * u2);
    }

    Cx cgaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return Cx(re, im) / std::sqrt(2.0);
    }

    Matrix ginibre(Eigen::Index rows, Eigen::Index cols) {
        Matrix g(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = cgaussian();
        return g;
    }

    Vector state_vector(Eigen::Index n) {
        Vector v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = cgaussian();
        return v / v.norm();
    }

    // Haar-distributed unitary via QR of a Ginibre matrix with phase fixing
    Matrix unitary(Eigen::Index n) {
        const Matrix g = ginibre(n, n);
        Eigen::HouseholderQR<Matrix> qr(g);
        Matrix q = qr.householderQ();
        const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (Eigen::Index j = 0; j < n; ++j) {
            const Cx d = r(j, j);
            if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
        }
        return q;
    }

    // full-rank random density matrix G G† / Tr
    Matrix density(Eigen::Index n) {
        const Matrix g = ginibre(n, n);
        Matrix rho = g * g.adjoint();
        rho /= rho.trace().real();
        return rho;
    }

    // random probability vector (normalized exponentials)
    RealVector simplex(Eigen::Index n) {
        RealVector w(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            double u = uniform();
            while (u <= 0.0) u = uniform();
            w(i) = -std::log(u);
        }
        return w / w.sum();
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

}  // namespace supq
