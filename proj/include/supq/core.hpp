// core.hpp - validated states, subspace decompositions, pinching/blocks, entropies

#pragma once

#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "supq/types.hpp"

namespace supq {

// Ordered list of orthogonal-subspace dimensions [N_1,...,N_K] partitioning the
// ambient basis into contiguous ranges. Arbitrary projector families are reduced
// to this representation through align_basis.
struct Decomposition {
    std::vector<int> dims;

    explicit Decomposition(std::vector<int> d) : dims(std::move(d)) {
        if (dims.size() < 2) fail(Errc::DimensionMismatch, "decomposition needs K >= 2 subspaces");
        for (int n : dims)
            if (n < 1) fail(Errc::DimensionMismatch, "decomposition subspaces must have dim >= 1");
    }

    int blocks() const { return static_cast<int>(dims.size()); }
    int total() const { return std::accumulate(dims.begin(), dims.end(), 0); }
    int offset(int k) const { return std::accumulate(dims.begin(), dims.begin() + k, 0); }

    void check_index(int k) const {
        if (k < 0 || k >= blocks()) fail(Errc::IndexOutOfRange, "block index out of range");
    }
    void check_dim(Eigen::Index ambient) const {
        if (ambient != total()) fail(Errc::DimensionMismatch, "decomposition does not span ambient space");
    }
};

// Hermitian, positive semidefinite, unit-trace matrix. Construct via make_density.
class DensityOperator {
public:
    const Matrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

    friend DensityOperator make_density(const Matrix& entries);

private:
    explicit DensityOperator(Matrix m) : m_(std::move(m)) {}
    Matrix m_;
};

// Ensemble (lambda_l, |psi_l>) of normalized vectors with non-negative weights.
struct PureStateEnsemble {
    RealVector weights;
    std::vector<Vector> vectors;

    Matrix assemble() const {
        Matrix rho = Matrix::Zero(vectors.front().size(), vectors.front().size());
        for (std::size_t l = 0; l < vectors.size(); ++l)
            rho += weights(static_cast<Eigen::Index>(l)) * (vectors[l] * vectors[l].adjoint());
        return rho;
    }
};

// rho = sum_k p_k sigma_k + sum_{k!=k'} sqrt(p_k p_k') sqrt(sigma_k) D^(kk') sqrt(sigma_k'),
// every matrix ambient-embedded (zero outside its block pair).
struct BlockForm {
    RealVector probs;
    std::vector<Matrix> diagStates;             // sigma_k, zero operator when p_k = 0
    std::map<std::pair<int, int>, Matrix> offDiag;  // D^(kk'), k != k'

    Matrix reassemble(const Decomposition& L) const;
};

// --------------------------- construction & validation ----------------------

// Validates Hermiticity (1e-10), trace (error beyond 1e-6, renormalize below),
// spectrum (error below -1e-6, clip-and-renormalize dust above).
DensityOperator make_density(const Matrix& entries);

// --------------------------- pinching and blocks ----------------------------

// sum_k P_k Q P_k on an arbitrary operator
Matrix pinch_matrix(const Matrix& q, const Decomposition& L);

// pinch with respect to arbitrary disjoint index sets (entries whose row and
// column fall in the same set survive; everything else is zeroed)
Matrix pinch_sets(const Matrix& q, const std::vector<std::vector<int>>& sets);

DensityOperator pinch(const DensityOperator& rho, const Decomposition& L);

// P_i rho P_j embedded in the ambient dimension
Matrix block(const DensityOperator& rho, const Decomposition& L, int i, int j);

BlockForm block_form(const DensityOperator& rho, const Decomposition& L);

// --------------------------- spectra and entropies --------------------------

// eigenvalues of the Hermitian part, ascending (Eigen convention)
RealVector eigenvalues(const Matrix& hermitian);

// -sum lambda ln lambda in nats, 0 ln 0 := 0
double von_neumann_entropy(const DensityOperator& rho);
double entropy_of_spectrum(const RealVector& lambda);

// S(rho||sigma) in nats; +infinity when supp(rho) leaks outside supp(sigma)
// (support threshold 1e-12 on eigenvalues)
double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma);

// full singular-value list of an ambient-embedded operator, non-increasing
RealVector singular_values(const Matrix& c);

// Moore-Penrose pseudo-inverse of a Hermitian PSD matrix
// (eigenvalues below 1e-12 * lambda_max treated as zero)
Matrix psd_pseudo_inverse(const Matrix& hermitianPsd);
Matrix psd_sqrt(const Matrix& hermitianPsd);

// --------------------------- basis alignment --------------------------------

// Rotates rho so that the ranges of the given orthogonal projectors become
// contiguous basis ranges; returns (U rho U†, dims).
std::pair<DensityOperator, Decomposition> align_basis(const DensityOperator& rho,
                                                      const std::vector<Matrix>& projectors);

// --------------------------- tensor utilities -------------------------------

// Kronecker product, A index slowest
Matrix kron(const Matrix& a, const Matrix& b);

// partial trace keeping the listed factors (in their original order)
Matrix partial_trace(const Matrix& m, const std::vector<int>& factorDims,
                     const std::vector<int>& keep);

}  // namespace supq
