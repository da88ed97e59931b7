// secondq.hpp - occupation-representation lift, induced measures, and the
// structured minimizing-separable-state machinery

#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "supq/measures.hpp"

namespace supq {

// Isometry from the K-subspace space onto the single-particle sector of the
// vacuum-extended product space prod_k (N_k + 1). Factor k's level 0 is the
// vacuum, levels 1..N_k its modes; occupation indices are row-major (factor K
// varies fastest).
struct LiftMap {
    Decomposition source;
    std::vector<int> targetDims;  // N_k + 1 per factor
    Matrix isometry;              // targetDim x sourceDim

    LiftMap(Decomposition src, std::vector<int> target, Matrix m)
        : source(std::move(src)), targetDims(std::move(target)), isometry(std::move(m)) {}

    Eigen::Index targetDim() const { return isometry.rows(); }

    // flat occupation index of per-factor levels
    int occupation_index(const std::vector<int>& levels) const;

    // per factor k, the target indices spanning "one particle in factor k"
    std::vector<std::vector<int>> single_particle_sets() const;
};

LiftMap build_lift(const Decomposition& L, int targetCap = 4096);

DensityOperator lift_state(const LiftMap& m, const DensityOperator& rho);

// E evaluated on the lifted state
double induced_measure(const LiftMap& m, const std::function<double(const DensityOperator&)>& e,
                       const DensityOperator& rho);

// entanglement surrogates used to instantiate induced measures
std::function<double(const DensityOperator&)> lifted_relent_functional(const LiftMap& m);
std::function<double(const DensityOperator&)> lifted_formation_functional(const LiftMap& m);

// --------------------------- structured minimizers --------------------------

struct BipartiteSplit {
    int dimA = 1, dimB = 1;  // ambient = dimA * dimB, A-major index a*dimB + b

    void check_dim(Eigen::Index ambient) const {
        if (static_cast<Eigen::Index>(dimA) * dimB != ambient)
            fail(Errc::DimensionMismatch, "split does not factor the ambient dimension");
    }
};

// Paired subspaces (L^(1)_k, L^(2)_k): pairs[t] = (block of d1, block of d2),
// all first components distinct and all second components distinct.
struct PairedBlocks {
    Decomposition d1, d2;
    std::vector<std::pair<int, int>> pairs;

    // ambient indices of the product subspace of pair t
    std::vector<int> pair_indices(const BipartiteSplit& split, int t) const;
    std::vector<std::vector<int>> all_pair_indices(const BipartiteSplit& split) const;
    bool has_one_dim_member(int t) const;
};

// the (vacuum+modes) pair structure carried by a K = 2 lift: pair 1 is
// modes(1) ⊗ vac(2), pair 2 is vac(1) ⊗ modes(2)
BipartiteSplit lifted_split(const LiftMap& m);
PairedBlocks lifted_pair_blocks(const LiftMap& m);

// Pinch of sigma over the paired product blocks; each block with a
// one-dimensional member is a product state, making the result separable.
// Requires sigma to be supported on the union of the pair blocks.
DensityOperator candidate_min_separable(const DensityOperator& sigma, const BipartiteSplit& split,
                                        const PairedBlocks& pairL);

struct FirstOrderReport {
    int samples = 0;
    int nonNegativeViolations = 0;  // directional derivative below -1e-4
    int rangeViolations = 0;        // |1 - f'| above 1 + 1e-3
    double minDerivative = 0.0;
    bool pass = false;
};

// Estimates d/dx S(sigma || (1-x) rhoStar + x rho) at x = 0+ along random pure
// product directions (forward differences at 1e-5 and 1e-6, Richardson-combined).
FirstOrderReport first_order_min_check(const DensityOperator& sigma, const DensityOperator& rhoStar,
                                       const BipartiteSplit& split, int samples, std::uint64_t seed);

struct EsIdentityReport {
    double relEntropyToCandidate = 0.0;  // S(sigma || rho*)
    double blockRelEntropy = 0.0;        // S(Pi(sigma)) - S(sigma) over the pair blocks
    double diff = 0.0;
    bool pass = false;  // |diff| <= 1e-9
};

EsIdentityReport es_decomposition_identity(const DensityOperator& sigma, const BipartiteSplit& split,
                                           const PairedBlocks& pairL);

// entanglement of formation of a two-qubit state from the spin-flip spectrum, nats
double wootters_ef(const DensityOperator& rho2q);

struct EfCheckReport {
    double ef = 0.0;                 // oracle value (pure-state entropy or Wootters)
    double af = 0.0;                 // optimizer value over the pair blocks
    double blockTermSum = 0.0;       // sum_k p_k E_f(sigma_k)
    bool inequalityHolds = false;    // ef >= blockTermSum + af - tol
    bool equalityApplicable = false; // one-dimensional member in every pair
    bool equalityHolds = false;      // |ef - af| within optimizer tolerance
    std::string oracle;
};

// Checks the formation decomposition inequality (and equality for one-dim pair
// structures) on instances where E_f has an oracle: pure states or 2x2 splits.
EfCheckReport ef_superadditivity_check(const DensityOperator& rho, const BipartiteSplit& split,
                                       const PairedBlocks& pairL, const AfOptions& opts = {});

}  // namespace supq
