// verify.hpp - executable property suites behind the `verify` CLI subcommand

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "supq/channels.hpp"
#include "supq/dynamics.hpp"
#include "supq/interferometer.hpp"

namespace supq {

struct PropertyResult {
    std::string name;
    bool pass = false;
    int samples = 0;
    std::string details;
};

struct SuiteResult {
    std::string suite;
    std::vector<PropertyResult> results;

    bool all_pass() const {
        for (const auto& r : results)
            if (!r.pass) return false;
        return true;
    }
};

SuiteResult verify_entropy(int samples, std::uint64_t seed);
SuiteResult verify_axioms(int samples, std::uint64_t seed);
SuiteResult verify_formation(int samples, std::uint64_t seed);
SuiteResult verify_secondq(int samples, std::uint64_t seed);
SuiteResult verify_channels(int samples, std::uint64_t seed);
SuiteResult verify_dynamics(int samples, std::uint64_t seed);
SuiteResult verify_interferometer(int samples, std::uint64_t seed);
std::vector<SuiteResult> verify_all(int samples, std::uint64_t seed);

// --------------------------- shared construction helpers --------------------

// random decomposition with block dims up to the given bound (K = 2)
Decomposition random_bipartite_dims(Rng& rng, int maxBlockDim);

// random density operator with an eigenvalue floor (mixing with the identity)
DensityOperator random_state(Rng& rng, int dim, double identityMix = 0.0);

// block-local unitary ⊕_j U_j
Matrix random_block_local_unitary(Rng& rng, const Decomposition& L);

// permutation + dims turning the product of two decompositions into contiguous
// blocks: block (i, j) of L1 ⊗ L2 in A-major index order
std::pair<std::vector<int>, Decomposition> product_decomposition(const Decomposition& l1,
                                                                 const Decomposition& l2);
Matrix apply_permutation(const Matrix& m, const std::vector<int>& order);

// channels used across the harnesses
KrausChannel random_sp_channel(Rng& rng, const Decomposition& L, int krausPerBlock);
KrausChannel random_lsp_channel(Rng& rng, const LiftMap& lift, int krausPerFactor,
                                ChannelClassification* cls = nullptr);
KrausChannel random_generic_channel(Rng& rng, int dim, int nKraus);
// path-coherent relaxation toward the internal ground state (SP but not LSP)
KrausChannel ground_reset_channel(int levels, double resetWeight);

}  // namespace supq
