// channels.hpp - Kraus-form CPTP maps, subspace-preserving classification, and
// monotonicity/contraction harnesses

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "supq/measures.hpp"
#include "supq/secondq.hpp"

namespace supq {

// CPTP map as a finite Kraus list; sum K† K = identity within 1e-10
struct KrausChannel {
    std::vector<Matrix> kraus;

    static KrausChannel from_kraus(std::vector<Matrix> ops, double tol = 1e-10);

    Eigen::Index dim() const { return kraus.front().rows(); }
    Matrix apply_matrix(const Matrix& q) const;
};

// Kraus family with sum K† K <= identity (trace non-increasing)
struct SubChannel {
    std::vector<Matrix> ops;

    static SubChannel from_ops(std::vector<Matrix> ops, double tol = 1e-10);
    Eigen::Index dim() const { return ops.front().rows(); }
};

DensityOperator apply(const KrausChannel& phi, const DensityOperator& rho);

// Tr(P1 phi(rho)) = Tr(P1 rho) for all rho, tested via the adjoint identity
// phi†(P1) = P1; K = 2 only
bool is_sp(const KrausChannel& phi, const Decomposition& L);

// Pi ∘ phi ∘ Pi = phi ∘ Pi, checked on a Hermitian spanning set of the
// block-diagonal subspace
bool is_block_preserving(const KrausChannel& phi, const Decomposition& L);

struct ChannelClassification {
    bool isSP = false;
    bool isBlockPreserving = false;
    std::optional<std::pair<KrausChannel, KrausChannel>> lspCertificate;
};

ChannelClassification classify(const KrausChannel& phi, const Decomposition& L);

// Compression M†[phi1 ⊗ phi2](M rho M†)M of a product channel on the lifted
// factors. Rejects local channels that leak out of the single-particle sector
// or whose compression moves weight between the paths.
KrausChannel make_lsp(const LiftMap& m, const KrausChannel& phi1, const KrausChannel& phi2,
                      ChannelClassification* classification = nullptr);

struct MeasureSelector {
    enum class Kind { RelEntropy, KyFan, Trace, SchattenP };
    Kind kind = Kind::RelEntropy;
    int k = 1;
    double p = 2.0;

    std::string name() const;
    double evaluate(const DensityOperator& rho, const Decomposition& L) const;
};

struct MonotonicityReport {
    std::string measure;
    int samples = 0;
    int violations = 0;       // increases beyond tolerance 1e-8
    double maxIncrease = 0.0; // most positive A(phi(rho)) - A(rho) observed
    std::optional<DensityOperator> witness;
    bool pass = false;
};

// Samples random states (plus any designated ones) and compares the selected
// measure before/after the channel; a positive maxIncrease also serves as a
// search result for channels expected to increase a measure.
MonotonicityReport monotonicity_harness(const KrausChannel& phi, const Decomposition& L,
                                        const MeasureSelector& selector, int samples,
                                        std::uint64_t seed,
                                        const std::vector<DensityOperator>& designated = {});

struct ContractionReport {
    double lhs = 0.0;  // ||sum C_kl V_k Q W_l†||_Tr
    double rhs = 0.0;  // ||Q||_Tr
    bool pass = false;
};

// trace-norm contraction for coefficient-mixed sub-channel sandwiches
ContractionReport trace_contraction_check(const Matrix& coeff, const SubChannel& v,
                                          const SubChannel& w, const Matrix& q);

}  // namespace supq
