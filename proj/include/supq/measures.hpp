// measures.hpp - superposition measures: relative-entropy, formation, Ky-Fan and
// other unitarily invariant norm measures, predictability and its bounds

#pragma once

#include <optional>
#include <vector>

#include "supq/core.hpp"

namespace supq {

struct MeasureReport {
    double value = 0.0;
    std::optional<DensityOperator> blockDiagonalWitness;  // Pi(rho) for the relative-entropy measure
    std::optional<PureStateEnsemble> ensembleWitness;     // achieving ensemble for the formation measure
    bool converged = true;
};

struct NormSpec {
    enum class Kind { KyFan, Trace, SchattenP };
    Kind kind = Kind::Trace;
    int k = 1;       // KyFan order
    double p = 1.0;  // Schatten exponent, finite >= 1

    static NormSpec kyfan(int k) { return {Kind::KyFan, k, 1.0}; }
    static NormSpec trace() { return {Kind::Trace, 1, 1.0}; }
    static NormSpec schatten(double p) {
        if (!(p >= 1.0) || !std::isfinite(p)) fail(Errc::KOutOfRange, "Schatten exponent must be finite >= 1");
        return {Kind::SchattenP, 1, p};
    }
};

// S(Pi(rho)) - S(rho); witness is the pinched state
MeasureReport a_s(const DensityOperator& rho, const Decomposition& L);

// min over {Pi(rho)} and `trials` random block-diagonal states of S(rho||sigma);
// the minimum is attained at Pi(rho), so this equals a_s up to 1e-9
double a_s_min_check(const DensityOperator& rho, const Decomposition& L, int trials,
                     std::uint64_t seed);

struct AfOptions {
    int starts = 16;
    int maxIters = 2000;
    int stallWindow = 100;    // stop when no improvement beyond stallTol over this many iterations
    double stallTol = 1e-9;
    std::uint64_t seed = 20240915;
    int ensembleSize = 0;     // 0 -> rank^2
};

// infimum over pure-state ensembles of the mean pinching entropy, searched over
// the purification freedom (m x r orthonormal-column matrices); the returned
// value is an upper bound on the true infimum by construction
MeasureReport a_f(const DensityOperator& rho, const Decomposition& L, const AfOptions& opts = {});

// sum of the k largest singular values of the (1,2) block; K = 2 only
double kyfan_measure(const DensityOperator& rho, const Decomposition& L, int k);

// Ky-Fan norm of full order min(N1, N2)
double trace_measure(const DensityOperator& rho, const Decomposition& L);

double norm_measure(const DensityOperator& rho, const Decomposition& L, const NormSpec& spec);

struct DominanceReport {
    std::vector<double> kyfanFirst, kyfanSecond;  // A_(k) for k = 1..min(N1,N2)
    bool kyfanDominated = false;                  // A_(k)(rho) <= A_(k)(sigma) for all k
    std::vector<bool> suppliedDominated;          // per requested NormSpec
    bool allSuppliedDominated = false;
};

DominanceReport dominance_check(const DensityOperator& rho, const DensityOperator& sigma,
                                const Decomposition& L, const std::vector<NormSpec>& specs);

// |Tr(P1 rho) - Tr(P2 rho)|; K = 2 only
double predictability(const DensityOperator& rho, const Decomposition& L);

// sqrt(p1 p2) sum_{l<=k} sqrt(lambda_l(sigma1) lambda_l(sigma2)) with sorted,
// zero-padded marginal spectra; 0 when p1 p2 = 0
double kyfan_bound(const DensityOperator& rho, const Decomposition& L, int k);

// equality-achieving state for the predictability bound, dims [len(s1), len(s2)]
DensityOperator sharp_state(double p1, std::vector<double> spectrum1, std::vector<double> spectrum2);

namespace detail {

// Formation-measure objective over the purification matrix T (m x r, T†T = I):
// member l is psi_l ~ sum_j T_lj sqrt(mu_j) |e_j>. Exposed for gradient tests.
struct AfWorkspace {
    Matrix w;                       // dim x r, eigenvectors scaled by sqrt(mu)
    std::vector<int> blockOffsets;  // leading offset per block
    std::vector<int> blockDims;
};

AfWorkspace af_workspace(const DensityOperator& rho, const Decomposition& L);
double af_objective(const AfWorkspace& ws, const Matrix& t);
Matrix af_gradient(const AfWorkspace& ws, const Matrix& t);  // Wirtinger d/d(conj T)
Matrix qf_retract(const Matrix& x);                          // thin QR factor, positive diagonal

}  // namespace detail

}  // namespace supq
