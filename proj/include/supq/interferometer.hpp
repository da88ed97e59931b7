// interferometer.hpp - two-path protocol whose optimized count difference
// realizes the Ky-Fan norm measures

#pragma once

#include <tuple>

#include "supq/core.hpp"

namespace supq {

// States live on internal ⊗ path with the path index slowest, so the two paths
// are the decomposition [N, N] and <s|rho|s'> is an N x N internal block.

struct ProtocolConfig {
    int internalDim = 1;
    int filterDim = 1;  // rank of the internal filter subspace
    enum class Mode { TraceNormSingleU, GeneralUV } mode = Mode::GeneralUV;
};

struct ProtocolOutcome {
    double p1 = 0.0, p2 = 0.0;  // joint path-and-filter probabilities (need not sum to 1)
    double q1 = 0.0, q2 = 0.0, r = 0.0;
};

// q1 = Tr(PC V <1|rho|1> V†)/2, q2 = Tr(PC U <2|rho|2> U†)/2,
// r = Re Tr(PC V <1|rho|2> U†); p1/p2 = q1 + q2 ± r
ProtocolOutcome run_protocol(const DensityOperator& rho, const Matrix& u, const Matrix& v,
                             const Matrix& filter);

// optimizers built from the SVD of <1|rho|2>; the attained (p1-p2)/2 equals the
// Ky-Fan measure of order k
std::tuple<Matrix, Matrix, double> optimal_uv(const DensityOperator& rho, int k);

// random-restart hill climbing over unitary pairs (the "experimenter" loop)
std::tuple<Matrix, Matrix, double> stochastic_maximize(const DensityOperator& rho, int k, int iters,
                                                       std::uint64_t seed);

// single-unitary trace-norm protocol: p = 1/2 + Re Tr(<1|rho|2> U†)
double single_u_probability(const DensityOperator& rho, const Matrix& u);

// maximizer from the polar decomposition; the maximal p is 1/2 + ||<1|rho|2>||_Tr
std::pair<Matrix, double> optimal_single_u(const DensityOperator& rho);

}  // namespace supq
