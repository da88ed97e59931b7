// dynamics.hpp - Lindblad relaxation models on the two-path interferometer and
// the closed-form references they are checked against

#pragma once

#include <string>
#include <vector>

#include "supq/measures.hpp"

namespace supq {

// dr/dt = -i[H, r] + sum_k L_k r L_k† - (1/2){L_k† L_k, r}; hbar = 1, energies in
// units of a reference energy, t in units of its inverse
struct LindbladGenerator {
    Matrix hamiltonian;
    std::vector<Matrix> lindblads;

    static LindbladGenerator make(Matrix h, std::vector<Matrix> ls);
    Eigen::Index dim() const { return hamiltonian.rows(); }
};

// column-stacking vectorization of the generator, dim^2 x dim^2
Matrix liouvillian(const LindbladGenerator& gen);

// direct action F(rho) on a matrix
Matrix lindblad_action(const LindbladGenerator& gen, const Matrix& rho);

// exp(t F) rho0 via the dense superoperator exponential; revalidates the output
DensityOperator evolve(const LindbladGenerator& gen, const DensityOperator& rho0, double t);

// fixed-step RK4 on the master equation, for cross-validation of evolve
DensityOperator evolve_rk4(const LindbladGenerator& gen, const DensityOperator& rho0, double t,
                           double step);

enum class ScenarioKind { NonlocalF1, LocalF2, Mixture };

// Relaxation model: internal levels times two paths, stored path-major so the
// path decomposition is dims [N, N]. rates(k, k') is the decay rate from level
// k' to level k (upper triangle, diagonal entries act as dephasing).
struct Scenario {
    ScenarioKind kind = ScenarioKind::NonlocalF1;
    int levels = 2;
    double w1 = 0.8, w2 = 0.2;  // mixture weights
    Eigen::MatrixXd rates;
    RealVector hDiag;           // internal energies, ascending

    // H = 0, uniform decay g from every level to the ground state
    static Scenario simple(ScenarioKind kind, int levels, double g);
    // H eigenvalues uniform in [0,1] (sorted), rates uniform in [0.2, 1.0]
    static Scenario randomized(ScenarioKind kind, int levels, std::uint64_t seed);

    std::string kind_name() const;
};

LindbladGenerator build_scenario(const Scenario& s);

// (identity_N / N) ⊗ |+><+| in path-major layout
DensityOperator initial_state(int levels);

// closed forms for the simple models
double analytic_nonlocal(int levels, double g, double t, int k);
double analytic_local(int levels, double g, double t, int k);

struct TimeSeries {
    std::vector<double> times;
    int levels = 0;
    std::vector<std::vector<double>> kyfan;  // row per time, A_(1)..A_(N)
    std::vector<double> relEntropy;          // A_S
    std::vector<double> predictability;

    std::string to_csv() const;  // header t,A_1,...,A_N,A_S,predictability
};

TimeSeries run_timeseries(const Scenario& s, const std::vector<double>& grid);

}  // namespace supq
