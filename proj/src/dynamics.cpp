#include "supq/dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace supq {

namespace {

Matrix basis_op(int n, int i, int j) {
    Matrix m = Matrix::Zero(n, n);
    m(i, j) = 1.0;
    return m;
}

Vector vectorize(const Matrix& m) {
    return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix devectorize(const Vector& v, Eigen::Index n) {
    return Eigen::Map<const Matrix>(v.data(), n, n);
}

DensityOperator revalidate(const Matrix& m) {
    try {
        return make_density(0.5 * (m + m.adjoint()).eval());
    } catch (const Error& e) {
        fail(Errc::ValidationFailure, std::string("integrator output is not a state: ") + e.what());
    }
}

void append_number(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    out += buf;
}

}  // namespace

LindbladGenerator LindbladGenerator::make(Matrix h, std::vector<Matrix> ls) {
    if (h.rows() != h.cols()) fail(Errc::NotSquare, "Hamiltonian must be square");
    if (max_abs(h - h.adjoint()) > 1e-10) fail(Errc::NotHermitian, "Hamiltonian must be Hermitian");
    for (const auto& l : ls)
        if (l.rows() != h.rows() || l.cols() != h.cols())
            fail(Errc::DimensionMismatch, "Lindblad operator dimension mismatch");
    return {std::move(h), std::move(ls)};
}

Matrix liouvillian(const LindbladGenerator& gen) {
    const Eigen::Index n = gen.dim();
    const Matrix id = Matrix::Identity(n, n);
    const Cx i(0.0, 1.0);

    Matrix sup = -i * (kron(id, gen.hamiltonian) - kron(gen.hamiltonian.transpose(), id));
    for (const auto& l : gen.lindblads) {
        const Matrix gram = l.adjoint() * l;
        sup += kron(l.conjugate(), l);
        sup -= 0.5 * kron(id, gram);
        sup -= 0.5 * kron(gram.transpose(), id);
    }
    return sup;
}

Matrix lindblad_action(const LindbladGenerator& gen, const Matrix& rho) {
    const Cx i(0.0, 1.0);
    Matrix out = -i * (gen.hamiltonian * rho - rho * gen.hamiltonian);
    for (const auto& l : gen.lindblads) {
        const Matrix gram = l.adjoint() * l;
        out += l * rho * l.adjoint() - 0.5 * (gram * rho + rho * gram);
    }
    return out;
}

DensityOperator evolve(const LindbladGenerator& gen, const DensityOperator& rho0, double t) {
    if (gen.dim() != rho0.dim()) fail(Errc::DimensionMismatch, "generator/state dimension mismatch");
    if (t < 0.0) fail(Errc::InvalidRates, "evolution time must be non-negative");
    if (t == 0.0) return rho0;
    const Matrix propagator = (t * liouvillian(gen)).exp();
    return revalidate(devectorize(propagator * vectorize(rho0.matrix()), rho0.dim()));
}

DensityOperator evolve_rk4(const LindbladGenerator& gen, const DensityOperator& rho0, double t,
                           double step) {
    if (step <= 0.0) fail(Errc::InvalidRates, "RK4 step must be positive");
    Matrix rho = rho0.matrix();
    double remaining = t;
    while (remaining > 0.0) {
        const double h = std::min(step, remaining);
        const Matrix k1 = lindblad_action(gen, rho);
        const Matrix k2 = lindblad_action(gen, rho + 0.5 * h * k1);
        const Matrix k3 = lindblad_action(gen, rho + 0.5 * h * k2);
        const Matrix k4 = lindblad_action(gen, rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        remaining -= h;
    }
    return revalidate(rho);
}

Scenario Scenario::simple(ScenarioKind kind, int levels, double g) {
    if (levels < 2) fail(Errc::InvalidRates, "scenario needs at least two levels");
    if (g < 0.0) fail(Errc::InvalidRates, "rate must be non-negative");
    Scenario s;
    s.kind = kind;
    s.levels = levels;
    s.rates = Eigen::MatrixXd::Zero(levels, levels);
    s.rates.row(0).setConstant(g);
    s.hDiag = RealVector::Zero(levels);
    return s;
}

Scenario Scenario::randomized(ScenarioKind kind, int levels, std::uint64_t seed) {
    if (levels < 2) fail(Errc::InvalidRates, "scenario needs at least two levels");
    Scenario s;
    s.kind = kind;
    s.levels = levels;
    Rng rng(seed);
    s.hDiag = RealVector::Zero(levels);
    for (int k = 0; k < levels; ++k) s.hDiag(k) = rng.uniform();
    std::sort(s.hDiag.data(), s.hDiag.data() + levels);
    s.rates = Eigen::MatrixXd::Zero(levels, levels);
    for (int k = 0; k < levels; ++k)
        for (int kp = k; kp < levels; ++kp) s.rates(k, kp) = rng.uniform(0.2, 1.0);
    return s;
}

std::string Scenario::kind_name() const {
    switch (kind) {
        case ScenarioKind::NonlocalF1: return "f1";
        case ScenarioKind::LocalF2: return "f2";
        case ScenarioKind::Mixture: return "f3";
    }
    return "?";
}

LindbladGenerator build_scenario(const Scenario& s) {
    const int n = s.levels;
    if (n < 2) fail(Errc::InvalidRates, "scenario needs at least two levels");
    if (s.rates.rows() != n || s.rates.cols() != n)
        fail(Errc::InvalidRates, "rate matrix must be levels x levels");
    if (s.rates.minCoeff() < 0.0) fail(Errc::InvalidRates, "rates must be non-negative");
    if (s.kind == ScenarioKind::Mixture &&
        (s.w1 < 0.0 || s.w2 < 0.0 || std::abs(s.w1 + s.w2 - 1.0) > 1e-10))
        fail(Errc::InvalidRates, "mixture weights must be non-negative and sum to 1");

    const Matrix id2 = Matrix::Identity(2, 2);
    const Matrix path1 = basis_op(2, 0, 0);
    const Matrix path2 = basis_op(2, 1, 1);

    std::vector<Matrix> ls;
    auto add_ops = [&](double weight, bool local) {
        if (weight <= 0.0) return;
        const double scale = std::sqrt(weight);
        for (int k = 0; k < n; ++k) {
            for (int kp = k; kp < n; ++kp) {
                const double g = s.rates(k, kp);
                if (g <= 0.0) continue;
                const Matrix jump = std::sqrt(g) * basis_op(n, k, kp);
                if (local) {
                    ls.push_back(scale * kron(path1, jump));
                    ls.push_back(scale * kron(path2, jump));
                } else {
                    ls.push_back(scale * kron(id2, jump));
                }
            }
        }
    };

    switch (s.kind) {
        case ScenarioKind::NonlocalF1:
            add_ops(1.0, false);
            break;
        case ScenarioKind::LocalF2:
            add_ops(1.0, true);
            break;
        case ScenarioKind::Mixture:
            add_ops(s.w1, false);
            add_ops(s.w2, true);
            break;
    }

    Matrix hInternal = Matrix::Zero(n, n);
    for (int k = 0; k < n; ++k) hInternal(k, k) = s.hDiag.size() == n ? s.hDiag(k) : 0.0;
    return LindbladGenerator::make(kron(id2, hInternal), std::move(ls));
}

DensityOperator initial_state(int levels) {
    if (levels < 1) fail(Errc::InvalidRates, "need at least one level");
    Matrix plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    const Matrix internal = Matrix::Identity(levels, levels) / static_cast<double>(levels);
    return make_density(kron(plus, internal));
}

double analytic_nonlocal(int levels, double g, double t, int k) {
    if (k < 1 || k > levels) fail(Errc::KOutOfRange, "k must lie in 1..levels");
    if (g <= 0.0 || t < 0.0) fail(Errc::InvalidRates, "need g > 0 and t >= 0");
    const double n = static_cast<double>(levels);
    if (k == 1) return 1.0 / (2.0 * n) + (1.0 - std::exp(-g * t)) * (n - 1.0) / (2.0 * n);
    return 0.5 - std::exp(-g * t) * (0.5 - static_cast<double>(k) / (2.0 * n));
}

double analytic_local(int levels, double g, double t, int k) {
    if (k < 1 || k > levels) fail(Errc::KOutOfRange, "k must lie in 1..levels");
    if (g <= 0.0 || t < 0.0) fail(Errc::InvalidRates, "need g > 0 and t >= 0");
    return static_cast<double>(k) * std::exp(-g * t) / (2.0 * static_cast<double>(levels));
}

std::string TimeSeries::to_csv() const {
    std::string out = "t";
    for (int k = 1; k <= levels; ++k) out += ",A_" + std::to_string(k);
    out += ",A_S,predictability\n";
    for (std::size_t r = 0; r < times.size(); ++r) {
        append_number(out, times[r]);
        for (double v : kyfan[r]) {
            out += ',';
            append_number(out, v);
        }
        out += ',';
        append_number(out, relEntropy[r]);
        out += ',';
        append_number(out, predictability[r]);
        out += '\n';
    }
    return out;
}

TimeSeries run_timeseries(const Scenario& s, const std::vector<double>& grid) {
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1]) fail(Errc::InvalidRates, "time grid must be increasing");
    if (!grid.empty() && grid.front() < 0.0) fail(Errc::InvalidRates, "times must be non-negative");

    const LindbladGenerator gen = build_scenario(s);
    const Matrix liou = liouvillian(gen);
    const Decomposition paths({s.levels, s.levels});

    TimeSeries ts;
    ts.levels = s.levels;

    DensityOperator rho = initial_state(s.levels);
    double tPrev = 0.0;
    double cachedDt = -1.0;
    Matrix cachedProp;
    for (double t : grid) {
        const double dt = t - tPrev;
        if (dt > 0.0) {
            if (dt != cachedDt) {
                cachedProp = (dt * liou).exp();
                cachedDt = dt;
            }
            rho = revalidate(devectorize(cachedProp * vectorize(rho.matrix()), rho.dim()));
        }
        tPrev = t;

        ts.times.push_back(t);
        std::vector<double> row;
        for (int k = 1; k <= s.levels; ++k) row.push_back(kyfan_measure(rho, paths, k));
        ts.kyfan.push_back(std::move(row));
        ts.relEntropy.push_back(a_s(rho, paths).value);
        ts.predictability.push_back(predictability(rho, paths));
    }
    return ts;
}

}  // namespace supq
