#include "supq/channels.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace supq {

namespace {

constexpr double kChannelTol = 1e-10;

void check_family(const std::vector<Matrix>& ops) {
    if (ops.empty()) fail(Errc::DimensionMismatch, "Kraus list must be nonempty");
    const Eigen::Index n = ops.front().rows();
    for (const auto& k : ops) {
        if (k.rows() != n || k.cols() != n) fail(Errc::DimensionMismatch, "Kraus operators must share one dimension");
        if (!finite_entries(k)) fail(Errc::NonFinite, "Kraus operator has non-finite entries");
    }
}

Matrix gram_sum(const std::vector<Matrix>& ops) {
    Matrix sum = Matrix::Zero(ops.front().rows(), ops.front().cols());
    for (const auto& k : ops) sum += k.adjoint() * k;
    return sum;
}

double trace_norm(const Matrix& q) { return singular_values(q).sum(); }

// Hermitian basis of the block-diagonal subspace
std::vector<Matrix> block_diagonal_hermitian_basis(const Decomposition& L) {
    const Eigen::Index n = L.total();
    std::vector<Matrix> basis;
    for (int k = 0; k < L.blocks(); ++k) {
        const int o = L.offset(k);
        for (int i = 0; i < L.dims[static_cast<std::size_t>(k)]; ++i) {
            Matrix e = Matrix::Zero(n, n);
            e(o + i, o + i) = 1.0;
            basis.push_back(e);
            for (int j = i + 1; j < L.dims[static_cast<std::size_t>(k)]; ++j) {
                Matrix re = Matrix::Zero(n, n);
                re(o + i, o + j) = 1.0;
                re(o + j, o + i) = 1.0;
                basis.push_back(re);
                Matrix im = Matrix::Zero(n, n);
                im(o + i, o + j) = Cx(0.0, 1.0);
                im(o + j, o + i) = Cx(0.0, -1.0);
                basis.push_back(im);
            }
        }
    }
    return basis;
}

}  // namespace

KrausChannel KrausChannel::from_kraus(std::vector<Matrix> ops, double tol) {
    check_family(ops);
    const Matrix sum = gram_sum(ops);
    if (max_abs(sum - Matrix::Identity(sum.rows(), sum.cols())) > tol)
        fail(Errc::ValidationFailure, "Kraus operators do not preserve the trace");
    KrausChannel phi;
    phi.kraus = std::move(ops);
    return phi;
}

SubChannel SubChannel::from_ops(std::vector<Matrix> ops, double tol) {
    check_family(ops);
    const Matrix slack = Matrix::Identity(ops.front().rows(), ops.front().rows()) - gram_sum(ops);
    if (eigenvalues(slack).minCoeff() < -tol)
        fail(Errc::ValidationFailure, "sub-channel family exceeds the identity");
    SubChannel v;
    v.ops = std::move(ops);
    return v;
}

Matrix KrausChannel::apply_matrix(const Matrix& q) const {
    Matrix out = Matrix::Zero(q.rows(), q.cols());
    for (const auto& k : kraus) out += k * q * k.adjoint();
    return out;
}

DensityOperator apply(const KrausChannel& phi, const DensityOperator& rho) {
    if (phi.dim() != rho.dim()) fail(Errc::DimensionMismatch, "channel/state dimension mismatch");
    return make_density(phi.apply_matrix(rho.matrix()));
}

bool is_sp(const KrausChannel& phi, const Decomposition& L) {
    if (L.blocks() != 2) fail(Errc::NotBipartite, "SP condition defined for K = 2");
    L.check_dim(phi.dim());
    Matrix p1 = Matrix::Zero(phi.dim(), phi.dim());
    p1.block(0, 0, L.dims[0], L.dims[0]) = Matrix::Identity(L.dims[0], L.dims[0]);
    Matrix adjointImage = Matrix::Zero(phi.dim(), phi.dim());
    for (const auto& k : phi.kraus) adjointImage += k.adjoint() * p1 * k;
    return max_abs(adjointImage - p1) <= kChannelTol;
}

bool is_block_preserving(const KrausChannel& phi, const Decomposition& L) {
    L.check_dim(phi.dim());
    for (const auto& b : block_diagonal_hermitian_basis(L)) {
        const Matrix image = phi.apply_matrix(b);
        if (max_abs(image - pinch_matrix(image, L)) > kChannelTol) return false;
    }
    return true;
}

ChannelClassification classify(const KrausChannel& phi, const Decomposition& L) {
    ChannelClassification cls;
    cls.isSP = is_sp(phi, L);
    cls.isBlockPreserving = is_block_preserving(phi, L);
    return cls;
}

KrausChannel make_lsp(const LiftMap& m, const KrausChannel& phi1, const KrausChannel& phi2,
                      ChannelClassification* classification) {
    if (m.source.blocks() != 2) fail(Errc::NotBipartite, "LSP compression defined for K = 2 lifts");
    if (phi1.dim() != m.targetDims[0] || phi2.dim() != m.targetDims[1])
        fail(Errc::DimensionMismatch, "local channels must act on the lifted factors");

    std::vector<Matrix> kraus;
    for (const auto& a : phi1.kraus)
        for (const auto& b : phi2.kraus)
            kraus.push_back(m.isometry.adjoint() * kron(a, b) * m.isometry);

    const Matrix sum = gram_sum(kraus);
    if (max_abs(sum - Matrix::Identity(sum.rows(), sum.cols())) > kChannelTol)
        fail(Errc::NotTracePreservingOnSector,
             "local channels leak out of the single-particle sector");

    KrausChannel phi;
    phi.kraus = std::move(kraus);
    if (!is_sp(phi, m.source))
        fail(Errc::NotSubspacePreserving, "compressed product channel transfers path weight");

    if (classification != nullptr) {
        *classification = classify(phi, m.source);
        classification->lspCertificate = std::make_pair(phi1, phi2);
    }
    return phi;
}

std::string MeasureSelector::name() const {
    switch (kind) {
        case Kind::RelEntropy: return "A_S";
        case Kind::KyFan: return "A_(" + std::to_string(k) + ")";
        case Kind::Trace: return "A_(Tr)";
        case Kind::SchattenP: return "A_schatten:" + std::to_string(p);
    }
    return "?";
}

double MeasureSelector::evaluate(const DensityOperator& rho, const Decomposition& L) const {
    switch (kind) {
        case Kind::RelEntropy: return a_s(rho, L).value;
        case Kind::KyFan: return kyfan_measure(rho, L, k);
        case Kind::Trace: return trace_measure(rho, L);
        case Kind::SchattenP: return norm_measure(rho, L, NormSpec::schatten(p));
    }
    fail(Errc::KOutOfRange, "unknown measure selector");
}

MonotonicityReport monotonicity_harness(const KrausChannel& phi, const Decomposition& L,
                                        const MeasureSelector& selector, int samples,
                                        std::uint64_t seed,
                                        const std::vector<DensityOperator>& designated) {
    L.check_dim(phi.dim());
    MonotonicityReport rep;
    rep.measure = selector.name();
    rep.maxIncrease = -std::numeric_limits<double>::infinity();

    auto record = [&](const DensityOperator& rho) {
        const double before = selector.evaluate(rho, L);
        const double after = selector.evaluate(apply(phi, rho), L);
        const double increase = after - before;
        if (increase > rep.maxIncrease) {
            rep.maxIncrease = increase;
            rep.witness = rho;
        }
        if (increase > 1e-8) ++rep.violations;
        ++rep.samples;
    };

    for (const auto& rho : designated) record(rho);
    Rng rng(seed);
    for (int s = 0; s < samples; ++s) record(make_density(rng.density(phi.dim())));
    rep.pass = rep.violations == 0;
    return rep;
}

ContractionReport trace_contraction_check(const Matrix& coeff, const SubChannel& v,
                                          const SubChannel& w, const Matrix& q) {
    if (coeff.rows() != static_cast<Eigen::Index>(v.ops.size()) ||
        coeff.cols() != static_cast<Eigen::Index>(w.ops.size()))
        fail(Errc::DimensionMismatch, "coefficient matrix must be |V| x |W|");
    const Matrix slack = Matrix::Identity(coeff.rows(), coeff.rows()) - coeff * coeff.adjoint();
    if (eigenvalues(slack).minCoeff() < -kChannelTol)
        fail(Errc::CoefficientMatrixTooLarge, "coefficient matrix must satisfy CC† <= I");

    Matrix mixed = Matrix::Zero(q.rows(), q.cols());
    for (std::size_t a = 0; a < v.ops.size(); ++a)
        for (std::size_t b = 0; b < w.ops.size(); ++b)
            mixed += coeff(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) * v.ops[a] *
                     q * w.ops[b].adjoint();

    ContractionReport rep;
    rep.lhs = trace_norm(mixed);
    rep.rhs = trace_norm(q);
    rep.pass = rep.lhs <= rep.rhs + 1e-9;
    return rep;
}

}  // namespace supq
