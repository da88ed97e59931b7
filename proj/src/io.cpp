#include "supq/io.hpp"

#include <json.hpp>

namespace supq {

namespace {

using nlohmann::json;

json entries_to_json(const Matrix& m) {
    json entries = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            entries.push_back({m(r, c).real(), m(r, c).imag()});
    return entries;
}

Matrix entries_from_json(const json& entries, Eigen::Index n) {
    if (!entries.is_array() || entries.size() != static_cast<std::size_t>(n * n))
        fail(Errc::ParseError, "entries must be a row-major array of length dim^2");
    Matrix m(n, n);
    std::size_t idx = 0;
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c, ++idx) {
            const json& e = entries[idx];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                fail(Errc::ParseError, "each entry must be a [re, im] pair");
            m(r, c) = Cx(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) fail(Errc::ParseError, "malformed JSON");
    return j;
}

Eigen::Index read_dim(const json& j) {
    if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
        fail(Errc::ParseError, "missing or invalid \"dim\"");
    return j["dim"].get<int>();
}

}  // namespace

std::string matrix_to_json(const Matrix& m) {
    json j;
    j["dim"] = m.rows();
    j["entries"] = entries_to_json(m);
    return j.dump();
}

Matrix matrix_from_json(const std::string& text) {
    const json j = parse(text);
    const Eigen::Index n = read_dim(j);
    if (!j.contains("entries")) fail(Errc::ParseError, "missing \"entries\"");
    return entries_from_json(j["entries"], n);
}

std::string density_to_json(const DensityOperator& rho) { return matrix_to_json(rho.matrix()); }

DensityOperator density_from_json(const std::string& text) {
    return make_density(matrix_from_json(text));
}

std::string decomposition_to_json(const Decomposition& L) {
    json j;
    j["dims"] = L.dims;
    return j.dump();
}

Decomposition decomposition_from_json(const std::string& text) {
    const json j = parse(text);
    if (!j.contains("dims") || !j["dims"].is_array()) fail(Errc::ParseError, "missing \"dims\"");
    std::vector<int> dims;
    for (const auto& d : j["dims"]) {
        if (!d.is_number_integer()) fail(Errc::ParseError, "dims must be integers");
        dims.push_back(d.get<int>());
    }
    return Decomposition(dims);
}

std::string channel_to_json(const KrausChannel& phi) {
    json j;
    j["dim"] = phi.dim();
    json kraus = json::array();
    for (const auto& k : phi.kraus) kraus.push_back(entries_to_json(k));
    j["kraus"] = kraus;
    return j.dump();
}

KrausChannel channel_from_json(const std::string& text) {
    const json j = parse(text);
    const Eigen::Index n = read_dim(j);
    if (!j.contains("kraus") || !j["kraus"].is_array() || j["kraus"].empty())
        fail(Errc::ParseError, "missing \"kraus\" list");
    std::vector<Matrix> ops;
    for (const auto& entry : j["kraus"]) ops.push_back(entries_from_json(entry, n));
    return KrausChannel::from_kraus(std::move(ops));
}

}  // namespace supq
