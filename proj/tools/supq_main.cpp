// supq_main.cpp - command-line front end: measure evaluation, relaxation
// simulations, interferometer runs, channel classification, property suites

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "supq/io.hpp"
#include "supq/verify.hpp"

namespace {

using nlohmann::json;
using namespace supq;

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIntegrator = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::ParseError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) fail(Errc::ParseError, "cannot write " + path);
    out << content;
}

Decomposition parse_dims(const std::string& text) {
    std::vector<int> dims;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        try {
            dims.push_back(std::stoi(item));
        } catch (const std::exception&) {
            fail(Errc::ParseError, "dims must be a comma-separated integer list");
        }
    return Decomposition(dims);
}

json ensemble_to_json(const PureStateEnsemble& ens) {
    json j = json::array();
    for (std::size_t l = 0; l < ens.vectors.size(); ++l) {
        json member;
        member["weight"] = ens.weights(static_cast<Eigen::Index>(l));
        json amps = json::array();
        for (Eigen::Index i = 0; i < ens.vectors[l].size(); ++i)
            amps.push_back({ens.vectors[l](i).real(), ens.vectors[l](i).imag()});
        member["vector"] = amps;
        j.push_back(member);
    }
    return j;
}

int cmd_measure(const std::string& stateFile, const std::string& dimsText,
                const std::string& measure, std::uint64_t seed) {
    const DensityOperator rho = density_from_json(read_file(stateFile));
    const Decomposition L = parse_dims(dimsText);
    L.check_dim(rho.dim());

    json out;
    out["measure"] = measure;
    if (measure == "as") {
        const auto rep = a_s(rho, L);
        out["value"] = rep.value;
        out["witness"] = json::parse(density_to_json(*rep.blockDiagonalWitness));
    } else if (measure == "af") {
        AfOptions opts;
        opts.seed = seed;
        const auto rep = a_f(rho, L, opts);
        out["value"] = rep.value;
        out["converged"] = rep.converged;
        out["witness"] = ensemble_to_json(*rep.ensembleWitness);
    } else if (measure.rfind("kyfan:", 0) == 0) {
        out["value"] = kyfan_measure(rho, L, std::stoi(measure.substr(6)));
    } else if (measure == "trace") {
        out["value"] = trace_measure(rho, L);
    } else if (measure.rfind("schatten:", 0) == 0) {
        out["value"] = norm_measure(rho, L, NormSpec::schatten(std::stod(measure.substr(9))));
    } else if (measure == "predictability") {
        out["value"] = predictability(rho, L);
    } else if (measure.rfind("bound:", 0) == 0) {
        out["value"] = kyfan_bound(rho, L, std::stoi(measure.substr(6)));
    } else {
        fail(Errc::ParseError, "unknown measure " + measure);
    }
    std::cout << out.dump() << "\n";
    return kExitOk;
}

Scenario scenario_from_flags(const std::string& kindName, int levels, double simpleG,
                             const std::string& gFile, std::uint64_t seed, bool seedSet) {
    ScenarioKind kind;
    if (kindName == "f1")
        kind = ScenarioKind::NonlocalF1;
    else if (kindName == "f2")
        kind = ScenarioKind::LocalF2;
    else if (kindName == "f3")
        kind = ScenarioKind::Mixture;
    else
        fail(Errc::ParseError, "scenario must be one of f1|f2|f3");

    if (simpleG > 0.0) return Scenario::simple(kind, levels, simpleG);
    if (!gFile.empty()) {
        const json j = json::parse(read_file(gFile), nullptr, false);
        if (j.is_discarded()) fail(Errc::ParseError, "malformed rate file");
        Scenario s;
        s.kind = kind;
        s.levels = levels;
        s.rates = Eigen::MatrixXd::Zero(levels, levels);
        s.hDiag = RealVector::Zero(levels);
        if (!j.contains("g") || !j["g"].is_array()) fail(Errc::ParseError, "rate file needs \"g\"");
        const auto& g = j["g"];
        if (static_cast<int>(g.size()) != levels) fail(Errc::ParseError, "\"g\" must be levels x levels");
        for (int r = 0; r < levels; ++r) {
            if (static_cast<int>(g[r].size()) != levels)
                fail(Errc::ParseError, "\"g\" must be levels x levels");
            for (int c = 0; c < levels; ++c) s.rates(r, c) = g[r][c].get<double>();
        }
        if (j.contains("H")) {
            if (static_cast<int>(j["H"].size()) != levels)
                fail(Errc::ParseError, "\"H\" must list the internal energies");
            for (int r = 0; r < levels; ++r) s.hDiag(r) = j["H"][r].get<double>();
        }
        return s;
    }
    if (!seedSet) fail(Errc::ParseError, "choose --simple-g, --g-file, or --seed");
    return Scenario::randomized(kind, levels, seed);
}

int cmd_simulate(const Scenario& scenario, std::uint64_t seed, bool seeded, double tMax, int steps,
                 const std::string& outFile, bool compareAnalytic, double simpleG) {
    if (tMax <= 0.0 || steps < 1) fail(Errc::ParseError, "need --t-max > 0 and --steps >= 1");
    std::vector<double> grid;
    for (int i = 0; i <= steps; ++i) grid.push_back(tMax * i / steps);

    TimeSeries ts;
    try {
        ts = run_timeseries(scenario, grid);
    } catch (const Error& e) {
        if (e.code() == Errc::ValidationFailure) {
            std::cerr << "integrator failure: " << e.what() << "\n";
            return kExitIntegrator;
        }
        throw;
    }
    write_file(outFile, ts.to_csv());

    json meta;
    meta["scenario"] = scenario.kind_name();
    meta["levels"] = scenario.levels;
    if (seeded) meta["seed"] = seed;
    json rates = json::array();
    for (int r = 0; r < scenario.levels; ++r) {
        json row = json::array();
        for (int c = 0; c < scenario.levels; ++c) row.push_back(scenario.rates(r, c));
        rates.push_back(row);
    }
    meta["g"] = rates;
    json h = json::array();
    for (int r = 0; r < scenario.hDiag.size(); ++r) h.push_back(scenario.hDiag(r));
    meta["H"] = h;
    write_file(outFile + ".meta.json", meta.dump(2) + "\n");

    if (compareAnalytic) {
        if (simpleG <= 0.0 || scenario.kind == ScenarioKind::Mixture)
            fail(Errc::ParseError, "--compare-analytic needs --simple-g with f1 or f2");
        double worst = 0.0;
        for (std::size_t r = 0; r < grid.size(); ++r)
            for (int k = 1; k <= scenario.levels; ++k) {
                const double reference =
                    scenario.kind == ScenarioKind::NonlocalF1
                        ? analytic_nonlocal(scenario.levels, simpleG, grid[r], k)
                        : analytic_local(scenario.levels, simpleG, grid[r], k);
                worst = std::max(worst, std::abs(ts.kyfan[r][static_cast<std::size_t>(k - 1)] - reference));
            }
        json rep;
        rep["max_abs_diff"] = worst;
        std::cout << rep.dump() << "\n";
    }
    return kExitOk;
}

int cmd_interfere(const std::string& stateFile, int k, int iters, std::uint64_t seed) {
    const DensityOperator rho = density_from_json(read_file(stateFile));
    if (rho.dim() % 2 != 0) fail(Errc::ParseError, "state must live on internal x two paths");
    const int n = static_cast<int>(rho.dim() / 2);
    const Decomposition L({n, n});

    const auto [u, v, best] = optimal_uv(rho, k);
    const auto [su, sv, stoch] = stochastic_maximize(rho, k, iters, seed);
    json out;
    out["k"] = k;
    out["kyfan_measure"] = kyfan_measure(rho, L, k);
    out["optimal_value"] = best;
    out["stochastic_value"] = stoch;
    out["optimal_U"] = json::parse(matrix_to_json(u));
    out["optimal_V"] = json::parse(matrix_to_json(v));
    std::cout << out.dump() << "\n";
    return kExitOk;
}

int cmd_channel_check(const std::string& channelFile, const std::string& dimsText) {
    const KrausChannel phi = channel_from_json(read_file(channelFile));
    const Decomposition L = parse_dims(dimsText);
    L.check_dim(phi.dim());
    json out;
    out["isSP"] = is_sp(phi, L);
    out["isBlockPreserving"] = is_block_preserving(phi, L);
    std::cout << out.dump() << "\n";
    return kExitOk;
}

int cmd_verify(const std::string& suiteName, int samples, std::uint64_t seed) {
    std::vector<SuiteResult> results;
    if (suiteName == "all")
        results = verify_all(samples, seed);
    else if (suiteName == "entropy")
        results = {verify_entropy(samples, seed)};
    else if (suiteName == "axioms")
        results = {verify_axioms(samples, seed)};
    else if (suiteName == "formation")
        results = {verify_formation(samples, seed)};
    else if (suiteName == "secondq")
        results = {verify_secondq(samples, seed)};
    else if (suiteName == "channels")
        results = {verify_channels(samples, seed)};
    else if (suiteName == "dynamics")
        results = {verify_dynamics(samples, seed)};
    else if (suiteName == "interferometer")
        results = {verify_interferometer(samples, seed)};
    else
        fail(Errc::ParseError, "unknown suite " + suiteName);

    bool allPass = true;
    int total = 0;
    for (const auto& suite : results) {
        for (const auto& r : suite.results) {
            ++total;
            allPass = allPass && r.pass;
            std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << suite.suite << ": " << r.name << " ("
                      << r.samples << " samples" << (r.details.empty() ? "" : ", " + r.details)
                      << ")\n";
        }
    }
    std::cout << (allPass ? "all " : "FAILURES among ") << total << " properties\n";
    return allPass ? kExitOk : kExitPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"superposition measures for finite-dimensional mixed states"};
    app.require_subcommand(1);

    // measure
    auto* measure = app.add_subcommand("measure", "evaluate a superposition measure on a state");
    std::string stateFile, dimsText, measureName;
    std::uint64_t seed = 1;
    measure->add_option("--state", stateFile, "state JSON file")->required();
    measure->add_option("--dims", dimsText, "decomposition, e.g. 1,1")->required();
    measure->add_option("--measure", measureName,
                        "as|af|kyfan:k|trace|schatten:p|predictability|bound:k")
        ->required();
    measure->add_option("--seed", seed, "optimizer seed (af)");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "integrate a relaxation scenario to CSV");
    std::string scenarioName = "f1", gFile, outFile = "timeseries.csv";
    int levels = 3, steps = 50;
    double tMax = 5.0, simpleG = 0.0;
    std::uint64_t simSeed = 0;
    bool compareAnalytic = false;
    simulate->add_option("--scenario", scenarioName, "f1|f2|f3")->required();
    simulate->add_option("--levels", levels, "internal levels N")->required();
    simulate->add_option("--simple-g", simpleG, "uniform ground-state decay rate (analytic model)");
    simulate->add_option("--g-file", gFile, "JSON with \"g\" rate matrix and optional \"H\"");
    auto* seedOpt = simulate->add_option("--seed", simSeed, "randomized Hamiltonian/rates seed");
    simulate->add_option("--t-max", tMax, "final time");
    simulate->add_option("--steps", steps, "number of grid steps");
    simulate->add_option("--out", outFile, "output CSV path");
    simulate->add_flag("--compare-analytic", compareAnalytic,
                       "report max |numeric - analytic| (simple models)");

    // interfere
    auto* interfere = app.add_subcommand("interfere", "run the two-path protocol optimizers");
    std::string interState;
    int filterK = 1, iters = 2000;
    std::uint64_t interSeed = 7;
    interfere->add_option("--state", interState, "state JSON file (internal x two paths)")->required();
    interfere->add_option("--k", filterK, "filter rank")->required();
    interfere->add_option("--iters", iters, "stochastic search iterations");
    interfere->add_option("--seed", interSeed, "stochastic search seed");

    // channel-check
    auto* channelCheck = app.add_subcommand("channel-check", "classify a Kraus channel");
    std::string channelFile, channelDims;
    channelCheck->add_option("--channel", channelFile, "channel JSON file")->required();
    channelCheck->add_option("--dims", channelDims, "decomposition, e.g. 2,2")->required();

    // verify
    auto* verify = app.add_subcommand("verify", "run property suites");
    std::string suiteName = "all";
    int samples = 200;
    std::uint64_t verifySeed = 20240915;
    verify->add_option("--suite", suiteName,
                       "axioms|entropy|formation|secondq|channels|dynamics|interferometer|all");
    verify->add_option("--samples", samples, "samples per property");
    verify->add_option("--seed", verifySeed, "suite seed");

    try {
        app.parse(argc, argv);
        if (measure->parsed()) return cmd_measure(stateFile, dimsText, measureName, seed);
        if (simulate->parsed()) {
            const Scenario scenario = scenario_from_flags(scenarioName, levels, simpleG, gFile,
                                                          simSeed, seedOpt->count() > 0);
            return cmd_simulate(scenario, simSeed, seedOpt->count() > 0, tMax, steps, outFile,
                                compareAnalytic, simpleG);
        }
        if (interfere->parsed()) return cmd_interfere(interState, filterK, iters, interSeed);
        if (channelCheck->parsed()) return cmd_channel_check(channelFile, channelDims);
        if (verify->parsed()) return cmd_verify(suiteName, samples, verifySeed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == Errc::ValidationFailure ? kExitIntegrator : kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
