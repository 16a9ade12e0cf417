// swapscan: exact-swap probability toolkit for XY/XXZ spin rings.
//
// Subcommands: spectrum (one-magnon energies), scan (tau grid of swap
// probabilities for an exchange operator), sweep (peak probability vs chain
// size, the figure-regeneration artifact), oracle (full 2^N cross-checks and
// gate demos). CSV goes to stdout or --output; a JSON manifest sidecar
// accompanies every output file.

#include <omp.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sws/analysis.hpp"
#include "sws/csvio.hpp"
#include "sws/full_space.hpp"
#include "sws/hermitian_eig.hpp"

namespace {

using namespace sws;

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    if (auto c1 = text.find(':'); c1 != std::string::npos) {
        auto c2 = text.find(':', c1 + 1);
        if (c2 == std::string::npos)
            throw validation_error("expected start:end:step, got '" + text + "'");
        int start = std::stoi(text.substr(0, c1));
        int end = std::stoi(text.substr(c1 + 1, c2 - c1 - 1));
        int step = std::stoi(text.substr(c2 + 1));
        if (step <= 0) throw validation_error("list step must be positive");
        for (int v = start; v <= end; v += step) out.push_back(v);
    } else {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    }
    if (out.empty()) throw validation_error("empty list '" + text + "'");
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    if (out.empty()) throw validation_error("empty list '" + text + "'");
    return out;
}

TauGrid parse_grid(const std::string& text) {
    auto c1 = text.find(':');
    auto c2 = text.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw validation_error("expected tau grid start:end:step, got '" + text + "'");
    TauGrid g;
    g.start = std::stod(text.substr(0, c1));
    g.end = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    g.step = std::stod(text.substr(c2 + 1));
    return g;
}

struct OutputTarget {
    std::string path;  // empty = stdout
    std::ofstream file;
    std::ostream& stream() { return path.empty() ? std::cout : file; }
    void open() {
        if (path.empty()) return;
        file.open(path);
        if (!file) throw validation_error("cannot open output file '" + path + "'");
    }
    void finish(const std::string& command,
                const std::vector<std::pair<std::string, std::string>>& params) {
        if (path.empty()) return;
        file.close();
        write_manifest(path, command, params);
    }
};

struct ModelFlags {
    std::string model = "xy";
    double j = 1.0;
    double delta = 0.0;
    double h = 0.0;

    ModelParams params() const {
        if (model == "xy") return xy_params(j);
        if (model == "xxz") return xxz_params(j, delta, h);
        throw validation_error("model must be xy or xxz");
    }
    void add_flags(CLI::App* cmd) {
        cmd->add_option("--model", model, "chain model: xy or xxz");
        cmd->add_option("--j", j, "coupling J (default 1)");
        cmd->add_option("--delta", delta, "XXZ anisotropy");
        cmd->add_option("--h", h, "XXZ field");
    }
};

int run_spectrum(int n, const ModelFlags& mf, bool verify, OutputTarget& out) {
    SectorBasis basis = make_basis(n, false);
    ModelParams params = mf.params();
    SpectralData spec = sector_spectrum(basis, params);

    if (verify) {
        HermitianEig eig = hermitian_eig(one_magnon_hamiltonian(basis, params));
        std::vector<double> analytic = spec.energies;
        std::sort(analytic.begin(), analytic.end());
        for (int m = 0; m < n; ++m)
            if (std::abs(analytic[m] - eig.values[m]) > 1e-10)
                throw numeric_error("spectrum --verify: analytic and Jacobi energies differ by " +
                                    std::to_string(std::abs(analytic[m] - eig.values[m])));
    }

    out.open();
    write_csv_row(out.stream(), {"m", "E_m"});
    for (int m = 1; m <= n; ++m)
        write_csv_row(out.stream(), {std::to_string(m), format_double(spec.energies[m - 1])});
    out.finish("spectrum", {{"n", std::to_string(n)},
                            {"model", mf.model},
                            {"j", format_double(mf.j)},
                            {"delta", format_double(mf.delta)},
                            {"h", format_double(mf.h)},
                            {"verify", verify ? "true" : "false"}});
    return 0;
}

ScanConfig build_scan_config(int n, const std::string& exchange, const ModelFlags& mf,
                             const std::string& grid, const std::string& initial,
                             const std::string& targets, const std::string& fidelity,
                             bool raw, bool allow_degenerate, bool include_zero,
                             bool keep_clusters) {
    ScanConfig config;
    config.n = n;
    config.exchange = parse_exchange(exchange, n);
    config.exchange.completion = raw ? Completion::RawAsWritten : Completion::UnitaryCompletion;
    config.exchange.allow_degenerate = allow_degenerate;
    config.params = mf.params();
    config.grid = parse_grid(grid);
    config.include_zero = include_zero;
    config.keep_clusters = keep_clusters;
    if (initial == "zero") {
        config.initial_site = 0;
        config.include_zero = true;
    } else {
        config.initial_site = std::stoi(initial);
    }
    if (!targets.empty()) {
        if (targets == "none") config.target_sites = std::vector<int>{};
        else config.target_sites = parse_int_list(targets);
    }
    if (!fidelity.empty()) {
        auto ab = parse_double_list(fidelity);
        if (ab.size() != 2) throw validation_error("--fidelity expects a,b");
        config.fidelity_ab = std::make_pair(ab[0], ab[1]);
    }
    return config;
}

int run_scan(const ScanConfig& config,
             const std::vector<std::pair<std::string, std::string>>& params, OutputTarget& out,
             const std::string& clusters_json) {
    ScanResult res = scan_tau(config);
    out.open();
    std::vector<std::string> header{"tau", "best_phase", "best_p", "label"};
    if (config.fidelity_ab) header.push_back("fidelity");
    write_csv_row(out.stream(), header);
    for (const ScanRecord& r : res.records) {
        std::vector<std::string> row{format_double(r.tau), format_double(r.best_phase),
                                     format_double(r.best_p), to_string(r.label)};
        if (r.fidelity) row.push_back(format_double(*r.fidelity));
        write_csv_row(out.stream(), row);
    }
    out.finish("scan", params);

    if (!clusters_json.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const ScanRecord& r : res.records) {
            nlohmann::json rec;
            rec["tau"] = r.tau;
            nlohmann::json cl = nlohmann::json::array();
            for (const ClusterProbability& c : r.all_clusters)
                cl.push_back({{"phase", c.phase}, {"p", c.p}, {"dim", c.dim}});
            rec["clusters"] = cl;
            arr.push_back(rec);
        }
        std::ofstream jf(clusters_json);
        if (!jf) throw validation_error("cannot open '" + clusters_json + "'");
        jf << arr.dump(2) << '\n';
    }
    return 0;
}

int run_sweep(const std::string& exchange, const std::vector<int>& ns, const ModelFlags& mf,
              const std::string& grid, bool raw, bool allow_degenerate,
              const std::vector<std::pair<std::string, std::string>>& params,
              OutputTarget& out) {
    if (ns.empty()) throw validation_error("sweep: empty N list");
    ExchangeSpec tmpl = parse_exchange(exchange, ns.front());
    tmpl.completion = raw ? Completion::RawAsWritten : Completion::UnitaryCompletion;
    tmpl.allow_degenerate = allow_degenerate;
    std::vector<SweepRecord> recs = sweep_chain_sizes(tmpl, ns, parse_grid(grid), mf.params());
    out.open();
    write_csv_row(out.stream(), {"N", "p_peak", "tau_at_peak"});
    for (const SweepRecord& r : recs)
        write_csv_row(out.stream(), {std::to_string(r.n), format_double(r.p_peak),
                                     format_double(r.tau_at_peak)});
    out.finish("sweep", params);
    return 0;
}

void print_state(std::ostream& os, const FullState& st) {
    for (size_t x = 0; x < st.amplitudes.size(); ++x) {
        cplx a = st.amplitudes[x];
        if (std::abs(a) < 1e-12) continue;
        os << "  |";
        for (int j = 1; j <= st.n; ++j) os << ((x >> (j - 1)) & 1u);
        os << "> " << format_double(a.real());
        if (std::abs(a.imag()) > 1e-12)
            os << (a.imag() < 0 ? " - " : " + ") << format_double(std::abs(a.imag())) << "i";
        os << '\n';
    }
}

FullState apply(const ComplexMatrix& m, const FullState& st) {
    FullState out;
    out.n = st.n;
    out.amplitudes = m * st.amplitudes;
    return out;
}

void demo_gates(std::ostream& os) {
    os << "== state transfer: V_B = 1, N = 2, A = {1}, B = {2} ==\n";
    {
        ProcessorLayout lay{{1}, {2}};
        ComplexMatrix p = permutation_e_ab(lay, 2);
        FullState st{2, {0, 1, 0, 0}};  // site 1 up
        os << "in:\n";
        print_state(os, st);
        os << "out:\n";
        print_state(os, apply(p, st));
    }
    os << "== remote amplification: V_B = XXX, N = 6, A = {1,2,3}, B = {4,5,6} ==\n";
    {
        ProcessorLayout lay{{1, 2, 3}, {4, 5, 6}};
        ComplexMatrix p = local_gate_v_b(LocalGate::XXXFlip, lay, 6) * permutation_e_ab(lay, 6);
        FullState st{6, std::vector<cplx>(64, 0.0)};
        st.amplitudes[0] = 1.0;  // |000>_A |000>_B
        os << "in:\n";
        print_state(os, st);
        os << "out:\n";
        print_state(os, apply(p, st));
    }
    os << "== remote-controlled exchange: V_B = exp(-i pi XX/4), N = 4, A = {1,2}, B = {3,4} "
          "==\n";
    {
        ProcessorLayout lay{{1, 2}, {3, 4}};
        ComplexMatrix p =
            local_gate_v_b(LocalGate::RemoteExchange, lay, 4) * permutation_e_ab(lay, 4);
        FullState st{4, std::vector<cplx>(16, 0.0)};
        st.amplitudes[2] = 1.0;  // |01>_A (site 2 up)
        os << "in:\n";
        print_state(os, st);
        os << "out (amplitudes verbatim, global phase not normalized away):\n";
        print_state(os, apply(p, st));
    }
}

int run_oracle(const std::vector<int>& ns, const std::vector<double>& taus, bool demo,
               bool model_given, const ModelFlags& mf) {
    if (demo) demo_gates(std::cout);
    struct Case {
        std::string name;
        ModelParams params;
    };
    std::vector<Case> cases;
    if (model_given) {
        cases.push_back({mf.model, mf.params()});
    } else {
        cases.push_back({"xy", xy_params()});
        cases.push_back({"xxz(delta=0.5,h=0.2)", xxz_params(1.0, 0.5, 0.2)});
    }
    bool pass = true;
    for (int n : ns) {
        for (const Case& c : cases) {
            double dev = sector_equivalence_check(n, c.params, taus);
            bool ok = dev < 1e-10;
            pass = pass && ok;
            std::cout << "N=" << n << " " << c.name << ": max deviation " << format_double(dev)
                      << (ok ? " PASS" : " FAIL") << '\n';
        }
    }
    std::cout << (pass ? "oracle: PASS" : "oracle: FAIL") << '\n';
    return pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact quantum state swap probabilities on XY/XXZ spin rings"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "OpenMP thread count (default: hardware)");

    // spectrum
    auto* sp = app.add_subcommand("spectrum", "one-magnon energies E_m as CSV");
    int sp_n = 3;
    bool sp_verify = false;
    ModelFlags sp_model;
    std::string sp_out;
    sp->add_option("--n", sp_n, "chain length (odd, >= 3)")->required();
    sp_model.add_flags(sp);
    sp->add_flag("--verify", sp_verify, "cross-check analytic energies against the Jacobi solver");
    sp->add_option("-o,--output", sp_out, "output CSV path (default stdout)");

    // scan
    auto* sc = app.add_subcommand("scan", "swap probability over a tau grid");
    int sc_n = 7;
    std::string sc_exchange, sc_grid = "0:50:0.01", sc_initial = "1", sc_targets, sc_fid,
                sc_out, sc_clusters;
    bool sc_raw = false, sc_degen = false, sc_zero = false;
    ModelFlags sc_model;
    sc->add_option("--exchange", sc_exchange, "p1|p3|pall|pe|pe-prime|pes|pairs:a-b,...")
        ->required();
    sc->add_option("--n", sc_n, "chain length (odd, >= 3)")->required();
    sc->add_option("--tau", sc_grid, "tau grid start:end:step (default 0:50:0.01)");
    sc->add_option("--initial", sc_initial, "initial basis state: site index or 'zero'");
    sc->add_option("--targets", sc_targets,
                   "multi-site probability sites (comma list, 'none' to disable defaults)");
    sc->add_option("--fidelity", sc_fid, "a,b of the unknown state; adds a fidelity column");
    sc->add_flag("--raw", sc_raw, "build the operator literally as written (no completion)");
    sc->add_flag("--allow-degenerate", sc_degen, "permit the PE' site collision at N = 3");
    sc->add_flag("--include-zero", sc_zero, "include the zero-magnon slot");
    sc->add_option("--clusters-json", sc_clusters, "dump the full per-cluster list as JSON");
    sc_model.add_flags(sc);
    sc->add_option("-o,--output", sc_out, "output CSV path (default stdout)");

    // sweep
    auto* sw = app.add_subcommand("sweep", "peak probability vs chain size");
    std::string sw_exchange, sw_ns, sw_grid = "0:50:0.01", sw_out;
    bool sw_raw = false, sw_degen = false;
    ModelFlags sw_model;
    sw->add_option("--exchange", sw_exchange, "p1|p3|pall|pe|pe-prime|pes|pairs:a-b,...")
        ->required();
    sw->add_option("--ns", sw_ns, "chain lengths: comma list or start:end:step")->required();
    sw->add_option("--tau", sw_grid, "tau grid start:end:step (default 0:50:0.01)");
    sw->add_flag("--raw", sw_raw, "build the operator literally as written");
    sw->add_flag("--allow-degenerate", sw_degen, "permit the PE' site collision at N = 3");
    sw_model.add_flags(sw);
    sw->add_option("-o,--output", sw_out, "output CSV path (default stdout)");

    // oracle
    auto* fo = app.add_subcommand("oracle", "full 2^N cross-checks and gate demos");
    std::string fo_ns = "3,5,7", fo_taus = "0.1,1,10";
    bool fo_demo = false;
    ModelFlags fo_model;
    fo->add_option("--ns", fo_ns, "chain lengths (comma list), N <= 12");
    fo->add_option("--taus", fo_taus, "times (comma list)");
    fo->add_flag("--demo-gates", fo_demo, "print the amplification and remote-exchange demos");
    fo_model.add_flags(fo);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (sp->parsed()) {
            OutputTarget out{sp_out};
            return run_spectrum(sp_n, sp_model, sp_verify, out);
        }
        if (sc->parsed()) {
            ScanConfig config =
                build_scan_config(sc_n, sc_exchange, sc_model, sc_grid, sc_initial, sc_targets,
                                  sc_fid, sc_raw, sc_degen, sc_zero, !sc_clusters.empty());
            OutputTarget out{sc_out};
            std::vector<std::pair<std::string, std::string>> params{
                {"exchange", sc_exchange}, {"n", std::to_string(sc_n)},
                {"tau", sc_grid},          {"initial", sc_initial},
                {"targets", sc_targets},   {"fidelity", sc_fid},
                {"raw", sc_raw ? "true" : "false"},
                {"allow_degenerate", sc_degen ? "true" : "false"},
                {"include_zero", sc_zero ? "true" : "false"},
                {"model", sc_model.model}, {"j", format_double(sc_model.j)},
                {"delta", format_double(sc_model.delta)}, {"h", format_double(sc_model.h)}};
            return run_scan(config, params, out, sc_clusters);
        }
        if (sw->parsed()) {
            OutputTarget out{sw_out};
            std::vector<std::pair<std::string, std::string>> params{
                {"exchange", sw_exchange}, {"ns", sw_ns},
                {"tau", sw_grid},          {"raw", sw_raw ? "true" : "false"},
                {"allow_degenerate", sw_degen ? "true" : "false"},
                {"model", sw_model.model}, {"j", format_double(sw_model.j)},
                {"delta", format_double(sw_model.delta)}, {"h", format_double(sw_model.h)}};
            return run_sweep(sw_exchange, parse_int_list(sw_ns), sw_model, sw_grid, sw_raw,
                             sw_degen, params, out);
        }
        if (fo->parsed()) {
            return run_oracle(parse_int_list(fo_ns), parse_double_list(fo_taus), fo_demo,
                              fo->count("--model") > 0, fo_model);
        }
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << "numerical contract violation: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
