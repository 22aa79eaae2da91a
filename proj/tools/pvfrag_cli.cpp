// pvfrag command-line tool: PV-condition checks, Krylov sector metrics,
// exact dynamics with entanglement diagnostics, core projection and path
// inspection.
//
// Exit codes: 0 success / pass, 1 semantic negative (PV failure, core
// violation), 2 usage error, 3 resource refusal.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>

#include <CLI11.hpp>

#include "pvfrag/pvfrag.hpp"

namespace {

using namespace pvfrag;
using nlohmann::json;

std::string fmt_window(const std::vector<int>& w) {
    std::string s = "(";
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(w[i]);
    }
    return s + ")";
}

ModelSpec resolve_model(const std::string& name, const std::string& file, double alpha) {
    if (!file.empty()) return load_model_file(file);
    return build_model(name, {{"alpha", alpha}});
}

int cmd_pvcheck(const std::string& name, const std::string& file, double alpha) {
    ModelSpec m = resolve_model(name, file, alpha);
    PVReport r = pv_check(m);
    if (r.passed) {
        std::printf("PASS: %s satisfies the peak-valley condition\n", m.name.c_str());
        return 0;
    }
    std::printf("FAIL: %s violates the peak-valley condition (%zu transition(s))\n",
                m.name.c_str(), r.violations.size());
    for (const auto& v : r.violations)
        std::printf("  %s <-> %s : in (max=%d,min=%d) vs out (max=%d,min=%d)\n",
                    fmt_window(v.transition.in).c_str(), fmt_window(v.transition.out).c_str(),
                    v.inExtrema.first, v.inExtrema.second, v.outExtrema.first,
                    v.outExtrema.second);
    return 1;
}

int cmd_sectors(const std::string& name, const std::string& file, double alpha, int L,
                int totalSpin, std::optional<long long> dipole, const std::string& format,
                std::uint64_t maxDim) {
    ModelSpec m = resolve_model(name, file, alpha);
    SectorKey key{L, m.F, totalSpin, dipole};
    const std::uint64_t dim = count_sector(key);
    if (dim > maxDim) {
        std::fprintf(stderr, "refused: sector dimension %llu exceeds --max-dim %llu\n",
                     static_cast<unsigned long long>(dim),
                     static_cast<unsigned long long>(maxDim));
        return 3;
    }
    auto part = decompose_cached(m, key);
    auto f = metrics(part);
    json params = {{"model", m.name},
                   {"modelHash", hex64(fnv1a(canonical_model_string(m)))},
                   {"L", L},
                   {"totalSpin", totalSpin}};
    if (dipole) params["dipole"] = *dipole;
    auto manifest = make_manifest("sectors", params);
    if (format == "json") {
        json out = {{"model", m.name},
                    {"L", L},
                    {"totalSpin", totalSpin},
                    {"r", f.r},
                    {"Sf", f.Sf},
                    {"DmaxOverDt", f.DmaxOverDt},
                    {"Dt", f.Dt},
                    {"manifest", manifest.to_json()}};
        if (dipole) out["dipole"] = *dipole;
        std::printf("%s\n", out.dump(2).c_str());
    } else {
        std::printf("model,L,total_spin,dipole,r,Sf,Dmax_over_Dt,Dt\n");
        std::printf("%s,%d,%d,%s,%llu,%.6f,%.6f,%llu\n", m.name.c_str(), L, totalSpin,
                    dipole ? std::to_string(*dipole).c_str() : "",
                    static_cast<unsigned long long>(f.r), f.Sf, f.DmaxOverDt,
                    static_cast<unsigned long long>(f.Dt));
        std::printf("# manifest %s\n", manifest.to_json().dump().c_str());
    }
    return 0;
}

int cmd_evolve(const std::string& name, double alpha, const std::string& init, double tmax,
               double dt, const std::string& outPrefix) {
    ModelSpec m = build_model(name, {{"alpha", alpha}});
    SpinConfig psi = parse_config(init, m.F);
    auto [basis, D] = class_of(m, psi);
    std::printf("D=%llu\n", static_cast<unsigned long long>(D));
    if (D > kHardDimensionCap) {
        std::fprintf(stderr,
                     "refused: Krylov class dimension %llu exceeds the solver cap %zu; "
                     "pick an initial state in a smaller class\n",
                     static_cast<unsigned long long>(D), kHardDimensionCap);
        return 3;
    }
    auto H = assemble(m, basis);
    Eigen::VectorXcd amp0 = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(D));
    for (size_t i = 0; i < H.basis.size(); ++i)
        if (H.basis[i] == psi) amp0(static_cast<Eigen::Index>(i)) = 1.0;
    std::vector<double> times;
    for (double t = 0.0; t <= tmax + 1e-12; t += dt) times.push_back(t);
    auto evo = evolve(H, amp0, times);

    const int L = psi.size();
    std::ofstream se(outPrefix + "_entropy.csv");
    se << "time,cut,S_E\n";
    std::ofstream ch(outPrefix + "_charge.csv");
    ch << "time,bond,n_avg\n";
    char buf[64];
    for (size_t ti = 0; ti < times.size(); ++ti) {
        for (int cut = 1; cut <= L - 1; ++cut) {
            std::snprintf(buf, sizeof buf, "%.6f,%d,%.12f\n", times[ti], cut,
                          entanglement_entropy(evo.amplitudes[ti], H.basis, cut));
            se << buf;
        }
        auto profile = charge_profile(evo.amplitudes[ti], H.basis);
        for (int k = 0; k < L; ++k) {
            std::snprintf(buf, sizeof buf, "%.6f,%d,%.12f\n", times[ti], k, profile[k]);
            ch << buf;
        }
    }
    json params = {{"model", m.name},
                   {"modelHash", hex64(fnv1a(canonical_model_string(m)))},
                   {"init", format_config(psi)},
                   {"tmax", tmax},
                   {"dt", dt},
                   {"classDimension", D},
                   {"classId", rank(H.basis.front())}};
    std::ofstream mf(outPrefix + "_manifest.json");
    mf << make_manifest("evolve", params).to_json().dump(2) << "\n";
    std::printf("wrote %s_entropy.csv, %s_charge.csv, %s_manifest.json\n", outPrefix.c_str(),
                outPrefix.c_str(), outPrefix.c_str());
    return 0;
}

int cmd_project_core(const std::string& name, double alpha, int L) {
    ModelSpec m = build_model(name, {{"alpha", alpha}});
    auto pr = project_to_core(m, L);
    if (!pr.protectsCore) {
        std::printf("%s does not protect the core subspace; offending transitions:\n",
                    m.name.c_str());
        for (const auto& v : pr.violations)
            std::printf("  %s <-> %s  (witness %s at site %d)\n", fmt_window(v.transition.in).c_str(),
                        fmt_window(v.transition.out).c_str(), format_config(v.witness).c_str(),
                        v.position);
        return 1;
    }
    std::printf("projected model of %s on the spin-%s%d%s charge chain:\n", m.name.c_str(),
                m.F % 2 ? "" : "", m.F / 2 ? m.F / 2 : m.F, m.F % 2 ? "/2" : "");
    std::set<std::pair<std::vector<int>, std::vector<int>>> printed;
    for (const auto& r : pr.induced) {
        if (printed.count({r.out, r.in})) continue;
        printed.insert({r.in, r.out});
        std::printf("  (%s) <-> (%s)\n", render_charge_string(r.in).c_str(),
                    render_charge_string(r.out).c_str());
    }
    return 0;
}

int cmd_path(const std::string& config, int F, int q, const std::string& format) {
    SpinConfig c = parse_config(config, F);
    auto p = to_path(c);
    auto labels = regional_extrema(p, q);
    const bool core = core_membership(c);
    if (format == "json") {
        json jl = json::array();
        for (const auto& l : labels)
            jl.push_back({{"kind", l.kind == PVKind::Peak ? "peak" : "valley"},
                          {"position", l.twicePosition},
                          {"height", l.height}});
        json out = {{"heights", p.heights},
                    {"labels", jl},
                    {"core", core},
                    {"manifest", make_manifest("path", {{"config", format_config(c)},
                                                        {"F", F},
                                                        {"q", q}})
                                     .to_json()}};
        std::printf("%s\n", out.dump(2).c_str());
        return 0;
    }
    std::printf("heights: ");
    for (size_t i = 0; i < p.heights.size(); ++i)
        std::printf("%s%d", i ? "," : "", p.heights[i]);
    std::printf("\n");
    if (labels.empty()) {
        std::printf("labels: none\n");
    } else {
        std::printf("labels:\n");
        for (const auto& l : labels)
            std::printf("  %s at bond %d/2, height %d\n",
                        l.kind == PVKind::Peak ? "peak" : "valley", l.twicePosition, l.height);
    }
    std::printf("core: %s\n", core ? "true" : "false");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Peak-valley fragmentation toolkit"};
    app.require_subcommand(1);

    std::string model = "h3_1", modelFile, init, config, outPrefix = "evolution";
    std::string format = "csv";
    double alpha = 1.0, tmax = 50.0, dt = 0.25;
    int L = 12, totalSpin = 0, F = 1, q = 2;
    std::optional<long long> dipole;
    long long dipoleArg = 0;
    std::uint64_t maxDim = 2000000;

    auto* pv = app.add_subcommand("pvcheck", "Check the peak-valley condition of a model");
    pv->add_option("--model", model, "built-in model name");
    pv->add_option("--model-file", modelFile, "custom model JSON file");
    pv->add_option("--alpha", alpha, "h_em coupling (default 1)");

    auto* sec = app.add_subcommand(
        "sectors", "Krylov decomposition metrics of one symmetry sector.\n"
                   "CSV columns: model,L,total_spin,dipole,r,Sf,Dmax_over_Dt,Dt\n"
                   "('.' decimal separator, LF line endings, trailing '# manifest' line)");
    sec->add_option("--model", model);
    sec->add_option("--model-file", modelFile);
    sec->add_option("--alpha", alpha);
    sec->add_option("--L", L, "chain length")->required();
    sec->add_option("--total-spin", totalSpin)->required();
    auto* dipOpt = sec->add_option("--dipole", dipoleArg);
    sec->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    sec->add_option("--max-dim", maxDim, "refuse sectors larger than this");

    auto* ev = app.add_subcommand(
        "evolve", "Exact evolution of a Krylov class; writes PREFIX_entropy.csv\n"
                  "(time,cut,S_E) and PREFIX_charge.csv (time,bond,n_avg)");
    ev->add_option("--model", model);
    ev->add_option("--alpha", alpha);
    ev->add_option("--init", init, "initial product state, e.g. \"-1,0,1,0\"")->required();
    ev->add_option("--tmax", tmax);
    ev->add_option("--dt", dt);
    ev->add_option("--out", outPrefix, "output file prefix");

    auto* pc = app.add_subcommand("project-core", "Induced model on the core subspace");
    pc->add_option("--model", model);
    pc->add_option("--alpha", alpha);
    pc->add_option("--L", L, "core chain length used for extraction");

    auto* pa = app.add_subcommand("path", "Charge path, PV labels and core membership");
    pa->add_option("--config", config)->required();
    pa->add_option("--F", F, "spin magnitude (default 1)");
    pa->add_option("--q", q, "bond-operator window width (default 2)");
    pa->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
        if (dipOpt->count()) dipole = dipoleArg;
        if (pv->parsed()) return cmd_pvcheck(model, modelFile, alpha);
        if (sec->parsed())
            return cmd_sectors(model, modelFile, alpha, L, totalSpin, dipole, format, maxDim);
        if (ev->parsed()) return cmd_evolve(model, alpha, init, tmax, dt, outPrefix);
        if (pc->parsed()) return cmd_project_core(model, alpha, L);
        if (pa->parsed()) return cmd_path(config, F, q, format);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
