// Command-line front end. Every command prints one JSON document on stdout;
// diagnostics go to stderr. Exit codes: 0 ok / isomorphic, 1 far,
// 2 usage or input error, 3 budget exceeded.

#include "robustiso/approx.hpp"
#include "robustiso/errors.hpp"
#include "robustiso/graph.hpp"
#include "robustiso/instances.hpp"
#include "robustiso/qap.hpp"
#include "robustiso/rng.hpp"
#include "robustiso/set_system.hpp"
#include "robustiso/wl.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace robustiso;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFar = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

std::optional<std::uint64_t> env_budget() {
    const char* raw = std::getenv("ROBUSTISO_BUDGET");
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    try {
        std::size_t used = 0;
        const unsigned long long value = std::stoull(raw, &used);
        if (used != std::string(raw).size()) throw std::invalid_argument(raw);
        return value;
    } catch (const std::exception&) {
        throw InvalidArgument("ROBUSTISO_BUDGET must be a non-negative integer");
    }
}

std::uint64_t budget_or(std::uint64_t fallback) { return env_budget().value_or(fallback); }

json assignment_json(const Assignment& a) { return a.mapping(); }

json alpha_json(const PartialInjection& alpha) {
    json out = json::array();
    for (const auto& [v, vp] : alpha) out.push_back({v, vp});
    return out;
}

class Stopwatch {
  public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

struct Common {
    std::optional<std::uint64_t> seed;
    std::size_t threads = 1;
};

std::uint64_t require_seed(const Common& c, const std::string& command) {
    if (!c.seed) throw InvalidArgument(command + " is randomized and needs --seed");
    return *c.seed;
}

// ---- vc ---------------------------------------------------------------

struct VcArgs {
    std::string graph, qap;
    bool weighted = false, mixed = false;
    std::optional<int> weak_d;
    std::optional<std::string> threshold;
};

int cmd_vc(const VcArgs& a) {
    json out;
    if (!a.graph.empty() == !a.qap.empty()) throw InvalidArgument("vc takes exactly one of --graph and --qap");
    if (!a.graph.empty()) {
        const Graph g = read_graph_file(a.graph);
        out["nvc"] = vc_dimension_exact(neighbourhood_system(g));
        if (a.weighted) out["weighted_vc"] = weighted_graph_vc(g);
        if (a.mixed) out["mixed_vc"] = vc_dimension_exact(mixed_system(g));
    } else {
        const QapInstance q = read_qap_file(a.qap);
        if (a.weak_d) {
            out["weak_vc_le_d"] = weak_vc_test(q, *a.weak_d, budget_or(kDefaultWeakVcBudget));
            out["d"] = *a.weak_d;
        } else if (a.threshold) {
            const Rational t = parse_rational(*a.threshold);
            out["threshold"] = to_string(t);
            out["qap_vc"] = vc_dimension_exact(qap_threshold_system(q, t));
        } else {
            out["qap_vc"] = qap_vc(q);
        }
    }
    emit(out);
    return kExitOk;
}

// ---- ged / qap ----------------------------------------------------------

struct ApproxArgs {
    std::string g, h, qap;
    std::string eps = "1";
    std::size_t m = 2;
    std::string mode = "exhaustive";
    std::size_t samples = 64;
    std::size_t retries = kDefaultRoundingRetries;
    bool exact_lp = false;
    std::size_t oracle_cap = 8;
};

ApproxOptions approx_options(const ApproxArgs& a, const Common& c, const std::string& command) {
    ApproxOptions o;
    o.m = a.m;
    o.mode = parse_search_mode(a.mode);
    o.seed = require_seed(c, command);
    o.samples_per_size = a.samples;
    o.rounding_retries = a.retries;
    o.threads = c.threads;
    o.alpha_budget = budget_or(o.alpha_budget);
    if (a.exact_lp) o.lp.arithmetic = LpArithmetic::exact;
    return o;
}

void report_fields(json& out, const ApproxReport& r, const ApproxOptions& o, const Rational& eps) {
    out["alphas_tried"] = r.alphas_tried;
    out["lps_infeasible"] = r.lps_infeasible;
    out["stopped_early"] = r.stopped_early;
    out["best_alpha"] = alpha_json(r.best_alpha);
    out["seed"] = o.seed;
    out["mode"] = to_string(o.mode);
    out["guarantee"] = o.mode == SearchMode::exhaustive ? "exhaustive" : "none (sampled)";
    out["m"] = o.m;
    out["eps"] = to_string(eps);
    out["lp"] = o.lp.arithmetic == LpArithmetic::exact ? "exact" : "floating";
}

int cmd_ged(const ApproxArgs& a, const Common& c) {
    Stopwatch clock;
    const Graph g = read_graph_file(a.g);
    const Graph h = read_graph_file(a.h);
    const Rational eps = parse_rational(a.eps);
    const ApproxOptions o = approx_options(a, c, "ged");
    const GedApproximation r = approximate_ged(g, h, eps, o);
    const std::size_t n = g.order();

    json out;
    out["approx_cost"] = to_string(r.cost);
    out["assignment"] = assignment_json(r.assignment);
    out["additive_bound"] = to_string(eps * static_cast<unsigned long>(n * n));
    out["n"] = n;
    report_fields(out, r.report, o, eps);
    if (n <= a.oracle_cap) {
        const EditDistanceResult exact = edit_distance_bruteforce(g, h, a.oracle_cap);
        out["oracle_cost"] = to_string(exact.cost);
        out["oracle_assignment"] = assignment_json(exact.assignment);
        out["gap"] = to_string(r.cost - exact.cost);
    }
    out["timing_ms"] = clock.ms();
    emit(out);
    return kExitOk;
}

int cmd_qap(const ApproxArgs& a, const Common& c) {
    Stopwatch clock;
    const QapInstance q = read_qap_file(a.qap);
    const Rational eps = parse_rational(a.eps);
    const ApproxOptions o = approx_options(a, c, "qap");
    const ApproxReport r = approximate_qap(q, eps, o);
    const std::size_t n = q.order();

    json out;
    out["best_cost"] = to_string(r.best_cost);
    out["best_assignment"] = assignment_json(r.best_assignment);
    out["additive_bound"] = to_string(eps * static_cast<unsigned long>(n * n));
    out["n"] = n;
    out["B"] = to_string(q.bound());
    report_fields(out, r, o, eps);
    if (n <= a.oracle_cap) {
        const QapSolution exact = qap_bruteforce(q, a.oracle_cap);
        out["oracle_cost"] = to_string(exact.cost);
        out["oracle_assignment"] = assignment_json(exact.assignment);
        out["gap"] = to_string(r.best_cost - exact.cost);
    }
    out["timing_ms"] = clock.ms();
    emit(out);
    return kExitOk;
}

// ---- robust-gi / wl ------------------------------------------------------

struct GiArgs {
    std::string g, h;
    std::string eps = "1/2";
    std::string strategy = "net";
};

int cmd_robust_gi(const GiArgs& a) {
    const Graph g = read_graph_file(a.g);
    const Graph h = read_graph_file(a.h);
    const RobustGiResult r =
        robust_gi(g, h, parse_rational(a.eps), parse_homogenising_method(a.strategy), budget_or(kDefaultWlBudget));
    std::cout << json::parse(certificate_json(r)).dump(2) << '\n';
    return r.answer == GiAnswer::far ? kExitFar : kExitOk;
}

struct WlArgs {
    std::string g, h;
    std::size_t k = 1;
};

json histogram_json(const StableColouring& s) {
    json out = json::array();
    for (const auto& [colour, count] : s.histogram) out.push_back({colour, count});
    return out;
}

int cmd_wl(const WlArgs& a) {
    const Graph g = read_graph_file(a.g);
    const std::uint64_t budget = budget_or(kDefaultWlBudget);
    json out;
    out["k"] = a.k;
    if (a.h.empty()) {
        const StableColouring s = k_wl_stable(g, a.k, budget);
        out["rounds"] = s.rounds;
        out["classes"] = s.class_count();
        out["histogram"] = histogram_json(s);
        if (a.k == 1) out["colours"] = s.colour_of;
    } else {
        const Graph h = read_graph_file(a.h);
        const WlComparison cmp = wl_compare(g, h, a.k, budget);
        out["distinguishes"] = cmp.distinguishes;
        if (cmp.distinguishing_colour) out["distinguishing_colour"] = *cmp.distinguishing_colour;
        out["decided_exactly"] = cmp.decided_exactly;
        if (!cmp.decided_exactly) {
            const auto [sg, sh] = k_wl_joint(g, h, a.k, budget);
            out["rounds"] = sg.rounds;
            out["histogram_g"] = histogram_json(sg);
            out["histogram_h"] = histogram_json(sh);
        }
    }
    emit(out);
    return kExitOk;
}

// ---- gen ----------------------------------------------------------------

struct GenArgs {
    std::string family;
    std::size_t n = 0;
    std::string base = "k4";
    std::string base_file;
    std::string in;
    std::size_t ell = 2;
    double p = 0.5;
    std::optional<int> target_vc;
    std::string out;
};

int cmd_gen(const GenArgs& a, const Common& c) {
    json out;
    out["family"] = a.family;
    if (a.family == "lemma36") {
        const QapInstance q = gen_lemma36_qap(a.n);
        const fs::path path = a.out.empty() ? fs::path("lemma36_n" + std::to_string(a.n) + ".qap") : fs::path(a.out);
        write_qap_file(path, q);
        out["n"] = a.n;
        out["written"] = {path.string()};
    } else if (a.family == "cfi" || a.family == "blowup") {
        InstanceBundle bundle;
        if (a.family == "cfi") {
            bundle = a.base_file.empty() ? gen_cfi_pair(a.base) : gen_cfi_pair(read_graph_file(a.base_file));
        } else {
            if (a.in.empty()) throw InvalidArgument("gen blowup needs --in <bundle dir>");
            bundle = gen_blowup_pair(read_bundle(a.in), a.ell);
        }
        const fs::path dir = a.out.empty() ? fs::path(a.family + "_bundle") : fs::path(a.out);
        write_bundle(dir, bundle);
        out["params"] = bundle.params;
        out["claims"] = bundle.claims;
        out["n"] = bundle.g.order();
        out["written"] = {(dir / "G.graph").string(), (dir / "H.graph").string(), (dir / "metadata.json").string()};
    } else if (a.family == "random") {
        const std::uint64_t seed = require_seed(c, "gen random");
        if (a.n < 1) throw InvalidArgument("gen random needs --n >= 1");
        const Graph g = a.target_vc ? gen_random_graph_with_vc(a.n, a.p, *a.target_vc, seed)
                                    : gen_random_graph(a.n, a.p, seed);
        const fs::path path = a.out.empty() ? fs::path("random_n" + std::to_string(a.n) + ".graph") : fs::path(a.out);
        write_graph_file(path, g);
        out["n"] = a.n;
        out["p"] = a.p;
        out["seed"] = seed;
        out["edges"] = g.edge_count();
        out["written"] = {path.string()};
    } else {
        throw InvalidArgument("unknown family '" + a.family + "' (cfi, blowup, lemma36, random)");
    }
    emit(out);
    return kExitOk;
}

// ---- oracle -------------------------------------------------------------

struct OracleArgs {
    std::string g, h, qap;
    std::size_t cap = kDefaultBruteForceCap;
};

int cmd_oracle(const OracleArgs& a) {
    Stopwatch clock;
    json out;
    if (!a.qap.empty()) {
        const QapSolution s = qap_bruteforce(read_qap_file(a.qap), a.cap);
        out["cost"] = to_string(s.cost);
        out["assignment"] = assignment_json(s.assignment);
    } else {
        if (a.g.empty() || a.h.empty()) throw InvalidArgument("oracle takes two graph files or --qap");
        const Graph g = read_graph_file(a.g);
        const Graph h = read_graph_file(a.h);
        const EditDistanceResult r = edit_distance_bruteforce(g, h, a.cap);
        out["cost"] = to_string(r.cost);
        out["assignment"] = assignment_json(r.assignment);
        out["isomorphic"] = r.cost == 0;
    }
    out["timing_ms"] = clock.ms();
    emit(out);
    return kExitOk;
}

// ---- bench --------------------------------------------------------------

struct BenchArgs {
    std::size_t n = 6;
};

int cmd_bench(const BenchArgs& a, const Common& c) {
    const std::uint64_t seed = require_seed(c, "bench");
    const Graph g = gen_random_graph(a.n, 0.5, mix_seed(seed, 0));
    const Graph h = gen_random_graph(a.n, 0.5, mix_seed(seed, 1));
    json results = json::array();
    auto run = [&](const std::string& name, auto&& f) {
        Stopwatch clock;
        json r = f();
        r["name"] = name;
        r["timing_ms"] = clock.ms();
        results.push_back(std::move(r));
    };
    run("edit_distance_bruteforce", [&] { return json{{"cost", to_string(edit_distance_bruteforce(g, h).cost)}}; });
    run("approximate_ged", [&] {
        ApproxOptions o;
        o.seed = seed;
        o.threads = c.threads;
        return json{{"cost", to_string(approximate_ged(g, h, Rational(1), o).cost)}};
    });
    run("nvc", [&] { return json{{"nvc", vc_dimension_exact(neighbourhood_system(g))}}; });
    run("wl2", [&] { return json{{"distinguishes", wl_distinguishes(g, h, 2)}}; });
    run("cfi_k4_isomorphism", [&] {
        const InstanceBundle b = gen_cfi_pair("k4");
        return json{{"isomorphic", find_isomorphism(b.g, b.h).has_value()}};
    });
    json out;
    out["n"] = a.n;
    out["seed"] = seed;
    out["results"] = results;
    emit(out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Approximate graph edit distance, QAP and robust isomorphism testing"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--seed", common.seed, "Seed for randomized commands")->type_name("UINT");
    app.add_option("--threads", common.threads, "Worker threads")->check(CLI::PositiveNumber);
    app.fallthrough();

    VcArgs vc;
    auto* vc_cmd = app.add_subcommand("vc", "VC dimension of neighbourhood / threshold systems");
    vc_cmd->add_option("--graph", vc.graph, "Graph file");
    vc_cmd->add_option("--qap", vc.qap, "QAP file");
    vc_cmd->add_flag("--weighted", vc.weighted, "Also report the threshold-graph VC dimension");
    vc_cmd->add_flag("--mixed", vc.mixed, "Also report the mixed-neighbourhood VC dimension");
    vc_cmd->add_option("--weak-d", vc.weak_d, "Test weak VC dimension <= d (QAP)");
    vc_cmd->add_option("--threshold", vc.threshold, "Single threshold t (QAP)");

    ApproxArgs ged;
    auto* ged_cmd = app.add_subcommand("ged", "Approximate graph edit distance");
    ged_cmd->add_option("G", ged.g)->required();
    ged_cmd->add_option("H", ged.h)->required();
    ApproxArgs qap;
    auto* qap_cmd = app.add_subcommand("qap", "Approximate a QAP instance");
    qap_cmd->add_option("QAP", qap.qap)->required();
    for (auto [cmd, args] : {std::pair{ged_cmd, &ged}, std::pair{qap_cmd, &qap}}) {
        cmd->add_option("--eps", args->eps, "Additive error per n^2 (p/q or decimal)");
        cmd->add_option("--m", args->m, "Largest alpha size")->check(CLI::PositiveNumber);
        cmd->add_option("--mode", args->mode, "exhaustive | sampled");
        cmd->add_option("--samples", args->samples, "Alphas per size in sampled mode");
        cmd->add_option("--retries", args->retries, "Rounding retries per alpha");
        cmd->add_flag("--exact-lp", args->exact_lp, "Rational simplex instead of floating point");
        cmd->add_option("--oracle-cap", args->oracle_cap, "Run the brute-force oracle up to this order");
    }

    GiArgs gi;
    auto* gi_cmd = app.add_subcommand("robust-gi", "Isomorphic vs far decision with certificate");
    gi_cmd->add_option("G", gi.g)->required();
    gi_cmd->add_option("H", gi.h)->required();
    gi_cmd->add_option("--eps", gi.eps, "Promise gap");
    gi_cmd->add_option("--strategy", gi.strategy, "net | coloured-greedy");

    WlArgs wl;
    auto* wl_cmd = app.add_subcommand("wl", "k-WL stable colouring, or comparison of two graphs");
    wl_cmd->add_option("G", wl.g)->required();
    wl_cmd->add_option("H", wl.h);
    wl_cmd->add_option("--k", wl.k, "Dimension")->check(CLI::PositiveNumber);

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate instances");
    gen_cmd->add_option("family", gen.family, "cfi | blowup | lemma36 | random")->required();
    gen_cmd->add_option("--n", gen.n);
    gen_cmd->add_option("--base", gen.base, "Stock CFI base: k4, prism, k33, cube, petersen");
    gen_cmd->add_option("--base-file", gen.base_file, "Custom 3-regular base graph file");
    gen_cmd->add_option("--in", gen.in, "Input bundle directory (blowup)");
    gen_cmd->add_option("--ell", gen.ell)->check(CLI::PositiveNumber);
    gen_cmd->add_option("--p", gen.p, "Edge probability (random)");
    gen_cmd->add_option("--target-vc", gen.target_vc, "Reject until the neighbourhood VC matches (random)");
    gen_cmd->add_option("--out", gen.out, "Output file or bundle directory");

    OracleArgs oracle;
    auto* oracle_cmd = app.add_subcommand("oracle", "Exact brute-force edit distance or QAP optimum");
    oracle_cmd->add_option("G", oracle.g);
    oracle_cmd->add_option("H", oracle.h);
    oracle_cmd->add_option("--qap", oracle.qap);
    oracle_cmd->add_option("--cap", oracle.cap, "Largest order enumerated");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Time the main operations on seeded random inputs");
    bench_cmd->add_option("--n", bench.n)->check(CLI::Range(1, 9));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    auto fail = [](const std::string& kind, const std::string& message, int code) {
        std::cerr << "error: " << message << '\n';
        emit(json{{"error", message}, {"kind", kind}, {"exit_code", code}});
        return code;
    };
    try {
        if (*vc_cmd) return cmd_vc(vc);
        if (*ged_cmd) return cmd_ged(ged, common);
        if (*qap_cmd) return cmd_qap(qap, common);
        if (*gi_cmd) return cmd_robust_gi(gi);
        if (*wl_cmd) return cmd_wl(wl);
        if (*gen_cmd) return cmd_gen(gen, common);
        if (*oracle_cmd) return cmd_oracle(oracle);
        if (*bench_cmd) return cmd_bench(bench, common);
    } catch (const BudgetExceeded& e) {
        return fail("budget", e.what(), kExitBudget);
    } catch (const InvalidArgument& e) {
        return fail("input", e.what(), kExitUsage);
    } catch (const ParseError& e) {
        return fail("parse", e.what(), kExitUsage);
    } catch (const VerificationFailed& e) {
        return fail("verification", e.what(), kExitUsage);
    } catch (const std::exception& e) {
        return fail("error", e.what(), kExitUsage);
    }
    return kExitUsage;
}
