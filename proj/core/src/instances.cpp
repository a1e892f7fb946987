#include "robustiso/instances.hpp"

#include "robustiso/errors.hpp"
#include "robustiso/rng.hpp"
#include "robustiso/set_system.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

namespace robustiso {

QapInstance gen_lemma36_qap(std::size_t n) {
    if (n < 4) throw InvalidArgument("lemma36 instance needs n >= 4");
    std::size_t k = 0;
    while ((std::size_t{2} << k) <= n) ++k;  // floor(log2 n)
    QapInstance q(n);
    for (std::size_t a = 0; a < (std::size_t{1} << k); ++a)
        for (std::size_t x = 0; x < k; ++x)
            if (a >> x & 1) q.set(n - 1, a, 0, x, Rational(1));
    q.declare_bound(1);
    return q;
}

std::vector<std::string> cfi_base_names() { return {"k4", "prism", "k33", "cube", "petersen"}; }

Graph cfi_base(const std::string& name) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::size_t n = 0;
    if (name == "k4") {
        n = 4;
        edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    } else if (name == "prism") {
        n = 6;
        edges = {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {0, 3}, {1, 4}, {2, 5}};
    } else if (name == "k33") {
        n = 6;
        for (Vertex u = 0; u < 3; ++u)
            for (Vertex v = 3; v < 6; ++v) edges.emplace_back(u, v);
    } else if (name == "cube") {
        n = 8;
        for (Vertex u = 0; u < 8; ++u)
            for (Vertex bit = 1; bit < 8; bit <<= 1)
                if ((u & bit) == 0) edges.emplace_back(u, u | bit);
    } else if (name == "petersen") {
        n = 10;
        for (Vertex i = 0; i < 5; ++i) {
            edges.emplace_back(i, (i + 1) % 5);
            edges.emplace_back(i, i + 5);
            edges.emplace_back(5 + i, 5 + (i + 2) % 5);
        }
    } else {
        throw InvalidArgument("unknown CFI base '" + name + "'");
    }
    Graph g(n);
    for (auto [u, v] : edges) g.add_edge(u, v);
    return g;
}

namespace {

void check_cubic_connected(const Graph& base) {
    if (base.is_weighted() || base.is_coloured()) throw InvalidArgument("CFI base must be a plain graph");
    const std::size_t n = base.order();
    if (n == 0) throw InvalidArgument("CFI base is empty");
    for (Vertex v = 0; v < n; ++v)
        if (base.degree(v) != 3) throw InvalidArgument("CFI base is not 3-regular");
    VertexSet seen(n);
    std::vector<Vertex> stack{0};
    seen.set(0);
    while (!stack.empty()) {
        const Vertex v = stack.back();
        stack.pop_back();
        const VertexSet& nb = base.neighbourhood(v);
        for (auto w = nb.find_first(); w != VertexSet::npos; w = nb.find_next(w))
            if (!seen.test(w)) {
                seen.set(w);
                stack.push_back(static_cast<Vertex>(w));
            }
    }
    if (!seen.all()) throw InvalidArgument("CFI base is not connected");
}

std::string base_label(const Graph& base) {
    for (const auto& name : cfi_base_names())
        if (cfi_base(name) == base) return name;
    return "custom";
}

}  // namespace

Graph cfi_graph(const Graph& base, const std::vector<std::pair<Vertex, Vertex>>& twisted) {
    check_cubic_connected(base);
    const std::size_t b = base.order();
    const auto edges = base.edges();
    auto edge_index = [&](Vertex u, Vertex v) {
        if (u > v) std::swap(u, v);
        auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(u, v));
        if (it == edges.end() || *it != std::make_pair(u, v))
            throw InvalidArgument("twisted pair is not a base edge");
        return static_cast<std::size_t>(it - edges.begin());
    };
    std::vector<bool> twist(edges.size(), false);
    for (auto [u, v] : twisted) twist[edge_index(u, v)] = !twist[edge_index(u, v)];

    // incidence (u, e): index 2e + (u is the larger endpoint)
    auto incidence = [&](Vertex u, std::size_t e) { return 2 * e + (edges[e].second == u ? 1 : 0); };
    auto a_vertex = [&](std::size_t inc, int bit) { return static_cast<Vertex>(4 * b + 2 * inc + bit); };

    Graph g(10 * b);
    std::vector<Colour> colours(10 * b);
    for (Vertex u = 0; u < b; ++u) {
        std::array<std::size_t, 3> inc_edges{};
        std::size_t found = 0;
        for (std::size_t e = 0; e < edges.size(); ++e)
            if (edges[e].first == u || edges[e].second == u) inc_edges[found++] = e;
        // even subsets as bit masks over (e1, e2, e3)
        constexpr std::array<unsigned, 4> kEven{0b000, 0b011, 0b101, 0b110};
        for (std::size_t j = 0; j < 4; ++j) {
            const Vertex mid = static_cast<Vertex>(4 * u + j);
            colours[mid] = u;
            for (std::size_t slot = 0; slot < 3; ++slot)
                g.add_edge(mid, a_vertex(incidence(u, inc_edges[slot]), kEven[j] >> slot & 1));
        }
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto [u, v] = edges[e];
        for (int bit = 0; bit < 2; ++bit) {
            const Vertex au = a_vertex(incidence(u, e), bit);
            const Vertex av = a_vertex(incidence(v, e), twist[e] ? 1 - bit : bit);
            g.add_edge(au, av);
            colours[au] = static_cast<Colour>(b + incidence(u, e));
            colours[av] = static_cast<Colour>(b + incidence(v, e));
        }
    }
    g.set_colours(std::move(colours));
    return g;
}

InstanceBundle gen_cfi_pair(const Graph& base) {
    check_cubic_connected(base);
    InstanceBundle out;
    out.g = cfi_graph(base, {});
    out.h = cfi_graph(base, {base.edges().front()});
    out.family = "cfi";
    out.params["base"] = base_label(base);
    out.params["base_order"] = std::to_string(base.order());
    out.params["twisted_edge"] =
        std::to_string(base.edges().front().first) + "-" + std::to_string(base.edges().front().second);
    out.claims["non_isomorphic"] = "true";
    out.claims["three_regular"] = "true";
    out.claims["max_colour_class_size"] = "4";
    out.claims["nvc_at_most"] = "3";
    out.claims["wl1_distinguishes"] = "false";
    return out;
}

InstanceBundle gen_cfi_pair(const std::string& base_name) { return gen_cfi_pair(cfi_base(base_name)); }

InstanceBundle gen_blowup_pair(const InstanceBundle& bundle, std::size_t ell) {
    if (ell < 1) throw InvalidArgument("ell must be at least 1");
    if (bundle.g.order() != bundle.h.order()) throw InvalidArgument("bundle graphs have different orders");
    InstanceBundle out;
    out.g = blowup(bundle.g, ell);
    out.h = blowup(bundle.h, ell);
    out.family = "blowup";
    out.params = bundle.params;
    out.params["base_family"] = bundle.family;
    out.params["ell"] = std::to_string(ell);
    out.claims = bundle.claims;
    out.claims.erase("three_regular");
    out.claims.erase("max_colour_class_size");
    out.claims.erase("nvc_at_most");
    out.claims["edit_distance_at_least"] = "ell^2/3 * base edit distance";
    out.claims["wl_distinguishes_unchanged"] = "true";
    out.seed = bundle.seed;
    return out;
}

Graph gen_random_graph(std::size_t n, double p, std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("random graph needs n >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("edge probability must lie in [0, 1]");
    Rng rng(seed);
    Graph g(n);
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            if (rng.bernoulli(p)) g.add_edge(u, v);
    return g;
}

Graph gen_random_graph_with_vc(std::size_t n, double p, int target_vc, std::uint64_t seed, std::size_t retries) {
    for (std::size_t i = 0; i < retries; ++i) {
        Graph g = gen_random_graph(n, p, mix_seed(seed, i));
        if (vc_dimension_exact(neighbourhood_system(g)) == target_vc) return g;
    }
    throw VerificationFailed("no random graph with VC dimension " + std::to_string(target_vc) + " in " +
                             std::to_string(retries) + " draws");
}

void write_bundle(const std::filesystem::path& dir, const InstanceBundle& bundle) {
    std::filesystem::create_directories(dir);
    write_graph_file(dir / "G.graph", bundle.g);
    write_graph_file(dir / "H.graph", bundle.h);
    nlohmann::json meta;
    meta["family"] = bundle.family;
    meta["params"] = bundle.params;
    meta["claims"] = bundle.claims;
    if (bundle.seed) meta["seed"] = *bundle.seed;
    std::ofstream out(dir / "metadata.json");
    if (!out) throw Error("cannot write " + (dir / "metadata.json").string());
    out << meta.dump(2) << '\n';
}

InstanceBundle read_bundle(const std::filesystem::path& dir) {
    InstanceBundle out;
    out.g = read_graph_file(dir / "G.graph");
    out.h = read_graph_file(dir / "H.graph");
    std::ifstream in(dir / "metadata.json");
    if (!in) throw Error("cannot read " + (dir / "metadata.json").string());
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(in);
        out.family = meta.at("family").get<std::string>();
        out.params = meta.value("params", std::map<std::string, std::string>{});
        out.claims = meta.value("claims", std::map<std::string, std::string>{});
        if (meta.contains("seed")) out.seed = meta.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("metadata.json: ") + e.what());
    }
    return out;
}

}  // namespace robustiso
