#include "robustiso/graph.hpp"

#include "robustiso/errors.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace robustiso {

// ---------------------------------------------------------------- Assignment

Assignment::Assignment(std::vector<Vertex> mapping) : mapping_(std::move(mapping)) {
    std::vector<bool> seen(mapping_.size(), false);
    for (Vertex image : mapping_) {
        if (image >= mapping_.size() || seen[image]) throw InvalidArgument("assignment is not a permutation");
        seen[image] = true;
    }
}

Assignment Assignment::identity(std::size_t n) {
    std::vector<Vertex> m(n);
    std::iota(m.begin(), m.end(), Vertex{0});
    return Assignment(std::move(m));
}

Assignment Assignment::inverse() const {
    std::vector<Vertex> inv(mapping_.size());
    for (Vertex v = 0; v < mapping_.size(); ++v) inv[mapping_[v]] = v;
    return Assignment(std::move(inv));
}

// ---------------------------------------------------------- PartialInjection

PartialInjection::PartialInjection(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
    std::sort(pairs_.begin(), pairs_.end());
    std::vector<Vertex> targets;
    targets.reserve(pairs_.size());
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
        if (i > 0 && pairs_[i].first == pairs_[i - 1].first) throw InvalidArgument("partial injection repeats a source");
        targets.push_back(pairs_[i].second);
    }
    std::sort(targets.begin(), targets.end());
    if (std::adjacent_find(targets.begin(), targets.end()) != targets.end())
        throw InvalidArgument("partial injection repeats a target");
}

PartialInjection PartialInjection::graph_of(const Assignment& phi) {
    std::vector<Pair> pairs;
    pairs.reserve(phi.size());
    for (Vertex v = 0; v < phi.size(); ++v) pairs.emplace_back(v, phi[v]);
    return PartialInjection(std::move(pairs));
}

bool PartialInjection::is_subset_of(const Assignment& phi) const {
    return std::all_of(pairs_.begin(), pairs_.end(), [&](const Pair& p) {
        return p.first < phi.size() && phi[p.first] == p.second;
    });
}

std::size_t PartialInjection::span() const {
    std::size_t s = 0;
    for (auto [a, b] : pairs_) s = std::max<std::size_t>({s, std::size_t{a} + 1, std::size_t{b} + 1});
    return s;
}

// --------------------------------------------------------------------- Graph

Graph::Graph(std::size_t n) : adjacency_(n, VertexSet(n)) {}

void Graph::check_vertex(Vertex v) const {
    if (v >= order()) throw InvalidArgument("vertex " + std::to_string(v) + " out of range for order " + std::to_string(order()));
}

void Graph::check_new_edge(Vertex u, Vertex v) const {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw InvalidArgument("self-loop at vertex " + std::to_string(u));
    if (adjacency_[u][v]) throw InvalidArgument("duplicate edge " + std::to_string(u) + " " + std::to_string(v));
}

void Graph::add_edge(Vertex u, Vertex v) {
    check_new_edge(u, v);
    adjacency_[u].set(v);
    adjacency_[v].set(u);
    ++edge_count_;
    if (is_weighted()) {
        weights_[u * order() + v] = 1;
        weights_[v * order() + u] = 1;
    }
}

void Graph::add_edge(Vertex u, Vertex v, const Rational& raw_weight) {
    check_new_edge(u, v);
    Rational weight = raw_weight;
    weight.canonicalize();  // gmpxx does not reduce Rational(a, b)
    if (weight == 0) throw InvalidArgument("edge weight must be nonzero");
    if (!is_weighted()) {
        const std::size_t n = order();
        weights_.assign(n * n, Rational(0));
        for (Vertex a = 0; a < n; ++a)
            for (auto b = adjacency_[a].find_first(); b != VertexSet::npos; b = adjacency_[a].find_next(b))
                weights_[a * n + b] = 1;
    }
    adjacency_[u].set(v);
    adjacency_[v].set(u);
    ++edge_count_;
    weights_[u * order() + v] = weight;
    weights_[v * order() + u] = weight;
}

void Graph::set_colour(Vertex v, Colour colour) {
    check_vertex(v);
    if (colours_.empty()) colours_.assign(order(), 0);
    colours_[v] = colour;
}

void Graph::set_colours(std::vector<Colour> colours) {
    if (colours.size() != order()) throw InvalidArgument("colour vector size does not match graph order");
    colours_ = std::move(colours);
}

bool Graph::has_edge(Vertex u, Vertex v) const {
    check_vertex(u);
    check_vertex(v);
    return adjacency_[u][v];
}

Rational Graph::weight(Vertex u, Vertex v) const {
    if (!has_edge(u, v)) return 0;
    return is_weighted() ? weights_[u * order() + v] : Rational(1);
}

Colour Graph::colour(Vertex v) const {
    check_vertex(v);
    return colours_.empty() ? 0 : colours_[v];
}

const VertexSet& Graph::neighbourhood(Vertex v) const {
    check_vertex(v);
    return adjacency_[v];
}

std::vector<std::pair<Vertex, Vertex>> Graph::edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < order(); ++u)
        for (auto v = adjacency_[u].find_next(u); v != VertexSet::npos; v = adjacency_[u].find_next(v))
            out.emplace_back(u, static_cast<Vertex>(v));
    return out;
}

std::vector<Colour> Graph::colours() const {
    return colours_.empty() ? std::vector<Colour>(order(), 0) : colours_;
}

Rational Graph::weight_bound() const {
    if (edge_count_ == 0) return 0;
    if (!is_weighted()) return 1;
    Rational best = 0;
    for (const auto& w : weights_) best = std::max(best, abs(w));
    return best;
}

std::size_t Graph::max_colour_class_size() const {
    if (colours_.empty()) return order();
    std::map<Colour, std::size_t> counts;
    for (Colour c : colours_) ++counts[c];
    std::size_t best = 0;
    for (auto [c, k] : counts) best = std::max(best, k);
    return best;
}

Graph Graph::permuted(const Assignment& pi) const {
    if (pi.size() != order()) throw InvalidArgument("permutation size does not match graph order");
    Graph out(order());
    for (auto [u, v] : edges()) {
        if (is_weighted())
            out.add_edge(pi[u], pi[v], weight(u, v));
        else
            out.add_edge(pi[u], pi[v]);
    }
    if (is_coloured()) {
        std::vector<Colour> c(order());
        for (Vertex v = 0; v < order(); ++v) c[pi[v]] = colours_[v];
        out.set_colours(std::move(c));
    }
    return out;
}

bool operator==(const Graph& a, const Graph& b) {
    return a.adjacency_ == b.adjacency_ && a.weights_ == b.weights_ && a.colours_ == b.colours_;
}

// ----------------------------------------------------------------- edit cost

namespace {

void require_same_order(const Graph& g, const Graph& h) {
    if (g.order() != h.order())
        throw InvalidArgument("graphs have different orders (" + std::to_string(g.order()) + " vs " +
                              std::to_string(h.order()) + ")");
}

bool weighted_pair(const Graph& g, const Graph& h) { return g.is_weighted() || h.is_weighted(); }

/// Dense weight matrices over a common integer scale, so the brute-force
/// inner loop stays in machine integers.
struct ScaledWeights {
    std::vector<long long> g, h;
    Rational scale;  // true weight = entry / scale
};

std::optional<ScaledWeights> scale_to_integers(const Graph& g, const Graph& h) {
    const std::size_t n = g.order();
    mpz_class lcm = 1;
    for (const Graph* x : {&g, &h})
        for (auto [u, v] : x->edges()) {
            Rational w = x->weight(u, v);
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), w.get_den_mpz_t());
        }
    ScaledWeights out;
    out.scale = Rational(lcm);
    out.g.assign(n * n, 0);
    out.h.assign(n * n, 0);
    const mpz_class limit = mpz_class(1) << 40;
    for (auto [x, dst] : {std::pair{&g, &out.g}, std::pair{&h, &out.h}})
        for (auto [u, v] : x->edges()) {
            Rational w = x->weight(u, v) * out.scale;
            mpz_class num = w.get_num();
            if (abs(num) >= limit) return std::nullopt;
            (*dst)[u * n + v] = (*dst)[v * n + u] = num.get_si();
        }
    return out;
}

template <typename Cost>
struct BruteForce {
    std::size_t n;
    const std::vector<Cost>* wg;
    const std::vector<Cost>* wh;
    std::vector<Colour> cg, ch;
    std::vector<Vertex> current;
    std::vector<bool> used;
    std::optional<Cost> best;
    std::vector<Vertex> best_perm;

    void search(std::size_t v, const Cost& partial) {
        if (best && partial >= *best) return;
        if (v == n) {
            best = partial;
            best_perm = current;
            return;
        }
        for (Vertex t = 0; t < n; ++t) {
            if (used[t] || cg[v] != ch[t]) continue;
            Cost add = 0;
            for (std::size_t u = 0; u < v; ++u) {
                Cost d = (*wg)[u * n + v] - (*wh)[current[u] * n + t];
                add += d < 0 ? Cost(-d) : d;
            }
            used[t] = true;
            current[v] = t;
            search(v + 1, Cost(partial + add));
            used[t] = false;
        }
    }
};

template <typename Cost>
std::optional<std::pair<Cost, std::vector<Vertex>>> run_bruteforce(const Graph& g, const Graph& h,
                                                                     const std::vector<Cost>& wg,
                                                                     const std::vector<Cost>& wh) {
    BruteForce<Cost> bf{g.order(), &wg, &wh, g.colours(), h.colours(), std::vector<Vertex>(g.order()),
                        std::vector<bool>(g.order(), false), std::nullopt, {}};
    bf.search(0, Cost(0));
    if (!bf.best) return std::nullopt;
    return std::pair{*bf.best, bf.best_perm};
}

}  // namespace

Rational edit_cost(const Graph& g, const Graph& h, const Assignment& pi) {
    require_same_order(g, h);
    if (pi.size() != g.order()) throw InvalidArgument("assignment size does not match graph order");
    const std::size_t n = g.order();
    if (g.is_coloured() || h.is_coloured())
        for (Vertex v = 0; v < n; ++v)
            if (g.colour(v) != h.colour(pi[v]))
                throw InvalidArgument("assignment does not preserve colours at vertex " + std::to_string(v));
    if (!weighted_pair(g, h)) {
        long long mismatches = 0;
        for (Vertex v = 0; v < n; ++v)
            for (Vertex w = v + 1; w < n; ++w)
                mismatches += g.has_edge(v, w) != h.has_edge(pi[v], pi[w]);
        return to_rational(mismatches);
    }
    Rational total = 0;
    for (Vertex v = 0; v < n; ++v)
        for (Vertex w = v + 1; w < n; ++w) total += abs(g.weight(v, w) - h.weight(pi[v], pi[w]));
    return total;
}

EditDistanceResult edit_distance_bruteforce(const Graph& g, const Graph& h, std::size_t cap) {
    require_same_order(g, h);
    const std::size_t n = g.order();
    if (n > cap)
        throw BudgetExceeded("brute-force edit distance capped at n = " + std::to_string(cap) + ", got " +
                             std::to_string(n));
    auto histogram = [](const Graph& x) {
        auto c = x.colours();
        std::sort(c.begin(), c.end());
        return c;
    };
    if (histogram(g) != histogram(h))
        throw InvalidArgument("no colour-preserving bijection exists (colour histograms differ)");

    if (auto scaled = scale_to_integers(g, h)) {
        auto result = run_bruteforce<long long>(g, h, scaled->g, scaled->h);
        if (!result) throw InternalError("brute force found no bijection despite matching histograms");
        return {to_rational(result->first) / scaled->scale, Assignment(std::move(result->second))};
    }
    std::vector<Rational> wg(n * n), wh(n * n);
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = 0; v < n; ++v) {
            if (u == v) continue;
            wg[u * n + v] = g.weight(u, v);
            wh[u * n + v] = h.weight(u, v);
        }
    auto result = run_bruteforce<Rational>(g, h, wg, wh);
    if (!result) throw InternalError("brute force found no bijection despite matching histograms");
    return {result->first, Assignment(std::move(result->second))};
}

VertexSet mixed_neighbourhood(const Graph& g, Vertex v, Vertex w) {
    return g.neighbourhood(v) ^ g.neighbourhood(w);
}

Graph threshold_graph(const Graph& g, const Rational& t) {
    Graph out(g.order());
    for (auto [u, v] : g.edges())
        if (g.weight(u, v) > t) out.add_edge(u, v);
    return out;
}

Graph blowup(const Graph& g, std::size_t ell) {
    if (ell < 1) throw InvalidArgument("blowup factor must be at least 1");
    const std::size_t n = g.order();
    Graph out(n * ell);
    auto id = [ell](std::size_t v, std::size_t i) { return static_cast<Vertex>(v * ell + i); };
    for (auto [u, v] : g.edges())
        for (std::size_t i = 0; i < ell; ++i)
            for (std::size_t j = 0; j < ell; ++j) {
                if (g.is_weighted())
                    out.add_edge(id(u, i), id(v, j), g.weight(u, v));
                else
                    out.add_edge(id(u, i), id(v, j));
            }
    std::vector<Colour> colours(n * ell);
    for (Vertex v = 0; v < n; ++v)
        for (std::size_t i = 0; i < ell; ++i) colours[id(v, i)] = static_cast<Colour>(g.colour(v) * ell + i);
    out.set_colours(std::move(colours));
    return out;
}

// ----------------------------------------------------------------- file I/O

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::string body = line.substr(0, line.find('#'));
    std::istringstream in(body);
    std::vector<std::string> tokens;
    for (std::string tok; in >> tok;) tokens.push_back(tok);
    return tokens;
}

std::size_t parse_index(const std::string& tok, std::size_t line) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(line, "expected a non-negative integer, got '" + tok + "'");
    try {
        return std::stoull(tok);
    } catch (const std::exception&) {
        throw ParseError(line, "integer out of range: '" + tok + "'");
    }
}

}  // namespace

Graph parse_graph(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::optional<Graph> g;
    std::vector<bool> coloured;
    std::size_t lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        auto tok = tokenize(line);
        if (tok.empty()) continue;
        if (!g) {
            if (tok[0] != "n" || tok.size() != 2) throw ParseError(lineno, "expected header 'n <count>'");
            g.emplace(parse_index(tok[1], lineno));
            continue;
        }
        try {
            if (tok[0] == "e") {
                if (tok.size() != 3 && tok.size() != 4) throw ParseError(lineno, "expected 'e <u> <v> [weight]'");
                auto u = parse_index(tok[1], lineno), v = parse_index(tok[2], lineno);
                if (u >= g->order() || v >= g->order()) throw ParseError(lineno, "vertex index >= n");
                if (tok.size() == 4) {
                    Rational w;
                    try {
                        w = parse_rational(tok[3]);
                    } catch (const ParseError& e) {
                        throw ParseError(lineno, e.what());
                    }
                    g->add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v), w);
                } else {
                    g->add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v));
                }
            } else if (tok[0] == "c") {
                if (tok.size() != 3) throw ParseError(lineno, "expected 'c <v> <colour>'");
                auto v = parse_index(tok[1], lineno);
                auto c = parse_index(tok[2], lineno);
                if (v >= g->order()) throw ParseError(lineno, "vertex index >= n");
                if (c > std::numeric_limits<Colour>::max()) throw ParseError(lineno, "colour out of range");
                if (coloured.empty()) coloured.assign(g->order(), false);
                if (coloured[v]) throw ParseError(lineno, "duplicate colour for vertex " + tok[1]);
                coloured[v] = true;
                g->set_colour(static_cast<Vertex>(v), static_cast<Colour>(c));
            } else if (tok[0] == "n") {
                throw ParseError(lineno, "duplicate header");
            } else {
                throw ParseError(lineno, "unknown record '" + tok[0] + "'");
            }
        } catch (const InvalidArgument& e) {
            throw ParseError(lineno, e.what());
        }
    }
    if (!g) throw ParseError(lineno, "missing header 'n <count>'");
    return std::move(*g);
}

std::string serialize_graph(const Graph& g) {
    std::ostringstream out;
    out << "n " << g.order() << '\n';
    if (g.is_coloured())
        for (Vertex v = 0; v < g.order(); ++v) out << "c " << v << ' ' << g.colour(v) << '\n';
    for (auto [u, v] : g.edges()) {
        out << "e " << u << ' ' << v;
        if (g.is_weighted()) out << ' ' << to_string(g.weight(u, v));
        out << '\n';
    }
    return out.str();
}

Graph read_graph_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open graph file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str());
}

void write_graph_file(const std::filesystem::path& path, const Graph& g) {
    if (path.has_parent_path()) {
        std::error_code ignored;
        std::filesystem::create_directories(path.parent_path(), ignored);
    }
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write graph file " + path.string());
    out << serialize_graph(g);
}

}  // namespace robustiso
