#pragma once

// Independent reference implementations. They share no code with the library
// beyond reading graphs and coefficients; every one of them is the literal
// definition evaluated by enumeration.

#include "robustiso/graph.hpp"
#include "robustiso/qap.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

namespace oracle {

using robustiso::Colour;
using robustiso::Graph;
using robustiso::QapInstance;
using robustiso::Rational;
using robustiso::Vertex;

using Perm = std::vector<Vertex>;

inline std::vector<std::vector<Rational>> weight_matrix(const Graph& g) {
    const std::size_t n = g.order();
    std::vector<std::vector<Rational>> w(n, std::vector<Rational>(n, Rational(0)));
    for (auto [u, v] : g.edges()) w[u][v] = w[v][u] = g.is_weighted() ? g.weight(u, v) : Rational(1);
    return w;
}

/// Sum over unordered pairs of |w_G(uv) - w_H(pi u pi v)|; equals the flip
/// count for unweighted graphs.
inline Rational edit_cost(const Graph& g, const Graph& h, const Perm& pi) {
    const auto wg = weight_matrix(g), wh = weight_matrix(h);
    Rational total = 0;
    for (std::size_t u = 0; u < pi.size(); ++u)
        for (std::size_t v = u + 1; v < pi.size(); ++v) {
            Rational d = wg[u][v] - wh[pi[u]][pi[v]];
            total += d < 0 ? Rational(-d) : d;
        }
    return total;
}

inline bool preserves_colours(const Graph& g, const Graph& h, const Perm& pi) {
    for (Vertex v = 0; v < pi.size(); ++v)
        if (g.colour(v) != h.colour(pi[v])) return false;
    return true;
}

template <typename F>
void for_each_permutation(std::size_t n, F&& f) {
    Perm p(n);
    std::iota(p.begin(), p.end(), Vertex{0});
    do {
        f(p);
    } while (std::next_permutation(p.begin(), p.end()));
}

/// Minimum over all colour-preserving bijections.
inline std::optional<Rational> edit_distance(const Graph& g, const Graph& h) {
    std::optional<Rational> best;
    for_each_permutation(g.order(), [&](const Perm& p) {
        if (!preserves_colours(g, h, p)) return;
        Rational c = edit_cost(g, h, p);
        if (!best || c < *best) best = c;
    });
    return best;
}

inline Rational qap_cost(const QapInstance& q, const Perm& phi) {
    Rational total = 0;
    for (std::size_t v = 0; v < phi.size(); ++v)
        for (std::size_t w = 0; w < phi.size(); ++w) total += q(v, phi[v], w, phi[w]);
    return total;
}

inline std::pair<Rational, Perm> qap_optimum(const QapInstance& q) {
    std::optional<std::pair<Rational, Perm>> best;
    for_each_permutation(q.order(), [&](const Perm& p) {
        Rational c = qap_cost(q, p);
        if (!best || c < best->first) best = {c, p};
    });
    return *best;
}

/// Colour-respecting backtracking isomorphism test. Vertices are mapped in
/// breadth-first order and every new pair is checked against all earlier ones.
inline bool isomorphic(const Graph& g, const Graph& h) {
    const std::size_t n = g.order();
    if (n != h.order() || g.edge_count() != h.edge_count()) return false;
    std::vector<Vertex> order;
    std::vector<bool> seen(n, false);
    for (Vertex s = 0; s < n; ++s) {
        if (seen[s]) continue;
        seen[s] = true;
        order.push_back(s);
        for (std::size_t i = order.size() - 1; i < order.size(); ++i)
            for (Vertex w = 0; w < n; ++w)
                if (!seen[w] && g.has_edge(order[i], w)) {
                    seen[w] = true;
                    order.push_back(w);
                }
    }
    std::vector<Vertex> image(n);
    std::vector<bool> used(n, false);
    auto extend = [&](auto&& self, std::size_t depth) -> bool {
        if (depth == n) return true;
        const Vertex v = order[depth];
        for (Vertex w = 0; w < n; ++w) {
            if (used[w] || g.colour(v) != h.colour(w) || g.degree(v) != h.degree(w)) continue;
            bool ok = true;
            for (std::size_t i = 0; i < depth && ok; ++i)
                ok = g.has_edge(order[i], v) == h.has_edge(image[order[i]], w);
            if (!ok) continue;
            image[v] = w;
            used[w] = true;
            if (self(self, depth + 1)) return true;
            used[w] = false;
        }
        return false;
    };
    return extend(extend, 0);
}

/// Traces of `family` on x, each trace as a bitmask over positions of x.
inline std::size_t trace_count(const std::vector<std::vector<bool>>& family, const std::vector<std::size_t>& x) {
    std::set<std::uint64_t> traces;
    for (const auto& set : family) {
        std::uint64_t mask = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (set[x[i]]) mask |= std::uint64_t{1} << i;
        traces.insert(mask);
    }
    return traces.size();
}

/// Largest shattered subset size by enumerating all subsets of each size in
/// turn; -1 for an empty family.
inline int vc_dimension(const std::vector<std::vector<bool>>& family, std::size_t ground) {
    if (family.empty()) return -1;
    int best = 0;
    for (std::size_t size = 1; size <= ground && size < 63; ++size) {
        if ((std::size_t{1} << size) > family.size()) break;
        std::vector<std::size_t> x(size);
        std::iota(x.begin(), x.end(), std::size_t{0});
        bool found = false;
        while (!found) {
            if (trace_count(family, x) == (std::size_t{1} << size)) found = true;
            std::size_t i = size;
            while (i > 0 && x[i - 1] == ground - size + i - 1) --i;
            if (i == 0) break;
            ++x[i - 1];
            for (std::size_t j = i; j < size; ++j) x[j] = x[j - 1] + 1;
        }
        if (!found) break;
        best = static_cast<int>(size);
    }
    return best;
}

inline std::vector<std::vector<bool>> neighbourhoods(const Graph& g) {
    std::vector<std::vector<bool>> out;
    for (Vertex v = 0; v < g.order(); ++v) {
        std::vector<bool> s(g.order(), false);
        for (Vertex w = 0; w < g.order(); ++w) s[w] = g.has_edge(v, w);
        out.push_back(std::move(s));
    }
    return out;
}

/// {(w,w') : c(v,v',w,w') > t} over all (v,v'), ground [n]x[n] as w*n+w'.
inline std::vector<std::vector<bool>> threshold_family(const QapInstance& q, const Rational& t) {
    const std::size_t n = q.order();
    std::vector<std::vector<bool>> out;
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t vp = 0; vp < n; ++vp) {
            std::vector<bool> s(n * n, false);
            for (std::size_t w = 0; w < n; ++w)
                for (std::size_t wp = 0; wp < n; ++wp) s[w * n + wp] = q(v, vp, w, wp) > t;
            out.push_back(std::move(s));
        }
    return out;
}

/// The same family restricted to graph(phi), element w standing for (w, phi(w)).
inline std::vector<std::vector<bool>> restricted_family(const QapInstance& q, const Rational& t, const Perm& phi) {
    const std::size_t n = q.order();
    std::vector<std::vector<bool>> out;
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t vp = 0; vp < n; ++vp) {
            std::vector<bool> s(n, false);
            for (std::size_t w = 0; w < n; ++w) s[w] = q(v, vp, w, phi[w]) > t;
            out.push_back(std::move(s));
        }
    return out;
}

/// 1-WL with individualised vertices, by repeated (colour, sorted neighbour
/// colours) relabelling through a std::map until the class count settles.
inline std::vector<int> colour_classes(const Graph& g, const std::vector<Vertex>& individualised) {
    const std::size_t n = g.order();
    std::vector<int> colour(n);
    {
        std::map<std::pair<Colour, int>, int> ids;
        for (Vertex v = 0; v < n; ++v) {
            auto pos = std::find(individualised.begin(), individualised.end(), v);
            const int mark = pos == individualised.end() ? -1 : static_cast<int>(pos - individualised.begin());
            ids.emplace(std::make_pair(g.colour(v), mark), 0);
        }
        int next = 0;
        for (auto& [key, id] : ids) id = next++;
        for (Vertex v = 0; v < n; ++v) {
            auto pos = std::find(individualised.begin(), individualised.end(), v);
            const int mark = pos == individualised.end() ? -1 : static_cast<int>(pos - individualised.begin());
            colour[v] = ids.at({g.colour(v), mark});
        }
    }
    std::size_t classes = std::set<int>(colour.begin(), colour.end()).size();
    while (true) {
        std::map<std::pair<int, std::vector<int>>, int> ids;
        std::vector<std::pair<int, std::vector<int>>> sig(n);
        for (Vertex v = 0; v < n; ++v) {
            std::vector<int> nb;
            for (Vertex w = 0; w < n; ++w)
                if (g.has_edge(v, w)) nb.push_back(colour[w]);
            std::sort(nb.begin(), nb.end());
            sig[v] = {colour[v], nb};
            ids.emplace(sig[v], 0);
        }
        if (ids.size() == classes) return colour;
        int next = 0;
        for (auto& [key, id] : ids) id = next++;
        for (Vertex v = 0; v < n; ++v) colour[v] = ids.at(sig[v]);
        classes = ids.size();
    }
}

inline std::size_t mixed_size(const Graph& g, Vertex v, Vertex w) {
    std::size_t count = 0;
    for (Vertex x = 0; x < g.order(); ++x) count += g.has_edge(v, x) != g.has_edge(w, x);
    return count;
}

inline bool homogenising(const Graph& g, const std::vector<Vertex>& s, const Rational& eps) {
    const auto colour = colour_classes(g, s);
    for (Vertex v = 0; v < g.order(); ++v)
        for (Vertex w = v + 1; w < g.order(); ++w)
            if (colour[v] == colour[w] && Rational(static_cast<unsigned long>(mixed_size(g, v, w))) >
                                              eps * static_cast<unsigned long>(g.order()))
                return false;
    return true;
}

}  // namespace oracle
