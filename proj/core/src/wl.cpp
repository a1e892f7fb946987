#include "robustiso/wl.hpp"

#include "robustiso/errors.hpp"
#include "robustiso/set_system.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <span>

namespace robustiso {

namespace {

using Word = std::uint32_t;

/// Dense ids for equal-length rows of `flat`, ordered by row contents.
std::vector<WlColour> rename_rows(const std::vector<Word>& flat, std::size_t width, std::size_t& classes) {
    const std::size_t count = width == 0 ? 0 : flat.size() / width;
    std::vector<std::uint32_t> idx(count);
    std::iota(idx.begin(), idx.end(), 0u);
    auto row = [&](std::uint32_t i) { return flat.begin() + static_cast<std::ptrdiff_t>(i * width); };
    std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
        return std::lexicographical_compare(row(a), row(a) + static_cast<std::ptrdiff_t>(width), row(b),
                                            row(b) + static_cast<std::ptrdiff_t>(width));
    });
    std::vector<WlColour> ids(count);
    WlColour next = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (i > 0 && !std::equal(row(idx[i - 1]), row(idx[i - 1]) + static_cast<std::ptrdiff_t>(width), row(idx[i])))
            ++next;
        ids[idx[i]] = next;
    }
    classes = count == 0 ? 0 : next + 1;
    return ids;
}

/// Dense ids for variable-length signatures, ordered by contents.
std::vector<WlColour> rename_vectors(const std::vector<std::vector<Word>>& sigs, std::size_t& classes) {
    std::vector<std::uint32_t> idx(sigs.size());
    std::iota(idx.begin(), idx.end(), 0u);
    std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) { return sigs[a] < sigs[b]; });
    std::vector<WlColour> ids(sigs.size());
    WlColour next = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i > 0 && sigs[idx[i - 1]] != sigs[idx[i]]) ++next;
        ids[idx[i]] = next;
    }
    classes = sigs.empty() ? 0 : next + 1;
    return ids;
}

StableColouring package(std::size_t k, std::size_t n, std::vector<WlColour> colours, std::size_t rounds) {
    StableColouring out;
    out.k = k;
    out.n = n;
    out.rounds = rounds;
    std::vector<WlColour> sorted = colours;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        out.histogram.emplace_back(sorted[i], j - i);
        i = j;
    }
    out.colour_of = std::move(colours);
    return out;
}

std::vector<StableColouring> refine_vertices(const std::vector<const Graph*>& graphs,
                                             const std::vector<std::vector<Vertex>>& sequences) {
    std::vector<std::size_t> offset{0};
    for (const Graph* g : graphs) offset.push_back(offset.back() + g->order());
    const std::size_t total = offset.back();

    std::vector<Word> initial;
    initial.reserve(2 * total);
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
        const Graph& g = *graphs[gi];
        std::vector<Word> position(g.order(), 0);
        for (std::size_t i = 0; i < sequences[gi].size(); ++i) {
            const Vertex v = sequences[gi][i];
            if (v >= g.order()) throw InvalidArgument("individualised vertex out of range");
            if (position[v] != 0) throw InvalidArgument("vertex individualised twice");
            position[v] = static_cast<Word>(i + 1);
        }
        for (Vertex v = 0; v < g.order(); ++v) {
            initial.push_back(g.colour(v));
            initial.push_back(position[v]);
        }
    }
    std::size_t classes = 0;
    std::vector<WlColour> colour = rename_rows(initial, 2, classes);
    std::size_t rounds = 0;

    std::vector<std::vector<Word>> sigs(total);
    while (true) {
        for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
            const Graph& g = *graphs[gi];
            for (Vertex v = 0; v < g.order(); ++v) {
                auto& sig = sigs[offset[gi] + v];
                sig.clear();
                const VertexSet& nb = g.neighbourhood(v);
                for (auto w = nb.find_first(); w != VertexSet::npos; w = nb.find_next(w))
                    sig.push_back(colour[offset[gi] + w]);
                std::sort(sig.begin(), sig.end());
                sig.insert(sig.begin(), colour[offset[gi] + v]);
            }
        }
        std::size_t next_classes = 0;
        std::vector<WlColour> next = rename_vectors(sigs, next_classes);
        if (next_classes == classes) break;
        colour = std::move(next);
        classes = next_classes;
        ++rounds;
    }

    std::vector<StableColouring> out;
    for (std::size_t gi = 0; gi < graphs.size(); ++gi)
        out.push_back(package(1, graphs[gi]->order(),
                              std::vector<WlColour>(colour.begin() + static_cast<std::ptrdiff_t>(offset[gi]),
                                                    colour.begin() + static_cast<std::ptrdiff_t>(offset[gi + 1])),
                              rounds));
    return out;
}

std::uint64_t tuple_count(std::size_t n, std::size_t k, std::uint64_t budget) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (n != 0 && count > budget / n) return budget + 1;
        count *= n;
    }
    return count;
}

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
        h ^= (word >> (8 * i)) & 0xff;
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;

/// Refinement of k-tuples for k >= 2.
class TupleRefiner {
  public:
    TupleRefiner(const std::vector<const Graph*>& graphs, std::size_t k) : graphs_(graphs), k_(k) {
        n_ = graphs.front()->order();
        per_graph_ = 1;
        for (std::size_t i = 0; i < k; ++i) per_graph_ *= n_;
        pw_.assign(k, 1);
        for (std::size_t i = k - 1; i-- > 0;) pw_[i] = pw_[i + 1] * n_;
        rows_.resize(n_ * k_);
        order_.resize(n_);
    }

    std::vector<StableColouring> run() {
        const std::size_t total = per_graph_ * graphs_.size();
        std::size_t classes = initial_colouring();
        std::size_t rounds = 0;
        std::vector<std::uint64_t> hash(total);
        std::vector<std::uint32_t> idx(total);
        std::vector<Word> sig, rep_scratch;
        while (true) {
            for (std::size_t gi = 0; gi < graphs_.size(); ++gi)
                for (std::size_t t = 0; t < per_graph_; ++t) {
                    signature(gi, t, sig);
                    std::uint64_t h = kFnvOffset;
                    for (Word w : sig) h = fnv1a(h, w);
                    hash[gi * per_graph_ + t] = h;
                }
            std::iota(idx.begin(), idx.end(), 0u);
            std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
                return hash[a] != hash[b] ? hash[a] < hash[b] : a < b;
            });

            // Within a run of equal hashes the exact signatures decide; runs
            // of one element need no signature at all.
            std::vector<WlColour> next(total);
            WlColour next_id = 0;
            std::vector<std::vector<Word>> reps;
            std::vector<std::uint32_t> local;
            for (std::size_t a = 0; a < total;) {
                std::size_t b = a;
                while (b < total && hash[idx[b]] == hash[idx[a]]) ++b;
                if (b - a == 1) {
                    next[idx[a]] = next_id++;
                    a = b;
                    continue;
                }
                reps.clear();
                local.assign(b - a, 0);
                for (std::size_t i = a; i < b; ++i) {
                    signature(idx[i] / per_graph_, idx[i] % per_graph_, sig);
                    std::size_t r = 0;
                    while (r < reps.size() && reps[r] != sig) ++r;
                    if (r == reps.size()) reps.push_back(sig);
                    local[i - a] = static_cast<std::uint32_t>(r);
                }
                std::vector<std::uint32_t> rank(reps.size());
                std::iota(rank.begin(), rank.end(), 0u);
                std::sort(rank.begin(), rank.end(), [&](std::uint32_t x, std::uint32_t y) { return reps[x] < reps[y]; });
                std::vector<WlColour> id_of(reps.size());
                for (std::size_t r = 0; r < rank.size(); ++r) id_of[rank[r]] = next_id + static_cast<WlColour>(r);
                for (std::size_t i = a; i < b; ++i) next[idx[i]] = id_of[local[i - a]];
                next_id += static_cast<WlColour>(reps.size());
                a = b;
            }
            if (next_id == classes) break;
            colour_ = std::move(next);
            classes = next_id;
            ++rounds;
        }
        std::vector<StableColouring> out;
        for (std::size_t gi = 0; gi < graphs_.size(); ++gi)
            out.push_back(package(k_, n_,
                                  std::vector<WlColour>(colour_.begin() + static_cast<std::ptrdiff_t>(gi * per_graph_),
                                                        colour_.begin() +
                                                            static_cast<std::ptrdiff_t>((gi + 1) * per_graph_)),
                                  rounds));
        return out;
    }

  private:
    void decode(std::size_t t, std::vector<std::size_t>& digits) const {
        digits.resize(k_);
        for (std::size_t i = 0; i < k_; ++i) digits[i] = (t / pw_[i]) % n_;
    }

    /// Atomic type: vertex colours, then equality and adjacency bits per pair.
    std::size_t initial_colouring() {
        const std::size_t width = k_ + 2;
        std::vector<Word> flat;
        flat.reserve(per_graph_ * graphs_.size() * width);
        std::vector<std::size_t> d;
        for (const Graph* g : graphs_)
            for (std::size_t t = 0; t < per_graph_; ++t) {
                decode(t, d);
                for (std::size_t i = 0; i < k_; ++i) flat.push_back(g->colour(static_cast<Vertex>(d[i])));
                std::uint64_t bits = 0;
                for (std::size_t i = 0, bit = 0; i < k_; ++i)
                    for (std::size_t j = i + 1; j < k_; ++j, bit += 2) {
                        if (d[i] == d[j]) bits |= std::uint64_t{1} << bit;
                        else if (g->has_edge(static_cast<Vertex>(d[i]), static_cast<Vertex>(d[j])))
                            bits |= std::uint64_t{2} << bit;
                    }
                flat.push_back(static_cast<Word>(bits >> 32));
                flat.push_back(static_cast<Word>(bits));
            }
        std::size_t classes = 0;
        colour_ = rename_rows(flat, width, classes);
        return classes;
    }

    /// [colour(t), rows sorted] where row w = (colour(t[w/1]), ..., colour(t[w/k])).
    void signature(std::size_t gi, std::size_t t, std::vector<Word>& out) {
        const WlColour* col = colour_.data() + gi * per_graph_;
        for (std::size_t i = 0; i < k_; ++i) {
            const std::size_t base = t - ((t / pw_[i]) % n_) * pw_[i];
            for (std::size_t w = 0; w < n_; ++w) rows_[w * k_ + i] = col[base + w * pw_[i]];
        }
        std::iota(order_.begin(), order_.end(), 0u);
        std::sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
            return std::lexicographical_compare(rows_.begin() + a * k_, rows_.begin() + (a + 1) * k_,
                                                rows_.begin() + b * k_, rows_.begin() + (b + 1) * k_);
        });
        out.clear();
        out.push_back(col[t]);
        for (std::uint32_t w : order_) out.insert(out.end(), rows_.begin() + w * k_, rows_.begin() + (w + 1) * k_);
    }

    std::vector<const Graph*> graphs_;
    std::size_t k_;
    std::size_t n_ = 0;
    std::size_t per_graph_ = 0;
    std::vector<std::size_t> pw_;
    std::vector<WlColour> colour_;
    std::vector<Word> rows_;
    std::vector<std::uint32_t> order_;
};

std::vector<StableColouring> refine_tuples(const std::vector<const Graph*>& graphs, std::size_t k,
                                           std::uint64_t budget) {
    if (k < 1) throw InvalidArgument("k must be at least 1");
    const std::size_t n = graphs.front()->order();
    for (const Graph* g : graphs)
        if (g->order() != n) throw InvalidArgument("graphs have different orders");
    if (tuple_count(n, k, budget) > budget)
        throw BudgetExceeded(std::to_string(k) + "-WL on " + std::to_string(n) + " vertices exceeds the budget of " +
                             std::to_string(budget) + " tuples");
    if (k == 1) return refine_vertices(graphs, std::vector<std::vector<Vertex>>(graphs.size()));
    if (n == 0) {
        std::vector<StableColouring> out;
        for (std::size_t i = 0; i < graphs.size(); ++i) out.push_back(package(k, 0, {}, 0));
        return out;
    }
    return TupleRefiner(graphs, k).run();
}

WlComparison compare_histograms(const StableColouring& a, const StableColouring& b) {
    WlComparison out;
    std::uint64_t h = kFnvOffset;
    std::size_t i = 0, j = 0;
    while (i < a.histogram.size() || j < b.histogram.size()) {
        WlColour c;
        std::size_t ca = 0, cb = 0;
        if (j == b.histogram.size() || (i < a.histogram.size() && a.histogram[i].first < b.histogram[j].first)) {
            c = a.histogram[i].first;
            ca = a.histogram[i++].second;
        } else if (i == a.histogram.size() || b.histogram[j].first < a.histogram[i].first) {
            c = b.histogram[j].first;
            cb = b.histogram[j++].second;
        } else {
            c = a.histogram[i].first;
            ca = a.histogram[i++].second;
            cb = b.histogram[j++].second;
        }
        if (ca != cb && !out.distinguishing_colour) out.distinguishing_colour = c;
        h = fnv1a(fnv1a(fnv1a(h, c), ca), cb);
    }
    out.distinguishes = out.distinguishing_colour.has_value();
    out.histograms_digest = h;
    return out;
}

bool same_histogram(const StableColouring& a, const StableColouring& b) { return a.histogram == b.histogram; }

bool is_isomorphism(const Graph& g, const Graph& h, const std::vector<Vertex>& map) {
    const std::size_t n = g.order();
    for (Vertex v = 0; v < n; ++v)
        if (g.colour(v) != h.colour(map[v])) return false;
    const bool weighted = g.is_weighted() || h.is_weighted();
    for (Vertex v = 0; v < n; ++v)
        for (Vertex w = v + 1; w < n; ++w) {
            if (g.has_edge(v, w) != h.has_edge(map[v], map[w])) return false;
            if (weighted && g.weight(v, w) != h.weight(map[v], map[w])) return false;
        }
    return true;
}

bool ir_search(const Graph& g, const Graph& h, std::vector<Vertex>& sg, std::vector<Vertex>& sh,
               std::optional<Assignment>& found) {
    auto [cg, ch] = colour_refinement_joint(g, h, sg, sh);
    if (!same_histogram(cg, ch)) return false;
    const std::size_t n = g.order();
    if (cg.class_count() == n) {
        std::vector<Vertex> by_colour(n);
        for (Vertex w = 0; w < n; ++w) by_colour[ch[w]] = w;
        std::vector<Vertex> map(n);
        for (Vertex v = 0; v < n; ++v) map[v] = by_colour[cg[v]];
        if (!is_isomorphism(g, h, map)) return false;
        found = Assignment(std::move(map));
        return true;
    }
    // smallest nontrivial class, ties to the smallest colour
    std::optional<std::pair<std::size_t, WlColour>> target;
    for (const auto& [c, count] : cg.histogram)
        if (count > 1 && (!target || count < target->first)) target = {count, c};
    Vertex v = 0;
    while (cg[v] != target->second) ++v;
    sg.push_back(v);
    for (Vertex w = 0; w < n; ++w) {
        if (ch[w] != target->second) continue;
        sh.push_back(w);
        const bool ok = ir_search(g, h, sg, sh, found);
        sh.pop_back();
        if (ok) {
            sg.pop_back();
            return true;
        }
    }
    sg.pop_back();
    return false;
}

}  // namespace

StableColouring colour_refinement(const Graph& g, const std::vector<Vertex>& individualised) {
    std::vector<Vertex> s = individualised;
    std::sort(s.begin(), s.end());
    return std::move(refine_vertices({&g}, {s}).front());
}

std::pair<StableColouring, StableColouring> colour_refinement_joint(const Graph& g, const Graph& h,
                                                                    const std::vector<Vertex>& sg,
                                                                    const std::vector<Vertex>& sh) {
    auto out = refine_vertices({&g, &h}, {sg, sh});
    return {std::move(out[0]), std::move(out[1])};
}

StableColouring k_wl_stable(const Graph& g, std::size_t k, std::uint64_t budget) {
    return std::move(refine_tuples({&g}, k, budget).front());
}

std::pair<StableColouring, StableColouring> k_wl_joint(const Graph& g, const Graph& h, std::size_t k,
                                                       std::uint64_t budget) {
    auto out = refine_tuples({&g, &h}, k, budget);
    return {std::move(out[0]), std::move(out[1])};
}

WlComparison wl_compare(const Graph& g, const Graph& h, std::size_t k, std::uint64_t budget) {
    if (g.order() != h.order()) throw InvalidArgument("graphs have different orders");
    if (k < 1) throw InvalidArgument("k must be at least 1");
    const std::size_t n = g.order();
    if (k >= n && n > 0 && tuple_count(n, k, budget) > budget) {
        WlComparison out;
        out.decided_exactly = true;
        out.distinguishes = !find_isomorphism(g, h).has_value();
        return out;
    }
    auto [cg, ch] = k_wl_joint(g, h, k, budget);
    return compare_histograms(cg, ch);
}

bool wl_distinguishes(const Graph& g, const Graph& h, std::size_t k, std::uint64_t budget) {
    return wl_compare(g, h, k, budget).distinguishes;
}

std::optional<Assignment> find_isomorphism(const Graph& g, const Graph& h) {
    if (g.order() != h.order() || g.edge_count() != h.edge_count()) return std::nullopt;
    if (g.order() == 0) return Assignment::identity(0);
    std::vector<Vertex> sg, sh;
    std::optional<Assignment> found;
    ir_search(g, h, sg, sh, found);
    return found;
}

bool is_homogenising(const Graph& g, const std::vector<Vertex>& s, const Rational& eps) {
    const std::size_t n = g.order();
    const StableColouring gamma = colour_refinement(g, s);
    const Rational limit = eps * static_cast<unsigned long>(n);
    for (Vertex v = 0; v < n; ++v)
        for (Vertex w = v + 1; w < n; ++w)
            if (gamma[v] == gamma[w] &&
                Rational(static_cast<unsigned long>(mixed_neighbourhood(g, v, w).count())) > limit)
                return false;
    return true;
}

std::string to_string(HomogenisingMethod method) {
    return method == HomogenisingMethod::net ? "net" : "coloured-greedy";
}

HomogenisingMethod parse_homogenising_method(const std::string& text) {
    if (text == "net") return HomogenisingMethod::net;
    if (text == "coloured-greedy" || text == "colored-greedy") return HomogenisingMethod::coloured_greedy;
    throw InvalidArgument("unknown strategy '" + text + "'");
}

HomogenisingSet homogenising_set_net(const Graph& g, const Rational& eps) {
    if (eps <= 0) throw InvalidArgument("eps must be positive");
    HomogenisingSet out;
    out.eps = eps;
    out.method = HomogenisingMethod::net;
    for (Element e : epsilon_net_greedy(mixed_system(g), eps > 1 ? Rational(1) : eps))
        out.vertices.push_back(static_cast<Vertex>(e));
    if (!is_homogenising(g, out.vertices, eps)) throw InternalError("net of the mixed system is not homogenising");
    return out;
}

HomogenisingSet homogenising_set_coloured(const Graph& g, const Rational& eps) {
    if (eps <= 0) throw InvalidArgument("eps must be positive");
    const std::size_t n = g.order();
    const Rational limit = eps * static_cast<unsigned long>(n);
    HomogenisingSet out;
    out.eps = eps;
    out.method = HomogenisingMethod::coloured_greedy;
    for (std::size_t iteration = 0;; ++iteration) {
        if (iteration > n) throw InternalError("greedy homogenising loop did not terminate");
        const StableColouring gamma = colour_refinement(g, out.vertices);
        out.class_counts.push_back(gamma.class_count());
        std::optional<Vertex> add;
        for (Vertex v = 0; v < n && !add; ++v)
            for (Vertex w = v + 1; w < n; ++w)
                if (gamma[v] == gamma[w] &&
                    Rational(static_cast<unsigned long>(mixed_neighbourhood(g, v, w).count())) > limit) {
                    add = w;
                    break;
                }
        if (!add) break;
        out.vertices.insert(std::lower_bound(out.vertices.begin(), out.vertices.end(), *add), *add);
    }
    return out;
}

RobustGiResult robust_gi(const Graph& g, const Graph& h, const Rational& eps, HomogenisingMethod strategy,
                         std::uint64_t budget) {
    if (g.order() != h.order()) throw InvalidArgument("graphs have different orders");
    if (eps <= 0) throw InvalidArgument("eps must be positive");
    RobustGiResult out;
    out.eps = eps;
    out.strategy = strategy;
    const Rational third = eps / 3;
    const HomogenisingSet s = strategy == HomogenisingMethod::net ? homogenising_set_net(g, third)
                                                                  : homogenising_set_coloured(g, third);
    out.s = s.vertices;
    out.k = s.vertices.size() + 1;
    try {
        out.comparison = wl_compare(g, h, out.k, budget);
    } catch (const BudgetExceeded& e) {
        throw BudgetExceeded(std::string(e.what()) + " (k = " + std::to_string(out.k) + ")");
    }
    out.answer = out.comparison.distinguishes ? GiAnswer::far : GiAnswer::isomorphic;
    return out;
}

std::string certificate_json(const RobustGiResult& result) {
    nlohmann::json j;
    j["answer"] = result.answer == GiAnswer::far ? "far" : "isomorphic";
    j["eps"] = to_string(result.eps);
    j["strategy"] = to_string(result.strategy);
    j["S"] = result.s;
    j["k"] = result.k;
    if (result.comparison.distinguishing_colour) j["distinguishing_colour"] = *result.comparison.distinguishing_colour;
    char digest[17];
    std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(result.comparison.histograms_digest));
    j["histograms_digest"] = digest;
    j["decided_exactly"] = result.comparison.decided_exactly;
    return j.dump();
}

}  // namespace robustiso
