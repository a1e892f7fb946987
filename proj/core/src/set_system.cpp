#include "robustiso/set_system.hpp"

#include "robustiso/errors.hpp"
#include "robustiso/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace robustiso {

SetSystem::SetSystem(std::size_t ground_size, std::vector<VertexSet> sets) : ground_size_(ground_size) {
    for (const auto& s : sets)
        if (s.size() != ground_size) throw InvalidArgument("set system member is not over the ground set");
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    sets_ = std::move(sets);
}

SetSystem neighbourhood_system(const Graph& g) {
    std::vector<VertexSet> sets;
    sets.reserve(g.order());
    for (Vertex v = 0; v < g.order(); ++v) sets.push_back(g.neighbourhood(v));
    return SetSystem(g.order(), std::move(sets));
}

SetSystem mixed_system(const Graph& g) {
    std::vector<VertexSet> sets;
    for (Vertex v = 0; v < g.order(); ++v)
        for (Vertex w = v; w < g.order(); ++w) sets.push_back(mixed_neighbourhood(g, v, w));
    return SetSystem(g.order(), std::move(sets));
}

SetSystem qap_threshold_system(const QapInstance& q, const Rational& t, const std::optional<Assignment>& phi) {
    const std::size_t n = q.order();
    if (phi && phi->size() != n) throw InvalidArgument("bijection size does not match QAP order");
    const std::size_t ground = phi ? n : n * n;
    std::vector<VertexSet> sets;
    sets.reserve(n * n);
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t vp = 0; vp < n; ++vp) {
            VertexSet s(ground);
            if (phi) {
                for (std::size_t w = 0; w < n; ++w)
                    if (q(v, vp, w, (*phi)[w]) > t) s.set(w);
            } else if (t < 0) {
                for (std::size_t w = 0; w < n; ++w)
                    for (std::size_t wp = 0; wp < n; ++wp)
                        if (q(v, vp, w, wp) > t) s.set(w * n + wp);
            } else {
                // only nonzero coefficients can exceed a non-negative threshold
                for (std::size_t w = 0; w < n; ++w)
                    for (std::size_t wp = 0; wp < n; ++wp) {
                        const Rational& c = q(v, vp, w, wp);
                        if (c != 0 && c > t) s.set(w * n + wp);
                    }
            }
            sets.push_back(std::move(s));
        }
    return SetSystem(ground, std::move(sets));
}

std::vector<Rational> candidate_thresholds(std::vector<Rational> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    Rational sentinel = values.empty() ? Rational(-1) : Rational(values.front() - 1);
    values.insert(values.begin(), sentinel);
    return values;
}

// ------------------------------------------------------------------ shattering

namespace {

std::uint64_t trace_mask(const VertexSet& set, const Subset& x) {
    std::uint64_t mask = 0;
    for (std::size_t j = 0; j < x.size(); ++j)
        if (set[x[j]]) mask |= std::uint64_t{1} << j;
    return mask;
}

std::size_t distinct_traces(const SetSystem& s, const Subset& x) {
    std::vector<std::uint64_t> masks;
    masks.reserve(s.size());
    for (const auto& set : s.sets()) masks.push_back(trace_mask(set, x));
    std::sort(masks.begin(), masks.end());
    return static_cast<std::size_t>(std::unique(masks.begin(), masks.end()) - masks.begin());
}

bool shattered_unchecked(const SetSystem& s, const Subset& x) {
    if (x.size() >= 63) return false;
    const std::uint64_t needed = std::uint64_t{1} << x.size();
    if (s.size() < needed) return false;
    std::vector<bool> seen(needed, false);
    std::uint64_t found = 0;
    for (const auto& set : s.sets()) {
        auto m = trace_mask(set, x);
        if (!seen[m]) {
            seen[m] = true;
            if (++found == needed) return true;
        }
    }
    return false;
}

/// Level-wise search: every subset of a shattered set is shattered, so the
/// shattered sets of size k+1 extend those of size k by a larger element.
/// Returns an arbitrary maximum one, or nullopt for the empty family.
std::optional<Subset> search_shattered(const SetSystem& s, std::size_t cap) {
    if (s.empty()) return std::nullopt;
    std::vector<Subset> level{Subset{}};
    Subset best;
    std::vector<Element> singles;
    for (Element x = 0; x < s.ground_size(); ++x)
        if (shattered_unchecked(s, Subset{x})) singles.push_back(x);
    for (std::size_t size = 1;; ++size) {
        if (size > cap) throw BudgetExceeded("shattered set of size " + std::to_string(cap) + " reached the search cap");
        std::vector<Subset> next;
        for (const auto& x : level) {
            auto start = x.empty() ? singles.begin() : std::upper_bound(singles.begin(), singles.end(), x.back());
            for (auto it = start; it != singles.end(); ++it) {
                Subset y = x;
                y.push_back(*it);
                if (shattered_unchecked(s, y)) next.push_back(std::move(y));
            }
        }
        if (next.empty()) return best;
        best = next.front();
        level = std::move(next);
    }
}

}  // namespace

bool is_shattered(const SetSystem& s, const Subset& x) {
    for (auto e : x)
        if (e >= s.ground_size()) throw InvalidArgument("subset element out of range");
    Subset sorted = x;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw InvalidArgument("subset repeats an element");
    if (x.empty()) return !s.empty();
    return shattered_unchecked(s, sorted);
}

int vc_dimension_exact(const SetSystem& s, std::size_t cap) {
    auto best = search_shattered(s, cap);
    return best ? static_cast<int>(best->size()) : -1;
}

Subset largest_shattered_set(const SetSystem& s, std::size_t cap) { return search_shattered(s, cap).value_or(Subset{}); }

int weighted_graph_vc(const Graph& g) {
    std::vector<Rational> weights;
    for (auto [u, v] : g.edges()) weights.push_back(g.weight(u, v));
    int best = -1;
    for (const auto& t : candidate_thresholds(std::move(weights)))
        best = std::max(best, vc_dimension_exact(neighbourhood_system(threshold_graph(g, t))));
    return best;
}

int qap_vc(const QapInstance& q) {
    int best = -1;
    for (const auto& t : candidate_thresholds(q.distinct_values()))
        best = std::max(best, vc_dimension_exact(qap_threshold_system(q, t)));
    return best;
}

bool weak_vc_test(const QapInstance& q, int d, std::uint64_t budget) {
    if (d < 0) throw InvalidArgument("weak VC test needs d >= 0");
    const std::size_t n = q.order();
    const std::size_t size = static_cast<std::size_t>(d) + 1;
    if (size > n) return true;
    if (size > 20) throw BudgetExceeded("weak VC test supports d < 20");
    const auto thresholds = candidate_thresholds(q.distinct_values());

    long double alphas = 1;
    for (std::size_t i = 0; i < size; ++i) alphas *= static_cast<long double>(n - i) * (n - i) / (i + 1);
    const long double work = alphas * thresholds.size() * n * n * size;
    if (work > static_cast<long double>(budget))
        throw BudgetExceeded("weak VC test needs ~" + std::to_string(static_cast<double>(work)) +
                             " coefficient checks, budget " + std::to_string(budget));

    const std::uint64_t needed = std::uint64_t{1} << size;
    std::vector<char> seen(needed);
    std::vector<std::size_t> sources(size), targets(n);
    for (const auto& t : thresholds) {
        // sources: increasing combinations; targets: injective tuples
        std::iota(sources.begin(), sources.end(), std::size_t{0});
        while (true) {
            std::iota(targets.begin(), targets.end(), std::size_t{0});
            do {
                std::fill(seen.begin(), seen.end(), 0);
                std::uint64_t found = 0;
                for (std::size_t v = 0; v < n && found < needed; ++v)
                    for (std::size_t vp = 0; vp < n && found < needed; ++vp) {
                        std::uint64_t mask = 0;
                        for (std::size_t j = 0; j < size; ++j)
                            if (q(v, vp, sources[j], targets[j]) > t) mask |= std::uint64_t{1} << j;
                        if (!seen[mask]) {
                            seen[mask] = 1;
                            ++found;
                        }
                    }
                if (found == needed) return false;
                // advance to the next injective prefix of length `size`
                std::reverse(targets.begin() + static_cast<std::ptrdiff_t>(size), targets.end());
            } while (std::next_permutation(targets.begin(), targets.end()));
            // next combination of sources
            std::size_t i = size;
            while (i > 0 && sources[i - 1] == n - size + i - 1) --i;
            if (i == 0) break;
            ++sources[i - 1];
            for (std::size_t j = i; j < size; ++j) sources[j] = sources[j - 1] + 1;
        }
    }
    return true;
}

// ------------------------------------------------------------------ nets

bool is_epsilon_net(const SetSystem& s, const Subset& x, const Rational& eps) {
    const Rational limit = eps * static_cast<unsigned long>(s.ground_size());
    for (const auto& set : s.sets()) {
        if (Rational(static_cast<unsigned long>(set.count())) <= limit) continue;
        if (std::none_of(x.begin(), x.end(), [&](Element e) { return e < set.size() && set[e]; })) return false;
    }
    return true;
}

Subset epsilon_net_greedy(const SetSystem& s, const Rational& eps) {
    if (eps <= 0 || eps > 1) throw InvalidArgument("epsilon must lie in (0, 1]");
    const Rational limit = eps * static_cast<unsigned long>(s.ground_size());
    std::vector<const VertexSet*> open;
    for (const auto& set : s.sets())
        if (Rational(static_cast<unsigned long>(set.count())) > limit) open.push_back(&set);
    const bool any_large = !open.empty();

    Subset net;
    std::vector<std::size_t> hits(s.ground_size());
    while (!open.empty()) {
        std::fill(hits.begin(), hits.end(), 0);
        for (const auto* set : open)
            for (auto e = set->find_first(); e != VertexSet::npos; e = set->find_next(e)) ++hits[e];
        const auto pick = static_cast<Element>(std::max_element(hits.begin(), hits.end()) - hits.begin());
        net.push_back(pick);
        std::erase_if(open, [pick](const VertexSet* set) { return (*set)[pick]; });
    }
    std::sort(net.begin(), net.end());

    // ln|H|/eps is 0 for a single large member, which still needs one element
    const double bound = std::ceil(std::log(static_cast<double>(std::max<std::size_t>(s.size(), 1))) / to_double(eps) - 1e-9);
    const std::size_t allowed = any_large ? std::max<std::size_t>(1, static_cast<std::size_t>(bound)) : 0;
    if (net.size() > allowed)
        throw InternalError("greedy net of size " + std::to_string(net.size()) + " exceeds ln|H|/eps = " +
                            std::to_string(allowed));
    return net;
}

bool is_epsilon_approximation(const SetSystem& s, const Subset& sample, const Rational& eps) {
    const unsigned long n = s.ground_size();
    const unsigned long m = sample.size();
    if (m == 0) return std::all_of(s.sets().begin(), s.sets().end(), [&](const VertexSet& set) {
        return Rational(static_cast<unsigned long>(set.count())) <= eps * n;
    });
    const Rational slack = eps * n * m;
    for (const auto& set : s.sets()) {
        unsigned long hits = 0;
        for (auto e : sample) hits += set[e];
        Rational diff = Rational(static_cast<unsigned long>(set.count()) * m) - Rational(n) * hits;
        if (abs(diff) > slack) return false;
    }
    return true;
}

std::size_t approximation_sample_size(const Rational& eps, const Rational& gamma, int d, double c_approx) {
    if (eps <= 0 || eps >= 1 || gamma <= 0 || gamma >= 1) throw InvalidArgument("eps and gamma must lie in (0, 1)");
    if (c_approx <= 0) throw InvalidArgument("c_approx must be positive");
    const double e = to_double(eps);
    const double raw = c_approx * (std::max(d, 0) + std::log(1.0 / to_double(gamma))) / (e * e);
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(raw - 1e-9)));
}

Subset draw_uniform_sample(std::size_t ground_size, std::size_t count, std::uint64_t seed) {
    if (ground_size == 0) return {};
    Rng rng(seed);
    Subset out(count);
    for (auto& e : out) e = rng.uniform_index(ground_size);
    std::sort(out.begin(), out.end());
    return out;
}

ApproximationSample epsilon_approximation_sample(const SetSystem& s, const Rational& eps, const Rational& gamma,
                                                 std::uint64_t seed, const ApproximationOptions& options) {
    ApproximationSample out;
    out.vc_bound = options.vc_bound ? *options.vc_bound : std::max(0, vc_dimension_exact(s));
    const std::size_t m = approximation_sample_size(eps, gamma, out.vc_bound, options.c_approx);
    for (std::size_t attempt = 0; attempt <= options.retries; ++attempt) {
        out.attempts = attempt + 1;
        out.sample = draw_uniform_sample(s.ground_size(), m, mix_seed(seed, attempt));
        if (is_epsilon_approximation(s, out.sample, eps)) return out;
    }
    throw VerificationFailed("no verified eps-approximation after " + std::to_string(options.retries + 1) +
                             " attempts; c_approx may be too small");
}

bool sauer_shelah_check(const SetSystem& s, std::size_t subset_size) {
    const int d = vc_dimension_exact(s);
    if (d < 1) throw InvalidArgument("Sauer-Shelah check needs VC dimension >= 1");
    if (subset_size < static_cast<std::size_t>(d) || subset_size > s.ground_size())
        throw InvalidArgument("Sauer-Shelah check needs d <= s <= ground size");
    long double combos = 1;
    for (std::size_t i = 0; i < subset_size; ++i)
        combos = combos * static_cast<long double>(s.ground_size() - i) / static_cast<long double>(i + 1);
    if (combos > 1e7L) throw BudgetExceeded("too many subsets for the Sauer-Shelah check");

    const long double bound =
        std::pow(std::numbers::e_v<long double> * subset_size / d, static_cast<long double>(d)) * (1 + 1e-12L);
    Subset x(subset_size);
    std::iota(x.begin(), x.end(), Element{0});
    const std::size_t n = s.ground_size();
    while (true) {
        if (static_cast<long double>(distinct_traces(s, x)) > bound) return false;
        std::size_t i = subset_size;
        while (i > 0 && x[i - 1] == n - subset_size + i - 1) --i;
        if (i == 0) break;
        ++x[i - 1];
        for (std::size_t j = i; j < subset_size; ++j) x[j] = x[j - 1] + 1;
    }
    return true;
}

}  // namespace robustiso
