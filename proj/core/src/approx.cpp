#include "robustiso/approx.hpp"

#include "robustiso/errors.hpp"
#include "robustiso/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

namespace robustiso {

std::size_t m_bound(const Rational& bound, const Rational& eps, int d, std::size_t distinct_values,
                    std::optional<std::size_t> clamp, double c_m) {
    if (bound <= 0 || eps <= 0 || d < 0 || distinct_values < 1)
        throw InvalidArgument("m_bound needs B > 0, eps > 0, d >= 0 and K >= 1");
    if (!(c_m > 0) || !std::isfinite(c_m)) throw InvalidArgument("m_bound constant must be positive");
    const double b = to_double(bound), e = to_double(eps);
    const double raw = c_m * b * b / (e * e) * (d + std::log(static_cast<double>(distinct_values)));
    double m = std::ceil(raw - 1e-12);
    m = std::max(m, 1.0);
    if (clamp) m = std::min(m, static_cast<double>(std::max<std::size_t>(*clamp, 1)));
    return static_cast<std::size_t>(m);
}

LinearProgram build_alpha_lp(const QapInstance& q, const PartialInjection& alpha, const Rational& eps) {
    if (alpha.empty()) throw InvalidArgument("alpha must be nonempty");
    if (eps <= 0) throw InvalidArgument("eps must be positive");
    const std::size_t n = q.order();
    if (alpha.span() > n) throw InvalidArgument("alpha refers to vertices outside the instance");

    LinearProgram lp;
    lp.variable_count = n * n;
    lp.objective.assign(n * n, Rational(0));
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t vp = 0; vp < n; ++vp) lp.objective[lp_variable(n, v, vp)] = b_alpha(q, alpha, v, vp);

    for (std::size_t v = 0; v < n; ++v) {
        LinearConstraint row;
        for (std::size_t vp = 0; vp < n; ++vp) row.terms.emplace_back(lp_variable(n, v, vp), Rational(1));
        row.rhs = 1;
        lp.rows.push_back(std::move(row));
    }
    for (std::size_t vp = 0; vp < n; ++vp) {
        LinearConstraint row;
        for (std::size_t v = 0; v < n; ++v) row.terms.emplace_back(lp_variable(n, v, vp), Rational(1));
        row.rhs = 1;
        lp.rows.push_back(std::move(row));
    }

    const Rational slack = eps * static_cast<unsigned long>(n) / 3;
    std::vector<std::vector<std::pair<std::size_t, Rational>>> a(n * n);
    q.for_each_nonzero([&](std::size_t v, std::size_t vp, std::size_t w, std::size_t wp, const Rational& c) {
        a[lp_variable(n, v, vp)].emplace_back(lp_variable(n, w, wp), c);
    });
    for (std::size_t i = 0; i < n * n; ++i) {
        const Rational& b = lp.objective[i];
        LinearConstraint lower{a[i], LinearConstraint::Sense::greater_equal, b - slack};
        LinearConstraint upper{std::move(a[i]), LinearConstraint::Sense::less_equal, b + slack};
        lp.rows.push_back(std::move(lower));
        lp.rows.push_back(std::move(upper));
    }
    return lp;
}

std::optional<FractionalSolution> solve_alpha_lp(const LinearProgram& lp, std::size_t n, const LpOptions& options) {
    if (lp.variable_count != n * n) throw InvalidArgument("LP does not have n^2 variables");
    LpResult r = solve_lp(lp, options);
    if (r.status == LpStatus::infeasible) return std::nullopt;
    if (r.status == LpStatus::unbounded) throw InternalError("alpha LP over the assignment polytope is unbounded");
    return FractionalSolution{n, std::move(r.values), std::move(r.objective)};
}

PartialInjection round_apec(const FractionalSolution& frac, const LinearProgram& lp, std::uint64_t seed,
                            std::size_t retries) {
    const std::size_t n = frac.n;
    if (frac.values.size() != n * n || lp.objective.size() != n * n)
        throw InvalidArgument("fractional solution and LP disagree on the order");
    std::vector<double> mass(n * n);
    for (std::size_t i = 0; i < n * n; ++i) mass[i] = std::max(0.0, to_double(frac.values[i]));
    const double floor_mass = 1.0 / (2.0 * static_cast<double>(n));

    std::optional<std::vector<PartialInjection::Pair>> best;
    Rational best_objective;
    for (std::size_t r = 0; r < std::max<std::size_t>(retries, 1); ++r) {
        Rng rng(mix_seed(seed, r));
        std::vector<Vertex> order(n);
        std::iota(order.begin(), order.end(), Vertex{0});
        rng.shuffle(std::span<Vertex>(order));
        std::vector<bool> used(n, false);
        std::vector<PartialInjection::Pair> pairs;
        for (Vertex v : order) {
            double total = 0;
            for (std::size_t vp = 0; vp < n; ++vp)
                if (!used[vp]) total += mass[lp_variable(n, v, vp)];
            if (total <= 0) continue;
            const double x = rng.uniform01() * total;
            double acc = 0;
            std::optional<std::size_t> pick;
            for (std::size_t vp = 0; vp < n; ++vp) {
                const double m = used[vp] ? 0.0 : mass[lp_variable(n, v, vp)];
                if (m <= 0) continue;
                pick = vp;  // last positive target absorbs rounding error
                acc += m;
                if (x < acc) break;
            }
            if (mass[lp_variable(n, v, *pick)] < floor_mass) continue;
            used[*pick] = true;
            pairs.emplace_back(v, static_cast<Vertex>(*pick));
        }
        Rational objective = 0;
        for (const auto& [v, vp] : pairs) objective += lp.objective[lp_variable(n, v, vp)];
        if (!best || pairs.size() > best->size() || (pairs.size() == best->size() && objective < best_objective)) {
            best = std::move(pairs);
            best_objective = objective;
        }
    }
    return PartialInjection(std::move(*best));
}

Assignment complete_matching(const PartialInjection& partial, std::size_t n) {
    if (partial.span() > n) throw InvalidArgument("partial matching exceeds the order");
    constexpr Vertex kUnset = ~Vertex{0};
    std::vector<Vertex> image(n, kUnset);
    std::vector<bool> used(n, false);
    for (const auto& [v, vp] : partial) {
        image[v] = vp;
        used[vp] = true;
    }
    std::size_t next = 0;
    for (std::size_t v = 0; v < n; ++v) {
        if (image[v] != kUnset) continue;
        while (used[next]) ++next;
        image[v] = static_cast<Vertex>(next);
        used[next] = true;
    }
    return Assignment(std::move(image));
}

std::string to_string(SearchMode mode) { return mode == SearchMode::exhaustive ? "exhaustive" : "sampled"; }

SearchMode parse_search_mode(const std::string& text) {
    if (text == "exhaustive") return SearchMode::exhaustive;
    if (text == "sampled") return SearchMode::sampled;
    throw InvalidArgument("unknown search mode '" + text + "'");
}

std::uint64_t partial_injection_count(std::size_t n, std::size_t s) {
    if (s > n) return 0;
    // C(n, s) * n! / (n - s)!, saturating
    long double count = 1;
    for (std::size_t i = 0; i < s; ++i) count = count * (n - i) / (i + 1) * (n - i);
    return count >= 1.8e19L ? UINT64_MAX : static_cast<std::uint64_t>(std::llround(count));
}

std::vector<PartialInjection> enumerate_partial_injections(std::size_t n, std::size_t s) {
    std::vector<PartialInjection> out;
    if (s == 0 || s > n) return out;
    std::vector<std::size_t> sources(s);
    std::iota(sources.begin(), sources.end(), std::size_t{0});
    while (true) {
        // target tuples in lexicographic order: first s entries of successive permutations
        std::vector<std::size_t> targets(n);
        std::iota(targets.begin(), targets.end(), std::size_t{0});
        do {
            std::vector<PartialInjection::Pair> pairs(s);
            for (std::size_t i = 0; i < s; ++i)
                pairs[i] = {static_cast<Vertex>(sources[i]), static_cast<Vertex>(targets[i])};
            out.emplace_back(std::move(pairs));
            std::reverse(targets.begin() + static_cast<std::ptrdiff_t>(s), targets.end());
        } while (std::next_permutation(targets.begin(), targets.end()));

        std::size_t i = s;
        while (i > 0 && sources[i - 1] == n - s + i - 1) --i;
        if (i == 0) break;
        ++sources[i - 1];
        for (std::size_t j = i; j < s; ++j) sources[j] = sources[j - 1] + 1;
    }
    return out;
}

namespace {

struct AlphaOutcome {
    bool feasible = false;
    Rational zeta;
    Rational cost;
    std::optional<Assignment> assignment;
};

AlphaOutcome evaluate_alpha(const QapInstance& q, const PartialInjection& alpha, const Rational& eps,
                            std::uint64_t seed, const ApproxOptions& options) {
    const std::size_t n = q.order();
    AlphaOutcome out;
    LinearProgram lp = build_alpha_lp(q, alpha, eps);
    auto frac = solve_alpha_lp(lp, n, options.lp);
    if (!frac) return out;
    out.feasible = true;
    out.zeta = frac->objective;
    Assignment phi = complete_matching(round_apec(*frac, lp, seed, options.rounding_retries), n);
    out.cost = qap_cost(q, phi);
    out.assignment = std::move(phi);
    return out;
}

std::vector<PartialInjection> sample_partial_injections(std::size_t n, std::size_t s, std::size_t count,
                                                        std::uint64_t seed) {
    std::vector<PartialInjection> out;
    Rng rng(seed);
    std::vector<Vertex> sources(n), targets(n);
    for (std::size_t i = 0; i < count; ++i) {
        std::iota(sources.begin(), sources.end(), Vertex{0});
        std::iota(targets.begin(), targets.end(), Vertex{0});
        rng.shuffle(std::span<Vertex>(sources));
        rng.shuffle(std::span<Vertex>(targets));
        std::vector<PartialInjection::Pair> pairs;
        for (std::size_t j = 0; j < s; ++j) pairs.emplace_back(sources[j], targets[j]);
        out.emplace_back(std::move(pairs));
    }
    return out;
}

constexpr std::uint64_t kSampleStream = 0x5a4d'0000'0000ULL;

}  // namespace

ApproxReport approximate_qap(const QapInstance& q, const Rational& eps, const ApproxOptions& options) {
    if (options.m < 1) throw InvalidArgument("m must be at least 1");
    if (eps <= 0) throw InvalidArgument("eps must be positive");
    const std::size_t n = q.order();
    const std::size_t m = std::min(options.m, n);

    ApproxReport report;
    report.best_assignment = Assignment::identity(n);
    report.best_cost = qap_cost(q, report.best_assignment);
    if (n == 0) return report;

    std::uint64_t planned = 0;
    for (std::size_t s = 1; s <= m; ++s) {
        const std::uint64_t c =
            options.mode == SearchMode::exhaustive ? partial_injection_count(n, s) : options.samples_per_size;
        planned = c > UINT64_MAX - planned ? UINT64_MAX : planned + c;
    }
    if (planned > options.alpha_budget)
        throw BudgetExceeded("alpha loop needs " + std::to_string(planned) + " LPs, budget is " +
                             std::to_string(options.alpha_budget));

    const bool zero_is_optimal = q.all_nonnegative();
    bool found_feasible = false;
    std::uint64_t index = 0;
    const std::size_t threads = std::max<std::size_t>(options.threads, 1);

    for (std::size_t s = 1; s <= m; ++s) {
        std::vector<PartialInjection> alphas =
            options.mode == SearchMode::exhaustive
                ? enumerate_partial_injections(n, s)
                : sample_partial_injections(n, s, options.samples_per_size, mix_seed(options.seed, kSampleStream + s));

        const std::size_t block = threads == 1 ? 1 : threads * 4;
        for (std::size_t begin = 0; begin < alphas.size(); begin += block) {
            const std::size_t end = std::min(alphas.size(), begin + block);
            std::vector<AlphaOutcome> outcomes(end - begin);
            if (threads == 1) {
                outcomes[0] = evaluate_alpha(q, alphas[begin], eps, mix_seed(options.seed, index), options);
            } else {
                std::atomic<std::size_t> next{begin};
                std::vector<std::exception_ptr> errors(threads);
                std::vector<std::thread> pool;
                for (std::size_t t = 0; t < threads; ++t)
                    pool.emplace_back([&, t] {
                        try {
                            for (std::size_t i = next++; i < end; i = next++)
                                outcomes[i - begin] =
                                    evaluate_alpha(q, alphas[i], eps, mix_seed(options.seed, index + (i - begin)),
                                                   options);
                        } catch (...) {
                            errors[t] = std::current_exception();
                        }
                    });
                for (auto& th : pool) th.join();
                for (auto& e : errors)
                    if (e) std::rethrow_exception(e);
            }

            // sequential merge keeps the result independent of the thread count
            for (std::size_t i = begin; i < end; ++i, ++index) {
                AlphaOutcome& o = outcomes[i - begin];
                ++report.alphas_tried;
                if (!o.feasible) ++report.lps_infeasible;
                if (options.keep_trace) report.trace.push_back({alphas[i], o.feasible, o.zeta, o.cost});
                if (o.feasible && (!found_feasible || o.cost < report.best_cost)) {
                    found_feasible = true;
                    report.best_cost = o.cost;
                    report.best_assignment = std::move(*o.assignment);
                    report.best_alpha = alphas[i];
                }
                if (found_feasible && zero_is_optimal && report.best_cost == 0) {
                    report.stopped_early = i + 1 < alphas.size() || s < m;
                    return report;
                }
            }
        }
    }
    return report;
}

GedApproximation approximate_ged(const Graph& g, const Graph& h, const Rational& eps, const ApproxOptions& options) {
    if (g.order() != h.order()) throw InvalidArgument("graphs have different orders");
    if (g.is_coloured() || h.is_coloured())
        throw InvalidArgument("approximate_ged takes uncoloured graphs; the QAP reduction ignores colours");
    const bool weighted = g.is_weighted() || h.is_weighted();
    QapInstance q = weighted ? weighted_ged_to_qap(g, h) : ged_to_qap(g, h);
    ApproxReport report = approximate_qap(q, 2 * eps, options);
    Rational cost = edit_cost(g, h, report.best_assignment);
    if (2 * cost != report.best_cost) throw InternalError("QAP cost is not twice the edit cost");
    return {report.best_assignment, std::move(cost), std::move(report)};
}

bool row_estimates_hold(const QapInstance& q, const PartialInjection& alpha, const Assignment& phi,
                        const Rational& eps) {
    const std::size_t n = q.order();
    if (phi.size() != n) throw InvalidArgument("assignment order differs from the instance");
    const PartialInjection full = PartialInjection::graph_of(phi);
    const Rational slack = eps * static_cast<unsigned long>(n) / 3;
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t vp = 0; vp < n; ++vp)
            if (abs(b_alpha(q, full, v, vp) - b_alpha(q, alpha, v, vp)) > slack) return false;
    return true;
}

bool threshold_sample_check(const QapInstance& q, const PartialInjection& alpha, const Assignment& phi,
                            const Rational& eps) {
    const std::size_t n = q.order();
    if (alpha.empty()) throw InvalidArgument("alpha must be nonempty");
    if (!alpha.is_subset_of(phi)) throw InvalidArgument("alpha must lie inside graph(phi)");
    const Rational bound = q.bound();
    if (bound == 0) return true;
    const ThresholdGrid grid = threshold_grid(bound, eps);
    const PartialInjection full = PartialInjection::graph_of(phi);
    const Rational scale = Rational(static_cast<unsigned long>(n)) / static_cast<unsigned long>(alpha.size());
    const Rational slack = eps / (12 * bound) * static_cast<unsigned long>(n);
    for (const Rational& t : grid.boundaries)
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t vp = 0; vp < n; ++vp) {
                const Rational whole(static_cast<unsigned long>(threshold_count(q, full, v, vp, t)));
                const Rational part(static_cast<unsigned long>(threshold_count(q, alpha, v, vp, t)));
                if (abs(whole - scale * part) > slack) return false;
            }
    return true;
}

}  // namespace robustiso
