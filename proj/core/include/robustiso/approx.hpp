#pragma once

#include "robustiso/graph.hpp"
#include "robustiso/lp.hpp"
#include "robustiso/qap.hpp"
#include "robustiso/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace robustiso {

/// ceil(c_m * B^2 * eps^-2 * (d + ln K)), at least 1 and at most `clamp` when given.
std::size_t m_bound(const Rational& bound, const Rational& eps, int d, std::size_t distinct_values,
                    std::optional<std::size_t> clamp = std::nullopt, double c_m = 1.0);

/// Variable (v, v') of the alpha LP lives at index v * n + v'.
inline std::size_t lp_variable(std::size_t n, std::size_t v, std::size_t vp) { return v * n + vp; }

/// minimise sum b_alpha(v,v') x(v,v') over the assignment polytope subject to
/// |a(v,v') . x - b_alpha(v,v')| <= eps n / 3 for every (v,v'), where a(v,v')
/// holds c(v,v',w,w') at position (w,w'). Rows: n source equalities, n target
/// equalities, then a >= row and a <= row per (v,v') in lexicographic order.
LinearProgram build_alpha_lp(const QapInstance& q, const PartialInjection& alpha, const Rational& eps);

struct FractionalSolution {
    std::size_t n = 0;
    std::vector<Rational> values;  // n * n, index lp_variable(n, v, v')
    Rational objective;

    const Rational& at(std::size_t v, std::size_t vp) const { return values[lp_variable(n, v, vp)]; }
};

/// nullopt when the program is infeasible.
std::optional<FractionalSolution> solve_alpha_lp(const LinearProgram& lp, std::size_t n,
                                                 const LpOptions& options = {});

inline constexpr std::size_t kDefaultRoundingRetries = 32;

/// Seeded repeated randomized rounding. Each retry visits the sources in a
/// shuffled order and draws a target among the unused ones with probability
/// proportional to its fractional mass; a drawn pair lighter than 1/(2n) is
/// dropped. Keeps the retry with the most pairs, then the smallest LP
/// objective, then the earliest.
PartialInjection round_apec(const FractionalSolution& frac, const LinearProgram& lp, std::uint64_t seed,
                            std::size_t retries = kDefaultRoundingRetries);

/// Unmatched sources in increasing order take the smallest unused target.
Assignment complete_matching(const PartialInjection& partial, std::size_t n);

enum class SearchMode { exhaustive, sampled };

std::string to_string(SearchMode mode);
SearchMode parse_search_mode(const std::string& text);

struct ApproxOptions {
    std::size_t m = 2;
    SearchMode mode = SearchMode::exhaustive;
    std::uint64_t seed = 0;
    std::size_t samples_per_size = 64;  // sampled mode only
    std::size_t rounding_retries = kDefaultRoundingRetries;
    LpOptions lp{.arithmetic = LpArithmetic::floating};
    std::size_t threads = 1;
    std::uint64_t alpha_budget = 10'000'000;
    bool keep_trace = false;
};

struct AlphaTrace {
    PartialInjection alpha;
    bool feasible = false;
    Rational zeta;  // LP optimum when feasible
    Rational cost;  // qap cost of the completed rounding when feasible
};

struct ApproxReport {
    Assignment best_assignment;
    Rational best_cost;
    PartialInjection best_alpha;  // empty if no LP was feasible
    std::size_t alphas_tried = 0;
    std::size_t lps_infeasible = 0;
    bool stopped_early = false;
    std::vector<AlphaTrace> trace;
};

/// Number of partial injections of size exactly s on [n].
std::uint64_t partial_injection_count(std::size_t n, std::size_t s);

/// All partial injections of size s, by sorted sources then target tuple.
std::vector<PartialInjection> enumerate_partial_injections(std::size_t n, std::size_t s);

/// LP + rounding over alphas of size 1..m. If no LP is feasible the identity
/// is returned. Stops as soon as a zero-cost assignment is found on an
/// instance without negative coefficients.
ApproxReport approximate_qap(const QapInstance& q, const Rational& eps, const ApproxOptions& options);

struct GedApproximation {
    Assignment assignment;
    Rational cost;
    ApproxReport report;
};

/// approximate_qap on the (weighted) reduction with eps' = 2 eps. Coloured
/// inputs are rejected: the reduction does not see colours.
GedApproximation approximate_ged(const Graph& g, const Graph& h, const Rational& eps, const ApproxOptions& options);

/// For all v, v': |b_graph(phi)(v,v') - b_alpha(v,v')| <= eps n / 3.
bool row_estimates_hold(const QapInstance& q, const PartialInjection& alpha, const Assignment& phi,
                        const Rational& eps);

/// For all t in the grid of (B, eps) and all v, v': the count of w with
/// c(v,v',w,phi(w)) > t lies within (eps / 12B) n of (n/|alpha|) times the
/// same count over alpha. Requires alpha inside graph(phi).
bool threshold_sample_check(const QapInstance& q, const PartialInjection& alpha, const Assignment& phi,
                            const Rational& eps);

}  // namespace robustiso
