#pragma once

#include "robustiso/graph.hpp"
#include "robustiso/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace robustiso {

using WlColour = std::uint32_t;

/// Stable colouring of k-tuples. Tuple (v_1, ..., v_k) sits at index
/// sum_i v_i n^(k-i). Colour ids are dense and canonical across all graphs
/// refined in the same run.
struct StableColouring {
    std::size_t k = 1;
    std::size_t n = 0;
    std::vector<WlColour> colour_of;
    std::vector<std::pair<WlColour, std::size_t>> histogram;  // sorted by colour
    std::size_t rounds = 0;

    std::size_t class_count() const noexcept { return histogram.size(); }
    WlColour operator[](std::size_t tuple) const { return colour_of[tuple]; }
};

inline constexpr std::uint64_t kDefaultWlBudget = 1'000'000;

/// 1-WL on (G, S): a vertex's initial colour combines its own colour with its
/// 1-based position in sorted S (0 outside S).
StableColouring colour_refinement(const Graph& g, const std::vector<Vertex>& individualised = {});

/// Joint 1-WL of two graphs with ordered individualisation sequences.
std::pair<StableColouring, StableColouring> colour_refinement_joint(const Graph& g, const Graph& h,
                                                                    const std::vector<Vertex>& sg = {},
                                                                    const std::vector<Vertex>& sh = {});

/// k-stable colouring; k = 1 is colour refinement. Throws BudgetExceeded when
/// n^k exceeds `budget`.
StableColouring k_wl_stable(const Graph& g, std::size_t k, std::uint64_t budget = kDefaultWlBudget);

std::pair<StableColouring, StableColouring> k_wl_joint(const Graph& g, const Graph& h, std::size_t k,
                                                       std::uint64_t budget = kDefaultWlBudget);

struct WlComparison {
    bool distinguishes = false;
    std::optional<WlColour> distinguishing_colour;  // smallest colour with unequal counts
    std::uint64_t histograms_digest = 0;            // FNV-1a over (colour, count G, count H)
    /// True when n^k exceeded the budget with k >= n and the answer came from
    /// exact isomorphism search, which k-WL then agrees with.
    bool decided_exactly = false;
};

WlComparison wl_compare(const Graph& g, const Graph& h, std::size_t k, std::uint64_t budget = kDefaultWlBudget);

bool wl_distinguishes(const Graph& g, const Graph& h, std::size_t k, std::uint64_t budget = kDefaultWlBudget);

/// Colour-preserving isomorphism g -> h by individualisation-refinement
/// backtracking; nullopt when none exists. Edge weights must agree too.
std::optional<Assignment> find_isomorphism(const Graph& g, const Graph& h);

/// gamma^S(v) = gamma^S(w) implies |M_G(v,w)| <= eps n.
bool is_homogenising(const Graph& g, const std::vector<Vertex>& s, const Rational& eps);

enum class HomogenisingMethod { net, coloured_greedy };

std::string to_string(HomogenisingMethod method);
HomogenisingMethod parse_homogenising_method(const std::string& text);

struct HomogenisingSet {
    std::vector<Vertex> vertices;  // sorted
    Rational eps;
    HomogenisingMethod method = HomogenisingMethod::net;
    /// Coloured-greedy only: colour class count of gamma^{S_i} for i = 0, 1, ...
    std::vector<std::size_t> class_counts;
};

/// Greedy eps-net of the mixed system, verified to be eps-homogenising.
HomogenisingSet homogenising_set_net(const Graph& g, const Rational& eps);

/// Adds w for the lexicographically smallest violating pair (v, w), v < w,
/// until none is left. Uncoloured graphs count as one class of size n.
HomogenisingSet homogenising_set_coloured(const Graph& g, const Rational& eps);

enum class GiAnswer { isomorphic, far };

struct RobustGiResult {
    GiAnswer answer = GiAnswer::isomorphic;
    Rational eps;
    HomogenisingMethod strategy = HomogenisingMethod::net;
    std::vector<Vertex> s;
    std::size_t k = 1;
    WlComparison comparison;
};

/// S is an (eps/3)-homogenising set of g, k = |S| + 1, Far iff k-WL tells g
/// and h apart.
RobustGiResult robust_gi(const Graph& g, const Graph& h, const Rational& eps, HomogenisingMethod strategy,
                         std::uint64_t budget = kDefaultWlBudget);

/// {answer, eps, strategy, S, k, distinguishing_colour?, histograms_digest, decided_exactly}
/// with sorted keys.
std::string certificate_json(const RobustGiResult& result);

}  // namespace robustiso
