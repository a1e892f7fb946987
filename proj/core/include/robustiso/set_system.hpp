#pragma once

#include "robustiso/graph.hpp"
#include "robustiso/qap.hpp"
#include "robustiso/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace robustiso {

using Element = std::size_t;
using Subset = std::vector<Element>;

/// A deduplicated family of subsets of {0, ..., ground_size - 1}.
class SetSystem {
  public:
    SetSystem() = default;
    SetSystem(std::size_t ground_size, std::vector<VertexSet> sets);

    std::size_t ground_size() const noexcept { return ground_size_; }
    const std::vector<VertexSet>& sets() const noexcept { return sets_; }
    std::size_t size() const noexcept { return sets_.size(); }
    bool empty() const noexcept { return sets_.empty(); }

    /// Copy keeping only the members for which `keep` is true.
    template <typename Pred>
    SetSystem filtered(Pred keep) const {
        std::vector<VertexSet> kept;
        for (const auto& s : sets_)
            if (keep(s)) kept.push_back(s);
        return SetSystem(ground_size_, std::move(kept));
    }

  private:
    std::size_t ground_size_ = 0;
    std::vector<VertexSet> sets_;
};

/// {N(v) : v in V(G)}.
SetSystem neighbourhood_system(const Graph& g);

/// {N(v) xor N(w) : v, w in V(G)}; always contains the empty set when n > 0.
SetSystem mixed_system(const Graph& g);

/// Threshold system of a QAP. Without phi the ground set is [n]x[n] with
/// (w,w') encoded as w*n + w' and members {(w,w') : c(v,v',w,w') > t}.
/// With phi the ground set is graph(phi), element w standing for (w, phi(w)).
SetSystem qap_threshold_system(const QapInstance& q, const Rational& t,
                               const std::optional<Assignment>& phi = std::nullopt);

/// Thresholds at which a threshold system can change: every distinct value
/// plus one sentinel below the smallest.
std::vector<Rational> candidate_thresholds(std::vector<Rational> distinct_values);

bool is_shattered(const SetSystem& s, const Subset& x);

inline constexpr std::size_t kDefaultShatterCap = 20;

/// Largest shattered subset size; -1 for the empty family. Throws
/// BudgetExceeded if a shattered set of size `cap` exists.
int vc_dimension_exact(const SetSystem& s, std::size_t cap = kDefaultShatterCap);

/// One shattered set of maximum size (empty when none or only the empty set).
Subset largest_shattered_set(const SetSystem& s, std::size_t cap = kDefaultShatterCap);

/// Max VC dimension of the threshold-graph neighbourhood systems over all thresholds.
int weighted_graph_vc(const Graph& g);

/// Max VC dimension of the unrestricted QAP threshold systems over all candidate thresholds.
int qap_vc(const QapInstance& q);

inline constexpr std::uint64_t kDefaultWeakVcBudget = 2'000'000'000ULL;

/// True iff every restricted threshold system (any threshold, any bijection)
/// has VC dimension at most d. Decided by checking that no partial injection
/// of size d + 1 is shattered at any candidate threshold.
bool weak_vc_test(const QapInstance& q, int d, std::uint64_t budget = kDefaultWeakVcBudget);

/// True iff x hits every member with more than eps * ground_size elements.
bool is_epsilon_net(const SetSystem& s, const Subset& x, const Rational& eps);

/// Greedy max-coverage net: repeatedly takes the element hitting the most
/// still-unhit large members (smallest index on ties).
Subset epsilon_net_greedy(const SetSystem& s, const Rational& eps);

/// Exact check that |H| lies within eps*n of (n/|S|)|H cap S| for every member,
/// counting sample multiplicities.
bool is_epsilon_approximation(const SetSystem& s, const Subset& sample, const Rational& eps);

struct ApproximationOptions {
    std::optional<int> vc_bound;  // computed exactly when absent
    double c_approx = 1.0;
    std::size_t retries = 8;
};

struct ApproximationSample {
    Subset sample;  // multiset, sorted
    std::size_t attempts = 0;
    int vc_bound = 0;
};

/// ceil(c_approx * (d + ln(1/gamma)) / eps^2), at least 1.
std::size_t approximation_sample_size(const Rational& eps, const Rational& gamma, int d, double c_approx);

/// Uniform with-replacement sample that passed is_epsilon_approximation, drawn
/// from attempt seeds mix_seed(seed, i). Throws VerificationFailed when all
/// 1 + retries attempts fail.
ApproximationSample epsilon_approximation_sample(const SetSystem& s, const Rational& eps, const Rational& gamma,
                                                 std::uint64_t seed, const ApproximationOptions& options = {});

/// One raw draw without verification; the building block of the above.
Subset draw_uniform_sample(std::size_t ground_size, std::size_t count, std::uint64_t seed);

/// Every s-subset has at most (e s / d)^d distinct traces, d the VC dimension.
bool sauer_shelah_check(const SetSystem& s, std::size_t subset_size);

}  // namespace robustiso
