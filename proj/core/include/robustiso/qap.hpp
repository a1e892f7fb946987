#pragma once

#include "robustiso/graph.hpp"
#include "robustiso/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace robustiso {

/// Quadratic assignment instance: minimise sum_{v,w} c(v, phi(v), w, phi(w))
/// over bijections phi of [n]. Unset coefficients are 0.
class QapInstance {
  public:
    enum class Storage { automatic, dense, sparse };

    /// Dense n^4 table below this order, sparse map from here on.
    static constexpr std::size_t kSparseFromOrder = 12;

    explicit QapInstance(std::size_t n = 0, Storage storage = Storage::automatic);

    std::size_t order() const noexcept { return n_; }
    bool is_dense() const noexcept { return !dense_.empty() || n_ == 0; }

    const Rational& operator()(std::size_t v, std::size_t vp, std::size_t w, std::size_t wp) const;
    void set(std::size_t v, std::size_t vp, std::size_t w, std::size_t wp, const Rational& value);

    /// B: the declared bound if one was given, raised to max |c| if needed.
    Rational bound() const;
    void declare_bound(const Rational& bound);
    bool all_nonnegative() const;

    /// Visits nonzero coefficients in lexicographic (v, v', w, w') order.
    template <typename F>
    void for_each_nonzero(F&& f) const {
        if (!dense_.empty()) {
            for (std::uint64_t i = 0; i < dense_.size(); ++i)
                if (dense_[i] != 0) visit(i, dense_[i], f);
        } else {
            for (const auto& [i, value] : sparse_) visit(i, value, f);
        }
    }

    std::size_t nonzero_count() const;
    /// Sorted distinct coefficient values, including 0 whenever some entry is 0.
    std::vector<Rational> distinct_values() const;

    friend bool operator==(const QapInstance& a, const QapInstance& b);

  private:
    std::uint64_t index(std::size_t v, std::size_t vp, std::size_t w, std::size_t wp) const;

    template <typename F>
    void visit(std::uint64_t i, const Rational& value, F& f) const {
        const std::uint64_t n = n_;
        const std::size_t wp = i % n, w = (i / n) % n, vp = (i / n / n) % n, v = i / n / n / n;
        f(v, vp, w, wp, value);
    }

    std::size_t n_;
    std::vector<Rational> dense_;
    std::map<std::uint64_t, Rational> sparse_;
    std::optional<Rational> declared_bound_;
};

/// sum over ordered pairs (v, w), diagonal included, of c(v, phi(v), w, phi(w)).
Rational qap_cost(const QapInstance& q, const Assignment& phi);

/// 0/1 instance with c = 1 iff exactly one of vw in E(G), v'w' in E(H) holds.
/// Declared bound 1. qap_cost = 2 * edit_cost for every bijection.
QapInstance ged_to_qap(const Graph& g, const Graph& h);

/// c(v,v',w,w') = |w_G(vw) - w_H(v'w')| with non-edges weighing 0.
QapInstance weighted_ged_to_qap(const Graph& g, const Graph& h);

struct QapSolution {
    Rational cost;
    Assignment assignment;
};

inline constexpr std::size_t kDefaultQapBruteForceCap = 9;

/// Exact optimum over all n! bijections; ties keep the lexicographically
/// smallest bijection.
QapSolution qap_bruteforce(const QapInstance& q, std::size_t cap = kDefaultQapBruteForceCap);

/// b_alpha(v,v') = (n/|alpha|) * sum_{(w,w') in alpha} c(v,v',w,w').
Rational b_alpha(const QapInstance& q, const PartialInjection& alpha, std::size_t v, std::size_t vp);

/// Number of pairs (w,w') in `pairs` with c(v,v',w,w') > t.
std::size_t threshold_count(const QapInstance& q, const PartialInjection& pairs, std::size_t v, std::size_t vp,
                            const Rational& t);

/// Left boundaries of the k = ceil(24B/eps) equal intervals of [-B, B].
struct ThresholdGrid {
    Rational bound;
    std::size_t k = 0;
    std::vector<Rational> boundaries;

    Rational step() const { return Rational(2 * bound) / static_cast<unsigned long>(k); }
};

ThresholdGrid threshold_grid(const Rational& bound, const Rational& eps);

/// b_alpha next to the threshold-averaged estimate and its +-(2B/k)n window.
struct MeanThresholdCheck {
    Rational b;
    Rational centre;
    Rational lower;
    Rational upper;
    bool contained = false;
};

MeanThresholdCheck mean_threshold_estimate(const QapInstance& q, const PartialInjection& alpha,
                                           const ThresholdGrid& grid, std::size_t v, std::size_t vp);

std::size_t distinct_value_count(const QapInstance& q);

QapInstance parse_qap(std::string_view text);
std::string serialize_qap(const QapInstance& q);
QapInstance read_qap_file(const std::filesystem::path& path);
void write_qap_file(const std::filesystem::path& path, const QapInstance& q);

}  // namespace robustiso
