#include "robustiso/qap.hpp"

#include "robustiso/errors.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace robustiso {

namespace {

const Rational kZero = 0;

void require_order(const QapInstance& q, std::size_t size, const char* what) {
    if (q.order() != size)
        throw InvalidArgument(std::string(what) + " size " + std::to_string(size) + " does not match QAP order " +
                              std::to_string(q.order()));
}

}  // namespace

QapInstance::QapInstance(std::size_t n, Storage storage) : n_(n) {
    const bool dense = storage == Storage::dense || (storage == Storage::automatic && n < kSparseFromOrder);
    if (dense) dense_.assign(n * n * n * n, Rational(0));
}

std::uint64_t QapInstance::index(std::size_t v, std::size_t vp, std::size_t w, std::size_t wp) const {
    if (v >= n_ || vp >= n_ || w >= n_ || wp >= n_) throw InvalidArgument("QAP index out of range");
    const std::uint64_t n = n_;
    return ((v * n + vp) * n + w) * n + wp;
}

const Rational& QapInstance::operator()(std::size_t v, std::size_t vp, std::size_t w, std::size_t wp) const {
    const auto i = index(v, vp, w, wp);
    if (!dense_.empty()) return dense_[i];
    auto it = sparse_.find(i);
    return it == sparse_.end() ? kZero : it->second;
}

void QapInstance::set(std::size_t v, std::size_t vp, std::size_t w, std::size_t wp, const Rational& raw_value) {
    const auto i = index(v, vp, w, wp);
    Rational value = raw_value;
    value.canonicalize();
    if (!dense_.empty()) {
        dense_[i] = value;
    } else if (value == 0) {
        sparse_.erase(i);
    } else {
        sparse_[i] = value;
    }
}

Rational QapInstance::bound() const {
    Rational best = declared_bound_.value_or(Rational(0));
    for_each_nonzero([&](auto, auto, auto, auto, const Rational& c) { best = std::max(best, abs(c)); });
    return best;
}

void QapInstance::declare_bound(const Rational& bound) {
    if (bound < 0) throw InvalidArgument("QAP bound must be non-negative");
    declared_bound_ = bound;
}

bool QapInstance::all_nonnegative() const {
    bool ok = true;
    for_each_nonzero([&](auto, auto, auto, auto, const Rational& c) { ok = ok && c > 0; });
    return ok;
}

std::size_t QapInstance::nonzero_count() const {
    std::size_t count = 0;
    for_each_nonzero([&](auto, auto, auto, auto, const Rational&) { ++count; });
    return count;
}

std::vector<Rational> QapInstance::distinct_values() const {
    std::set<Rational> values;
    for_each_nonzero([&](auto, auto, auto, auto, const Rational& c) { values.insert(c); });
    const std::uint64_t total = static_cast<std::uint64_t>(n_) * n_ * n_ * n_;
    if (nonzero_count() < total) values.insert(Rational(0));
    return {values.begin(), values.end()};
}

bool operator==(const QapInstance& a, const QapInstance& b) {
    if (a.n_ != b.n_) return false;
    std::vector<std::pair<std::uint64_t, Rational>> ea, eb;
    a.for_each_nonzero([&](auto v, auto vp, auto w, auto wp, const Rational& c) { ea.emplace_back(a.index(v, vp, w, wp), c); });
    b.for_each_nonzero([&](auto v, auto vp, auto w, auto wp, const Rational& c) { eb.emplace_back(b.index(v, vp, w, wp), c); });
    return ea == eb;
}

Rational qap_cost(const QapInstance& q, const Assignment& phi) {
    require_order(q, phi.size(), "assignment");
    const std::size_t n = q.order();
    Rational total = 0;
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t w = 0; w < n; ++w) total += q(v, phi[v], w, phi[w]);
    return total;
}

QapInstance ged_to_qap(const Graph& g, const Graph& h) {
    if (g.order() != h.order()) throw InvalidArgument("graphs have different orders");
    if (g.is_weighted() || h.is_weighted()) throw InvalidArgument("ged_to_qap needs unweighted graphs; use weighted_ged_to_qap");
    const std::size_t n = g.order();
    QapInstance q(n);
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t w = 0; w < n; ++w) {
            const bool eg = v != w && g.has_edge(v, w);
            for (std::size_t vp = 0; vp < n; ++vp)
                for (std::size_t wp = 0; wp < n; ++wp) {
                    const bool eh = vp != wp && h.has_edge(vp, wp);
                    if (eg != eh) q.set(v, vp, w, wp, 1);
                }
        }
    q.declare_bound(1);
    return q;
}

QapInstance weighted_ged_to_qap(const Graph& g, const Graph& h) {
    if (g.order() != h.order()) throw InvalidArgument("graphs have different orders");
    const std::size_t n = g.order();
    QapInstance q(n);
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t w = 0; w < n; ++w) {
            const Rational wg = v == w ? Rational(0) : g.weight(v, w);
            for (std::size_t vp = 0; vp < n; ++vp)
                for (std::size_t wp = 0; wp < n; ++wp) {
                    const Rational wh = vp == wp ? Rational(0) : h.weight(vp, wp);
                    if (wg != wh) q.set(v, vp, w, wp, abs(wg - wh));
                }
        }
    return q;
}

namespace {

template <typename Cost>
struct QapSearch {
    std::size_t n;
    std::vector<Cost> c;  // dense copy
    bool prune;
    std::vector<std::size_t> current;
    std::vector<bool> used;
    std::optional<Cost> best;
    std::vector<std::size_t> best_perm;

    const Cost& at(std::size_t v, std::size_t vp, std::size_t w, std::size_t wp) const {
        return c[((v * n + vp) * n + w) * n + wp];
    }

    void search(std::size_t v, const Cost& partial) {
        if (prune && best && partial >= *best) return;
        if (v == n) {
            if (!best || partial < *best) {
                best = partial;
                best_perm = current;
            }
            return;
        }
        for (std::size_t t = 0; t < n; ++t) {
            if (used[t]) continue;
            Cost add = at(v, t, v, t);
            for (std::size_t u = 0; u < v; ++u) add += at(u, current[u], v, t) + at(v, t, u, current[u]);
            used[t] = true;
            current[v] = t;
            search(v + 1, Cost(partial + add));
            used[t] = false;
        }
    }
};

template <typename Cost>
QapSolution run_qap_search(std::size_t n, std::vector<Cost> dense, bool prune, const Rational& scale) {
    QapSearch<Cost> s{n, std::move(dense), prune, std::vector<std::size_t>(n), std::vector<bool>(n, false),
                      std::nullopt, {}};
    s.search(0, Cost(0));
    std::vector<Vertex> perm(s.best_perm.begin(), s.best_perm.end());
    return {to_rational(*s.best) / scale, Assignment(std::move(perm))};
}

}  // namespace

QapSolution qap_bruteforce(const QapInstance& q, std::size_t cap) {
    const std::size_t n = q.order();
    if (n > cap)
        throw BudgetExceeded("QAP brute force capped at n = " + std::to_string(cap) + ", got " + std::to_string(n));
    if (n == 0) return {0, Assignment{}};
    const bool prune = q.all_nonnegative();

    mpz_class lcm = 1;
    q.for_each_nonzero([&](auto, auto, auto, auto, const Rational& c) {
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
    });
    const mpz_class limit = mpz_class(1) << 40;
    bool fits = true;
    std::vector<long long> scaled(n * n * n * n, 0);
    q.for_each_nonzero([&](auto v, auto vp, auto w, auto wp, const Rational& c) {
        Rational s = c * lcm;
        if (abs(s.get_num()) >= limit) fits = false;
        if (fits) scaled[((v * n + vp) * n + w) * n + wp] = s.get_num().get_si();
    });
    if (fits) return run_qap_search<long long>(n, std::move(scaled), prune, Rational(lcm));

    std::vector<Rational> dense(n * n * n * n);
    q.for_each_nonzero([&](auto v, auto vp, auto w, auto wp, const Rational& c) { dense[((v * n + vp) * n + w) * n + wp] = c; });
    return run_qap_search<Rational>(n, std::move(dense), prune, Rational(1));
}

Rational b_alpha(const QapInstance& q, const PartialInjection& alpha, std::size_t v, std::size_t vp) {
    if (alpha.empty()) throw InvalidArgument("b_alpha needs a nonempty partial injection");
    if (alpha.span() > q.order()) throw InvalidArgument("partial injection exceeds QAP order");
    Rational sum = 0;
    for (auto [w, wp] : alpha) sum += q(v, vp, w, wp);
    return sum * static_cast<unsigned long>(q.order()) / static_cast<unsigned long>(alpha.size());
}

std::size_t threshold_count(const QapInstance& q, const PartialInjection& pairs, std::size_t v, std::size_t vp,
                            const Rational& t) {
    std::size_t count = 0;
    for (auto [w, wp] : pairs) count += q(v, vp, w, wp) > t;
    return count;
}

ThresholdGrid threshold_grid(const Rational& bound, const Rational& eps) {
    if (bound <= 0 || eps <= 0) throw InvalidArgument("threshold grid needs B > 0 and eps > 0");
    ThresholdGrid grid;
    grid.bound = bound;
    const mpz_class k = ceil(Rational(24 * bound / eps));
    if (!k.fits_ulong_p() || k > 100'000'000) throw BudgetExceeded("threshold grid too fine: k = " + k.get_str());
    grid.k = k.get_ui();
    const Rational step = grid.step();
    grid.boundaries.reserve(grid.k);
    for (std::size_t i = 0; i < grid.k; ++i) grid.boundaries.push_back(-bound + step * static_cast<unsigned long>(i));
    return grid;
}

MeanThresholdCheck mean_threshold_estimate(const QapInstance& q, const PartialInjection& alpha,
                                           const ThresholdGrid& grid, std::size_t v, std::size_t vp) {
    if (grid.bound < q.bound()) throw InvalidArgument("threshold grid bound is below the instance bound");
    MeanThresholdCheck out;
    out.b = b_alpha(q, alpha, v, vp);
    const Rational n = static_cast<unsigned long>(q.order());
    const Rational scale = n / static_cast<unsigned long>(alpha.size());
    Rational sum = 0;
    for (const auto& t : grid.boundaries) sum += scale * static_cast<unsigned long>(threshold_count(q, alpha, v, vp, t));
    const Rational step = grid.step();
    out.centre = step * sum - grid.bound * n;
    out.lower = out.centre - step * n;
    out.upper = out.centre + step * n;
    out.contained = out.lower <= out.b && out.b <= out.upper;
    return out;
}

std::size_t distinct_value_count(const QapInstance& q) { return q.distinct_values().size(); }

// ----------------------------------------------------------------- file I/O

QapInstance parse_qap(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::optional<QapInstance> q;
    std::set<std::uint64_t> seen;
    std::size_t lineno = 0;
    auto index_of = [&](const std::string& tok) -> std::size_t {
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError(lineno, "expected a non-negative integer, got '" + tok + "'");
        auto value = std::stoull(tok);
        if (q && value >= q->order()) throw ParseError(lineno, "index " + tok + " >= n");
        return value;
    };
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        std::istringstream ls(line.substr(0, line.find('#')));
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        if (!q) {
            if (tok[0] != "qap" || tok.size() != 2) throw ParseError(lineno, "expected header 'qap <n>'");
            q.emplace(index_of(tok[1]));
            continue;
        }
        if (tok[0] != "q" || tok.size() != 6) throw ParseError(lineno, "expected 'q <v> <v'> <w> <w'> <value>'");
        const auto v = index_of(tok[1]), vp = index_of(tok[2]), w = index_of(tok[3]), wp = index_of(tok[4]);
        const std::uint64_t n = q->order();
        if (!seen.insert(((v * n + vp) * n + w) * n + wp).second) throw ParseError(lineno, "duplicate coefficient");
        Rational value;
        try {
            value = parse_rational(tok[5]);
        } catch (const ParseError& e) {
            throw ParseError(lineno, e.what());
        }
        q->set(v, vp, w, wp, value);
    }
    if (!q) throw ParseError(lineno, "missing header 'qap <n>'");
    return std::move(*q);
}

std::string serialize_qap(const QapInstance& q) {
    std::ostringstream out;
    out << "qap " << q.order() << '\n';
    q.for_each_nonzero([&](auto v, auto vp, auto w, auto wp, const Rational& c) {
        out << "q " << v << ' ' << vp << ' ' << w << ' ' << wp << ' ' << to_string(c) << '\n';
    });
    return out.str();
}

QapInstance read_qap_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open QAP file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_qap(buf.str());
}

void write_qap_file(const std::filesystem::path& path, const QapInstance& q) {
    if (path.has_parent_path()) {
        std::error_code ignored;
        std::filesystem::create_directories(path.parent_path(), ignored);
    }
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write QAP file " + path.string());
    out << serialize_qap(q);
}

}  // namespace robustiso
