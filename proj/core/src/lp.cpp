#include "robustiso/lp.hpp"

#include "robustiso/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace robustiso {

std::string to_string(LpStatus status) {
    switch (status) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
    }
    return "unknown";
}

namespace {

template <typename T>
struct Arith;

template <>
struct Arith<Rational> {
    static Rational from(const Rational& r) { return r; }
    static Rational to_rational(const Rational& r) { return r; }
    static int sign(const Rational& x, double) { return sgn(x); }
    // dst -= f * src
    static void sub_mul(Rational& dst, const Rational& f, const Rational& src, Rational& tmp) {
        mpq_mul(tmp.get_mpq_t(), f.get_mpq_t(), src.get_mpq_t());
        mpq_sub(dst.get_mpq_t(), dst.get_mpq_t(), tmp.get_mpq_t());
    }
    static void snap(Rational&, double) {}
};

template <>
struct Arith<double> {
    static double from(const Rational& r) { return r.get_d(); }
    static Rational to_rational(double x) { return from_double(x); }
    static int sign(double x, double tol) { return x > tol ? 1 : (x < -tol ? -1 : 0); }
    static void sub_mul(double& dst, double f, double src, double&) { dst -= f * src; }
    static void snap(double& x, double tol) {
        if (std::abs(x) < tol * 1e-3) x = 0;
    }
};

template <typename T>
class Simplex {
  public:
    Simplex(const LinearProgram& lp, const LpOptions& options) : lp_(lp), options_(options) {}

    LpResult run() {
        build();
        LpResult result;
        // phase 1: minimise the sum of artificial variables
        set_phase_one_costs();
        if (!optimise()) throw InternalError("phase one of the simplex cannot be unbounded");
        if (Arith<T>::sign(cost_.back(), options_.tolerance) != 0) {
            result.status = LpStatus::infeasible;
            result.pivots = pivots_;
            return result;
        }
        drive_out_artificials();
        for (std::size_t j = first_artificial_; j < cols_; ++j) blocked_[j] = true;
        set_phase_two_costs();
        if (!optimise()) {
            result.status = LpStatus::unbounded;
            result.pivots = pivots_;
            return result;
        }
        result.status = LpStatus::optimal;
        result.pivots = pivots_;
        result.values.assign(lp_.variable_count, Rational(0));
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (basis_[i] < lp_.variable_count) {
                Rational v = Arith<T>::to_rational(rows_[i].back());
                if (options_.arithmetic == LpArithmetic::floating && abs(v) < Rational(options_.tolerance)) v = 0;
                result.values[basis_[i]] = v;
            }
        result.objective = 0;
        for (std::size_t j = 0; j < lp_.variable_count; ++j) result.objective += lp_.objective[j] * result.values[j];
        return result;
    }

  private:
    void build() {
        const std::size_t m = lp_.rows.size();
        const std::size_t n = lp_.variable_count;
        if (lp_.objective.size() != n) throw InvalidArgument("objective length differs from variable count");

        // normalise to non-negative right-hand sides
        std::vector<LinearConstraint::Sense> sense(m);
        std::vector<int> flip(m, 1);
        std::size_t slacks = 0, artificials = 0;
        for (std::size_t i = 0; i < m; ++i) {
            sense[i] = lp_.rows[i].sense;
            if (lp_.rows[i].rhs < 0) {
                flip[i] = -1;
                if (sense[i] == LinearConstraint::Sense::less_equal)
                    sense[i] = LinearConstraint::Sense::greater_equal;
                else if (sense[i] == LinearConstraint::Sense::greater_equal)
                    sense[i] = LinearConstraint::Sense::less_equal;
            }
            if (sense[i] != LinearConstraint::Sense::equal) ++slacks;
            if (sense[i] != LinearConstraint::Sense::less_equal) ++artificials;
        }
        first_artificial_ = n + slacks;
        cols_ = n + slacks + artificials;
        rows_.assign(m, std::vector<T>(cols_ + 1, T(0)));
        basis_.assign(m, 0);
        blocked_.assign(cols_, false);

        std::size_t next_slack = n, next_art = first_artificial_;
        for (std::size_t i = 0; i < m; ++i) {
            auto& row = rows_[i];
            for (const auto& [j, c] : lp_.rows[i].terms) {
                if (j >= n) throw InvalidArgument("constraint refers to an unknown variable");
                row[j] += Arith<T>::from(flip[i] < 0 ? Rational(-c) : c);
            }
            row.back() = Arith<T>::from(flip[i] < 0 ? Rational(-lp_.rows[i].rhs) : lp_.rows[i].rhs);
            switch (sense[i]) {
                case LinearConstraint::Sense::less_equal:
                    row[next_slack] = T(1);
                    basis_[i] = next_slack++;
                    break;
                case LinearConstraint::Sense::greater_equal:
                    row[next_slack++] = T(-1);
                    row[next_art] = T(1);
                    basis_[i] = next_art++;
                    break;
                case LinearConstraint::Sense::equal:
                    row[next_art] = T(1);
                    basis_[i] = next_art++;
                    break;
            }
        }
    }

    void set_phase_one_costs() {
        cost_.assign(cols_ + 1, T(0));
        for (std::size_t j = first_artificial_; j < cols_; ++j) cost_[j] = T(1);
        price_out_basis();
    }

    void set_phase_two_costs() {
        cost_.assign(cols_ + 1, T(0));
        for (std::size_t j = 0; j < lp_.variable_count; ++j) cost_[j] = Arith<T>::from(lp_.objective[j]);
        price_out_basis();
    }

    void price_out_basis() {
        T tmp{};
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const T f = cost_[basis_[i]];
            if (Arith<T>::sign(f, 0.0) == 0) continue;
            for (std::size_t j = 0; j <= cols_; ++j)
                if (Arith<T>::sign(rows_[i][j], 0.0) != 0) Arith<T>::sub_mul(cost_[j], f, rows_[i][j], tmp);
        }
    }

    /// Returns false when unbounded.
    bool optimise() {
        std::size_t degenerate_run = 0;
        constexpr std::size_t kBlandAfter = 25;
        while (true) {
            const bool bland = degenerate_run >= kBlandAfter;
            std::optional<std::size_t> enter;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (blocked_[j] || Arith<T>::sign(cost_[j], options_.tolerance) >= 0) continue;
                if (!enter || (!bland && cost_[j] < cost_[*enter])) enter = j;
                if (bland) break;
            }
            if (!enter) return true;
            const std::size_t c = *enter;

            std::optional<std::size_t> leave;
            T best_ratio{};
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                if (Arith<T>::sign(rows_[i][c], options_.tolerance) <= 0) continue;
                T ratio = rows_[i].back() / rows_[i][c];
                if (!leave || ratio < best_ratio || (!(best_ratio < ratio) && basis_[i] < basis_[*leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (!leave) return false;
            degenerate_run = Arith<T>::sign(best_ratio, options_.tolerance) == 0 ? degenerate_run + 1 : 0;
            pivot(*leave, c);
            if (++pivots_ > options_.max_pivots) throw BudgetExceeded("simplex pivot limit reached");
        }
    }

    void pivot(std::size_t r, std::size_t c) {
        auto& prow = rows_[r];
        const T inv = T(1) / prow[c];
        std::vector<std::size_t> nz;
        for (std::size_t j = 0; j <= cols_; ++j) {
            if (Arith<T>::sign(prow[j], 0.0) == 0) continue;
            prow[j] *= inv;
            nz.push_back(j);
        }
        prow[c] = T(1);
        T tmp{};
        auto eliminate = [&](std::vector<T>& row) {
            if (Arith<T>::sign(row[c], 0.0) == 0) return;
            const T f = row[c];
            for (auto j : nz) {
                Arith<T>::sub_mul(row[j], f, prow[j], tmp);
                Arith<T>::snap(row[j], options_.tolerance);
            }
            row[c] = T(0);
        };
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (i != r) eliminate(rows_[i]);
        eliminate(cost_);
        basis_[r] = c;
    }

    void drive_out_artificials() {
        for (std::size_t i = 0; i < rows_.size();) {
            if (basis_[i] < first_artificial_) {
                ++i;
                continue;
            }
            std::optional<std::size_t> col;
            for (std::size_t j = 0; j < first_artificial_ && !col; ++j)
                if (Arith<T>::sign(rows_[i][j], options_.tolerance) != 0) col = j;
            if (col) {
                pivot(i, *col);
                ++pivots_;
                ++i;
            } else {
                // redundant row
                rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
            }
        }
    }

    const LinearProgram& lp_;
    LpOptions options_;
    std::size_t cols_ = 0;
    std::size_t first_artificial_ = 0;
    std::vector<std::vector<T>> rows_;
    std::vector<T> cost_;
    std::vector<std::size_t> basis_;
    std::vector<bool> blocked_;
    std::size_t pivots_ = 0;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp, const LpOptions& options) {
    if (options.arithmetic == LpArithmetic::exact) return Simplex<Rational>(lp, options).run();
    return Simplex<double>(lp, options).run();
}

Rational max_violation(const LinearProgram& lp, const std::vector<Rational>& x) {
    if (x.size() != lp.variable_count) throw InvalidArgument("solution length differs from variable count");
    Rational worst = 0;
    for (const auto& v : x) worst = std::max(worst, Rational(-v));
    for (const auto& row : lp.rows) {
        Rational lhs = 0;
        for (const auto& [j, c] : row.terms) lhs += c * x[j];
        Rational gap = 0;
        switch (row.sense) {
            case LinearConstraint::Sense::less_equal: gap = lhs - row.rhs; break;
            case LinearConstraint::Sense::greater_equal: gap = row.rhs - lhs; break;
            case LinearConstraint::Sense::equal: gap = abs(lhs - row.rhs); break;
        }
        worst = std::max(worst, gap);
    }
    return worst;
}

}  // namespace robustiso
