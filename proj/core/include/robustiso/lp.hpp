#pragma once

#include "robustiso/rational.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace robustiso {

/// sum_j coeff_j x_j (<=|>=|=) rhs
struct LinearConstraint {
    enum class Sense { less_equal, greater_equal, equal };

    std::vector<std::pair<std::size_t, Rational>> terms;
    Sense sense = Sense::equal;
    Rational rhs;
};

/// minimise objective . x subject to rows, x >= 0.
struct LinearProgram {
    std::size_t variable_count = 0;
    std::vector<Rational> objective;
    std::vector<LinearConstraint> rows;
};

enum class LpStatus { optimal, infeasible, unbounded };

std::string to_string(LpStatus status);

enum class LpArithmetic {
    exact,     // GMP rationals, no tolerances
    floating,  // doubles with an absolute pivot tolerance
};

struct LpOptions {
    LpArithmetic arithmetic = LpArithmetic::exact;
    double tolerance = 1e-9;
    std::size_t max_pivots = 1'000'000;
};

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    std::vector<Rational> values;  // empty unless optimal
    Rational objective;
    std::size_t pivots = 0;
};

/// Two-phase dense-tableau simplex. Entering column: most negative reduced
/// cost, switching to Bland's rule while pivots stay degenerate; leaving row:
/// minimum ratio, ties to the smallest basic index. The pivot sequence is a
/// pure function of the input.
LpResult solve_lp(const LinearProgram& lp, const LpOptions& options = {});

/// Largest violation of any row or bound by `x` (0 when feasible), exact.
Rational max_violation(const LinearProgram& lp, const std::vector<Rational>& x);

}  // namespace robustiso
