#ifndef IPM_MODEL_HPP
#define IPM_MODEL_HPP

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "ipm/linalg.hpp"

namespace ipm {

enum class ObjectiveSense { minimize, maximize };
enum class ConstraintSense { le, eq, ge };

/// User-facing problem: mixed constraint senses, min or max objective,
/// every variable implicitly nonnegative.
template <class T>
struct GeneralLP {
    struct Row {
        DenseVector<T> coeffs;
        ConstraintSense sense;
        T rhs;
    };
    ObjectiveSense sense = ObjectiveSense::minimize;
    DenseVector<T> objective;
    std::vector<Row> rows;

    std::size_t num_vars() const { return objective.size(); }
};

/// Where a standard-form column came from.
struct ColumnOrigin {
    enum Kind { original, slack, surplus, artificial } kind;
    std::size_t index;  // variable index, or constraint row for slack/surplus
};

/// min c^T x subject to A x = b, x >= 0.
template <class T>
struct StandardLP {
    DenseMatrix<T> A;
    DenseVector<T> b;
    DenseVector<T> c;
    bool integral = false;  // all entries integer, |entry| <= U
    T U = ScalarTraits<T>::zero();
    std::vector<ColumnOrigin> columns;

    std::size_t num_rows() const { return A.rows(); }
    std::size_t num_vars() const { return A.cols(); }
};

template <class T>
struct DualSolution {
    DenseVector<T> y;  // unconstrained, one per row
    DenseVector<T> s;  // >= 0, one per column
};

namespace detail {

template <class T>
void refresh_integrality(StandardLP<T>& p) {
    using Tr = ScalarTraits<T>;
    T u = Tr::one();
    bool integral = true;
    auto visit = [&](const T& v) {
        if constexpr (Tr::exact) {
            if (!v.is_integer()) integral = false;
        } else {
            if (std::floor(v) != v) integral = false;
        }
        T a = Tr::abs_val(v);
        if (a > u) u = a;
    };
    for (std::size_t i = 0; i < p.A.rows(); ++i)
        for (std::size_t j = 0; j < p.A.cols(); ++j) visit(p.A(i, j));
    for (std::size_t i = 0; i < p.b.size(); ++i) visit(p.b[i]);
    for (std::size_t j = 0; j < p.c.size(); ++j) visit(p.c[j]);
    p.integral = integral;
    p.U = integral ? u : Tr::zero();
}

} // namespace detail

/// Flips max to min and converts inequality rows to equalities with slack
/// (<=) or surplus (>=) columns.
template <class T>
StandardLP<T> to_standard_form(const GeneralLP<T>& p) {
    using Tr = ScalarTraits<T>;
    const std::size_t m = p.rows.size(), n = p.num_vars();
    std::size_t extra = 0;
    for (const auto& row : p.rows)
        if (row.sense != ConstraintSense::eq) ++extra;

    StandardLP<T> out;
    out.A = DenseMatrix<T>(m, n + extra);
    out.b = DenseVector<T>(m);
    out.c = DenseVector<T>(n + extra);
    out.columns.reserve(n + extra);
    for (std::size_t j = 0; j < n; ++j) {
        out.columns.push_back({ColumnOrigin::original, j});
        out.c[j] = p.sense == ObjectiveSense::maximize ? -p.objective[j] : p.objective[j];
    }
    std::size_t next = n;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& row = p.rows[i];
        if (row.coeffs.size() != n)
            throw std::invalid_argument("to_standard_form: row length mismatch");
        for (std::size_t j = 0; j < n; ++j) out.A(i, j) = row.coeffs[j];
        out.b[i] = row.rhs;
        if (row.sense == ConstraintSense::le) {
            out.A(i, next) = Tr::one();
            out.columns.push_back({ColumnOrigin::slack, i});
            ++next;
        } else if (row.sense == ConstraintSense::ge) {
            out.A(i, next) = -Tr::one();
            out.columns.push_back({ColumnOrigin::surplus, i});
            ++next;
        }
    }
    detail::refresh_integrality(out);
    return out;
}

/// Exact evidence of infeasibility from elimination: w^T A = 0 yet
/// w^T b != 0 over the original rows.
template <class T>
struct InfeasibleEvidence {
    DenseVector<T> row_combination;
};

/// The n = m full-rank case solved directly: the unique solution of A x = b,
/// feasible iff nonnegative.
template <class T>
struct DirectSolution {
    DenseVector<T> x;
    bool feasible;
};

template <class T>
using PreprocessResult =
    std::variant<StandardLP<T>, InfeasibleEvidence<T>, DirectSolution<T>>;

/// Removes dependent rows, detects inconsistent systems, and short-circuits
/// the square full-rank case.
template <class T>
PreprocessResult<T> preprocess(const StandardLP<T>& p) {
    auto red = row_reduce(p.A, p.b);
    if (red.inconsistent) return InfeasibleEvidence<T>{red.farkas};
    if (red.rank == p.num_vars()) {
        DenseVector<T> x = solve_unique(red.reduced, red.reduced_rhs);
        return DirectSolution<T>{x, x.all_nonnegative()};
    }
    StandardLP<T> out;
    out.A = red.reduced;
    out.b = red.reduced_rhs;
    out.c = p.c;
    out.columns = p.columns;
    detail::refresh_integrality(out);
    return out;
}

/// c^T x - b^T y for a feasible primal/dual pair; equals x^T s and is
/// nonnegative (weak duality).
template <class T>
T duality_gap(const StandardLP<T>& p, const DenseVector<T>& x, const DualSolution<T>& d) {
    using Tr = ScalarTraits<T>;
    if (x.size() != p.num_vars() || d.y.size() != p.num_rows() || d.s.size() != p.num_vars())
        throw std::invalid_argument("duality_gap: dimension mismatch");
    auto near_zero = [&](const T& v, const T& scale) {
        if constexpr (Tr::exact) return Tr::is_zero(v);
        else return Tr::abs_val(v) <= Tr::eps_res * (Tr::one() + Tr::abs_val(scale));
    };
    if (!x.all_nonnegative()) throw NotFeasible("duality_gap: x has a negative coordinate");
    if (!d.s.all_nonnegative()) throw NotFeasible("duality_gap: s has a negative coordinate");
    DenseVector<T> pr = p.A.apply(x);
    for (std::size_t i = 0; i < pr.size(); ++i)
        if (!near_zero(pr[i] - p.b[i], p.b[i])) throw NotFeasible("duality_gap: Ax != b");
    DenseVector<T> dr = p.A.apply_transpose(d.y);
    for (std::size_t j = 0; j < dr.size(); ++j)
        if (!near_zero(dr[j] + d.s[j] - p.c[j], p.c[j]))
            throw NotFeasible("duality_gap: A^T y + s != c");

    T gap = dot(p.c, x) - dot(p.b, d.y);
    T xs = dot(x, d.s);
    if constexpr (Tr::exact) {
        if (gap != xs) throw InvariantBroken("duality_gap: c^T x - b^T y != x^T s");
        if (gap.is_negative()) throw InvariantBroken("duality_gap: negative gap");
    } else {
        T scale = Tr::abs_val(gap) + Tr::abs_val(xs) + Tr::one();
        if (Tr::abs_val(gap - xs) > Tr::eps_res * scale)
            throw InvariantBroken("duality_gap: c^T x - b^T y != x^T s");
    }
    return gap;
}

} // namespace ipm

#endif
