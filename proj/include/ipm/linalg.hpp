#ifndef IPM_LINALG_HPP
#define IPM_LINALG_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "ipm/dense.hpp"
#include "ipm/errors.hpp"

namespace ipm {

template <class T>
struct RowReduceResult {
    DenseMatrix<T> reduced;       // original rows restricted to kept_rows
    DenseVector<T> reduced_rhs;
    std::size_t rank = 0;
    bool inconsistent = false;
    std::vector<std::size_t> kept_rows;
    // Row of multipliers w with w^T M = 0 and w^T rhs != 0 when inconsistent.
    DenseVector<T> farkas;
};

namespace detail {

// Partial pivoting for the float backend; first admissible pivot in exact
// mode (magnitude is irrelevant there).
template <class T>
std::size_t pick_pivot(const DenseMatrix<T>& w, std::size_t col,
                       const std::vector<std::size_t>& free_rows) {
    using Tr = ScalarTraits<T>;
    std::size_t best = free_rows.size();
    if constexpr (Tr::exact) {
        for (std::size_t t = 0; t < free_rows.size(); ++t)
            if (!Tr::is_zero(w(free_rows[t], col))) { best = t; break; }
    } else {
        T best_mag = Tr::zero();
        for (std::size_t t = 0; t < free_rows.size(); ++t) {
            T mag = Tr::abs_val(w(free_rows[t], col));
            if (mag > best_mag) { best_mag = mag; best = t; }
        }
        if (best < free_rows.size() && !Tr::pivot_ok(w(free_rows[best], col)))
            best = free_rows.size();
    }
    return best;
}

// Exact normal-equations solve on integer-cleared data. Rational arithmetic
// on the naive build is dominated by gcd canonicalization, so callers clear
// the system first: row scales lambda_i make At = Lambda A integral and a
// common denominator q makes P_j = q D_j integral. Then
// Lambda (A diag(D) A^T) Lambda = (At diag(P) At^T) / q is integer up to the
// single factor q, the scaled right-hand side is cleared the same way, and
// fraction-free (Bareiss) elimination keeps every intermediate an exact
// integer. The solution is returned uncanonicalized as integer numerators K
// over one shared denominator gamma (k_i = lambda_i K_i / gamma), so callers
// can keep assembling downstream quantities over shared denominators.
struct ClearedNormalResult {
    std::vector<mpz_class> K;
    mpz_class gamma;
};

inline ClearedNormalResult solve_normal_equations_cleared(
        std::size_t m, std::size_t n, const std::vector<mpz_class>& At,
        const std::vector<mpz_class>& lambda, const std::vector<mpz_class>& P,
        const mpz_class& q, const DenseVector<Rational>& rhs) {
    ClearedNormalResult res;
    res.gamma = 1;
    res.K.assign(m, mpz_class(0));
    if (m == 0) return res;

    // Working array [T | v]: T_ik = sum_j At(i,j) At(k,j) P_j, and
    // v = delta * q * Lambda * rhs with delta clearing the rhs denominators.
    std::vector<mpz_class> w(m * (m + 1));
    mpz_class tmp;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = i; k < m; ++k) {
            mpz_class acc = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (At[i * n + j] == 0 || At[k * n + j] == 0) continue;
                tmp = At[i * n + j] * At[k * n + j];
                mpz_addmul(acc.get_mpz_t(), tmp.get_mpz_t(), P[j].get_mpz_t());
            }
            w[i * (m + 1) + k] = acc;
            w[k * (m + 1) + i] = std::move(acc);
        }
    std::vector<Rational> u(m);
    mpz_class delta = 1;
    for (std::size_t i = 0; i < m; ++i) {
        u[i] = Rational(mpz_class(q * lambda[i])) * rhs[i];
        mpz_class den = u[i].den();
        mpz_lcm(delta.get_mpz_t(), delta.get_mpz_t(), den.get_mpz_t());
    }
    for (std::size_t i = 0; i < m; ++i)
        w[i * (m + 1) + m] = u[i].num() * (delta / u[i].den());

    // T is congruent to the positive definite normal matrix, so its leading
    // principal minors are positive and diagonal pivots in order never
    // vanish; Bareiss division by the previous pivot is exact.
    mpz_class prev = 1;
    for (std::size_t p = 0; p < m; ++p) {
        const mpz_class piv = w[p * (m + 1) + p];
        if (piv <= 0) throw SingularSystem("solve_normal_equations: nonpositive pivot");
        for (std::size_t r = p + 1; r < m; ++r) {
            const mpz_class lead = w[r * (m + 1) + p];
            for (std::size_t c = p + 1; c <= m; ++c) {
                tmp = piv * w[r * (m + 1) + c] - lead * w[p * (m + 1) + c];
                mpz_divexact(w[r * (m + 1) + c].get_mpz_t(), tmp.get_mpz_t(),
                             prev.get_mpz_t());
            }
            w[r * (m + 1) + p] = 0;
        }
        prev = piv;
    }

    // After Bareiss the last pivot is det(T), and by Cramer's rule det(T)
    // times the solution of T z = v is integral, so back substitution stays
    // in exact integer divisions: K_p = det(T) * z_p.
    const mpz_class det = w[(m - 1) * (m + 1) + (m - 1)];
    for (std::size_t p = m; p-- > 0;) {
        tmp = det * w[p * (m + 1) + m];
        for (std::size_t j = p + 1; j < m; ++j)
            mpz_submul(tmp.get_mpz_t(), w[p * (m + 1) + j].get_mpz_t(),
                       res.K[j].get_mpz_t());
        mpz_divexact(res.K[p].get_mpz_t(), tmp.get_mpz_t(),
                     w[p * (m + 1) + p].get_mpz_t());
    }
    res.gamma = delta * det;
    // det carries a q^m-scale factor that is common to every Cramer
    // numerator; one collective gcd strips it so downstream users work with
    // near-canonical sizes.
    mpz_class g = res.gamma;
    for (std::size_t i = 0; i < m && g != 1; ++i)
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), res.K[i].get_mpz_t());
    if (g > 1) {
        mpz_divexact(res.gamma.get_mpz_t(), res.gamma.get_mpz_t(), g.get_mpz_t());
        for (std::size_t i = 0; i < m; ++i)
            mpz_divexact(res.K[i].get_mpz_t(), res.K[i].get_mpz_t(), g.get_mpz_t());
    }
    return res;
}

// Float backend of the normal-equations solve. The coefficient matrix has
// condition on the order of the spread of D, which reaches the limit of
// binary64 late on the central path; building, factoring, and refining in
// extended precision keeps the pivots meaningful and leaves the returned
// binary64 step accurate. Nonpositive pivots (the true matrix is positive
// definite, so they are pure roundoff) are clamped rather than fatal.
inline DenseVector<double> solve_normal_equations_double(
        const DenseMatrix<double>& A, const DenseVector<double>& D,
        const DenseVector<double>& rhs) {
    const std::size_t m = A.rows(), n = A.cols();
    std::vector<long double> N(m * m), w(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = i; k < m; ++k) {
            long double acc = 0.0L;
            for (std::size_t l = 0; l < n; ++l)
                acc += static_cast<long double>(A(i, l)) * D[l] * A(k, l);
            N[i * m + k] = acc;
            N[k * m + i] = acc;
        }
    w = N;
    constexpr long double kPivotFloor = 1e-16L;
    for (std::size_t p = 0; p < m; ++p) {
        long double piv = w[p * m + p];
        const long double floor_p =
            kPivotFloor * (N[p * m + p] < 0 ? -N[p * m + p] : N[p * m + p]) +
            std::numeric_limits<double>::min();
        if (!(piv > floor_p)) { piv = floor_p; w[p * m + p] = piv; }
        for (std::size_t r = p + 1; r < m; ++r) {
            if (w[r * m + p] == 0.0L) continue;
            long double factor = w[r * m + p] / piv;
            for (std::size_t j = p + 1; j < m; ++j) w[r * m + j] -= factor * w[p * m + j];
            w[r * m + p] = factor;
        }
    }
    auto factored_solve = [&](const std::vector<long double>& b) {
        std::vector<long double> y = b;
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t r = p + 1; r < m; ++r) y[r] -= w[r * m + p] * y[p];
        std::vector<long double> z(m);
        for (std::size_t p = m; p-- > 0;) {
            long double acc = y[p];
            for (std::size_t j = p + 1; j < m; ++j) acc -= w[p * m + j] * z[j];
            z[p] = acc / w[p * m + p];
        }
        return z;
    };
    std::vector<long double> b(m);
    for (std::size_t i = 0; i < m; ++i) b[i] = rhs[i];
    std::vector<long double> k = factored_solve(b);
    for (int sweep = 0; sweep < 3; ++sweep) {
        std::vector<long double> r(m);
        for (std::size_t i = 0; i < m; ++i) {
            long double acc = b[i];
            for (std::size_t j = 0; j < m; ++j) acc -= N[i * m + j] * k[j];
            r[i] = acc;
        }
        std::vector<long double> d = factored_solve(r);
        for (std::size_t i = 0; i < m; ++i) k[i] += d[i];
    }
    DenseVector<double> out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = static_cast<double>(k[i]);
    return out;
}

// Convenience wrapper: clears A and D itself and returns canonical rationals.
inline DenseVector<Rational> solve_normal_equations_integer(
        const DenseMatrix<Rational>& A, const DenseVector<Rational>& D,
        const DenseVector<Rational>& rhs) {
    const std::size_t m = A.rows(), n = A.cols();

    std::vector<mpz_class> lambda(m), At(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        mpz_class l = 1;
        for (std::size_t j = 0; j < n; ++j) {
            mpz_class den = A(i, j).den();
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
        }
        lambda[i] = l;
        for (std::size_t j = 0; j < n; ++j)
            At[i * n + j] = A(i, j).num() * (l / A(i, j).den());
    }
    mpz_class q = 1;
    for (std::size_t j = 0; j < n; ++j) {
        mpz_class den = D[j].den();
        mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), den.get_mpz_t());
    }
    std::vector<mpz_class> P(n);
    for (std::size_t j = 0; j < n; ++j) P[j] = D[j].num() * (q / D[j].den());

    auto sol = solve_normal_equations_cleared(m, n, At, lambda, P, q, rhs);
    DenseVector<Rational> k(m);
    for (std::size_t i = 0; i < m; ++i)
        k[i] = Rational(mpq_class(lambda[i] * sol.K[i], sol.gamma));
    return k;
}

} // namespace detail

/// Gaussian elimination over the rows of [M | rhs]. Identifies a maximal
/// linearly independent row subset and detects inconsistency (a row that
/// eliminates to zero with nonzero right-hand side).
template <class T>
RowReduceResult<T> row_reduce(const DenseMatrix<T>& M, const DenseVector<T>& rhs) {
    using Tr = ScalarTraits<T>;
    const std::size_t m = M.rows(), n = M.cols();
    if (rhs.size() != m) throw std::invalid_argument("row_reduce: rhs length mismatch");

    DenseMatrix<T> w = M;
    DenseVector<T> wr = rhs;
    // Multiplier tracking: mult row i expresses working row i in terms of the
    // original rows.
    DenseMatrix<T> mult = DenseMatrix<T>::identity(m);

    std::vector<std::size_t> free_rows(m);
    for (std::size_t i = 0; i < m; ++i) free_rows[i] = i;

    RowReduceResult<T> res;
    for (std::size_t col = 0; col < n && !free_rows.empty(); ++col) {
        std::size_t t = detail::pick_pivot(w, col, free_rows);
        if (t == free_rows.size()) continue;
        std::size_t prow = free_rows[t];
        res.kept_rows.push_back(prow);
        free_rows.erase(free_rows.begin() + t);
        const T piv = w(prow, col);
        for (std::size_t r : free_rows) {
            if (Tr::is_zero(w(r, col))) continue;
            T factor = w(r, col) / piv;
            for (std::size_t j = col; j < n; ++j) w(r, j) -= factor * w(prow, j);
            w(r, col) = Tr::zero();  // kill float residue
            wr[r] -= factor * wr[prow];
            for (std::size_t j = 0; j < m; ++j) mult(r, j) -= factor * mult(prow, j);
        }
    }
    res.rank = res.kept_rows.size();
    std::sort(res.kept_rows.begin(), res.kept_rows.end());

    // Remaining rows are combinations of the kept ones; a nonzero rhs there
    // makes the system inconsistent.
    for (std::size_t r : free_rows) {
        bool zero_rhs;
        if constexpr (Tr::exact) {
            zero_rhs = Tr::is_zero(wr[r]);
        } else {
            T scale = Tr::one();
            for (std::size_t j = 0; j < m; ++j) scale += Tr::abs_val(mult(r, j)) * Tr::abs_val(rhs[j]);
            zero_rhs = Tr::abs_val(wr[r]) <= Tr::eps_res * scale;
        }
        if (!zero_rhs) {
            res.inconsistent = true;
            res.farkas = mult.row(r);
            break;
        }
    }

    res.reduced = M.select_rows(res.kept_rows);
    res.reduced_rhs = select(rhs, res.kept_rows);
    return res;
}

/// Solves M z = g where the system is known to have a unique solution
/// (square nonsingular, or overdetermined consistent with full column rank).
/// Throws SingularSystem otherwise.
template <class T>
DenseVector<T> solve_unique(const DenseMatrix<T>& M, const DenseVector<T>& g) {
    using Tr = ScalarTraits<T>;
    const std::size_t m = M.rows(), k = M.cols();
    if (g.size() != m) throw std::invalid_argument("solve_unique: rhs length mismatch");

    DenseMatrix<T> w = M;
    DenseVector<T> wr = g;
    std::vector<std::size_t> free_rows(m);
    for (std::size_t i = 0; i < m; ++i) free_rows[i] = i;
    std::vector<std::size_t> pivot_row_of(k);

    for (std::size_t col = 0; col < k; ++col) {
        std::size_t t = detail::pick_pivot(w, col, free_rows);
        if (t == free_rows.size())
            throw SingularSystem("solve_unique: rank deficient at column " + std::to_string(col));
        std::size_t prow = free_rows[t];
        pivot_row_of[col] = prow;
        free_rows.erase(free_rows.begin() + t);
        const T piv = w(prow, col);
        for (std::size_t r : free_rows) {
            if (Tr::is_zero(w(r, col))) continue;
            T factor = w(r, col) / piv;
            for (std::size_t j = col; j < k; ++j) w(r, j) -= factor * w(prow, j);
            w(r, col) = Tr::zero();
            wr[r] -= factor * wr[prow];
        }
    }

    // Leftover (dependent) rows must be consistent.
    for (std::size_t r : free_rows) {
        bool zero_rhs;
        if constexpr (Tr::exact) {
            zero_rhs = Tr::is_zero(wr[r]);
        } else {
            T scale = Tr::one() + Tr::abs_val(g[r]);
            zero_rhs = Tr::abs_val(wr[r]) <= Tr::eps_res * scale;
        }
        if (!zero_rhs) throw SingularSystem("solve_unique: inconsistent system");
    }

    DenseVector<T> z(k);
    for (std::size_t col = k; col-- > 0;) {
        std::size_t prow = pivot_row_of[col];
        T acc = wr[prow];
        for (std::size_t j = col + 1; j < k; ++j) acc -= w(prow, j) * z[j];
        z[col] = acc / w(prow, col);
    }
    return z;
}

/// Solves (A diag(D) A^T) k = rhs with A full row rank and D > 0. The
/// coefficient matrix is symmetric positive definite, so symmetric
/// elimination without square roots suffices; a nonpositive pivot signals a
/// violated precondition.
template <class T>
DenseVector<T> solve_normal_equations(const DenseMatrix<T>& A, const DenseVector<T>& D,
                                      const DenseVector<T>& rhs) {
    using Tr = ScalarTraits<T>;
    const std::size_t m = A.rows(), n = A.cols();
    if (D.size() != n) throw std::invalid_argument("solve_normal_equations: D length mismatch");
    if (rhs.size() != m) throw std::invalid_argument("solve_normal_equations: rhs length mismatch");

    if constexpr (std::is_same_v<T, Rational>)
        return detail::solve_normal_equations_integer(A, D, rhs);
    if constexpr (std::is_same_v<T, double>)
        return detail::solve_normal_equations_double(A, D, rhs);

    DenseMatrix<T> N(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            T acc = Tr::zero();
            for (std::size_t l = 0; l < n; ++l) acc += A(i, l) * D[l] * A(j, l);
            N(i, j) = acc;
            N(j, i) = acc;
        }

    // LDL^T-style in-place elimination, diagonal pivots in order. The
    // multipliers are stored so float mode can run iterative refinement.
    DenseMatrix<T> w = N;
    for (std::size_t p = 0; p < m; ++p) {
        T piv = w(p, p);
        if constexpr (Tr::exact) {
            if (!(piv > Tr::zero()))
                throw SingularSystem("solve_normal_equations: nonpositive pivot");
        } else {
            // The true matrix is positive definite, so a vanishing or negative
            // pivot late in the central path is elimination roundoff under the
            // huge spread of D. Clamp it: the resulting step error sits in the
            // directions the refinement sweeps and the sigma checks police.
            T scale = Tr::abs_val(N(p, p)) + Tr::eps_pivot;
            if (!(piv > Tr::eps_pivot * scale)) {
                piv = Tr::eps_pivot * scale;
                w(p, p) = piv;
            }
        }
        for (std::size_t r = p + 1; r < m; ++r) {
            if (Tr::is_zero(w(r, p))) continue;
            T factor = w(r, p) / piv;
            for (std::size_t j = p + 1; j < m; ++j) w(r, j) -= factor * w(p, j);
            w(r, p) = factor;
        }
    }
    auto factored_solve = [&](const DenseVector<T>& b) {
        DenseVector<T> y = b;
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t r = p + 1; r < m; ++r) y[r] -= w(r, p) * y[p];
        DenseVector<T> z(m);
        for (std::size_t p = m; p-- > 0;) {
            T acc = y[p];
            for (std::size_t j = p + 1; j < m; ++j) acc -= w(p, j) * z[j];
            z[p] = acc / w(p, p);
        }
        return z;
    };

    DenseVector<T> kvec = factored_solve(rhs);
    if constexpr (!Tr::exact) {
        // Refinement sweeps; the normal matrix gets badly scaled late on the
        // central path.
        for (int sweep = 0; sweep < 2; ++sweep)
            kvec = kvec + factored_solve(rhs - N.apply(kvec));
    }
    return kvec;
}

/// Solves M z = g for some solution when the system is consistent (possibly
/// underdetermined; free variables are set to zero). Returns nullopt on an
/// inconsistent system.
template <class T>
std::optional<DenseVector<T>> solve_consistent(const DenseMatrix<T>& M, const DenseVector<T>& g) {
    using Tr = ScalarTraits<T>;
    const std::size_t m = M.rows(), k = M.cols();
    if (g.size() != m) throw std::invalid_argument("solve_consistent: rhs length mismatch");

    DenseMatrix<T> w = M;
    DenseVector<T> wr = g;
    std::vector<std::size_t> free_rows(m);
    for (std::size_t i = 0; i < m; ++i) free_rows[i] = i;
    std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (col, row)

    for (std::size_t col = 0; col < k && !free_rows.empty(); ++col) {
        std::size_t t = detail::pick_pivot(w, col, free_rows);
        if (t == free_rows.size()) continue;
        std::size_t prow = free_rows[t];
        pivots.emplace_back(col, prow);
        free_rows.erase(free_rows.begin() + t);
        const T piv = w(prow, col);
        for (std::size_t r : free_rows) {
            if (Tr::is_zero(w(r, col))) continue;
            T factor = w(r, col) / piv;
            for (std::size_t j = col; j < k; ++j) w(r, j) -= factor * w(prow, j);
            w(r, col) = Tr::zero();
            wr[r] -= factor * wr[prow];
        }
    }
    for (std::size_t r : free_rows) {
        bool zero_rhs;
        if constexpr (Tr::exact) {
            zero_rhs = Tr::is_zero(wr[r]);
        } else {
            zero_rhs = Tr::abs_val(wr[r]) <= Tr::eps_res * (Tr::one() + Tr::abs_val(g[r]));
        }
        if (!zero_rhs) return std::nullopt;
    }

    DenseVector<T> z(k);
    for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
        auto [col, prow] = *it;
        T acc = wr[prow];
        for (std::size_t j = col + 1; j < k; ++j) acc -= w(prow, j) * z[j];
        z[col] = acc / w(prow, col);
    }
    return z;
}

/// Determinant by elimination; exact in rational mode.
template <class T>
T determinant(const DenseMatrix<T>& M) {
    using Tr = ScalarTraits<T>;
    if (M.rows() != M.cols()) throw std::invalid_argument("determinant: matrix not square");
    const std::size_t k = M.rows();
    DenseMatrix<T> w = M;
    T det = Tr::one();
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t prow = k;
        for (std::size_t r = col; r < k; ++r)
            if (!Tr::is_zero(w(r, col))) { prow = r; break; }
        if (prow == k) return Tr::zero();
        if (prow != col) {
            for (std::size_t j = col; j < k; ++j) std::swap(w(col, j), w(prow, j));
            det = -det;
        }
        const T piv = w(col, col);
        det *= piv;
        for (std::size_t r = col + 1; r < k; ++r) {
            if (Tr::is_zero(w(r, col))) continue;
            T factor = w(r, col) / piv;
            for (std::size_t j = col; j < k; ++j) w(r, j) -= factor * w(col, j);
        }
    }
    return det;
}

/// Greedy maximal set of linearly independent columns, in index order.
template <class T>
std::vector<std::size_t> independent_columns(const DenseMatrix<T>& M) {
    auto r = row_reduce(M.transposed(), DenseVector<T>(M.cols()));
    return r.kept_rows;
}

/// Column rank.
template <class T>
std::size_t rank(const DenseMatrix<T>& M) {
    return independent_columns(M).size();
}

} // namespace ipm

#endif
