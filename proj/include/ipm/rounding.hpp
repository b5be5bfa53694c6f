#ifndef IPM_ROUNDING_HPP
#define IPM_ROUNDING_HPP

#include <optional>
#include <variant>

#include "ipm/init.hpp"

namespace ipm {

/// Support identification from a final iterate with mu < mu_f:
/// B collects indices with tiny dual slack, N those with tiny primal value;
/// B1 is a maximal-rank column subset of B.
struct SupportSplit {
    std::vector<std::size_t> B, N, B1, B2;
};

/// Exactly optimal primal/dual pair for the auxiliary problem.
struct AuxOptimalPair {
    DenseVector<Rational> x;
    DenseVector<Rational> y;
    DenseVector<Rational> s;
    Rational objective;
};

struct OptimalCertificate {
    DenseVector<Rational> x;  // over the standardized columns
    DenseVector<Rational> y;
    DenseVector<Rational> s;
    Rational objective;  // of the standardized (minimization) problem
};

struct InfeasibleCertificate {
    // Exactly one of the two witnesses is present.
    std::optional<DenseVector<Rational>> farkas_rows;  // w: w^T A = 0, w^T b != 0
    std::optional<AuxOptimalPair> aux_witness;         // optimal with x_{n+2} > 0
};

struct UnboundedCertificate {
    DenseVector<Rational> feasible_point;  // A x0 = b, x0 >= 0
    DenseVector<Rational> ray;             // A r = 0, r >= 0, c^T r = -1
};

using Certificate = std::variant<OptimalCertificate, InfeasibleCertificate, UnboundedCertificate>;

inline Rational split_threshold(const AuxiliaryProblem<Rational>& ap) {
    long n = static_cast<long>(ap.base.num_vars());
    return ap.consts.Q / (Rational(4) * Rational(n + 2));
}

template <class R>
SupportSplit split_support(const AuxiliaryProblem<R>& ap, const Iterate<R>& it) {
    static_assert(ScalarTraits<R>::exact, "support splitting requires exact arithmetic");
    const long n = static_cast<long>(ap.base.num_vars());
    if (!(it.mu < ap.consts.mu_f))
        throw SplitViolation("split_support: mu has not reached mu_f");
    // Companion threshold used inside the split analysis; enforced alongside
    // mu_f so a disagreement between the two is surfaced rather than hidden.
    Rational companion = ap.consts.Q * ap.consts.Q /
                         (Rational(32) * Rational(n + 2) * Rational(n + 2));
    if (!(it.mu <= companion))
        throw SplitViolation("split_support: mu < mu_f but above Q^2/(32(n+2)^2)");

    Rational thr = split_threshold(ap);
    SupportSplit sp;
    for (std::size_t i = 0; i < it.x.size(); ++i) {
        bool in_b = it.s[i] < thr;
        bool in_n = it.x[i] < thr;
        if (in_b && in_n) throw SplitViolation("split_support: index in both B and N");
        if (!in_b && !in_n) throw SplitViolation("split_support: index in neither B nor N");
        (in_b ? sp.B : sp.N).push_back(i);
    }
    Rational small = Rational(8) * it.mu / ap.consts.Q;
    for (std::size_t i : sp.N)
        if (!(it.x[i] < small)) throw SplitViolation("split_support: x_i not < 8 mu / Q on N");
    for (std::size_t i : sp.B)
        if (!(it.s[i] < small)) throw SplitViolation("split_support: s_i not < 8 mu / Q on B");

    DenseMatrix<Rational> AB = ap.aux.A.select_cols(sp.B);
    std::vector<std::size_t> pos = independent_columns(AB);
    std::vector<bool> in_b1(sp.B.size(), false);
    for (std::size_t t : pos) in_b1[t] = true;
    for (std::size_t t = 0; t < sp.B.size(); ++t)
        (in_b1[t] ? sp.B1 : sp.B2).push_back(sp.B[t]);
    return sp;
}

/// Rounds the final iterate to an exactly optimal auxiliary pair: zero the
/// N-part, keep the B2-part, re-solve the B1-part, and certify via an exact
/// dual with support in N.
template <class R>
AuxOptimalPair extract_optimal(const AuxiliaryProblem<R>& ap, const Iterate<R>& it,
                               const SupportSplit& sp) {
    static_assert(ScalarTraits<R>::exact);
    const auto& A = ap.aux.A;
    const long n = static_cast<long>(ap.base.num_vars());

    DenseVector<Rational> rhs = ap.aux.b;
    for (std::size_t j : sp.B2)
        for (std::size_t i = 0; i < A.rows(); ++i) rhs[i] -= A(i, j) * it.x[j];
    DenseVector<Rational> xb1;
    try {
        xb1 = solve_unique(A.select_cols(sp.B1), rhs);
    } catch (const SingularSystem&) {
        throw RoundingFailed("extract_optimal: B1 system not uniquely solvable");
    }

    Rational drift_bound = ap.consts.R / (Rational(8) * Rational(n + 2));
    for (std::size_t t = 0; t < sp.B1.size(); ++t)
        if (!(abs(it.x[sp.B1[t]] - xb1[t]) <= drift_bound))
            throw RoundingFailed("extract_optimal: re-solved B1 part drifted beyond R/(8(n+2))");

    AuxOptimalPair out;
    out.x = DenseVector<Rational>(A.cols());
    for (std::size_t j : sp.B2) out.x[j] = it.x[j];
    for (std::size_t t = 0; t < sp.B1.size(); ++t) out.x[sp.B1[t]] = xb1[t];
    if (!out.x.all_nonnegative())
        throw RoundingFailed("extract_optimal: rounded primal has a negative coordinate");

    // Dual: correct the iterate's y so the B-slacks vanish exactly. The
    // correction solves A_B^T dy = s_B with s_B < 8 mu / Q componentwise, so
    // it cannot push the N-slacks (all >= Q/(4(n+2)) - drift) below zero;
    // anchoring at the iterate keeps the solution inside the dual-feasible
    // region, which an arbitrary solution of A_B^T y = c_B need not be.
    DenseMatrix<Rational> ABt = A.select_cols(sp.B).transposed();
    DenseVector<Rational> slack_b(sp.B.size());
    for (std::size_t t = 0; t < sp.B.size(); ++t) slack_b[t] = it.s[sp.B[t]];
    auto dy = solve_consistent(ABt, slack_b);
    if (!dy) throw RoundingFailed("extract_optimal: dual system A_B^T y = c_B inconsistent");
    out.y = it.y + *dy;
    out.s = ap.aux.c - A.apply_transpose(out.y);
    for (std::size_t j : sp.B)
        if (!out.s[j].is_zero()) throw RoundingFailed("extract_optimal: s not zero on B");
    for (std::size_t j : sp.N)
        if (out.s[j].is_negative())
            throw RoundingFailed("extract_optimal: dual slack negative on N");

    out.objective = dot(ap.aux.c, out.x);
    if (out.objective != dot(ap.aux.b, out.y))
        throw RoundingFailed("extract_optimal: primal and dual objectives differ");
    if (!dot(out.x, out.s).is_zero())
        throw RoundingFailed("extract_optimal: complementary slackness violated");
    return out;
}

/// Maps an exactly optimal auxiliary pair back to a verdict on the original
/// problem. probe_unbounded is the outcome of the unboundedness probe (only
/// consulted when the problem is feasible).
template <class R>
Certificate classify(const AuxiliaryProblem<R>& ap, const AuxOptimalPair& opt,
                     bool probe_unbounded,
                     const std::optional<UnboundedCertificate>& unbounded_witness = {}) {
    static_assert(ScalarTraits<R>::exact);
    const std::size_t m = ap.base.num_rows(), n = ap.base.num_vars();

    if (opt.x[ap.artificial_index()].is_positive())
        return InfeasibleCertificate{std::nullopt, opt};

    if (probe_unbounded) {
        if (!unbounded_witness)
            throw std::invalid_argument("classify: missing unbounded witness");
        return *unbounded_witness;
    }

    // Bounded and feasible: undo the 1/W normalization. The box-slack column
    // sits in B, which forces y_{m+1} = 0, so the first m dual coordinates
    // certify the original problem as they stand.
    if (!opt.y[m].is_zero())
        throw RoundingFailed("classify: y_{m+1} != 0 on a feasible bounded instance");

    OptimalCertificate cert;
    cert.x = DenseVector<Rational>(n);
    for (std::size_t j = 0; j < n; ++j) cert.x[j] = ap.consts.W * opt.x[j];
    cert.y = DenseVector<Rational>(m);
    for (std::size_t i = 0; i < m; ++i) cert.y[i] = opt.y[i];
    cert.s = DenseVector<Rational>(n);
    for (std::size_t j = 0; j < n; ++j) cert.s[j] = opt.s[j];
    cert.objective = dot(ap.base.c, cert.x);

    // Self-verification: the certificate must stand on its own exactly.
    if (!cert.x.all_nonnegative()) throw RoundingFailed("classify: x* has negative coordinate");
    if (!cert.s.all_nonnegative()) throw RoundingFailed("classify: s* has negative coordinate");
    if (!(ap.base.A.apply(cert.x) == ap.base.b)) throw RoundingFailed("classify: A x* != b");
    DenseVector<Rational> dr = ap.base.A.apply_transpose(cert.y);
    for (std::size_t j = 0; j < n; ++j)
        if (dr[j] + cert.s[j] != ap.base.c[j])
            throw RoundingFailed("classify: A^T y* + s* != c");
    if (cert.objective != dot(ap.base.b, cert.y))
        throw RoundingFailed("classify: strong duality violated");
    if (!dot(cert.x, cert.s).is_zero())
        throw RoundingFailed("classify: x*^T s* != 0");
    return cert;
}

} // namespace ipm

#endif
