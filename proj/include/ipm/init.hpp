#ifndef IPM_INIT_HPP
#define IPM_INIT_HPP

#include "ipm/path.hpp"

namespace ipm {

/// The explicit constants of the big-M embedding:
///   W = (mU)^m                     vertex coordinate bound
///   R = (1/W^2) / (2n ((m+1)U)^(3(m+1)))   vertex floor
///   Q = R/(n+2)                    strict-complementarity floor
///   M = 4nU/R                      artificial-variable penalty
///   mu0: smallest integer with mu0^2 >= 4 (M^2 + sum c_i^2)
///   mu_f = R Q / (64 (n+2)^2 ((m+1)U)^(m+2))  rounding threshold
template <class T>
struct TheoreticalConstants {
    T W, R, Q, M, mu0, mu_f;
};

template <class T>
TheoreticalConstants<T> compute_constants(const StandardLP<T>& p) {
    using Tr = ScalarTraits<T>;
    if (!p.integral)
        throw std::invalid_argument("theoretical constants need integral data");
    const std::size_t m = p.num_rows(), n = p.num_vars();
    T U = p.U;
    if (U < Tr::one()) U = Tr::one();

    TheoreticalConstants<T> k;
    T sum_c_sq = Tr::zero();
    for (std::size_t j = 0; j < n; ++j) sum_c_sq += p.c[j] * p.c[j];

    if constexpr (Tr::exact) {
        T mU = T(static_cast<long>(m)) * U;
        k.W = Rational::pow(mU, m);
        T m1U = (T(static_cast<long>(m)) + Rational(1)) * U;
        k.R = Rational(1) / (k.W * k.W) /
              (Rational(2) * Rational(static_cast<long>(n)) * Rational::pow(m1U, 3 * (m + 1)));
        k.Q = k.R / Rational(static_cast<long>(n) + 2);
        k.M = Rational(4) * Rational(static_cast<long>(n)) * U / k.R;
        k.mu0 = Rational::ceil_sqrt(Rational(4) * (k.M * k.M + sum_c_sq));
        k.mu_f = k.R * k.Q /
                 (Rational(64) * Rational::pow(Rational(static_cast<long>(n) + 2), 2) *
                  Rational::pow(m1U, m + 2));
    } else {
        double md = static_cast<double>(m), nd = static_cast<double>(n);
        k.W = std::pow(md * U, md);
        double m1U = (md + 1.0) * U;
        k.R = 1.0 / (k.W * k.W) / (2.0 * nd * std::pow(m1U, 3.0 * (md + 1.0)));
        k.Q = k.R / (nd + 2.0);
        k.M = 4.0 * nd * U / k.R;
        k.mu0 = 2.0 * std::sqrt(k.M * k.M + sum_c_sq);
        k.mu_f = k.R * k.Q / (64.0 * (nd + 2.0) * (nd + 2.0) * std::pow(m1U, md + 2.0));
        for (double v : {k.W, k.R, k.Q, k.M, k.mu0, k.mu_f})
            if (!std::isfinite(v) || v == 0.0)
                throw Overflow("big-M constants exceed binary64 range");
    }
    return k;
}

/// The embedded problem
///   min c^T x + M x_{n+2}
///   s.t. A x + rho x_{n+2} = d,  e^T x + x_{n+1} + x_{n+2} = n+2,  x >= 0
/// with d = b/W and rho = d - A e; the all-ones vector is feasible.
template <class T>
struct AuxiliaryProblem {
    StandardLP<T> base;  // the original (preprocessed) problem
    StandardLP<T> aux;   // (m+1) x (n+2)
    DenseVector<T> d;
    DenseVector<T> rho;
    TheoreticalConstants<T> consts;

    std::size_t slack_index() const { return base.num_vars(); }       // x_{n+1}
    std::size_t artificial_index() const { return base.num_vars() + 1; }  // x_{n+2}
};

/// Index layout of the auxiliary dual (y, y_{m+1}; s, s_{n+1}, s_{n+2}).
struct AuxDualLayout {
    std::size_t extra_row;   // y_{m+1}
    std::size_t slack_col;   // s_{n+1}
    std::size_t artificial_col;  // s_{n+2}
};

template <class T>
AuxDualLayout aux_dual_layout(const AuxiliaryProblem<T>& ap) {
    return {ap.base.num_rows(), ap.slack_index(), ap.artificial_index()};
}

template <class T>
AuxiliaryProblem<T> build_auxiliary(const StandardLP<T>& p) {
    using Tr = ScalarTraits<T>;
    const std::size_t m = p.num_rows(), n = p.num_vars();
    if (m == 0 || n < m)
        throw std::invalid_argument("build_auxiliary: expects a preprocessed problem with n >= m >= 1");

    AuxiliaryProblem<T> ap;
    ap.base = p;
    ap.consts = compute_constants(p);

    ap.d = DenseVector<T>(m);
    for (std::size_t i = 0; i < m; ++i) ap.d[i] = p.b[i] / ap.consts.W;
    DenseVector<T> row_sums = p.A.apply(DenseVector<T>::ones(n));
    ap.rho = ap.d - row_sums;

    StandardLP<T>& a = ap.aux;
    a.A = DenseMatrix<T>(m + 1, n + 2);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) a.A(i, j) = p.A(i, j);
        a.A(i, n + 1) = ap.rho[i];
    }
    for (std::size_t j = 0; j < n; ++j) a.A(m, j) = Tr::one();
    a.A(m, n) = Tr::one();
    a.A(m, n + 1) = Tr::one();

    a.b = DenseVector<T>(m + 1);
    for (std::size_t i = 0; i < m; ++i) a.b[i] = ap.d[i];
    a.b[m] = T(static_cast<long>(n) + 2);

    a.c = DenseVector<T>(n + 2);
    for (std::size_t j = 0; j < n; ++j) a.c[j] = p.c[j];
    a.c[n + 1] = ap.consts.M;

    a.columns = p.columns;
    a.columns.push_back({ColumnOrigin::slack, m});
    a.columns.push_back({ColumnOrigin::artificial, 0});
    a.integral = false;  // d and rho are scaled by 1/W
    a.U = Tr::zero();
    return ap;
}

/// x = e, y = 0, y_{m+1} = -mu0, s = c + mu0 e, s_{n+1} = mu0,
/// s_{n+2} = M + mu0; satisfies (I1)-(I3) at mu = mu0 by construction.
template <class T>
Iterate<T> initial_iterate(const AuxiliaryProblem<T>& ap) {
    using Tr = ScalarTraits<T>;
    const std::size_t m = ap.base.num_rows(), n = ap.base.num_vars();
    Iterate<T> it;
    it.mu = ap.consts.mu0;
    it.x = DenseVector<T>::ones(n + 2);
    it.y = DenseVector<T>(m + 1);
    it.y[m] = -it.mu;
    it.s = DenseVector<T>(n + 2);
    for (std::size_t j = 0; j < n; ++j) it.s[j] = ap.base.c[j] + it.mu;
    it.s[n] = it.mu;
    it.s[n + 1] = ap.consts.M + it.mu;

    check_interior(ap.aux, it);
    T bound = Tr::one() / (Tr::one() + Tr::one() + Tr::one() + Tr::one());
    detail::check_sigma(it, bound, "initial_iterate: sigma above 1/2");
    return it;
}

/// Feasibility of "0^T x -> min, A x = 0, c^T x = -1, x >= 0" is equivalent
/// to unboundedness of a feasible problem; the caller solves the probe with
/// the full pipeline.
template <class T>
StandardLP<T> build_unboundedness_probe(const StandardLP<T>& p) {
    using Tr = ScalarTraits<T>;
    const std::size_t m = p.num_rows(), n = p.num_vars();
    StandardLP<T> probe;
    probe.A = DenseMatrix<T>(m + 1, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) probe.A(i, j) = p.A(i, j);
    for (std::size_t j = 0; j < n; ++j) probe.A(m, j) = p.c[j];
    probe.b = DenseVector<T>(m + 1);
    probe.b[m] = -Tr::one();
    probe.c = DenseVector<T>(n);
    probe.columns = p.columns;
    detail::refresh_integrality(probe);
    return probe;
}

} // namespace ipm

#endif
