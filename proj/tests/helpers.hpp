#ifndef TESTS_HELPERS_HPP
#define TESTS_HELPERS_HPP

#include <random>

#include "ipm/solver.hpp"

namespace testutil {

using ipm::DenseMatrix;
using ipm::DenseVector;
using ipm::Rational;

inline Rational q(long num, long den = 1) { return Rational(num, den); }

inline DenseVector<Rational> qvec(std::initializer_list<Rational> init) {
    return DenseVector<Rational>(init);
}

/// Uniform integer matrix with entries in [-mag, mag].
inline DenseMatrix<Rational> random_int_matrix(std::mt19937& rng, std::size_t rows,
                                               std::size_t cols, long mag) {
    std::uniform_int_distribution<long> d(-mag, mag);
    DenseMatrix<Rational> m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = Rational(d(rng));
    return m;
}

inline DenseVector<Rational> random_int_vector(std::mt19937& rng, std::size_t len, long mag) {
    std::uniform_int_distribution<long> d(-mag, mag);
    DenseVector<Rational> v(len);
    for (std::size_t i = 0; i < len; ++i) v[i] = Rational(d(rng));
    return v;
}

/// Random standard-form LP with integer data, the acceptance-scale shape.
inline ipm::StandardLP<Rational> random_standard_lp(std::mt19937& rng, std::size_t m,
                                                    std::size_t n, long mag) {
    ipm::StandardLP<Rational> p;
    p.A = random_int_matrix(rng, m, n, mag);
    p.b = random_int_vector(rng, m, mag);
    p.c = random_int_vector(rng, n, mag);
    for (std::size_t j = 0; j < n; ++j)
        p.columns.push_back({ipm::ColumnOrigin::original, j});
    ipm::detail::refresh_integrality(p);
    return p;
}

/// Random strictly interior iterate that is exactly feasible for a derived
/// problem: b and c are computed from (x, y, s), so (I1) and (I2) hold by
/// construction.
template <class T>
struct FeasibleInstance {
    ipm::StandardLP<T> p;
    ipm::Iterate<T> it;
};

inline FeasibleInstance<Rational> random_feasible_instance(std::mt19937& rng, std::size_t m,
                                                           std::size_t n, long mag) {
    for (;;) {
        FeasibleInstance<Rational> f;
        f.p.A = random_int_matrix(rng, m, n, mag);
        if (ipm::rank(f.p.A) != m) continue;
        std::uniform_int_distribution<long> pos(1, mag);
        std::uniform_int_distribution<long> den(1, 4);
        f.it.x = DenseVector<Rational>(n);
        f.it.s = DenseVector<Rational>(n);
        for (std::size_t j = 0; j < n; ++j) {
            f.it.x[j] = Rational(pos(rng), den(rng));
            f.it.s[j] = Rational(pos(rng), den(rng));
        }
        f.it.y = random_int_vector(rng, m, mag);
        f.p.b = f.p.A.apply(f.it.x);
        f.p.c = f.p.A.apply_transpose(f.it.y) + f.it.s;
        for (std::size_t j = 0; j < n; ++j)
            f.p.columns.push_back({ipm::ColumnOrigin::original, j});
        ipm::detail::refresh_integrality(f.p);
        Rational xs = dot(f.it.x, f.it.s);
        f.it.mu = xs / Rational(static_cast<long>(n));
        return f;
    }
}

template <class T>
bool vectors_equal(const DenseVector<T>& a, const DenseVector<T>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i] == b[i])) return false;
    return true;
}

} // namespace testutil

#endif
