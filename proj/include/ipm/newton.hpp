#ifndef IPM_NEWTON_HPP
#define IPM_NEWTON_HPP

#include "ipm/model.hpp"

namespace ipm {

/// Strictly interior primal-dual point with its barrier parameter.
template <class T>
struct Iterate {
    DenseVector<T> x;  // > 0
    DenseVector<T> y;
    DenseVector<T> s;  // > 0
    T mu;              // > 0
};

template <class T>
struct NewtonStep {
    DenseVector<T> h;  // primal direction, A h = 0
    DenseVector<T> k;  // dual direction
    DenseVector<T> f;  // slack direction, A^T k + f = 0
    T mu_prime;
};

/// sum_i (x_i s_i / mu - 1)^2. Squared so the rational backend never needs a
/// square root; all bound comparisons are against squared bounds.
template <class T>
T sigma_sq(const Iterate<T>& it) {
    using Tr = ScalarTraits<T>;
    T inv_mu = Tr::one() / it.mu;
    T acc = Tr::zero();
    for (std::size_t i = 0; i < it.x.size(); ++i) {
        T d = it.x[i] * it.s[i] * inv_mu - Tr::one();
        acc += d * d;
    }
    return acc;
}

/// Checks primal/dual feasibility and strict positivity of (x, s).
template <class T>
void check_interior(const StandardLP<T>& p, const Iterate<T>& it) {
    using Tr = ScalarTraits<T>;
    if (!(it.mu > Tr::zero())) throw InvariantBroken("mu <= 0");
    if (!it.x.all_positive()) throw InvariantBroken("x not strictly positive");
    if (!it.s.all_positive()) throw InvariantBroken("s not strictly positive");
    auto near_zero = [&](const T& v, const T& scale) {
        if constexpr (Tr::exact) return Tr::is_zero(v);
        else return Tr::abs_val(v) <= Tr::eps_res * (Tr::one() + Tr::abs_val(scale));
    };
    // Float residuals are judged against the magnitude of the cancelling
    // terms (backward error): big-M instances put huge values into y and the
    // penalty entry of c, and the roundoff they leave behind in a small
    // coordinate is bounded by the large operands, not by that coordinate.
    DenseVector<T> pr = p.A.apply(it.x);
    for (std::size_t i = 0; i < pr.size(); ++i)
        if (!near_zero(pr[i] - p.b[i], Tr::abs_val(pr[i]) + Tr::abs_val(p.b[i])))
            throw InvariantBroken("Ax != b");
    DenseVector<T> dr = p.A.apply_transpose(it.y);
    for (std::size_t j = 0; j < dr.size(); ++j)
        if (!near_zero(dr[j] + it.s[j] - p.c[j],
                       Tr::abs_val(dr[j]) + Tr::abs_val(it.s[j]) + Tr::abs_val(p.c[j])))
            throw InvariantBroken("A^T y + s != c");
}

namespace detail {

// Exact backend of solve_newton. The dual direction k carries denominators
// on the order of det(A diag(x/s) A^T) after clearing, and canonical rational
// arithmetic on such unrelated fractions spends nearly all its time in gcd
// normalization. Instead, x, s, and the rows of A are cleared to integers up
// front, the normal system is solved fraction-free, and k, f, and h are each
// assembled as one integer numerator over one shared denominator, paying a
// single canonicalization per entry.
inline NewtonStep<Rational> solve_newton_exact(const StandardLP<Rational>& p,
                                               const Iterate<Rational>& it,
                                               const Rational& mu_prime) {
    const std::size_t n = p.num_vars(), m = p.num_rows();

    std::vector<mpz_class> lambda(m), At(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        mpz_class l = 1;
        for (std::size_t j = 0; j < n; ++j) {
            mpz_class den = p.A(i, j).den();
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
        }
        lambda[i] = l;
        for (std::size_t j = 0; j < n; ++j)
            At[i * n + j] = p.A(i, j).num() * (l / p.A(i, j).den());
    }

    // xi/chi and sg/psi are x and s over common denominators.
    mpz_class chi = 1, psi = 1;
    for (std::size_t j = 0; j < n; ++j) {
        mpz_class dx = it.x[j].den(), ds = it.s[j].den();
        mpz_lcm(chi.get_mpz_t(), chi.get_mpz_t(), dx.get_mpz_t());
        mpz_lcm(psi.get_mpz_t(), psi.get_mpz_t(), ds.get_mpz_t());
    }
    std::vector<mpz_class> xi(n), sg(n);
    for (std::size_t j = 0; j < n; ++j) {
        xi[j] = it.x[j].num() * (chi / it.x[j].den());
        sg[j] = it.s[j].num() * (psi / it.s[j].den());
    }
    // Sp = prod_j sg_j and cofactors Sj = Sp / sg_j clear the 1/s_j terms.
    mpz_class Sp = 1;
    for (std::size_t j = 0; j < n; ++j) Sp *= sg[j];
    std::vector<mpz_class> Sj(n);
    for (std::size_t j = 0; j < n; ++j)
        mpz_divexact(Sj[j].get_mpz_t(), Sp.get_mpz_t(), sg[j].get_mpz_t());

    // d_j = x_j / s_j = xi_j psi Sj / (chi Sp).
    std::vector<mpz_class> P(n);
    for (std::size_t j = 0; j < n; ++j) P[j] = xi[j] * psi * Sj[j];
    const mpz_class q = chi * Sp;

    // rhs_i = b_i - mu' sum_j A_ij / s_j, with
    // sum_j A_ij / s_j = psi G_i / (lambda_i Sp), G_i = sum_j At_ij Sj.
    DenseVector<Rational> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        mpz_class G = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (At[i * n + j] != 0)
                mpz_addmul(G.get_mpz_t(), At[i * n + j].get_mpz_t(), Sj[j].get_mpz_t());
        rhs[i] = p.b[i] - mu_prime * Rational(mpq_class(psi * G, lambda[i] * Sp));
    }

    auto sol = solve_normal_equations_cleared(m, n, At, lambda, P, q, rhs);

    NewtonStep<Rational> st;
    st.mu_prime = mu_prime;
    st.k = DenseVector<Rational>(m);
    for (std::size_t i = 0; i < m; ++i)
        st.k[i] = Rational(mpq_class(lambda[i] * sol.K[i], sol.gamma));

    // f_j = -sum_i A_ij k_i = -F_j / gamma with F_j = sum_i At_ij K_i.
    std::vector<mpz_class> F(n, mpz_class(0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (At[i * n + j] != 0)
                mpz_addmul(F[j].get_mpz_t(), At[i * n + j].get_mpz_t(),
                           sol.K[i].get_mpz_t());
    st.f = DenseVector<Rational>(n);
    for (std::size_t j = 0; j < n; ++j)
        st.f[j] = Rational(mpq_class(-F[j], sol.gamma));

    // h_j = -d_j f_j + mu'/s_j - x_j over the shared denominator
    // chi sg_j gamma b, with mu' = a/b:
    //   h_j = (xi_j psi b F_j + a psi chi gamma - xi_j sg_j gamma b)
    //         / (chi sg_j gamma b).
    const mpz_class a = mu_prime.num(), b = mu_prime.den();
    const mpz_class psi_b = psi * b, mid = a * psi * chi * sol.gamma,
                    gamma_b = sol.gamma * b, chi_gb = chi * gamma_b;
    st.h = DenseVector<Rational>(n);
    mpz_class num;
    for (std::size_t j = 0; j < n; ++j) {
        num = mid;
        mpz_addmul(num.get_mpz_t(), mpz_class(xi[j] * psi_b).get_mpz_t(),
                   F[j].get_mpz_t());
        mpz_submul(num.get_mpz_t(), mpz_class(xi[j] * sg[j]).get_mpz_t(),
                   gamma_b.get_mpz_t());
        st.h[j] = Rational(mpq_class(num, chi_gb * sg[j]));
    }
    return st;
}

} // namespace detail

/// Solves the step system for target mu_prime via the normal equations:
///   k from (A diag(x/s) A^T) k = b - mu' A (1/s),  f = -A^T k,
///   h = -(x/s) f + mu' (1/s) - x.
template <class T>
NewtonStep<T> solve_newton(const StandardLP<T>& p, const Iterate<T>& it, const T& mu_prime) {
    using Tr = ScalarTraits<T>;
    const std::size_t n = p.num_vars(), m = p.num_rows();
    if (!(mu_prime > Tr::zero())) throw std::invalid_argument("solve_newton: mu_prime <= 0");

    if constexpr (std::is_same_v<T, Rational>)
        return detail::solve_newton_exact(p, it, mu_prime);

    DenseVector<T> inv_s(n), d(n);
    for (std::size_t i = 0; i < n; ++i) {
        inv_s[i] = Tr::one() / it.s[i];
        d[i] = it.x[i] * inv_s[i];
    }
    DenseVector<T> rhs(m);
    {
        DenseVector<T> a_inv_s = p.A.apply(inv_s);
        for (std::size_t j = 0; j < m; ++j) rhs[j] = p.b[j] - mu_prime * a_inv_s[j];
    }
    NewtonStep<T> st;
    st.mu_prime = mu_prime;
    st.k = solve_normal_equations(p.A, d, rhs);
    st.f = -p.A.apply_transpose(st.k);
    st.h = DenseVector<T>(n);
    for (std::size_t i = 0; i < n; ++i)
        st.h[i] = -d[i] * st.f[i] + mu_prime * inv_s[i] - it.x[i];
    return st;
}

/// Moves to (x+h, y+k, s+f) with mu updated to the step target. Positivity
/// of the updated point is the caller's responsibility but verified here.
template <class T>
Iterate<T> apply_step(const Iterate<T>& it, const NewtonStep<T>& st) {
    Iterate<T> next{it.x + st.h, it.y + st.k, it.s + st.f, st.mu_prime};
    if (!next.x.all_positive()) throw PositivityLost("x + h has a nonpositive coordinate");
    if (!next.s.all_positive()) throw PositivityLost("s + f has a nonpositive coordinate");
    return next;
}

} // namespace ipm

#endif
