#ifndef IPM_PATH_HPP
#define IPM_PATH_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>

#include "ipm/newton.hpp"

namespace ipm {

/// Short-step schedule. The main rule shrinks mu by (1 - delta) with
/// delta = 1/(8 sqrt(n)) and keeps sigma <= 1/2; the alternative rule uses
/// mu' = (1 - tau) mu with tau = delta/sqrt(n) and keeps sigma <= delta
/// for delta <= 1/6.
template <class T>
struct StepRule {
    enum class Variant { main, alternative };
    Variant variant;
    T delta;
    T tau;             // alternative only
    T sigma_sq_bound;  // 1/4 (main) or delta^2 (alternative)

    T shrink_factor() const {
        return ScalarTraits<T>::one() - (variant == Variant::main ? delta : tau);
    }

    /// In rational mode sqrt(n) is replaced by ceil(sqrt(n)); the smaller
    /// delta only loosens the invariant-preservation requirement.
    static StepRule main_rule(std::size_t n_hat) {
        StepRule r;
        r.variant = Variant::main;
        if constexpr (ScalarTraits<T>::exact) {
            T root = Rational::ceil_sqrt(Rational(static_cast<long>(n_hat)));
            r.delta = Rational(1) / (Rational(8) * root);
            r.sigma_sq_bound = Rational(1, 4);
        } else {
            r.delta = 1.0 / (8.0 * std::sqrt(static_cast<double>(n_hat)));
            r.sigma_sq_bound = 0.25;
        }
        r.tau = ScalarTraits<T>::zero();
        return r;
    }

    static StepRule alternative_rule(std::size_t n_hat, T delta) {
        if (!(delta * T(6) <= ScalarTraits<T>::one()))
            throw std::invalid_argument("alternative rule needs delta <= 1/6");
        StepRule r;
        r.variant = Variant::alternative;
        r.delta = delta;
        if constexpr (ScalarTraits<T>::exact) {
            T root = Rational::ceil_sqrt(Rational(static_cast<long>(n_hat)));
            r.tau = delta / root;
        } else {
            r.tau = delta / std::sqrt(static_cast<double>(n_hat));
        }
        r.sigma_sq_bound = delta * delta;
        return r;
    }
};

template <class T>
struct TraceRow {
    std::uint64_t t;
    T mu;
    T sigma_sq;
    T gap;
    T min_xs;
    T max_xs;
    bool alternative_phase;
};

template <class T>
struct Trace {
    std::vector<TraceRow<T>> rows;
};

/// Rewrites an exact iterate with bounded-size rationals while preserving
/// Ax = b, A^T y + s = c, positivity, the sigma bound, and the exact duality
/// gap. Without this the bit length of Newton iterates grows exponentially
/// with the iteration count.
class IterateCompactor {
public:
    explicit IterateCompactor(const StandardLP<Rational>& p) : p_(&p) {
        basis_ = independent_columns(p.A);
        if (basis_.size() != p.num_rows())
            throw SingularSystem("IterateCompactor: A does not have full row rank");
        std::vector<bool> in_basis(p.num_vars(), false);
        for (std::size_t j : basis_) in_basis[j] = true;
        for (std::size_t j = 0; j < p.num_vars(); ++j)
            if (!in_basis[j]) free_.push_back(j);

        DenseMatrix<Rational> AB = p.A.select_cols(basis_);
        const std::size_t m = p.num_rows();
        inv_AB_ = DenseMatrix<Rational>(m, m);
        for (std::size_t j = 0; j < m; ++j) {
            DenseVector<Rational> e(m);
            e[j] = Rational(1);
            DenseVector<Rational> col = solve_unique(AB, e);
            for (std::size_t i = 0; i < m; ++i) inv_AB_(i, j) = col[i];
        }
        // Null-space directions through each free column, used for the exact
        // gap restoration.
        for (std::size_t j : free_)
            null_dirs_.push_back(-inv_AB_.apply(p.A.col(j)));
    }

    /// n_hat is the gap multiplier: the compacted iterate carries the exact
    /// duality gap n_hat * mu (the value after a Newton step).
    Iterate<Rational> compact(const Iterate<Rational>& it, const Rational& sigma_sq_bound,
                              const Rational& n_hat) const {
        long mu_mag = it.mu.ceil_log2_abs();
        for (long guard = 160; guard <= 1280; guard *= 2) {
            unsigned long bits =
                static_cast<unsigned long>(std::max<long>(guard, guard - mu_mag));
            auto out = try_compact(it, sigma_sq_bound, n_hat, bits);
            if (out) return *out;
        }
        return it;  // give up; correctness is unaffected, only size
    }

private:
    static unsigned long rational_bits(const Rational& v) {
        return mpz_sizeinbase(v.num().get_mpz_t(), 2) +
               mpz_sizeinbase(v.den().get_mpz_t(), 2);
    }

    std::optional<Iterate<Rational>> try_compact(const Iterate<Rational>& it,
                                                 const Rational& sigma_sq_bound,
                                                 const Rational& n_hat,
                                                 unsigned long bits) const {
        const auto& p = *p_;
        const std::size_t n = p.num_vars(), m = p.num_rows();

        // Round mu itself once its exact representation outgrows the working
        // precision: carrying mu = (1 - delta)^t mu0 exactly would add bits
        // linearly in t and leak into every coordinate through the gap
        // restoration. All invariants below are verified against the rounded
        // value, so exactness is preserved relative to the mu actually carried.
        Rational mu = it.mu;
        if (rational_bits(mu) > bits + 64) {
            mu = it.mu.round_dyadic(bits);
            if (!mu.is_positive()) return std::nullopt;
        }
        Rational gap_target = n_hat * mu;

        DenseVector<Rational> y(m);
        for (std::size_t i = 0; i < m; ++i) y[i] = it.y[i].round_dyadic(bits);
        DenseVector<Rational> s = p.c - p.A.apply_transpose(y);
        if (!s.all_positive()) return std::nullopt;

        DenseVector<Rational> x = it.x;
        for (std::size_t j : free_) x[j] = x[j].round_dyadic(bits);
        {
            DenseVector<Rational> rhs = p.b;
            for (std::size_t j : free_) {
                if (x[j].is_zero()) continue;
                for (std::size_t i = 0; i < m; ++i) rhs[i] -= p.A(i, j) * x[j];
            }
            DenseVector<Rational> xb = inv_AB_.apply(rhs);
            for (std::size_t t = 0; t < m; ++t) x[basis_[t]] = xb[t];
        }

        // Restore the exact gap along a null-space direction.
        Rational deficit = gap_target - dot(x, s);
        if (!deficit.is_zero()) {
            bool fixed = false;
            for (std::size_t fi = 0; fi < free_.size(); ++fi) {
                Rational denom = s[free_[fi]];
                for (std::size_t t = 0; t < m; ++t) denom += null_dirs_[fi][t] * s[basis_[t]];
                if (denom.is_zero()) continue;
                Rational alpha = deficit / denom;
                x[free_[fi]] += alpha;
                for (std::size_t t = 0; t < m; ++t) x[basis_[t]] += alpha * null_dirs_[fi][t];
                fixed = true;
                break;
            }
            if (!fixed) return std::nullopt;
        }

        if (!x.all_positive()) return std::nullopt;
        Iterate<Rational> out{std::move(x), std::move(y), std::move(s), mu};
        if (!(sigma_sq(out) <= sigma_sq_bound)) return std::nullopt;
        return out;
    }

    const StandardLP<Rational>* p_;
    std::vector<std::size_t> basis_;
    std::vector<std::size_t> free_;
    DenseMatrix<Rational> inv_AB_;
    std::vector<DenseVector<Rational>> null_dirs_;
};

namespace detail {

template <class T>
void check_sigma(const Iterate<T>& it, const T& bound, const char* what) {
    using Tr = ScalarTraits<T>;
    T s2 = sigma_sq(it);
    if constexpr (Tr::exact) {
        if (!(s2 <= bound)) throw InvariantBroken(what);
    } else {
        if (!(s2 <= bound * (1.0 + Tr::eps_res))) throw InvariantBroken(what);
    }
}

} // namespace detail

/// One short step: shrink mu, solve the Newton system, move. Asserts the
/// invariants before and after.
template <class T>
Iterate<T> advance(const StandardLP<T>& p, const Iterate<T>& it, const StepRule<T>& rule,
                   bool full_checks = true) {
    detail::check_sigma(it, rule.sigma_sq_bound, "advance precondition: sigma above bound");
    T mu_prime = rule.shrink_factor() * it.mu;
    NewtonStep<T> st = solve_newton(p, it, mu_prime);
    Iterate<T> next = apply_step(it, st);
    if constexpr (!ScalarTraits<T>::exact) {
        // Re-derive s from the dual identity each step: roundoff injected in
        // f while y still carries big-M-scale values would otherwise persist
        // in s unchanged after the iterate has shrunk by many orders of
        // magnitude. The rewrite moves s by at most the accumulated drift,
        // which is far below mu-scale coordinates over the float mode's
        // supported mu range.
        DenseVector<T> dr = p.A.apply_transpose(next.y);
        for (std::size_t j = 0; j < next.s.size(); ++j) next.s[j] = p.c[j] - dr[j];
        if (!next.s.all_positive())
            throw PositivityLost("s + f has a nonpositive coordinate");
        // Likewise project x back onto Ax = b through the well-conditioned
        // AA^T system; without this, normal-solve residuals under the huge
        // spread of x/s accumulate as primal drift. The leftover error lies
        // in null(A), where the sigma checks police it.
        DenseVector<T> pres = p.A.apply(next.x);
        for (std::size_t i = 0; i < pres.size(); ++i) pres[i] -= p.b[i];
        DenseVector<T> unit(next.x.size());
        for (std::size_t j = 0; j < unit.size(); ++j) unit[j] = ScalarTraits<T>::one();
        DenseVector<T> corr = p.A.apply_transpose(solve_normal_equations(p.A, unit, pres));
        for (std::size_t j = 0; j < next.x.size(); ++j) next.x[j] -= corr[j];
        if (!next.x.all_positive())
            throw PositivityLost("x + h has a nonpositive coordinate");
    }
    if (full_checks) {
        detail::check_sigma(next, rule.sigma_sq_bound, "advance: sigma bound lost");
        check_interior(p, next);
    }
    return next;
}

template <class T>
struct FollowOptions {
    bool record_trace = false;
    std::uint64_t max_iterations = 1000000;
    // Continue past an exact hit of mu_target so the result satisfies
    // mu < mu_target strictly.
    bool strict_target = false;
    std::size_t float_check_interval = 16;
    // Invoked on selected iterates (for invariant auditing).
    std::function<void(const Iterate<T>&)> sampler;
    std::uint64_t sample_interval = 0;
};

template <class T>
struct FollowResult {
    Iterate<T> final;
    Trace<T> trace;
    std::uint64_t iterations = 0;
    std::uint64_t warmup_iterations = 0;  // main-rule steps taken before an
                                          // alternative-rule phase
};

/// Follows the central path until mu drops to (strictly below, when
/// strict_target) mu_target. For the alternative rule, a starting iterate
/// with sigma above delta is first centered with main-rule steps.
template <class T>
FollowResult<T> follow_path(const StandardLP<T>& p, const Iterate<T>& start,
                            const StepRule<T>& rule, const T& mu_target,
                            const FollowOptions<T>& opts = {}) {
    using Tr = ScalarTraits<T>;
    const std::size_t n_hat = p.num_vars();
    const T n_hat_s = T(static_cast<long>(n_hat));

    std::optional<IterateCompactor> compactor;
    if constexpr (Tr::exact) compactor.emplace(p);

    FollowResult<T> res;
    res.final = start;
    check_interior(p, res.final);

    StepRule<T> main = StepRule<T>::main_rule(n_hat);
    const bool alt = rule.variant == StepRule<T>::Variant::alternative;
    if (alt) {
        detail::check_sigma(res.final, main.sigma_sq_bound,
                            "follow_path: start violates even the main bound");
        std::uint64_t warm = 0;
        while (!(sigma_sq(res.final) <= rule.sigma_sq_bound)) {
            if (++warm > 100)
                throw InvariantBroken("follow_path: centering warmup did not converge");
            res.final = advance(p, res.final, main, /*full_checks=*/false);
            if constexpr (Tr::exact)
                res.final = compactor->compact(res.final, main.sigma_sq_bound, n_hat_s);
            detail::check_sigma(res.final, main.sigma_sq_bound, "warmup: sigma bound lost");
            if constexpr (Tr::exact) check_interior(p, res.final);
        }
        res.warmup_iterations = warm;
    } else {
        detail::check_sigma(res.final, rule.sigma_sq_bound,
                            "follow_path: start violates sigma bound");
    }

    auto step_once = [&]() {
        res.final = advance(p, res.final, rule, /*full_checks=*/false);
        if constexpr (Tr::exact)
            res.final = compactor->compact(res.final, rule.sigma_sq_bound, n_hat_s);
        ++res.iterations;
        detail::check_sigma(res.final, rule.sigma_sq_bound, "follow_path: sigma bound lost");
        if constexpr (Tr::exact) {
            check_interior(p, res.final);
        } else {
            if (!res.final.x.all_positive() || !res.final.s.all_positive())
                throw InvariantBroken("follow_path: positivity lost");
            if (opts.float_check_interval &&
                res.iterations % opts.float_check_interval == 0)
                check_interior(p, res.final);
        }
        if (opts.record_trace) {
            TraceRow<T> row;
            row.t = res.iterations;
            row.mu = res.final.mu;
            row.sigma_sq = sigma_sq(res.final);
            row.gap = dot(p.c, res.final.x) - dot(p.b, res.final.y);
            row.min_xs = res.final.x[0] * res.final.s[0];
            row.max_xs = row.min_xs;
            for (std::size_t i = 1; i < n_hat; ++i) {
                T v = res.final.x[i] * res.final.s[i];
                if (v < row.min_xs) row.min_xs = v;
                if (v > row.max_xs) row.max_xs = v;
            }
            row.alternative_phase = alt;
            res.trace.rows.push_back(row);
        }
        if (opts.sampler && opts.sample_interval &&
            res.iterations % opts.sample_interval == 0)
            opts.sampler(res.final);
    };

    while (res.final.mu > mu_target) {
        if (res.iterations >= opts.max_iterations)
            throw IterationLimit("follow_path: hit iteration cap");
        step_once();
    }
    if (opts.strict_target && res.final.mu == mu_target) step_once();
    if constexpr (!Tr::exact) check_interior(p, res.final);
    return res;
}

} // namespace ipm

#endif
