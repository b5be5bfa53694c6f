#ifndef IPM_SOLVER_HPP
#define IPM_SOLVER_HPP

#include "ipm/rounding.hpp"

namespace ipm {

enum class SolveStatus { optimal, infeasible, unbounded };

enum class RuleKind { main, alternative };

struct ExactOptions {
    RuleKind rule = RuleKind::main;
    Rational alt_delta = Rational(1, 6);
    bool record_trace = false;
    std::uint64_t max_iterations = 0;  // 0: derive from the theoretical bound
    std::optional<Rational> mu_target;  // override; default mu_f
};

namespace detail {

/// Scales rows (and the objective) by positive integers so all data is
/// integral: row scaling preserves the feasible set, the objective scale is
/// undone on the way out.
template <class T>
struct ScaledProblem {
    StandardLP<T> p;
    DenseVector<T> row_scale;  // lambda_i > 0, integer
    T obj_scale;               // gamma > 0, integer
};

inline Rational lcm_denominator(const Rational& acc, const Rational& v) {
    mpz_class l;
    mpz_lcm(l.get_mpz_t(), acc.num().get_mpz_t(), v.den().get_mpz_t());
    return Rational(l);
}

template <class T>
ScaledProblem<T> clear_denominators(const StandardLP<T>& in) {
    using Tr = ScalarTraits<T>;
    const std::size_t m = in.num_rows(), n = in.num_vars();
    ScaledProblem<T> out;
    out.p = in;
    out.row_scale = DenseVector<T>(m);

    auto scale_of = [&](auto visit_entries) -> T {
        if constexpr (Tr::exact) {
            Rational l = Rational(1);
            visit_entries([&](const T& v) { l = lcm_denominator(l, v); });
            return l;
        } else {
            double s = 1.0;
            bool ok = false;
            for (int tries = 0; tries <= 60 && !ok; ++tries, s *= 2.0) {
                ok = true;
                visit_entries([&](const T& v) {
                    if (std::floor(v * s) != v * s) ok = false;
                });
                if (ok) return s;
            }
            throw Overflow("clear_denominators: entries are not small dyadics");
        }
    };

    for (std::size_t i = 0; i < m; ++i) {
        T lam = scale_of([&](auto f) {
            for (std::size_t j = 0; j < n; ++j) f(in.A(i, j));
            f(in.b[i]);
        });
        out.row_scale[i] = lam;
        for (std::size_t j = 0; j < n; ++j) out.p.A(i, j) = in.A(i, j) * lam;
        out.p.b[i] = in.b[i] * lam;
    }
    out.obj_scale = scale_of([&](auto f) {
        for (std::size_t j = 0; j < n; ++j) f(in.c[j]);
    });
    for (std::size_t j = 0; j < n; ++j) out.p.c[j] = in.c[j] * out.obj_scale;
    refresh_integrality(out.p);
    return out;
}

} // namespace detail

/// Outcome of the pipeline on one standard-form problem. The certificate
/// refers to the problem as given (dual values on rows dropped during
/// preprocessing are zero).
struct PipelineResult {
    std::optional<Certificate> certificate;
    bool feasible = false;                       // feasibility-only mode
    std::optional<DenseVector<Rational>> point;  // feasibility-only mode
    Trace<Rational> trace;
    std::uint64_t iterations = 0;
};

namespace detail {

inline std::uint64_t default_iteration_cap(const TheoreticalConstants<Rational>& k,
                                           std::size_t n_hat) {
    double steps = 8.0 * std::sqrt(static_cast<double>(n_hat)) *
                   (k.mu0.log_approx() - k.mu_f.log_approx());
    return static_cast<std::uint64_t>(steps * 2.0) + 200;
}

} // namespace detail

/// Runs the full exact pipeline on a standard-form problem: integral scaling,
/// row reduction, big-M embedding, path following to mu_f, rounding, and
/// classification via the unboundedness probe. With feasibility_only the run
/// stops once feasibility is decided and reports a feasible point.
inline PipelineResult solve_standard(const StandardLP<Rational>& input,
                                     const ExactOptions& opts = {},
                                     bool feasibility_only = false) {
    const std::size_t n = input.num_vars();
    PipelineResult res;

    auto scaled = detail::clear_denominators(input);
    const StandardLP<Rational>& p = scaled.p;
    const Rational& gamma = scaled.obj_scale;

    auto red = row_reduce(p.A, p.b);
    if (red.inconsistent) {
        if (feasibility_only) return res;
        DenseVector<Rational> w(input.num_rows());
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = scaled.row_scale[i] * red.farkas[i];
        res.certificate = InfeasibleCertificate{std::move(w), std::nullopt};
        return res;
    }

    if (red.rank == 0) {
        // Feasible region is the whole nonnegative orthant.
        if (feasibility_only) {
            res.feasible = true;
            res.point = DenseVector<Rational>(n);
            return res;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (p.c[j].is_negative()) {
                UnboundedCertificate u;
                u.feasible_point = DenseVector<Rational>(n);
                u.ray = DenseVector<Rational>(n);
                u.ray[j] = -Rational(1) / input.c[j];
                res.certificate = std::move(u);
                return res;
            }
        }
        OptimalCertificate c;
        c.x = DenseVector<Rational>(n);
        c.y = DenseVector<Rational>(input.num_rows());
        c.s = input.c;
        c.objective = Rational(0);
        res.certificate = std::move(c);
        return res;
    }

    StandardLP<Rational> reduced;
    reduced.A = red.reduced;
    reduced.b = red.reduced_rhs;
    reduced.c = p.c;
    reduced.columns = p.columns;
    detail::refresh_integrality(reduced);

    AuxiliaryProblem<Rational> aux = build_auxiliary(reduced);
    Iterate<Rational> it0 = initial_iterate(aux);

    const std::size_t n_hat = n + 2;
    StepRule<Rational> rule = opts.rule == RuleKind::main
                                  ? StepRule<Rational>::main_rule(n_hat)
                                  : StepRule<Rational>::alternative_rule(n_hat, opts.alt_delta);
    FollowOptions<Rational> fo;
    fo.record_trace = opts.record_trace;
    fo.strict_target = true;
    fo.max_iterations = opts.max_iterations
                            ? opts.max_iterations
                            : detail::default_iteration_cap(aux.consts, n_hat);
    Rational target = opts.mu_target.value_or(aux.consts.mu_f);
    if (target > aux.consts.mu_f) target = aux.consts.mu_f;

    FollowResult<Rational> fr = follow_path(aux.aux, it0, rule, target, fo);
    res.trace = std::move(fr.trace);
    res.iterations = fr.iterations + fr.warmup_iterations;

    SupportSplit sp = split_support(aux, fr.final);
    AuxOptimalPair opt = extract_optimal(aux, fr.final, sp);

    bool aux_infeasible = opt.x[aux.artificial_index()].is_positive();
    if (feasibility_only) {
        if (aux_infeasible) return res;
        res.feasible = true;
        res.point = DenseVector<Rational>(n);
        for (std::size_t j = 0; j < n; ++j) (*res.point)[j] = aux.consts.W * opt.x[j];
        return res;
    }

    if (aux_infeasible) {
        // Certified because any feasible solution of the base problem yields
        // an auxiliary point with objective at most nU (vertex bound W).
        Rational floor_bound =
            Rational(static_cast<long>(reduced.num_vars())) * reduced.U;
        if (!(opt.objective > floor_bound))
            throw RoundingFailed("solve_standard: artificial positive but aux optimum <= nU");
        res.certificate = InfeasibleCertificate{std::nullopt, std::move(opt)};
        return res;
    }

    // The unboundedness probe is its own full path-following run, so it is
    // skipped whenever the box-row multiplier already vanishes: in that case
    // classify builds a fully self-verified optimal pair, which rules out an
    // unbounded objective outright.
    bool ray_exists = false;
    std::optional<UnboundedCertificate> witness;
    if (!opt.y[aux.aux.num_rows() - 1].is_zero()) {
        StandardLP<Rational> probe = build_unboundedness_probe(reduced);
        ExactOptions probe_opts = opts;
        probe_opts.mu_target.reset();
        probe_opts.record_trace = false;
        probe_opts.max_iterations = 0;
        PipelineResult probe_res = solve_standard(probe, probe_opts, /*feasibility_only=*/true);
        ray_exists = probe_res.feasible;
        if (ray_exists) {
            UnboundedCertificate u;
            u.feasible_point = DenseVector<Rational>(n);
            for (std::size_t j = 0; j < n; ++j)
                u.feasible_point[j] = aux.consts.W * opt.x[j];
            u.ray = *probe_res.point;  // A r = 0, (gamma c)^T r = -1 over scaled data
            witness = std::move(u);
        }
    }

    Certificate cert = classify(aux, opt, ray_exists, witness);

    // Map back to the input problem: undo the objective scale, restore the
    // dropped rows with zero dual values, undo the feasible-set-neutral row
    // scaling on the dual.
    if (auto* o = std::get_if<OptimalCertificate>(&cert)) {
        OptimalCertificate out;
        out.x = o->x;
        out.y = DenseVector<Rational>(input.num_rows());
        for (std::size_t i = 0; i < red.kept_rows.size(); ++i) {
            std::size_t r = red.kept_rows[i];
            out.y[r] = scaled.row_scale[r] * o->y[i] / gamma;
        }
        out.s = DenseVector<Rational>(n);
        for (std::size_t j = 0; j < n; ++j) out.s[j] = o->s[j] / gamma;
        out.objective = o->objective / gamma;
        res.certificate = std::move(out);
    } else if (auto* u = std::get_if<UnboundedCertificate>(&cert)) {
        UnboundedCertificate out;
        out.feasible_point = u->feasible_point;
        out.ray = gamma * u->ray;  // restores c^T ray = -1 for the input c
        res.certificate = std::move(out);
    } else {
        res.certificate = std::move(cert);
    }
    return res;
}

/// Exact verification of a certificate against a standard-form problem.
/// Throws InvariantBroken with a description on any failure.
inline SolveStatus verify_certificate(const StandardLP<Rational>& p, const Certificate& cert) {
    if (const auto* o = std::get_if<OptimalCertificate>(&cert)) {
        if (o->x.size() != p.num_vars() || o->y.size() != p.num_rows() ||
            o->s.size() != p.num_vars())
            throw InvariantBroken("certificate: dimension mismatch");
        if (!o->x.all_nonnegative()) throw InvariantBroken("certificate: x has negative entry");
        if (!o->s.all_nonnegative()) throw InvariantBroken("certificate: s has negative entry");
        if (!(p.A.apply(o->x) == p.b)) throw InvariantBroken("certificate: A x != b");
        DenseVector<Rational> dr = p.A.apply_transpose(o->y);
        for (std::size_t j = 0; j < p.num_vars(); ++j)
            if (dr[j] + o->s[j] != p.c[j])
                throw InvariantBroken("certificate: A^T y + s != c");
        if (dot(p.c, o->x) != o->objective)
            throw InvariantBroken("certificate: stated objective != c^T x");
        if (dot(p.b, o->y) != o->objective)
            throw InvariantBroken("certificate: b^T y != objective (strong duality)");
        if (!dot(o->x, o->s).is_zero())
            throw InvariantBroken("certificate: x^T s != 0");
        return SolveStatus::optimal;
    }
    if (const auto* u = std::get_if<UnboundedCertificate>(&cert)) {
        if (u->feasible_point.size() != p.num_vars() || u->ray.size() != p.num_vars())
            throw InvariantBroken("certificate: dimension mismatch");
        if (!u->feasible_point.all_nonnegative())
            throw InvariantBroken("certificate: feasible point has negative entry");
        if (!(p.A.apply(u->feasible_point) == p.b))
            throw InvariantBroken("certificate: feasible point violates A x = b");
        if (!u->ray.all_nonnegative()) throw InvariantBroken("certificate: ray has negative entry");
        DenseVector<Rational> ar = p.A.apply(u->ray);
        for (std::size_t i = 0; i < ar.size(); ++i)
            if (!ar[i].is_zero()) throw InvariantBroken("certificate: A ray != 0");
        if (dot(p.c, u->ray) != Rational(-1))
            throw InvariantBroken("certificate: c^T ray != -1");
        return SolveStatus::unbounded;
    }
    const auto& inf = std::get<InfeasibleCertificate>(cert);
    if (inf.farkas_rows) {
        const auto& w = *inf.farkas_rows;
        if (w.size() != p.num_rows()) throw InvariantBroken("certificate: dimension mismatch");
        DenseVector<Rational> comb = p.A.apply_transpose(w);
        for (std::size_t j = 0; j < comb.size(); ++j)
            if (!comb[j].is_zero()) throw InvariantBroken("certificate: w^T A != 0");
        if (dot(p.b, w).is_zero()) throw InvariantBroken("certificate: w^T b = 0");
        return SolveStatus::infeasible;
    }
    if (!inf.aux_witness) throw InvariantBroken("certificate: infeasible with no witness");
    // The auxiliary witness is re-derivable: rebuild the embedding the solver
    // used and check the pair is optimal with a positive artificial value and
    // objective above the feasibility ceiling nU.
    auto scaled = detail::clear_denominators(p);
    auto red = row_reduce(scaled.p.A, scaled.p.b);
    if (red.inconsistent)
        throw InvariantBroken("certificate: aux witness given but rows already inconsistent");
    StandardLP<Rational> reduced;
    reduced.A = red.reduced;
    reduced.b = red.reduced_rhs;
    reduced.c = scaled.p.c;
    reduced.columns = scaled.p.columns;
    detail::refresh_integrality(reduced);
    AuxiliaryProblem<Rational> aux = build_auxiliary(reduced);
    const auto& wpair = *inf.aux_witness;
    DualSolution<Rational> d{wpair.y, wpair.s};
    if (!duality_gap(aux.aux, wpair.x, d).is_zero())
        throw InvariantBroken("certificate: aux witness pair is not optimal");
    if (!wpair.x[aux.artificial_index()].is_positive())
        throw InvariantBroken("certificate: aux witness artificial value not positive");
    Rational ceiling = Rational(static_cast<long>(reduced.num_vars())) * reduced.U;
    if (!(dot(aux.aux.c, wpair.x) > ceiling))
        throw InvariantBroken("certificate: aux witness objective not above nU");
    return SolveStatus::infeasible;
}

/// User-level result: certificate over the standardized problem plus the
/// original-variable view with the objective in the user's sense.
struct ExactSolveResult {
    SolveStatus status;
    Certificate certificate;
    StandardLP<Rational> standardized;
    std::optional<Rational> objective;            // user sense
    std::optional<DenseVector<Rational>> x;       // original variables
    std::optional<DenseVector<Rational>> ray;     // original variables
    Trace<Rational> trace;
    std::uint64_t iterations = 0;
};

inline ExactSolveResult solve(const GeneralLP<Rational>& g, const ExactOptions& opts = {}) {
    ExactSolveResult res;
    res.standardized = to_standard_form(g);
    PipelineResult pr = solve_standard(res.standardized, opts);
    res.trace = std::move(pr.trace);
    res.iterations = pr.iterations;
    res.certificate = std::move(*pr.certificate);
    res.status = verify_certificate(res.standardized, res.certificate);

    const std::size_t n0 = g.num_vars();
    auto originals = [&](const DenseVector<Rational>& v) {
        DenseVector<Rational> out(n0);
        for (std::size_t j = 0; j < n0; ++j) out[j] = v[j];
        return out;
    };
    if (const auto* o = std::get_if<OptimalCertificate>(&res.certificate)) {
        res.x = originals(o->x);
        res.objective = g.sense == ObjectiveSense::maximize ? -o->objective : o->objective;
    } else if (const auto* u = std::get_if<UnboundedCertificate>(&res.certificate)) {
        res.x = originals(u->feasible_point);
        res.ray = originals(u->ray);
    }
    return res;
}

struct FloatOptions {
    RuleKind rule = RuleKind::main;
    double alt_delta = 1.0 / 6.0;
    bool record_trace = false;
    std::uint64_t max_iterations = 0;
    std::optional<double> mu_target;  // absolute; default 1e-8 * mu0
    std::size_t check_interval = 16;
};

/// Approximate solve: no certificate and no rounding, just path following to
/// the requested barrier value with the duality gap reported via the exact
/// gap law gap = n_hat * mu.
struct FloatSolveResult {
    DenseVector<double> x;   // original variables
    double objective;        // user sense
    double gap;              // (n+2) * mu at the auxiliary level
    double mu_final;
    double artificial;       // large value suggests infeasibility
    Trace<double> trace;
    std::uint64_t iterations = 0;
};

inline FloatSolveResult solve_float(const GeneralLP<double>& g, const FloatOptions& opts = {}) {
    StandardLP<double> std_form = to_standard_form(g);
    auto scaled = detail::clear_denominators(std_form);
    auto red = row_reduce(scaled.p.A, scaled.p.b);
    if (red.inconsistent) throw NotFeasible("solve_float: inconsistent equality rows");
    if (red.rank == 0) throw std::invalid_argument("solve_float: no effective constraints");

    StandardLP<double> reduced;
    reduced.A = red.reduced;
    reduced.b = red.reduced_rhs;
    reduced.c = scaled.p.c;
    reduced.columns = scaled.p.columns;
    detail::refresh_integrality(reduced);

    AuxiliaryProblem<double> aux = build_auxiliary(reduced);
    Iterate<double> it0 = initial_iterate(aux);
    const std::size_t n_hat = reduced.num_vars() + 2;
    StepRule<double> rule = opts.rule == RuleKind::main
                                ? StepRule<double>::main_rule(n_hat)
                                : StepRule<double>::alternative_rule(n_hat, opts.alt_delta);
    FollowOptions<double> fo;
    fo.record_trace = opts.record_trace;
    fo.float_check_interval = opts.check_interval;
    fo.max_iterations = opts.max_iterations ? opts.max_iterations : 1000000;
    double target = opts.mu_target.value_or(1e-8 * aux.consts.mu0);

    FollowResult<double> fr = follow_path(aux.aux, it0, rule, target, fo);

    FloatSolveResult res;
    res.trace = std::move(fr.trace);
    res.iterations = fr.iterations + fr.warmup_iterations;
    res.mu_final = fr.final.mu;
    res.gap = static_cast<double>(n_hat) * fr.final.mu;
    res.artificial = aux.consts.W * fr.final.x[aux.artificial_index()];
    res.x = DenseVector<double>(g.num_vars());
    double obj = 0.0;
    for (std::size_t j = 0; j < g.num_vars(); ++j) {
        res.x[j] = aux.consts.W * fr.final.x[j];
        obj += g.objective[j] * res.x[j];
    }
    res.objective = obj;
    return res;
}

} // namespace ipm

#endif
