#include <doctest.h>

#include "helpers.hpp"
#include "ipm/init.hpp"

using namespace ipm;
using testutil::q;
using testutil::qvec;

namespace {

StandardLP<Rational> running_example() {
    StandardLP<Rational> p;
    p.A = DenseMatrix<Rational>{{q(1), q(1)}};
    p.b = qvec({q(1)});
    p.c = qvec({q(-1), q(0)});
    p.columns = {{ColumnOrigin::original, 0}, {ColumnOrigin::original, 1}};
    detail::refresh_integrality(p);
    return p;
}

} // namespace

TEST_CASE("step rule parameters") {
    auto main4 = StepRule<Rational>::main_rule(4);
    CHECK(main4.delta == q(1, 16));
    CHECK(main4.sigma_sq_bound == q(1, 4));
    CHECK(main4.shrink_factor() == q(15, 16));

    // Non-square n uses the integer ceiling of the root.
    auto main5 = StepRule<Rational>::main_rule(5);
    CHECK(main5.delta == q(1, 24));

    auto alt = StepRule<Rational>::alternative_rule(4, q(1, 8));
    CHECK(alt.tau == q(1, 16));
    CHECK(alt.sigma_sq_bound == q(1, 64));
    CHECK(alt.shrink_factor() == q(15, 16));
    CHECK_THROWS_AS(StepRule<Rational>::alternative_rule(4, q(1, 5)),
                    std::invalid_argument);
}

TEST_CASE("advance from a centered iterate keeps the invariants") {
    StandardLP<Rational> p;
    p.A = DenseMatrix<Rational>{{q(1), q(1)}};
    p.b = qvec({q(2)});
    p.c = qvec({q(1), q(1)});
    Iterate<Rational> it{qvec({q(1), q(1)}), qvec({q(0)}), qvec({q(1), q(1)}), q(1)};

    auto rule = StepRule<Rational>::main_rule(2);
    auto next = advance(p, it, rule);
    CHECK(sigma_sq(next) <= q(1, 4));
    CHECK(next.mu == rule.shrink_factor() * it.mu);
    CHECK(dot(next.x, next.s) == q(2) * next.mu);
    CHECK(dot(p.c, next.x) - dot(p.b, next.y) == q(2) * next.mu);
}

TEST_CASE("advance on the embedded running example passes exact checks") {
    auto aux = build_auxiliary(running_example());
    auto it = initial_iterate(aux);
    auto rule = StepRule<Rational>::main_rule(4);
    auto next = advance(aux.aux, it, rule);
    CHECK_NOTHROW(check_interior(aux.aux, next));
    CHECK(sigma_sq(next) <= q(1, 4));
    CHECK(dot(next.x, next.s) == q(4) * next.mu);
}

TEST_CASE("advance rejects an off-path start") {
    StandardLP<Rational> p;
    p.A = DenseMatrix<Rational>{{q(1), q(1)}};
    p.b = qvec({q(5)});
    p.c = qvec({q(1), q(1)});
    // x s products 4 and 1 at mu = 1: sigma^2 = 9 > 1/4.
    Iterate<Rational> it{qvec({q(4), q(1)}), qvec({q(0)}), qvec({q(1), q(1)}), q(1)};
    CHECK_THROWS_AS(advance(p, it, StepRule<Rational>::main_rule(2)), InvariantBroken);
}

TEST_CASE("follow_path takes exactly 3 iterations to a 3-step target") {
    auto aux = build_auxiliary(running_example());
    auto it = initial_iterate(aux);
    auto rule = StepRule<Rational>::main_rule(4);
    Rational shrink = rule.shrink_factor();
    Rational target = it.mu * shrink * shrink * shrink;

    auto res = follow_path(aux.aux, it, rule, target);
    CHECK(res.iterations == 3);
    CHECK(res.final.mu == target);
}

TEST_CASE("follow_path returns immediately when the target is already met") {
    auto aux = build_auxiliary(running_example());
    auto it = initial_iterate(aux);
    auto res = follow_path(aux.aux, it, StepRule<Rational>::main_rule(4), it.mu);
    CHECK(res.iterations == 0);
    CHECK(res.final.mu == it.mu);
}

TEST_CASE("iteration count tracks the closed-form bound at n_hat = 4") {
    auto aux = build_auxiliary(running_example());
    auto it = initial_iterate(aux);
    auto rule = StepRule<Rational>::main_rule(4);  // delta = 1/16
    Rational target = it.mu / q(1000000);
    auto res = follow_path(aux.aux, it, rule, target);

    double bound = std::ceil(std::log(1e6) / -std::log(1.0 - 1.0 / 16.0)) + 1.0;
    CHECK(static_cast<double>(res.iterations) <= bound);
    CHECK(res.iterations >= 200);  // ~ln(1e6)/delta = 221 up to rounding
}

TEST_CASE("trace rows obey the geometric mu law and the gap law") {
    auto aux = build_auxiliary(running_example());
    auto it = initial_iterate(aux);
    auto rule = StepRule<Rational>::main_rule(4);
    FollowOptions<Rational> opts;
    opts.record_trace = true;
    auto res = follow_path(aux.aux, it, rule, it.mu * Rational::pow(rule.shrink_factor(), 20),
                           opts);
    REQUIRE(res.trace.rows.size() == 20);
    Rational mu = it.mu;
    for (const auto& row : res.trace.rows) {
        mu *= rule.shrink_factor();
        CHECK(row.mu == mu);
        CHECK(row.gap == q(4) * row.mu);
        CHECK(row.sigma_sq <= q(1, 4));
        CHECK(row.min_xs >= row.mu / q(2));
        CHECK(row.max_xs <= q(3) * row.mu / q(2));
    }
}

TEST_CASE("alternative rule centers first, then holds sigma below delta") {
    auto aux = build_auxiliary(running_example());
    auto it = initial_iterate(aux);
    auto rule = StepRule<Rational>::alternative_rule(4, q(1, 8));
    FollowOptions<Rational> opts;
    opts.sample_interval = 1;
    std::size_t violations = 0;
    bool past_warmup = false;
    opts.sampler = [&](const Iterate<Rational>& cur) {
        past_warmup = true;
        if (!(sigma_sq(cur) <= rule.sigma_sq_bound)) ++violations;
    };
    Rational target = it.mu / q(1 << 20);
    auto res = follow_path(aux.aux, it, rule, target, opts);
    CHECK(res.warmup_iterations > 0);
    CHECK(past_warmup);
    CHECK(violations == 0);
    CHECK(sigma_sq(res.final) <= rule.sigma_sq_bound);
    CHECK(res.final.mu <= target);
}

TEST_CASE("compaction preserves every exact property while bounding size") {
    auto aux = build_auxiliary(running_example());
    auto it = initial_iterate(aux);
    auto rule = StepRule<Rational>::main_rule(4);

    // Take raw Newton steps without compaction, then compact once.
    Iterate<Rational> cur = it;
    for (int t = 0; t < 6; ++t) cur = advance(aux.aux, cur, rule);
    IterateCompactor comp(aux.aux);
    auto small = comp.compact(cur, rule.sigma_sq_bound, q(4));

    CHECK_NOTHROW(check_interior(aux.aux, small));
    CHECK(sigma_sq(small) <= rule.sigma_sq_bound);
    CHECK(dot(small.x, small.s) == q(4) * small.mu);
    // Six steps leave mu well within the working precision: no rounding yet.
    CHECK(small.mu == cur.mu);
}

TEST_CASE("follow_path keeps iterate bit sizes bounded over long runs") {
    auto aux = build_auxiliary(running_example());
    auto it = initial_iterate(aux);
    auto rule = StepRule<Rational>::main_rule(4);
    auto res = follow_path(aux.aux, it, rule, it.mu / Rational::pow(q(2), 60));
    for (std::size_t j = 0; j < res.final.x.size(); ++j) {
        CHECK(mpz_sizeinbase(res.final.x[j].num().get_mpz_t(), 2) < 4000);
        CHECK(mpz_sizeinbase(res.final.x[j].den().get_mpz_t(), 2) < 4000);
    }
}

TEST_CASE("iteration cap raises IterationLimit") {
    auto aux = build_auxiliary(running_example());
    auto it = initial_iterate(aux);
    FollowOptions<Rational> opts;
    opts.max_iterations = 2;
    CHECK_THROWS_AS(follow_path(aux.aux, it, StepRule<Rational>::main_rule(4),
                                it.mu / q(1000), opts),
                    IterationLimit);
}
