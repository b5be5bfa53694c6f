#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "ipm/io.hpp"
#include "ipm/oracle.hpp"

using namespace ipm;
using testutil::q;
using testutil::qvec;

namespace {

GeneralLP<Rational> running_general() {
    GeneralLP<Rational> lp;
    lp.sense = ObjectiveSense::minimize;
    lp.objective = qvec({q(-1), q(0)});
    lp.rows.push_back({qvec({q(1), q(1)}), ConstraintSense::eq, q(1)});
    return lp;
}

} // namespace

TEST_CASE("solve finds the exact optimum of the running example") {
    auto res = solve(running_general());
    CHECK(res.status == SolveStatus::optimal);
    REQUIRE(res.objective.has_value());
    CHECK(*res.objective == q(-1));
    REQUIRE(res.x.has_value());
    CHECK(testutil::vectors_equal(*res.x, qvec({q(1), q(0)})));

    // Iteration count respects the closed-form bound for delta = 1/(8 ceil sqrt(n_hat)).
    auto k = compute_constants(res.standardized);
    double delta = 1.0 / 16.0;
    double bound =
        std::ceil((k.mu0.log_approx() - k.mu_f.log_approx()) / -std::log1p(-delta)) + 1.0;
    CHECK(static_cast<double>(res.iterations) <= bound);
    CHECK(res.iterations > 0);
}

TEST_CASE("solve certifies infeasibility two ways") {
    SUBCASE("inconsistent equalities give a row combination") {
        GeneralLP<Rational> lp;
        lp.sense = ObjectiveSense::minimize;
        lp.objective = qvec({q(0), q(0)});
        lp.rows.push_back({qvec({q(1), q(1)}), ConstraintSense::eq, q(1)});
        lp.rows.push_back({qvec({q(2), q(2)}), ConstraintSense::eq, q(3)});
        auto res = solve(lp);
        CHECK(res.status == SolveStatus::infeasible);
        const auto& inf = std::get<InfeasibleCertificate>(res.certificate);
        REQUIRE(inf.farkas_rows.has_value());
    }
    SUBCASE("a consistent but empty region gives an auxiliary witness") {
        GeneralLP<Rational> lp;
        lp.sense = ObjectiveSense::minimize;
        lp.objective = qvec({q(0), q(0)});
        lp.rows.push_back({qvec({q(1), q(1)}), ConstraintSense::eq, q(-1)});
        auto res = solve(lp);
        CHECK(res.status == SolveStatus::infeasible);
        const auto& inf = std::get<InfeasibleCertificate>(res.certificate);
        CHECK(inf.aux_witness.has_value());
    }
}

TEST_CASE("solve certifies unboundedness with a feasible point and a ray") {
    GeneralLP<Rational> lp;
    lp.sense = ObjectiveSense::minimize;
    lp.objective = qvec({q(-1), q(0)});
    lp.rows.push_back({qvec({q(1), q(-1)}), ConstraintSense::eq, q(0)});
    auto res = solve(lp);
    CHECK(res.status == SolveStatus::unbounded);
    REQUIRE(res.ray.has_value());
    CHECK((*res.ray)[0] == (*res.ray)[1]);
    CHECK((*res.ray)[0].is_positive());
}

TEST_CASE("a maximization problem reports the objective in the user's sense") {
    GeneralLP<Rational> lp;
    lp.sense = ObjectiveSense::maximize;
    lp.objective = qvec({q(2)});
    lp.rows.push_back({qvec({q(1)}), ConstraintSense::le, q(3)});
    auto res = solve(lp);
    CHECK(res.status == SolveStatus::optimal);
    CHECK(*res.objective == q(6));
    CHECK((*res.x)[0] == q(3));
}

TEST_CASE("inequality rows flow through slacks to an exact certificate") {
    GeneralLP<Rational> lp;
    lp.sense = ObjectiveSense::minimize;
    lp.objective = qvec({q(1), q(2)});
    lp.rows.push_back({qvec({q(1), q(1)}), ConstraintSense::ge, q(2)});
    lp.rows.push_back({qvec({q(1), q(-1)}), ConstraintSense::le, q(4)});
    auto res = solve(lp);
    CHECK(res.status == SolveStatus::optimal);
    CHECK(*res.objective == q(2));
    CHECK(testutil::vectors_equal(*res.x, qvec({q(2), q(0)})));
}

TEST_CASE("verify_certificate rejects corrupted certificates") {
    auto res = solve(running_general());
    const auto& p = res.standardized;

    auto good = std::get<OptimalCertificate>(res.certificate);
    CHECK(verify_certificate(p, good) == SolveStatus::optimal);

    auto bad_obj = good;
    bad_obj.objective += q(1);
    CHECK_THROWS_AS(verify_certificate(p, bad_obj), InvariantBroken);

    auto bad_x = good;
    bad_x.x[0] = q(-1);
    CHECK_THROWS_AS(verify_certificate(p, bad_x), InvariantBroken);

    auto bad_s = good;
    bad_s.s[1] += q(1);
    CHECK_THROWS_AS(verify_certificate(p, bad_s), InvariantBroken);
}

TEST_CASE("certificates survive a JSON round trip and still verify") {
    auto res = solve(running_general());
    auto j = certificate_to_json(res.certificate);
    auto back = certificate_from_json(j);
    CHECK(verify_certificate(res.standardized, back) == SolveStatus::optimal);
}

TEST_CASE("clear_denominators scales rows and objective to integers") {
    StandardLP<Rational> p;
    p.A = DenseMatrix<Rational>{{q(1, 2), q(1, 3)}, {q(1), q(2)}};
    p.b = qvec({q(1, 6), q(3)});
    p.c = qvec({q(1, 4), q(2)});
    detail::refresh_integrality(p);
    REQUIRE_FALSE(p.integral);

    auto s = detail::clear_denominators(p);
    CHECK(s.p.integral);
    CHECK(s.row_scale[0] == q(6));
    CHECK(s.row_scale[1] == q(1));
    CHECK(s.obj_scale == q(4));
    CHECK(s.p.A(0, 0) == q(3));
    CHECK(s.p.A(0, 1) == q(2));
    CHECK(s.p.b[0] == q(1));
    CHECK(s.p.c[0] == q(1));
    CHECK(s.p.c[1] == q(8));
}

TEST_CASE("non-integral data still produces a verified exact certificate") {
    GeneralLP<Rational> lp;
    lp.sense = ObjectiveSense::minimize;
    lp.objective = qvec({q(-1, 2), q(0)});
    lp.rows.push_back({qvec({q(1, 3), q(1, 3)}), ConstraintSense::eq, q(1, 3)});
    auto res = solve(lp);
    CHECK(res.status == SolveStatus::optimal);
    CHECK(*res.objective == q(-1, 2));
    CHECK(testutil::vectors_equal(*res.x, qvec({q(1), q(0)})));
}

TEST_CASE("solve_standard decides feasibility without classifying") {
    StandardLP<Rational> p;
    p.A = DenseMatrix<Rational>{{q(1), q(1)}};
    p.b = qvec({q(1)});
    p.c = qvec({q(-1), q(0)});
    p.columns = {{ColumnOrigin::original, 0}, {ColumnOrigin::original, 1}};
    detail::refresh_integrality(p);
    auto res = solve_standard(p, {}, /*feasibility_only=*/true);
    CHECK(res.feasible);
    REQUIRE(res.point.has_value());
    CHECK(testutil::vectors_equal(p.A.apply(*res.point), p.b));
    CHECK(res.point->all_nonnegative());
    CHECK_FALSE(res.certificate.has_value());

    p.b[0] = q(-1);
    detail::refresh_integrality(p);
    auto inf = solve_standard(p, {}, /*feasibility_only=*/true);
    CHECK_FALSE(inf.feasible);
}

TEST_CASE("rank-zero systems are solved directly") {
    SUBCASE("nonnegative objective: the origin is optimal") {
        StandardLP<Rational> p;
        p.A = DenseMatrix<Rational>(1, 2);
        p.b = qvec({q(0)});
        p.c = qvec({q(1), q(0)});
        p.columns = {{ColumnOrigin::original, 0}, {ColumnOrigin::original, 1}};
        detail::refresh_integrality(p);
        auto res = solve_standard(p);
        CHECK(verify_certificate(p, *res.certificate) == SolveStatus::optimal);
        CHECK(std::get<OptimalCertificate>(*res.certificate).objective == q(0));
    }
    SUBCASE("negative objective entry: a coordinate ray escapes") {
        StandardLP<Rational> p;
        p.A = DenseMatrix<Rational>(1, 2);
        p.b = qvec({q(0)});
        p.c = qvec({q(1), q(-2)});
        p.columns = {{ColumnOrigin::original, 0}, {ColumnOrigin::original, 1}};
        detail::refresh_integrality(p);
        auto res = solve_standard(p);
        CHECK(verify_certificate(p, *res.certificate) == SolveStatus::unbounded);
    }
}

TEST_CASE("the alternative rule reaches the same certificate") {
    ExactOptions opts;
    opts.rule = RuleKind::alternative;
    opts.alt_delta = q(1, 8);
    auto res = solve(running_general(), opts);
    CHECK(res.status == SolveStatus::optimal);
    CHECK(*res.objective == q(-1));
    CHECK(testutil::vectors_equal(*res.x, qvec({q(1), q(0)})));
}

TEST_CASE("random instances agree with the oracle") {
    std::mt19937 rng(61);
    int done = 0;
    while (done < 15) {
        auto p = testutil::random_standard_lp(rng, 2, 4, 2);
        auto verdict = oracle_solve(p);
        auto res = solve_standard(p);
        REQUIRE(res.certificate.has_value());
        auto status = verify_certificate(p, *res.certificate);
        switch (verdict.status) {
            case OracleStatus::optimal:
                CHECK(status == SolveStatus::optimal);
                CHECK(std::get<OptimalCertificate>(*res.certificate).objective ==
                      *verdict.objective);
                break;
            case OracleStatus::infeasible:
                CHECK(status == SolveStatus::infeasible);
                break;
            case OracleStatus::unbounded:
                CHECK(status == SolveStatus::unbounded);
                break;
        }
        ++done;
    }
}

TEST_CASE("float mode reaches the requested gap on the running example") {
    GeneralLP<double> lp;
    lp.sense = ObjectiveSense::minimize;
    lp.objective = DenseVector<double>{-1.0, 0.0};
    lp.rows.push_back({DenseVector<double>{1.0, 1.0}, ConstraintSense::eq, 1.0});

    FloatOptions opts;
    opts.mu_target = 1e-7;
    auto res = solve_float(lp, opts);
    CHECK(res.mu_final <= 1e-7);
    CHECK(res.gap == doctest::Approx(4.0 * res.mu_final));
    CHECK(res.objective == doctest::Approx(-1.0).epsilon(1e-4));
    CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(res.x[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-4));
    CHECK(res.artificial <= 1e-4);
}

TEST_CASE("float mode flags an infeasible instance via the artificial value") {
    GeneralLP<double> lp;
    lp.sense = ObjectiveSense::minimize;
    lp.objective = DenseVector<double>{0.0, 0.0};
    lp.rows.push_back({DenseVector<double>{1.0, 1.0}, ConstraintSense::eq, -1.0});
    auto res = solve_float(lp);
    CHECK(res.artificial > 0.1);
}

TEST_CASE("the exact iteration cap triggers IterationLimit") {
    ExactOptions opts;
    opts.max_iterations = 3;
    CHECK_THROWS_AS(solve(running_general(), opts), IterationLimit);
}
