#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "ipm/io.hpp"

using namespace ipm;
using testutil::q;
using testutil::qvec;

TEST_CASE("parse_lp reads the running example") {
    auto lp = parse_lp("min -1 x1 + 0 x2\ns.t.\n1 x1 + 1 x2 = 1\n");
    CHECK(lp.sense == ObjectiveSense::minimize);
    REQUIRE(lp.num_vars() == 2);
    CHECK(testutil::vectors_equal(lp.objective, qvec({q(-1), q(0)})));
    REQUIRE(lp.rows.size() == 1);
    CHECK(testutil::vectors_equal(lp.rows[0].coeffs, qvec({q(1), q(1)})));
    CHECK(lp.rows[0].sense == ConstraintSense::eq);
    CHECK(lp.rows[0].rhs == q(1));
}

TEST_CASE("parse_lp accepts bare variables, fractions, and semicolons") {
    auto lp = parse_lp("max 2 profit; subject to profit <= 3; 1/2 profit >= -1/4");
    CHECK(lp.sense == ObjectiveSense::maximize);
    REQUIRE(lp.num_vars() == 1);
    CHECK(lp.objective[0] == q(2));
    REQUIRE(lp.rows.size() == 2);
    CHECK(lp.rows[0].coeffs[0] == q(1));
    CHECK(lp.rows[0].sense == ConstraintSense::le);
    CHECK(lp.rows[1].coeffs[0] == q(1, 2));
    CHECK(lp.rows[1].sense == ConstraintSense::ge);
    CHECK(lp.rows[1].rhs == q(-1, 4));
}

TEST_CASE("parse_lp handles comments, decimals, and repeated terms") {
    auto lp = parse_lp("# objective\nmin 0.5 a + a - b\nst\n2 a - 0.25 b = 1 # row\n");
    CHECK(lp.objective[0] == q(3, 2));  // 0.5 a + a accumulates
    CHECK(lp.objective[1] == q(-1));
    CHECK(lp.rows[0].coeffs[1] == q(-1, 4));
}

TEST_CASE("parse_lp reports malformed input with positions") {
    CHECK_THROWS_AS(parse_lp(""), ParseError);
    CHECK_THROWS_AS(parse_lp("minimize x1\nx1 = 1\n"), ParseError);  // unknown sense word
    CHECK_THROWS_AS(parse_lp("min x1\nx1 + = 1\n"), ParseError);
    CHECK_THROWS_AS(parse_lp("min x1\nx1 1\n"), ParseError);  // missing relation
    CHECK_THROWS_AS(parse_lp("min x1\nx1 = \n"), ParseError);  // missing rhs
    try {
        parse_lp("min x1\nx1 @ 1\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("emit then parse reproduces the problem exactly") {
    std::mt19937 rng(67);
    std::uniform_int_distribution<int> sense(0, 2);
    for (int t = 0; t < 25; ++t) {
        GeneralLP<Rational> lp;
        lp.sense = t % 2 ? ObjectiveSense::maximize : ObjectiveSense::minimize;
        std::size_t n = 1 + t % 4, m = 1 + t % 3;
        lp.objective = DenseVector<Rational>(n);
        for (std::size_t j = 0; j < n; ++j)
            lp.objective[j] = Rational(sense(rng) - 1, 1 + t % 3);
        for (std::size_t i = 0; i < m; ++i) {
            typename GeneralLP<Rational>::Row r;
            r.coeffs = DenseVector<Rational>(n);
            for (std::size_t j = 0; j < n; ++j)
                r.coeffs[j] = Rational(sense(rng) - 1, 1 + (t + static_cast<int>(j)) % 2);
            r.sense = static_cast<ConstraintSense>(sense(rng));
            r.rhs = Rational(sense(rng) - 1);
            lp.rows.push_back(std::move(r));
        }
        auto back = parse_lp(emit_lp(lp));
        CHECK(back.sense == lp.sense);
        CHECK(testutil::vectors_equal(back.objective, lp.objective));
        REQUIRE(back.rows.size() == lp.rows.size());
        for (std::size_t i = 0; i < m; ++i) {
            CHECK(testutil::vectors_equal(back.rows[i].coeffs, lp.rows[i].coeffs));
            CHECK(back.rows[i].sense == lp.rows[i].sense);
            CHECK(back.rows[i].rhs == lp.rows[i].rhs);
        }
    }
}

namespace {

const char* kMps =
    "* sample\n"
    "NAME          SAMPLE\n"
    "ROWS\n"
    " N  COST\n"
    " E  R1\n"
    " L  R2\n"
    "COLUMNS\n"
    "    X1  COST  -1  R1  1\n"
    "    X1  R2  2\n"
    "    X2  R1  1  R2  -1\n"
    "RHS\n"
    "    RHS1  R1  1  R2  4\n"
    "ENDATA\n";

} // namespace

TEST_CASE("parse_mps reads the supported subset") {
    auto lp = parse_mps(kMps);
    CHECK(lp.sense == ObjectiveSense::minimize);
    REQUIRE(lp.num_vars() == 2);
    CHECK(testutil::vectors_equal(lp.objective, qvec({q(-1), q(0)})));
    REQUIRE(lp.rows.size() == 2);
    CHECK(lp.rows[0].sense == ConstraintSense::eq);
    CHECK(testutil::vectors_equal(lp.rows[0].coeffs, qvec({q(1), q(1)})));
    CHECK(lp.rows[0].rhs == q(1));
    CHECK(lp.rows[1].sense == ConstraintSense::le);
    CHECK(testutil::vectors_equal(lp.rows[1].coeffs, qvec({q(2), q(-1)})));
    CHECK(lp.rows[1].rhs == q(4));
}

TEST_CASE("parse_mps rejects what the model cannot express") {
    CHECK_THROWS_AS(parse_mps("ROWS\n N C\nBOUNDS\nENDATA\n"), FreeVariableUnsupported);
    CHECK_THROWS_AS(parse_mps("ROWS\n N C\nRANGES\nENDATA\n"), FreeVariableUnsupported);
    CHECK_THROWS_AS(parse_mps("ROWS\n N C\nCOLUMNS\n"), ParseError);  // no ENDATA
    CHECK_THROWS_AS(parse_mps("MYSTERY\nENDATA\n"), ParseError);
    CHECK_THROWS_AS(parse_mps("ROWS\n N C\n N C2\nENDATA\n"), ParseError);
}

TEST_CASE("to_float converts every field") {
    auto lp = parse_lp("max 1/2 a - b; a + 2 b <= 3");
    auto f = to_float(lp);
    CHECK(f.sense == ObjectiveSense::maximize);
    CHECK(f.objective[0] == doctest::Approx(0.5));
    CHECK(f.objective[1] == doctest::Approx(-1.0));
    CHECK(f.rows[0].coeffs[1] == doctest::Approx(2.0));
    CHECK(f.rows[0].rhs == doctest::Approx(3.0));
}

TEST_CASE("trace rows serialize as one JSON object per line") {
    Trace<Rational> tr;
    tr.rows.push_back({1, q(1, 2), q(1, 16), q(2), q(1, 3), q(2, 3)});
    tr.rows.push_back({2, q(1, 4), q(0), q(1), q(1, 4), q(1, 4)});
    std::ostringstream os;
    write_trace(os, tr);

    std::istringstream in(os.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    auto j = nlohmann::json::parse(line);
    CHECK(j["t"] == 1);
    CHECK(j["mu"] == "1/2");
    CHECK(j["sigma_sq"] == "1/16");
    CHECK(j["gap"] == "2");
    CHECK(j["min_xs"] == "1/3");
    CHECK(j["max_xs"] == "2/3");
    REQUIRE(std::getline(in, line));
    CHECK(nlohmann::json::parse(line)["mu"] == "1/4");
    CHECK_FALSE(std::getline(in, line));
}

TEST_CASE("float traces use numeric JSON values") {
    Trace<double> tr;
    tr.rows.push_back({1, 0.5, 0.0625, 2.0, 0.33, 0.66});
    std::ostringstream os;
    write_trace(os, tr);
    auto j = nlohmann::json::parse(os.str());
    CHECK(j["mu"].is_number());
    CHECK(j["mu"] == doctest::Approx(0.5));
}

TEST_CASE("certificate JSON round trips for all three kinds") {
    SUBCASE("optimal") {
        OptimalCertificate o{qvec({q(1), q(0)}), qvec({q(-1)}), qvec({q(0), q(1)}), q(-1)};
        auto back = certificate_from_json(certificate_to_json(Certificate{o}));
        auto* ob = std::get_if<OptimalCertificate>(&back);
        REQUIRE(ob != nullptr);
        CHECK(testutil::vectors_equal(ob->x, o.x));
        CHECK(testutil::vectors_equal(ob->y, o.y));
        CHECK(testutil::vectors_equal(ob->s, o.s));
        CHECK(ob->objective == o.objective);
    }
    SUBCASE("unbounded") {
        UnboundedCertificate u{qvec({q(0), q(0)}), qvec({q(1), q(1)})};
        auto back = certificate_from_json(certificate_to_json(Certificate{u}));
        auto* ub = std::get_if<UnboundedCertificate>(&back);
        REQUIRE(ub != nullptr);
        CHECK(testutil::vectors_equal(ub->ray, u.ray));
    }
    SUBCASE("infeasible via farkas") {
        InfeasibleCertificate inf{qvec({q(-2), q(1)}), std::nullopt};
        auto back = certificate_from_json(certificate_to_json(Certificate{inf}));
        auto* ib = std::get_if<InfeasibleCertificate>(&back);
        REQUIRE(ib != nullptr);
        REQUIRE(ib->farkas_rows.has_value());
        CHECK(testutil::vectors_equal(*ib->farkas_rows, *inf.farkas_rows));
    }
    SUBCASE("infeasible without witness is rejected") {
        nlohmann::json j;
        j["status"] = "infeasible";
        CHECK_THROWS_AS(certificate_from_json(j), ParseError);
        j["status"] = "mystery";
        CHECK_THROWS_AS(certificate_from_json(j), ParseError);
    }
}
