#include <algorithm>
#include <cmath>
#include <random>
#include <variant>

#include "doctest.h"

#include "fdde/dynamics.hpp"
#include "fdde/errors.hpp"

using namespace fdde;

namespace {

bool contains(const std::vector<double>& roots, double x) {
    return std::any_of(roots.begin(), roots.end(), [x](double r) { return std::abs(r - x) <= 1e-10; });
}

} // namespace

TEST_CASE("builtins agree with their printed formulas") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (const auto& id : builtin_ids()) {
        const Rhs2 direct = Rhs2::builtin(id);
        const Rhs2 parsed = Rhs2::parsed(direct.formula());
        CHECK(direct.origin() == Rhs2::Origin::Builtin);
        CHECK(parsed.origin() == Rhs2::Origin::Parsed);
        for (int i = 0; i < 50; ++i) {
            const double x = u(rng);
            const double y = u(rng);
            CAPTURE(id);
            CHECK(direct(x, y) == doctest::Approx(parsed(x, y)).epsilon(1e-13).scale(1.0));
        }
    }
    CHECK_THROWS_AS(Rhs2::builtin("nope"), ConfigError);
}

TEST_CASE("parsed right-hand side of the chaotic example") {
    const Rhs2 f = Rhs2::parsed("x - x^2 + 5*xd - xd^3");
    CHECK(f(2.0, 2.0) == 0.0);
    CHECK(f.source() == "x - x^2 + 5*xd - xd^3");
    REQUIRE(f.expression().has_value());
    const Rhs2 id = Rhs2::parsed("x");
    CHECK(id(4.5, -1.0) == 4.5);
    CHECK_THROWS_AS(Rhs2::parsed("x*(1+"), SyntaxError);
}

TEST_CASE("linear right-hand side") {
    const Rhs2 f = Rhs2::linear({-1.5, -5.0});
    CHECK(f(2.0, 1.0) == -8.0);
    CHECK(f.formula() == "-1.5*x - 5*xd");
    CHECK(Rhs2::linear({9, -9.03})(1.0, 1.0) == doctest::Approx(-0.03));
}

TEST_CASE("find_equilibria") {
    const auto ex2 = find_equilibria(Rhs2::builtin("ex2"), -5, 5);
    CHECK(contains(ex2, 0.0));
    const auto sec5 = find_equilibria(Rhs2::parsed("x - x^2 + 5*xd - xd^3"), -5, 5);
    CHECK(contains(sec5, 2.0));
    CHECK(contains(sec5, -3.0));
    const auto simple = find_equilibria(Rhs2::parsed("x + xd - 2"), -5, 5);
    REQUIRE(simple.size() == 1);
    CHECK(simple[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(find_equilibria(Rhs2::parsed("x*x + 1"), -5, 5).empty());
    // The pole of 1/x is a sign change but not a root.
    CHECK(find_equilibria(Rhs2::parsed("1/x"), -1, 1.5).empty());
    CHECK_THROWS_AS(find_equilibria(Rhs2::parsed("x"), 1, 1), ConfigError);
    CHECK_THROWS_AS(find_equilibria(Rhs2::parsed("x"), 0, 1, 1), ConfigError);

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int i = 0; i < 50; ++i) {
        const double r1 = u(rng), r2 = u(rng), r3 = u(rng);
        const Rhs2 f = Rhs2::parsed("(x - " + std::to_string(r1) + ")*(xd - " + std::to_string(r2) + ")*(x + xd - " +
                                    std::to_string(2 * r3) + ")");
        const auto roots = find_equilibria(f, -5, 5);
        CHECK(std::is_sorted(roots.begin(), roots.end()));
        for (double r : roots) CHECK(std::abs(f(r, r)) <= equilibrium_residual);
    }
}

TEST_CASE("linearize worked examples") {
    const Equilibrium e2 = linearize(Rhs2::builtin("ex2"), 0.0);
    CHECK(e2.a == doctest::Approx(-9.0).epsilon(1e-9));
    CHECK(e2.b == doctest::Approx(-10.9).epsilon(1e-9));
    const Equilibrium e5 = linearize(Rhs2::parsed("x - x^2 + 5*xd - xd^3"), 2.0);
    CHECK(std::abs(e5.a + 3.0) <= 1e-8 * 3.0);
    CHECK(std::abs(e5.b + 7.0) <= 1e-8 * 7.0);
    const Equilibrium e1 = linearize(Rhs2::parsed("2*x - x^2 - xd^3 - 4*xd"), 0.0);
    CHECK(std::abs(e1.a - 2.0) <= 1e-8 * 2.0);
    CHECK(std::abs(e1.b + 4.0) <= 1e-8 * 4.0);
}

TEST_CASE("linearize accuracy on random polynomials") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> c(-5.0, 5.0), pt(-4.0, 4.0);
    for (int i = 0; i < 200; ++i) {
        const double c1 = c(rng), c2 = c(rng), c3 = c(rng), c4 = c(rng), c5 = c(rng), x0 = pt(rng);
        auto s = [](double v) { return "(" + std::to_string(v) + ")"; };
        const Rhs2 f = Rhs2::parsed(s(c1) + "*x + " + s(c2) + "*x^2 + " + s(c3) + "*xd + " + s(c4) + "*xd^3 + " +
                                    s(c5) + "*x*xd");
        const double C1 = std::stod(std::to_string(c1)), C2 = std::stod(std::to_string(c2)),
                     C3 = std::stod(std::to_string(c3)), C4 = std::stod(std::to_string(c4)),
                     C5 = std::stod(std::to_string(c5));
        const double a_exact = C1 + 2 * C2 * x0 + C5 * x0;
        const double b_exact = C3 + 3 * C4 * x0 * x0 + C5 * x0;
        const Equilibrium e = linearize(f, x0);
        CAPTURE(i);
        CHECK(std::abs(e.a - a_exact) <= 1e-8 * std::max(1.0, std::abs(a_exact)));
        CHECK(std::abs(e.b - b_exact) <= 1e-8 * std::max(1.0, std::abs(b_exact)));
    }
}

TEST_CASE("analyze_equilibrium") {
    const Rhs2 sec5 = Rhs2::parsed("x - x^2 + 5*xd - xd^3");
    const auto r = analyze_equilibrium(sec5, 2.0, FractionalOrder(0.27), Delay(0.31));
    CHECK(r.region.tag == Region::DS1);
    CHECK(r.verdict == Verdict::Unstable);
    REQUIRE(r.critical.has_value());
    CHECK(std::get<critical::Threshold>(*r.critical).alpha0 == doctest::Approx(0.93776792890221349).epsilon(1e-7));

    const auto w = analyze_equilibrium(Rhs2::builtin("ex2"), 0.0, FractionalOrder(0.7), Delay(0.45));
    CHECK(w.region.tag == Region::DS2);
    CHECK(w.verdict == Verdict::Stable);
    CHECK(std::holds_alternative<critical::Window>(*w.critical));

    const auto s = analyze_equilibrium(Rhs2::parsed("-x + 0.5*xd"), 0.0, FractionalOrder(0.4), Delay(3.0));
    CHECK(s.region.tag == Region::S);
    CHECK(s.verdict == Verdict::Stable);
    CHECK_FALSE(s.critical.has_value());

    CHECK_THROWS_AS(analyze_equilibrium(sec5, 1.0, FractionalOrder(0.5), Delay(0.3)), DomainError);
}
