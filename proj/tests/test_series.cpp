#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ellgen/series.hpp"
#include "ellgen/series_json.hpp"

using namespace ellgen;

namespace {

std::vector<VarSpec> qvars(long order) { return {VarSpec::power("q", order)}; }

MultiSeries random_series(std::mt19937& rng, const std::vector<VarSpec>& vars, const std::vector<Grade>& grades,
                          int terms, int maxexp, int minexp = 0) {
    std::uniform_int_distribution<int> e(minexp, maxexp), c(-5, 5), d(1, 4);
    MultiSeries::Terms t;
    for (int k = 0; k < terms; ++k) {
        Mono m{};
        for (size_t i = 0; i < vars.size(); ++i) m[i] = vars[i].kind == VarKind::power ? std::abs(e(rng)) : e(rng);
        t[m] += Coeff::fraction(c(rng), d(rng));
    }
    return MultiSeries(vars, grades, t);
}

}  // namespace

TEST_CASE("cyclotomic coefficients reduce modulo the cyclotomic polynomial") {
    CHECK(cyclotomic_polynomial(3) == std::vector<long>{1, 1, 1});
    CHECK(cyclotomic_polynomial(4) == std::vector<long>{1, 0, 1});
    CHECK(cyclotomic_polynomial(12) == std::vector<long>{1, 0, -1, 0, 1});
    for (int n = 3; n <= 12; ++n) {
        Coeff z = Coeff::zeta(n);
        CHECK(z.pow(n).is_one());
        CHECK_FALSE(z.pow(n - 1).is_one());
        Coeff s(0);
        for (int k = 0; k < n; ++k) s += z.pow(k);
        CHECK(s.is_zero());
        Coeff w = Coeff::zeta(n) + Coeff(2) + Coeff::fraction(1, 3) * Coeff::zeta(n, 2);
        CHECK((w * w.inverse()).is_one());
        CHECK(Coeff::zeta(n).galois(n - 1) == Coeff::zeta(n, -1));
    }
    CHECK(Coeff::zeta(2) == Coeff(-1));
    CHECK(Coeff::fraction(6, -4) == Coeff(mpq_class(-3, 2)));
    CHECK_THROWS_AS(Coeff::zeta(3) + Coeff::zeta(5), FieldMismatch);
}

TEST_CASE("arith examples") {
    auto vq = qvars(3);
    auto a = polynomial(vq, {}, {{mono({0}), 1}, {mono({1}), 1}});
    auto b = polynomial(vq, {}, {{mono({0}), 1}, {mono({1}), -1}});
    auto p = a * b;
    CHECK(p.coeff(mono({0})) == Coeff(1));
    CHECK(p.coeff(mono({1})) == Coeff(0));
    CHECK(p.coeff(mono({2})) == Coeff(-1));
    CHECK(p.vars()[0].order == 3);

    std::vector<VarSpec> yx{VarSpec::laurent("y", -1, 3), VarSpec::power("x", 3)};
    auto u = polynomial(yx, {}, {{mono({-1, 0}), 1}, {mono({0, 1}), 1}});
    auto v = polynomial(yx, {}, {{mono({1, 0}), 1}, {mono({0, 1}), -1}});
    auto s = u + v;
    CHECK(s.terms().size() == 2);
    CHECK(s.coeff(mono({-1, 0})) == Coeff(1));
    CHECK(s.coeff(mono({1, 0})) == Coeff(1));

    // sum_{n<5} q^n times (1 - q): hand expansion gives 1 - q^5, truncated to 1
    auto vq5 = qvars(5);
    MultiSeries::Terms geo;
    for (int n = 0; n < 5; ++n) geo[mono({n})] = 1;
    auto g = MultiSeries(vq5, {}, geo) * polynomial(vq5, {}, {{mono({0}), 1}, {mono({1}), -1}});
    CHECK(g.terms().size() == 1);
    CHECK(g.constant_term() == Coeff(1));
}

TEST_CASE("mul shrinks the order by the partner floor") {
    std::vector<VarSpec> yv{VarSpec::laurent("y", -2, 5)};
    auto a = polynomial(yv, {}, {{mono({-2}), 1}, {mono({4}), 1}});
    auto b = polynomial({VarSpec::laurent("y", 0, 6)}, {}, {{mono({0}), 1}});
    auto p = a * b;
    CHECK(p.vars()[0].order == 4);
    CHECK(p.vars()[0].floor == -2);
    CHECK(p.coeff(mono({-2})) == Coeff(1));
    CHECK(p.coeff(mono({4})) == Coeff(0));
}

TEST_CASE("invert examples") {
    auto vq = qvars(6);
    auto inv = invert(polynomial(vq, {}, {{mono({0}), 1}, {mono({1}), -1}}));
    for (int n = 0; n < 6; ++n) CHECK(inv.coeff(mono({n})) == Coeff(1));

    std::vector<VarSpec> yx{VarSpec::laurent("y", 0), VarSpec::power("x", 6)};
    auto f = polynomial(yx, {}, {{mono({1, 0}), 1}, {mono({0, 1}), 1}});
    auto fi = invert(f);
    for (int n = 0; n < 6; ++n) CHECK(fi.coeff(mono({-1 - n, n})) == Coeff(n % 2 ? -1 : 1));
    CHECK(fi.terms().size() == 6);
    CHECK(fi.vars()[0].floor == -6);
    auto one = f * fi;
    CHECK(one.terms().size() == 1);
    CHECK(one.constant_term().is_one());

    auto x = polynomial({VarSpec::power("x", 5)}, {}, {{mono({1}), 1}});
    CHECK_THROWS_AS(invert(x), NotAUnit);
}

TEST_CASE("power variables absent from the series do not limit inversion") {
    // exact in q, truncated in x
    std::vector<VarSpec> qx{VarSpec::power("q"), VarSpec::power("x", 5)};
    auto a = polynomial(qx, {}, {{mono({0, 0}), 1}, {mono({0, 1}), -1}});
    auto ai = invert(a);
    for (int n = 0; n < 5; ++n) CHECK(ai.coeff(mono({0, n})) == Coeff(1));
    CHECK(ai.vars()[0].order == kUnbounded);
    CHECK((a * ai).terms().size() == 1);
    auto e = exp_series(polynomial(qx, {}, {{mono({0, 1}), 1}}));
    CHECK(e.coeff(mono({0, 4})) == Coeff::fraction(1, 24));
    // a q-term with q unbounded still needs a truncation
    auto b = polynomial(qx, {}, {{mono({0, 0}), 1}, {mono({1, 0}), -1}});
    CHECK_THROWS_AS(invert(b), WindowUnderflow);
}

TEST_CASE("invert a Laurent polynomial in the coefficient variable") {
    std::vector<VarSpec> yq{VarSpec::laurent("y", -1, 8), VarSpec::power("q", 4)};
    auto a = polynomial(yq, {}, {{mono({0, 0}), 1}, {mono({1, 0}), -1}, {mono({-1, 1}), 1}});
    auto ai = invert(a);
    auto prod = a * ai;
    CHECK(prod.constant_term().is_one());
    CHECK(prod.terms().size() == 1);
    CHECK(prod.vars()[1].order == 4);
}

TEST_CASE("substitute examples") {
    std::vector<VarSpec> xv{VarSpec::power("x", 5)};
    auto a = polynomial(xv, {}, {{mono({1}), 1}, {mono({2}), 1}});
    CHECK(substitute(a, "x", MultiSeries(xv)).is_zero());

    std::vector<VarSpec> qy{VarSpec::power("q", 3), VarSpec::power("y", 3)};
    MultiSeries::Terms t;
    for (int n = 0; n < 3; ++n) t[mono({0, n})] = 1;
    auto geo = MultiSeries(qy, {}, t);
    auto qyv = polynomial({VarSpec::power("q"), VarSpec::power("y")}, {}, {{mono({1, 1}), 1}});
    auto r = substitute(geo, "y", qyv);
    CHECK(r.terms().size() == 3);
    for (int n = 0; n < 3; ++n) CHECK(r.coeff(mono({n, n})) == Coeff(1));
    CHECK(r.vars()[0].order == 3);

    std::vector<VarSpec> xx{VarSpec::power("x1", 5), VarSpec::power("x2")};
    auto fadd = polynomial(xx, {}, {{mono({1, 0}), 1}, {mono({0, 1}), 1}});
    std::vector<VarSpec> xy{VarSpec::power("x1", 5), VarSpec::laurent("y", 0)};
    auto fy = remap(fadd, xy, {0, 1});
    CHECK(fy.vars()[1].kind == VarKind::laurent);
    auto one = fy * invert(fy);
    CHECK(one.terms().size() == 1);
    CHECK(one.constant_term().is_one());
}

TEST_CASE("monomial substitution y -> q y shrinks the q window by the y floor") {
    std::vector<VarSpec> qy{VarSpec::power("q", 5), VarSpec::laurent("y", -2, 3)};
    auto a = polynomial(qy, {}, {{mono({0, -2}), 1}, {mono({1, 0}), 3}, {mono({0, 2}), 1}});
    auto r = substitute_monomial(a, "y", Coeff(1), mono({1, 1}));
    CHECK(r.vars()[0].order == 3);
    CHECK(r.vars()[0].floor == -2);
    CHECK(r.vars()[0].kind == VarKind::laurent);
    CHECK(r.coeff(mono({-2, -2})) == Coeff(1));
    CHECK(r.coeff(mono({1, 0})) == Coeff(3));
    CHECK(r.coeff(mono({2, 2})) == Coeff(1));
}

TEST_CASE("exp and log examples") {
    auto vq = qvars(7);
    CHECK(exp_series(MultiSeries(vq)).constant_term().is_one());
    CHECK(exp_series(MultiSeries(vq)).terms().size() == 1);
    auto l = log_series(polynomial(vq, {}, {{mono({0}), 1}, {mono({1}), -1}}));
    for (int n = 1; n < 7; ++n) CHECK(l.coeff(mono({n})) == Coeff::fraction(-1, n));

    std::vector<VarSpec> v{VarSpec::power("x", 5), VarSpec::power("y", 5), VarSpec::power("q", 5)};
    auto a = polynomial(v, {}, {{mono({0, 0, 0}), 1}, {mono({1, 0, 0}), 1}, {mono({1, 1, 1}), 1}});
    CHECK(equal_within(exp_series(log_series(a)), a));
    CHECK(exp_series(log_series(a)).terms().size() == 3);
}

TEST_CASE("graded truncation") {
    std::vector<VarSpec> xx{VarSpec::power("x1"), VarSpec::power("x2")};
    std::vector<Grade> g{{0b11, 4, 0}};
    auto a = polynomial(xx, g, {{mono({1, 0}), 1}, {mono({0, 1}), 1}});
    auto c = pow(a, 3);
    CHECK(c.terms().size() == 4);
    CHECK(pow(a, 4).is_zero());
    auto one = polynomial(xx, g, {{mono({0, 0}), 1}, {mono({1, 0}), 1}, {mono({0, 1}), 1}});
    auto inv = invert(one);
    CHECK(equal_within(one * inv, constant_like(one, Coeff(1))));
    CHECK(inv.coeff(mono({1, 2})) == Coeff(-3));
}

TEST_CASE("property: a * invert(a) = 1 for random units") {
    std::mt19937 rng(11);
    std::vector<VarSpec> v{VarSpec::laurent("y", -3, 6), VarSpec::power("q", 4), VarSpec::power("x", 4)};
    for (int trial = 0; trial < 20; ++trial) {
        auto r = random_series(rng, v, {}, 8, 3, -3);
        MultiSeries::Terms t;
        for (const auto& [m, c] : r.terms())
            if (m[1] + m[2] > 0) t.emplace(m, c);
        Mono lead{};
        lead[0] = static_cast<int>(trial % 5) - 2;
        t[lead] = Coeff::fraction(trial + 1, 3);
        auto a = MultiSeries(v, {}, t);
        auto b = invert(a);
        CHECK(equal_within(a * b, constant_like(a, Coeff(1))));
    }
}

TEST_CASE("property: ring laws on random triples") {
    std::mt19937 rng(5);
    std::vector<VarSpec> v{VarSpec::laurent("y", -2, 5), VarSpec::power("q", 5)};
    for (int trial = 0; trial < 20; ++trial) {
        auto a = random_series(rng, v, {}, 6, 2, -2);
        auto b = random_series(rng, v, {}, 6, 2, -2);
        auto c = random_series(rng, v, {}, 6, 2, -2);
        CHECK(equal_within(a * b, b * a));
        CHECK(equal_within((a * b) * c, a * (b * c)));
        CHECK(equal_within(a * (b + c), a * b + a * c));
        CHECK(equal_within(a + b, b + a));
    }
}

TEST_CASE("property: identity substitution and exp/log round trips") {
    std::mt19937 rng(9);
    std::vector<VarSpec> v{VarSpec::power("q", 4), VarSpec::power("x", 5)};
    for (int trial = 0; trial < 15; ++trial) {
        auto a = random_series(rng, v, {}, 10, 4);
        auto same = substitute(a, "x", variable_like(a, "x"));
        CHECK(equal_within(same, a));
        CHECK(same.vars()[1].order == a.vars()[1].order);
        MultiSeries::Terms t;
        for (const auto& [m, c] : a.terms())
            if (m != Mono{}) t.emplace(m, c);
        auto r = a.with_terms(t);
        CHECK(equal_within(log_series(exp_series(r)), r));
        auto u = r + constant_like(r, Coeff(1));
        CHECK(equal_within(exp_series(log_series(u)), u));
    }
}

TEST_CASE("property: shrinking an input window keeps the surviving output coefficients") {
    std::mt19937 rng(21);
    std::vector<VarSpec> v{VarSpec::laurent("y", -2, 6), VarSpec::power("q", 5)};
    for (int trial = 0; trial < 10; ++trial) {
        auto a = random_series(rng, v, {}, 8, 4, -2);
        auto b = random_series(rng, v, {}, 8, 4, -2);
        auto full = a * b;
        auto small = restrict_var(a, "q", 3) * b;
        CHECK(small.vars()[1].order <= full.vars()[1].order);
        for (const auto& [m, c] : full.terms())
            if (small.in_window(m)) CHECK(small.coeff(m) == c);
        for (const auto& [m, c] : small.terms()) CHECK(full.coeff(m) == c);
    }
}

TEST_CASE("serialization round trip is bit exact") {
    std::vector<VarSpec> v{VarSpec::laurent("y", -2, 6), VarSpec::power("q", 5), VarSpec::power("x")};
    std::vector<Grade> g{{0b110, 7, 0}};
    MultiSeries::Terms t;
    t[mono({-1, 1, 2})] = Coeff(mpq_class("123456789012345678901234567890/7"));
    t[mono({3, 0, 0})] = Coeff::zeta(5, 2) + Coeff::fraction(1, 3);
    auto a = MultiSeries(v, g, t);
    auto j = series_to_json(a);
    auto b = series_from_json(nlohmann::json::parse(j.dump()));
    CHECK(series_to_json(b).dump() == j.dump());
    CHECK(equal_within(a, b));
}
