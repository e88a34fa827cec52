#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>

#include "ellgen/theta.hpp"

using namespace ellgen;

namespace {

Coeff Q(long n, long d = 1) { return Coeff::fraction(n, d); }

MultiSeries one_like(const MultiSeries& a) { return constant_like(a, Coeff(1)); }

bool nonvacuous_equal(const MultiSeries& a, const MultiSeries& b) {
    return a.in_window(Mono{}) && b.in_window(Mono{}) && equal_within(a, b);
}

// x-variables x1..xn, exact polynomials
std::vector<VarSpec> xs(int n) {
    std::vector<VarSpec> v;
    for (int i = 1; i <= n; ++i) v.push_back(VarSpec::power("x" + std::to_string(i)));
    return v;
}

MultiSeries times_unit(const ThetaSection& s, const MultiSeries& extra) {
    return s.unit * embed(extra, s.unit.vars());
}

}  // namespace

TEST_CASE("theta^1 of the identity coordinate is the section x") {
    auto s = theta_p_from_trivialization(Coordinate::identity(5), additive_law(5), 1);
    CHECK(s.p == 1);
    CHECK(s.eps == std::map<unsigned, int>{{1u, 1}});
    CHECK(nonvacuous_equal(s.unit, one_like(s.unit)));
    CHECK(s.has_structure_pattern());
}

TEST_CASE("theta^2 of 1 - e^{-x} over the multiplicative law") {
    const int D = 5;
    auto f = Coordinate::exponential(D + 1);
    auto F = multiplicative_law(D);
    auto s = theta_p_from_trivialization(f, F, 2);
    CHECK(s.eps == std::map<unsigned, int>{{1u, 1}, {2u, 1}, {3u, -1}});
    auto r = check_axioms(s);
    CHECK(r.rigidity);
    CHECK(r.symmetry);
    CHECK(r.cocycle);

    // unit * x1 * x2 * f(F12) = f(x1) f(x2) * F12, expanded directly
    auto vars = xs(2);
    std::vector<Grade> g{{0b11u, D + 1, 0}};
    MultiSeries like(vars, g);
    auto x1 = variable_like(like, "x1"), x2 = variable_like(like, "x2");
    auto F12 = x1 + x2 - x1 * x2;
    auto fx = [&](const MultiSeries& v) {
        auto tmp = vars;
        tmp.push_back(VarSpec::power("x"));
        auto fe = embed(f.series(), tmp);
        return embed(substitute(fe, "x", embed(v, tmp)), vars);
    };
    auto lhs = restrict(s.unit * x1 * x2 * fx(F12), g);
    auto rhs = restrict(fx(x1) * fx(x2) * F12, g);
    CHECK(lhs.in_window(mono({2, 3})));
    CHECK(equal_within(lhs, rhs));
}

TEST_CASE("cocycle of theta^2 for x + x^2 by brute force") {
    auto f = Coordinate::polynomial({Q(1)}, 6);
    auto s = theta_p_from_trivialization(f, additive_law(6), 2);
    CHECK(check_axioms(s).cocycle);

    // s(a,b) = f(a) f(b) / f(a+b) with f(t) = t + t^2; clear denominators
    // s(x1,x2) s(x0,x1+x2) = s(x0+x1,x2) s(x0,x1)
    MultiSeries like({VarSpec::power("x0"), VarSpec::power("x1"), VarSpec::power("x2")});
    auto v = [&](const char* n) { return variable_like(like, n); };
    auto fp = [&](const MultiSeries& t) { return t + t * t; };
    auto x0 = v("x0"), x1 = v("x1"), x2 = v("x2");
    auto lhs_num = fp(x1) * fp(x2) * fp(x0) * fp(x1 + x2);
    auto lhs_den = fp(x1 + x2) * fp(x0 + x1 + x2);
    auto rhs_num = fp(x0 + x1) * fp(x2) * fp(x0) * fp(x1);
    auto rhs_den = fp(x0 + x1 + x2) * fp(x0 + x1);
    CHECK(equal_within(lhs_num * rhs_den, rhs_num * lhs_den));
    CHECK_FALSE((lhs_num * rhs_den).is_zero());
}

TEST_CASE("delta of the section x") {
    auto s = theta_p_from_trivialization(Coordinate::identity(5), additive_law(5), 1);
    auto d = delta(s);
    CHECK(d.p == 2);
    CHECK(d.eps == std::map<unsigned, int>{{1u, 1}, {2u, 1}, {3u, -1}});
    CHECK(nonvacuous_equal(d.unit, one_like(d.unit)));
}

TEST_CASE("delta squared of theta^1 is theta^3") {
    for (auto [f, F] : {std::pair{Coordinate::exponential(6), multiplicative_law(5)},
                        std::pair{Coordinate::random(5, 6), additive_law(5)},
                        std::pair{Coordinate::identity(6), multiplicative_law(5)}}) {
        auto dd = delta(delta(theta_p_from_trivialization(f, F, 1)));
        auto t3 = theta_p_from_trivialization(f, F, 3);
        CHECK(equal_sections(dd, t3));
        CHECK(dd.unit.in_window(mono({0, 2, 2})));
    }
}

TEST_CASE("fat wedge: every slot set to zero gives the trivial section") {
    auto F = multiplicative_law(5);
    auto f = Coordinate::random(9, 6);
    for (int p = 1; p <= 3; ++p) {
        auto s = theta_p_from_trivialization(f, F, p);
        for (int slot = 0; slot < p; ++slot) {
            std::vector<unsigned> images;
            int next = 0;
            for (int k = 0; k < p; ++k) images.push_back(k == slot ? 0u : 1u << next++);
            CHECK(is_trivial(pullback(s, p - 1, images)));
        }
    }
    auto d = delta(theta_p_from_trivialization(f, F, 2));
    CHECK(is_trivial(pullback(d, 2, {0u, 1u, 2u})));
}

TEST_CASE("axiom checks detect constructed failures") {
    auto F = additive_law(5);
    auto f = Coordinate::exponential(6);
    auto s3 = theta_p_from_trivialization(f, F, 3);
    CHECK(check_axioms(s3).ok());
    CHECK(check_axioms(s3).cocycle_checked);

    auto s2 = theta_p_from_trivialization(f, F, 2);
    MultiSeries like(s2.unit.vars());
    auto x1 = variable_like(like, "x1"), x2 = variable_like(like, "x2");

    auto asym = s2;
    asym.unit = times_unit(s2, one_like(like) + x1);
    auto ra = check_axioms(asym);
    CHECK_FALSE(ra.symmetry);

    auto bad = s2;
    bad.unit = times_unit(s2, one_like(like) + x1 * x2);
    auto rb = check_axioms(bad);
    CHECK(rb.rigidity);
    CHECK(rb.symmetry);
    CHECK_FALSE(rb.cocycle);
}

TEST_CASE("sharp of theta^3 of x over the additive law") {
    const int D = 4;
    auto s3 = delta(delta(theta_p_from_trivialization(Coordinate::identity(D + 1), additive_law(D), 1)));
    auto sh = sharp(s3);
    CHECK(sh.p == 2);
    CHECK(sh.base_kind == BaseKind::laurent);
    CHECK(sh.eps == std::map<unsigned, int>{{1u, 1}, {2u, 1}, {3u, -1}});
    CHECK(check_axioms(sh).ok());
    // unit (x1 + y)(x2 + y) = y (x1 + x2 + y)
    MultiSeries like(sh.unit.vars());
    auto y = variable_like(like, "y"), x1 = variable_like(like, "x1"), x2 = variable_like(like, "x2");
    auto lhs = sh.unit * (x1 + y) * (x2 + y);
    auto rhs = y * (x1 + x2 + y);
    CHECK(equal_within(lhs, rhs));
    CHECK(lhs.in_window(mono({2, 1, 1})));
    CHECK(sh.unit.in_window(mono({-4, 4, 0})));
    CHECK(sh.unit.coeff(mono({-2, 1, 1})) == Q(-1));
    CHECK(sh.unit.coeff(mono({-4, 4, 0})).is_zero());
}

TEST_CASE("sharp of the delta section over the multiplicative law") {
    const int D = 5;
    auto d = delta(theta_p_from_trivialization(Coordinate::identity(D + 1), multiplicative_law(D), 1));
    auto sh = sharp(d);
    CHECK(sh.eps == std::map<unsigned, int>{{1u, 1}});
    // unit = y / (y + x (1 - y))
    MultiSeries like(sh.unit.vars());
    auto y = variable_like(like, "y"), x = variable_like(like, "x1");
    auto g = y + x * (one_like(like) - y);
    CHECK(equal_within(sh.unit * g, y));
    CHECK((sh.unit * g).in_window(mono({1, 0})));
    CHECK(equal_within(sh.unit, y * invert(restrict_var(g, "x1", D + 1))));
    // rigidity: the unit at x = 0 is 1
    CHECK(nonvacuous_equal(substitute_zero(sh.unit, "x1"), one_like(like)));
}

TEST_CASE("delta and sharp commute") {
    auto check = [](const Coordinate& f, const FormalGroupLaw& F) {
        auto s = theta_p_from_trivialization(f, F, 2);
        auto r = verify_delta_sharp_commute(s);
        CHECK(r.trivial);
        CHECK(r.value.unit.in_window(mono({0, 2, 2})));
    };
    check(Coordinate::identity(7), additive_law(6));
    check(Coordinate::exponential(7), multiplicative_law(6));
    for (std::uint64_t seed = 1; seed <= 10; ++seed) check(Coordinate::random(seed, 7), additive_law(6));
}

TEST_CASE("structure closure under delta and sharp") {
    auto f = Coordinate::random(21, 6);
    auto F = multiplicative_law(5);
    auto s2 = theta_p_from_trivialization(f, F, 2);
    auto d = delta(s2);
    CHECK(d.has_structure_pattern());
    CHECK(check_axioms(d).ok());
    auto sh = sharp(d);
    CHECK(sh.has_structure_pattern());
    auto r = check_axioms(sh);
    CHECK(r.rigidity);
    CHECK(r.symmetry);
    CHECK(r.cocycle);
}

TEST_CASE("index composition of the theta-of-theta identity") {
    // eps of prod_I prod_J f(F_{J o I})^{(-1)^{|I|+|J|}}, J o I = I u (J \ {1}) shifted when 1 in J
    for (auto [k, l] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{2, 3}}) {
        const int n = k + l - 1;
        std::map<unsigned, int> eps;
        for (unsigned I = 0; I < (1u << k); ++I)
            for (unsigned J = 1; J < (1u << l); ++J) {
                unsigned K = (J & 1) ? I : 0;
                for (int j = 1; j < l; ++j)
                    if (J >> j & 1) K |= 1u << (k + j - 1);
                if (K == 0) continue;
                const int sign = (std::popcount(I) + std::popcount(J)) % 2 ? -1 : 1;
                eps[K] += sign;
            }
        for (unsigned K = 1; K < (1u << n); ++K) CHECK(eps[K] == (std::popcount(K) % 2 ? 1 : -1));
    }
}

TEST_CASE("theta of theta") {
    auto run = [](const Coordinate& f, const FormalGroupLaw& F, int k, int l) {
        auto r = verify_theta_of_theta(f, F, k, l);
        CHECK(r.trivial);
        CHECK(r.value.unit.in_window(mono({1, 1, 1})));
    };
    run(Coordinate::identity(6), additive_law(5), 2, 2);
    run(Coordinate::exponential(6), multiplicative_law(5), 2, 2);
    run(Coordinate::exponential(6), additive_law(5), 3, 2);
    run(Coordinate::random(4, 6), multiplicative_law(5), 2, 3);
    CHECK_THROWS(verify_theta_of_theta(Coordinate::identity(4), additive_law(3), 3, 3));
}

TEST_CASE("permutation action composes") {
    auto s = theta_p_from_trivialization(Coordinate::random(2, 5), additive_law(4), 3);
    MultiSeries like(s.unit.vars());
    s.unit = times_unit(s, one_like(like) + variable_like(like, "x1") + Q(2) * variable_like(like, "x2") *
                                                                            variable_like(like, "x2"));
    std::vector<int> sigma{1, 2, 0}, tau{1, 0, 2}, comp(3);
    for (int i = 0; i < 3; ++i) comp[i] = tau[sigma[i]];
    CHECK(equal_sections(permute_slots(permute_slots(s, sigma), tau), permute_slots(s, comp)));
    CHECK_FALSE(equal_sections(permute_slots(s, sigma), s));
}

TEST_CASE("arity bounds") {
    CHECK_THROWS(theta_p_from_trivialization(Coordinate::identity(3), additive_law(3), 0));
    CHECK_THROWS(theta_p_from_trivialization(Coordinate::identity(3), additive_law(3), 5));
    auto s1 = theta_p_from_trivialization(Coordinate::identity(3), additive_law(3), 1);
    CHECK_THROWS(sharp(s1));
}

TEST_CASE("section json round trip") {
    auto s = sharp(theta_p_from_trivialization(Coordinate::random(8, 5), multiplicative_law(4), 2));
    auto t = section_from_json(nlohmann::json::parse(section_to_json(s).dump()));
    CHECK(section_to_json(t) == section_to_json(s));
    CHECK(equal_sections(s, t));
    CHECK(t.base_kind == BaseKind::laurent);
}
