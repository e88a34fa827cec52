// Acceptance criteria: one PASS/FAIL line each, exact arithmetic on fixed windows.

#include <chrono>
#include <cstdio>
#include <functional>

#include "ellgen/report.hpp"

using namespace ellgen;

namespace {

mpq_class factorial(int n) {
    mpz_class f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return mpq_class(f);
}

std::vector<mpq_class> bernoulli(int n) {
    std::vector<mpq_class> B(n + 1);
    B[0] = 1;
    for (int m = 1; m <= n; ++m) {
        mpq_class s = 0;
        for (int k = 0; k < m; ++k) s += factorial(m + 1) / (factorial(k) * factorial(m + 1 - k)) * B[k];
        B[m] = -s / (m + 1);
    }
    return B;
}

MultiSeries in_x(const std::vector<mpq_class>& c) {
    MultiSeries::Terms t;
    for (size_t k = 0; k < c.size(); ++k)
        if (c[k] != 0) t[mono({static_cast<int>(k)})] = Coeff(c[k]);
    return MultiSeries({VarSpec::power("x", static_cast<long>(c.size()))}, {}, std::move(t));
}

MultiSeries todd_factor(int order) {
    auto B = bernoulli(order);
    std::vector<mpq_class> c(order);
    for (int n = 0; n < order; ++n) c[n] = (n % 2 ? -B[n] : B[n]) / factorial(n);
    return in_x(c);
}

MultiSeries l_factor(int order) {
    auto B = bernoulli(order);
    std::vector<mpq_class> c(order);
    for (int n = 0; n < order; n += 2) c[n] = B[n] * mpq_class(mpz_class(1) << n) / factorial(n);
    return in_x(c);
}

bool scalar_is(const MultiSeries& s, const Coeff& v) { return s.nvars() == 0 && s.constant_term() == v; }

MultiSeries negate_y(const MultiSeries& s) {
    const int iy = s.index_of("y");
    MultiSeries::Terms t;
    for (const auto& [m, c] : s.terms()) t[m] = m[iy] % 2 ? -c : c;
    return s.with_terms(std::move(t));
}

bool all_permutations_fix(const ThetaSection& s) {
    std::vector<int> perm(s.p);
    for (int i = 0; i < s.p; ++i) perm[i] = i;
    do {
        if (!equal_sections(permute_slots(s, perm), s)) return false;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return true;
}

const ManifoldClass K3 = complete_intersection(3, {4});
const ManifoldClass QUINTIC = complete_intersection(4, {5});

bool c1_phi() {
    const auto phi = phi_series(6, 7, Coords::mult).body;
    MultiSeries::Terms q0;
    for (const auto& [m, c] : phi.terms())
        if (m[0] == 0) q0[m] = c;
    bool ok = q0 == MultiSeries::Terms{{mono({0, 0}), Coeff(1)}, {mono({0, -1}), Coeff(-1)}};
    ok = ok && phi.vars()[0].order == 6;
    for (int n : {1, 2}) {
        const auto r = quasiperiodicity_check(n, 6, 6);
        ok = ok && r.is_zero() && r.in_window(mono({5, -6})) && r.in_window(mono({5, 6}));
    }
    return ok;
}

bool c2_cube() {
    const auto s = cubical_structure_series(4, 5);
    const auto r = check_axioms(s);
    Mono deep{};
    deep[s.unit.index_of("q")] = 3;
    deep[s.unit.index_of("x1")] = 2;
    deep[s.unit.index_of("x2")] = 2;
    deep[s.unit.index_of("x3")] = 1;
    return r.rigidity && r.cocycle_checked && r.cocycle && all_permutations_fix(s) && s.has_structure_pattern() &&
           s.unit.in_window(deep);
}

bool c3_delta_sharp() {
    std::vector<std::pair<Coordinate, FormalGroupLaw>> cases{{Coordinate::identity(7), additive_law(6)},
                                                             {Coordinate::exponential(7), multiplicative_law(6)}};
    for (std::uint64_t seed = 1; seed <= 10; ++seed) cases.push_back({Coordinate::random(seed, 7), additive_law(6)});
    for (const auto& [f, F] : cases) {
        const auto r = verify_delta_sharp_commute(theta_p_from_trivialization(f, F, 2));
        const auto& u = r.value.unit;
        Mono a{}, b{};
        a[u.index_of("y")] = -6;
        a[u.index_of("x1")] = 6;
        b[u.index_of("y")] = -6;
        b[u.index_of("x1")] = 3;
        b[u.index_of("x2")] = 3;
        if (!r.trivial || !u.in_window(a) || !u.in_window(b)) return false;
    }
    return true;
}

bool c4_zeta() {
    std::vector<std::pair<Coordinate, FormalGroupLaw>> cases{{Coordinate::exponential(6), multiplicative_law(5)},
                                                             {Coordinate::random(3, 6), additive_law(5)},
                                                             {Coordinate::random(4, 6), multiplicative_law(5)}};
    for (const auto& [f, F] : cases)
        for (auto [k, l] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{2, 3}}) {
            const auto r = verify_theta_of_theta(f, F, k, l);
            if (!r.trivial) return false;
        }
    return true;
}

bool c5_pinned() {
    // Hodge oracle: h^{0,0} = h^{2,0} = 1, h^{1,1} = 20
    const auto Ek = two_variable_genus(K3, 4, Normalization::bl);
    MultiSeries::Terms q0;
    for (const auto& [m, c] : Ek.fraction.num.terms())
        if (m[0] == 0) q0[m] = c;
    bool ok = Ek.half_y_shift == -2 &&
              q0 == MultiSeries::Terms{{mono({0, 0}), Coeff(2)}, {mono({0, 1}), Coeff(20)}, {mono({0, 2}), Coeff(2)}};
    // top Chern number oracle at y = 1, every layer to q-order 4
    for (auto [M, top] : {std::pair{&K3, 24L}, std::pair{&QUINTIC, -200L}}) {
        const auto E = M == &K3 ? Ek : two_variable_genus(*M, 4, Normalization::bl);
        const auto e = specialize_y(E.fraction.num, Coeff(1));
        ok = ok && e.vars()[0].order == 4;
        for (int b = 0; b < 4; ++b) ok = ok && e.coeff(mono({b})) == Coeff(b == 0 ? top : 0);
    }
    for (int n = 1; n <= 4; ++n) ok = ok && scalar_is(genus_eval(complete_intersection(n, {}), todd_factor(n + 1)), Coeff(1));
    ok = ok && scalar_is(genus_eval(complete_intersection(2, {}), l_factor(3)), Coeff(1));
    return ok;
}

bool c6_normalizations() {
    bool ok = true;
    for (const auto* M : {&K3, &QUINTIC}) {
        const auto P = two_variable_genus(*M, 4, Normalization::paper);
        const auto H = two_variable_genus(*M, 4, Normalization::hoehn);
        const auto B = two_variable_genus(*M, 4, Normalization::bl);
        const auto l15 = negate_y(H.fraction.num) * P.fraction.den;
        ok = ok && equal_within(l15, P.fraction.num * negate_y(H.fraction.den)) && !l15.is_zero();
        const auto S = sigma_at_y_inverse(4);
        const auto l16 = pow(embed(S.body, P.fraction.num.vars()), M->d) * P.fraction.num;
        ok = ok && equal_within(l16, B.fraction.num * P.fraction.den) && !l16.is_zero();
        ok = ok && M->d * S.half_y_shift + P.half_y_shift == B.half_y_shift;
        ok = ok && l16.vars()[0].order == 4;
    }
    return ok;
}

bool c7_jacobi() {
    const auto K = two_variable_genus(K3, 16, Normalization::paper);
    const auto Q = two_variable_genus(QUINTIC, 15, Normalization::paper);
    const auto rk = jacobi_invariance_check(K, 4, 4);
    const auto rq = jacobi_invariance_check(Q, 3, 4);
    bool ok = rk.is_zero() && rq.is_zero() && rk.vars()[0].order == 4 && rq.vars()[0].order == 3;
    for (const auto* M : {&K3, &QUINTIC})
        for (const Coeff& l : {Coeff(2), Coeff::fraction(1, 2)}) {
            const auto h = weight_homogeneity_check(*M, l, 4);
            ok = ok && h.uniform && h.nonvacuous && h.scale == l.pow(M->d);
        }
    JacobiSeries bad = K;
    bad.fraction = SeriesFraction(K.fraction.num + monomial_like(K.fraction.num, mono({1, 1})), K.fraction.den);
    ok = ok && !jacobi_invariance_check(bad, 4, 4).is_zero();
    return ok;
}

bool c8_level() {
    bool ok = true;
    for (const auto* M : {&K3, &QUINTIC})
        for (int N : {2, 3, 4}) {
            const auto P = two_variable_genus(*M, 3, Normalization::paper);
            for (int l = 1; l < N; ++l) {
                const auto v = q_from_Q(level_n_genus(*M, TorsionPoint::make(N, l, 0), 3).value, N);
                // phi(M, y^{-1}, q) at y = zeta^{-l}
                const Coeff y = Coeff::zeta(N, l);
                ok = ok && v.vars()[0].order == 3 &&
                     equal_within(v * specialize_y(P.fraction.den, y), specialize_y(P.fraction.num, y));
            }
        }
    // (x/2) coth(x/2) is the L-factor at lambda = 1/2; signature(K3) = -16
    const auto sig = genus_eval(K3, l_factor(3));
    const auto half = homogeneity_ratio(K3, l_factor(3), Coeff::fraction(1, 2));
    const auto v = level_n_genus(K3, TorsionPoint::make(2, 1, 0), 3).value;
    ok = ok && scalar_is(sig, Coeff(-16)) && half.uniform && v.coeff(mono({0})) == half.scale * Coeff(-16) &&
         v.coeff(mono({0})) == Coeff(-4);
    return ok;
}

bool c9_chern() {
    for (int r = 1; r <= 6; ++r)
        for (int k = -4; k <= 4; ++k) {
            const auto rep = chern_lemma_check(r, k);
            if (!rep.ok() || !rep.c1.is_zero() || !rep.whitney_residual.is_zero() || !rep.twist_residual.is_zero())
                return false;
        }
    return true;
}

bool c10_multiplicativity() {
    const auto P1 = complete_intersection(1, {});
    bool ok = true;
    for (const auto* M : {&P1, &K3}) {
        const auto MM = product_manifold(*M, *M);
        for (auto n : {Normalization::paper, Normalization::bl, Normalization::hoehn}) {
            const auto A = two_variable_genus(*M, 2, n);
            const auto AA = two_variable_genus(MM, 2, n);
            const auto lhs = AA.fraction.num * A.fraction.den * A.fraction.den;
            const auto rhs = A.fraction.num * A.fraction.num * AA.fraction.den;
            ok = ok && equal_within(lhs, rhs) && !lhs.is_zero() && AA.half_y_shift == 2 * A.half_y_shift;
        }
    }
    return ok;
}

bool c11_determinism() {
    RunConfig c;
    c.command = "verify";
    c.seed = 20;
    bool ok = true;
    for (const auto& s : verify_suites()) {
        const auto a = run_verify(c, s), b = run_verify(c, s);
        ok = ok && a.exit_code == kExitPass && render(a) == render(b);
    }
    RunConfig g;
    g.command = "genus";
    g.q_order = 4;
    g.normalization = Normalization::bl;
    const auto m = manifold_to_json(K3);
    ok = ok && render(run_genus(g, m)) == render(run_genus(g, m));
    return ok;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<bool()> run;
        double limit;  // seconds, 0 = none
    };
    const std::vector<Criterion> criteria{
        {"Phi q-expansion and quasi-periodicity (q-order 6, u-span 6)", c1_phi, 1},
        {"cubical structure axioms (q-order 4, x-degree 5)", c2_cube, 10},
        {"delta-sharp commutation (degree 6, y-floor -6)", c3_delta_sharp, 30},
        {"zeta_{l,k} for (2,2), (3,2), (2,3) at degree 5", c4_zeta, 30},
        {"pinned two-variable genus values (q-order 4)", c5_pinned, 20},
        {"Hoehn flip and sigma^d normalization (q-order 4)", c6_normalizations, 0},
        {"index-0 invariance, weight homogeneity, negative control", c7_jacobi, 0},
        {"level-N against the zeta-specialized genus (q-order 3)", c8_level, 60},
        {"equivariant Chern class lemma (r <= 6, |k| <= 4)", c9_chern, 5},
        {"multiplicativity on products (q-order 2)", c10_multiplicativity, 0},
        {"byte-identical reports for a fixed seed", c11_determinism, 0},
    };
    int failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        bool pass = false;
        std::string note;
        try {
            pass = criteria[i].run();
        } catch (const std::exception& e) {
            note = std::string(" exception: ") + e.what();
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (criteria[i].limit > 0 && dt >= criteria[i].limit) {
            pass = false;
            note += " over time limit";
        }
        if (!pass) ++failed;
        std::printf("%s %2zu %s (%.3f s)%s\n", pass ? "PASS" : "FAIL", i + 1, criteria[i].name, dt, note.c_str());
    }
    return failed == 0 ? 0 : 1;
}
