#include "ellgen/sigma.hpp"

#include <bit>
#include <numeric>

namespace ellgen {

namespace {

// 1 + c * m
MultiSeries one_plus(const MultiSeries& like, const Coeff& c, const MultiSeries& m) {
    return constant_like(like, Coeff(1)) + c * m;
}

// restrict to the window of `like`
MultiSeries fit(const MultiSeries& like, const MultiSeries& s) {
    std::vector<Grade> g = like.grades();
    for (size_t i = 0; i < like.nvars(); ++i)
        if (like.vars()[i].order < kUnbounded) g.push_back({1u << i, like.vars()[i].order, like.vars()[i].floor});
    return restrict(s, g);
}

MultiSeries q_power(const MultiSeries& like, const std::string& q, int e) {
    const int iq = like.index_of(q);
    if (e >= like.vars()[iq].order) return fit(like, constant_like(like, Coeff(0)));
    Mono m{};
    m[iq] = e;
    return fit(like, monomial_like(like, m));
}

// Phi in (q, u), exact for q < q_order and every u-exponent
MultiSeries phi_mult(int q_order) {
    MultiSeries like({VarSpec::power("q", q_order), VarSpec::laurent("u", -1)});
    const MultiSeries u = variable_like(like, "u");
    const MultiSeries ui = monomial_like(like, mono({0, -1}));
    MultiSeries num = one_plus(like, Coeff(-1), ui);
    MultiSeries den = constant_like(like, Coeff(1));
    for (int n = 1; n < q_order; ++n) {
        const MultiSeries qn = q_power(like, "q", n);
        num = num * one_plus(like, Coeff(-1), qn * u) * one_plus(like, Coeff(-1), qn * ui);
        den = den * pow(one_plus(like, Coeff(-1), qn), 2);
    }
    return num * invert(den);
}

MultiSeries phi_exp(int q_order, int x_order) {
    MultiSeries like({VarSpec::power("q", q_order), VarSpec::power("x", x_order)});
    const MultiSeries x = fit(like, variable_like(like, "x"));
    const MultiSeries ep = exp_series(x);
    const MultiSeries em = exp_series(-x);
    MultiSeries num = one_plus(like, Coeff(-1), em);
    MultiSeries den = constant_like(like, Coeff(1));
    for (int n = 1; n < q_order; ++n) {
        const MultiSeries qn = q_power(like, "q", n);
        num = num * one_plus(like, Coeff(-1), qn * ep) * one_plus(like, Coeff(-1), qn * em);
        den = den * pow(one_plus(like, Coeff(-1), qn), 2);
    }
    return num * invert(den);
}

struct LinearFactor {
    int sign;
    std::vector<std::pair<std::string, int>> form;
};

const std::vector<LinearFactor>& w_factors() {
    static const std::vector<LinearFactor> f = {
        {1, {{"x", 1}, {"y", 1}}},
        {1, {{"x", 1}, {"z", 1}}},
        {-1, {{"x", 1}}},
        {-1, {{"x", 1}, {"y", 1}, {"z", 1}}},
    };
    return f;
}

}  // namespace

TorsionPoint TorsionPoint::make(int N, int l, int k) {
    if (N < 2 || N > Coeff::kMaxLevel) throw std::invalid_argument("torsion level out of range");
    if (l < 0 || l >= N || k < 0 || k >= N) throw std::invalid_argument("torsion coordinates out of range");
    if (l == 0 && k == 0) throw DegenerateTorsionPoint("torsion point (0,0) is the origin");
    return {N, l, k, N / std::gcd(N, std::gcd(l, k))};
}

nlohmann::json torsion_to_json(const TorsionPoint& a) { return {{"N", a.N}, {"l", a.l}, {"k", a.k}}; }

TorsionPoint torsion_from_json(const nlohmann::json& j) {
    return TorsionPoint::make(j.at("N").get<int>(), j.at("l").get<int>(), j.at("k").get<int>());
}

SigmaSeries phi_series(int q_order, int x_or_u_order, Coords coords) {
    if (q_order < 1 || x_or_u_order < 1) throw std::invalid_argument("orders must be positive");
    if (coords == Coords::exp) return {phi_exp(q_order, x_or_u_order), 0, coords};
    return {restrict_var(phi_mult(q_order), "u", x_or_u_order), 0, coords};
}

SigmaSeries sigma_series(int q_order, int x_or_u_order, Coords coords) {
    SigmaSeries s = phi_series(q_order, x_or_u_order, coords);
    s.half_u_shift = 1;
    return s;
}

MultiSeries expanded(const SigmaSeries& s) {
    if (s.coords != Coords::exp) throw std::invalid_argument("half-integral u-powers need exp coordinates");
    if (s.half_u_shift == 0) return s.body;
    const MultiSeries x = fit(s.body, variable_like(s.body, "x"));
    return s.body * exp_series(Coeff::fraction(s.half_u_shift, 2) * x);
}

MultiSeries quasiperiodicity_check(int n, int q_order, int u_span) {
    if (n < -3 || n > 3) throw std::invalid_argument("|n| must be at most 3");
    if (q_order < 1 || u_span < 0) throw WindowUnderflow("empty quasi-periodicity window");
    const long tri = static_cast<long>(n) * (n + 1) / 2;
    const int an = n < 0 ? -n : n;
    const int wide = q_order + an * (u_span + an) + static_cast<int>(tri < 0 ? -tri : tri) + 1;
    const MultiSeries phi = phi_mult(wide);
    MultiSeries::Terms diff;
    auto inside = [&](long a, long b) { return b >= 0 && b < q_order && a >= -u_span && a <= u_span; };
    const Coeff sign(n % 2 ? -1 : 1);
    for (const auto& [m, c] : phi.terms()) {
        const long a = m[1], b = m[0];
        const long A = a + n, B = b + n * a + tri;
        if (inside(A, B)) diff[mono({static_cast<int>(B), static_cast<int>(A)})] += sign * c;
        if (inside(a, b)) diff[m] -= c;
    }
    for (long A = -u_span; A <= u_span; ++A) {
        // every contributing source term lies in the computed window
        const long a = A - n;
        for (long B = 0; B < q_order; ++B)
            if (B - n * a - tri >= wide) throw WindowUnderflow("quasi-periodicity source out of window");
    }
    for (auto it = diff.begin(); it != diff.end();)
        it = it->second.is_zero() ? diff.erase(it) : std::next(it);
    return MultiSeries({VarSpec::power("q", q_order), VarSpec::laurent("u", -u_span, u_span + 1)}, {},
                       std::move(diff));
}

MultiSeries at_linear_form(const MultiSeries& g, const std::vector<VarSpec>& vars,
                           const std::vector<std::pair<std::string, int>>& form) {
    auto tmp = vars;
    tmp.push_back(VarSpec::power("_t"));
    MultiSeries like(tmp);
    MultiSeries value = constant_like(like, Coeff(0));
    for (const auto& [name, c] : form) value = value + Coeff(c) * variable_like(like, name);
    MultiSeries G = embed(rename(g, "x", "_t"), tmp);
    return embed(substitute(G, "_t", value), vars);
}

SeriesFraction w_series(int q_order, int x_order) {
    const MultiSeries phi = phi_exp(q_order, x_order);
    const std::vector<VarSpec> vars = {VarSpec::power("q", q_order), VarSpec::power("x"), VarSpec::power("y"),
                                       VarSpec::power("z")};
    const Grade g{0b1110, x_order, 0};
    MultiSeries like(vars, {g});
    MultiSeries num = constant_like(like, Coeff(1));
    MultiSeries den = num;
    for (const auto& f : w_factors()) {
        MultiSeries v = restrict(at_linear_form(phi, vars, f.form), {g});
        if (f.sign > 0)
            num = num * v;
        else
            den = den * v;
    }
    return {num, den};
}

std::vector<DivisorPoint> w_divisor() {
    std::map<std::pair<int, int>, int> mult;
    for (const auto& f : w_factors()) {
        int cy = 0, cz = 0;
        for (const auto& [name, c] : f.form) {
            if (name == "y") cy = -c;
            if (name == "z") cz = -c;
        }
        mult[{cy, cz}] += f.sign;
    }
    std::vector<DivisorPoint> out;
    for (const auto& [p, m] : mult)
        if (m != 0) out.push_back({m, p.first, p.second});
    return out;
}

ThetaSection cubical_structure_series(int q_order, int x_degree) {
    const Coordinate f = Coordinate::from_series(phi_exp(q_order, x_degree + 2));
    const FormalGroupLaw F = additive_law(x_degree, {VarSpec::power("q", q_order)});
    const ThetaSection s1 = theta_p_from_trivialization(f, F, 1);
    ThetaSection eq9 = trivial_section(s1, 3);
    for (unsigned I = 1; I < 8; ++I) {
        const ThetaSection t = pullback(s1, 3, {I});
        eq9 = eq9 * (std::popcount(I) % 2 ? inverse(t) : t);
    }
    return inverse(eq9);
}

MultiSeries level_translate_factor(const TorsionPoint& a, int q_order, int x_order) {
    if (a.l == 0 && a.k == 0) throw DegenerateTorsionPoint("torsion point (0,0) is the origin");
    if (q_order < 1 || x_order < 1) throw WindowUnderflow("empty level-N window");
    const int N = a.N, k = a.k;
    const int Qo = q_order * N;
    MultiSeries like({VarSpec::power("Q", Qo), VarSpec::power("x", x_order + 1)});
    const MultiSeries x = fit(like, variable_like(like, "x"));
    const MultiSeries ep = exp_series(x);
    const MultiSeries em = exp_series(-x);
    const MultiSeries one = constant_like(like, Coeff(1));
    const Coeff c = Coeff::zeta(N, (N - a.l) % N);
    const Coeff ci = Coeff::zeta(N, a.l);
    auto Qp = [&](int e) { return q_power(like, "Q", e); };
    // sigma(x - a) / sigma(-a) with w0 = zeta^{-l} Q^{-k}: (u w0 - 1)/(w0 - 1) = (c u - Q^k)/(c - Q^k)
    MultiSeries num = c * ep - Qp(k);
    MultiSeries den = c * one - Qp(k);
    for (int n = 1; N * n - k < Qo; ++n) {
        num = num * one_plus(like, -c, Qp(N * n - k) * ep) * one_plus(like, -ci, Qp(N * n + k) * em);
        den = den * one_plus(like, -c, Qp(N * n - k)) * one_plus(like, -ci, Qp(N * n + k));
    }
    // 1 / sigma(x), with the u^{1/2} cancelled against the quotient above
    MultiSeries sx = divide_by_variable(ep - one, "x");
    for (int n = 1; N * n < Qo; ++n) {
        sx = sx * one_plus(like, Coeff(-1), Qp(N * n) * ep) * one_plus(like, Coeff(-1), Qp(N * n) * em);
        num = num * pow(one_plus(like, Coeff(-1), Qp(N * n)), 2);
    }
    MultiSeries h = num * invert(den * sx);
    if (k != 0) h = h * exp_series(Coeff::fraction(-k, N) * x);
    return restrict_var(h, "x", x_order);
}

MultiSeries q_from_Q(const MultiSeries& s, int N) {
    const int iq = s.index_of("Q");
    MultiSeries::Terms t;
    for (const auto& [m, c] : s.terms()) {
        if (m[iq] % N != 0) throw std::invalid_argument("fractional q-power");
        Mono m2 = m;
        m2[iq] /= N;
        t[m2] = c;
    }
    auto vars = s.vars();
    vars[iq].name = "q";
    if (vars[iq].order < kUnbounded) vars[iq].order = (vars[iq].order + N - 1) / N;
    for (const auto& g : s.grades())
        if (g.mask >> iq & 1) throw std::invalid_argument("Q inside a graded constraint");
    return MultiSeries(vars, s.grades(), std::move(t));
}

}  // namespace ellgen
