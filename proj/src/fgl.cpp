#include "ellgen/fgl.hpp"

#include <random>

#include "ellgen/series_json.hpp"

namespace ellgen {

namespace {

std::vector<VarSpec> with_slots(const std::vector<VarSpec>& base, std::initializer_list<const char*> names) {
    auto v = base;
    for (const char* n : names) v.push_back(VarSpec::power(n));
    return v;
}

unsigned mask_named(const std::vector<VarSpec>& vars, std::initializer_list<const char*> names) {
    unsigned m = 0;
    for (const char* n : names)
        for (size_t i = 0; i < vars.size(); ++i)
            if (vars[i].name == n) m |= 1u << i;
    return m;
}

std::vector<VarSpec> strip(const std::vector<VarSpec>& vars, std::initializer_list<const char*> names) {
    std::vector<VarSpec> out;
    for (const auto& v : vars) {
        bool drop = false;
        for (const char* n : names)
            if (v.name == n) drop = true;
        if (!drop) out.push_back(v);
    }
    return out;
}

FormalGroupLaw law_from_polynomial(const std::vector<VarSpec>& base, int degree, bool mult) {
    auto vars = with_slots(base, {"x1", "x2"});
    std::vector<Grade> g{{mask_named(vars, {"x1", "x2"}), degree + 1, 1}};
    MultiSeries probe(vars, g);
    auto x1 = variable_like(probe, "x1"), x2 = variable_like(probe, "x2");
    MultiSeries F = restrict(x1 + x2, g);
    if (mult) F = F - restrict(x1 * x2, g);
    return {F, degree, mult ? Provenance::multiplicative : Provenance::additive};
}

}  // namespace

std::string provenance_name(Provenance p) {
    switch (p) {
        case Provenance::additive: return "additive";
        case Provenance::multiplicative: return "multiplicative";
        case Provenance::from_coordinate: return "from_coordinate";
        case Provenance::random: return "random";
    }
    return "additive";
}

Provenance provenance_from_name(const std::string& s) {
    if (s == "additive") return Provenance::additive;
    if (s == "multiplicative") return Provenance::multiplicative;
    if (s == "from_coordinate") return Provenance::from_coordinate;
    if (s == "random") return Provenance::random;
    throw std::invalid_argument("unknown provenance " + s);
}

Coordinate Coordinate::from_series(MultiSeries f) {
    if (!f.has_var("x")) throw NotACoordinate("coordinate must be a series in x");
    for (const auto& v : f.vars())
        if (v.kind != VarKind::power) throw NotACoordinate("coordinate base variables must be power series variables");
    const int x = f.index_of("x");
    if (f.vars()[x].order < 2) throw NotACoordinate("coordinate window too small");
    if (!slice(f, "x", 0).is_zero()) throw NotACoordinate("f(0) != 0");
    auto lin = slice(f, "x", 1);
    if (lin.terms().size() != 1 || !lin.constant_term().is_one() || !lin.in_window(Mono{}))
        throw NotACoordinate("f'(0) != 1");
    return Coordinate(std::move(f));
}

Coordinate Coordinate::identity(int degree) {
    return from_series(ellgen::polynomial({VarSpec::power("x", degree + 1)}, {}, {{mono({1}), 1}}));
}

Coordinate Coordinate::exponential(int degree) {
    MultiSeries::Terms t;
    mpz_class fact = 1;
    for (int k = 1; k <= degree; ++k) {
        fact *= k;
        t[mono({k})] = Coeff(mpq_class(k % 2 ? 1 : -1, 1) / mpq_class(fact));
    }
    return from_series(MultiSeries({VarSpec::power("x", degree + 1)}, {}, t));
}

Coordinate Coordinate::polynomial(const std::vector<Coeff>& higher, int degree) {
    MultiSeries::Terms t;
    t[mono({1})] = 1;
    for (size_t k = 0; k < higher.size(); ++k) t[mono({static_cast<int>(k) + 2})] = higher[k];
    return from_series(MultiSeries({VarSpec::power("x", degree + 1)}, {}, t));
}

Coordinate Coordinate::random(std::uint64_t seed, int degree) {
    std::mt19937_64 rng(seed);
    std::vector<Coeff> c;
    for (int k = 2; k <= degree; ++k) {
        long num = static_cast<long>(rng() % 9) - 4;
        long den = static_cast<long>(rng() % 3) + 1;
        c.push_back(Coeff::fraction(num, den));
    }
    return polynomial(c, degree);
}

std::vector<VarSpec> Coordinate::base_vars() const { return strip(f_.vars(), {"x"}); }

MultiSeries Coordinate::quotient() const { return divide_by_variable(f_, "x"); }

MultiSeries Coordinate::inverse() const {
    MultiSeries x = variable_like(f_, "x");
    MultiSeries g = restrict_var(x, "x", order());
    for (long k = 1; k < order(); ++k) g = g - (substitute(f_, "x", g) - x);
    return g;
}

std::vector<VarSpec> FormalGroupLaw::base_vars() const { return strip(F.vars(), {"x1", "x2"}); }

FormalGroupLaw additive_law(int degree, const std::vector<VarSpec>& base) {
    return law_from_polynomial(base, degree, false);
}

FormalGroupLaw multiplicative_law(int degree, const std::vector<VarSpec>& base) {
    return law_from_polynomial(base, degree, true);
}

FormalGroupLaw fgl_from_coordinate(const Coordinate& f, BaseLaw base, int degree) {
    auto base_vars = f.base_vars();
    auto vars = with_slots(base_vars, {"x1", "x2"});
    vars.push_back(VarSpec::power("x"));
    std::vector<Grade> g{{mask_named(vars, {"x1", "x2"}), degree + 1, 1}};
    MultiSeries probe(vars, g);
    MultiSeries ginv = embed(f.inverse(), vars);
    MultiSeries a = substitute(ginv, "x", variable_like(probe, "x1"));
    MultiSeries b = substitute(ginv, "x", variable_like(probe, "x2"));
    MultiSeries s = base == BaseLaw::additive ? a + b : a + b - a * b;
    MultiSeries F = substitute(embed(f.series(), vars), "x", restrict(s, g));
    F = embed(restrict(F, g), with_slots(base_vars, {"x1", "x2"}));
    return {F, degree, Provenance::from_coordinate};
}

bool FglReport::ok() const {
    return unit_left.is_zero() && unit_right.is_zero() && commutativity.is_zero() && associativity.is_zero();
}

MultiSeries fgl_eval(const FormalGroupLaw& F, const MultiSeries& a, const MultiSeries& b) {
    auto vars = a.vars();
    vars.push_back(VarSpec::power("_a"));
    vars.push_back(VarSpec::power("_b"));
    MultiSeries Fe = embed(rename(rename(F.F, "x1", "_a"), "x2", "_b"), vars);
    MultiSeries r = substitute(Fe, "_a", embed(a, vars));
    r = substitute(r, "_b", embed(b, vars));
    return embed(r, a.vars());
}

MultiSeries fgl_sum(const FormalGroupLaw& F, const MultiSeries& like, const std::vector<std::string>& names) {
    if (names.empty()) return constant_like(like, Coeff(0));
    MultiSeries acc = variable_like(like, names[0]);
    for (size_t i = 1; i < names.size(); ++i) acc = fgl_eval(F, acc, variable_like(like, names[i]));
    return acc;
}

FglReport check_fgl_axioms(const FormalGroupLaw& F) {
    FglReport r;
    MultiSeries x1 = variable_like(F.F, "x1"), x2 = variable_like(F.F, "x2");
    r.unit_left = substitute_zero(F.F, "x2") - x1;
    r.unit_right = substitute_zero(F.F, "x1") - x2;
    const int i1 = F.F.index_of("x1"), i2 = F.F.index_of("x2");
    std::vector<int> perm(F.F.nvars());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    std::swap(perm[i1], perm[i2]);
    r.commutativity = F.F - permute(F.F, perm);
    auto vars = F.F.vars();
    vars.push_back(VarSpec::power("x3"));
    MultiSeries probe(vars);
    MultiSeries a = variable_like(probe, "x1"), b = variable_like(probe, "x2"), c = variable_like(probe, "x3");
    r.associativity = fgl_eval(F, fgl_eval(F, a, b), c) - fgl_eval(F, a, fgl_eval(F, b, c));
    return r;
}

MultiSeries formal_inverse(const FormalGroupLaw& F) {
    auto vars = F.base_vars();
    vars.push_back(VarSpec::power("x"));
    MultiSeries probe(vars);
    MultiSeries x = variable_like(probe, "x");
    MultiSeries iota = -restrict_var(x, "x", F.degree + 1);
    for (int k = 1; k <= F.degree; ++k) iota = iota - fgl_eval(F, x, iota);
    return iota;
}

LaurentBaseChange base_change_laurent(const FormalGroupLaw& F, const std::string& y, VarKind kind) {
    std::vector<VarSpec> vars;
    vars.push_back(kind == VarKind::laurent ? VarSpec::laurent(y, 0) : VarSpec::power(y));
    for (const auto& v : F.base_vars()) vars.push_back(v);
    vars.push_back(VarSpec::power("x"));
    MultiSeries value = restrict_var(embed(rename(rename(F.F, "x1", "x"), "x2", y), vars), "x", F.degree + 1);
    MultiSeries inv = invert(value);
    return {value, inv, value * inv};
}

nlohmann::json fgl_to_json(const FormalGroupLaw& F) {
    return {{"degree", F.degree}, {"provenance", provenance_name(F.provenance)}, {"series", series_to_json(F.F)}};
}

FormalGroupLaw fgl_from_json(const nlohmann::json& j) {
    return {series_from_json(j.at("series")), j.at("degree").get<int>(),
            provenance_from_name(j.at("provenance").get<std::string>())};
}

}  // namespace ellgen
