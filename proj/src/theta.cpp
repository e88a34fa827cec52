#include "ellgen/theta.hpp"

#include <bit>

#include "ellgen/series_json.hpp"

namespace ellgen {

namespace {

bool is_slot(const std::string& name) {
    if (name.size() < 2 || name[0] != 'x') return false;
    for (size_t i = 1; i < name.size(); ++i)
        if (name[i] < '0' || name[i] > '9') return false;
    return true;
}

std::vector<VarSpec> with_slots(std::vector<VarSpec> base, int p) {
    for (int i = 1; i <= p; ++i) base.push_back(VarSpec::power(slot_name(i)));
    return base;
}

unsigned slot_mask(const std::vector<VarSpec>& vars) {
    unsigned m = 0;
    for (size_t i = 0; i < vars.size(); ++i)
        if (is_slot(vars[i].name)) m |= 1u << i;
    return m;
}

MultiSeries clip(const MultiSeries& u, int degree) {
    const unsigned m = slot_mask(u.vars());
    if (m == 0) return u;
    return restrict(u, {{m, degree + 1, 0}});
}

// F-sum of the slots in the bitmask I, over the variables of `like`
MultiSeries slot_sum(const FormalGroupLaw& F, const MultiSeries& like, unsigned I) {
    std::vector<std::string> names;
    for (int j = 0; j < 32; ++j)
        if (I >> j & 1) names.push_back(slot_name(j + 1));
    return fgl_sum(F, like, names);
}

// g(value) for a series g in the variable `var` over a subset of value's variables
MultiSeries compose(const MultiSeries& g, const std::string& var, const MultiSeries& value) {
    auto tmp = value.vars();
    tmp.push_back(VarSpec::power("_t"));
    MultiSeries G = embed(rename(g, var, "_t"), tmp);
    return embed(substitute(G, "_t", embed(value, tmp)), value.vars());
}

MultiSeries signed_power(const MultiSeries& v, int e) {
    return e >= 0 ? pow(v, e) : pow(invert(v), -e);
}

std::map<unsigned, int> clean(std::map<unsigned, int> eps) {
    for (auto it = eps.begin(); it != eps.end();)
        it = it->second == 0 ? eps.erase(it) : std::next(it);
    return eps;
}

bool unit_is_one(const MultiSeries& u) {
    return u.in_window(Mono{}) && equal_within(u, constant_like(u, Coeff(1)));
}

}  // namespace

std::string slot_name(int i) { return "x" + std::to_string(i); }

bool ThetaSection::has_structure_pattern() const {
    auto e = clean(eps);
    if (e.size() != (1u << p) - 1) return false;
    for (const auto& [I, v] : e)
        if (v != (std::popcount(I) % 2 ? 1 : -1)) return false;
    return true;
}

std::vector<VarSpec> ThetaSection::base_vars() const {
    std::vector<VarSpec> out;
    for (const auto& v : unit.vars())
        if (!is_slot(v.name)) out.push_back(v);
    return out;
}

ThetaSection theta_p_from_trivialization(const Coordinate& f, const FormalGroupLaw& F, int p) {
    if (p < 1 || p > 4) throw std::invalid_argument("arity out of range");
    auto vars = with_slots(F.base_vars(), p);
    MultiSeries like(vars);
    MultiSeries q = f.quotient();
    ThetaSection s{p, F, constant_like(like, Coeff(1)), {}, BaseKind::ordinary};
    for (unsigned I = 1; I < (1u << p); ++I) {
        const int e = std::popcount(I) % 2 ? 1 : -1;
        s.unit = s.unit * signed_power(clip(compose(q, "x", slot_sum(F, like, I)), F.degree), e);
        s.eps[I] = e;
    }
    s.unit = clip(s.unit, F.degree);
    return s;
}

ThetaSection trivial_section(const ThetaSection& like, int p) {
    auto vars = with_slots(like.base_vars(), p);
    return {p, like.fgl, constant_like(MultiSeries(vars), Coeff(1)), {}, like.base_kind};
}

ThetaSection operator*(const ThetaSection& a, const ThetaSection& b) {
    if (a.p != b.p) throw std::invalid_argument("sections of different arity");
    ThetaSection r = a;
    r.unit = a.unit * b.unit;
    for (const auto& [I, e] : b.eps) r.eps[I] += e;
    r.eps = clean(r.eps);
    return r;
}

ThetaSection inverse(const ThetaSection& s) {
    ThetaSection r = s;
    r.unit = invert(s.unit);
    for (auto& [I, e] : r.eps) e = -e;
    return r;
}

ThetaSection quotient(const ThetaSection& a, const ThetaSection& b) { return a * inverse(b); }

ThetaSection pullback(const ThetaSection& s, int new_p, const std::vector<unsigned>& images) {
    if (images.size() != static_cast<size_t>(s.p)) throw std::invalid_argument("pullback needs one image per slot");
    unsigned used = 0;
    for (unsigned m : images) {
        if (m >> new_p) throw std::invalid_argument("pullback image out of range");
        if (used & m) throw std::invalid_argument("pullback images must be disjoint");
        used |= m;
    }
    const auto final_vars = with_slots(s.base_vars(), new_p);
    auto tmp = final_vars;
    std::vector<int> map(s.unit.nvars(), -1);
    for (size_t i = 0; i < s.unit.nvars(); ++i) {
        const auto& name = s.unit.vars()[i].name;
        if (!is_slot(name)) {
            for (size_t j = 0; j < final_vars.size(); ++j)
                if (final_vars[j].name == name) map[i] = static_cast<int>(j);
            continue;
        }
        const int k = std::stoi(name.substr(1)) - 1;
        if (std::popcount(images[k]) == 1) {
            map[i] = static_cast<int>(s.base_vars().size()) + std::countr_zero(images[k]);
        } else {
            map[i] = static_cast<int>(tmp.size());
            tmp.push_back(VarSpec::power("_s" + std::to_string(k + 1)));
        }
    }
    MultiSeries u = remap(s.unit, tmp, map);
    MultiSeries like(tmp);
    for (int k = 0; k < s.p; ++k) {
        if (std::popcount(images[k]) == 1) continue;
        const std::string tv = "_s" + std::to_string(k + 1);
        u = images[k] == 0 ? substitute_zero(u, tv) : substitute(u, tv, slot_sum(s.fgl, like, images[k]));
    }
    u = embed(u, final_vars);
    const unsigned nb = static_cast<unsigned>(s.base_vars().size());
    const unsigned fresh = (((1u << new_p) - 1) & ~used) << nb;
    unsigned lm = 0;
    for (size_t i = 0; i < u.nvars(); ++i)
        if (u.vars()[i].kind == VarKind::laurent) lm |= 1u << i;
    std::vector<Grade> wide;
    if (fresh != 0) {
        for (size_t i = 0; i < u.nvars(); ++i)
            if ((lm >> i & 1) && u.vars()[i].order < kUnbounded)
                wide.push_back({(1u << i) | fresh, u.vars()[i].order, u.vars()[i].floor});
        for (const auto& g : u.grades())
            if ((g.mask & lm) && g.order < kUnbounded) wide.push_back({g.mask | fresh, g.order, g.floor});
    }
    if (!wide.empty()) {
        auto vars = u.vars();
        for (size_t i = 0; i < vars.size(); ++i)
            if (lm >> i & 1) vars[i].order = kUnbounded;
        std::vector<Grade> gs;
        for (const auto& g : u.grades())
            if (!(g.mask & lm) || g.order >= kUnbounded) gs.push_back(g);
        for (const auto& g : wide) gs.push_back(g);
        u = MultiSeries(vars, gs, u.terms());
    }
    ThetaSection r{new_p, s.fgl, clip(u, s.fgl.degree), {}, s.base_kind};
    for (const auto& [I, e] : s.eps) {
        unsigned J = 0;
        for (int k = 0; k < s.p; ++k)
            if (I >> k & 1) J |= images[k];
        if (J != 0) r.eps[J] += e;
    }
    r.eps = clean(r.eps);
    return r;
}

ThetaSection permute_slots(const ThetaSection& s, const std::vector<int>& perm) {
    std::vector<unsigned> images;
    for (int k : perm) images.push_back(1u << k);
    return pullback(s, s.p, images);
}

bool is_trivial(const ThetaSection& s) { return clean(s.eps).empty() && unit_is_one(s.unit); }

bool equal_sections(const ThetaSection& a, const ThetaSection& b) {
    return a.p == b.p && clean(a.eps) == clean(b.eps) && a.unit.in_window(Mono{}) && b.unit.in_window(Mono{}) &&
           equal_within(a.unit, b.unit);
}

ThetaSection delta(const ThetaSection& s) {
    const int p = s.p;
    auto images = [&](unsigned first) {
        std::vector<unsigned> im{first};
        for (int j = 1; j < p; ++j) im.push_back(1u << (j + 1));
        return im;
    };
    ThetaSection a = pullback(s, p + 1, images(0b01));
    ThetaSection b = pullback(s, p + 1, images(0b10));
    ThetaSection c = pullback(s, p + 1, images(0b11));
    ThetaSection d = pullback(s, p + 1, images(0));
    return quotient(a * b, c * d);
}

AxiomReport check_axioms(const ThetaSection& s, bool cocycle_for_p4) {
    AxiomReport r;
    MultiSeries u0 = s.unit;
    for (int i = 1; i <= s.p; ++i) u0 = substitute_zero(u0, slot_name(i));
    r.rigidity = unit_is_one(u0);
    r.symmetry = true;
    for (int i = 0; i < s.p && r.symmetry; ++i)
        for (int j = i + 1; j < s.p && r.symmetry; ++j) {
            std::vector<int> perm(s.p);
            for (int k = 0; k < s.p; ++k) perm[k] = k;
            std::swap(perm[i], perm[j]);
            r.symmetry = equal_sections(permute_slots(s, perm), s);
        }
    r.cocycle_checked = s.p > 1 && (s.p < 4 || cocycle_for_p4);
    if (r.cocycle_checked) {
        const int n = s.p + 1;
        auto images = [&](unsigned a, unsigned b) {
            std::vector<unsigned> im{a, b};
            for (int j = 2; j < s.p; ++j) im.push_back(1u << (j + 1));
            return im;
        };
        ThetaSection t1 = pullback(s, n, images(0b010, 0b100));
        ThetaSection t2 = pullback(s, n, images(0b011, 0b100));
        ThetaSection t3 = pullback(s, n, images(0b001, 0b110));
        ThetaSection t4 = pullback(s, n, images(0b001, 0b010));
        r.cocycle = is_trivial(quotient(t1 * t3, t2 * t4));
    }
    return r;
}

ThetaSection sharp(const ThetaSection& s, const std::string& y) {
    if (s.p < 2) throw std::invalid_argument("sharp needs arity at least 2");
    const int p = s.p - 1;
    std::vector<VarSpec> base{VarSpec::laurent(y, 0)};
    for (const auto& v : s.base_vars()) base.push_back(v);
    const auto vars = with_slots(base, p);
    MultiSeries u = embed(rename(s.unit, slot_name(s.p), y), vars);
    MultiSeries like(vars);
    const int iy = like.index_of(y);
    auto tmp = vars;
    tmp.push_back(VarSpec::power("_a"));
    MultiSeries Fy = embed(rename(rename(s.fgl.F, "x1", "_a"), "x2", y), tmp);
    ThetaSection r{p, s.fgl, u, {}, BaseKind::laurent};
    const unsigned last = 1u << p;
    for (const auto& [I, e] : s.eps) {
        if (!(I & last)) {
            r.eps[I] += e;
            continue;
        }
        const unsigned rest = I & ~last;
        if (rest == 0) {
            Mono m{};
            m[iy] = e;
            r.unit = shift(r.unit, m);
            continue;
        }
        MultiSeries v = embed(substitute(Fy, "_a", embed(slot_sum(s.fgl, like, rest), tmp)), vars);
        r.unit = r.unit * signed_power(clip(v, s.fgl.degree), e);
    }
    r.unit = clip(r.unit, s.fgl.degree);
    r.eps = clean(r.eps);
    return r;
}

Residual verify_delta_sharp_commute(const ThetaSection& s) {
    if (s.p != 2) throw std::invalid_argument("delta/sharp commutation is checked on arity 2");
    ThetaSection v = quotient(delta(sharp(s)), sharp(delta(s)));
    return {v, is_trivial(v)};
}

Residual verify_theta_of_theta(const Coordinate& f, const FormalGroupLaw& F, int k, int l) {
    const int n = k + l - 1;
    if (k < 1 || l < 1 || n < 2 || n > 4) throw std::invalid_argument("arity bound exceeded");
    ThetaSection sl = theta_p_from_trivialization(f, F, l);
    ThetaSection t = trivial_section(sl, n);
    for (unsigned I = 0; I < (1u << k); ++I) {
        std::vector<unsigned> images{I};
        for (int j = 1; j < l; ++j) images.push_back(1u << (k + j - 1));
        ThetaSection pulled = pullback(sl, n, images);
        t = t * (std::popcount(I) % 2 ? pulled : inverse(pulled));
    }
    ThetaSection v = quotient(t, theta_p_from_trivialization(f, F, n));
    return {v, is_trivial(v)};
}

nlohmann::json section_to_json(const ThetaSection& s) {
    nlohmann::json eps = nlohmann::json::array();
    for (const auto& [I, e] : clean(s.eps)) {
        std::vector<int> subset;
        for (int j = 0; j < s.p; ++j)
            if (I >> j & 1) subset.push_back(j + 1);
        eps.push_back({{"subset", subset}, {"exponent", e}});
    }
    return {{"p", s.p},
            {"fgl", fgl_to_json(s.fgl)},
            {"unit", series_to_json(s.unit)},
            {"eps", eps},
            {"base_kind", s.base_kind == BaseKind::laurent ? "laurent" : "ordinary"}};
}

ThetaSection section_from_json(const nlohmann::json& j) {
    ThetaSection s;
    s.p = j.at("p").get<int>();
    s.fgl = fgl_from_json(j.at("fgl"));
    s.unit = series_from_json(j.at("unit"));
    for (const auto& e : j.at("eps")) {
        unsigned I = 0;
        for (int k : e.at("subset")) I |= 1u << (k - 1);
        s.eps[I] = e.at("exponent").get<int>();
    }
    s.base_kind = j.at("base_kind").get<std::string>() == "laurent" ? BaseKind::laurent : BaseKind::ordinary;
    return s;
}

}  // namespace ellgen
