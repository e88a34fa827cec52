#include "ellgen/report.hpp"

#include <random>

#include "ellgen/series_json.hpp"

namespace ellgen {

namespace {

using json = nlohmann::json;

json window_of(const MultiSeries& s) { return series_to_json(s.with_terms({})); }

class Checks {
public:
    void add(const std::string& name, bool pass, json certificate) {
        all_ = all_ && pass;
        list_.push_back({{"name", name}, {"pass", pass}, {"certificate", std::move(certificate)}});
    }
    bool all() const { return all_; }
    const json& list() const { return list_; }

private:
    json list_ = json::array();
    bool all_ = true;
};

std::vector<std::uint64_t> seeds(std::uint64_t seed, int n) {
    std::mt19937_64 gen(seed);
    std::vector<std::uint64_t> out;
    for (int i = 0; i < n; ++i) out.push_back(gen() % 1000000);
    return out;
}

struct NamedPair {
    std::string name;
    Coordinate f;
    FormalGroupLaw F;
};

std::vector<NamedPair> coordinate_pairs(int D, std::uint64_t seed, int randoms) {
    std::vector<NamedPair> out{{"identity/additive", Coordinate::identity(D + 1), additive_law(D)},
                               {"exponential/multiplicative", Coordinate::exponential(D + 1), multiplicative_law(D)}};
    for (auto s : seeds(seed, randoms))
        out.push_back({"random(" + std::to_string(s) + ")/additive", Coordinate::random(s, D + 1), additive_law(D)});
    return out;
}

bool all_permutations_fix(const ThetaSection& s) {
    std::vector<int> perm(s.p);
    for (int i = 0; i < s.p; ++i) perm[i] = i;
    do {
        if (!equal_sections(permute_slots(s, perm), s)) return false;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return true;
}

json axiom_json(const AxiomReport& r) {
    return {{"rigidity", r.rigidity}, {"symmetry", r.symmetry}, {"cocycle", r.cocycle}, {"cocycle_checked", r.cocycle_checked}};
}

void theta_suite(const RunConfig& c, Checks& out) {
    const int D = c.degree;
    for (const auto& [name, f, F] : coordinate_pairs(D, c.seed, 10)) {
        for (int p = 1; p <= 3; ++p) {
            const auto s = theta_p_from_trivialization(f, F, p);
            const auto r = check_axioms(s);
            out.add("axioms Theta^" + std::to_string(p) + " " + name, r.ok() && s.has_structure_pattern(),
                    {{"axioms", axiom_json(r)}, {"window", window_of(s.unit)}});
        }
        const auto r = verify_delta_sharp_commute(theta_p_from_trivialization(f, F, 2));
        const auto& u = r.value.unit;
        Mono deep{};
        deep[u.index_of("y")] = c.y_floor;
        deep[u.index_of(slot_name(1))] = -c.y_floor;
        out.add("delta-sharp " + name, r.trivial && u.in_window(deep),
                {{"residual", section_to_json(r.value)}, {"y_floor", c.y_floor}});
    }
    for (const auto& [name, f, F] : coordinate_pairs(std::min(D, 5), c.seed, 2))
        for (auto [k, l] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{2, 3}}) {
            const auto r = verify_theta_of_theta(f, F, k, l);
            out.add("zeta(" + std::to_string(k) + "," + std::to_string(l) + ") " + name, r.trivial,
                    {{"residual", section_to_json(r.value)}});
        }
}

void sigma_suite(const RunConfig& c, Checks& out) {
    const auto phi = phi_series(c.q_order, c.x_order, Coords::mult).body;
    MultiSeries::Terms t0;
    for (const auto& [m, v] : phi.terms())
        if (m[0] == 0) t0[m] = v;
    const bool q0 = t0 == MultiSeries::Terms{{mono({0, 0}), Coeff(1)}, {mono({0, -1}), Coeff(-1)}};
    out.add("Phi q^0 layer is 1 - u^-1", q0, {{"window", window_of(phi)}});
    for (int n : {1, 2, -1}) {
        const auto r = quasiperiodicity_check(n, c.q_order, c.x_order);
        out.add("quasi-periodicity n=" + std::to_string(n), r.is_zero(), {{"residual", series_to_json(r)}});
    }
    const auto cube = cubical_structure_series(c.q_order, std::min(c.degree, 5));
    const auto r = check_axioms(cube);
    out.add("cubical structure", r.ok() && r.cocycle_checked && all_permutations_fix(cube),
            {{"axioms", axiom_json(r)}, {"window", window_of(cube.unit)}});
    const auto a = c.level.value_or(TorsionPoint::make(2, 1, 0));
    const auto h = level_translate_factor(a, c.q_order, c.x_order);
    out.add("level factor is 1 at x = 0", h.coeff(Mono{}).is_one(), {{"torsion", torsion_to_json(a)}, {"window", window_of(h)}});
}

JacobiSeries paper_genus_for_check(const ManifoldClass& M, int q_t, int y_t) {
    for (int q_in = 3 * q_t + 2 * M.d + 2;; q_in += 2) {
        const auto J = two_variable_genus(M, q_in, Normalization::paper);
        try {
            jacobi_invariance_check(J, q_t, y_t);
            return J;
        } catch (const WindowUnderflow&) {
            if (q_in > 8 * q_t + 8 * M.d + 16) throw;
        }
    }
}

MultiSeries negate_y(const MultiSeries& s) {
    const int iy = s.index_of("y");
    MultiSeries::Terms t;
    for (const auto& [m, v] : s.terms()) t[m] = m[iy] % 2 ? -v : v;
    return s.with_terms(std::move(t));
}

void jacobi_suite(const RunConfig& c, Checks& out) {
    const std::vector<ManifoldClass> ms{complete_intersection(3, {4}), complete_intersection(4, {5})};
    for (const auto& M : ms) {
        const int span = M.d + 1;
        const auto J = paper_genus_for_check(M, c.q_order, span);
        const auto r = jacobi_invariance_check(J, c.q_order, span);
        out.add("index-0 invariance " + M.label, r.is_zero(), {{"residual", series_to_json(r)}});
        JacobiSeries bad = J;
        bad.fraction = SeriesFraction(J.fraction.num + monomial_like(J.fraction.num, mono({1, 1})), J.fraction.den);
        const auto rb = jacobi_invariance_check(bad, c.q_order, span);
        out.add("perturbed numerator detected " + M.label, !rb.is_zero(), {{"window", window_of(rb)}});
        for (const Coeff& l : {Coeff(2), Coeff::fraction(1, 2), Coeff(3)}) {
            const auto h = weight_homogeneity_check(M, l, c.q_order);
            out.add("weight homogeneity " + M.label + " lambda=" + l.str(),
                    h.uniform && h.nonvacuous && h.scale == l.pow(M.d),
                    {{"scale", coeff_to_json(h.scale)}, {"expected", coeff_to_json(l.pow(M.d))}});
        }
        const auto P = two_variable_genus(M, c.q_order, Normalization::paper);
        const auto H = two_variable_genus(M, c.q_order, Normalization::hoehn);
        const auto B = two_variable_genus(M, c.q_order, Normalization::bl);
        const auto lhs15 = negate_y(H.fraction.num) * P.fraction.den;
        const auto rhs15 = P.fraction.num * negate_y(H.fraction.den);
        out.add("Hoehn flip " + M.label, equal_within(lhs15, rhs15) && !lhs15.is_zero(),
                {{"window", window_of(lhs15 - rhs15)}});
        const auto S = sigma_at_y_inverse(c.q_order);
        const auto lhs16 = pow(embed(S.body, P.fraction.num.vars()), M.d) * P.fraction.num;
        const auto rhs16 = B.fraction.num * P.fraction.den;
        out.add("sigma^d phi = Ell " + M.label,
                equal_within(lhs16, rhs16) && !lhs16.is_zero() && M.d * S.half_y_shift == B.half_y_shift,
                {{"window", window_of(lhs16 - rhs16)}});
    }
}

void chern_suite(const RunConfig&, Checks& out) {
    for (int r = 1; r <= 6; ++r)
        for (int k = -4; k <= 4; ++k) {
            const auto rep = chern_lemma_check(r, k);
            out.add("chern lemma r=" + std::to_string(r) + " k=" + std::to_string(k), rep.ok(),
                    {{"c1", series_to_json(rep.c1)},
                     {"c2_residual", series_to_json(rep.c2 - rep.c2_expected)},
                     {"whitney_residual", series_to_json(rep.whitney_residual)},
                     {"twist_residual", series_to_json(rep.twist_residual)}});
        }
}

void fgl_suite(const RunConfig& c, Checks& out) {
    const int D = c.degree;
    std::vector<std::pair<std::string, FormalGroupLaw>> laws{{"additive", additive_law(D)},
                                                             {"multiplicative", multiplicative_law(D)}};
    for (auto s : seeds(c.seed, 3)) {
        const auto f = Coordinate::random(s, D + 1);
        laws.push_back({"random(" + std::to_string(s) + ") over additive", fgl_from_coordinate(f, BaseLaw::additive, D)});
        laws.push_back(
            {"random(" + std::to_string(s) + ") over multiplicative", fgl_from_coordinate(f, BaseLaw::multiplicative, D)});
    }
    for (const auto& [name, F] : laws) {
        const auto r = check_fgl_axioms(F);
        out.add("fgl axioms " + name, r.ok(),
                {{"unit_left", series_to_json(r.unit_left)},
                 {"unit_right", series_to_json(r.unit_right)},
                 {"commutativity", series_to_json(r.commutativity)},
                 {"associativity", series_to_json(r.associativity)}});
        const auto b = base_change_laurent(F);
        const bool one = b.certificate.terms().size() == 1 && b.certificate.constant_term().is_one();
        out.add("laurent base change " + name, one, {{"window", window_of(b.certificate)}});
    }
}

}  // namespace

std::string adjoint_name(AdjointKind k) {
    switch (k) {
        case AdjointKind::none: return "none";
        case AdjointKind::exp_mult: return "exp-mult";
        case AdjointKind::phi_add: return "phi-add";
    }
    return "";
}

AdjointKind adjoint_from_name(const std::string& s) {
    for (auto k : {AdjointKind::none, AdjointKind::exp_mult, AdjointKind::phi_add})
        if (adjoint_name(k) == s) return k;
    throw std::invalid_argument("unknown adjoint kind " + s);
}

void RunConfig::validate() const {
    if (q_order < 1 || x_order < 1 || degree < 1 || y_order < 1) throw std::invalid_argument("orders must be at least 1");
    if (y_floor > 0) throw std::invalid_argument("y-floor must be at most 0");
    if (level && adjoint != AdjointKind::none) throw std::invalid_argument("--level and --adjoint are exclusive");
}

json config_to_json(const RunConfig& c) {
    json j{{"command", c.command},
           {"q_order", c.q_order},
           {"x_order", c.x_order},
           {"y_floor", c.y_floor},
           {"degree", c.degree},
           {"normalization", normalization_name(c.normalization)},
           {"mode", c.mode == JacobiMode::fraction ? "fraction" : "expanded"},
           {"y_order", c.y_order},
           {"seed", c.seed},
           {"adjoint", adjoint_name(c.adjoint)}};
    j["level"] = c.level ? torsion_to_json(*c.level) : json(nullptr);
    return j;
}

Report run_genus(const RunConfig& c, const nlohmann::json& manifold_spec) {
    c.validate();
    const ManifoldClass M = manifold_from_json(manifold_spec);
    json doc{{"command", "genus"}, {"version", kVersion}, {"config", config_to_json(c)}, {"manifold", manifold_to_json(M)}};
    if (c.level) {
        const auto L = level_n_genus(M, *c.level, c.q_order);
        doc["kind"] = "level";
        doc["result"] = series_to_json(L.value);
        if (c.level->k == 0) doc["result_q"] = series_to_json(q_from_Q(L.value, c.level->N));
        doc["warning"] = L.warning;
    } else if (c.adjoint != AdjointKind::none) {
        const int D = std::max(c.degree, M.d + 1);
        MultiSeries g;
        if (c.adjoint == AdjointKind::exp_mult) {
            g = adjoint_genus(Coordinate::exponential(D + 1), multiplicative_law(D), M);
        } else {
            const auto f = Coordinate::from_series(phi_series(c.q_order, D + 1, Coords::exp).body);
            g = adjoint_genus(f, additive_law(D, {VarSpec::power("q", c.q_order)}), M);
        }
        doc["kind"] = "adjoint";
        doc["result"] = series_to_json(g);
    } else {
        JacobiSeries J = two_variable_genus(M, c.q_order, c.normalization);
        if (c.mode == JacobiMode::expanded) J = expand(J, c.y_order);
        doc["kind"] = "two_variable";
        doc["result"] = jacobi_to_json(J);
    }
    return {doc, kExitPass};
}

const std::vector<std::string>& verify_suites() {
    static const std::vector<std::string> s{"theta", "sigma", "jacobi", "chern", "fgl"};
    return s;
}

Report run_verify(const RunConfig& c, const std::string& suite) {
    c.validate();
    Checks checks;
    if (suite == "theta")
        theta_suite(c, checks);
    else if (suite == "sigma")
        sigma_suite(c, checks);
    else if (suite == "jacobi")
        jacobi_suite(c, checks);
    else if (suite == "chern")
        chern_suite(c, checks);
    else if (suite == "fgl")
        fgl_suite(c, checks);
    else
        throw std::invalid_argument("unknown suite " + suite);
    json doc{{"command", "verify"},
             {"version", kVersion},
             {"suite", suite},
             {"config", config_to_json(c)},
             {"checks", checks.list()},
             {"pass", checks.all()}};
    return {doc, checks.all() ? kExitPass : kExitFailure};
}

Report error_report(const std::string& command, const std::string& kind, const std::string& message, int code) {
    return {{{"command", command}, {"version", kVersion}, {"error", {{"kind", kind}, {"message", message}}}}, code};
}

nlohmann::json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const size_t upto = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
        long line = 1, col = 1;
        for (size_t i = 0; i < upto; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw std::invalid_argument(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                    ": malformed JSON");
    }
}

std::string render(const Report& r) { return r.doc.dump(2) + "\n"; }

}  // namespace ellgen
