#include "ellgen/series_json.hpp"

namespace ellgen {

using nlohmann::json;

namespace {

json bound_to_json(long v) { return v >= kUnbounded ? json(nullptr) : json(v); }

long bound_from_json(const json& j) { return j.is_null() ? kUnbounded : j.get<long>(); }

mpq_class parse_q(const json& num, const json& den) {
    mpq_class q(mpz_class(num.get<std::string>()), mpz_class(den.get<std::string>()));
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator in series record");
    q.canonicalize();
    return q;
}

}  // namespace

json coeff_to_json(const Coeff& c) {
    json t;
    auto comps = c.components();
    t["num"] = comps[0].get_num().get_str();
    t["den"] = comps[0].get_den().get_str();
    if (!c.is_rational()) {
        json cy = json::array();
        for (const auto& q : comps) cy.push_back({{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}});
        t["cyclo"] = {{"level", c.level()}, {"coeffs", cy}};
    }
    return t;
}

Coeff coeff_from_json(const json& j) {
    if (!j.contains("cyclo")) return Coeff(parse_q(j.at("num"), j.at("den")));
    const auto& cy = j.at("cyclo");
    std::vector<mpq_class> v;
    for (const auto& q : cy.at("coeffs")) v.push_back(parse_q(q.at("num"), q.at("den")));
    return Coeff::cyclotomic(cy.at("level").get<int>(), std::move(v));
}

json series_to_json(const MultiSeries& s) {
    json vars = json::array();
    for (const auto& v : s.vars())
        vars.push_back({{"name", v.name},
                        {"kind", v.kind == VarKind::power ? "power" : "laurent"},
                        {"order", bound_to_json(v.order)},
                        {"floor", v.floor}});
    json grades = json::array();
    for (const auto& g : s.grades()) {
        json names = json::array();
        for (size_t i = 0; i < s.nvars(); ++i)
            if (g.mask >> i & 1) names.push_back(s.vars()[i].name);
        grades.push_back({{"vars", names}, {"order", bound_to_json(g.order)}, {"floor", g.floor}});
    }
    json terms = json::array();
    for (const auto& [m, c] : s.terms()) {
        json t = coeff_to_json(c);
        t["exps"] = std::vector<int>(m.begin(), m.begin() + s.nvars());
        terms.push_back(std::move(t));
    }
    json out = {{"vars", vars}, {"terms", terms}};
    if (!grades.empty()) out["grades"] = grades;
    return out;
}

MultiSeries series_from_json(const json& j) {
    std::vector<VarSpec> vars;
    for (const auto& v : j.at("vars")) {
        VarSpec s;
        s.name = v.at("name").get<std::string>();
        const auto kind = v.at("kind").get<std::string>();
        if (kind == "power")
            s.kind = VarKind::power;
        else if (kind == "laurent")
            s.kind = VarKind::laurent;
        else
            throw std::invalid_argument("unknown variable kind " + kind);
        s.order = bound_from_json(v.at("order"));
        s.floor = v.at("floor").get<long>();
        vars.push_back(std::move(s));
    }
    std::vector<Grade> grades;
    if (j.contains("grades")) {
        MultiSeries probe(vars);
        for (const auto& g : j.at("grades"))
            grades.push_back({probe.mask_of(g.at("vars").get<std::vector<std::string>>()), bound_from_json(g.at("order")),
                              g.at("floor").get<long>()});
    }
    MultiSeries::Terms terms;
    for (const auto& t : j.at("terms")) {
        auto e = t.at("exps").get<std::vector<int>>();
        if (e.size() != vars.size()) throw std::invalid_argument("exponent vector length mismatch");
        Mono m{};
        std::copy(e.begin(), e.end(), m.begin());
        terms[m] += coeff_from_json(t);
    }
    return MultiSeries(std::move(vars), std::move(grades), std::move(terms));
}

json fraction_to_json(const SeriesFraction& f) {
    return {{"num", series_to_json(f.num)}, {"den", series_to_json(f.den)}};
}

SeriesFraction fraction_from_json(const json& j) {
    return SeriesFraction(series_from_json(j.at("num")), series_from_json(j.at("den")));
}

}  // namespace ellgen
