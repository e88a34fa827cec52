#include "ellgen/genus.hpp"

#include <numeric>
#include <sstream>

#include "ellgen/series_json.hpp"

namespace ellgen {

namespace {

void partitions_rec(int n, int max, Partition& cur, std::vector<Partition>& out) {
    if (n == 0) {
        out.push_back(cur);
        return;
    }
    for (int p = std::min(n, max); p >= 1; --p) {
        cur.push_back(p);
        partitions_rec(n - p, p, cur, out);
        cur.pop_back();
    }
}

Partition sorted(Partition p) {
    std::sort(p.begin(), p.end(), std::greater<int>());
    return p;
}

// polynomials in e_1, e_2, ... keyed by the partition of indices
using EPoly = std::map<Partition, mpq_class>;

EPoly emul(const EPoly& a, const EPoly& b, int max_degree) {
    EPoly r;
    for (const auto& [pa, ca] : a)
        for (const auto& [pb, cb] : b) {
            const int deg = std::accumulate(pa.begin(), pa.end(), 0) + std::accumulate(pb.begin(), pb.end(), 0);
            if (deg > max_degree) continue;
            Partition p = pa;
            p.insert(p.end(), pb.begin(), pb.end());
            r[sorted(p)] += ca * cb;
        }
    for (auto it = r.begin(); it != r.end();)
        it = it->second == 0 ? r.erase(it) : std::next(it);
    return r;
}

// power sums p_1..p_d in the elementary basis (Newton's identities)
std::vector<EPoly> power_sums(int d) {
    std::vector<EPoly> p(d + 1);
    for (int k = 1; k <= d; ++k) {
        EPoly pk{{Partition{k}, mpq_class(k % 2 ? k : -k)}};
        for (int i = 1; i < k; ++i) {
            EPoly term = emul(EPoly{{Partition{i}, mpq_class(i % 2 ? 1 : -1)}}, p[k - i], d);
            for (const auto& [m, c] : term) pk[m] += c;
        }
        for (auto it = pk.begin(); it != pk.end();)
            it = it->second == 0 ? pk.erase(it) : std::next(it);
        p[k] = pk;
    }
    return p;
}

mpq_class factorial(int n) {
    mpz_class f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return mpq_class(f);
}

// (integral of p_mu over M) / prod_k m_k(mu)!
std::map<Partition, mpq_class> power_sum_weights(const ManifoldClass& M) {
    const auto p = power_sums(M.d);
    std::map<Partition, mpq_class> out;
    for (const auto& mu : partitions(M.d)) {
        EPoly prod{{Partition{}, mpq_class(1)}};
        std::map<int, int> mult;
        for (int part : mu) {
            prod = emul(prod, p[part], M.d);
            ++mult[part];
        }
        mpq_class v = 0;
        for (const auto& [lam, c] : prod) v += c * mpq_class(M.chern_number(lam));
        for (const auto& [part, m] : mult) v /= factorial(m);
        if (v != 0) out[mu] = v;
    }
    return out;
}

MultiSeries fit(const MultiSeries& like, const MultiSeries& s) {
    std::vector<Grade> g = like.grades();
    for (size_t i = 0; i < like.nvars(); ++i)
        if (like.vars()[i].order < kUnbounded) g.push_back({1u << i, like.vars()[i].order, like.vars()[i].floor});
    return restrict(s, g);
}

MultiSeries mono_like(const MultiSeries& like, std::initializer_list<std::pair<const char*, int>> e,
                      const Coeff& c = Coeff(1)) {
    Mono m{};
    for (const auto& [name, k] : e) m[like.index_of(name)] = k;
    for (size_t i = 0; i < like.nvars(); ++i)
        if (m[i] >= like.vars()[i].order) return fit(like, constant_like(like, Coeff(0)));
    return fit(like, monomial_like(like, m, c));
}

void product_rec(const ManifoldClass& a, const ManifoldClass& b, const Partition& lam, size_t i, Partition& pa,
                 Partition& pb, int da, int db, long& acc) {
    if (da > a.d || db > b.d) return;
    if (i == lam.size()) {
        if (da == a.d && db == b.d) acc += a.chern_number(sorted(pa)) * b.chern_number(sorted(pb));
        return;
    }
    for (int s = 0; s <= lam[i]; ++s) {
        if (s) pa.push_back(s);
        if (lam[i] - s) pb.push_back(lam[i] - s);
        product_rec(a, b, lam, i + 1, pa, pb, da + s, db + lam[i] - s, acc);
        if (lam[i] - s) pb.pop_back();
        if (s) pa.pop_back();
    }
}

std::vector<VarSpec> without(const std::vector<VarSpec>& vars, std::string_view name) {
    std::vector<VarSpec> out;
    for (const auto& v : vars)
        if (v.name != name) out.push_back(v);
    return out;
}

MultiSeries scale_variable(const MultiSeries& h, std::string_view x, const Coeff& lambda) {
    const int ix = h.index_of(x);
    MultiSeries::Terms t;
    for (const auto& [m, c] : h.terms()) t[m] = c * lambda.pow(m[ix]);
    return h.with_terms(std::move(t));
}

}  // namespace

std::vector<Partition> partitions(int n) {
    std::vector<Partition> out;
    Partition cur;
    partitions_rec(n, n, cur, out);
    return out;
}

std::string partition_key(const Partition& p) {
    std::string s;
    for (size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
    return s;
}

Partition partition_from_key(const std::string& key) {
    Partition p;
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, ','))
        if (!part.empty()) p.push_back(std::stoi(part));
    for (int v : p)
        if (v < 1) throw std::invalid_argument("partition parts must be positive");
    return sorted(p);
}

long ManifoldClass::chern_number(const Partition& p) const {
    auto it = chern.find(p);
    if (it == chern.end()) throw std::invalid_argument("no Chern number for partition " + partition_key(p));
    return it->second;
}

bool ManifoldClass::c1_divisible_by(long N) const {
    if (c1_zero) return true;
    return c1_mod && *c1_mod % N == 0;
}

ManifoldClass point_manifold() { return {0, {{Partition{}, 1}}, true, 0, "pt"}; }

ManifoldClass manifold_from_chern_numbers(int d, std::map<Partition, long> numbers, bool c1_zero,
                                          std::optional<long> c1_mod, std::string label) {
    if (d < 0) throw std::invalid_argument("negative dimension");
    ManifoldClass m{d, {}, c1_zero, c1_mod, std::move(label)};
    if (c1_zero) m.c1_mod = 0;
    for (const auto& [p, v] : numbers) {
        Partition s = sorted(p);
        if (std::accumulate(s.begin(), s.end(), 0) != d)
            throw std::invalid_argument("partition " + partition_key(s) + " does not sum to the dimension");
        m.chern[s] = v;
    }
    for (const auto& p : partitions(d)) {
        const bool has_one = std::find(p.begin(), p.end(), 1) != p.end();
        auto it = m.chern.find(p);
        if (c1_zero && has_one) {
            if (it != m.chern.end() && it->second != 0)
                throw std::invalid_argument("c1 = 0 but the Chern number " + partition_key(p) + " is nonzero");
            m.chern[p] = 0;
        } else if (it == m.chern.end()) {
            throw std::invalid_argument("missing Chern number for partition " + partition_key(p));
        }
    }
    return m;
}

ManifoldClass complete_intersection(int n, const std::vector<int>& degrees) {
    const int r = static_cast<int>(degrees.size());
    if (n < 1 || r >= n) throw std::invalid_argument("complete intersection needs 0 <= r < n");
    for (int dj : degrees)
        if (dj < 1) throw std::invalid_argument("degrees must be positive");
    const int m = n - r;
    std::vector<mpz_class> c(m + 1, 0);
    for (int i = 0; i <= m; ++i) {
        mpz_class b;
        mpz_bin_uiui(b.get_mpz_t(), n + 1, i);
        c[i] = b;
    }
    long deg = 1, sum = 0;
    for (int dj : degrees) {
        deg *= dj;
        sum += dj;
        for (int i = m; i >= 1; --i)
            for (int j = 0; j < i; ++j) {
                mpz_class t = c[j];
                for (int e = j; e < i; ++e) t *= -dj;
                c[i] += t;
            }
    }
    std::map<Partition, long> numbers;
    for (const auto& p : partitions(m)) {
        mpz_class v = deg;
        for (int part : p) v *= c[part];
        numbers[p] = v.get_si();
    }
    std::string label = "CI(" + std::to_string(n) + ";";
    for (size_t i = 0; i < degrees.size(); ++i) label += (i ? "," : "") + std::to_string(degrees[i]);
    label += ")";
    const long c1 = n + 1 - sum;
    return manifold_from_chern_numbers(m, numbers, c1 == 0, c1 < 0 ? -c1 : c1, label);
}

ManifoldClass product_manifold(const ManifoldClass& a, const ManifoldClass& b) {
    std::map<Partition, long> numbers;
    for (const auto& lam : partitions(a.d + b.d)) {
        long acc = 0;
        Partition pa, pb;
        product_rec(a, b, lam, 0, pa, pb, 0, 0, acc);
        numbers[lam] = acc;
    }
    std::optional<long> mod;
    if (a.c1_mod && b.c1_mod) mod = std::gcd(*a.c1_mod, *b.c1_mod);
    return manifold_from_chern_numbers(a.d + b.d, numbers, a.c1_zero && b.c1_zero, mod,
                                       a.label + "x" + b.label);
}

nlohmann::json manifold_to_json(const ManifoldClass& m) {
    nlohmann::json numbers = nlohmann::json::object();
    for (const auto& [p, v] : m.chern) numbers[partition_key(p)] = v;
    nlohmann::json j{{"type", "chern_numbers"}, {"dim", m.d}, {"numbers", numbers}, {"c1_zero", m.c1_zero},
                     {"label", m.label}};
    j["c1_mod"] = m.c1_mod ? nlohmann::json(*m.c1_mod) : nlohmann::json(nullptr);
    return j;
}

ManifoldClass manifold_from_json(const nlohmann::json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "complete_intersection")
        return complete_intersection(j.at("ambient").get<int>(), j.value("degrees", std::vector<int>{}));
    if (type == "product") {
        ManifoldClass m = point_manifold();
        for (const auto& f : j.at("factors")) m = m.d == 0 && m.label == "pt" ? manifold_from_json(f)
                                                                             : product_manifold(m, manifold_from_json(f));
        return m;
    }
    if (type == "chern_numbers") {
        std::map<Partition, long> numbers;
        for (const auto& [k, v] : j.at("numbers").items()) numbers[partition_from_key(k)] = v.get<long>();
        std::optional<long> mod;
        if (j.contains("c1_mod") && !j["c1_mod"].is_null()) mod = j["c1_mod"].get<long>();
        return manifold_from_chern_numbers(j.at("dim").get<int>(), numbers, j.value("c1_zero", false), mod,
                                           j.value("label", std::string()));
    }
    if (type == "point") return point_manifold();
    throw std::invalid_argument("unknown manifold type " + type);
}

MultiSeries genus_eval(const ManifoldClass& M, const MultiSeries& h, std::string_view x) {
    const int d = M.d;
    const auto aux = without(h.vars(), x);
    const int ix = h.index_of(x);
    if (h.vars()[ix].order <= d) throw WindowUnderflow("per-root factor known below degree " + std::to_string(d));
    std::vector<MultiSeries> b;
    for (int k = 0; k <= d; ++k) b.push_back(embed(slice(h, x, k), aux));
    if (b[0].is_zero()) throw NotAUnit("per-root factor vanishes at x = 0");
    const MultiSeries zero = constant_like(b[0], Coeff(0));
    const MultiSeries one = constant_like(b[0], Coeff(1));
    if (d == 0) return Coeff(M.chern_number({})) * one;
    // up[j][k] = [x^k] (h - h(0))^j
    std::vector<std::vector<MultiSeries>> up(d + 1, std::vector<MultiSeries>(d + 1, zero));
    for (int k = 1; k <= d; ++k) up[1][k] = b[k];
    for (int j = 2; j <= d; ++j)
        for (int k = j; k <= d; ++k)
            for (int i = 1; i <= k - j + 1; ++i) up[j][k] = up[j][k] + b[i] * up[j - 1][k - i];
    std::vector<MultiSeries> pw{one};
    for (int e = 1; e <= d; ++e) pw.push_back(pw.back() * b[0]);
    // A_k = h(0)^k [x^k] log(h / h(0))
    std::vector<MultiSeries> A(d + 1, zero);
    for (int k = 1; k <= d; ++k)
        for (int j = 1; j <= k; ++j) A[k] = A[k] + Coeff::fraction(j % 2 ? 1 : -1, j) * (pw[k - j] * up[j][k]);
    MultiSeries out = zero;
    for (const auto& [mu, w] : power_sum_weights(M)) {
        MultiSeries term = one;
        for (int part : mu) term = term * A[part];
        out = out + Coeff(w) * term;
    }
    return out;
}

std::string normalization_name(Normalization n) {
    switch (n) {
        case Normalization::paper: return "paper";
        case Normalization::bl: return "bl";
        case Normalization::hoehn: return "hoehn";
        case Normalization::lambda_unshifted: return "lambda_unshifted";
    }
    return "";
}

Normalization normalization_from_name(const std::string& s) {
    for (auto n : {Normalization::paper, Normalization::bl, Normalization::hoehn, Normalization::lambda_unshifted})
        if (normalization_name(n) == s) return n;
    throw std::invalid_argument("unknown normalization " + s);
}

MultiSeries two_variable_factor(Normalization n, int q_order, int x_order) {
    if (q_order < 1 || x_order < 1) throw WindowUnderflow("empty two-variable window");
    MultiSeries like({VarSpec::power("q", q_order), VarSpec::laurent("y", -q_order), VarSpec::power("x", x_order + 1)});
    const MultiSeries x = mono_like(like, {{"x", 1}});
    const MultiSeries one = constant_like(like, Coeff(1));
    const MultiSeries ep = exp_series(x), em = exp_series(-x);
    const MultiSeries td = invert(divide_by_variable(one - em, "x"));
    const Coeff s(n == Normalization::hoehn ? 1 : -1);
    MultiSeries num = td;
    MultiSeries den = one;
    if (n != Normalization::lambda_unshifted) num = num * (one + s * (mono_like(like, {{"y", 1}}) * em));
    for (int k = 1; k < q_order; ++k) {
        const MultiSeries yq = mono_like(like, {{"y", 1}, {"q", k}});
        const MultiSeries yiq = mono_like(like, {{"y", -1}, {"q", k}});
        const MultiSeries qk = mono_like(like, {{"q", k}});
        if (n == Normalization::lambda_unshifted)
            num = num * (one - yq * ep) * (one - yiq * em);
        else
            num = num * (one + s * (yq * em)) * (one + s * (yiq * ep));
        if (n == Normalization::hoehn) num = num * pow(one - qk, 2);
        den = den * (one - qk * ep) * (one - qk * em);
    }
    return restrict_var(num * invert(den), "x", x_order);
}

MultiSeries two_variable_denominator(Normalization n, int q_order, int d) {
    MultiSeries like({VarSpec::power("q", q_order), VarSpec::laurent("y", -q_order)});
    const MultiSeries one = constant_like(like, Coeff(1));
    if (n == Normalization::bl) return one;
    const MultiSeries y = mono_like(like, {{"y", 1}});
    if (n == Normalization::hoehn) {
        MultiSeries base = one + y;
        for (int k = 1; k < q_order; ++k)
            base = base * (one + mono_like(like, {{"y", 1}, {"q", k}})) * (one + mono_like(like, {{"y", -1}, {"q", k}}));
        return pow(base, d);
    }
    MultiSeries base = one - y, qs = one;
    for (int k = 1; k < q_order; ++k) {
        base = base * (one - mono_like(like, {{"y", 1}, {"q", k}})) * (one - mono_like(like, {{"y", -1}, {"q", k}}));
        qs = qs * pow(one - mono_like(like, {{"q", k}}), 2);
    }
    return pow(base * invert(qs), d);
}

JacobiSeries two_variable_genus(const ManifoldClass& M, int q_order, Normalization n) {
    const MultiSeries G = genus_eval(M, two_variable_factor(n, q_order, M.d + 1));
    JacobiSeries J;
    J.weight = M.d;
    J.half_y_shift = n == Normalization::bl ? -M.d : 0;
    J.normalization = n;
    J.fraction = SeriesFraction(G, embed(two_variable_denominator(n, q_order, M.d), G.vars()));
    return J;
}

JacobiSeries expand(const JacobiSeries& J, long y_order) {
    if (J.mode == JacobiMode::expanded) return J;
    JacobiSeries r = J;
    r.mode = JacobiMode::expanded;
    r.fraction = SeriesFraction();
    const MultiSeries& num = J.fraction.num;
    const int d = J.weight;
    if (J.normalization == Normalization::bl) {
        r.expanded = restrict_var(num, "y", y_order);
        return r;
    }
    const int iq = num.index_of("q"), iy = num.index_of("y");
    const long qo = std::min(num.vars()[iq].order, J.fraction.den.vars()[iq].order);
    if (qo >= kUnbounded) throw WindowUnderflow("expansion needs a finite q-order");
    const int q_order = static_cast<int>(qo);
    // den = base^d * rest^d, base = 1 -+ y, rest exact in y with q^0 layer 1
    const Coeff s(J.normalization == Normalization::hoehn ? 1 : -1);
    MultiSeries like({VarSpec::power("q", q_order), VarSpec::laurent("y", -q_order)});
    const MultiSeries one = constant_like(like, Coeff(1));
    const MultiSeries den = embed(two_variable_denominator(J.normalization, q_order, d), num.vars());
    if (!equal_within(J.fraction.den, den))
        throw std::invalid_argument("denominator does not match the normalization");
    MultiSeries rest = one;
    for (int k = 1; k < q_order; ++k) {
        rest = rest * (one + s * mono_like(like, {{"y", 1}, {"q", k}})) * (one + s * mono_like(like, {{"y", -1}, {"q", k}}));
        if (J.normalization != Normalization::hoehn) rest = rest * invert(pow(one - mono_like(like, {{"q", k}}), 2));
    }
    const MultiSeries body = num * invert(embed(pow(rest, d), num.vars()));
    const long low = std::min<long>(0, body.vars()[iy].floor);
    // (1 -+ y)^{-d} = sum binom(d+j-1, j) (-+y)^j, far enough that y < y_order is exact
    const long reach = y_order - low;
    MultiSeries::Terms gt;
    for (long j = 0; j < reach; ++j) {
        mpz_class b = d == 0 ? (j == 0 ? 1 : 0) : 0;
        if (d > 0) mpz_bin_uiui(b.get_mpz_t(), d + j - 1, j);
        Mono m{};
        m[iy] = static_cast<int>(j);
        gt[m] = Coeff(mpq_class(s.is_one() && j % 2 ? -b : b));
    }
    auto gvars = num.vars();
    gvars[iy] = VarSpec::laurent("y", 0, std::max<long>(reach, 1));
    const MultiSeries geo(gvars, {}, std::move(gt));
    r.expanded = restrict_var(body * geo, "y", y_order);
    return r;
}

nlohmann::json jacobi_to_json(const JacobiSeries& J) {
    nlohmann::json j{{"weight", J.weight},
                     {"half_y_shift", J.half_y_shift},
                     {"normalization", normalization_name(J.normalization)},
                     {"mode", J.mode == JacobiMode::fraction ? "fraction" : "expanded"}};
    if (J.mode == JacobiMode::fraction)
        j["body"] = fraction_to_json(J.fraction);
    else
        j["body"] = series_to_json(J.expanded);
    return j;
}

JacobiSeries jacobi_from_json(const nlohmann::json& j) {
    JacobiSeries J;
    J.weight = j.at("weight").get<int>();
    J.half_y_shift = j.at("half_y_shift").get<int>();
    J.normalization = normalization_from_name(j.at("normalization").get<std::string>());
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "fraction") {
        J.mode = JacobiMode::fraction;
        J.fraction = fraction_from_json(j.at("body"));
    } else if (mode == "expanded") {
        J.mode = JacobiMode::expanded;
        J.expanded = series_from_json(j.at("body"));
    } else {
        throw std::invalid_argument("unknown mode " + mode);
    }
    return J;
}

ShiftedSeries sigma_at_y_inverse(int q_order) {
    // layer q^b of Phi has u-exponents in [-b-1, b], so u < q_order keeps every term
    const SigmaSeries s = sigma_series(q_order, q_order, Coords::mult);
    MultiSeries::Terms t;
    for (const auto& [m, c] : s.body.terms()) t[mono({m[0], -m[1]})] = c;
    MultiSeries body({VarSpec::power("q", q_order), VarSpec::laurent("y", -q_order)}, {}, std::move(t));
    return {-s.half_u_shift, body};
}

MultiSeries jacobi_invariance_check(const JacobiSeries& J, int q_order, int y_span) {
    if (J.mode != JacobiMode::fraction) throw std::invalid_argument("invariance check needs fraction mode");
    if (J.half_y_shift != 0) throw std::invalid_argument("invariance check needs an integral y-shift");
    if (q_order < 1 || y_span < 0) throw WindowUnderflow("empty invariance window");
    const MultiSeries& N = J.fraction.num;
    const MultiSeries& D = J.fraction.den;
    const int iq = N.index_of("q"), iy = N.index_of("y");
    if (D.index_of("q") != iq || D.index_of("y") != iy || N.nvars() != 2 || D.nvars() != 2)
        throw IncompatibleVars("expected series in (q, y)");
    for (const auto* s : {&N, &D})
        if (s->vars()[iy].order < kUnbounded || !s->grades().empty())
            throw WindowUnderflow("invariance check needs series exact in y");
    const long qin = std::min(N.vars()[iq].order, D.vars()[iq].order);
    auto max_y = [&](const MultiSeries& s) {
        long m = 0;
        for (const auto& [e, c] : s.terms())
            if (e[iq] < q_order) m = std::max<long>(m, e[iy]);
        return m;
    };
    // every contributing source term of the substituted factor lies below qin
    if (q_order - 1 + y_span + std::max(max_y(N), max_y(D)) >= qin)
        throw WindowUnderflow("invariance window exceeds the computed q-order");
    auto side = [&](const MultiSeries& sub, const MultiSeries& plain) {
        std::map<std::pair<long, long>, Coeff> acc;
        for (const auto& [e1, c1] : sub.terms()) {
            const long a1 = e1[iy], B1 = e1[iq] + e1[iy];
            if (B1 < 0 || B1 >= q_order) continue;
            for (const auto& [e2, c2] : plain.terms()) {
                const long B = B1 + e2[iq], A = a1 + e2[iy];
                if (B >= q_order || A < -y_span || A > y_span) continue;
                acc[{B, A}].add_product(c1, c2);
            }
        }
        return acc;
    };
    auto lhs = side(N, D), rhs = side(D, N);
    for (const auto& [k, c] : rhs) lhs[k] -= c;
    MultiSeries::Terms t;
    for (const auto& [k, c] : lhs) {
        if (c.is_zero()) continue;
        Mono m{};
        m[0] = static_cast<int>(k.first);
        m[1] = static_cast<int>(k.second);
        t[m] = c;
    }
    return MultiSeries({VarSpec::power("q", q_order), VarSpec::laurent("y", -y_span, y_span + 1)}, {}, std::move(t));
}

HomogeneityReport homogeneity_ratio(const ManifoldClass& M, const MultiSeries& h, const Coeff& lambda,
                                    std::string_view x) {
    if (lambda.is_zero()) throw std::invalid_argument("lambda must be nonzero");
    const MultiSeries g = genus_eval(M, h, x);
    const MultiSeries gl = genus_eval(M, scale_variable(h, x, lambda), x);
    HomogeneityReport r;
    r.uniform = true;
    bool have = false;
    for (const auto& [m, c] : g.terms()) {
        const Coeff ratio = gl.coeff(m) / c;
        if (!have) {
            r.scale = ratio;
            have = true;
        } else if (ratio != r.scale) {
            r.uniform = false;
        }
    }
    for (const auto& [m, c] : gl.terms())
        if (g.coeff(m).is_zero()) r.uniform = false;
    r.nonvacuous = have;
    return r;
}

HomogeneityReport weight_homogeneity_check(const ManifoldClass& M, const Coeff& lambda, int q_order) {
    return homogeneity_ratio(M, two_variable_factor(Normalization::bl, q_order, M.d + 1), lambda);
}

MultiSeries adjoint_factor(const Coordinate& f, const FormalGroupLaw& F) {
    const ThetaSection s = sharp(delta(theta_p_from_trivialization(f, F, 1)), "y");
    if (s.eps != std::map<unsigned, int>{{1u, 1}}) throw std::logic_error("unexpected adjoint section");
    return rename(invert(s.unit), slot_name(1), "x");
}

MultiSeries adjoint_genus(const Coordinate& f, const FormalGroupLaw& F, const ManifoldClass& M) {
    return genus_eval(M, adjoint_factor(f, F));
}

LevelGenus level_n_genus(const ManifoldClass& M, const TorsionPoint& a, int q_order) {
    LevelGenus r;
    if (!M.c1_divisible_by(a.N))
        r.warning = "c1 of " + M.label + " is not known to vanish mod " + std::to_string(a.N);
    r.value = genus_eval(M, level_translate_factor(a, q_order, M.d + 1));
    return r;
}

MultiSeries specialize_y(const MultiSeries& s, const Coeff& value) {
    const int iy = s.index_of("y");
    if (s.vars()[iy].order < kUnbounded) throw WindowUnderflow("specialization needs a series exact in y");
    for (const auto& g : s.grades())
        if (g.mask >> iy & 1) throw WindowUnderflow("specialization needs a series exact in y");
    const auto vars = without(s.vars(), "y");
    std::vector<int> map;
    for (size_t i = 0, j = 0; i < s.nvars(); ++i) map.push_back(static_cast<int>(i) == iy ? -1 : static_cast<int>(j++));
    MultiSeries::Terms t;
    for (const auto& [m, c] : s.terms()) {
        Mono m2{};
        for (size_t i = 0; i < s.nvars(); ++i)
            if (map[i] >= 0) m2[map[i]] = m[i];
        t[m2] += c * value.pow(m[iy]);
    }
    std::vector<Grade> grades;
    for (const auto& g : s.grades()) {
        unsigned m2 = 0;
        for (size_t i = 0; i < s.nvars(); ++i)
            if ((g.mask >> i & 1) && map[i] >= 0) m2 |= 1u << map[i];
        grades.push_back({m2, g.order, g.floor});
    }
    return MultiSeries(vars, grades, std::move(t));
}

bool ChernLemmaReport::ok() const {
    return c1.is_zero() && equal_within(c2, c2_expected) && whitney_residual.is_zero() && twist_residual.is_zero();
}

ChernLemmaReport chern_lemma_check(int r, int k) {
    if (r < 1 || r > 6) throw std::invalid_argument("rank must be in 1..6");
    if (k < -4 || k > 4) throw std::invalid_argument("|k| must be at most 4");
    std::vector<VarSpec> vars;
    for (int i = 1; i <= r; ++i) vars.push_back(VarSpec::power("x" + std::to_string(i)));
    vars.push_back(VarSpec::power("z"));
    const unsigned all = (1u << vars.size()) - 1;
    MultiSeries like(vars, {{all, 3, 0}});
    const MultiSeries one = fit(like, constant_like(like, Coeff(1)));
    auto var = [&](const std::string& n) { return fit(like, variable_like(like, n)); };
    const MultiSeries z = var("z");
    auto part = [&](const MultiSeries& s, int deg) {
        MultiSeries::Terms t;
        for (const auto& [m, c] : s.terms())
            if (std::accumulate(m.begin(), m.end(), 0) == deg) t[m] = c;
        return s.with_terms(std::move(t));
    };
    MultiSeries cV = one, cVk = one;
    for (int i = 1; i <= r; ++i) {
        const MultiSeries xi = var("x" + std::to_string(i));
        cV = cV * (one + xi);
        cVk = cVk * (one + xi + Coeff(k) * z);
    }
    const MultiSeries cY = pow(one + Coeff(k) * z, r);
    // W = V + r y^k, xi = V y^k - W
    const MultiSeries cW = cV * cY;
    const MultiSeries cXi = cVk * invert(cW);
    ChernLemmaReport rep;
    rep.c1 = part(cXi, 1);
    rep.c2 = part(cXi, 2);
    const MultiSeries c1V = part(cV, 1), c2V = part(cV, 2);
    rep.c2_expected = Coeff(-k) * (z * c1V);
    const MultiSeries c1A = part(cVk, 1), c2A = part(cVk, 2), c1W = part(cW, 1), c2W = part(cW, 2);
    rep.whitney_residual = rep.c2 - (c2A - c1A * c1W - c2W + c1W * c1W);
    const Coeff binom(static_cast<long>(r) * (r - 1) / 2);
    rep.twist_residual =
        c2A - (c2V + Coeff(static_cast<long>(r - 1) * k) * (z * c1V) + binom * Coeff(static_cast<long>(k) * k) * (z * z));
    return rep;
}

}  // namespace ellgen
