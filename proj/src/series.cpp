#include "ellgen/series.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace ellgen {

namespace {

constexpr long kNegUnbounded = -kUnbounded;

long sat_add(long a, long b) {
    if (a >= kUnbounded || b >= kUnbounded) return kUnbounded;
    if (a <= kNegUnbounded || b <= kNegUnbounded) return kNegUnbounded;
    return a + b;
}

struct Cons {
    unsigned mask;
    long order;
    long floor;
};

std::vector<Cons> constraints_of(const MultiSeries& a) {
    std::vector<Cons> out;
    for (size_t i = 0; i < a.nvars(); ++i) out.push_back({1u << i, a.vars()[i].order, a.vars()[i].floor});
    for (const auto& g : a.grades()) out.push_back({g.mask, g.order, g.floor});
    return out;
}

// collects constraints, keeping the tightest order and the largest floor per mask
class WindowBuilder {
public:
    explicit WindowBuilder(std::vector<VarSpec> vars) : vars_(std::move(vars)) {
        for (auto& v : vars_) {
            v.order = kUnbounded;
            v.floor = kNegUnbounded;
        }
    }
    void add(unsigned mask, long order, long floor) {
        if (mask == 0) {
            if (order <= 0) throw WindowUnderflow("empty window on an empty constraint");
            return;
        }
        if (std::popcount(mask) == 1) {
            auto& v = vars_[std::countr_zero(mask)];
            v.order = std::min(v.order, order);
            v.floor = std::max(v.floor, floor);
            return;
        }
        auto it = grades_.find(mask);
        if (it == grades_.end()) {
            grades_[mask] = Grade{mask, order, floor};
        } else {
            it->second.order = std::min(it->second.order, order);
            it->second.floor = std::max(it->second.floor, floor);
        }
    }
    void set_floor_default() {
        for (auto& v : vars_)
            if (v.floor <= kNegUnbounded) v.floor = 0;
    }
    MultiSeries build(MultiSeries::Terms terms = {}) {
        for (auto& v : vars_) {
            if (v.floor <= kNegUnbounded)
                throw WindowUnderflow("no lower bound for variable " + v.name);
            if (v.floor < 0 && v.kind == VarKind::power) v.kind = VarKind::laurent;
        }
        std::vector<Grade> gs;
        for (auto& [m, g] : grades_) {
            long sing = 0;
            for (size_t i = 0; i < vars_.size(); ++i)
                if (m >> i & 1) sing = sat_add(sing, vars_[i].floor);
            if (g.floor < sing) g.floor = sing;
            if (g.order >= kUnbounded && g.floor <= sing) continue;
            gs.push_back(g);
        }
        return MultiSeries(vars_, gs, std::move(terms));
    }

private:
    std::vector<VarSpec> vars_;
    std::map<unsigned, Grade> grades_;
};

void check_compatible(const MultiSeries& a, const MultiSeries& b) {
    if (a.nvars() != b.nvars()) throw IncompatibleVars("variable lists differ in length");
    for (size_t i = 0; i < a.nvars(); ++i) {
        if (a.vars()[i].name != b.vars()[i].name)
            throw IncompatibleVars("variable mismatch: " + a.vars()[i].name + " vs " + b.vars()[i].name);
        if (a.vars()[i].kind != b.vars()[i].kind)
            throw IncompatibleVars("variable kind mismatch for " + a.vars()[i].name);
    }
}

std::vector<unsigned> union_masks(const MultiSeries& a, const MultiSeries& b) {
    std::vector<unsigned> ms;
    for (const auto& c : constraints_of(a)) ms.push_back(c.mask);
    for (const auto& c : constraints_of(b)) ms.push_back(c.mask);
    std::sort(ms.begin(), ms.end());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    return ms;
}

// window test against a prepared constraint list
struct Region {
    std::vector<Cons> cons;
    int n = 0;
    explicit Region(const MultiSeries& a) : cons(constraints_of(a)), n(static_cast<int>(a.nvars())) {}
    // 0 inside, 1 at or above an order, 2 below a floor
    int check(const Mono& m) const {
        for (const auto& c : cons) {
            long s = 0;
            for (int i = 0; i < n; ++i)
                if (c.mask >> i & 1) s += m[i];
            if (s < c.floor) return 2;
            if (s >= c.order) return 1;
        }
        return 0;
    }
};

// bound on the power degree from the constraints among power variables alone
long power_upper_bound(const MultiSeries& a, unsigned mask) {
    const unsigned pm = a.power_mask();
    auto vars = a.vars();
    for (size_t i = 0; i < vars.size(); ++i)
        if (!(pm >> i & 1)) vars[i] = VarSpec::laurent(vars[i].name, std::min<long>(vars[i].floor, 0));
    std::vector<Grade> gs;
    for (const auto& g : a.grades())
        if ((g.mask & ~pm) == 0) gs.push_back(g);
    return MultiSeries(vars, gs).upper_bound_for(mask);
}

struct Depth {
    long n_max = 0;
    std::vector<Grade> window;
};

// depth of a geometric-type series in r, whose terms all have positive power degree;
// power variables absent from r do not bound the depth
Depth series_depth(const MultiSeries& r, const char* what) {
    const unsigned pm = r.power_mask();
    unsigned active = 0;
    for (const auto& [m, c] : r.terms())
        for (size_t i = 0; i < r.nvars(); ++i)
            if ((pm >> i & 1) && m[i] > 0) active |= 1u << i;
    const long ub_all = power_upper_bound(r, pm);
    const long ub_active = active ? power_upper_bound(r, active) : 0;
    const long ub = std::min(ub_all, ub_active);
    if (ub >= kUnbounded && !r.is_zero()) throw WindowUnderflow(std::string(what) + " needs a finite truncation in the power variables");
    Depth d;
    d.n_max = r.is_zero() ? 0 : ub;
    if (pm != 0 && ub_all < kUnbounded) d.window.push_back({pm, ub_all + 1, 0});
    if (active != 0 && ub_active < kUnbounded) d.window.push_back({active, ub_active + 1, 0});
    return d;
}

MultiSeries exact_one(const MultiSeries& like) { return constant_like(like, Coeff(1)); }

long total_degree(const Mono& m, unsigned mask, size_t n) {
    long s = 0;
    for (size_t i = 0; i < n; ++i)
        if (mask >> i & 1) s += m[i];
    return s;
}

MultiSeries invert_laurent(const MultiSeries& b, const std::vector<int>& lvars, size_t pos) {
    if (b.is_zero()) throw NotAUnit("leading coefficient vanishes within the window");
    if (pos == lvars.size()) {
        if (b.terms().size() != 1 || b.terms().begin()->first != Mono{})
            throw NotAUnit("constant part is not a constant");
        Coeff c = b.terms().begin()->second.inverse();
        return b.with_terms({{Mono{}, c}});
    }
    const int y = lvars[pos];
    const std::string& yn = b.vars()[y].name;
    int k0 = b.terms().begin()->first[y];
    for (const auto& [m, c] : b.terms()) k0 = std::min(k0, m[y]);
    MultiSeries lead = slice(b, yn, k0);
    MultiSeries inv_lead = invert_laurent(lead, lvars, pos + 1);
    Mono sh{};
    sh[y] = -k0;
    MultiSeries t = shift(b, sh) * inv_lead;
    MultiSeries s = t - exact_one(t);
    for (const auto& [m, c] : s.terms())
        if (m[y] < 1) throw NotAUnit("leading term of " + yn + " is not isolated");
    // s has no terms with y-exponent below 1
    {
        auto vars = s.vars();
        vars[y].floor = std::max<long>(vars[y].floor, 1);
        s = MultiSeries(vars, s.grades(), s.terms());
    }
    const long ub = s.upper_bound_for(1u << y);
    if (ub >= kUnbounded && !s.is_zero()) throw WindowUnderflow("unbounded truncation in " + yn + " during inversion");
    const long n_max = s.is_zero() ? 0 : ub;
    MultiSeries neg_s = -s;
    MultiSeries sum = exact_one(s);
    MultiSeries term = sum;
    for (long n = 1; n <= n_max; ++n) {
        term = term * neg_s;
        sum = sum + term;
    }
    if (ub < kUnbounded) sum = restrict(sum, {{(1u << y) | s.power_mask(), ub + 1, 0}});
    Mono back{};
    back[y] = -k0;
    return shift(inv_lead * sum, back);
}

}  // namespace

Mono mono(std::initializer_list<int> e) {
    Mono m{};
    size_t i = 0;
    for (int v : e) m[i++] = v;
    return m;
}

MultiSeries::MultiSeries(std::vector<VarSpec> vars, std::vector<Grade> grades, Terms terms)
    : vars_(std::move(vars)) {
    if (vars_.size() > static_cast<size_t>(kMaxVars)) throw std::invalid_argument("too many variables");
    for (size_t i = 0; i < vars_.size(); ++i) {
        for (size_t j = 0; j < i; ++j)
            if (vars_[i].name == vars_[j].name) throw std::invalid_argument("duplicate variable " + vars_[i].name);
        if (vars_[i].kind == VarKind::power && vars_[i].floor < 0)
            throw std::invalid_argument("power variable " + vars_[i].name + " with negative floor");
        if (vars_[i].order <= vars_[i].floor) throw WindowUnderflow("empty window for variable " + vars_[i].name);
    }
    std::map<unsigned, Grade> gm;
    for (const auto& g : grades) {
        if (g.mask >> vars_.size()) throw std::invalid_argument("grade mask out of range");
        if (std::popcount(g.mask) <= 1) {
            if (g.mask == 0) continue;
            auto& v = vars_[std::countr_zero(g.mask)];
            v.order = std::min(v.order, g.order);
            v.floor = std::max(v.floor, g.floor);
            if (v.order <= v.floor) throw WindowUnderflow("empty window for variable " + v.name);
            continue;
        }
        if (g.order <= g.floor) throw WindowUnderflow("empty graded window");
        auto it = gm.find(g.mask);
        if (it == gm.end())
            gm[g.mask] = g;
        else {
            it->second.order = std::min(it->second.order, g.order);
            it->second.floor = std::max(it->second.floor, g.floor);
        }
    }
    // drop orders implied by a larger grade and the floors of the extra variables
    unsigned pm = 0;
    for (size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].kind == VarKind::power) pm |= 1u << i;
    std::vector<std::pair<unsigned, long>> orig;
    for (size_t i = 0; i < vars_.size(); ++i) orig.push_back({1u << i, vars_[i].order});
    for (const auto& [m, g] : gm) orig.push_back({m, g.order});
    auto implied = [&](unsigned m, long order) {
        if (order >= kUnbounded) return false;
        for (const auto& [m2, o2] : orig) {
            if (o2 >= kUnbounded || m2 == m || (m2 & m) != m) continue;
            if ((m & ~pm) == 0 && (m2 & ~pm) != 0) continue;
            long rest = 0;
            for (size_t j = 0; j < vars_.size(); ++j)
                if ((m2 & ~m) >> j & 1) rest = sat_add(rest, vars_[j].floor);
            if (rest > kNegUnbounded && order >= o2 - rest) return true;
        }
        return false;
    };
    for (size_t i = 0; i < vars_.size(); ++i)
        if (implied(1u << i, vars_[i].order)) vars_[i].order = kUnbounded;
    for (auto it = gm.begin(); it != gm.end();) {
        auto& g = it->second;
        if (implied(g.mask, g.order)) g.order = kUnbounded;
        long top = 0;
        for (size_t j = 0; j < vars_.size(); ++j)
            if (g.mask >> j & 1) top = sat_add(top, vars_[j].order - 1);
        if (top < g.order) g.order = kUnbounded;
        long sing = 0;
        for (size_t j = 0; j < vars_.size(); ++j)
            if (g.mask >> j & 1) sing = sat_add(sing, vars_[j].floor);
        it = (g.order >= kUnbounded && g.floor <= sing) ? gm.erase(it) : std::next(it);
    }
    for (auto& [m, g] : gm) grades_.push_back(g);
    Region reg(*this);
    for (auto& [m, c] : terms) {
        if (c.is_zero()) continue;
        for (size_t i = vars_.size(); i < static_cast<size_t>(kMaxVars); ++i)
            if (m[i] != 0) throw std::invalid_argument("exponent for a nonexistent variable");
        int r = reg.check(m);
        if (r == 1) continue;
        if (r == 2) throw std::logic_error("term below the declared floor");
        terms_.emplace(m, std::move(c));
    }
}

int MultiSeries::index_of(std::string_view name) const {
    for (size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name) return static_cast<int>(i);
    throw IncompatibleVars("unknown variable " + std::string(name));
}

bool MultiSeries::has_var(std::string_view name) const {
    for (const auto& v : vars_)
        if (v.name == name) return true;
    return false;
}

unsigned MultiSeries::mask_of(const std::vector<std::string>& names) const {
    unsigned m = 0;
    for (const auto& n : names) m |= 1u << index_of(n);
    return m;
}

unsigned MultiSeries::power_mask() const {
    unsigned m = 0;
    for (size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].kind == VarKind::power) m |= 1u << i;
    return m;
}

bool MultiSeries::in_window(const Mono& m) const { return Region(*this).check(m) == 0; }

Coeff MultiSeries::coeff(const Mono& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Coeff(0) : it->second;
}

int MultiSeries::level() const {
    int n = 1;
    for (const auto& [m, c] : terms_) n = std::max(n, c.level());
    return n;
}

long MultiSeries::order_for(unsigned mask) const {
    if (std::popcount(mask) == 1) return vars_[std::countr_zero(mask)].order;
    for (const auto& g : grades_)
        if (g.mask == mask) return g.order;
    return kUnbounded;
}

long MultiSeries::lower_bound_for(unsigned mask) const {
    auto sing = [&](unsigned m) {
        long s = 0;
        for (size_t i = 0; i < vars_.size(); ++i)
            if (m >> i & 1) s += vars_[i].floor;
        return s;
    };
    long best = sing(mask);
    for (const auto& g : grades_)
        if ((g.mask & ~mask) == 0 && g.floor > kNegUnbounded) best = std::max(best, g.floor + sing(mask & ~g.mask));
    bool exact = !terms_.empty();
    for (const auto& c : constraints_of(*this))
        if (c.order < kUnbounded) exact = false;
    if (exact) {
        long low = kUnbounded;
        for (const auto& [m, c] : terms_) low = std::min(low, total_degree(m, mask, vars_.size()));
        best = std::max(best, low);
    }
    return best;
}

long MultiSeries::upper_bound_for(unsigned target) const {
    std::vector<Cons> cs;
    for (const auto& c : constraints_of(*this)) {
        if (c.order >= kUnbounded || (c.mask & target) == 0) continue;
        long extra = 0;
        for (size_t i = 0; i < vars_.size(); ++i)
            if ((c.mask & ~target) >> i & 1) extra += vars_[i].floor;
        cs.push_back({c.mask & target, c.order - 1 - extra, 0});
    }
    std::map<unsigned, long> best;
    best[0] = 0;
    // enumerate submasks of target in increasing popcount order
    std::vector<unsigned> subs;
    for (unsigned s = target;; s = (s - 1) & target) {
        subs.push_back(s);
        if (s == 0) break;
    }
    std::sort(subs.begin(), subs.end(), [](unsigned a, unsigned b) {
        return std::popcount(a) != std::popcount(b) ? std::popcount(a) < std::popcount(b) : a < b;
    });
    for (unsigned s : subs) {
        if (s == 0) continue;
        long b = kUnbounded;
        for (const auto& c : cs) {
            if ((c.mask & ~s) != 0) continue;
            auto it = best.find(s & ~c.mask);
            if (it == best.end() || it->second >= kUnbounded) continue;
            b = std::min(b, c.order + it->second);
        }
        best[s] = b;
    }
    return best[target];
}

std::string MultiSeries::str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        for (size_t i = 0; i < vars_.size(); ++i)
            if (m[i] != 0) os << "*" << vars_[i].name << "^" << m[i];
    }
    if (first) os << "0";
    os << "  [";
    for (size_t i = 0; i < vars_.size(); ++i) {
        os << (i ? ", " : "") << vars_[i].name << ":" << vars_[i].floor << ".."
           << (vars_[i].order >= kUnbounded ? std::string("inf") : std::to_string(vars_[i].order));
    }
    for (const auto& g : grades_) {
        os << ", {";
        bool f = true;
        for (size_t i = 0; i < vars_.size(); ++i)
            if (g.mask >> i & 1) {
                os << (f ? "" : "+") << vars_[i].name;
                f = false;
            }
        os << "}:" << g.floor << ".." << (g.order >= kUnbounded ? std::string("inf") : std::to_string(g.order));
    }
    os << "]";
    return os.str();
}

MultiSeries constant_like(const MultiSeries& like, const Coeff& c) { return monomial_like(like, Mono{}, c); }

MultiSeries monomial_like(const MultiSeries& like, const Mono& m, const Coeff& c) {
    auto vars = like.vars();
    for (size_t i = 0; i < vars.size(); ++i) {
        vars[i].order = kUnbounded;
        if (vars[i].kind == VarKind::power && m[i] < 0)
            throw std::invalid_argument("negative exponent of power variable " + vars[i].name);
        vars[i].floor = std::min(0, m[i]);
    }
    return MultiSeries(vars, {}, {{m, c}});
}

MultiSeries variable_like(const MultiSeries& like, std::string_view name) {
    Mono m{};
    m[like.index_of(name)] = 1;
    return monomial_like(like, m);
}

MultiSeries polynomial(std::vector<VarSpec> vars, std::vector<Grade> grades,
                       std::initializer_list<std::pair<Mono, Coeff>> terms) {
    MultiSeries::Terms t;
    for (const auto& [m, c] : terms) {
        auto [it, ins] = t.try_emplace(m, c);
        if (!ins) it->second += c;
    }
    return MultiSeries(std::move(vars), std::move(grades), std::move(t));
}

MultiSeries arith(const MultiSeries& a, const MultiSeries& b, ArithOp op) {
    check_compatible(a, b);
    WindowBuilder wb(a.vars());
    const auto masks = union_masks(a, b);
    if (op == ArithOp::mul) {
        for (unsigned m : masks) {
            long la = a.lower_bound_for(m), lb = b.lower_bound_for(m);
            long o = std::min(sat_add(a.order_for(m), lb), sat_add(b.order_for(m), la));
            wb.add(m, o, la + lb);
        }
        MultiSeries win = wb.build();
        Region reg(win);
        const size_t n = a.nvars();
        MultiSeries::Terms acc;
        std::vector<std::pair<Mono, const Coeff*>> bt;
        bt.reserve(b.terms().size());
        for (const auto& [m, c] : b.terms()) bt.emplace_back(m, &c);
        for (const auto& [ma, ca] : a.terms()) {
            for (const auto& [mb, cb] : bt) {
                Mono s;
                for (size_t i = 0; i < n; ++i) s[i] = ma[i] + mb[i];
                for (size_t i = n; i < static_cast<size_t>(kMaxVars); ++i) s[i] = 0;
                int r = reg.check(s);
                if (r == 1) continue;
                if (r == 2) throw std::logic_error("product term below floor");
                acc[s].add_product(ca, *cb);
            }
        }
        return win.with_terms(std::move(acc));
    }
    for (unsigned m : masks) wb.add(m, std::min(a.order_for(m), b.order_for(m)), std::min(a.lower_bound_for(m), b.lower_bound_for(m)));
    MultiSeries win = wb.build();
    MultiSeries::Terms t = a.terms();
    for (const auto& [m, c] : b.terms()) {
        auto [it, ins] = t.try_emplace(m, op == ArithOp::add ? c : -c);
        if (!ins) {
            if (op == ArithOp::add)
                it->second += c;
            else
                it->second -= c;
        }
    }
    return win.with_terms(std::move(t));
}

MultiSeries operator+(const MultiSeries& a, const MultiSeries& b) { return arith(a, b, ArithOp::add); }
MultiSeries operator-(const MultiSeries& a, const MultiSeries& b) { return arith(a, b, ArithOp::sub); }
MultiSeries operator*(const MultiSeries& a, const MultiSeries& b) { return arith(a, b, ArithOp::mul); }

MultiSeries operator-(const MultiSeries& a) {
    MultiSeries::Terms t;
    for (const auto& [m, c] : a.terms()) t.emplace(m, -c);
    return a.with_terms(std::move(t));
}

MultiSeries operator*(const Coeff& k, const MultiSeries& a) {
    MultiSeries::Terms t;
    if (!k.is_zero())
        for (const auto& [m, c] : a.terms()) t.emplace(m, k * c);
    return a.with_terms(std::move(t));
}

MultiSeries invert(const MultiSeries& a) {
    const unsigned pm = a.power_mask();
    const size_t n = a.nvars();
    MultiSeries::Terms t0;
    for (const auto& [m, c] : a.terms())
        if (total_degree(m, pm, n) == 0) t0.emplace(m, c);
    if (t0.empty()) throw NotAUnit("no unit leading term: constant part in the power variables vanishes");
    MultiSeries a0 = a.with_terms(t0);
    std::vector<int> lvars;
    for (size_t i = 0; i < n; ++i)
        if (a.vars()[i].kind == VarKind::laurent) lvars.push_back(static_cast<int>(i));
    MultiSeries inv0 = invert_laurent(a0, lvars, 0);
    if (t0.size() == a.terms().size() && pm == 0) return inv0;
    MultiSeries r = inv0 * (a - a0);
    const Depth depth = series_depth(r, "inversion");
    const long n_max = depth.n_max;
    MultiSeries neg_r = -r;
    MultiSeries sum = exact_one(r);
    MultiSeries term = sum;
    for (long k = 1; k <= n_max; ++k) {
        term = term * neg_r;
        sum = sum + term;
    }
    if (!depth.window.empty()) sum = restrict(sum, depth.window);
    return inv0 * sum;
}

MultiSeries pow(const MultiSeries& a, long n) {
    if (n < 0) return pow(invert(a), -n);
    MultiSeries result = exact_one(a);
    MultiSeries base = a;
    while (n) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return result;
}

MultiSeries divide(const MultiSeries& a, const MultiSeries& b) { return a * invert(b); }

MultiSeries exp_log(const MultiSeries& a, ExpLog dir) {
    const unsigned pm = a.power_mask();
    const size_t n = a.nvars();
    MultiSeries r = a;
    if (dir == ExpLog::exp) {
        for (const auto& [m, c] : a.terms())
            if (total_degree(m, pm, n) <= 0)
                throw std::domain_error("exp needs positive order in the power variables");
    } else {
        for (const auto& [m, c] : a.terms()) {
            bool const_power = total_degree(m, pm, n) <= 0;
            if (const_power && !(m == Mono{} && c.is_one()))
                throw std::domain_error("log needs constant term exactly 1");
        }
        if (!a.coeff(Mono{}).is_one()) throw std::domain_error("log needs constant term exactly 1");
        r = a - exact_one(a);
    }
    const Depth depth = series_depth(r, "exp/log");
    const long n_max = depth.n_max;
    MultiSeries sum = dir == ExpLog::exp ? exact_one(r) : constant_like(r, Coeff(0));
    MultiSeries term = exact_one(r);
    for (long k = 1; k <= n_max; ++k) {
        term = term * r;
        if (dir == ExpLog::exp) {
            term = Coeff::fraction(1, k) * term;
            sum = sum + term;
        } else {
            sum = sum + Coeff::fraction(k % 2 ? 1 : -1, k) * term;
        }
    }
    if (!depth.window.empty()) sum = restrict(sum, depth.window);
    return sum;
}

MultiSeries shift(const MultiSeries& a, const Mono& m) {
    const size_t n = a.nvars();
    auto vars = a.vars();
    for (size_t i = 0; i < n; ++i) {
        vars[i].order = sat_add(vars[i].order, m[i]);
        vars[i].floor += m[i];
        if (vars[i].floor < 0 && vars[i].kind == VarKind::power)
            throw std::invalid_argument("negative exponent of power variable " + vars[i].name);
    }
    auto grades = a.grades();
    for (auto& g : grades) {
        long s = total_degree(m, g.mask, n);
        g.order = sat_add(g.order, s);
        g.floor = sat_add(g.floor, s);
    }
    MultiSeries::Terms t;
    for (const auto& [e, c] : a.terms()) {
        Mono f = e;
        for (size_t i = 0; i < n; ++i) f[i] += m[i];
        t.emplace(f, c);
    }
    return MultiSeries(vars, grades, std::move(t));
}

MultiSeries divide_by_variable(const MultiSeries& a, std::string_view var) {
    const int v = a.index_of(var);
    auto vars = a.vars();
    if (vars[v].kind == VarKind::power && vars[v].floor < 1) {
        for (const auto& [e, c] : a.terms())
            if (e[v] < 1) throw NotAUnit("series is not divisible by " + std::string(var));
        vars[v].floor = 1;
    }
    Mono m{};
    m[v] = -1;
    return shift(MultiSeries(vars, a.grades(), a.terms()), m);
}

MultiSeries slice(const MultiSeries& a, std::string_view var, long k) {
    const int v = a.index_of(var);
    auto vars = a.vars();
    vars[v].order = kUnbounded;
    vars[v].floor = 0;
    auto grades = a.grades();
    for (auto& g : grades)
        if (g.mask >> v & 1) {
            g.order = sat_add(g.order, -k);
            g.floor = sat_add(g.floor, -k);
        }
    MultiSeries::Terms t;
    for (const auto& [e, c] : a.terms())
        if (e[v] == k) {
            Mono f = e;
            f[v] = 0;
            t.emplace(f, c);
        }
    if (k >= a.vars()[v].order) throw WindowUnderflow("slice beyond the window of " + std::string(var));
    return MultiSeries(vars, grades, std::move(t));
}

MultiSeries substitute_zero(const MultiSeries& a, std::string_view var) {
    const int v = a.index_of(var);
    auto vars = a.vars();
    vars[v].order = kUnbounded;
    vars[v].floor = 0;
    MultiSeries::Terms t;
    for (const auto& [e, c] : a.terms()) {
        if (e[v] < 0) throw NotAUnit("negative power of a variable set to zero");
        if (e[v] == 0) t.emplace(e, c);
    }
    return MultiSeries(vars, a.grades(), std::move(t));
}

MultiSeries substitute(const MultiSeries& a, std::string_view var, const MultiSeries& value) {
    if (value.is_zero()) return substitute_zero(a, var);
    check_compatible(a, value);
    const int v = a.index_of(var);
    const size_t n = a.nvars();
    if (a.vars()[v].kind != VarKind::power)
        throw IncompatibleVars("general substitution needs a power variable; use a monomial substitution");
    for (size_t i = 0; i < n; ++i)
        if (value.vars()[i].floor < 0) throw std::domain_error("substituted value must have nonnegative exponents");
    for (const auto& [m, c] : value.terms())
        if (m == Mono{}) throw std::domain_error("substituted value must have no constant term");
    // a power-only grading in which the value has positive valuation
    unsigned support = 0;
    for (const auto& [m, c] : value.terms())
        for (size_t i = 0; i < n; ++i)
            if (m[i] != 0) support |= 1u << i;
    if ((support & ~value.power_mask()) != 0)
        throw std::domain_error("substituted value must involve only power variables");
    // every monomial outside the value's window must have positive G-degree too
    unsigned tail = 0;
    for (const auto& c : constraints_of(value))
        if (c.order < kUnbounded) tail |= c.mask;
    std::vector<unsigned> cands;
    for (const auto& c : constraints_of(value)) cands.push_back(c.mask | tail);
    for (const auto& c : constraints_of(a)) cands.push_back(c.mask | tail);
    cands.push_back(support | tail);
    std::sort(cands.begin(), cands.end(), [](unsigned x, unsigned y) {
        return std::popcount(x) != std::popcount(y) ? std::popcount(x) < std::popcount(y) : x < y;
    });
    unsigned G = 0;
    for (unsigned m : cands) {
        if ((m & ~value.power_mask()) != 0 || m == 0) continue;
        bool ok = true;
        for (const auto& [e, c] : value.terms())
            if (total_degree(e, m, n) < 1) ok = false;
        if (ok) {
            G = m;
            break;
        }
    }
    if (G == 0) throw std::domain_error("substituted value has no positive valuation");

    long kmax = a.upper_bound_for(1u << v);
    long present = 0;
    for (const auto& [m, c] : a.terms()) present = std::max<long>(present, m[v]);
    if (kmax >= kUnbounded) kmax = present;

    // constraints through var are replaced by the extra grades below
    std::vector<Grade> kept;
    for (const auto& g : a.grades())
        if (!(g.mask >> v & 1)) kept.push_back(g);
    auto part = [&](long k) {
        MultiSeries s = slice(a, var, k);
        return MultiSeries(s.vars(), kept, s.terms());
    };
    MultiSeries result = part(0);
    MultiSeries p = exact_one(value);
    for (long k = 1; k <= kmax; ++k) {
        p = p * value;
        result = result + part(k) * p;
    }
    std::vector<Grade> extra;
    for (const auto& c : constraints_of(a)) {
        if (!(c.mask >> v & 1) || c.order >= kUnbounded) continue;
        unsigned m = (c.mask & ~(1u << v)) | G;
        extra.push_back({m, c.order, std::max(a.lower_bound_for(c.mask), result.lower_bound_for(m))});
    }
    return restrict(result, extra);
}

MultiSeries substitute_monomial(const MultiSeries& a, std::string_view var, const Coeff& c, const Mono& m) {
    if (c.is_zero()) return substitute_zero(a, var);
    const int v = a.index_of(var);
    const size_t n = a.nvars();
    const auto cons = constraints_of(a);
    auto coeffs_for = [&](unsigned D) {
        std::array<long, kMaxVars> w{};
        for (size_t i = 0; i < n; ++i)
            if (static_cast<int>(i) != v && (D >> i & 1)) w[i] = 1;
        long cv = (D >> v & 1) ? m[v] : 0;
        for (size_t i = 0; i < n; ++i)
            if (static_cast<int>(i) != v && (D >> i & 1)) cv += m[i];
        w[v] = cv;
        return w;
    };
    auto floor_of = [&](unsigned D) {
        auto w = coeffs_for(D);
        long s = 0;
        for (size_t i = 0; i < n; ++i) {
            if (w[i] < 0) return kNegUnbounded;
            s += w[i] * a.vars()[i].floor;
        }
        return s;
    };
    auto lp = [&](unsigned D, const Cons& E) {
        auto w = coeffs_for(D);
        long base = 0;
        for (size_t i = 0; i < n; ++i) {
            if (w[i] < 0) return kNegUnbounded;
            base += w[i] * a.vars()[i].floor;
        }
        long fe = 0, wmin = kUnbounded;
        for (size_t i = 0; i < n; ++i)
            if (E.mask >> i & 1) {
                fe += a.vars()[i].floor;
                wmin = std::min(wmin, w[i]);
            }
        long excess = std::max(0L, E.order - fe);
        return base + excess * wmin;
    };
    std::vector<unsigned> masks;
    for (const auto& E : cons) masks.push_back(E.mask);
    std::map<unsigned, long> orders;
    for (unsigned D : masks) orders[D] = kUnbounded;
    for (const auto& E : cons) {
        if (E.order >= kUnbounded) continue;
        long own = lp(E.mask, E);
        if (own > kNegUnbounded) {
            orders[E.mask] = std::min(orders[E.mask], own);
            continue;
        }
        unsigned bestD = 0;
        long best = kNegUnbounded;
        for (unsigned D : masks) {
            long x = lp(D, E);
            if (x > best) {
                best = x;
                bestD = D;
            }
        }
        if (best <= kNegUnbounded)
            throw WindowUnderflow("monomial substitution of " + std::string(var) + " loses the window");
        orders[bestD] = std::min(orders[bestD], best);
    }
    WindowBuilder wb(a.vars());
    for (unsigned D : masks) wb.add(D, orders[D], floor_of(D));
    MultiSeries::Terms t;
    for (const auto& [e, k] : a.terms()) {
        Mono f = e;
        for (size_t i = 0; i < n; ++i)
            if (static_cast<int>(i) != v) f[i] += e[v] * m[i];
        f[v] = e[v] * m[v];
        Coeff cc = k * c.pow(e[v]);
        auto [it, ins] = t.try_emplace(f, cc);
        if (!ins) it->second += cc;
    }
    return wb.build(std::move(t));
}

MultiSeries remap(const MultiSeries& a, const std::vector<VarSpec>& vars, const std::vector<int>& map,
                  const std::vector<Grade>& extra) {
    if (map.size() != a.nvars()) throw std::invalid_argument("remap size mismatch");
    std::vector<VarSpec> nv = vars;
    std::vector<bool> hit(vars.size(), false);
    WindowBuilder wb(nv);
    for (size_t i = 0; i < map.size(); ++i) {
        if (map[i] < 0) continue;
        if (static_cast<size_t>(map[i]) >= vars.size() || hit[map[i]])
            throw std::invalid_argument("remap target invalid");
        hit[map[i]] = true;
        const auto& old = a.vars()[i];
        if (vars[map[i]].kind == VarKind::power && old.floor < 0)
            throw IncompatibleVars("cannot map laurent variable " + old.name + " to a power variable");
    }
    for (size_t j = 0; j < vars.size(); ++j)
        if (!hit[j]) wb.add(1u << j, vars[j].order, 0);
    auto map_mask = [&](unsigned m) {
        unsigned r = 0;
        for (size_t i = 0; i < map.size(); ++i)
            if ((m >> i & 1) && map[i] >= 0) r |= 1u << map[i];
        return r;
    };
    for (const auto& c : constraints_of(a)) {
        unsigned nm = map_mask(c.mask);
        wb.add(nm, c.order, c.floor);
    }
    for (const auto& g : extra) wb.add(g.mask, g.order, g.floor);
    wb.set_floor_default();
    MultiSeries::Terms t;
    for (const auto& [e, c] : a.terms()) {
        Mono f{};
        for (size_t i = 0; i < map.size(); ++i) {
            if (map[i] < 0) {
                if (e[i] != 0) throw std::invalid_argument("dropped variable " + a.vars()[i].name + " is present");
                continue;
            }
            f[map[i]] = e[i];
        }
        t.emplace(f, c);
    }
    return wb.build(std::move(t));
}

MultiSeries embed(const MultiSeries& a, const std::vector<VarSpec>& vars, const std::vector<Grade>& extra) {
    std::vector<int> map(a.nvars(), -1);
    for (size_t i = 0; i < a.nvars(); ++i)
        for (size_t j = 0; j < vars.size(); ++j)
            if (vars[j].name == a.vars()[i].name) map[i] = static_cast<int>(j);
    return remap(a, vars, map, extra);
}

MultiSeries rename(const MultiSeries& a, std::string_view from, std::string_view to) {
    auto vars = a.vars();
    vars[a.index_of(from)].name = std::string(to);
    return MultiSeries(vars, a.grades(), a.terms());
}

MultiSeries permute(const MultiSeries& a, const std::vector<int>& perm) {
    auto vars = a.vars();
    std::vector<int> map(a.nvars());
    for (size_t i = 0; i < a.nvars(); ++i) map[i] = i < perm.size() ? perm[i] : static_cast<int>(i);
    for (size_t i = 0; i < a.nvars(); ++i) {
        vars[map[i]].kind = a.vars()[i].kind;
    }
    return remap(a, vars, map);
}

MultiSeries restrict(const MultiSeries& a, const std::vector<Grade>& extra) {
    auto grades = a.grades();
    for (const auto& g : extra) grades.push_back({g.mask, g.order, std::max(g.floor, a.lower_bound_for(g.mask))});
    return MultiSeries(a.vars(), grades, a.terms());
}

MultiSeries restrict_var(const MultiSeries& a, std::string_view var, long order) {
    auto vars = a.vars();
    auto& v = vars[a.index_of(var)];
    v.order = std::min(v.order, order);
    return MultiSeries(vars, a.grades(), a.terms());
}

MultiSeries set_kind(const MultiSeries& a, std::string_view var, VarKind kind) {
    auto vars = a.vars();
    vars[a.index_of(var)].kind = kind;
    return MultiSeries(vars, a.grades(), a.terms());
}

MultiSeries map_coeffs(const MultiSeries& a, Coeff (*f)(const Coeff&, int), int arg) {
    MultiSeries::Terms t;
    for (const auto& [m, c] : a.terms()) t.emplace(m, f(c, arg));
    return a.with_terms(std::move(t));
}

bool equal_within(const MultiSeries& a, const MultiSeries& b) { return (a - b).is_zero(); }

SeriesFraction::SeriesFraction(MultiSeries n, MultiSeries d) : num(std::move(n)), den(std::move(d)) {
    if (den.is_zero()) throw std::domain_error("fraction with zero denominator");
}

SeriesFraction operator*(const SeriesFraction& a, const SeriesFraction& b) {
    return SeriesFraction(a.num * b.num, a.den * b.den);
}

SeriesFraction operator/(const SeriesFraction& a, const SeriesFraction& b) {
    return SeriesFraction(a.num * b.den, a.den * b.num);
}

MultiSeries cross_difference(const SeriesFraction& a, const SeriesFraction& b) {
    return a.num * b.den - b.num * a.den;
}

bool equal_within(const SeriesFraction& a, const SeriesFraction& b) { return cross_difference(a, b).is_zero(); }

}  // namespace ellgen
