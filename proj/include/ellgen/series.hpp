#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ellgen/coeff.hpp"

namespace ellgen {

constexpr int kMaxVars = 12;
constexpr long kUnbounded = 1L << 40;

enum class VarKind { power, laurent };

// order is the exclusive upper bound on the exponent, floor the lower bound
// below which the exact value has no terms.
struct VarSpec {
    std::string name;
    VarKind kind = VarKind::power;
    long order = kUnbounded;
    long floor = 0;

    static VarSpec power(std::string name, long order = kUnbounded) {
        return {std::move(name), VarKind::power, order, 0};
    }
    static VarSpec laurent(std::string name, long floor, long order = kUnbounded) {
        return {std::move(name), VarKind::laurent, order, floor};
    }
};

// Truncation on the total degree of a group of variables (bitmask over the
// variable list): terms with sum < order are exact, the value has no terms
// with sum < floor.
struct Grade {
    unsigned mask = 0;
    long order = kUnbounded;
    long floor = 0;
};

using Mono = std::array<int, kMaxVars>;

struct NotAUnit : std::domain_error {
    using std::domain_error::domain_error;
};
struct WindowUnderflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IncompatibleVars : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class MultiSeries {
public:
    using Terms = std::map<Mono, Coeff>;

    MultiSeries() = default;
    MultiSeries(std::vector<VarSpec> vars, std::vector<Grade> grades = {}, Terms terms = {});

    const std::vector<VarSpec>& vars() const { return vars_; }
    const std::vector<Grade>& grades() const { return grades_; }
    const Terms& terms() const { return terms_; }
    size_t nvars() const { return vars_.size(); }
    int index_of(std::string_view name) const;
    bool has_var(std::string_view name) const;
    unsigned mask_of(const std::vector<std::string>& names) const;
    unsigned power_mask() const;

    bool in_window(const Mono& m) const;
    bool is_zero() const { return terms_.empty(); }
    Coeff coeff(const Mono& m) const;
    Coeff constant_term() const { return coeff(Mono{}); }
    int level() const;

    // same window, new terms
    MultiSeries with_terms(Terms t) const { return MultiSeries(vars_, grades_, std::move(t)); }
    long order_for(unsigned mask) const;
    long lower_bound_for(unsigned mask) const;
    // largest value of the total exponent over mask inside the window
    long upper_bound_for(unsigned mask) const;

    std::string str() const;

private:
    std::vector<VarSpec> vars_;
    std::vector<Grade> grades_;
    Terms terms_;
};

Mono mono(std::initializer_list<int> e);

MultiSeries constant_like(const MultiSeries& like, const Coeff& c);
MultiSeries monomial_like(const MultiSeries& like, const Mono& m, const Coeff& c = Coeff(1));
MultiSeries variable_like(const MultiSeries& like, std::string_view name);
MultiSeries polynomial(std::vector<VarSpec> vars, std::vector<Grade> grades,
                       std::initializer_list<std::pair<Mono, Coeff>> terms);

MultiSeries operator+(const MultiSeries& a, const MultiSeries& b);
MultiSeries operator-(const MultiSeries& a, const MultiSeries& b);
MultiSeries operator*(const MultiSeries& a, const MultiSeries& b);
MultiSeries operator-(const MultiSeries& a);
MultiSeries operator*(const Coeff& c, const MultiSeries& a);

enum class ArithOp { add, sub, mul };
MultiSeries arith(const MultiSeries& a, const MultiSeries& b, ArithOp op);

MultiSeries invert(const MultiSeries& a);
MultiSeries pow(const MultiSeries& a, long n);
MultiSeries divide(const MultiSeries& a, const MultiSeries& b);

enum class ExpLog { exp, log };
MultiSeries exp_log(const MultiSeries& a, ExpLog dir);
inline MultiSeries exp_series(const MultiSeries& a) { return exp_log(a, ExpLog::exp); }
inline MultiSeries log_series(const MultiSeries& a) { return exp_log(a, ExpLog::log); }

// multiply by an exact monomial
MultiSeries shift(const MultiSeries& a, const Mono& m);
// exact division by a variable the series is divisible by
MultiSeries divide_by_variable(const MultiSeries& a, std::string_view var);
// var -> value; value must have nonnegative exponents and no constant term
MultiSeries substitute(const MultiSeries& a, std::string_view var, const MultiSeries& value);
// var -> c * x^m, exact monomial substitution
MultiSeries substitute_monomial(const MultiSeries& a, std::string_view var, const Coeff& c, const Mono& m);
MultiSeries substitute_zero(const MultiSeries& a, std::string_view var);
// coefficient of var^k, returned with the var exponent set to 0
MultiSeries slice(const MultiSeries& a, std::string_view var, long k);

// move to a new variable list; map[i] is the new index of old variable i,
// or -1 to drop a variable the series does not depend on
MultiSeries remap(const MultiSeries& a, const std::vector<VarSpec>& vars, const std::vector<int>& map,
                  const std::vector<Grade>& extra = {});
// remap by variable name; variables missing from the target must be absent
MultiSeries embed(const MultiSeries& a, const std::vector<VarSpec>& vars, const std::vector<Grade>& extra = {});
MultiSeries rename(const MultiSeries& a, std::string_view from, std::string_view to);
MultiSeries permute(const MultiSeries& a, const std::vector<int>& perm);
// intersect the window with extra constraints
MultiSeries restrict(const MultiSeries& a, const std::vector<Grade>& extra);
MultiSeries restrict_var(const MultiSeries& a, std::string_view var, long order);
MultiSeries set_kind(const MultiSeries& a, std::string_view var, VarKind kind);
MultiSeries map_coeffs(const MultiSeries& a, Coeff (*f)(const Coeff&, int), int arg);

bool equal_within(const MultiSeries& a, const MultiSeries& b);

struct SeriesFraction {
    MultiSeries num;
    MultiSeries den;

    SeriesFraction() = default;
    SeriesFraction(MultiSeries n, MultiSeries d);
};

SeriesFraction operator*(const SeriesFraction& a, const SeriesFraction& b);
SeriesFraction operator/(const SeriesFraction& a, const SeriesFraction& b);
bool equal_within(const SeriesFraction& a, const SeriesFraction& b);
MultiSeries cross_difference(const SeriesFraction& a, const SeriesFraction& b);

}  // namespace ellgen
