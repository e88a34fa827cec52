#pragma once

#include <cstdint>
#include <json.hpp>

#include "ellgen/series.hpp"

namespace ellgen {

struct NotACoordinate : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class BaseLaw { additive, multiplicative };
enum class Provenance { additive, multiplicative, from_coordinate, random };

std::string provenance_name(Provenance p);
Provenance provenance_from_name(const std::string& s);

// f(x) with f(0) = 0 and f'(0) = 1, in the variable "x" over power-kind base
// variables (for instance q).
class Coordinate {
public:
    static Coordinate from_series(MultiSeries f);
    static Coordinate identity(int degree);
    // 1 - exp(-x)
    static Coordinate exponential(int degree);
    // x + c[0] x^2 + c[1] x^3 + ...
    static Coordinate polynomial(const std::vector<Coeff>& higher, int degree);
    static Coordinate random(std::uint64_t seed, int degree);

    const MultiSeries& series() const { return f_; }
    std::vector<VarSpec> base_vars() const;
    long order() const { return f_.vars()[f_.index_of("x")].order; }
    // f(x)/x, a unit with constant term 1
    MultiSeries quotient() const;
    // compositional inverse
    MultiSeries inverse() const;

private:
    explicit Coordinate(MultiSeries f) : f_(std::move(f)) {}
    MultiSeries f_;
};

struct FormalGroupLaw {
    // series in the base variables followed by x1, x2, exact to total degree `degree`
    MultiSeries F;
    int degree = 0;
    Provenance provenance = Provenance::additive;

    std::vector<VarSpec> base_vars() const;
};

FormalGroupLaw additive_law(int degree, const std::vector<VarSpec>& base = {});
FormalGroupLaw multiplicative_law(int degree, const std::vector<VarSpec>& base = {});
FormalGroupLaw fgl_from_coordinate(const Coordinate& f, BaseLaw base, int degree);

struct FglReport {
    MultiSeries unit_left;
    MultiSeries unit_right;
    MultiSeries commutativity;
    MultiSeries associativity;
    bool ok() const;
};
FglReport check_fgl_axioms(const FormalGroupLaw& F);

// iota(x) with F(x, iota(x)) = 0, as a series in the base variables and x
MultiSeries formal_inverse(const FormalGroupLaw& F);

struct LaurentBaseChange {
    MultiSeries value;        // F(x, y) in base((y))[[x]]
    MultiSeries inverse;      // its inverse
    MultiSeries certificate;  // value * inverse
};
LaurentBaseChange base_change_laurent(const FormalGroupLaw& F, const std::string& y = "y",
                                      VarKind kind = VarKind::laurent);

// F(a, b) for series a, b over a common variable list containing the base variables
MultiSeries fgl_eval(const FormalGroupLaw& F, const MultiSeries& a, const MultiSeries& b);
// iterated F-sum of the named variables of `like`
MultiSeries fgl_sum(const FormalGroupLaw& F, const MultiSeries& like, const std::vector<std::string>& names);

nlohmann::json fgl_to_json(const FormalGroupLaw& F);
FormalGroupLaw fgl_from_json(const nlohmann::json& j);

}  // namespace ellgen
