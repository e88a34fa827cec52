#pragma once

#include <utility>

#include "ellgen/theta.hpp"

namespace ellgen {

enum class Coords { exp, mult };

struct DegenerateTorsionPoint : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// body is Phi in (q, x) with u = e^x, or in (q, u) with u Laurent.
// The represented function is u^{half_u_shift/2} * body.
struct SigmaSeries {
    MultiSeries body;
    int half_u_shift = 0;
    Coords coords = Coords::exp;
};

// a = (2 pi i / N)(l + k tau)
struct TorsionPoint {
    int N = 0;
    int l = 0;
    int k = 0;
    int exact_order = 0;

    static TorsionPoint make(int N, int l, int k);
};

nlohmann::json torsion_to_json(const TorsionPoint& a);
TorsionPoint torsion_from_json(const nlohmann::json& j);

// Phi(u, q) = (1 - u^{-1}) prod_{n>=1} (1 - q^n u)(1 - q^n u^{-1}) / (1 - q^n)^2.
// exp: x_or_u_order is the exclusive x-order.  mult: it is the exclusive upper
// bound on the u-exponent.
SigmaSeries phi_series(int q_order, int x_or_u_order, Coords coords);
// sigma = u^{1/2} Phi
SigmaSeries sigma_series(int q_order, int x_or_u_order, Coords coords);
// exp coordinates only: multiply the body by e^{half_u_shift * x / 2}
MultiSeries expanded(const SigmaSeries& s);

// q^{n(n+1)/2} (-u)^n Phi(u q^n) - Phi(u) on q < q_order, -u_span <= u-exponent <= u_span
MultiSeries quasiperiodicity_check(int n, int q_order, int u_span);

// g(sum_i c_i v_i) for g in (q, x); `vars` are the target variables and
// `form` gives the coefficient of each named variable
MultiSeries at_linear_form(const MultiSeries& g, const std::vector<VarSpec>& vars,
                           const std::vector<std::pair<std::string, int>>& form);

// W(x,y,z) = Phi(x+y) Phi(x+z) / (Phi(x) Phi(x+y+z)) in (q, x, y, z), exact for
// total {x,y,z}-degree below x_order
SeriesFraction w_series(int q_order, int x_order);

// multiplicity at the point x = cy*y + cz*z
struct DivisorPoint {
    int multiplicity = 0;
    int cy = 0;
    int cz = 0;
};
std::vector<DivisorPoint> w_divisor();

// Phi(0)Phi(x+y)Phi(x+z)Phi(y+z) / (Phi(x)Phi(y)Phi(z)Phi(x+y+z)) with Phi(0)
// read as dPhi_0 = 1, stored in the (-1)^{|I|+1} convention over Q[[q]]
ThetaSection cubical_structure_series(int q_order, int x_degree);

// x e^{-kx/N} sigma(x - a) / (sigma(x) sigma(-a)) in (Q, x) with q = Q^N
MultiSeries level_translate_factor(const TorsionPoint& a, int q_order, int x_order);
// Q^N -> q, for series in Q with every exponent divisible by N
MultiSeries q_from_Q(const MultiSeries& s, int N);

}  // namespace ellgen
