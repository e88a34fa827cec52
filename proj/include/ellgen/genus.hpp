#pragma once

#include <optional>

#include "ellgen/sigma.hpp"

namespace ellgen {

// nonincreasing positive parts
using Partition = std::vector<int>;
std::vector<Partition> partitions(int n);
std::string partition_key(const Partition& p);
Partition partition_from_key(const std::string& key);

struct ManifoldClass {
    int d = 0;
    std::map<Partition, long> chern;
    bool c1_zero = false;
    // c1 is divisible by this integer (0 when c1 = 0)
    std::optional<long> c1_mod;
    std::string label;

    long chern_number(const Partition& p) const;
    bool c1_divisible_by(long N) const;
};

ManifoldClass point_manifold();
ManifoldClass manifold_from_chern_numbers(int d, std::map<Partition, long> numbers, bool c1_zero = false,
                                          std::optional<long> c1_mod = std::nullopt, std::string label = "");
// smooth complete intersection of the given degrees in CP^n
ManifoldClass complete_intersection(int n, const std::vector<int>& degrees);
ManifoldClass product_manifold(const ManifoldClass& a, const ManifoldClass& b);

nlohmann::json manifold_to_json(const ManifoldClass& m);
// {"type": "complete_intersection" | "chern_numbers" | "product", ...}
ManifoldClass manifold_from_json(const nlohmann::json& j);

// integral over M of prod_i h(x_i) for the per-root factor h in the variable x;
// the result lives over the remaining variables of h
MultiSeries genus_eval(const ManifoldClass& M, const MultiSeries& h, std::string_view x = "x");

enum class Normalization { paper, bl, hoehn, lambda_unshifted };
enum class JacobiMode { fraction, expanded };
std::string normalization_name(Normalization n);
Normalization normalization_from_name(const std::string& s);

// y^{half_y_shift/2} * body in (q, y)
struct JacobiSeries {
    int weight = 0;
    int half_y_shift = 0;
    JacobiMode mode = JacobiMode::fraction;
    SeriesFraction fraction;
    MultiSeries expanded;
    Normalization normalization = Normalization::paper;
};

// per-root numerator factor in (q, y, x), exact in y
//   bl, paper:        x (1 - y e^{-x}) / (1 - e^{-x}) prod (1 - y q^n e^{-x})(1 - y^{-1} q^n e^x)
//                     / ((1 - q^n e^x)(1 - q^n e^{-x}))
//   hoehn:            x (1 + y e^{-x}) / (1 - e^{-x}) prod (1 + y q^n e^{-x})(1 + y^{-1} q^n e^x)(1 - q^n)^2
//                     / ((1 - q^n e^x)(1 - q^n e^{-x}))
//   lambda_unshifted: x / (1 - e^{-x}) prod (1 - y q^n e^x)(1 - y^{-1} q^n e^{-x})
//                     / ((1 - q^n e^x)(1 - q^n e^{-x}))
MultiSeries two_variable_factor(Normalization n, int q_order, int x_order);
// denominator in (q, y) for a d-fold; 1 for bl
MultiSeries two_variable_denominator(Normalization n, int q_order, int d);

JacobiSeries two_variable_genus(const ManifoldClass& M, int q_order, Normalization n = Normalization::paper);
// fraction -> expanded in increasing powers of y, exact for y-exponent < y_order
JacobiSeries expand(const JacobiSeries& J, long y_order);

nlohmann::json jacobi_to_json(const JacobiSeries& J);
JacobiSeries jacobi_from_json(const nlohmann::json& j);

// sigma(y^{-1}, q) in (q, y): half_u_shift becomes half_y_shift = -1
struct ShiftedSeries {
    int half_y_shift = 0;
    MultiSeries body;
};
ShiftedSeries sigma_at_y_inverse(int q_order);

// num(qy) den(y) - num(y) den(qy) on q < q_order, |y-exponent| <= y_span
MultiSeries jacobi_invariance_check(const JacobiSeries& J, int q_order, int y_span);

struct HomogeneityReport {
    Coeff scale;
    bool uniform = false;
    bool nonvacuous = false;
};
// genus with h(lambda x) against the genus with h
HomogeneityReport homogeneity_ratio(const ManifoldClass& M, const MultiSeries& h, const Coeff& lambda,
                                    std::string_view x = "x");
// the same for the two-variable per-root factor
HomogeneityReport weight_homogeneity_check(const ManifoldClass& M, const Coeff& lambda, int q_order);

// adjoint genus of (f, F): per-root factor x f(F(x, y)) / (f(x) f(y)), read off
// sharp(delta(Theta^1 section of f)), over base((y))
MultiSeries adjoint_factor(const Coordinate& f, const FormalGroupLaw& F);
MultiSeries adjoint_genus(const Coordinate& f, const FormalGroupLaw& F, const ManifoldClass& M);

struct LevelGenus {
    MultiSeries value;  // in Q with q = Q^N
    std::string warning;
};
LevelGenus level_n_genus(const ManifoldClass& M, const TorsionPoint& a, int q_order);
// y -> value in a series exact in y
MultiSeries specialize_y(const MultiSeries& s, const Coeff& value);

struct ChernLemmaReport {
    MultiSeries c1;           // c1 of V y^k - V - r y^k
    MultiSeries c2;           // c2 of the same
    MultiSeries c2_expected;  // -k z c1(V)
    MultiSeries whitney_residual;
    MultiSeries twist_residual;
    bool ok() const;
};
// V of rank r with Chern roots x1..xr, z = c1(y); everything modulo degree 3
ChernLemmaReport chern_lemma_check(int r, int k);

}  // namespace ellgen
