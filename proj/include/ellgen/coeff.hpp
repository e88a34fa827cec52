#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace ellgen {

struct FieldMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Element of Q or of Q(zeta_N), N <= 12.  Cyclotomic elements are stored as
// coefficient vectors of length phi(N) in the power basis of zeta_N.
class Coeff {
public:
    static constexpr int kMaxLevel = 12;

    Coeff() = default;
    Coeff(long v) : r_(v) {}
    Coeff(mpq_class v) : r_(std::move(v)) { r_.canonicalize(); }
    static Coeff fraction(long num, long den);
    static Coeff cyclotomic(int n, std::vector<mpq_class> v);
    static Coeff zeta(int n, long power = 1);

    int level() const { return n_; }
    bool is_rational() const { return n_ == 1; }
    bool is_zero() const;
    bool is_one() const;
    const mpq_class& rational() const;
    std::vector<mpq_class> components() const;

    Coeff operator-() const;
    Coeff& operator+=(const Coeff& o);
    Coeff& operator-=(const Coeff& o);
    Coeff& operator*=(const Coeff& o);
    Coeff& operator/=(const Coeff& o);
    friend Coeff operator+(Coeff a, const Coeff& b) { return a += b; }
    friend Coeff operator-(Coeff a, const Coeff& b) { return a -= b; }
    friend Coeff operator*(Coeff a, const Coeff& b) { return a *= b; }
    friend Coeff operator/(Coeff a, const Coeff& b) { return a /= b; }
    friend bool operator==(const Coeff& a, const Coeff& b);
    friend bool operator!=(const Coeff& a, const Coeff& b) { return !(a == b); }

    Coeff inverse() const;
    Coeff pow(long e) const;
    // zeta -> zeta^a for a coprime to N
    Coeff galois(int a) const;
    // add accumulation of a*b without temporaries in the rational case
    void add_product(const Coeff& a, const Coeff& b);

    std::string str() const;

private:
    void promote(int n);

    int n_ = 1;
    mpq_class r_;
    std::vector<mpq_class> v_;
};

int euler_phi(int n);
// integer coefficients of the n-th cyclotomic polynomial, lowest degree first
const std::vector<long>& cyclotomic_polynomial(int n);

}  // namespace ellgen
