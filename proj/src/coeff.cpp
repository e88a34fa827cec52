#include "ellgen/coeff.hpp"

#include <array>
#include <mutex>
#include <numeric>

namespace ellgen {

namespace {

std::vector<long> poly_divide_exact(std::vector<long> num, const std::vector<long>& den) {
    std::vector<long> quo(num.size() - den.size() + 1, 0);
    for (size_t i = quo.size(); i-- > 0;) {
        long c = num[i + den.size() - 1] / den.back();
        quo[i] = c;
        for (size_t j = 0; j < den.size(); ++j) num[i + j] -= c * den[j];
    }
    return quo;
}

std::array<std::vector<long>, Coeff::kMaxLevel + 1> build_table() {
    std::array<std::vector<long>, Coeff::kMaxLevel + 1> t;
    for (int n = 1; n <= Coeff::kMaxLevel; ++n) {
        std::vector<long> p(n + 1, 0);
        p[0] = -1;
        p[n] = 1;
        for (int d = 1; d < n; ++d)
            if (n % d == 0) p = poly_divide_exact(p, t[d]);
        t[n] = p;
    }
    return t;
}

void check_level(int n) {
    if (n < 1 || n > Coeff::kMaxLevel)
        throw std::invalid_argument("cyclotomic level out of range: " + std::to_string(n));
}

// reduce a polynomial in zeta (any length) modulo Phi_n into phi(n) slots
std::vector<mpq_class> reduce_poly(std::vector<mpq_class> p, int n) {
    const auto& phi = cyclotomic_polynomial(n);
    size_t deg = phi.size() - 1;
    for (size_t k = p.size(); k-- > deg;) {
        if (p[k] == 0) continue;
        mpq_class c = p[k];
        for (size_t j = 0; j <= deg; ++j) p[k - deg + j] -= c * phi[j];
    }
    p.resize(deg);
    return p;
}

}  // namespace

int euler_phi(int n) {
    int r = 0;
    for (int k = 1; k <= n; ++k)
        if (std::gcd(k, n) == 1) ++r;
    return r;
}

const std::vector<long>& cyclotomic_polynomial(int n) {
    static const auto table = build_table();
    check_level(n);
    return table[n];
}

Coeff Coeff::fraction(long num, long den) {
    if (den == 0) throw std::domain_error("zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return Coeff(q);
}

Coeff Coeff::cyclotomic(int n, std::vector<mpq_class> v) {
    check_level(n);
    Coeff c;
    if (n <= 2) {
        if (v.size() != 1) throw std::invalid_argument("bad cyclotomic vector length");
        c.r_ = v[0];
        c.r_.canonicalize();
        return c;
    }
    if (static_cast<int>(v.size()) != euler_phi(n))
        throw std::invalid_argument("bad cyclotomic vector length");
    c.n_ = n;
    for (auto& x : v) x.canonicalize();
    c.v_ = std::move(v);
    return c;
}

Coeff Coeff::zeta(int n, long power) {
    check_level(n);
    long e = ((power % n) + n) % n;
    if (n <= 2) return Coeff((n == 2 && e == 1) ? -1 : 1);
    std::vector<mpq_class> p(e + 1, 0);
    p[e] = 1;
    Coeff c;
    c.n_ = n;
    c.v_ = reduce_poly(std::move(p), n);
    return c;
}

bool Coeff::is_zero() const {
    if (n_ == 1) return r_ == 0;
    for (const auto& x : v_)
        if (x != 0) return false;
    return true;
}

bool Coeff::is_one() const {
    if (n_ == 1) return r_ == 1;
    if (v_[0] != 1) return false;
    for (size_t i = 1; i < v_.size(); ++i)
        if (v_[i] != 0) return false;
    return true;
}

const mpq_class& Coeff::rational() const {
    if (n_ != 1) throw FieldMismatch("coefficient is not rational");
    return r_;
}

std::vector<mpq_class> Coeff::components() const {
    if (n_ == 1) return {r_};
    return v_;
}

void Coeff::promote(int n) {
    if (n_ == n || n == 1) return;
    if (n_ != 1) throw FieldMismatch("mixed cyclotomic levels");
    v_.assign(euler_phi(n), 0);
    v_[0] = r_;
    r_ = 0;
    n_ = n;
}

Coeff Coeff::operator-() const {
    Coeff c = *this;
    if (n_ == 1)
        c.r_ = -c.r_;
    else
        for (auto& x : c.v_) x = -x;
    return c;
}

Coeff& Coeff::operator+=(const Coeff& o) {
    if (n_ == 1 && o.n_ == 1) {
        r_ += o.r_;
        return *this;
    }
    promote(o.n_);
    if (o.n_ == 1)
        v_[0] += o.r_;
    else
        for (size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
}

Coeff& Coeff::operator-=(const Coeff& o) { return *this += -o; }

Coeff& Coeff::operator*=(const Coeff& o) {
    if (n_ == 1 && o.n_ == 1) {
        r_ *= o.r_;
        return *this;
    }
    if (o.n_ == 1) {
        for (auto& x : v_) x *= o.r_;
        return *this;
    }
    if (n_ == 1) {
        mpq_class s = r_;
        *this = o;
        for (auto& x : v_) x *= s;
        return *this;
    }
    if (n_ != o.n_) throw FieldMismatch("mixed cyclotomic levels");
    std::vector<mpq_class> p(v_.size() + o.v_.size() - 1, 0);
    for (size_t i = 0; i < v_.size(); ++i) {
        if (v_[i] == 0) continue;
        for (size_t j = 0; j < o.v_.size(); ++j) p[i + j] += v_[i] * o.v_[j];
    }
    v_ = reduce_poly(std::move(p), n_);
    return *this;
}

Coeff Coeff::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero coefficient");
    if (n_ == 1) return Coeff(mpq_class(1) / r_);
    // solve (multiplication by this) * w = 1 by Gaussian elimination
    const size_t d = v_.size();
    std::vector<std::vector<mpq_class>> m(d, std::vector<mpq_class>(d + 1, 0));
    for (size_t j = 0; j < d; ++j) {
        Coeff col = *this * Coeff::zeta(n_, static_cast<long>(j));
        for (size_t i = 0; i < d; ++i) m[i][j] = col.v_[i];
    }
    m[0][d] = 1;
    for (size_t c = 0; c < d; ++c) {
        size_t piv = c;
        while (m[piv][c] == 0) ++piv;
        std::swap(m[piv], m[c]);
        mpq_class inv = 1 / m[c][c];
        for (auto& x : m[c]) x *= inv;
        for (size_t r = 0; r < d; ++r) {
            if (r == c || m[r][c] == 0) continue;
            mpq_class f = m[r][c];
            for (size_t k = c; k <= d; ++k) m[r][k] -= f * m[c][k];
        }
    }
    std::vector<mpq_class> w(d);
    for (size_t i = 0; i < d; ++i) w[i] = m[i][d];
    return Coeff::cyclotomic(n_, std::move(w));
}

Coeff& Coeff::operator/=(const Coeff& o) {
    if (n_ == 1 && o.n_ == 1) {
        if (o.r_ == 0) throw std::domain_error("division by zero coefficient");
        r_ /= o.r_;
        return *this;
    }
    return *this *= o.inverse();
}

bool operator==(const Coeff& a, const Coeff& b) {
    if (a.n_ == b.n_) return a.n_ == 1 ? a.r_ == b.r_ : a.v_ == b.v_;
    if (a.n_ == 1) return b == a;
    if (b.n_ != 1) return a.is_zero() && b.is_zero();
    if (a.v_[0] != b.r_) return false;
    for (size_t i = 1; i < a.v_.size(); ++i)
        if (a.v_[i] != 0) return false;
    return true;
}

Coeff Coeff::pow(long e) const {
    Coeff base = e < 0 ? inverse() : *this;
    unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    Coeff r(1);
    while (k) {
        if (k & 1) r *= base;
        k >>= 1;
        if (k) base *= base;
    }
    return r;
}

Coeff Coeff::galois(int a) const {
    if (n_ == 1) return *this;
    if (std::gcd(a, n_) != 1) throw std::invalid_argument("galois exponent not coprime to level");
    std::vector<mpq_class> p(n_, 0);
    long aa = ((a % n_) + n_) % n_;
    for (size_t j = 0; j < v_.size(); ++j) p[(aa * j) % n_] += v_[j];
    return Coeff::cyclotomic(n_, reduce_poly(std::move(p), n_));
}

void Coeff::add_product(const Coeff& a, const Coeff& b) {
    if (n_ == 1 && a.n_ == 1 && b.n_ == 1) {
        mpq_class t;
        mpq_mul(t.get_mpq_t(), a.r_.get_mpq_t(), b.r_.get_mpq_t());
        r_ += t;
        return;
    }
    *this += a * b;
}

std::string Coeff::str() const {
    if (n_ == 1) return r_.get_str();
    std::string s;
    for (size_t i = 0; i < v_.size(); ++i) {
        if (v_[i] == 0) continue;
        if (!s.empty()) s += " + ";
        s += "(" + v_[i].get_str() + ")";
        if (i) s += "*z" + std::to_string(n_) + "^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
}

}  // namespace ellgen
