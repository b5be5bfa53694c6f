#ifndef IPM_RATIONAL_HPP
#define IPM_RATIONAL_HPP

#include <gmpxx.h>

#include <climits>
#include <cmath>
#include <cstdint>
#include <string>

#include "ipm/errors.hpp"

namespace ipm {

/// Arbitrary-precision rational number backed by GMP's mpq.
///
/// Values are always kept in canonical form (reduced, positive denominator).
/// All arithmetic is exact; comparisons are exact.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(int n) : v_(n) {}                 // NOLINT(google-explicit-constructor)
    Rational(long n) : v_(static_cast<long>(n)) {}  // NOLINT
    Rational(long num, long den) : v_(num, den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        v_.canonicalize();
    }
    explicit Rational(const mpz_class& z) : v_(z) {}
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    /// Exact conversion from a binary64 value (every finite double is dyadic).
    static Rational from_double_exact(double d) {
        if (!std::isfinite(d)) throw std::domain_error("Rational: non-finite double");
        Rational r;
        r.v_ = mpq_class(d);
        r.v_.canonicalize();
        return r;
    }

    /// Parses "p", "p/q", or a plain decimal like "-1.25".
    static Rational from_string(const std::string& text) {
        std::string t = text;
        auto dot = t.find('.');
        if (dot != std::string::npos && t.find('/') == std::string::npos) {
            std::string digits = t.substr(0, dot) + t.substr(dot + 1);
            std::size_t frac_len = t.size() - dot - 1;
            mpz_class num;
            if (num.set_str(digits, 10) != 0)
                throw std::domain_error("Rational: bad decimal literal '" + text + "'");
            mpz_class den;
            mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
            mpq_class q(num, den);
            q.canonicalize();
            return Rational(q);
        }
        mpq_class q;
        if (q.set_str(t, 10) != 0)
            throw std::domain_error("Rational: bad literal '" + text + "'");
        q.canonicalize();
        return Rational(q);
    }

    const mpq_class& raw() const { return v_; }
    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_positive() const { return sgn(v_) > 0; }
    bool is_negative() const { return sgn(v_) < 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    double to_double() const { return v_.get_d(); }

    /// "p" for integers, "p/q" otherwise.
    std::string str() const {
        if (is_integer()) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ + b.v_)); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ - b.v_)); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ * b.v_)); }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw std::domain_error("Rational: division by zero");
        return Rational(mpq_class(a.v_ / b.v_));
    }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.v_)); }

    Rational& operator+=(const Rational& b) { v_ += b.v_; return *this; }
    Rational& operator-=(const Rational& b) { v_ -= b.v_; return *this; }
    Rational& operator*=(const Rational& b) { v_ *= b.v_; return *this; }
    Rational& operator/=(const Rational& b) {
        if (b.is_zero()) throw std::domain_error("Rational: division by zero");
        v_ /= b.v_;
        return *this;
    }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    friend Rational abs(const Rational& a) { return Rational(mpq_class(::abs(a.v_))); }

    static Rational pow(const Rational& base, unsigned long exp) {
        mpz_class n, d;
        mpz_pow_ui(n.get_mpz_t(), base.v_.get_num().get_mpz_t(), exp);
        mpz_pow_ui(d.get_mpz_t(), base.v_.get_den().get_mpz_t(), exp);
        return Rational(mpq_class(n, d));
    }

    /// Smallest integer t with t^2 >= x (x >= 0).
    static Rational ceil_sqrt(const Rational& x) {
        if (x.is_negative()) throw std::domain_error("ceil_sqrt of negative value");
        // ceil(x) first, then integer sqrt with adjustment.
        mpz_class c;
        mpz_cdiv_q(c.get_mpz_t(), x.v_.get_num().get_mpz_t(), x.v_.get_den().get_mpz_t());
        mpz_class r;
        mpz_sqrt(r.get_mpz_t(), c.get_mpz_t());
        Rational t{r};
        while (t * t < x) t += 1;
        while (t >= 1 && (t - 1) * (t - 1) >= x) t -= 1;
        return t;
    }

    /// Rounds to the nearest multiple of 2^-bits (ties away from zero).
    Rational round_dyadic(unsigned long bits) const {
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 2, bits);
        mpz_class scaled_num = v_.get_num() * scale;
        mpz_class q, r;
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), scaled_num.get_mpz_t(),
                    v_.get_den().get_mpz_t());
        mpz_class twice_r = 2 * ::abs(r);
        if (twice_r >= v_.get_den()) q += sgn(v_);
        return Rational(mpq_class(q, scale));
    }

    /// ceil(log2(|x|)) for x != 0; the number of bits needed so that
    /// 2^-result <= |x|.
    long ceil_log2_abs() const {
        if (is_zero()) throw std::domain_error("log2 of zero");
        // |x| = num/den; log2 = bits(num) - bits(den) up to +-1; nudge exactly.
        long b = static_cast<long>(mpz_sizeinbase(v_.get_num().get_mpz_t(), 2)) -
                 static_cast<long>(mpz_sizeinbase(v_.get_den().get_mpz_t(), 2));
        Rational a = abs(*this);
        auto pow2 = [](long e) {
            mpz_class p;
            mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e >= 0 ? e : -e));
            return e >= 0 ? Rational(mpq_class(p)) : Rational(mpq_class(1, p));
        };
        while (pow2(b) < a) ++b;
        while (b > LONG_MIN && pow2(b - 1) >= a) --b;
        return b;
    }

    /// Natural log as double, accurate even when the value over/underflows
    /// binary64.
    double log_approx() const {
        if (!is_positive()) throw std::domain_error("log of nonpositive value");
        signed long en, ed;
        double mn = mpz_get_d_2exp(&en, v_.get_num().get_mpz_t());
        double md = mpz_get_d_2exp(&ed, v_.get_den().get_mpz_t());
        return std::log(mn) - std::log(md) +
               (static_cast<double>(en) - static_cast<double>(ed)) * std::log(2.0);
    }

private:
    mpq_class v_;
};

} // namespace ipm

#endif
