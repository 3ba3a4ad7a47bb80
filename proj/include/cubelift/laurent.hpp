#pragma once

#include <map>
#include <string>

#include "cubelift/bigint.hpp"

namespace cubelift {

/// Integer-coefficient Laurent polynomial in one variable A.
/// Canonical form: no zero coefficients are ever stored, so operator== is
/// structural equality of the term maps.
class LaurentPolynomial {
public:
    LaurentPolynomial() = default;
    explicit LaurentPolynomial(BigInt constant);
    static LaurentPolynomial monomial(BigInt coeff, int exponent);

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    const std::map<int, BigInt>& terms() const { return terms_; }

    LaurentPolynomial& operator+=(const LaurentPolynomial& rhs);
    LaurentPolynomial& operator-=(const LaurentPolynomial& rhs);
    LaurentPolynomial operator+(const LaurentPolynomial& rhs) const;
    LaurentPolynomial operator-(const LaurentPolynomial& rhs) const;
    LaurentPolynomial operator*(const LaurentPolynomial& rhs) const;
    LaurentPolynomial operator-() const;
    bool operator==(const LaurentPolynomial& rhs) const { return terms_ == rhs.terms_; }
    bool operator!=(const LaurentPolynomial& rhs) const { return terms_ != rhs.terms_; }
    bool operator<(const LaurentPolynomial& rhs) const { return terms_ < rhs.terms_; }

    /// Multiply by coeff*A^exponent.
    LaurentPolynomial& mul_monomial(const BigInt& coeff, int exponent);

    /// A -> A^{-1}; the polynomial of the mirror diagram.
    LaurentPolynomial mirrored() const;

    LaurentPolynomial pow(unsigned k) const;

    /// Canonical text form: terms joined by '+', exponents descending,
    /// each term "c*A^e" with the sign folded into c, e.g.
    /// "-1*A^-4+1*A^-12". The zero polynomial prints as "0".
    std::string to_string() const;
    static LaurentPolynomial from_string(const std::string& text);

private:
    void add_term(int exponent, const BigInt& coeff);
    std::map<int, BigInt> terms_;
};

/// Element of Z[zeta_8], zeta = exp(i*pi/4), with zeta^4 = -1.
/// Stored as c[0] + c[1]*zeta + c[2]*zeta^2 + c[3]*zeta^3.
struct Zeta8 {
    BigInt c[4];

    static Zeta8 zeta_pow(int e);
    Zeta8 operator+(const Zeta8& r) const;
    Zeta8 operator*(const Zeta8& r) const;
    Zeta8 conj() const; // complex conjugation, zeta -> zeta^{-1}
    bool is_rational_integer() const { return c[1] == 0 && c[2] == 0 && c[3] == 0; }
};

/// Exact evaluation of p at A = zeta_8.
Zeta8 evaluate_at_zeta8(const LaurentPolynomial& p);

/// |p(zeta_8)| when that magnitude is a nonnegative integer; throws otherwise.
BigInt magnitude_at_zeta8(const LaurentPolynomial& p);

} // namespace cubelift
