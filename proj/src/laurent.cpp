#include "cubelift/laurent.hpp"

#include <sstream>
#include <stdexcept>

namespace cubelift {

LaurentPolynomial::LaurentPolynomial(BigInt constant) {
    if (constant != 0) terms_[0] = std::move(constant);
}

LaurentPolynomial LaurentPolynomial::monomial(BigInt coeff, int exponent) {
    LaurentPolynomial p;
    if (coeff != 0) p.terms_[exponent] = std::move(coeff);
    return p;
}

bool LaurentPolynomial::is_one() const {
    return terms_.size() == 1 && terms_.begin()->first == 0 && terms_.begin()->second == 1;
}

void LaurentPolynomial::add_term(int exponent, const BigInt& coeff) {
    if (coeff == 0) return;
    auto it = terms_.find(exponent);
    if (it == terms_.end()) {
        terms_.emplace(exponent, coeff);
    } else {
        it->second += coeff;
        if (it->second == 0) terms_.erase(it);
    }
}

LaurentPolynomial& LaurentPolynomial::operator+=(const LaurentPolynomial& rhs) {
    for (const auto& [e, c] : rhs.terms_) add_term(e, c);
    return *this;
}

LaurentPolynomial& LaurentPolynomial::operator-=(const LaurentPolynomial& rhs) {
    for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
    return *this;
}

LaurentPolynomial LaurentPolynomial::operator+(const LaurentPolynomial& rhs) const {
    LaurentPolynomial out = *this;
    out += rhs;
    return out;
}

LaurentPolynomial LaurentPolynomial::operator-(const LaurentPolynomial& rhs) const {
    LaurentPolynomial out = *this;
    out -= rhs;
    return out;
}

LaurentPolynomial LaurentPolynomial::operator-() const {
    LaurentPolynomial out;
    for (const auto& [e, c] : terms_) out.terms_[e] = -c;
    return out;
}

LaurentPolynomial LaurentPolynomial::operator*(const LaurentPolynomial& rhs) const {
    LaurentPolynomial out;
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : rhs.terms_) out.add_term(e1 + e2, c1 * c2);
    return out;
}

LaurentPolynomial& LaurentPolynomial::mul_monomial(const BigInt& coeff, int exponent) {
    if (coeff == 0) {
        terms_.clear();
        return *this;
    }
    std::map<int, BigInt> shifted;
    for (const auto& [e, c] : terms_) shifted[e + exponent] = c * coeff;
    terms_ = std::move(shifted);
    return *this;
}

LaurentPolynomial LaurentPolynomial::mirrored() const {
    LaurentPolynomial out;
    for (const auto& [e, c] : terms_) out.terms_[-e] = c;
    return out;
}

LaurentPolynomial LaurentPolynomial::pow(unsigned k) const {
    LaurentPolynomial out(BigInt(1));
    LaurentPolynomial base = *this;
    while (k) {
        if (k & 1u) out = out * base;
        base = base * base;
        k >>= 1u;
    }
    return out;
}

std::string LaurentPolynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        if (!first) os << '+';
        first = false;
        os << it->second.str() << "*A^" << it->first;
    }
    return os.str();
}

LaurentPolynomial LaurentPolynomial::from_string(const std::string& text) {
    LaurentPolynomial p;
    if (text == "0") return p;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t next = text.find('+', pos);
        // A '+' immediately followed by '-' separates terms too; coefficient
        // signs live inside the term body.
        std::string term = text.substr(pos, next == std::string::npos ? next : next - pos);
        size_t star = term.find("*A^");
        if (star == std::string::npos) throw std::runtime_error("bad polynomial term: " + term);
        BigInt coeff(term.substr(0, star));
        int exp = std::stoi(term.substr(star + 3));
        p.add_term(exp, coeff);
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return p;
}

Zeta8 Zeta8::zeta_pow(int e) {
    Zeta8 v;
    int m = ((e % 8) + 8) % 8;
    BigInt sign = 1;
    if (m >= 4) {
        m -= 4;
        sign = -1;
    }
    v.c[m] = sign;
    return v;
}

Zeta8 Zeta8::operator+(const Zeta8& r) const {
    Zeta8 out;
    for (int i = 0; i < 4; ++i) out.c[i] = c[i] + r.c[i];
    return out;
}

Zeta8 Zeta8::operator*(const Zeta8& r) const {
    Zeta8 out;
    for (int i = 0; i < 4; ++i) {
        if (c[i] == 0) continue;
        for (int j = 0; j < 4; ++j) {
            if (r.c[j] == 0) continue;
            int e = i + j;
            BigInt v = c[i] * r.c[j];
            if (e >= 4) {
                e -= 4;
                v = -v;
            }
            out.c[e] += v;
        }
    }
    return out;
}

Zeta8 Zeta8::conj() const {
    // conj(zeta^k) = zeta^{-k}; zeta^{-1} = -zeta^3, zeta^{-2} = -zeta^2, zeta^{-3} = -zeta.
    Zeta8 out;
    out.c[0] = c[0];
    out.c[1] = -c[3];
    out.c[2] = -c[2];
    out.c[3] = -c[1];
    return out;
}

Zeta8 evaluate_at_zeta8(const LaurentPolynomial& p) {
    Zeta8 acc;
    for (const auto& [e, coeff] : p.terms()) {
        Zeta8 t = Zeta8::zeta_pow(e);
        for (int i = 0; i < 4; ++i) t.c[i] *= coeff;
        acc = acc + t;
    }
    return acc;
}

BigInt magnitude_at_zeta8(const LaurentPolynomial& p) {
    Zeta8 v = evaluate_at_zeta8(p);
    Zeta8 norm = v * v.conj();
    if (!norm.is_rational_integer() || norm.c[0] < 0)
        throw std::runtime_error("|p(zeta_8)|^2 is not a nonnegative rational integer");
    BigInt n2 = norm.c[0];
    BigInt r = boost::multiprecision::sqrt(n2);
    if (r * r != n2) throw std::runtime_error("|p(zeta_8)| is not an integer");
    return r;
}

} // namespace cubelift
