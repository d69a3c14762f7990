// Integer Laurent polynomials in one variable, enough for Alexander
// polynomial bookkeeping: multiplication, exact division, evaluation at
// integer points, and symmetric normalization.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace knotcert {

class LaurentPoly {
public:
    using Coeffs = std::map<int, long long>; // exponent -> coefficient, zero coeffs absent

    LaurentPoly() = default;
    explicit LaurentPoly(Coeffs c) : coeffs_(std::move(c)) { strip(); }

    static LaurentPoly one() { return monomial(0, 1); }

    static LaurentPoly monomial(int exp, long long coeff) {
        LaurentPoly p;
        if (coeff != 0) p.coeffs_[exp] = coeff;
        return p;
    }

    // t^n - 1
    static LaurentPoly power_minus_one(int n) {
        LaurentPoly p;
        p.coeffs_[n] = 1;
        p.coeffs_[0] -= 1;
        p.strip();
        return p;
    }

    bool is_zero() const { return coeffs_.empty(); }
    const Coeffs& coeffs() const { return coeffs_; }

    long long coeff(int exp) const {
        auto it = coeffs_.find(exp);
        return it == coeffs_.end() ? 0 : it->second;
    }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r;
        for (const auto& [ea, ca] : a.coeffs_)
            for (const auto& [eb, cb] : b.coeffs_)
                r.coeffs_[ea + eb] += ca * cb;
        r.strip();
        return r;
    }

    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r = a;
        for (const auto& [e, c] : b.coeffs_) r.coeffs_[e] -= c;
        r.strip();
        return r;
    }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        return a.coeffs_ == b.coeffs_;
    }

    // Exact division; throws if the remainder is nonzero.
    friend LaurentPoly operator/(LaurentPoly num, const LaurentPoly& den) {
        if (den.is_zero()) throw std::invalid_argument("laurent division by zero");
        LaurentPoly quot;
        const auto [de, dc] = *den.coeffs_.rbegin();
        // In an exact division the lowest exponents also divide out, so the
        // quotient exponent never drops below this floor; crossing it means
        // the remainder will never clear.
        const int floor_exp =
            num.is_zero() ? 0 : num.coeffs_.begin()->first - den.coeffs_.begin()->first;
        while (!num.is_zero()) {
            const auto [ne, nc] = *num.coeffs_.rbegin();
            if (nc % dc != 0 || ne - de < floor_exp)
                throw std::invalid_argument("laurent division not exact");
            LaurentPoly term = monomial(ne - de, nc / dc);
            quot.coeffs_[ne - de] += nc / dc;
            num = num - term * den;
        }
        quot.strip();
        return quot;
    }

    long long evaluate(long long t) const {
        // Multiply through by t^{-min} first so negative exponents stay integral.
        if (coeffs_.empty()) return 0;
        int min_exp = coeffs_.begin()->first;
        long long acc = 0;
        for (const auto& [e, c] : coeffs_) {
            long long pw = 1;
            for (int i = 0; i < e - min_exp; ++i) pw *= t;
            acc += c * pw;
        }
        return acc;
    }

    // |p(-1)|, well defined for Alexander polynomials up to units.
    long long determinant_abs() const {
        long long v = evaluate(-1);
        return v < 0 ? -v : v;
    }

    // Recenters the exponent range so that p(t) = p(1/t); requires the
    // exponent spread to be even. Then fixes the sign so p(1) = +1 when
    // |p(1)| = 1.
    LaurentPoly symmetrized() const {
        if (coeffs_.empty()) return *this;
        int lo = coeffs_.begin()->first;
        int hi = coeffs_.rbegin()->first;
        if ((lo + hi) % 2 != 0)
            throw std::invalid_argument("laurent polynomial cannot be symmetrized");
        int shift = -(lo + hi) / 2;
        Coeffs shifted;
        for (const auto& [e, c] : coeffs_) shifted[e + shift] = c;
        LaurentPoly r(std::move(shifted));
        for (const auto& [e, c] : r.coeffs_)
            if (r.coeff(-e) != c)
                throw std::invalid_argument("laurent polynomial is not symmetric");
        if (r.evaluate(1) < 0) {
            for (auto& [e, c] : r.coeffs_) c = -c;
        }
        return r;
    }

    std::string to_string() const {
        if (coeffs_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            auto [e, c] = *it;
            if (!first) os << (c < 0 ? " - " : " + ");
            else if (c < 0) os << "-";
            long long a = c < 0 ? -c : c;
            if (a != 1 || e == 0) os << a;
            if (e != 0) {
                os << "t";
                if (e != 1) os << "^" << e;
            }
            first = false;
        }
        return os.str();
    }

private:
    void strip() {
        for (auto it = coeffs_.begin(); it != coeffs_.end();)
            it = (it->second == 0) ? coeffs_.erase(it) : std::next(it);
    }

    Coeffs coeffs_;
};

// Alexander polynomial of the (p, q) torus knot,
// (t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1)), symmetrized.
inline LaurentPoly torus_alexander(int p, int q) {
    LaurentPoly num = LaurentPoly::power_minus_one(p * q) * LaurentPoly::power_minus_one(1);
    LaurentPoly den = LaurentPoly::power_minus_one(p) * LaurentPoly::power_minus_one(q);
    return (num / den).symmetrized();
}

} // namespace knotcert
