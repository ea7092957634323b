#ifndef ICOH_SCALAR_HPP
#define ICOH_SCALAR_HPP

#include <gmpxx.h>

#include <cctype>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace icoh {

// mpq_class keeps numerator/denominator reduced with a positive denominator.
using Rational = mpq_class;

inline Rational make_rational(const std::string& s) {
    Rational r(s, 10);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) {
    return r.get_str(10);
}

// Element of Q[i].
class GaussScalar {
public:
    GaussScalar() = default;
    GaussScalar(long v) : re_(v) {}
    GaussScalar(Rational re) : re_(std::move(re)) {}
    GaussScalar(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

    static GaussScalar i() { return GaussScalar(Rational(0), Rational(1)); }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }

    GaussScalar conj() const { return GaussScalar(re_, -im_); }
    Rational norm_sq() const { return re_ * re_ + im_ * im_; }

    GaussScalar inverse() const {
        if (is_zero()) throw std::domain_error("division by zero in Q[i]");
        Rational n = norm_sq();
        return GaussScalar(re_ / n, -im_ / n);
    }

    GaussScalar& operator+=(const GaussScalar& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussScalar& operator-=(const GaussScalar& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    GaussScalar& operator*=(const GaussScalar& o) {
        if (sgn(o.im_) == 0) {
            re_ *= o.re_;
            im_ *= o.re_;
            return *this;
        }
        Rational r = re_ * o.re_ - im_ * o.im_;
        im_ = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        return *this;
    }
    GaussScalar& operator/=(const GaussScalar& o) { return *this *= o.inverse(); }

    friend GaussScalar operator+(GaussScalar a, const GaussScalar& b) { return a += b; }
    friend GaussScalar operator-(GaussScalar a, const GaussScalar& b) { return a -= b; }
    friend GaussScalar operator*(GaussScalar a, const GaussScalar& b) { return a *= b; }
    friend GaussScalar operator/(GaussScalar a, const GaussScalar& b) { return a /= b; }
    GaussScalar operator-() const { return GaussScalar(-re_, -im_); }

    friend bool operator==(const GaussScalar& a, const GaussScalar& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussScalar& a, const GaussScalar& b) { return !(a == b); }

    // Total order (re first); only for canonical sorting.
    friend bool operator<(const GaussScalar& a, const GaussScalar& b) {
        int c = cmp(a.re_, b.re_);
        if (c != 0) return c < 0;
        return cmp(a.im_, b.im_) < 0;
    }

private:
    Rational re_{0};
    Rational im_{0};
};

// Serialization "a/b+c/d*i"; the imaginary part is always present so that the
// string parses back without ambiguity.
inline std::string to_string(const GaussScalar& z) {
    std::string s = z.re().get_str(10);
    if (sgn(z.im()) < 0)
        s += "-" + Rational(-z.im()).get_str(10);
    else
        s += "+" + z.im().get_str(10);
    s += "*i";
    return s;
}

// Human form used inside rendered expressions: 3, -1/2, 2i, (1+2i).
inline std::string to_display(const GaussScalar& z) {
    if (z.is_real()) return z.re().get_str(10);
    auto imag = [](const Rational& v) {
        if (v == 1) return std::string("i");
        if (v == -1) return std::string("-i");
        // "1/3*i" keeps the fraction bound to the unit when re-parsed
        return v.get_den() == 1 ? v.get_str(10) + "i" : v.get_str(10) + "*i";
    };
    if (sgn(z.re()) == 0) return imag(z.im());
    std::string s = "(" + z.re().get_str(10);
    std::string t = imag(z.im());
    if (t[0] != '-') s += "+";
    return s + t + ")";
}

inline std::ostream& operator<<(std::ostream& os, const GaussScalar& z) {
    return os << to_display(z);
}

// Parses "a/b+c/d*i", "a/b", "c/d*i", "i", "-i", "3+i", "1/2-2/3*i" and the display form "(1+2i)".
inline GaussScalar parse_gauss(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
    if (s.empty()) throw std::invalid_argument("empty scalar");
    auto rat = [&](const std::string& t) -> Rational {
        if (t.empty() || t == "+") return Rational(1);
        if (t == "-") return Rational(-1);
        std::string u = t[0] == '+' ? t.substr(1) : t;
        for (char c : u)
            if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-'))
                throw std::invalid_argument("bad scalar '" + std::string(text) + "'");
        try {
            return make_rational(u);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad scalar '" + std::string(text) + "'");
        }
    };
    GaussScalar out;
    bool imag_tail = s.back() == 'i';
    if (!imag_tail) return GaussScalar(rat(s));
    s.pop_back();
    if (!s.empty() && s.back() == '*') s.pop_back();
    // split at the last sign that is not in leading position
    std::size_t cut = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;)
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != '/') {
            cut = k;
            break;
        }
    if (cut == std::string::npos) return GaussScalar(Rational(0), rat(s));
    return GaussScalar(rat(s.substr(0, cut)), rat(s.substr(cut)));
}

}  // namespace icoh

#endif
