// Constant-coefficient differential operators on the plane, stored as
// bivariate polynomials in the two derivative slots D1 = d/dx1, D2 = d/dx2
// with complex coefficients.
//
// Expression grammar (whitespace-insensitive):
//
//   expr    := ['+'|'-'] term (('+'|'-') term)*
//   term    := factor (['*'] factor)*
//   factor  := primary ['^' uint]
//   primary := number | 'i' | 'D1' | 'D2' | 'u' | '(' expr ')'
//
// 'u' denotes the identity operator (the function itself), so boundary
// conditions like "u" or "D2" parse directly.  Coefficients may combine
// through the arithmetic, e.g. "(1+2i)*D1^2" or "D1 - i*D2".
//
// The canonical printer emits terms in graded-lexicographic order
// (total degree descending, then D1-exponent descending) with every
// coefficient as "(a+bi)" at 17 significant digits; its output reparses
// to an identical polynomial.

#pragma once

#include <algorithm>
#include <cctype>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sensilab::opsym {

struct ComplexBivarPoly {
    // (j, k) -> coefficient of D1^j D2^k; exact zeros are never stored.
    std::map<std::pair<int, int>, std::complex<double>> coeffs;

    bool is_zero() const { return coeffs.empty(); }

    int total_degree() const {
        int d = 0;
        for (const auto& [jk, c] : coeffs) d = std::max(d, jk.first + jk.second);
        return d;
    }

    bool is_homogeneous() const {
        if (coeffs.empty()) return true;
        const int d = total_degree();
        for (const auto& [jk, c] : coeffs)
            if (jk.first + jk.second != d) return false;
        return true;
    }

    void add_term(int j, int k, std::complex<double> c) {
        auto key = std::make_pair(j, k);
        auto it = coeffs.find(key);
        if (it == coeffs.end()) {
            if (c != std::complex<double>(0.0, 0.0)) coeffs.emplace(key, c);
        } else {
            it->second += c;
            if (it->second == std::complex<double>(0.0, 0.0)) coeffs.erase(it);
        }
    }

    std::complex<double> coeff(int j, int k) const {
        auto it = coeffs.find({j, k});
        return it == coeffs.end() ? std::complex<double>(0.0) : it->second;
    }

    std::complex<double> eval(std::complex<double> d1, std::complex<double> d2) const {
        std::complex<double> s = 0.0;
        for (const auto& [jk, c] : coeffs) {
            std::complex<double> t = c;
            for (int a = 0; a < jk.first; ++a) t *= d1;
            for (int a = 0; a < jk.second; ++a) t *= d2;
            s += t;
        }
        return s;
    }

    friend ComplexBivarPoly operator+(const ComplexBivarPoly& a, const ComplexBivarPoly& b) {
        ComplexBivarPoly r = a;
        for (const auto& [jk, c] : b.coeffs) r.add_term(jk.first, jk.second, c);
        return r;
    }

    friend ComplexBivarPoly operator-(const ComplexBivarPoly& a, const ComplexBivarPoly& b) {
        ComplexBivarPoly r = a;
        for (const auto& [jk, c] : b.coeffs) r.add_term(jk.first, jk.second, -c);
        return r;
    }

    friend ComplexBivarPoly operator*(const ComplexBivarPoly& a, const ComplexBivarPoly& b) {
        ComplexBivarPoly r;
        for (const auto& [jk, c] : a.coeffs)
            for (const auto& [lm, d] : b.coeffs)
                r.add_term(jk.first + lm.first, jk.second + lm.second, c * d);
        return r;
    }

    friend ComplexBivarPoly operator*(std::complex<double> s, const ComplexBivarPoly& a) {
        ComplexBivarPoly r;
        for (const auto& [jk, c] : a.coeffs) r.add_term(jk.first, jk.second, s * c);
        return r;
    }

    friend bool operator==(const ComplexBivarPoly& a, const ComplexBivarPoly& b) {
        return a.coeffs == b.coeffs;
    }

    static ComplexBivarPoly constant(std::complex<double> c) {
        ComplexBivarPoly r;
        r.add_term(0, 0, c);
        return r;
    }

    static ComplexBivarPoly monomial(int j, int k, std::complex<double> c = 1.0) {
        ComplexBivarPoly r;
        r.add_term(j, k, c);
        return r;
    }

    ComplexBivarPoly pow(int e) const {
        ComplexBivarPoly r = constant(1.0);
        for (int a = 0; a < e; ++a) r = r * (*this);
        return r;
    }
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t pos, const std::string& what)
        : std::runtime_error("parse error at position " + std::to_string(pos) + ": " + what),
          position(pos) {}
    std::size_t position;
};

namespace detail {

class OperatorParser {
public:
    explicit OperatorParser(std::string_view text) : text_(text) {}

    ComplexBivarPoly parse() {
        skip_ws();
        if (at_end()) throw ParseError(pos_, "empty operator expression");
        ComplexBivarPoly p = parse_expr();
        skip_ws();
        if (!at_end()) throw ParseError(pos_, std::string("unexpected character '") + text_[pos_] + "'");
        return p;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }
    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    ComplexBivarPoly parse_expr() {
        skip_ws();
        std::complex<double> sign = 1.0;
        if (peek() == '+' || peek() == '-') {
            if (peek() == '-') sign = -1.0;
            ++pos_;
        }
        ComplexBivarPoly acc = sign * parse_term();
        skip_ws();
        while (peek() == '+' || peek() == '-') {
            bool neg = (peek() == '-');
            ++pos_;
            ComplexBivarPoly t = parse_term();
            acc = neg ? acc - t : acc + t;
            skip_ws();
        }
        return acc;
    }

    ComplexBivarPoly parse_term() {
        ComplexBivarPoly acc = parse_factor();
        for (;;) {
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                acc = acc * parse_factor();
            } else if (starts_factor(peek())) {
                // implicit product, e.g. "3i" or "2 D1"
                acc = acc * parse_factor();
            } else {
                return acc;
            }
        }
    }

    static bool starts_factor(char c) {
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' ||
               std::isalpha(static_cast<unsigned char>(c));
    }

    ComplexBivarPoly parse_factor() {
        ComplexBivarPoly base = parse_primary();
        skip_ws();
        if (peek() == '^') {
            ++pos_;
            skip_ws();
            std::size_t at = pos_;
            long e = parse_uint();
            if (e > 64) throw ParseError(at, "exponent too large");
            return base.pow(static_cast<int>(e));
        }
        return base;
    }

    long parse_uint() {
        skip_ws();
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            throw ParseError(pos_, "expected a nonnegative integer exponent");
        long v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + (text_[pos_] - '0');
            ++pos_;
            if (v > 1000000) throw ParseError(pos_, "exponent too large");
        }
        return v;
    }

    ComplexBivarPoly parse_primary() {
        skip_ws();
        if (at_end()) throw ParseError(pos_, "expected a factor");
        char c = peek();
        if (c == '(') {
            ++pos_;
            ComplexBivarPoly inner = parse_expr();
            skip_ws();
            if (peek() != ')') throw ParseError(pos_, "expected ')'");
            ++pos_;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        throw ParseError(pos_, std::string("unexpected character '") + c + "'");
    }

    ComplexBivarPoly parse_number() {
        // strtod on the tail; it never consumes a leading sign here because
        // signs are handled at expression level.
        std::string tail(text_.substr(pos_));
        const char* begin = tail.c_str();
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) throw ParseError(pos_, "malformed number");
        pos_ += static_cast<std::size_t>(end - begin);
        return ComplexBivarPoly::constant(v);
    }

    ComplexBivarPoly parse_ident() {
        std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())))) ++pos_;
        std::string_view name = text_.substr(start, pos_ - start);
        if (name == "i") return ComplexBivarPoly::constant({0.0, 1.0});
        if (name == "u") return ComplexBivarPoly::constant(1.0);
        if (name == "D1") return ComplexBivarPoly::monomial(1, 0);
        if (name == "D2") return ComplexBivarPoly::monomial(0, 1);
        throw ParseError(start, "unsupported variable name '" + std::string(name) + "'");
    }
};

inline std::string format_17g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

inline ComplexBivarPoly parse_operator(std::string_view text) {
    return detail::OperatorParser(text).parse();
}

inline std::string format_complex(std::complex<double> c) {
    std::string s = detail::format_17g(c.real());
    s += std::signbit(c.imag()) ? "-" : "+";
    s += detail::format_17g(std::abs(c.imag()));
    s += "i";
    return s;
}

inline std::string to_canonical_string(const ComplexBivarPoly& p) {
    if (p.is_zero()) return "(0+0i)";
    std::vector<std::pair<std::pair<int, int>, std::complex<double>>> terms(p.coeffs.begin(),
                                                                            p.coeffs.end());
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        int da = a.first.first + a.first.second;
        int db = b.first.first + b.first.second;
        if (da != db) return da > db;
        return a.first.first > b.first.first;
    });
    std::string out;
    for (std::size_t t = 0; t < terms.size(); ++t) {
        if (t) out += " + ";
        out += "(" + format_complex(terms[t].second) + ")";
        int j = terms[t].first.first;
        int k = terms[t].first.second;
        if (j > 0) out += (j > 1) ? "*D1^" + std::to_string(j) : "*D1";
        if (k > 0) out += (k > 1) ? "*D2^" + std::to_string(k) : "*D2";
    }
    return out;
}

inline ComplexBivarPoly principal_part(const ComplexBivarPoly& p) {
    if (p.is_zero()) throw std::domain_error("principal_part: zero polynomial");
    const int d = p.total_degree();
    ComplexBivarPoly r;
    for (const auto& [jk, c] : p.coeffs)
        if (jk.first + jk.second == d) r.add_term(jk.first, jk.second, c);
    return r;
}

}  // namespace sensilab::opsym
