#ifndef MIXFAIR_SCALAR_HPP
#define MIXFAIR_SCALAR_HPP

// Exact rational scalar used for every utility, endpoint and density.

#include <gmpxx.h>

#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace mixfair {

/// Arbitrary-precision rational, always kept in canonical form (gcd 1, q > 0).
using Scalar = mpq_class;

inline Scalar make_scalar(long num, unsigned long den = 1)
{
    Scalar s(num, den);
    s.canonicalize();
    return s;
}

/// 2^exp for any integer exponent.
inline Scalar pow2(long exp)
{
    mpz_class p = 1;
    if (exp >= 0) {
        mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(exp));
        return Scalar(p);
    }
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(-exp));
    return Scalar(mpz_class(1), p);
}

inline mpz_class floor_of(const Scalar& x)
{
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return r;
}

inline mpz_class ceil_of(const Scalar& x)
{
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return r;
}

/// Number of bits needed to represent ceil(x) for x >= 0 (0 for x <= 0).
inline long ceil_bit_length(const Scalar& x)
{
    if (sgn(x) <= 0) return 0;
    const mpz_class c = ceil_of(x);
    return static_cast<long>(mpz_sizeinbase(c.get_mpz_t(), 2));
}

/// Exact square root when x is the square of a rational.
inline std::optional<Scalar> exact_sqrt(const Scalar& x)
{
    if (sgn(x) < 0) return std::nullopt;
    if (sgn(x) == 0) return Scalar(0);
    if (!mpz_perfect_square_p(x.get_num_mpz_t()) || !mpz_perfect_square_p(x.get_den_mpz_t()))
        return std::nullopt;
    mpz_class n, d;
    mpz_sqrt(n.get_mpz_t(), x.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), x.get_den_mpz_t());
    Scalar r(n, d);
    r.canonicalize();
    return r;
}

/// "p/q", or "p" when the denominator is one.
inline std::string to_string(const Scalar& x)
{
    return x.get_str();
}

inline double to_double(const Scalar& x)
{
    return x.get_d();
}

/// Parses "p", "p/q", "-p/q" or an exact decimal such as "0.499".
inline std::optional<Scalar> parse_scalar(std::string_view text)
{
    auto is_digits = [](std::string_view s) {
        if (s.empty()) return false;
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };

    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }

    Scalar value;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        const auto num = body.substr(0, slash);
        const auto den = body.substr(slash + 1);
        if (!is_digits(num) || !is_digits(den)) return std::nullopt;
        mpz_class n(std::string(num), 10), d(std::string(den), 10);
        if (d == 0) return std::nullopt;
        value = Scalar(n, d);
    } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
        const auto whole = body.substr(0, dot);
        const auto frac = body.substr(dot + 1);
        if (!(whole.empty() || is_digits(whole)) || !is_digits(frac)) return std::nullopt;
        mpz_class n(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
        mpz_class d;
        mpz_ui_pow_ui(d.get_mpz_t(), 10, frac.size());
        value = Scalar(n, d);
    } else {
        if (!is_digits(body)) return std::nullopt;
        value = Scalar(mpz_class(std::string(body), 10));
    }
    value.canonicalize();
    if (negative) value = -value;
    return value;
}

} // namespace mixfair

#endif // MIXFAIR_SCALAR_HPP
