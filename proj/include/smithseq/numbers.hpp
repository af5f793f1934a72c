#pragma once

// Exact integer/rational scalar layer: big-int aliases, p-adic valuations,
// primality and factoring helpers used across the library.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace smithseq {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int int_abs(const Int& x) { return x < 0 ? Int(-x) : x; }

inline Int int_gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }

inline Int int_lcm(const Int& a, const Int& b) {
    if (a == 0 || b == 0) return 0;
    return int_abs(a / int_gcd(a, b) * b);
}

inline Int int_pow(Int base, std::uint64_t e) {
    Int r = 1;
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

// Quotient a/b that must be exact; throws otherwise.
inline Int exact_div(const Int& a, const Int& b) {
    if (b == 0) throw std::invalid_argument("exact_div: division by zero");
    Int q = a / b;
    if (q * b != a) throw std::domain_error("exact_div: remainder is nonzero");
    return q;
}

// An integer extended with +infinity. Infinity absorbs addition and is
// maximal in comparisons; the value slot also carries negative valuations
// of rationals.
struct Valuation {
    std::int64_t value = 0;
    bool infinite = false;

    static Valuation infinity() { return Valuation{0, true}; }
    static Valuation of(std::int64_t v) { return Valuation{v, false}; }

    bool operator==(const Valuation& o) const {
        if (infinite || o.infinite) return infinite == o.infinite;
        return value == o.value;
    }
    bool operator!=(const Valuation& o) const { return !(*this == o); }
    bool operator<(const Valuation& o) const {
        if (infinite) return false;
        if (o.infinite) return true;
        return value < o.value;
    }
    bool operator<=(const Valuation& o) const { return *this < o || *this == o; }
    bool operator>(const Valuation& o) const { return o < *this; }
    bool operator>=(const Valuation& o) const { return o <= *this; }

    Valuation operator+(const Valuation& o) const {
        if (infinite || o.infinite) return infinity();
        return of(value + o.value);
    }

    std::string str() const { return infinite ? "inf" : std::to_string(value); }
};

inline Valuation val_min(const Valuation& a, const Valuation& b) { return a < b ? a : b; }

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    a %= m;
    while (e > 0) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

inline bool miller_rabin_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // Deterministic base set for the full 64-bit range.
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

inline Int powmod_int(Int a, Int e, const Int& m) {
    Int r = 1;
    a %= m;
    if (a < 0) a += m;
    while (e > 0) {
        if ((e & 1) != 0) r = r * a % m;
        a = a * a % m;
        e >>= 1;
    }
    return r;
}

inline bool miller_rabin_int(const Int& n) {
    if (n < 2) return false;
    for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    Int d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // Deterministic below 3.3e24; a fixed strong-base screen above that,
    // which is ample for the magnitudes this library meets.
    for (int a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        Int x = powmod_int(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = x * x % n;
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

} // namespace detail

inline bool is_prime(const Int& n) {
    if (n <= std::numeric_limits<std::uint64_t>::max()) {
        if (n < 2) return false;
        return detail::miller_rabin_u64(static_cast<std::uint64_t>(n));
    }
    return detail::miller_rabin_int(n);
}

inline void require_prime(const Int& p, const char* who) {
    if (!is_prime(p)) throw std::invalid_argument(std::string(who) + ": p must be prime");
}

// nu_p(x): exponent of p in x; infinity for x = 0.
inline Valuation int_valuation(Int x, const Int& p) {
    require_prime(p, "int_valuation");
    if (x == 0) return Valuation::infinity();
    if (x < 0) x = -x;
    std::int64_t e = 0;
    while (x % p == 0) {
        x /= p;
        ++e;
    }
    return Valuation::of(e);
}

// nu_p extended to rationals: nu_p(num) - nu_p(den).
inline Valuation rat_valuation(const Rat& q, const Int& p) {
    require_prime(p, "rat_valuation");
    if (q == 0) return Valuation::infinity();
    Valuation vn = int_valuation(numerator(q), p);
    Valuation vd = int_valuation(denominator(q), p);
    return Valuation::of(vn.value - vd.value);
}

// Strips all factors of p; returns the valuation removed.
inline std::int64_t remove_prime_power(Int& x, const Int& p) {
    std::int64_t e = 0;
    while (x != 0 && x % p == 0) {
        x /= p;
        ++e;
    }
    return e;
}

inline Int rat_ceil(const Rat& q) {
    Int n = numerator(q), d = denominator(q);  // d > 0 canonically
    Int fl;
    if (n >= 0) {
        fl = n / d;
    } else {
        fl = (-n + d - 1) / d;
        fl = -fl;
    }
    if (fl * d == n) return fl;
    return fl + 1;
}

namespace detail {

inline Int pollard_rho(const Int& n) {
    if (n % 2 == 0) return 2;
    // Brent's cycle-finding variant with a deterministic parameter sweep.
    for (Int c = 1; ; ++c) {
        Int x = 2, y = 2, d = 1;
        Int saved_x = x;
        std::uint64_t power = 1, lam = 0;
        auto step = [&](Int v) { return (v * v + c) % n; };
        y = step(x);
        while (d == 1) {
            if (lam == power) {
                saved_x = y;
                power *= 2;
                lam = 0;
            }
            y = step(y);
            ++lam;
            d = int_gcd(int_abs(y - saved_x), n);
        }
        if (d != n) return d;
    }
}

inline void factor_into(Int n, std::map<Int, std::int64_t>& out) {
    if (n <= 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    Int d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

} // namespace detail

// Full factorization of |n| (n != 0): trial division to 1e6, then
// deterministic Pollard-Brent rho on whatever is left.
inline std::map<Int, std::int64_t> factorize(Int n) {
    if (n == 0) throw std::invalid_argument("factorize: zero has no factorization");
    if (n < 0) n = -n;
    std::map<Int, std::int64_t> out;
    for (Int p : {Int(2), Int(3), Int(5)}) {
        std::int64_t e = remove_prime_power(n, p);
        if (e > 0) out[p] = e;
    }
    for (Int p = 7; p <= 1000000 && p * p <= n; p += 6) {
        for (Int q : {Int(p), Int(p + 4)}) {
            std::int64_t e = remove_prime_power(n, q);
            if (e > 0) out[q] = e;
        }
    }
    detail::factor_into(n, out);
    return out;
}

inline std::vector<Int> prime_divisors(const Int& n) {
    std::vector<Int> ps;
    for (const auto& [p, e] : factorize(n)) ps.push_back(p);
    return ps;
}

inline Int parse_int(const std::string& s) {
    try {
        return Int(s);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a valid integer: '" + s + "'");
    }
}

// Accepts "a" or "a/b" with decimal big-int parts.
inline Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(parse_int(s));
    Int num = parse_int(s.substr(0, slash));
    Int den = parse_int(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    return Rat(num, den);
}

inline std::string rat_str(const Rat& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

} // namespace smithseq
