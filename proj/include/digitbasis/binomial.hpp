#pragma once

#include <cstdint>
#include <stdexcept>

#include "fq.hpp"

namespace digitbasis {

/// binom(m, j) mod p by Lucas' digit products.  Negative upper index is
/// handled through binom(m, j) = (-1)^j binom(j - m - 1, j).
inline int binom_mod_p(long long m, long long j, int p) {
    if (j < 0) return 0;
    if (m < 0) {
        int b = binom_mod_p(j - m - 1, j, p);
        return (j % 2 == 0) ? b : (p - b) % p;
    }
    long long out = 1;
    while (j > 0 || m > 0) {
        long long md = m % p, jd = j % p;
        if (jd > md) return 0;
        // binom(md, jd) for digits < p, exact in 64 bits
        long long num = 1, den = 1;
        for (long long i = 0; i < jd; ++i) {
            num *= (md - i);
            den *= (i + 1);
        }
        out = (out * ((num / den) % p)) % p;
        m /= p;
        j /= p;
    }
    return static_cast<int>(out % p);
}

/// p-adic valuation of n! by Legendre's formula.
inline long long vp_factorial(long long n, int p) {
    long long out = 0;
    for (long long pk = p; pk <= n; pk *= p) out += n / pk;
    return out;
}

inline long long vp_of(long long n, int p) {
    if (n == 0) throw MathError("vp_of: valuation of 0");
    long long v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

namespace detail {
inline long long mulmod(long long a, long long b, long long m) {
    return static_cast<long long>((static_cast<unsigned __int128>(a) * b) % m);
}
inline long long invmod(long long a, long long m) {
    long long t = 0, newt = 1, r = m, newr = a % m;
    if (newr < 0) newr += m;
    while (newr != 0) {
        long long qq = r / newr;
        long long tmp = t - qq * newt;
        t = newt;
        newt = tmp;
        tmp = r - qq * newr;
        r = newr;
        newr = tmp;
    }
    if (r != 1) throw MathError("invmod: not invertible");
    return t < 0 ? t + m : t;
}
}  // namespace detail

/// binom(x, m) mod p^N for x, m >= 0, via the product formula with all
/// p-powers stripped and units tracked mod p^N.  Exact (no big integers).
inline long long binom_mod_ppow(long long x, long long m, int p, int N) {
    if (m < 0 || x < 0) throw InputError("binom_mod_ppow: negative argument");
    if (m > x) return 0;
    long long mod = 1;
    for (int i = 0; i < N; ++i) {
        mod *= p;
        if (mod > (1LL << 50)) throw InputError("binom_mod_ppow: modulus too large");
    }
    long long unit = 1 % mod, vtot = 0;
    for (long long i = 1; i <= m; ++i) {
        long long num = x - m + i, den = i;
        while (num % p == 0) {
            num /= p;
            ++vtot;
        }
        while (den % p == 0) {
            den /= p;
            --vtot;
        }
        unit = detail::mulmod(unit, num % mod, mod);
        unit = detail::mulmod(unit, detail::invmod(den % mod, mod), mod);
    }
    if (vtot < 0) throw MathError("binom_mod_ppow: negative total valuation");
    for (long long i = 0; i < vtot && unit != 0; ++i) unit = (unit * p) % mod;
    if (vtot >= N) unit = 0;
    return unit;
}

/// Exact binomial coefficient; throws on 64-bit overflow.
inline long long binom_exact(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    long long out = 1;
    for (long long i = 1; i <= k; ++i) {
        long long num = n - k + i;
        if (out > (9'000'000'000'000'000'000LL / num))
            throw MathError("binom_exact: overflow");
        out = out * num / i;  // divisibility holds at each step
    }
    return out;
}

}  // namespace digitbasis
