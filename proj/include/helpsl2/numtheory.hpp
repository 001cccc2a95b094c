#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace helpsl2 {

struct PrimePower {
    long long prime;
    int exponent;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Prime factorization with primes strictly ascending; 1 factors to the
// empty list. Trial division only; every input in this project is small.
using Factorization = std::vector<PrimePower>;

inline Factorization factorize(long long n)
{
    if (n < 1)
        throw std::invalid_argument("factorize: argument must be >= 1");
    Factorization out;
    for (long long d = 2; d * d <= n; ++d) {
        if (n % d != 0)
            continue;
        int e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        out.push_back({d, e});
    }
    if (n > 1)
        out.push_back({n, 1});
    return out;
}

inline bool is_prime(long long n)
{
    if (n < 2)
        return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

inline int mobius(long long n)
{
    const Factorization f = factorize(n);
    for (const auto& pp : f)
        if (pp.exponent > 1)
            return 0;
    return f.size() % 2 == 0 ? 1 : -1;
}

inline long long totient(long long n)
{
    long long t = n;
    for (const auto& pp : factorize(n))
        t = t / pp.prime * (pp.prime - 1);
    return t;
}

inline long long pow_mod(long long base, long long exp, long long mod)
{
    if (mod < 1)
        throw std::invalid_argument("pow_mod: modulus must be >= 1");
    long long result = 1 % mod;
    base %= mod;
    if (base < 0)
        base += mod;
    while (exp > 0) {
        if (exp & 1)
            result = result * base % mod;
        base = base * base % mod;
        exp >>= 1;
    }
    return result;
}

// Galois trace of zeta_t^e over Q, where zeta_t = exp(2*pi*i/t):
//
//   Tr(zeta_t^e) = mobius(s) * totient(t) / totient(s),  s = t / gcd(t, e).
//
// zeta_t^e is a primitive s-th root of unity, so the trace depends only on s.
inline long long trace_cyclo(long long t, long long e)
{
    if (t < 1)
        throw std::invalid_argument("trace_cyclo: conductor must be >= 1");
    e %= t;
    if (e < 0)
        e += t;
    const long long s = t / std::gcd(t, e);
    return mobius(s) * (totient(t) / totient(s));
}

} // namespace helpsl2
