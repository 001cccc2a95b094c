#pragma once

#include "helpsl2/numtheory.hpp"
#include "helpsl2/rational.hpp"

#include <complex>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace helpsl2 {

// Formal integer combination of n-th roots of unity at a fixed conductor.
//
// This is a *formal* sum: two coefficient maps may represent the same
// algebraic number (e.g. the sum over all primitive p-th roots vs the
// constant -1). The solver only ever applies linear functionals that are
// independent of the representation, so no cyclotomic-polynomial reduction
// is needed. Tests that need semantic equality go through numeric_embed().
class CycloSum {
public:
    using CoeffMap = std::map<long long, Int>;

    explicit CycloSum(long long conductor) : conductor_(checked(conductor)) {}

    static CycloSum make(long long conductor,
                         const std::vector<std::pair<long long, Int>>& terms)
    {
        CycloSum s(conductor);
        for (const auto& [e, c] : terms)
            s.add_term(e, c);
        return s;
    }

    static CycloSum constant(long long conductor, Int value)
    {
        CycloSum s(conductor);
        s.add_term(0, std::move(value));
        return s;
    }

    long long conductor() const { return conductor_; }
    const CoeffMap& coefficients() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    // Canonicalizing insertion: exponent reduced mod conductor, like terms
    // merged, zero coefficients dropped.
    void add_term(long long exponent, Int coeff)
    {
        if (coeff == 0)
            return;
        exponent %= conductor_;
        if (exponent < 0)
            exponent += conductor_;
        auto it = coeffs_.find(exponent);
        if (it == coeffs_.end()) {
            coeffs_.emplace(exponent, std::move(coeff));
        } else {
            it->second += coeff;
            if (it->second == 0)
                coeffs_.erase(it);
        }
    }

    CycloSum& operator+=(const CycloSum& other)
    {
        if (other.conductor_ != conductor_)
            throw std::invalid_argument("CycloSum: conductor mismatch in addition");
        for (const auto& [e, c] : other.coeffs_)
            add_term(e, c);
        return *this;
    }

    friend CycloSum operator+(CycloSum lhs, const CycloSum& rhs)
    {
        lhs += rhs;
        return lhs;
    }

    CycloSum scaled(const Int& factor) const
    {
        CycloSum out(conductor_);
        if (factor == 0)
            return out;
        for (const auto& [e, c] : coeffs_)
            out.coeffs_.emplace(e, c * factor);
        return out;
    }

    // Multiplication by zeta^e: shifts every exponent by e mod conductor.
    CycloSum mul_by_root(long long e) const
    {
        CycloSum out(conductor_);
        for (const auto& [exp, c] : coeffs_)
            out.add_term(exp + e, c);
        return out;
    }

    // Complex conjugation, i.e. exponent map e -> -e.
    CycloSum conjugate() const
    {
        CycloSum out(conductor_);
        for (const auto& [exp, c] : coeffs_)
            out.add_term(-exp, c);
        return out;
    }

    // Re-express at a larger conductor: zeta_n^e = zeta_N^{e*N/n} for n | N.
    // Represents the same algebraic number; traces change with the field.
    CycloSum rebase(long long new_conductor) const
    {
        if (new_conductor < 1 || new_conductor % conductor_ != 0)
            throw std::invalid_argument("CycloSum: rebase conductor must be a multiple");
        const long long scale = new_conductor / conductor_;
        CycloSum out(new_conductor);
        for (const auto& [exp, c] : coeffs_)
            out.coeffs_.emplace(exp * scale, c);
        return out;
    }

    // Galois trace over Q of the represented number, taken in Q(zeta_n)
    // with n = conductor. Linear in the stored terms, hence independent of
    // the chosen representation.
    Int trace_to_q() const
    {
        Int acc = 0;
        for (const auto& [exp, c] : coeffs_)
            acc += c * trace_cyclo(conductor_, exp);
        return acc;
    }

    std::complex<double> numeric_embed() const
    {
        std::complex<double> acc{0.0, 0.0};
        for (const auto& [exp, c] : coeffs_) {
            const double angle =
                2.0 * std::numbers::pi * static_cast<double>(exp) / static_cast<double>(conductor_);
            acc += static_cast<double>(c) * std::complex<double>{std::cos(angle), std::sin(angle)};
        }
        return acc;
    }

    // Display form like "1 + 2*z4^2" (z4 = primitive 4th root of unity).
    std::string to_string() const
    {
        if (coeffs_.empty())
            return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [exp, c] : coeffs_) {
            Int mag = c < 0 ? Int(-c) : c;
            if (first) {
                if (c < 0)
                    os << "-";
                first = false;
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            if (exp == 0) {
                os << mag.str();
            } else {
                if (mag != 1)
                    os << mag.str() << "*";
                os << "z" << conductor_;
                if (exp != 1)
                    os << "^" << exp;
            }
        }
        return os.str();
    }

    friend bool operator==(const CycloSum&, const CycloSum&) = default;

private:
    static long long checked(long long conductor)
    {
        if (conductor < 1)
            throw std::invalid_argument("CycloSum: conductor must be >= 1");
        return conductor;
    }

    long long conductor_;
    CoeffMap coeffs_;
};

} // namespace helpsl2
