#pragma once

#include "helpsl2/cyclotomic.hpp"
#include "helpsl2/numtheory.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace helpsl2 {

// Conjugacy classes of PSL(2,q) in the classical parametrization: the
// identity, d = gcd(2,q-1) classes of elements of order p, and cyclic
// families coming from the split torus (order dividing (q-1)/d) and the
// nonsplit torus (order dividing (q+1)/d). Classes are closed under
// inversion here, i.e. the split/nonsplit parameter is only taken up to
// sign, which is the right granularity for real-valued character work.
enum class ClassFamily { identity, unipotent, split, nonsplit };

inline const char* family_name(ClassFamily f)
{
    switch (f) {
    case ClassFamily::identity: return "identity";
    case ClassFamily::unipotent: return "unipotent";
    case ClassFamily::split: return "split";
    case ClassFamily::nonsplit: return "nonsplit";
    }
    throw std::logic_error("family_name: bad enum value");
}

inline ClassFamily family_from_name(const std::string& s)
{
    if (s == "identity") return ClassFamily::identity;
    if (s == "unipotent") return ClassFamily::unipotent;
    if (s == "split") return ClassFamily::split;
    if (s == "nonsplit") return ClassFamily::nonsplit;
    throw std::invalid_argument("family_from_name: unknown family '" + s + "'");
}

struct ConjClass {
    int id = 0;
    ClassFamily family = ClassFamily::identity;
    // identity: 0. unipotent: 1..d labelling the d classes. split: the
    // torus exponent i in 1..floor(order_a/2). nonsplit: likewise for the
    // other torus.
    long long parameter = 0;
    long long element_order = 1;

    friend bool operator==(const ConjClass&, const ConjClass&) = default;
};

inline std::string class_label(const ConjClass& c)
{
    switch (c.family) {
    case ClassFamily::identity: return "1";
    case ClassFamily::unipotent: return "u" + std::to_string(c.parameter);
    case ClassFamily::split: return "a^" + std::to_string(c.parameter);
    case ClassFamily::nonsplit: return "b^" + std::to_string(c.parameter);
    }
    throw std::logic_error("class_label: bad enum value");
}

class GroupData {
public:
    static constexpr long long max_q = 1000000;

    static GroupData build(long long p, int f)
    {
        if (p < 2 || !is_prime(p))
            throw std::invalid_argument("GroupData: p must be prime");
        if (f < 1)
            throw std::invalid_argument("GroupData: f must be >= 1");
        long long q = 1;
        for (int i = 0; i < f; ++i) {
            if (q > max_q / p)
                throw std::invalid_argument("GroupData: q = p^f exceeds supported size");
            q *= p;
        }
        if (q < 4)
            throw std::invalid_argument("GroupData: q must be at least 4");
        return GroupData(p, f, q);
    }

    long long p() const { return p_; }
    int f() const { return f_; }
    long long q() const { return q_; }
    long long d() const { return d_; }
    long long order_a() const { return order_a_; }
    long long order_b() const { return order_b_; }
    long long group_order() const { return q_ * (q_ - 1) * (q_ + 1) / d_; }

    const std::vector<ConjClass>& classes() const { return classes_; }

    const ConjClass& class_by_id(int id) const
    {
        if (id < 0 || static_cast<size_t>(id) >= classes_.size())
            throw std::out_of_range("GroupData: class id out of range");
        return classes_[static_cast<size_t>(id)];
    }

    std::vector<int> classes_of_order(long long ord) const
    {
        std::vector<int> out;
        for (const auto& c : classes_)
            if (c.element_order == ord)
                out.push_back(c.id);
        return out;
    }

    // Class of g^e given the class of g. Inverse-closure makes this well
    // defined even though classes only determine g up to inversion.
    int power_class(int class_id, long long e) const
    {
        const ConjClass& c = class_by_id(class_id);
        long long em = e % c.element_order;
        if (em < 0)
            em += c.element_order;
        if (em == 0)
            return 0;
        switch (c.family) {
        case ClassFamily::identity:
            return 0;
        case ClassFamily::unipotent: {
            if (p_ == 2)
                return class_id;
            // For odd p the two classes of order-p elements are permuted by
            // e-th powers according to whether e is a square in F_q: the
            // representatives are upper triangular with entry b, powering
            // scales b by e and conjugation scales it by squares.
            const long long exp = ((q_ - 1) / 2) % (p_ - 1);
            const bool square = pow_mod(em % p_, exp, p_) == 1;
            if (square)
                return class_id;
            return class_id == 1 ? 2 : 1;
        }
        case ClassFamily::split:
            return split_class_id(c.parameter * em % order_a_);
        case ClassFamily::nonsplit:
            return nonsplit_class_id(c.parameter * em % order_b_);
        }
        throw std::logic_error("power_class: bad enum value");
    }

    // Conductor at which a p-regular class's character values naturally
    // live: the order of the torus containing a representative.
    long long natural_conductor(int class_id) const
    {
        switch (class_by_id(class_id).family) {
        case ClassFamily::identity: return 1;
        case ClassFamily::unipotent:
            throw std::domain_error("natural_conductor: p-singular class");
        case ClassFamily::split: return order_a_;
        case ClassFamily::nonsplit: return order_b_;
        }
        throw std::logic_error("natural_conductor: bad enum value");
    }

    // For a p-regular class, the pair (s, m) with m the element order and
    // s coprime-part exponent: the class representative has eigenvalues
    // zeta_m^{+-s} in the relevant torus. Undefined on order-p classes.
    std::pair<long long, long long> root_datum(int class_id) const
    {
        const ConjClass& c = class_by_id(class_id);
        switch (c.family) {
        case ClassFamily::identity:
            return {0, 1};
        case ClassFamily::unipotent:
            throw std::domain_error("root_datum: p-singular class");
        case ClassFamily::split: {
            const long long g = std::gcd(c.parameter, order_a_);
            return {c.parameter / g, order_a_ / g};
        }
        case ClassFamily::nonsplit: {
            const long long g = std::gcd(c.parameter, order_b_);
            return {c.parameter / g, order_b_ / g};
        }
        }
        throw std::logic_error("root_datum: bad enum value");
    }

private:
    GroupData(long long p, int f, long long q)
        : p_(p), f_(f), q_(q), d_(p == 2 ? 1 : 2),
          order_a_((q - 1) / d_), order_b_((q + 1) / d_)
    {
        classes_.push_back({0, ClassFamily::identity, 0, 1});
        for (long long t = 1; t <= d_; ++t)
            classes_.push_back({static_cast<int>(classes_.size()), ClassFamily::unipotent, t, p_});
        for (long long i = 1; i <= order_a_ / 2; ++i)
            classes_.push_back({static_cast<int>(classes_.size()), ClassFamily::split, i,
                                order_a_ / std::gcd(i, order_a_)});
        for (long long j = 1; j <= order_b_ / 2; ++j)
            classes_.push_back({static_cast<int>(classes_.size()), ClassFamily::nonsplit, j,
                                order_b_ / std::gcd(j, order_b_)});
    }

    int split_class_id(long long m) const
    {
        m = std::min(m, order_a_ - m);
        return static_cast<int>(d_ + m);
    }

    int nonsplit_class_id(long long m) const
    {
        m = std::min(m, order_b_ - m);
        return static_cast<int>(d_ + order_a_ / 2 + m);
    }

    long long p_;
    int f_;
    long long q_;
    long long d_;
    long long order_a_;
    long long order_b_;
    std::vector<ConjClass> classes_;
};

// The family of irreducible p-modular characters of odd degree 2k+1: at a
// p-regular class with root datum (s, m) the value is the symmetric power
// trace sum_{t=-k..k} zeta_m^{s t}.
class BrauerChar {
public:
    BrauerChar(const GroupData& group, int k) : group_(&group), k_(k)
    {
        if (k < 0)
            throw std::invalid_argument("BrauerChar: k must be >= 0");
    }

    int k() const { return k_; }
    long long degree() const { return 2LL * k_ + 1; }

    // Value as a formal root-of-unity sum at the class's natural (torus)
    // conductor; callers rebase when a larger field is needed.
    CycloSum value(const ConjClass& c) const
    {
        return value_at_conductor(c, group_->natural_conductor(c.id));
    }

    // Same value expressed in Q(zeta_N); N must be a multiple of the
    // class's conductor.
    CycloSum value_at_conductor(const ConjClass& c, long long N) const
    {
        const auto [s, m] = group_->root_datum(c.id);
        if (N < 1 || N % m != 0)
            throw std::invalid_argument("BrauerChar: conductor does not contain class datum");
        CycloSum out(N);
        const long long scale = N / m;
        for (long long t = -k_; t <= k_; ++t)
            out.add_term(scale * s * t, 1);
        return out;
    }

    // Exponent -> multiplicity of zeta_m^exponent among the 2k+1 module
    // eigenvalues of a representative, m the class's conductor.
    std::map<long long, int> eigenvalue_multiset(const ConjClass& c) const
    {
        const auto [s, m] = group_->root_datum(c.id);
        std::map<long long, int> out;
        for (long long t = -k_; t <= k_; ++t) {
            long long e = (s * t) % m;
            if (e < 0)
                e += m;
            ++out[e];
        }
        return out;
    }

private:
    const GroupData* group_;
    int k_;
};

} // namespace helpsl2
