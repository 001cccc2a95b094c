#include "helpsl2/psl2.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

using namespace helpsl2;

namespace {

std::vector<std::pair<long long, int>> valid_group_params(long long qmax)
{
    std::vector<std::pair<long long, int>> out;
    for (long long p = 2; p <= qmax; ++p) {
        if (!is_prime(p))
            continue;
        long long q = p;
        int f = 1;
        while (q <= qmax) {
            if (q >= 4)
                out.emplace_back(p, f);
            if (q > qmax / p)
                break;
            q *= p;
            ++f;
        }
    }
    return out;
}

// Brute-force oracle for the order-p power rule: literal 2x2 matrices over
// the p-element field, conjugacy tested over all of SL(2,p) up to sign.
struct Mat {
    long long a, b, c, d;
    friend bool operator==(const Mat&, const Mat&) = default;
};

Mat mul(const Mat& x, const Mat& y, long long p)
{
    return {(x.a * y.a + x.b * y.c) % p, (x.a * y.b + x.b * y.d) % p,
            (x.c * y.a + x.d * y.c) % p, (x.c * y.b + x.d * y.d) % p};
}

std::vector<Mat> sl2_elements(long long p)
{
    std::vector<Mat> out;
    for (long long a = 0; a < p; ++a)
        for (long long b = 0; b < p; ++b)
            for (long long c = 0; c < p; ++c)
                for (long long d = 0; d < p; ++d)
                    if (((a * d - b * c) % p + p) % p == 1)
                        out.push_back({a, b, c, d});
    return out;
}

bool conjugate_in_psl(const Mat& x, const Mat& y, const std::vector<Mat>& sl2, long long p)
{
    const Mat y_neg{(p - y.a) % p, (p - y.b) % p, (p - y.c) % p, (p - y.d) % p};
    for (const Mat& m : sl2) {
        const Mat m_inv{m.d, (p - m.b) % p, (p - m.c) % p, m.a};
        const Mat z = mul(mul(m, x, p), m_inv, p);
        if (z == y || z == y_neg)
            return true;
    }
    return false;
}

} // namespace

TEST_CASE("build_group inventories for small q")
{
    const GroupData g7 = GroupData::build(7, 1);
    CHECK(g7.q() == 7);
    CHECK(g7.d() == 2);
    CHECK(g7.order_a() == 3);
    CHECK(g7.order_b() == 4);
    CHECK(g7.group_order() == 168);
    REQUIRE(g7.classes().size() == 6);
    const std::vector<long long> orders7{1, 7, 7, 3, 4, 2};
    for (size_t i = 0; i < orders7.size(); ++i) {
        CHECK(g7.classes()[i].id == static_cast<int>(i));
        CHECK(g7.classes()[i].element_order == orders7[i]);
    }
    CHECK(g7.classes()[3].family == ClassFamily::split);
    CHECK(g7.classes()[4].family == ClassFamily::nonsplit);
    CHECK(g7.classes()[5].family == ClassFamily::nonsplit);
    CHECK(g7.classes()[5].parameter == 2);

    const GroupData g4 = GroupData::build(2, 2);
    CHECK(g4.q() == 4);
    CHECK(g4.d() == 1);
    CHECK(g4.order_a() == 3);
    CHECK(g4.order_b() == 5);
    REQUIRE(g4.classes().size() == 5);
    const std::vector<long long> orders4{1, 2, 3, 5, 5};
    for (size_t i = 0; i < orders4.size(); ++i)
        CHECK(g4.classes()[i].element_order == orders4[i]);

    const GroupData g9 = GroupData::build(3, 2);
    CHECK(g9.q() == 9);
    CHECK(g9.d() == 2);
    CHECK(g9.order_a() == 4);
    CHECK(g9.order_b() == 5);
    REQUIRE(g9.classes().size() == 7);
    const std::vector<long long> orders9{1, 3, 3, 4, 2, 5, 5};
    for (size_t i = 0; i < orders9.size(); ++i)
        CHECK(g9.classes()[i].element_order == orders9[i]);
}

TEST_CASE("build_group rejects bad parameters")
{
    CHECK_THROWS_AS(GroupData::build(4, 1), std::invalid_argument);
    CHECK_THROWS_AS(GroupData::build(6, 1), std::invalid_argument);
    CHECK_THROWS_AS(GroupData::build(2, 1), std::invalid_argument);
    CHECK_THROWS_AS(GroupData::build(3, 1), std::invalid_argument);
    CHECK_THROWS_AS(GroupData::build(7, 0), std::invalid_argument);
    CHECK_THROWS_AS(GroupData::build(2, 40), std::invalid_argument);
}

TEST_CASE("class counts and structural facts for q <= 81")
{
    for (const auto& [p, f] : valid_group_params(81)) {
        const GroupData g = GroupData::build(p, f);
        const long long q = g.q();
        const size_t expected = p == 2 ? static_cast<size_t>(q + 1)
                                       : static_cast<size_t>((q + 5) / 2);
        REQUIRE(g.classes().size() == expected);

        size_t involutions = 0;
        size_t unipotents = 0;
        for (const auto& c : g.classes()) {
            if (c.element_order == 2)
                ++involutions;
            if (c.family == ClassFamily::unipotent) {
                ++unipotents;
                REQUIRE(c.element_order == p);
            }
            if (c.family == ClassFamily::split) {
                REQUIRE(g.order_a() % c.element_order == 0);
                REQUIRE(c.element_order == g.order_a() / std::gcd(c.parameter, g.order_a()));
                REQUIRE(c.parameter * 2 <= g.order_a());
            }
            if (c.family == ClassFamily::nonsplit) {
                REQUIRE(g.order_b() % c.element_order == 0);
                REQUIRE(c.element_order == g.order_b() / std::gcd(c.parameter, g.order_b()));
                REQUIRE(c.parameter * 2 <= g.order_b());
            }
        }
        REQUIRE(involutions == 1);
        REQUIRE(unipotents == static_cast<size_t>(g.d()));
    }
}

TEST_CASE("classes_of_order counts")
{
    const GroupData g17 = GroupData::build(17, 1);
    CHECK(g17.classes_of_order(8).size() == 2);
    const GroupData g7 = GroupData::build(7, 1);
    CHECK(g7.classes_of_order(4).size() == 1);
    CHECK(g7.classes_of_order(5).empty());

    // For m > 2 dividing a torus order the count is totient(m)/2; the
    // involution class is unique.
    for (const auto& [p, f] : valid_group_params(49)) {
        const GroupData g = GroupData::build(p, f);
        for (long long m = 2; m <= std::max(g.order_a(), g.order_b()); ++m) {
            if (g.order_a() % m != 0 && g.order_b() % m != 0)
                continue;
            const size_t expected = m == 2 ? 1 : static_cast<size_t>(totient(m) / 2);
            REQUIRE(g.classes_of_order(m).size() == expected);
        }
    }
}

TEST_CASE("power_class torus arithmetic")
{
    const GroupData g17 = GroupData::build(17, 1);
    // split classes have ids 3..6 (parameters 1..4), order_a = 8
    CHECK(g17.class_by_id(3).parameter == 1);
    CHECK(g17.power_class(3, 3) == 5);
    CHECK(g17.power_class(5, 3) == 3);
    CHECK(g17.power_class(3, 0) == 0);
    CHECK(g17.power_class(3, 8) == 0);
    CHECK(g17.power_class(3, -1) == 3); // classes are closed under inversion

    for (const auto& [p, f] : valid_group_params(32)) {
        const GroupData g = GroupData::build(p, f);
        for (const auto& c : g.classes()) {
            for (long long e = 0; e < 2 * c.element_order; ++e) {
                const ConjClass& pw = g.class_by_id(g.power_class(c.id, e));
                REQUIRE(pw.element_order ==
                        c.element_order / std::gcd(e % c.element_order, c.element_order));
            }
        }
    }
}

TEST_CASE("unipotent power rule matches matrix conjugacy")
{
    for (long long p : {5LL, 7LL, 11LL}) {
        const GroupData g = GroupData::build(p, 1);
        const auto sl2 = sl2_elements(p);
        long long nonsquare = 0;
        for (long long x = 2; x < p; ++x) {
            if (pow_mod(x, (p - 1) / 2, p) != 1) {
                nonsquare = x;
                break;
            }
        }
        REQUIRE(nonsquare != 0);
        const Mat u1{1, 1, 0, 1};
        const Mat u2{1, nonsquare, 0, 1};
        for (long long e = 1; e < p; ++e) {
            // u1^e is the translation by e; same for u2 scaled.
            const Mat u1_pow{1, e % p, 0, 1};
            const Mat u2_pow{1, nonsquare * e % p, 0, 1};
            const int expected1 = conjugate_in_psl(u1_pow, u1, sl2, p) ? 1 : 2;
            const int expected2 = conjugate_in_psl(u2_pow, u2, sl2, p) ? 2 : 1;
            REQUIRE(g.power_class(1, e) == expected1);
            REQUIRE(g.power_class(2, e) == expected2);
        }
    }

    // q = 9: -1 is a square in the 9-element field, so both classes of
    // order 3 are fixed by inversion and by squaring.
    const GroupData g9 = GroupData::build(3, 2);
    CHECK(g9.power_class(1, 2) == 1);
    CHECK(g9.power_class(2, 2) == 2);

    // p = 2: a single class of involutions.
    const GroupData g4 = GroupData::build(2, 2);
    CHECK(g4.power_class(1, 1) == 1);
}

TEST_CASE("root datum and natural conductor")
{
    const GroupData g17 = GroupData::build(17, 1);
    CHECK(g17.root_datum(0) == std::pair<long long, long long>{0, 1});
    CHECK(g17.root_datum(3) == std::pair<long long, long long>{1, 8});  // split 1
    CHECK(g17.root_datum(4) == std::pair<long long, long long>{1, 4});  // split 2
    CHECK(g17.root_datum(5) == std::pair<long long, long long>{3, 8});  // split 3
    CHECK(g17.natural_conductor(0) == 1);
    CHECK(g17.natural_conductor(3) == 8);
    CHECK(g17.natural_conductor(7) == 9);
    CHECK_THROWS_AS(g17.root_datum(1), std::domain_error);
    CHECK_THROWS_AS(g17.natural_conductor(1), std::domain_error);
}

TEST_CASE("character values on fixed classes")
{
    const GroupData g7 = GroupData::build(7, 1);
    const BrauerChar phi1(g7, 1);
    CHECK(phi1.degree() == 3);
    CHECK(phi1.value(g7.class_by_id(0)).coefficients() == CycloSum::CoeffMap{{0, 3}});

    // involution class: 1 + zeta_4^2 + zeta_4^{-2} at the torus conductor 4
    const CycloSum inv = phi1.value(g7.class_by_id(5));
    CHECK(inv.conductor() == 4);
    CHECK(inv.coefficients() == CycloSum::CoeffMap{{0, 1}, {2, 2}});
    CHECK(inv.to_string() == "1 + 2*z4^2");
    CHECK(std::abs(inv.numeric_embed().real() - (-1.0)) < 1e-9);

    const BrauerChar phi0(g7, 0);
    for (const auto& c : g7.classes()) {
        if (c.family == ClassFamily::unipotent)
            continue;
        CHECK(phi0.value(c).coefficients() == CycloSum::CoeffMap{{0, 1}});
    }

    CHECK_THROWS_AS(phi1.value(g7.class_by_id(1)), std::domain_error);
    CHECK_THROWS_AS(BrauerChar(g7, -1), std::invalid_argument);

    // conductor control on a split class of order 4 in PSL(2,17)
    const GroupData g17 = GroupData::build(17, 1);
    const BrauerChar chi(g17, 1);
    const ConjClass& split2 = g17.class_by_id(4);
    CHECK(chi.value(split2).coefficients() == CycloSum::CoeffMap{{0, 1}, {2, 1}, {6, 1}});
    CHECK(chi.value_at_conductor(split2, 4).coefficients() ==
          CycloSum::CoeffMap{{0, 1}, {1, 1}, {3, 1}});
    CHECK_THROWS_AS(chi.value_at_conductor(split2, 2), std::invalid_argument);
}

TEST_CASE("character values are real and traces scale across conductors")
{
    for (const auto& [p, f] : valid_group_params(19)) {
        const GroupData g = GroupData::build(p, f);
        for (int k = 0; k <= 12; ++k) {
            const BrauerChar chi(g, k);
            for (const auto& c : g.classes()) {
                if (c.family == ClassFamily::unipotent)
                    continue;
                const CycloSum v = chi.value(c);
                REQUIRE(v.conjugate() == v);
                REQUIRE(std::abs(v.numeric_embed().imag()) < 1e-9);

                // Tr over the bigger field is the trace over the smaller
                // one scaled by the relative degree.
                const long long nat = g.natural_conductor(c.id);
                for (long long n = 1; n <= 3; ++n) {
                    const CycloSum w = chi.value_at_conductor(c, nat * n);
                    REQUIRE(w.trace_to_q() * totient(nat) ==
                            v.trace_to_q() * totient(nat * n));
                }
            }
        }
    }
}

TEST_CASE("eigenvalue multisets")
{
    const GroupData g17 = GroupData::build(17, 1);
    const BrauerChar phi1(g17, 1);
    CHECK(phi1.eigenvalue_multiset(g17.class_by_id(3)) ==
          std::map<long long, int>{{0, 1}, {1, 1}, {7, 1}});

    const GroupData g7 = GroupData::build(7, 1);
    const BrauerChar phi2(g7, 2);
    CHECK(phi2.eigenvalue_multiset(g7.class_by_id(5)) ==
          std::map<long long, int>{{0, 3}, {1, 2}});
    const BrauerChar phi0(g7, 0);
    CHECK(phi0.eigenvalue_multiset(g7.class_by_id(3)) == std::map<long long, int>{{0, 1}});

    for (const auto& [p, f] : valid_group_params(19)) {
        const GroupData g = GroupData::build(p, f);
        for (int k = 0; k <= 8; ++k) {
            const BrauerChar chi(g, k);
            for (const auto& c : g.classes()) {
                if (c.family == ClassFamily::unipotent)
                    continue;
                int total = 0;
                for (const auto& [e, count] : chi.eigenvalue_multiset(c)) {
                    REQUIRE(e >= 0);
                    REQUIRE(e < c.element_order);
                    total += count;
                }
                REQUIRE(total == 2 * k + 1);
            }
        }
    }
}
