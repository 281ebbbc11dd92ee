#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "digitbasis/local.hpp"

using namespace digitbasis;

TEST_CASE("field axioms hold exhaustively for q <= 16") {
    for (int q : {2, 3, 4, 5, 7, 8, 9, 11, 13, 16}) {
        int p = q, f = 1;
        for (int pp : {2, 3, 5, 7, 11, 13})
            if (q % pp == 0) {
                p = pp;
                f = 0;
                for (int t = q; t > 1; t /= pp) ++f;
            }
        const FqField* F = FqField::get(p, f);
        REQUIRE(F->q() == q);
        for (int a = 0; a < q; ++a) {
            FqElem ea = F->elem(a);
            CHECK(ea + F->zero() == ea);
            CHECK(ea * F->one() == ea);
            CHECK((ea + (-ea)).is_zero());
            if (a != 0) CHECK(ea * ea.inverse() == F->one());
            for (int b = 0; b < q; ++b) {
                FqElem eb = F->elem(b);
                CHECK(ea + eb == eb + ea);
                CHECK(ea * eb == eb * ea);
                for (int c = 0; c < q; ++c) {
                    FqElem ec = F->elem(c);
                    CHECK((ea + eb) + ec == ea + (eb + ec));
                    CHECK((ea * eb) * ec == ea * (eb * ec));
                    CHECK(ea * (eb + ec) == ea * eb + ea * ec);
                }
            }
        }
        // Frobenius fixes exactly the prime subfield; x^q = x for all x.
        for (int a = 0; a < q; ++a) CHECK(F->elem(a).pow(q) == F->elem(a));
    }
}

TEST_CASE("default moduli are the classical smallest choices") {
    CHECK(FqField::get(2, 2)->modulus() == std::vector<int>{1, 1, 1});   // y^2+y+1
    CHECK(FqField::get(2, 3)->modulus() == std::vector<int>{1, 1, 0, 1});  // y^3+y+1
    CHECK(FqField::get(2, 4)->modulus() == std::vector<int>{1, 1, 0, 0, 1});
    CHECK(FqField::get(3, 2)->modulus() == std::vector<int>{1, 0, 1});   // y^2+1
    // Same (p, f) twice yields the same interned instance.
    CHECK(FqField::get(5, 1) == FqField::get(5, 1));
}

TEST_CASE("polynomial arithmetic over F_q") {
    const FqField* F2 = FqField::get(2, 1);
    Poly t = Poly::t_power(F2, 1);
    Poly one = Poly::one(F2);

    SECTION("exact division (T^2+T)/T = T+1") {
        Poly num = Poly::from_indices(F2, {0, 1, 1});
        CHECK(num / t == t + one);
    }
    SECTION("non-exact division throws") {
        Poly num = Poly::from_indices(F2, {1, 0, 1});  // T^2+1
        CHECK_THROWS_AS(num / Poly::from_indices(F2, {0, 0, 1}), MathError);
    }
    SECTION("gcd(T^2+1, T+1) = T+1 over F_2") {
        CHECK(gcd(Poly::from_indices(F2, {1, 0, 1}), t + one) == t + one);
    }
    SECTION("irreducibility") {
        CHECK(Poly::from_indices(F2, {1, 1, 1}).is_irreducible());       // T^2+T+1
        CHECK_FALSE(Poly::from_indices(F2, {1, 0, 1}).is_irreducible()); // (T+1)^2
        CHECK_FALSE(Poly::from_indices(F2, {0, 1, 1}).is_irreducible());
        const FqField* F3 = FqField::get(3, 1);
        CHECK(Poly::from_indices(F3, {1, 0, 1}).is_irreducible());       // T^2+1 over F_3
    }
    SECTION("divrem round trip on random inputs") {
        std::mt19937 rng(7);
        const FqField* F4 = FqField::get(2, 2);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<int> ai(1 + rng() % 7), bi(1 + rng() % 4);
            for (auto& v : ai) v = rng() % 4;
            for (auto& v : bi) v = rng() % 4;
            Poly a = Poly::from_indices(F4, ai), b = Poly::from_indices(F4, bi);
            if (b.is_zero()) continue;
            auto [q, r] = a.divrem(b);
            CHECK(q * b + r == a);
            CHECK(r.degree() < b.degree());
        }
    }
}

TEST_CASE("canonical representatives") {
    SECTION("laurent q=2, n=2: {0, 1, T, 1+T}") {
        const LocalField* L = LocalField::laurent(2, 1);
        auto reps = canonical_reps(L, 2);
        REQUIRE(reps.size() == 4);
        CHECK(reps[0].is_exactly_zero());
        CHECK(reps[1] == LocalElem::one(L));
        CHECK(reps[2] == LocalElem::single_digit(L, 1, 1));
        CHECK(reps[3].to_poly() == Poly::from_indices(FqField::get(2, 1), {1, 1}));
    }
    SECTION("padic p=3, n=1: {0, 1, 2}") {
        const LocalField* L = LocalField::padic(3);
        auto reps = canonical_reps(L, 1);
        REQUIRE(reps.size() == 3);
        for (int i = 0; i < 3; ++i) CHECK(reps[i].to_integer_mod(1) == i);
    }
    SECTION("completion r=2, pi=T^2+T+1, n=1: the 4 polynomials of degree < 2") {
        const FqField* F2 = FqField::get(2, 1);
        const LocalField* L = LocalField::completion_at_pi(Poly::from_indices(F2, {1, 1, 1}));
        auto reps = canonical_reps(L, 1);
        REQUIRE(reps.size() == 4);
        std::set<std::vector<int>> seen;
        for (auto& r : reps) {
            Poly g = r.to_poly();
            CHECK(g.degree() < 2);
            seen.insert(g.coeff_indices());
        }
        CHECK(seen.size() == 4);
    }
    SECTION("pairwise incongruent mod m^n and exactly q^n of them") {
        for (const LocalField* L :
             {LocalField::laurent(3, 1), LocalField::padic(5),
              LocalField::completion_at_pi(Poly::from_indices(FqField::get(2, 1), {1, 1, 1}))}) {
            int n = 2;
            auto reps = canonical_reps(L, n);
            long long expect = 1;
            for (int i = 0; i < n; ++i) expect *= L->residue_q();
            REQUIRE(static_cast<long long>(reps.size()) == expect);
            for (size_t i = 0; i < reps.size(); ++i)
                CHECK(class_index(reps[i], n) == static_cast<long long>(i));
        }
    }
}

TEST_CASE("local element arithmetic respects valuations and precision") {
    std::mt19937 rng(11);
    auto random_elem = [&](const LocalField* L, int prec) {
        std::vector<int> d(prec + 2);
        for (auto& v : d) v = rng() % L->residue_q();
        int val = static_cast<int>(rng() % 3) - 1;
        return LocalElem::from_digits(L, val, d, val + prec);
    };
    for (const LocalField* L :
         {LocalField::laurent(2, 1), LocalField::laurent(3, 1), LocalField::padic(3),
          LocalField::completion_at_pi(Poly::from_indices(FqField::get(2, 1), {1, 1, 1}))}) {
        for (int trial = 0; trial < 200; ++trial) {
            LocalElem x = random_elem(L, 6), y = random_elem(L, 6);
            if (!x.is_zero_at_precision() && !y.is_zero_at_precision()) {
                // |xy| = |x||y|
                CHECK((x * y).valuation() == x.valuation() + y.valuation());
                // |x+y| <= max(|x|, |y|)
                LocalElem s = x + y;
                if (!s.is_zero_at_precision())
                    CHECK(s.valuation() >= std::min(x.valuation(), y.valuation()));
                // associativity and distributivity within precision
                LocalElem z = random_elem(L, 6);
                CHECK(((x + y) + z).congruent_mod(x + (y + z), std::min(x.precN(), 4)));
                LocalElem lhs = x * (y + z), rhs = x * y + x * z;
                int checkp = std::min(lhs.precN(), rhs.precN());
                CHECK(lhs.congruent_mod(rhs, checkp));
            }
            // inverse of a unit: x * x^-1 = 1 at the attainable precision
            if (!x.is_zero_at_precision()) {
                LocalElem inv = x.inverse();
                LocalElem prod = x * inv;
                int checkp = prod.precN();
                if (checkp > 0)
                    CHECK(prod.congruent_mod(LocalElem::one(L), checkp));
            }
        }
    }
}

TEST_CASE("completion arithmetic matches polynomial arithmetic") {
    const FqField* F2 = FqField::get(2, 1);
    Poly pi = Poly::from_indices(F2, {1, 1, 1});
    const LocalField* L = LocalField::completion_at_pi(pi);
    std::mt19937 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> ai(1 + rng() % 6), bi(1 + rng() % 6);
        for (auto& v : ai) v = rng() % 2;
        for (auto& v : bi) v = rng() % 2;
        Poly a = Poly::from_indices(F2, ai), b = Poly::from_indices(F2, bi);
        LocalElem ea = LocalElem::from_poly(L, a), eb = LocalElem::from_poly(L, b);
        CHECK((ea + eb).to_poly() == a + b);
        CHECK((ea * eb).to_poly() == a * b);
    }
}

TEST_CASE("teichmuller digits") {
    SECTION("omega_j(0) = 0") {
        const LocalField* L = LocalField::padic(5);
        CHECK(teichmuller_digit(LocalElem::zero(L), 3, 6).is_zero_at_precision());
    }
    SECTION("Q_5: omega_0(2) is the Teichmuller lift of 2, congruent to 7 mod 25") {
        const LocalField* L = LocalField::padic(5);
        LocalElem w = teichmuller_digit(LocalElem::from_integer(L, 2), 0, 6);
        // oracle: iterate a -> a^5 mod 5^6 until fixed
        long long a = 2, mod = 5 * 5 * 5 * 5 * 5 * 5;
        for (int it = 0; it < 12; ++it) {
            long long b = 1;
            for (int k = 0; k < 5; ++k) b = b * a % mod;
            if (b == a) break;
            a = b;
        }
        CHECK(w.to_integer_mod(6) == a);
        CHECK(w.to_integer_mod(2) == 7);
        // omega^q = omega at working precision
        CHECK(w.pow(5).congruent_mod(w, 6));
    }
    SECTION("F_3((T)): omega_1(2 + T) = 1") {
        const LocalField* L = LocalField::laurent(3, 1);
        LocalElem x = LocalElem::from_digits(L, 0, {2, 1}, kExactPrec);
        LocalElem w = teichmuller_digit(x, 1, 4);
        CHECK(w.congruent_mod(LocalElem::one(L), 4));
    }
    SECTION("omega^q = omega across settings, and digits recompose x") {
        std::mt19937 rng(17);
        for (const LocalField* L :
             {LocalField::laurent(2, 2), LocalField::padic(3),
              LocalField::completion_at_pi(Poly::from_indices(FqField::get(2, 1), {1, 1, 1}))}) {
            int q = L->residue_q();
            for (int trial = 0; trial < 20; ++trial) {
                std::vector<int> d(5);
                for (auto& v : d) v = rng() % q;
                LocalElem x = LocalElem::from_digits(L, 0, d, 5);
                auto omegas = teichmuller_digits(x, 5, 6);
                LocalElem recomposed = LocalElem::zero_at(L, 5);
                for (int j = 0; j < 5; ++j) {
                    CHECK(omegas[j].pow(q).congruent_mod(omegas[j], omegas[j].precN()));
                    recomposed = recomposed + omegas[j].truncate(5 - j).shift(j);
                }
                CHECK(recomposed.congruent_mod(x, 5));
            }
        }
    }
    SECTION("insufficient precision is reported") {
        const LocalField* L = LocalField::padic(3);
        LocalElem x = LocalElem::from_integer(L, 4).truncate(2);
        CHECK_THROWS_AS(teichmuller_digit(x, 2, 4), MathError);
    }
}
