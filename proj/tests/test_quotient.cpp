#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "digitbasis/basis.hpp"
#include "digitbasis/quotient.hpp"

using namespace digitbasis;

namespace {

// Brute-force rank oracle: the size of the row span, counted by enumerating
// all linear combinations.  Feasible for q^rows small.
size_t brute_force_rank(const ResidueMatrix& m) {
    const FqField* F = m.field;
    std::set<std::vector<int>> span;
    long long combos = 1;
    for (size_t i = 0; i < m.rows; ++i) combos *= F->q();
    for (long long mask = 0; mask < combos; ++mask) {
        std::vector<FqElem> v(m.cols, F->zero());
        long long t = mask;
        for (size_t i = 0; i < m.rows; ++i, t /= F->q()) {
            FqElem c = F->elem(static_cast<int>(t % F->q()));
            for (size_t j = 0; j < m.cols; ++j) v[j] += c * m.at(i, j);
        }
        std::vector<int> key;
        for (auto& e : v) key.push_back(e.index());
        span.insert(key);
    }
    size_t r = 0;
    size_t size = span.size();
    while (size > 1) {
        size /= F->q();
        ++r;
    }
    return r;
}

}  // namespace

TEST_CASE("rank_over_residue basics") {
    const FqField* F2 = FqField::get(2, 1);
    SECTION("identity 3x3 over F_2 has rank 3 and is invertible") {
        auto m = ResidueMatrix::make(F2, 3, 3);
        for (int i = 0; i < 3; ++i) m.at(i, i) = F2->one();
        auto rk = rank_over_residue(m);
        CHECK(rk.rank == 3);
        CHECK(rk.invertible);
        CHECK(rk.dependency.empty());
    }
    SECTION("zero matrix has rank 0") {
        auto m = ResidueMatrix::make(F2, 3, 3);
        auto rk = rank_over_residue(m);
        CHECK(rk.rank == 0);
        CHECK_FALSE(rk.invertible);
        CHECK_FALSE(rk.dependency.empty());
    }
    SECTION("dependency witness is a genuine kernel vector") {
        const FqField* F3 = FqField::get(3, 1);
        std::mt19937 rng(23);
        for (int trial = 0; trial < 40; ++trial) {
            auto m = ResidueMatrix::make(F3, 3, 4);
            for (auto& e : m.a) e = F3->elem(rng() % 3);
            auto rk = rank_over_residue(m);
            REQUIRE_FALSE(rk.dependency.empty());
            bool nonzero = false;
            for (size_t i = 0; i < m.rows; ++i) {
                FqElem acc = F3->zero();
                for (size_t j = 0; j < m.cols; ++j) acc += m.at(i, j) * rk.dependency[j];
                CHECK(acc.is_zero());
            }
            for (auto& c : rk.dependency) nonzero = nonzero || !c.is_zero();
            CHECK(nonzero);
        }
    }
    SECTION("agrees with brute-force span counting over F_2 and F_3 up to 4x4") {
        std::mt19937 rng(29);
        for (int q : {2, 3}) {
            const FqField* F = FqField::get(q, 1);
            for (int trial = 0; trial < 60; ++trial) {
                size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
                auto m = ResidueMatrix::make(F, r, c);
                for (auto& e : m.a) e = F->elem(rng() % q);
                CHECK(rank_over_residue(m).rank == brute_force_rank(m));
            }
        }
    }
}

TEST_CASE("reduce_table") {
    const LocalField* L = LocalField::laurent(2, 1);
    SECTION("constant table 1 reduces to constant residue 1") {
        auto t = FunctionTable::tabulate(L, 2, 3, [&](const LocalElem&) {
            return LocalElem::one(L);
        });
        for (auto& r : reduce_table(t)) CHECK(r == L->residue()->one());
    }
    SECTION("E_1 on F_2[[T]]/T^2 reduces to {0,0,1,1}") {
        // E_1(x) = (x^2 - x)/(T^2 - T), evaluated exactly on representatives.
        const FqField* F2 = FqField::get(2, 1);
        Poly den = Poly::from_indices(F2, {0, 1, 1});
        auto t = FunctionTable::tabulate(L, 2, 4, [&](const LocalElem& x) {
            Poly g = x.to_poly();
            return LocalElem::from_poly(L, (g * g + g) / den);
        });
        auto red = reduce_table(t);
        CHECK(red[0].index() == 0);
        CHECK(red[1].index() == 0);
        CHECK(red[2].index() == 1);
        CHECK(red[3].index() == 1);
    }
    SECTION("a value of valuation -1 is rejected") {
        FunctionTable t;
        t.field = L;
        t.level = 0;
        t.precN = 3;
        t.values = {LocalElem::single_digit(L, 1, -1)};
        CHECK_THROWS_AS(reduce_table(t), MathError);
    }
    SECTION("reduction commutes with table sums") {
        std::mt19937 rng(31);
        auto rand_table = [&](int precN) {
            return FunctionTable::tabulate(L, 2, precN, [&](const LocalElem&) {
                std::vector<int> d(precN);
                for (auto& v : d) v = rng() % 2;
                return LocalElem::from_digits(L, 0, d, precN);
            });
        };
        for (int trial = 0; trial < 20; ++trial) {
            auto a = rand_table(3), b = rand_table(3);
            auto lhs = reduce_table(a + b);
            auto ra = reduce_table(a), rb = reduce_table(b);
            for (size_t i = 0; i < lhs.size(); ++i) CHECK(lhs[i] == ra[i] + rb[i]);
        }
    }
}

TEST_CASE("build_indicator") {
    SECTION("n=1, q=2, identity seed: h_0 = 1 - w") {
        const FqField* F2 = FqField::get(2, 1);
        std::vector<std::vector<FqElem>> seeds = {{F2->zero(), F2->one()}};
        auto res = build_indicator(0, seeds, F2);
        REQUIRE(res.ok);
        CHECK(res.values[0] == F2->one());
        CHECK(res.values[1] == F2->zero());
    }
    SECTION("q=3, n=1, identity seed, v=1: values {0,1,0}") {
        const FqField* F3 = FqField::get(3, 1);
        std::vector<std::vector<FqElem>> seeds = {{F3->elem(0), F3->elem(1), F3->elem(2)}};
        auto res = build_indicator(1, seeds, F3);
        REQUIRE(res.ok);
        CHECK(res.values[0].is_zero());
        CHECK(res.values[1] == F3->one());
        CHECK(res.values[2].is_zero());
    }
    SECTION("constant seeds fail with a collision witness") {
        const FqField* F2 = FqField::get(2, 1);
        std::vector<std::vector<FqElem>> seeds = {{F2->one(), F2->one()}};
        auto res = build_indicator(0, seeds, F2);
        REQUIRE_FALSE(res.ok);
        CHECK(res.witness.kind == "collision");
        CHECK(res.witness.i == 0);
    }
    SECTION("exact delta functions for every v, exhaustively, q^n <= 625") {
        struct Case {
            const LocalField* L;
            int n;
        };
        for (auto [L, n] : {Case{LocalField::laurent(2, 1), 3}, Case{LocalField::laurent(5, 1), 2},
                            Case{LocalField::padic(5), 2}, Case{LocalField::laurent(2, 2), 2}}) {
            const FqField* F = L->residue();
            long long npts = 1;
            for (int i = 0; i < n; ++i) npts *= F->q();
            REQUIRE(npts * npts <= 625 * 625);
            // digit read-off seeds separate points by construction
            std::vector<std::vector<FqElem>> seeds(n);
            for (int j = 0; j < n; ++j) {
                seeds[j].reserve(npts);
                for (long long x = 0; x < npts; ++x)
                    seeds[j].push_back(F->elem(canonical_rep(L, x, n).digit_at(j)));
            }
            for (long long v = 0; v < npts; ++v) {
                auto res = build_indicator(v, seeds, F);
                REQUIRE(res.ok);
                for (long long w = 0; w < npts; ++w)
                    CHECK(res.values[w] == (w == v ? F->one() : F->zero()));
            }
        }
    }
}
