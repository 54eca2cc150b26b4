#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gammafilt/exactlin.hpp"
#include "support.hpp"

using namespace gammafilt;

namespace {

IntMatrix rows(std::vector<std::vector<long>> r)
{
    return IntMatrix::from_rows(r);
}

IntVector vec(std::vector<long> v)
{
    return IntVector(v.begin(), v.end());
}

IntegerLattice span(std::vector<std::vector<long>> r)
{
    return hnf(rows(std::move(r)));
}

std::vector<Integer> ints(std::vector<long> v)
{
    return std::vector<Integer>(v.begin(), v.end());
}

} // namespace

TEST_CASE("hnf examples")
{
    CHECK(hnf(IntMatrix::identity(2)).basis() == IntMatrix::identity(2));
    CHECK(hnf(rows({{2, 4}, {6, 8}})).basis() == rows({{2, 0}, {0, 4}}));
    CHECK(hnf(rows({{0, 0}})).rank() == 0);
}

TEST_CASE("hnf is canonical and reduced above pivots")
{
    auto l = hnf(rows({{3, 5, 7}, {0, 4, 1}, {6, 2, 9}}));
    for (std::size_t i = 0; i < l.rank(); ++i) {
        const auto piv = l.pivots()[i];
        CHECK(l.basis()(i, piv) > 0);
        for (std::size_t k = 0; k < i; ++k) {
            CHECK(l.basis()(k, piv) >= 0);
            CHECK(l.basis()(k, piv) < l.basis()(i, piv));
        }
    }
    // same lattice from a different generating set
    auto l2 = hnf(rows({{6, 2, 9}, {3, 5, 7}, {3, 9, 8}, {0, 4, 1}}));
    CHECK(l == l2);
}

TEST_CASE("snf examples")
{
    CHECK(snf(rows({{2, 0}, {0, 3}})).factors() == ints({6}));
    CHECK(snf(rows({{2, 4}, {6, 8}})).factors() == ints({2, 4}));
    CHECK(snf(IntMatrix(0, 2)).factors() == ints({0, 0}));
    CHECK(snf(IntMatrix::identity(3)).empty());
}

TEST_CASE("invariant factors normalization")
{
    auto f = InvariantFactors::from_diagonal(ints({4, 6, 1, -2}));
    CHECK(f.factors() == ints({2, 2, 12}));
    CHECK(f.order() == 48);
    CHECK(f.to_string() == "(2,2,12)");
    CHECK(InvariantFactors::from_diagonal(ints({0, 3})).order() == 0);
    CHECK(InvariantFactors::from_diagonal(ints({0, 3})).to_string() == "(3,0)");
    CHECK_FALSE(InvariantFactors::from_diagonal(ints({0})).finite());
}

TEST_CASE("lattice_quotient examples")
{
    const auto z2 = IntegerLattice::full(2);
    CHECK(lattice_quotient(z2, span({{2, 0}, {0, 2}})).factors() == ints({2, 2}));
    CHECK(lattice_quotient(z2, span({{2, 0}})).factors() == ints({2, 0}));
    CHECK(lattice_quotient(span({{1, 1}, {0, 3}}), span({{3, 3}, {0, 3}})).factors() == ints({3}));
    CHECK_THROWS_AS(lattice_quotient(span({{2, 0}}), z2), NotSublattice);
    CHECK_THROWS_AS(lattice_quotient(z2, IntegerLattice::full(3)), DimensionMismatch);
}

TEST_CASE("member examples")
{
    const auto two = span({{2, 0}, {0, 2}});
    CHECK(member(two, vec({4, 6})));
    CHECK_FALSE(member(two, vec({1, 0})));
    CHECK(member(span({{2, 0}, {0, 4}}), vec({2, 4})));
    CHECK_THROWS_AS(member(two, vec({1, 2, 3})), DimensionMismatch);
}

TEST_CASE("localized membership")
{
    const auto l = span({{3, 0}, {0, 4}});
    // (1,0) has order 3 modulo l: a unit at 2, not at 3
    CHECK(member_localized(l, vec({1, 0}), 2));
    CHECK_FALSE(member_localized(l, vec({1, 0}), 3));
    CHECK_FALSE(member_localized(span({{1, 0}}), vec({0, 1}), 5));
}

TEST_CASE("vanishing prefix")
{
    const auto l = span({{1, 1, 0}, {0, 2, 1}});
    const auto tail = vanishing_prefix(l, 1);
    CHECK(tail.rank() == 1);
    CHECK(member(tail, vec({0, 2, 1})));
    CHECK(vanishing_prefix(l, 3).rank() == 0);
}

TEST_CASE("int64 overflow promotes to bignum")
{
    const long big = 3037000499; // about sqrt(2^63)
    LatticeBuilder b(2);
    b.add(vec({big, big - 1}));
    b.add(vec({big + 2, big}));
    const auto l = b.finish();
    CHECK(l.rank() == 2);
    // determinant big*big - (big-1)*(big+2) = 2 - big
    CHECK(lattice_quotient(IntegerLattice::full(2), l).order() == Integer(big) - 2);

    LatticeBuilder c(1);
    c.add(ints({1}));
    Integer huge;
    mpz_ui_pow_ui(huge.get_mpz_t(), 10, 40);
    c.add(std::vector<Integer>{huge});
    CHECK(c.finish() == IntegerLattice::full(1));
}

TEST_CASE("snf agrees with determinantal divisors on random matrices")
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> dim(1, 4);
    for (int t = 0; t < 150; ++t) {
        const auto m = testsupport::random_matrix(rng, dim(rng), dim(rng), t < 75 ? 6 : 1000);
        CAPTURE(t);
        CHECK(snf(m).factors() == testsupport::smith_by_minors(m));
    }
}

TEST_CASE("hnf preserves spans and quotient is trivial on itself")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> dim(1, 6);
    for (int t = 0; t < 100; ++t) {
        const auto m = testsupport::random_matrix(rng, dim(rng), dim(rng), 50);
        const auto l = hnf(m);
        for (std::size_t i = 0; i < m.rows(); ++i)
            CHECK(member(l, m.row(i)));
        const auto back = hnf(l.basis());
        CHECK(back == l);
        CHECK(lattice_quotient(l, l).empty());
    }
}
