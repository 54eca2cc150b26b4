#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gammafilt/gradedpres.hpp"
#include "support.hpp"

using namespace gammafilt;

namespace {

IntPoly P(const char* s, std::size_t n = 2)
{
    return parse_poly(s, n);
}

std::vector<std::string> rel_strings(const GradedPresentation& p)
{
    std::vector<std::string> out;
    for (const auto& r : p.relations())
        out.push_back(r.to_string());
    return out;
}

// Relation-multiples matrix of one degree, built independently of graded_piece.
IntMatrix multiples_matrix(const GradedPresentation& p, unsigned yd)
{
    const auto monos = monomials_of_degree(p.n_vars(), yd);
    std::vector<IntVector> rows;
    for (const auto& rel : p.relations()) {
        const int d = rel.homogeneous_degree();
        if (d > static_cast<int>(yd))
            continue;
        for (const auto& m : monomials_of_degree(p.n_vars(), yd - d)) {
            const IntPoly prod = rel * IntPoly::monomial(m);
            IntVector row(monos.size());
            for (std::size_t i = 0; i < monos.size(); ++i)
                row[i] = prod.coefficient(monos[i]);
            rows.push_back(row);
        }
    }
    return IntMatrix::from_rows(monos.size(), rows);
}

} // namespace

TEST_CASE("polynomial parsing and printing")
{
    CHECK(P("2*y1^2*y2 - 2*y1*y2^2").to_string() == "2*y1^2*y2 - 2*y1*y2^2");
    CHECK(P("y1*y2^3 - y1^2*y2^2") == P("-(y1^2*y2^2) + y2^3*y1"));
    CHECK(P("(y1 - y2)^2") == P("y1^2 - 2*y1*y2 + y2^2"));
    CHECK(P("4*y1").to_string() == "4*y1");
    CHECK(P("- - 3").to_string() == "3");
    CHECK(P("y1 - y1").is_zero());
    CHECK(parse_poly("y3").n_vars() == 3);
    CHECK_THROWS_AS(parse_poly("y3", 2), ParseError);
    CHECK_THROWS_AS(parse_poly("2*"), ParseError);
    CHECK_THROWS_AS(parse_poly("y1 + (y2"), ParseError);
    CHECK_THROWS_AS(parse_poly("x1"), ParseError);
    CHECK(P("y1^2*y2 - y1*y2^2").homogeneous_degree() == 3);
    CHECK(P("y1^2 + y2").homogeneous_degree() == -1);
}

TEST_CASE("monomials in decreasing grlex order")
{
    const auto m = monomials_of_degree(2, 2);
    CHECK(m == std::vector<Exponents>{{2, 0}, {1, 1}, {0, 2}});
    CHECK(monomials_of_degree(3, 2).size() == 6);
    CHECK(monomials_of_degree(2, 0) == std::vector<Exponents>{{0, 0}});
}

TEST_CASE("presentations reject bad relations")
{
    CHECK_THROWS_AS(GradedPresentation(2, {IntPoly(2)}), std::invalid_argument);
    CHECK_THROWS_AS(GradedPresentation(2, {P("y1^2 + y2")}), std::invalid_argument);
    CHECK_THROWS_AS(GradedPresentation(1, {P("y1*y2")}), std::invalid_argument);
}

TEST_CASE("presets quote the stated relations")
{
    CHECK(rel_strings(thm12(2))
          == std::vector<std::string>{"4*y1", "4*y2", "2*y1^2*y2 - 2*y1*y2^2", (P("y1^2*y2 - y1*y2^2").pow(2)).to_string()});
    CHECK(rel_strings(chetard_conj(3)) == std::vector<std::string>{"8*y1", "2*y2", "y1^2*y2^3 + y1*y2^4"});
    CHECK(rel_strings(thm11(3, 1, 2)) == std::vector<std::string>{"3*y1", "3*y2", "y1^3*y2 - y1*y2^3"});
    CHECK(rel_strings(chetard44())
          == std::vector<std::string>{"4*y1", "4*y2", "2*y1^2*y2 + 2*y1*y2^2", "y1^4*y2^2 - y1^2*y2^4"});
    CHECK(rel_strings(old_thm11(4, 2)) == std::vector<std::string>{"4*y1", "4*y2", "y1^4*y2 - y1*y2^4"});
    CHECK(thm11(2, 1, 3).relations().size() == 6);
    CHECK(y_class(3, 1) == P("y1^3*y2 - y1*y2^3"));
    CHECK_THROWS_AS(thm12(4), InvalidParams);
    CHECK_THROWS_AS(old_thm11(6, 2), InvalidParams);
    CHECK_THROWS_AS(preset("nope", {}), InvalidParams);
    CHECK_THROWS_AS(preset("thm1.2", {}), InvalidParams);
    CHECK(preset_group("thm3.1", {.p = 3, .r = 2, .s_r = P("y1")}).name() == "Z/9xZ/3");
}

TEST_CASE("graded pieces")
{
    CHECK(graded_piece(thm12(2), 2).to_string() == "(4,4)");
    CHECK(graded_piece(thm12(2), 6).to_string() == "(2,4,4,4)");
    CHECK(graded_piece(thm12(2), 0).to_string() == "(0)");
    CHECK(graded_piece(GradedPresentation(2, {}), 4).to_string() == "(0,0,0)");
    for (unsigned d = 2; d <= 14; d += 2) {
        CAPTURE(d);
        CHECK(graded_piece(thm12(2), d).factors() == testsupport::smith_by_minors(multiples_matrix(thm12(2), d / 2)));
        CHECK(graded_piece(chetard44(), d).factors()
              == testsupport::smith_by_minors(multiples_matrix(chetard44(), d / 2)));
    }
}

TEST_CASE("dropping a relation never shrinks a graded piece")
{
    for (const auto& pres : {thm12(2), chetard44(), thm11(3, 1, 2), chetard_conj(2)})
        for (std::size_t i = 0; i < pres.relations().size(); ++i) {
            const auto smaller = pres.without_relation(i);
            for (unsigned d = 2; d <= 12; d += 2) {
                const auto full = graded_piece(pres, d).order(), less = graded_piece(smaller, d).order();
                CHECK((less == 0 || (full != 0 && full <= less)));
            }
        }
}

TEST_CASE("evaluation at characters")
{
    AbelianPGroup g(2, {2, 1});
    const auto subst = generator_substitution(g);
    CHECK(evaluate(P("y1"), g, subst) == RepRingElement::reduced(g, g.generator_index(0)));
    const auto x = RepRingElement::reduced(g, g.generator_index(0));
    const auto y = RepRingElement::reduced(g, g.generator_index(1));
    CHECK(evaluate(P("3*y1^2*y2 - y2"), g, subst) == x * x * y * Integer(3) - y);
}

TEST_CASE("comparisons")
{
    AbelianPGroup g44(2, {2, 2});
    const auto chet = compare(chetard44(), g44, generator_substitution(g44), 24);
    CHECK(chet.verdict);
    CHECK(chet.degrees.size() == 13);

    AbelianPGroup g22(2, {1, 1});
    CHECK(compare(thm11(2, 1, 2), g22, generator_substitution(g22), 16).verdict);

    const auto old = compare(old_thm11(4, 2), g44, generator_substitution(g44), 12);
    CHECK_FALSE(old.verdict);
    REQUIRE(old.first_mismatch);
    CHECK(*old.first_mismatch == 6);
    CHECK(old.degrees[3].presentation.order() == 256);
    CHECK(old.degrees[3].groundtruth.order() == 128);
    CHECK_FALSE(old.certificates[2].ok);
    CHECK(old.certificates[2].achieved == 5);

    CHECK_THROWS_AS(compare(thm11(2, 1, 3), g22, generator_substitution(g22), 8), ArityMismatch);
    CHECK_THROWS_AS(compare(thm11(2, 1, 2), g22, {1}, 8), ArityMismatch);
}

TEST_CASE("every preset certifies its relations")
{
    struct Case {
        GradedPresentation pres;
        AbelianPGroup g;
    };
    for (const auto& c : std::vector<Case>{{thm12(2), AbelianPGroup(2, {2, 2})},
                                           {thm12(3), AbelianPGroup(3, {2, 2})},
                                           {chetard44(), AbelianPGroup(2, {2, 2})},
                                           {chetard_conj(2), AbelianPGroup(2, {2, 1})},
                                           {thm11(3, 1, 2), AbelianPGroup(3, {1, 1})},
                                           {thm11(2, 1, 3), AbelianPGroup(2, {1, 1, 1})}}) {
        const auto rep = compare(c.pres, c.g, generator_substitution(c.g), 8);
        for (const auto& cert : rep.certificates) {
            CAPTURE(cert.relation.to_string());
            CHECK(cert.ok);
        }
    }
}

TEST_CASE("permuting variables with the substitution changes nothing")
{
    AbelianPGroup g(2, {2, 1});
    const auto pres = chetard_conj(2);
    const auto base = compare(pres, g, generator_substitution(g), 12);
    auto subst = generator_substitution(g);
    std::swap(subst[0], subst[1]);
    const auto perm = compare(pres.permuted({1, 0}), g, subst, 12);
    CHECK(perm.verdict == base.verdict);
    for (std::size_t i = 0; i < base.degrees.size(); ++i) {
        CHECK(perm.degrees[i].presentation == base.degrees[i].presentation);
        CHECK(perm.degrees[i].match == base.degrees[i].match);
    }
    for (std::size_t i = 0; i < base.certificates.size(); ++i)
        CHECK(perm.certificates[i].achieved == base.certificates[i].achieved);
}

TEST_CASE("refinement appends certified candidates and logs rejections")
{
    AbelianPGroup g(2, {2, 2});
    const auto partial = thm12(2).without_relation(3);
    const auto missing = thm12(2).relations()[3];
    const auto rep = compare_with_refinement(partial, g, generator_substitution(g), 16, {P("y1"), missing});
    CHECK(rep.verdict);
    REQUIRE(rep.refinements.size() == 2);
    CHECK(rep.refinements[0].rfind("rejected candidate y1", 0) == 0);
    CHECK(rep.refinements[1].rfind("appended candidate", 0) == 0);
    CHECK(rep.relations.size() == 4);
}
