#include "gammafilt/gradedpres.hpp"

#include <algorithm>
#include <map>

namespace gammafilt {

GradedPresentation::GradedPresentation(std::size_t n_vars, std::vector<IntPoly> relations, std::string name)
    : n_(n_vars), name_(std::move(name))
{
    if (n_vars == 0)
        throw std::invalid_argument("presentation needs at least one variable");
    for (auto& r : relations) {
        if (r.is_zero())
            throw std::invalid_argument("zero relation rejected");
        if (r.n_vars() > n_vars)
            throw std::invalid_argument("relation " + r.to_string() + " uses more than " + std::to_string(n_vars)
                                        + " variables");
        if (r.homogeneous_degree() < 0)
            throw std::invalid_argument("relation " + r.to_string() + " is not homogeneous");
        relations_.push_back(r.widened(n_vars));
    }
}

GradedPresentation GradedPresentation::with_relation(const IntPoly& r) const
{
    auto rels = relations_;
    rels.push_back(r);
    return GradedPresentation(n_, std::move(rels), name_);
}

GradedPresentation GradedPresentation::without_relation(std::size_t index) const
{
    auto rels = relations_;
    rels.erase(rels.begin() + static_cast<std::ptrdiff_t>(index));
    return GradedPresentation(n_, std::move(rels), name_);
}

GradedPresentation GradedPresentation::permuted(const std::vector<std::size_t>& perm) const
{
    std::vector<IntPoly> rels;
    for (const auto& r : relations_)
        rels.push_back(r.permuted(perm));
    return GradedPresentation(n_, std::move(rels), name_);
}

std::vector<Exponents> monomials_of_degree(std::size_t n_vars, unsigned d)
{
    std::vector<Exponents> out;
    Exponents e(n_vars, 0);
    // Recursive fill: first variable takes the largest share first.
    auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
        if (i + 1 == n_vars) {
            e[i] = left;
            out.push_back(e);
            return;
        }
        for (unsigned k = left + 1; k-- > 0;) {
            e[i] = k;
            self(self, i + 1, left - k);
        }
    };
    if (n_vars > 0)
        rec(rec, 0, d);
    return out;
}

InvariantFactors graded_piece(const GradedPresentation& p, unsigned topdeg)
{
    if (topdeg % 2 != 0)
        throw std::invalid_argument("graded_piece: odd topological degree");
    const unsigned d = topdeg / 2;
    const auto monos = monomials_of_degree(p.n_vars(), d);
    std::map<Exponents, std::size_t> column;
    for (std::size_t i = 0; i < monos.size(); ++i)
        column.emplace(monos[i], i);

    std::vector<IntVector> rows;
    for (const auto& rel : p.relations()) {
        const unsigned e = static_cast<unsigned>(rel.homogeneous_degree());
        if (e > d)
            continue;
        for (const auto& m : monomials_of_degree(p.n_vars(), d - e)) {
            IntVector row(monos.size());
            for (const auto& [re, c] : rel.terms()) {
                Exponents prod = re;
                for (std::size_t i = 0; i < prod.size(); ++i)
                    prod[i] += m[i];
                row[column.at(prod)] += c;
            }
            rows.push_back(std::move(row));
        }
    }
    return snf(IntMatrix::from_rows(monos.size(), rows));
}

RepRingElement evaluate(const IntPoly& poly, const AbelianPGroup& g, const std::vector<std::size_t>& characters)
{
    if (characters.size() < poly.n_vars())
        throw ArityMismatch("evaluate: substitution has " + std::to_string(characters.size()) + " characters for "
                            + std::to_string(poly.n_vars()) + " variables");
    // Powers of (chi_i - 1), built on demand.
    std::vector<std::vector<RepRingElement>> powers(poly.n_vars());
    auto power = [&](std::size_t i, unsigned e) -> const RepRingElement& {
        auto& cache = powers[i];
        if (cache.empty())
            cache.push_back(RepRingElement::one(g));
        while (cache.size() <= e)
            cache.push_back(cache.back() * RepRingElement::reduced(g, characters[i]));
        return cache[e];
    };
    RepRingElement out(g);
    for (const auto& [e, c] : poly.terms()) {
        RepRingElement term = RepRingElement::one(g) * c;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i])
                term = term * power(i, e[i]);
        out += term;
    }
    return out;
}

std::vector<std::size_t> generator_substitution(const AbelianPGroup& g)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < g.rank(); ++i)
        out.push_back(g.generator_index(i));
    return out;
}

namespace {

RelationCertificate certify(const IntPoly& rel, const AbelianPGroup& g, const std::vector<std::size_t>& subst)
{
    const unsigned d = static_cast<unsigned>(rel.homogeneous_degree());
    const auto f = element_filtration(g, evaluate(rel, g, subst), d + 1);
    return {rel, d + 1, f.value, f.value >= d + 1};
}

} // namespace

ComparisonReport compare(const GradedPresentation& p, const AbelianPGroup& g,
                         const std::vector<std::size_t>& substitution, unsigned max_topdeg)
{
    if (p.n_vars() != g.rank())
        throw ArityMismatch("presentation has " + std::to_string(p.n_vars()) + " variables but " + g.name() + " has "
                            + std::to_string(g.rank()) + " generators");
    if (substitution.size() != p.n_vars())
        throw ArityMismatch("substitution has " + std::to_string(substitution.size()) + " entries for "
                            + std::to_string(p.n_vars()) + " variables");

    ComparisonReport rep;
    rep.group = g.name();
    rep.max_topdeg = max_topdeg;
    rep.relations = p.relations();
    for (const auto& rel : p.relations())
        rep.certificates.push_back(certify(rel, g, substitution));

    bool all = std::all_of(rep.certificates.begin(), rep.certificates.end(), [](const auto& c) { return c.ok; });
    for (auto& piece : gr_gamma(g, max_topdeg)) {
        DegreeRecord rec{piece.degree, graded_piece(p, piece.degree), std::move(piece.factors), false};
        rec.match = rec.presentation == rec.groundtruth;
        if (!rec.match && !rep.first_mismatch)
            rep.first_mismatch = rec.degree;
        all = all && rec.match;
        rep.degrees.push_back(std::move(rec));
    }
    rep.verdict = all;
    return rep;
}

ComparisonReport compare_with_refinement(const GradedPresentation& p, const AbelianPGroup& g,
                                         const std::vector<std::size_t>& substitution, unsigned max_topdeg,
                                         const std::vector<IntPoly>& candidates)
{
    GradedPresentation cur = p;
    ComparisonReport rep = compare(cur, g, substitution, max_topdeg);
    std::vector<std::string> log;
    auto mismatches = [](const ComparisonReport& r) {
        return std::count_if(r.degrees.begin(), r.degrees.end(), [](const auto& d) { return !d.match; });
    };
    for (const auto& cand : candidates) {
        if (!rep.first_mismatch)
            break;
        if (cand.is_zero() || cand.homogeneous_degree() < 0) {
            log.push_back("skipped candidate " + cand.to_string() + ": not homogeneous");
            continue;
        }
        const auto cert = certify(cand.widened(cur.n_vars()), g, substitution);
        if (!cert.ok) {
            log.push_back("rejected candidate " + cand.to_string() + ": lies only in I^" + std::to_string(cert.achieved)
                          + ", needs I^" + std::to_string(cert.required_filtration));
            continue;
        }
        const auto before = mismatches(rep);
        cur = cur.with_relation(cand);
        rep = compare(cur, g, substitution, max_topdeg);
        log.push_back("appended candidate " + cand.to_string() + ": mismatched degrees " + std::to_string(before)
                      + " -> " + std::to_string(mismatches(rep)));
    }
    rep.refinements = std::move(log);
    return rep;
}

// ---------------------------------------------------------------------------
// Presets

namespace {

mpz_class ipow(unsigned long base, unsigned e)
{
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), base, e);
    return out;
}

void require_prime(unsigned long p)
{
    if (!is_prime(p))
        throw InvalidParams("p = " + std::to_string(p) + " is not prime");
}

IntPoly y(std::size_t n, std::size_t i)
{
    return IntPoly::variable(n, i);
}

// q = p^r with p prime, else InvalidParams.
std::pair<unsigned long, unsigned> prime_power(unsigned long q)
{
    if (q < 2)
        throw InvalidParams("q must be a prime power >= 2");
    unsigned long p = 2;
    while (q % p != 0)
        ++p;
    unsigned r = 0;
    unsigned long rest = q;
    while (rest % p == 0) {
        rest /= p;
        ++r;
    }
    if (rest != 1)
        throw InvalidParams("q = " + std::to_string(q) + " is not a prime power");
    return {p, r};
}

} // namespace

IntPoly y_class(unsigned long p, unsigned i)
{
    const unsigned e = static_cast<unsigned>(ipow(p, i).get_ui());
    return IntPoly::monomial({e, 1}) - IntPoly::monomial({1, e});
}

GradedPresentation old_thm11(unsigned long q, std::size_t n)
{
    prime_power(q);
    if (n < 1)
        throw InvalidParams("n must be >= 1");
    std::vector<IntPoly> rels;
    for (std::size_t i = 0; i < n; ++i)
        rels.push_back(y(n, i) * mpz_class(q));
    const unsigned qe = static_cast<unsigned>(q);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            rels.push_back(y(n, i).pow(qe) * y(n, j) - y(n, i) * y(n, j).pow(qe));
    return GradedPresentation(n, std::move(rels), "thm1.1");
}

GradedPresentation thm11(unsigned long p, unsigned r, std::size_t n)
{
    require_prime(p);
    if (r < 1)
        throw InvalidParams("r must be >= 1");
    return old_thm11(ipow(p, r).get_ui(), n);
}

GradedPresentation thm12(unsigned long p)
{
    require_prime(p);
    const IntPoly y1 = y_class(p, 1);
    return GradedPresentation(2,
                              {y(2, 0) * ipow(p, 2), y(2, 1) * ipow(p, 2), y1 * mpz_class(p),
                               y1.pow(static_cast<unsigned>(p))},
                              "thm1.2");
}

GradedPresentation thm13(unsigned long p, unsigned r, const IntPoly& s_r)
{
    require_prime(p);
    if (r < 1)
        throw InvalidParams("r must be >= 1");
    if (s_r.n_vars() > 2 || s_r.homogeneous_degree() < 0)
        throw InvalidParams("s_r must be a nonzero homogeneous polynomial in y1, y2");
    return GradedPresentation(2, {y(2, 0) * ipow(p, r), y(2, 1) * mpz_class(p), s_r.widened(2)}, "thm3.1");
}

GradedPresentation chetard44()
{
    return GradedPresentation(2,
                              {parse_poly("4*y1", 2), parse_poly("4*y2", 2), parse_poly("2*y1^2*y2 + 2*y1*y2^2", 2),
                               parse_poly("y1^4*y2^2 - y1^2*y2^4", 2)},
                              "chetard-4x4");
}

GradedPresentation chetard_conj(unsigned r)
{
    if (r < 1)
        throw InvalidParams("r must be >= 1");
    return GradedPresentation(2,
                              {y(2, 0) * ipow(2, r), y(2, 1) * mpz_class(2),
                               IntPoly::monomial({1, r + 1}) + IntPoly::monomial({2, r})},
                              "chetard-conj");
}

namespace {

template <class T>
T need(const std::optional<T>& v, const char* what, std::string_view preset)
{
    if (!v)
        throw InvalidParams("preset " + std::string(preset) + " requires --" + what);
    return *v;
}

} // namespace

GradedPresentation preset(std::string_view name, const PresetParams& params)
{
    if (name == "thm1.1")
        return thm11(need(params.p, "p", name), params.r.value_or(1), need(params.n, "n", name));
    if (name == "old-thm1.1")
        return old_thm11(need(params.q, "q", name), need(params.n, "n", name));
    if (name == "thm1.2")
        return thm12(need(params.p, "p", name));
    if (name == "thm3.1" || name == "thm1.3") {
        if (!params.s_r)
            throw InvalidParams("preset " + std::string(name) + " requires s_r");
        return thm13(need(params.p, "p", name), need(params.r, "r", name), *params.s_r);
    }
    if (name == "chetard-4x4")
        return chetard44();
    if (name == "chetard-conj")
        return chetard_conj(need(params.r, "r", name));
    throw InvalidParams("unknown preset " + std::string(name));
}

AbelianPGroup preset_group(std::string_view name, const PresetParams& params, const Budget& budget)
{
    if (name == "thm1.1") {
        const unsigned r = params.r.value_or(1);
        return AbelianPGroup(need(params.p, "p", name), std::vector<unsigned>(need(params.n, "n", name), r), budget);
    }
    if (name == "old-thm1.1") {
        const auto [p, r] = prime_power(need(params.q, "q", name));
        return AbelianPGroup(p, std::vector<unsigned>(need(params.n, "n", name), r), budget);
    }
    if (name == "thm1.2")
        return AbelianPGroup(need(params.p, "p", name), {2, 2}, budget);
    if (name == "thm3.1" || name == "thm1.3")
        return AbelianPGroup(need(params.p, "p", name), {need(params.r, "r", name), 1}, budget);
    if (name == "chetard-4x4")
        return AbelianPGroup(2, {2, 2}, budget);
    if (name == "chetard-conj")
        return AbelianPGroup(2, {need(params.r, "r", name), 1}, budget);
    throw InvalidParams("unknown preset " + std::string(name));
}

} // namespace gammafilt
