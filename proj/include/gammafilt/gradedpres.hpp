#ifndef GAMMAFILT_GRADEDPRES_HPP
#define GAMMAFILT_GRADEDPRES_HPP

// Graded presentations Z[y_1..y_n]/(relations) with |y_i| = 2, their
// degreewise abelian groups, and certified comparison with gr of R(G).

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gammafilt/exactlin.hpp"
#include "gammafilt/grouprings.hpp"
#include "gammafilt/polynomial.hpp"

namespace gammafilt {

struct ArityMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidParams : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class GradedPresentation {
public:
    /// Throws std::invalid_argument for zero or inhomogeneous relations.
    GradedPresentation(std::size_t n_vars, std::vector<IntPoly> relations, std::string name = {});

    std::size_t n_vars() const { return n_; }
    const std::vector<IntPoly>& relations() const { return relations_; }
    const std::string& name() const { return name_; }

    GradedPresentation with_relation(const IntPoly& r) const;
    GradedPresentation without_relation(std::size_t index) const;
    GradedPresentation permuted(const std::vector<std::size_t>& perm) const;

private:
    std::size_t n_;
    std::vector<IntPoly> relations_;
    std::string name_;
};

/// All monomials of total degree d in n variables, decreasing grlex.
std::vector<Exponents> monomials_of_degree(std::size_t n_vars, unsigned d);

/// Abelian group in topological degree topdeg (y-degree topdeg/2).
InvariantFactors graded_piece(const GradedPresentation& p, unsigned topdeg);

struct DegreeRecord {
    unsigned degree;
    InvariantFactors presentation;
    InvariantFactors groundtruth;
    bool match;
};

struct RelationCertificate {
    IntPoly relation;
    unsigned required_filtration; // y-degree + 1
    unsigned achieved;            // filtration found, searched up to required
    bool ok;
};

struct ComparisonReport {
    std::string group;
    unsigned max_topdeg = 0;
    std::vector<IntPoly> relations;
    std::vector<DegreeRecord> degrees;
    std::vector<RelationCertificate> certificates;
    std::vector<std::string> refinements;
    std::optional<unsigned> first_mismatch;
    bool verdict = false;
};

/// y_i -> (chi_i - 1), chi_i = characters[i].
RepRingElement evaluate(const IntPoly& poly, const AbelianPGroup& g, const std::vector<std::size_t>& characters);

/// Default substitution: y_i -> the i-th generating character.
std::vector<std::size_t> generator_substitution(const AbelianPGroup& g);

/// Certifies each relation lies one filtration step below its degree and
/// compares graded pieces with gr_gamma(g) through max_topdeg.
/// Throws ArityMismatch.
ComparisonReport compare(const GradedPresentation& p, const AbelianPGroup& g,
                         const std::vector<std::size_t>& substitution, unsigned max_topdeg);

/// compare(), then appends each candidate whose certificate holds while any
/// degree still mismatches; every augmentation is logged in the report.
ComparisonReport compare_with_refinement(const GradedPresentation& p, const AbelianPGroup& g,
                                         const std::vector<std::size_t>& substitution, unsigned max_topdeg,
                                         const std::vector<IntPoly>& candidates);

// ---------------------------------------------------------------------------
// Presets

/// Z[y_1..y_n]/(q y_i, y_i^q y_j - y_i y_j^q), q = p^r.
GradedPresentation thm11(unsigned long p, unsigned r, std::size_t n);
/// Same relations stated for an arbitrary prime power q (the r >= 2 version does not hold).
GradedPresentation old_thm11(unsigned long q, std::size_t n);
/// Z[y_1, y_2]/(p^2 y_1, p^2 y_2, p y(1), y(1)^p).
GradedPresentation thm12(unsigned long p);
/// Z[y_1, y_2]/(p^r y_1, p y_2, s_r).
GradedPresentation thm13(unsigned long p, unsigned r, const IntPoly& s_r);
GradedPresentation chetard44();
/// Z[y_1, y_2]/(2^r y_1, 2 y_2, y_1 y_2^{r+1} + y_1^2 y_2^r).
GradedPresentation chetard_conj(unsigned r);

/// y(i) = y_1^{p^i} y_2 - y_1 y_2^{p^i}.
IntPoly y_class(unsigned long p, unsigned i);

struct PresetParams {
    std::optional<unsigned long> p;
    std::optional<unsigned> r;
    std::optional<std::size_t> n;
    std::optional<unsigned long> q;
    std::optional<IntPoly> s_r;
};

/// Names: thm1.1, old-thm1.1, thm1.2, thm3.1 (alias thm1.3), chetard-4x4,
/// chetard-conj.  Throws InvalidParams.
GradedPresentation preset(std::string_view name, const PresetParams& params);

/// The group a preset describes, e.g. Z/p^2 x Z/p^2 for thm1.2.
AbelianPGroup preset_group(std::string_view name, const PresetParams& params, const Budget& budget = {});

} // namespace gammafilt

#endif
