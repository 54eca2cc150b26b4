#ifndef GAMMAFILT_GROUPRINGS_HPP
#define GAMMAFILT_GROUPRINGS_HPP

// Representation rings R(G) = Z[Ĝ] of finite abelian p-groups, their
// lambda and gamma operations, augmentation-ideal powers and the associated
// graded ring of the I-adic (= gamma) filtration.

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gammafilt/exactlin.hpp"

namespace gammafilt {

struct InvalidGroup : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GroupMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Budget {
    std::size_t max_group_order = 4096;
    unsigned max_topdeg = 64;
};

bool is_prime(unsigned long n);

/// Character x_1^{e_1} ... x_n^{e_n} of Ĝ, 0 <= e_i < p^{r_i}.
struct Character {
    std::vector<unsigned long> exps;
    friend bool operator==(const Character&, const Character&) = default;
};

/// G = Z/p^{r_1} x ... x Z/p^{r_n}.  Cheap to copy (shared immutable data).
class AbelianPGroup {
public:
    AbelianPGroup(unsigned long p, std::vector<unsigned> exponents, const Budget& budget = {});

    unsigned long p() const { return d_->p; }
    const std::vector<unsigned>& exponents() const { return d_->exponents; }
    /// Cyclic factor orders p^{r_i}.
    const std::vector<unsigned long>& cyclic_orders() const { return d_->orders; }
    std::size_t rank() const { return d_->exponents.size(); }
    std::size_t order() const { return d_->order; }

    /// Position of a character in lexicographic order of exponent tuples.
    std::size_t index(const Character& chi) const;
    Character character(std::size_t index) const;
    /// Index of the product character.
    std::size_t multiply_index(std::size_t a, std::size_t b) const;
    /// Index of the i-th generating character x_i.
    std::size_t generator_index(std::size_t i) const;

    /// e.g. "Z/4xZ/2".
    std::string name() const;

    friend bool operator==(const AbelianPGroup& a, const AbelianPGroup& b)
    {
        return a.d_ == b.d_ || (a.d_->p == b.d_->p && a.d_->exponents == b.d_->exponents);
    }

private:
    struct Data {
        unsigned long p;
        std::vector<unsigned> exponents;
        std::vector<unsigned long> orders;
        std::vector<std::size_t> strides;
        std::size_t order;
    };
    std::shared_ptr<const Data> d_;
};

/// Element of R(G): integer coefficients indexed by characters.
class RepRingElement {
public:
    explicit RepRingElement(AbelianPGroup g);
    RepRingElement(AbelianPGroup g, IntVector coeffs);

    static RepRingElement one(const AbelianPGroup& g);
    static RepRingElement character(const AbelianPGroup& g, std::size_t index);
    /// chi - 1
    static RepRingElement reduced(const AbelianPGroup& g, std::size_t index);

    const AbelianPGroup& group() const { return g_; }
    const IntVector& coeffs() const { return c_; }
    IntVector& coeffs() { return c_; }
    const Integer& operator[](std::size_t i) const { return c_[i]; }
    Integer& operator[](std::size_t i) { return c_[i]; }

    bool is_zero() const;

    RepRingElement& operator+=(const RepRingElement& o);
    RepRingElement& operator-=(const RepRingElement& o);
    RepRingElement& operator*=(const Integer& k);
    RepRingElement operator-() const;

    friend RepRingElement operator+(RepRingElement a, const RepRingElement& b) { return a += b; }
    friend RepRingElement operator-(RepRingElement a, const RepRingElement& b) { return a -= b; }
    friend RepRingElement operator*(RepRingElement a, const Integer& k) { return a *= k; }
    friend RepRingElement operator*(const RepRingElement& a, const RepRingElement& b);

    friend bool operator==(const RepRingElement& a, const RepRingElement& b)
    {
        return a.g_ == b.g_ && a.c_ == b.c_;
    }

    std::string to_string() const;

private:
    AbelianPGroup g_;
    IntVector c_;
};

/// Convolution product in Z[Ĝ].  Throws GroupMismatch.
RepRingElement multiply(const AbelianPGroup& g, const RepRingElement& a, const RepRingElement& b);

/// Dimension homomorphism: sum of coefficients.
Integer augmentation(const RepRingElement& a);

/// lambda^0(a), ..., lambda^k(a) from lambda_t(b) * lambda_t(c)^{-1}, a = b - c.
std::vector<RepRingElement> lambda_series(const RepRingElement& a, unsigned k);
RepRingElement lambda_op(unsigned k, const RepRingElement& a);

/// gamma^0(a), ..., gamma^k(a) with gamma^k = sum_j C(k-1, k-j) lambda^j.
std::vector<RepRingElement> gamma_series(const RepRingElement& a, unsigned k);
RepRingElement gamma_op(unsigned k, const RepRingElement& a);

/// I^n, the n-th power of the augmentation ideal.  Cached per (group, n).
IntegerLattice ideal_power(const AbelianPGroup& g, unsigned n);

/// I^n built from products over the full Z-basis {chi - 1 : chi != 1}.
/// Slow; kept as an independent route for tests.
IntegerLattice ideal_power_full_basis(const AbelianPGroup& g, unsigned n);

/// Span of gamma-monomials of total weight in [n, weight_cap] with entries
/// +-(chi - 1), closed under multiplication by R(G).
IntegerLattice gamma_span(const AbelianPGroup& g, unsigned n, unsigned weight_cap);

/// Same as gamma_span but for every n in [1, max_n] at once, reusing the
/// per-weight ideals.  Entry i holds Gamma^{i+1} at cap (i+1) + extra_weight.
std::vector<IntegerLattice> gamma_spans(const AbelianPGroup& g, unsigned max_n, unsigned extra_weight);

struct GradedPiece {
    unsigned degree; // topological degree 2n
    InvariantFactors factors;
};

/// I^n / I^{n+1} for 2n <= max_topdeg.  Throws BudgetExceeded.
std::vector<GradedPiece> gr_gamma(const AbelianPGroup& g, unsigned max_topdeg, const Budget& budget = {});

struct Filtration {
    unsigned value;  // largest n checked with a in I^n
    bool at_cap;     // still a member at the cap
};

Filtration element_filtration(const AbelianPGroup& g, const RepRingElement& a, unsigned cap);

} // namespace gammafilt

#endif
