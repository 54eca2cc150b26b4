#ifndef GAMMAFILT_POLYNOMIAL_HPP
#define GAMMAFILT_POLYNOMIAL_HPP

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace gammafilt {

struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

using Exponents = std::vector<unsigned>;

/// Graded lexicographic order with y_1 > y_2 > ...; "less" means smaller.
struct GrlexLess {
    bool operator()(const Exponents& a, const Exponents& b) const;
};

unsigned total_degree(const Exponents& e);

/// Integer polynomial in y_1..y_n, stored as a coefficient map without zeros.
class IntPoly {
public:
    using Terms = std::map<Exponents, mpz_class, GrlexLess>;

    explicit IntPoly(std::size_t n_vars = 0) : n_(n_vars) {}

    static IntPoly variable(std::size_t n_vars, std::size_t i);
    static IntPoly constant(std::size_t n_vars, const mpz_class& c);
    static IntPoly monomial(const Exponents& e, const mpz_class& c = 1);

    std::size_t n_vars() const { return n_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Common total degree, or -1 if zero or not homogeneous.
    int homogeneous_degree() const;

    void add_term(const Exponents& e, const mpz_class& c);
    mpz_class coefficient(const Exponents& e) const;

    IntPoly& operator+=(const IntPoly& o);
    IntPoly& operator-=(const IntPoly& o);
    IntPoly& operator*=(const mpz_class& k);
    friend IntPoly operator+(IntPoly a, const IntPoly& b) { return a += b; }
    friend IntPoly operator-(IntPoly a, const IntPoly& b) { return a -= b; }
    friend IntPoly operator*(IntPoly a, const mpz_class& k) { return a *= k; }
    friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
    IntPoly operator-() const;
    IntPoly pow(unsigned e) const;

    /// Same polynomial viewed in more (or equally many) variables.
    IntPoly widened(std::size_t n_vars) const;
    /// Applies a variable permutation: y_i -> y_{perm[i]}.
    IntPoly permuted(const std::vector<std::size_t>& perm) const;

    /// Canonical text: terms in decreasing grlex order, e.g. "2*y1^2*y2 - 2*y1*y2^2".
    std::string to_string() const;

    friend bool operator==(const IntPoly&, const IntPoly&) = default;

private:
    std::size_t n_;
    Terms terms_;
};

/// Parses integer coefficients, y1..yn, '*', '^', '+', '-' and parentheses.
/// n_vars = 0 infers the count from the highest variable index used.
IntPoly parse_poly(std::string_view text, std::size_t n_vars = 0);

} // namespace gammafilt

#endif
