#ifndef GAMMAFILT_FGL_HPP
#define GAMMAFILT_FGL_HPP

// Formal group law engine for the multiplicative-type p-series
// [p](y) = p y + v1 y^p over Z_(p)[v1] (connective) or Z_(p)[v1, 1/v1]
// (periodic).  Series are homogeneous with |y_i| = 2, |v1| = -2(p-1).

#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "gammafilt/polynomial.hpp"

namespace gammafilt {

struct NotPeriodic : std::logic_error {
    using std::logic_error::logic_error;
};

/// Raised when a stated identity fails; signals an implementation defect.
struct AssertionFailure : std::logic_error {
    using std::logic_error::logic_error;
};

struct CertificateFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// y1^i y2^j v1^k.  Ordered by (k, i, j).
struct SeriesMonomial {
    int i = 0;
    int j = 0;
    int k = 0;

    friend bool operator==(const SeriesMonomial&, const SeriesMonomial&) = default;
    friend std::strong_ordering operator<=>(const SeriesMonomial& a, const SeriesMonomial& b)
    {
        if (auto c = a.k <=> b.k; c != 0)
            return c;
        if (auto c = a.i <=> b.i; c != 0)
            return c;
        return a.j <=> b.j;
    }
};

enum class Ring { connective, periodic };
enum class Axis { y1, y2 };

class GradedSeries {
public:
    using Terms = std::map<SeriesMonomial, mpq_class>;

    GradedSeries(unsigned long p, Ring ring = Ring::periodic, unsigned n_vars = 2);

    static GradedSeries y1(unsigned long p, Ring ring = Ring::periodic);
    static GradedSeries y2(unsigned long p, Ring ring = Ring::periodic);
    /// The univariate generator, rendered as "y".
    static GradedSeries y(unsigned long p, Ring ring = Ring::periodic);
    static GradedSeries v1(unsigned long p, Ring ring = Ring::periodic);
    static GradedSeries constant(unsigned long p, const mpq_class& c, Ring ring = Ring::periodic);
    static GradedSeries from_poly(unsigned long p, const IntPoly& poly, Ring ring = Ring::periodic);

    unsigned long prime() const { return p_; }
    Ring ring() const { return ring_; }
    unsigned n_vars() const { return n_vars_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Throws std::domain_error for denominators divisible by p, or for
    /// negative v1 powers in the connective ring.
    void add_term(const SeriesMonomial& m, const mpq_class& c);
    mpq_class coefficient(const SeriesMonomial& m) const;

    /// 2i + 2j - 2(p-1)k, shared by every term; throws AssertionFailure if
    /// the series is inhomogeneous.  Zero series report 0.
    int topdeg() const;
    bool homogeneous() const;

    int max_y_degree() const;
    GradedSeries truncated(int max_y_degree) const;
    /// Terms with v1 exponent exactly k.
    GradedSeries v_part(int k) const;
    /// Multiplies by v1^k.
    GradedSeries shifted(int k) const;
    GradedSeries as_ring(Ring ring) const;

    GradedSeries& operator+=(const GradedSeries& o);
    GradedSeries& operator-=(const GradedSeries& o);
    GradedSeries& operator*=(const mpq_class& k);
    friend GradedSeries operator+(GradedSeries a, const GradedSeries& b) { return a += b; }
    friend GradedSeries operator-(GradedSeries a, const GradedSeries& b) { return a -= b; }
    friend GradedSeries operator*(GradedSeries a, const mpq_class& k) { return a *= k; }
    friend GradedSeries operator*(const GradedSeries& a, const GradedSeries& b);
    GradedSeries operator-() const;

    GradedSeries mul_truncated(const GradedSeries& o, int max_y_degree) const;
    GradedSeries pow_truncated(unsigned e, int max_y_degree) const;

    /// v1-free integer part as a polynomial in y1, y2; throws if any term has
    /// k != 0 or a non-integral coefficient.
    IntPoly to_poly() const;

    /// Canonical text, terms sorted by (k, i, j): "4*y + 6*v1*y^2".
    std::string to_string() const;

    friend bool operator==(const GradedSeries& a, const GradedSeries& b)
    {
        return a.p_ == b.p_ && a.terms_ == b.terms_;
    }

private:
    void check_compatible(const GradedSeries& o) const;

    unsigned long p_;
    Ring ring_;
    unsigned n_vars_;
    Terms terms_;
};

/// Univariate composition outer(inner(y)), truncated at y-degree trunc.
GradedSeries compose(const GradedSeries& outer, const GradedSeries& inner, int trunc);

/// [p^r](y): r-fold composite of p y + v1 y^p, truncated at y-degree trunc.
GradedSeries p_series(unsigned long p, unsigned r, int trunc);

/// Relations [p^r](y1), [p^s](y2), truncated at y-degree `trunc`.
struct QuotientSpec {
    unsigned long p;
    unsigned r;
    unsigned s;
    int trunc;
    Ring ring = Ring::periodic;
};

/// Coefficient normal form in K^*[[y1, y2]]/([p^r](y1), [p^s](y2)): every
/// term containing y2 has coefficient c with |c| < p^s and the sign of the
/// original, the excess p^s multiple rewritten via p^s y2 = -(rest of
/// [p^s](y2)); terms in y1 alone are treated likewise with [p^r](y1).
/// Rewriting moves to strictly higher y-degree, so truncation at q.trunc
/// is exact below it.  Throws NotPeriodic in the connective ring.
GradedSeries reduce(const GradedSeries& s, const QuotientSpec& q);

struct SrDerivation {
    unsigned long p;
    unsigned r;
    int trunc;
    GradedSeries reduced;      // reduce(y2 [p^r](y1)) in the quotient with exponents (r, 1)
    IntPoly leading;           // v1^0 part of (-1)^r v1^{-r} * reduced
    GradedSeries corrections;  // remaining terms, all with k >= 1
    IntPoly expected;          // y1 y2^{r(p-1)+1} - y1^p y2^{(r-1)(p-1)+1}
    Exponents modulus;         // monomial y1^2 y2^{(r-1)(p-1)+2}
};

/// Derives s_r from y2 [p^r](y1) = 0.  Throws AssertionFailure if the leading
/// part is not congruent to `expected` modulo the monomial ideal.
SrDerivation derive_sr(unsigned long p, unsigned r, int trunc = 0);

/// y(i) = y1^{p^i} y2 - y1 y2^{p^i} as a series.
GradedSeries y_series(unsigned long p, unsigned i, Ring ring = Ring::periodic);

struct StarIdentity {
    unsigned long p;
    GradedSeries expansion; // y2 [p^2](y1) - y1 [p^2](y2), unreduced
    GradedSeries v1_part;   // coefficient of v1, = p y(1) mod p^2
    GradedSeries top_part;  // coefficient of v1^{p+1}, = y(2)
    int y2_v1_exponent;     // exponent of v1 on y(2) after dividing by v1
};

/// Expands and checks the identity; throws AssertionFailure on mismatch.
StarIdentity star_identity(unsigned long p, int trunc = 0);

struct Y1pIdentity {
    unsigned long p;
    GradedSeries expansion; // y2^p [p^2](y1) - y1^p [p^2](y2), unreduced
    GradedSeries v0_part;   // = -p^2 y(1)
    GradedSeries top_part;  // coefficient of v1^{p+1}, = y(1)^p mod p
    int v0_sign;            // sign of the p^2 y(1) term
};

Y1pIdentity y1p_identity(unsigned long p, int trunc = 0);

struct DescentCertificate {
    unsigned long p;
    int v1_cap;              // terms with v1^k, k >= v1_cap, are zero
    int saturation;          // multipliers may carry v1^k for k >= -saturation
    int topdeg;              // degree of v1^{p+1} y(1)^p
    std::size_t coordinates; // monomials y1^i y2^j v1^k, k < v1_cap, in that degree
    std::size_t generators;  // monomial multiples spanning the ideal
    std::size_t rank;
    bool holds;
    std::string target;
};

/// Whether `target` lies in the Z_(p)-span of monomial multiples of
/// [p^2](y1), [p^2](y2) and p^2 v1 y(1), modulo v1^{v1_cap}, in k^*.
/// With saturation s > 0 the multipliers may carry v1^{-s}, ..., v1^{-1}
/// provided the product lands in k^*; s = 1 is the single division by v1
/// that turns the expansion of y2 [p^2](y1) - y1 [p^2](y2) into a relation.
DescentCertificate descent_membership(unsigned long p, const GradedSeries& target, int v1_cap, int saturation = 0);

/// v1^{p+1} y(1)^p in the ideal above (v1_cap defaults to p + 2, saturation
/// to 1; the ideal without division by v1 does not contain it).  Throws
/// CertificateFailure naming the uncovered vector.
DescentCertificate descent_check(unsigned long p, int v1_cap = 0, int saturation = -1);

/// Polynomial in y1, y2, v1 with coefficients in Z/p.
class ModPPoly {
public:
    using Terms = std::map<SeriesMonomial, unsigned long>;

    explicit ModPPoly(unsigned long p) : p_(p) {}

    unsigned long prime() const { return p_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const SeriesMonomial& m, long c);
    unsigned long coefficient(const SeriesMonomial& m) const;

    ModPPoly& operator+=(const ModPPoly& o);
    ModPPoly& operator-=(const ModPPoly& o);
    friend ModPPoly operator+(ModPPoly a, const ModPPoly& b) { return a += b; }
    friend ModPPoly operator-(ModPPoly a, const ModPPoly& b) { return a -= b; }
    friend ModPPoly operator*(const ModPPoly& a, const ModPPoly& b);

    /// y1 -> a y1 + b y2, y2 -> c y1 + d y2.
    ModPPoly linear_substitution(long a, long b, long c, long d) const;

    std::string to_string() const;

    friend bool operator==(const ModPPoly&, const ModPPoly&) = default;

private:
    unsigned long p_;
    Terms terms_;
};

struct DicksonQuotient {
    unsigned long p;
    ModPPoly quotient;        // y(2) / y(1) over Z/p
    ModPPoly expected;        // sum_{i=0}^{p} y1^{(p-1)i} y2^{(p-1)(p-i)}
    bool transvection_invariant;
    bool swap_invariant;
};

/// Exact division of y(2) by y(1) in Z/p[y1, y2].  Throws AssertionFailure if
/// the remainder is nonzero or the quotient differs from `expected`.
DicksonQuotient dickson_quotient(unsigned long p);

/// Long division in lex order y1 > y2 (v1 carried along).
void divide(const ModPPoly& f, const ModPPoly& g, ModPPoly& quotient, ModPPoly& remainder);

/// Substitutes y2 := 0 (Axis::y1 keeps y1) or y1 := 0 (Axis::y2).
GradedSeries restrict(const GradedSeries& s, Axis keep = Axis::y1);
ModPPoly restrict(const ModPPoly& s, Axis keep = Axis::y1);

/// Coefficients reduced mod p, all monomials kept.
ModPPoly modp(const GradedSeries& s);
/// Image in K^*/p[y1, y2]/(y1^{p^2}, y2^{p^2}).
ModPPoly modp_reduce(const GradedSeries& s);
/// The mod-p image lies in (y1^{p^2}, y2^{p^2}).
bool in_truncation_ideal(const GradedSeries& s);

} // namespace gammafilt

#endif
