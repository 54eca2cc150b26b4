#ifndef GAMMAFILT_EXACTLIN_HPP
#define GAMMAFILT_EXACTLIN_HPP

// Exact integer linear algebra: row Hermite normal form, Smith invariant
// factors, lattice membership and quotients.  Everything is over Z with
// GMP integers; an internal int64 fast path falls back to GMP on overflow.

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace gammafilt {

using Integer = mpz_class;
using IntVector = std::vector<Integer>;

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotSublattice : std::domain_error {
    using std::domain_error::domain_error;
};

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols);

    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(std::size_t cols, const std::vector<IntVector>& rows);
    static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const Integer> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    IntVector row_vector(std::size_t i) const;

    IntMatrix transpose() const;
    IntMatrix operator*(const IntMatrix& rhs) const;

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

/// Canonical presentation of a finitely generated abelian group:
/// d_1 | d_2 | ... | d_k, 0 meaning Z, unit factors dropped.
class InvariantFactors {
public:
    InvariantFactors() = default;
    /// Normalizes an arbitrary list of diagonal entries (absolute values,
    /// divisibility chain, drop 1s).
    static InvariantFactors from_diagonal(std::vector<Integer> diag);

    const std::vector<Integer>& factors() const { return factors_; }
    bool empty() const { return factors_.empty(); }
    bool finite() const;
    /// Group order; 0 if infinite.
    Integer order() const;
    std::string to_string() const;

    friend bool operator==(const InvariantFactors&, const InvariantFactors&) = default;

private:
    std::vector<Integer> factors_;
};

/// Sublattice of Z^n stored by its row Hermite normal form: pivot columns
/// strictly increasing, pivots positive, entries above a pivot in [0, pivot).
class IntegerLattice {
public:
    IntegerLattice() = default;
    explicit IntegerLattice(std::size_t ambient_dim);

    static IntegerLattice full(std::size_t ambient_dim);

    std::size_t ambient_dim() const { return ambient_dim_; }
    std::size_t rank() const { return basis_.rows(); }
    const IntMatrix& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    /// Coordinates of v in the HNF basis, or nothing if v is not in the lattice.
    bool coordinates(std::span<const Integer> v, IntVector* coords) const;

    bool contains(const IntegerLattice& other) const;

    friend bool operator==(const IntegerLattice& a, const IntegerLattice& b)
    {
        return a.ambient_dim_ == b.ambient_dim_ && a.basis_ == b.basis_;
    }

private:
    friend class LatticeBuilder;
    std::size_t ambient_dim_ = 0;
    IntMatrix basis_;
    std::vector<std::size_t> pivots_;
};

/// Incremental row-echelon accumulator.  Rows can be added one at a time;
/// finish() returns the canonical HNF of everything added.
class LatticeBuilder {
public:
    explicit LatticeBuilder(std::size_t ambient_dim);
    ~LatticeBuilder();
    LatticeBuilder(LatticeBuilder&&) noexcept;
    LatticeBuilder& operator=(LatticeBuilder&&) noexcept;

    std::size_t ambient_dim() const { return dim_; }

    void add(std::span<const Integer> row);
    void add(const IntegerLattice& lattice);

    std::size_t rank() const;
    bool using_bignum() const;

    IntegerLattice finish() const;

private:
    struct Impl;
    std::size_t dim_;
    std::unique_ptr<Impl> impl_;
};

IntegerLattice hnf(const IntMatrix& m);

/// Invariant factors of Z^cols / rowspan(m).
InvariantFactors snf(const IntMatrix& m);

/// Invariant factors of outer / inner.  Throws NotSublattice.
InvariantFactors lattice_quotient(const IntegerLattice& outer, const IntegerLattice& inner);

/// Sublattice of vectors whose first `prefix` coordinates are zero.
IntegerLattice vanishing_prefix(const IntegerLattice& l, std::size_t prefix);

/// Exact Z-membership.  Throws DimensionMismatch.
bool member(const IntegerLattice& l, std::span<const Integer> v);

/// Membership in l tensor Z_(p): some multiple c*v with gcd(c, p) = 1 lies in l.
bool member_localized(const IntegerLattice& l, std::span<const Integer> v, unsigned long p);

} // namespace gammafilt

#endif
