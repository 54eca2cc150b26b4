#include "gammafilt/exactlin.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <utility>
#include <variant>

namespace gammafilt {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols)
{
}

IntMatrix IntMatrix::identity(std::size_t n)
{
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(std::size_t cols, const std::vector<IntVector>& rows)
{
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols)
            throw DimensionMismatch("IntMatrix::from_rows: ragged rows");
        std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + i * cols);
    }
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows)
{
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols)
            throw DimensionMismatch("IntMatrix::from_rows: ragged rows");
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = rows[i][j];
    }
    return m;
}

IntVector IntMatrix::row_vector(std::size_t i) const
{
    auto r = row(i);
    return {r.begin(), r.end()};
}

IntMatrix IntMatrix::transpose() const
{
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const
{
    if (cols_ != rhs.rows_)
        throw DimensionMismatch("IntMatrix::operator*");
    IntMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Integer& a = (*this)(i, k);
            if (a == 0)
                continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j)
                out(i, j) += a * rhs(k, j);
        }
    return out;
}

// ---------------------------------------------------------------------------
// InvariantFactors

InvariantFactors InvariantFactors::from_diagonal(std::vector<Integer> diag)
{
    for (auto& d : diag)
        d = abs(d);
    for (std::size_t i = 0; i < diag.size(); ++i)
        for (std::size_t j = i + 1; j < diag.size(); ++j) {
            if (diag[i] == 1)
                break;
            Integer g, l;
            mpz_gcd(g.get_mpz_t(), diag[i].get_mpz_t(), diag[j].get_mpz_t());
            mpz_lcm(l.get_mpz_t(), diag[i].get_mpz_t(), diag[j].get_mpz_t());
            diag[i] = g;
            diag[j] = l;
        }
    InvariantFactors out;
    for (auto& d : diag)
        if (d != 1)
            out.factors_.push_back(std::move(d));
    return out;
}

bool InvariantFactors::finite() const
{
    return std::none_of(factors_.begin(), factors_.end(), [](const Integer& d) { return d == 0; });
}

Integer InvariantFactors::order() const
{
    Integer n = 1;
    for (const auto& d : factors_)
        n *= d;
    return n;
}

std::string InvariantFactors::to_string() const
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < factors_.size(); ++i)
        os << (i ? "," : "") << factors_[i].get_str();
    os << ')';
    return os.str();
}

// ---------------------------------------------------------------------------
// Echelon accumulator, generic over the entry type.

namespace {

struct Fast {
    using T = std::int64_t;

    static bool is_zero(T a) { return a == 0; }

    // a := a - q*b
    static bool submul(T& a, T q, T b)
    {
        T prod;
        if (__builtin_mul_overflow(q, b, &prod))
            return false;
        return !__builtin_sub_overflow(a, prod, &a);
    }

    // out := s*a + t*b
    static bool lincomb(T& out, T s, T a, T t, T b)
    {
        T x, y;
        if (__builtin_mul_overflow(s, a, &x) || __builtin_mul_overflow(t, b, &y))
            return false;
        return !__builtin_add_overflow(x, y, &out);
    }

    static bool negate(T& a)
    {
        if (a == INT64_MIN)
            return false;
        a = -a;
        return true;
    }

    static bool divisible(T a, T d) { return a % d == 0; }
    static T quotient(T a, T d) { return a / d; }
    static T floor_quotient(T a, T d)
    {
        T q = a / d;
        if ((a % d != 0) && ((a < 0) != (d < 0)))
            --q;
        return q;
    }

    static void xgcd(T a, T b, T& g, T& s, T& t)
    {
        // a > 0; b != 0.  |s| <= |b|, |t| <= a, so no overflow.
        T old_r = a, r = b, old_s = 1, cs = 0, old_t = 0, ct = 1;
        while (r != 0) {
            T q = old_r / r;
            std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
            std::tie(old_s, cs) = std::make_pair(cs, old_s - q * cs);
            std::tie(old_t, ct) = std::make_pair(ct, old_t - q * ct);
        }
        if (old_r < 0) {
            old_r = -old_r;
            old_s = -old_s;
            old_t = -old_t;
        }
        g = old_r;
        s = old_s;
        t = old_t;
    }
};

struct Big {
    using T = Integer;

    static bool is_zero(const T& a) { return sgn(a) == 0; }

    static bool submul(T& a, const T& q, const T& b)
    {
        mpz_submul(a.get_mpz_t(), q.get_mpz_t(), b.get_mpz_t());
        return true;
    }

    static bool lincomb(T& out, const T& s, const T& a, const T& t, const T& b)
    {
        out = s * a + t * b;
        return true;
    }

    static bool negate(T& a)
    {
        a = -a;
        return true;
    }

    static bool divisible(const T& a, const T& d) { return mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t()) != 0; }
    static T quotient(const T& a, const T& d)
    {
        T q;
        mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t());
        return q;
    }

    static T floor_quotient(const T& a, const T& d)
    {
        T q;
        mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t());
        return q;
    }

    static void xgcd(const T& a, const T& b, T& g, T& s, T& t)
    {
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    }
};

template <class A>
class Echelon {
public:
    using T = typename A::T;
    using Row = std::vector<T>;

    explicit Echelon(std::size_t dim) : dim_(dim), rows_(dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t rank() const { return rank_; }
    const std::vector<Row>& rows() const { return rows_; }
    std::vector<Row>& rows() { return rows_; }
    void set_rank(std::size_t r) { rank_ = r; }

    // Inserts v starting at column `col`.  Every step commits atomically, so
    // on overflow (return false) the echelon rows plus v still span the same
    // lattice and `col` names where to resume.
    bool insert(Row& v, std::size_t& col)
    {
        for (; col < dim_; ++col) {
            if (A::is_zero(v[col]))
                continue;
            Row& b = rows_[col];
            if (b.empty()) {
                if (v[col] < 0) {
                    scratch_v_ = v;
                    for (std::size_t j = col; j < dim_; ++j)
                        if (!A::negate(scratch_v_[j]))
                            return false;
                    v.swap(scratch_v_);
                }
                b = std::move(v);
                v.assign(dim_, T(0));
                ++rank_;
                const std::size_t changed = col;
                col = dim_;
                return reduce_from(changed);
            }
            const T& d = b[col];
            if (A::divisible(v[col], d)) {
                T q = A::quotient(v[col], d);
                scratch_v_ = v;
                for (std::size_t j = col; j < dim_; ++j)
                    if (!A::submul(scratch_v_[j], q, b[j]))
                        return false;
                v.swap(scratch_v_);
                continue;
            }
            T g, s, t;
            A::xgcd(d, v[col], g, s, t);
            T vq = A::quotient(v[col], g);
            T dq = A::quotient(d, g);
            T neg_dq = dq;
            if (!A::negate(neg_dq))
                return false;
            scratch_b_.assign(dim_, T(0));
            scratch_v_.assign(dim_, T(0));
            for (std::size_t j = col; j < dim_; ++j) {
                if (!A::lincomb(scratch_b_[j], s, b[j], t, v[j]))
                    return false;
                if (!A::lincomb(scratch_v_[j], vq, b[j], neg_dq, v[j]))
                    return false;
            }
            b.swap(scratch_b_);
            v.swap(scratch_v_);
            if (!reduce_from(col)) {
                ++col;
                return false;
            }
        }
        return true;
    }

    // Restores "entries above pivots lie in [0, pivot)" for all pivot
    // columns >= col after the pivot row at col changed.  Without this the
    // entries of unreduced echelon rows grow exponentially.
    bool reduce_from(std::size_t col)
    {
        for (std::size_t c = col; c < dim_; ++c) {
            const Row& piv_row = rows_[c];
            if (piv_row.empty())
                continue;
            const T& piv = piv_row[c];
            for (std::size_t j = 0; j < c; ++j) {
                Row& r = rows_[j];
                if (r.empty() || A::is_zero(r[c]))
                    continue;
                T q = A::floor_quotient(r[c], piv);
                if (A::is_zero(q))
                    continue;
                scratch_v_ = r;
                for (std::size_t k = c; k < dim_; ++k)
                    if (!A::submul(scratch_v_[k], q, piv_row[k]))
                        return false;
                r.swap(scratch_v_);
            }
        }
        return true;
    }

private:
    std::size_t dim_;
    std::size_t rank_ = 0;
    std::vector<Row> rows_;
    Row scratch_b_;
    Row scratch_v_;
};

} // namespace

struct LatticeBuilder::Impl {
    std::variant<Echelon<Fast>, Echelon<Big>> state;

    explicit Impl(std::size_t dim) : state(std::in_place_type<Echelon<Fast>>, dim) {}

    static Echelon<Big> promote(const Echelon<Fast>& fast)
    {
        Echelon<Big> big(fast.dim());
        for (std::size_t c = 0; c < fast.dim(); ++c) {
            const auto& r = fast.rows()[c];
            if (r.empty())
                continue;
            auto& out = big.rows()[c];
            out.reserve(r.size());
            for (auto x : r)
                out.emplace_back(static_cast<long>(x));
        }
        big.set_rank(fast.rank());
        return big;
    }

    void add_big(std::vector<Integer> v, std::size_t col)
    {
        auto& big = std::get<Echelon<Big>>(state);
        big.insert(v, col);
    }

    void add(std::span<const Integer> row)
    {
        if (auto* fast = std::get_if<Echelon<Fast>>(&state)) {
            bool fits = true;
            std::vector<std::int64_t> v(row.size());
            for (std::size_t j = 0; j < row.size(); ++j) {
                if (!row[j].fits_slong_p()) {
                    fits = false;
                    break;
                }
                v[j] = row[j].get_si();
            }
            if (fits) {
                std::size_t col = 0;
                if (fast->insert(v, col))
                    return;
                // Resume the remainder exactly where the fast path stopped.
                std::vector<Integer> rest;
                rest.reserve(v.size());
                for (auto x : v)
                    rest.emplace_back(static_cast<long>(x));
                state = promote(*fast);
                add_big(std::move(rest), col);
                return;
            }
            state = promote(*fast);
        }
        add_big(std::vector<Integer>(row.begin(), row.end()), 0);
    }
};

LatticeBuilder::LatticeBuilder(std::size_t ambient_dim)
    : dim_(ambient_dim), impl_(std::make_unique<Impl>(ambient_dim))
{
}

LatticeBuilder::~LatticeBuilder() = default;
LatticeBuilder::LatticeBuilder(LatticeBuilder&&) noexcept = default;
LatticeBuilder& LatticeBuilder::operator=(LatticeBuilder&&) noexcept = default;

void LatticeBuilder::add(std::span<const Integer> row)
{
    if (row.size() != dim_)
        throw DimensionMismatch("LatticeBuilder::add: expected " + std::to_string(dim_) + " coordinates, got "
                                + std::to_string(row.size()));
    impl_->add(row);
}

void LatticeBuilder::add(const IntegerLattice& lattice)
{
    for (std::size_t i = 0; i < lattice.rank(); ++i)
        add(lattice.basis().row(i));
}

std::size_t LatticeBuilder::rank() const
{
    return std::visit([](const auto& e) { return e.rank(); }, impl_->state);
}

bool LatticeBuilder::using_bignum() const
{
    return std::holds_alternative<Echelon<Big>>(impl_->state);
}

IntegerLattice LatticeBuilder::finish() const
{
    std::vector<std::size_t> pivots;
    std::vector<IntVector> rows;
    std::visit(
        [&](const auto& e) {
            for (std::size_t c = 0; c < e.dim(); ++c) {
                const auto& r = e.rows()[c];
                if (r.empty())
                    continue;
                pivots.push_back(c);
                IntVector out;
                out.reserve(r.size());
                for (const auto& x : r) {
                    if constexpr (std::is_same_v<std::decay_t<decltype(x)>, std::int64_t>)
                        out.emplace_back(static_cast<long>(x));
                    else
                        out.push_back(x);
                }
                rows.push_back(std::move(out));
            }
        },
        impl_->state);

    // Reduce entries above each pivot into [0, pivot).
    Integer q;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t c = pivots[i];
        const Integer& piv = rows[i][c];
        for (std::size_t j = 0; j < i; ++j) {
            mpz_fdiv_q(q.get_mpz_t(), rows[j][c].get_mpz_t(), piv.get_mpz_t());
            if (q == 0)
                continue;
            for (std::size_t k = c; k < dim_; ++k)
                mpz_submul(rows[j][k].get_mpz_t(), q.get_mpz_t(), rows[i][k].get_mpz_t());
        }
    }

    IntegerLattice out(dim_);
    out.basis_ = IntMatrix::from_rows(dim_, rows);
    out.pivots_ = std::move(pivots);
    return out;
}

// ---------------------------------------------------------------------------
// IntegerLattice

IntegerLattice::IntegerLattice(std::size_t ambient_dim) : ambient_dim_(ambient_dim), basis_(0, ambient_dim) {}

IntegerLattice IntegerLattice::full(std::size_t ambient_dim)
{
    IntegerLattice l(ambient_dim);
    l.basis_ = IntMatrix::identity(ambient_dim);
    l.pivots_.resize(ambient_dim);
    for (std::size_t i = 0; i < ambient_dim; ++i)
        l.pivots_[i] = i;
    return l;
}

bool IntegerLattice::coordinates(std::span<const Integer> v, IntVector* coords) const
{
    if (v.size() != ambient_dim_)
        throw DimensionMismatch("lattice membership: vector has " + std::to_string(v.size())
                                + " coordinates, lattice ambient dimension is " + std::to_string(ambient_dim_));
    IntVector w(v.begin(), v.end());
    IntVector x(rank());
    for (std::size_t i = 0; i < rank(); ++i) {
        const std::size_t c = pivots_[i];
        for (std::size_t k = (i ? pivots_[i - 1] + 1 : 0); k < c; ++k)
            if (w[k] != 0)
                return false;
        const Integer& piv = basis_(i, c);
        if (!mpz_divisible_p(w[c].get_mpz_t(), piv.get_mpz_t()))
            return false;
        mpz_divexact(x[i].get_mpz_t(), w[c].get_mpz_t(), piv.get_mpz_t());
        if (x[i] == 0)
            continue;
        for (std::size_t k = c; k < ambient_dim_; ++k)
            mpz_submul(w[k].get_mpz_t(), x[i].get_mpz_t(), basis_(i, k).get_mpz_t());
    }
    if (std::any_of(w.begin(), w.end(), [](const Integer& e) { return e != 0; }))
        return false;
    if (coords)
        *coords = std::move(x);
    return true;
}

bool IntegerLattice::contains(const IntegerLattice& other) const
{
    if (other.ambient_dim_ != ambient_dim_)
        throw DimensionMismatch("IntegerLattice::contains: ambient dimensions differ");
    for (std::size_t i = 0; i < other.rank(); ++i)
        if (!coordinates(other.basis_.row(i), nullptr))
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// Free functions

IntegerLattice hnf(const IntMatrix& m)
{
    LatticeBuilder b(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        b.add(m.row(i));
    return b.finish();
}

namespace {

bool is_monomial(const IntMatrix& m)
{
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::size_t nonzero = 0;
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0)
                ++nonzero;
        if (nonzero != 1)
            return false;
    }
    return true;
}

std::vector<Integer> monomial_entries(const IntMatrix& m)
{
    std::vector<Integer> out;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0)
                out.push_back(m(i, j));
    return out;
}

} // namespace

InvariantFactors snf(const IntMatrix& m)
{
    const std::size_t n = m.cols();
    IntMatrix a = hnf(m).basis();
    const std::size_t rank = a.rows();
    std::vector<Integer> diag(n - rank, Integer(0));

    // Alternate row and column Hermite reductions until the matrix is
    // monomial.  After the first pass the matrix is square and nonsingular.
    if (!is_monomial(a)) {
        a = hnf(a.transpose()).basis();
        while (!is_monomial(a))
            a = hnf(a.transpose()).basis();
    }
    auto entries = monomial_entries(a);
    diag.insert(diag.end(), entries.begin(), entries.end());
    return InvariantFactors::from_diagonal(std::move(diag));
}

InvariantFactors lattice_quotient(const IntegerLattice& outer, const IntegerLattice& inner)
{
    if (outer.ambient_dim() != inner.ambient_dim())
        throw DimensionMismatch("lattice_quotient: ambient dimensions differ");
    IntMatrix coords(inner.rank(), outer.rank());
    IntVector x;
    for (std::size_t i = 0; i < inner.rank(); ++i) {
        if (!outer.coordinates(inner.basis().row(i), &x))
            throw NotSublattice("lattice_quotient: inner basis row " + std::to_string(i)
                                + " is not in the outer lattice");
        for (std::size_t j = 0; j < x.size(); ++j)
            coords(i, j) = std::move(x[j]);
    }
    return snf(coords);
}

IntegerLattice vanishing_prefix(const IntegerLattice& l, std::size_t prefix)
{
    // In echelon form, rows pivoting at or after `prefix` span the intersection.
    LatticeBuilder b(l.ambient_dim());
    for (std::size_t i = 0; i < l.rank(); ++i)
        if (l.pivots()[i] >= prefix)
            b.add(l.basis().row(i));
    return b.finish();
}

bool member(const IntegerLattice& l, std::span<const Integer> v)
{
    return l.coordinates(v, nullptr);
}

bool member_localized(const IntegerLattice& l, std::span<const Integer> v, unsigned long p)
{
    if (member(l, v))
        return true;
    LatticeBuilder b(l.ambient_dim());
    b.add(l);
    b.add(v);
    if (b.rank() > l.rank())
        return false;
    // (l + Zv)/l is cyclic of order c, the least c with c*v in l.
    Integer c = lattice_quotient(b.finish(), l).order();
    return !mpz_divisible_ui_p(c.get_mpz_t(), p);
}

} // namespace gammafilt
