#include "gammafilt/grouprings.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <sstream>
#include <utility>

namespace gammafilt {

bool is_prime(unsigned long n)
{
    if (n < 2)
        return false;
    for (unsigned long d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// AbelianPGroup

AbelianPGroup::AbelianPGroup(unsigned long p, std::vector<unsigned> exponents, const Budget& budget)
{
    if (!is_prime(p))
        throw InvalidGroup("p = " + std::to_string(p) + " is not prime");
    if (exponents.empty())
        throw InvalidGroup("group needs at least one cyclic factor");
    Data d{p, std::move(exponents), {}, {}, 1};
    for (unsigned r : d.exponents) {
        if (r < 1)
            throw InvalidGroup("cyclic factor exponents must be >= 1");
        unsigned long q = 1;
        for (unsigned i = 0; i < r; ++i) {
            q *= p;
            if (q > budget.max_group_order)
                throw BudgetExceeded("group order exceeds budget of " + std::to_string(budget.max_group_order));
        }
        d.orders.push_back(q);
        d.order *= q;
        if (d.order > budget.max_group_order)
            throw BudgetExceeded("group order exceeds budget of " + std::to_string(budget.max_group_order));
    }
    d.strides.assign(d.orders.size(), 1);
    for (std::size_t i = d.orders.size(); i-- > 1;)
        d.strides[i - 1] = d.strides[i] * d.orders[i];
    d_ = std::make_shared<const Data>(std::move(d));
}

std::size_t AbelianPGroup::index(const Character& chi) const
{
    if (chi.exps.size() != rank())
        throw GroupMismatch("character has wrong number of exponents");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
        if (chi.exps[i] >= d_->orders[i])
            throw GroupMismatch("character exponent out of range");
        idx += chi.exps[i] * d_->strides[i];
    }
    return idx;
}

Character AbelianPGroup::character(std::size_t index) const
{
    Character chi;
    chi.exps.resize(rank());
    for (std::size_t i = 0; i < rank(); ++i)
        chi.exps[i] = (index / d_->strides[i]) % d_->orders[i];
    return chi;
}

std::size_t AbelianPGroup::multiply_index(std::size_t a, std::size_t b) const
{
    std::size_t idx = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
        const std::size_t s = d_->strides[i];
        const std::size_t q = d_->orders[i];
        idx += ((a / s) % q + (b / s) % q) % q * s;
    }
    return idx;
}

std::size_t AbelianPGroup::generator_index(std::size_t i) const
{
    return d_->strides.at(i);
}

std::string AbelianPGroup::name() const
{
    std::ostringstream os;
    for (std::size_t i = 0; i < rank(); ++i)
        os << (i ? "xZ/" : "Z/") << d_->orders[i];
    return os.str();
}

// ---------------------------------------------------------------------------
// RepRingElement

RepRingElement::RepRingElement(AbelianPGroup g) : g_(std::move(g)), c_(g_.order()) {}

RepRingElement::RepRingElement(AbelianPGroup g, IntVector coeffs) : g_(std::move(g)), c_(std::move(coeffs))
{
    if (c_.size() != g_.order())
        throw GroupMismatch("coefficient vector length does not match group order");
}

RepRingElement RepRingElement::one(const AbelianPGroup& g)
{
    return character(g, 0);
}

RepRingElement RepRingElement::character(const AbelianPGroup& g, std::size_t index)
{
    RepRingElement e(g);
    e.c_.at(index) = 1;
    return e;
}

RepRingElement RepRingElement::reduced(const AbelianPGroup& g, std::size_t index)
{
    RepRingElement e(g);
    e.c_.at(index) += 1;
    e.c_[0] -= 1;
    return e;
}

bool RepRingElement::is_zero() const
{
    return std::all_of(c_.begin(), c_.end(), [](const Integer& x) { return x == 0; });
}

RepRingElement& RepRingElement::operator+=(const RepRingElement& o)
{
    if (!(g_ == o.g_))
        throw GroupMismatch("adding elements of different representation rings");
    for (std::size_t i = 0; i < c_.size(); ++i)
        c_[i] += o.c_[i];
    return *this;
}

RepRingElement& RepRingElement::operator-=(const RepRingElement& o)
{
    if (!(g_ == o.g_))
        throw GroupMismatch("subtracting elements of different representation rings");
    for (std::size_t i = 0; i < c_.size(); ++i)
        c_[i] -= o.c_[i];
    return *this;
}

RepRingElement& RepRingElement::operator*=(const Integer& k)
{
    for (auto& x : c_)
        x *= k;
    return *this;
}

RepRingElement RepRingElement::operator-() const
{
    RepRingElement out = *this;
    for (auto& x : out.c_)
        x = -x;
    return out;
}

namespace {

// out += a * b in Z[Ĝ]; skips zero coefficients of both sides.
void convolve_into(const AbelianPGroup& g, const IntVector& a, const IntVector& b, IntVector& out)
{
    std::vector<std::size_t> nz_b;
    for (std::size_t j = 0; j < b.size(); ++j)
        if (b[j] != 0)
            nz_b.push_back(j);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0)
            continue;
        for (std::size_t j : nz_b)
            mpz_addmul(out[g.multiply_index(i, j)].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
}

} // namespace

RepRingElement operator*(const RepRingElement& a, const RepRingElement& b)
{
    return multiply(a.group(), a, b);
}

std::string RepRingElement::to_string() const
{
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0)
            continue;
        const bool neg = c_[i] < 0;
        Integer mag = abs(c_[i]);
        os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
        first = false;
        const Character chi = g_.character(i);
        const bool trivial = i == 0;
        if (mag != 1 || trivial)
            os << mag.get_str();
        if (trivial)
            continue;
        if (mag != 1)
            os << '*';
        bool first_var = true;
        for (std::size_t k = 0; k < chi.exps.size(); ++k) {
            if (chi.exps[k] == 0)
                continue;
            os << (first_var ? "" : "*") << 'x' << (k + 1);
            if (chi.exps[k] != 1)
                os << '^' << chi.exps[k];
            first_var = false;
        }
    }
    if (first)
        os << '0';
    return os.str();
}

RepRingElement multiply(const AbelianPGroup& g, const RepRingElement& a, const RepRingElement& b)
{
    if (!(a.group() == g) || !(b.group() == g))
        throw GroupMismatch("multiply: operands do not belong to " + g.name());
    RepRingElement out(g);
    convolve_into(g, a.coeffs(), b.coeffs(), out.coeffs());
    return out;
}

Integer augmentation(const RepRingElement& a)
{
    Integer s = 0;
    for (const auto& x : a.coeffs())
        s += x;
    return s;
}

// ---------------------------------------------------------------------------
// lambda / gamma

namespace {

using Series = std::vector<RepRingElement>;

Series series_product(const Series& a, const Series& b, unsigned k)
{
    const auto& g = a.front().group();
    Series out(k + 1, RepRingElement(g));
    for (unsigned i = 0; i <= k && i < a.size(); ++i) {
        if (a[i].is_zero())
            continue;
        for (unsigned j = 0; i + j <= k && j < b.size(); ++j)
            convolve_into(g, a[i].coeffs(), b[j].coeffs(), out[i + j].coeffs());
    }
    return out;
}

Integer binomial(unsigned long n, unsigned long k)
{
    Integer c;
    mpz_bin_uiui(c.get_mpz_t(), n, k);
    return c;
}

// lambda_t of an effective element, truncated at t^k.
Series lambda_effective(const RepRingElement& b, unsigned k)
{
    const auto& g = b.group();
    Series acc(k + 1, RepRingElement(g));
    acc[0] = RepRingElement::one(g);
    for (std::size_t chi = 0; chi < g.order(); ++chi) {
        if (b[chi] == 0)
            continue;
        // (1 + chi t)^m = sum_i C(m, i) chi^i t^i
        const unsigned long m = b[chi].get_ui();
        Series factor(k + 1, RepRingElement(g));
        std::size_t power = 0;
        for (unsigned i = 0; i <= k && i <= m; ++i) {
            factor[i][power] = binomial(m, i);
            power = g.multiply_index(power, chi);
        }
        acc = series_product(acc, factor, k);
    }
    return acc;
}

Series series_inverse(const Series& s, unsigned k)
{
    const auto& g = s.front().group();
    Series u(k + 1, RepRingElement(g));
    u[0] = RepRingElement::one(g);
    for (unsigned m = 1; m <= k; ++m) {
        RepRingElement acc(g);
        for (unsigned i = 1; i <= m && i < s.size(); ++i)
            convolve_into(g, s[i].coeffs(), u[m - i].coeffs(), acc.coeffs());
        u[m] = -acc;
    }
    return u;
}

} // namespace

std::vector<RepRingElement> lambda_series(const RepRingElement& a, unsigned k)
{
    const auto& g = a.group();
    RepRingElement pos(g), neg(g);
    for (std::size_t i = 0; i < g.order(); ++i) {
        if (a[i] > 0)
            pos[i] = a[i];
        else if (a[i] < 0)
            neg[i] = -a[i];
    }
    return series_product(lambda_effective(pos, k), series_inverse(lambda_effective(neg, k), k), k);
}

RepRingElement lambda_op(unsigned k, const RepRingElement& a)
{
    return lambda_series(a, k)[k];
}

std::vector<RepRingElement> gamma_series(const RepRingElement& a, unsigned k)
{
    const auto& g = a.group();
    auto lam = lambda_series(a, k);
    std::vector<RepRingElement> out(k + 1, RepRingElement(g));
    out[0] = RepRingElement::one(g);
    for (unsigned n = 1; n <= k; ++n)
        for (unsigned j = 1; j <= n; ++j)
            out[n] += lam[j] * binomial(n - 1, n - j);
    return out;
}

RepRingElement gamma_op(unsigned k, const RepRingElement& a)
{
    return gamma_series(a, k)[k];
}

// ---------------------------------------------------------------------------
// Ideal powers

namespace {

using GroupKey = std::pair<unsigned long, std::vector<unsigned>>;

class IdealPowerCache {
public:
    std::shared_ptr<const IntegerLattice> get(const AbelianPGroup& g, unsigned n)
    {
        const GroupKey key{g.p(), g.exponents()};
        {
            std::shared_lock lock(mutex_);
            auto it = powers_.find(key);
            if (it != powers_.end() && it->second.size() > n)
                return it->second[n];
        }
        std::unique_lock lock(mutex_);
        auto& chain = powers_[key];
        if (chain.empty())
            chain.push_back(std::make_shared<const IntegerLattice>(IntegerLattice::full(g.order())));
        while (chain.size() <= n)
            chain.push_back(std::make_shared<const IntegerLattice>(next_power(g, *chain.back())));
        return chain[n];
    }

private:
    // I^{n+1} = sum_i I^n (x_i - 1), x_i the generating characters.
    static IntegerLattice next_power(const AbelianPGroup& g, const IntegerLattice& prev)
    {
        LatticeBuilder b(g.order());
        IntVector row(g.order());
        for (std::size_t gen = 0; gen < g.rank(); ++gen) {
            const std::size_t x = g.generator_index(gen);
            for (std::size_t r = 0; r < prev.rank(); ++r) {
                auto src = prev.basis().row(r);
                for (auto& e : row)
                    e = 0;
                for (std::size_t j = 0; j < src.size(); ++j) {
                    if (src[j] == 0)
                        continue;
                    row[g.multiply_index(j, x)] += src[j];
                    row[j] -= src[j];
                }
                b.add(row);
            }
        }
        return b.finish();
    }

    std::shared_mutex mutex_;
    std::map<GroupKey, std::vector<std::shared_ptr<const IntegerLattice>>> powers_;
};

IdealPowerCache& cache()
{
    static IdealPowerCache c;
    return c;
}

// Products e * row for e sparse, row dense.
void multiply_row(const AbelianPGroup& g, const std::vector<std::pair<std::size_t, Integer>>& e,
                  std::span<const Integer> row, IntVector& out)
{
    for (auto& x : out)
        x = 0;
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (row[j] == 0)
            continue;
        for (const auto& [chi, c] : e)
            mpz_addmul(out[g.multiply_index(chi, j)].get_mpz_t(), c.get_mpz_t(), row[j].get_mpz_t());
    }
}

std::vector<std::pair<std::size_t, Integer>> sparse(const RepRingElement& a)
{
    std::vector<std::pair<std::size_t, Integer>> out;
    for (std::size_t i = 0; i < a.coeffs().size(); ++i)
        if (a[i] != 0)
            out.emplace_back(i, a[i]);
    return out;
}

// Q_w for w = 0..max_weight: the ideal spanned by gamma-monomials of weight
// exactly w, Q_w = sum_{k, a} gamma^k(a) Q_{w-k}, Q_0 = R(G).
std::vector<IntegerLattice> weight_ideals(const AbelianPGroup& g, unsigned max_weight)
{
    // Distinct nonzero gamma^k(+-(chi - 1)) up to sign, per k.
    std::vector<std::set<IntVector>> gens(max_weight + 1);
    for (std::size_t chi = 1; chi < g.order(); ++chi) {
        for (int sign : {1, -1}) {
            RepRingElement a = RepRingElement::reduced(g, chi) * Integer(sign);
            auto gam = gamma_series(a, max_weight);
            for (unsigned k = 1; k <= max_weight; ++k) {
                if (gam[k].is_zero())
                    continue;
                IntVector v = gam[k].coeffs();
                auto lead = std::find_if(v.begin(), v.end(), [](const Integer& x) { return x != 0; });
                if (*lead < 0)
                    for (auto& x : v)
                        x = -x;
                gens[k].insert(std::move(v));
            }
        }
    }

    std::vector<IntegerLattice> q;
    q.push_back(IntegerLattice::full(g.order()));
    IntVector row(g.order());
    for (unsigned w = 1; w <= max_weight; ++w) {
        LatticeBuilder b(g.order());
        for (unsigned k = 1; k <= w; ++k) {
            const IntegerLattice& rest = q[w - k];
            for (const auto& gv : gens[k]) {
                auto e = sparse(RepRingElement(g, gv));
                for (std::size_t r = 0; r < rest.rank(); ++r) {
                    multiply_row(g, e, rest.basis().row(r), row);
                    b.add(row);
                }
            }
        }
        q.push_back(b.finish());
    }
    return q;
}

} // namespace

IntegerLattice ideal_power(const AbelianPGroup& g, unsigned n)
{
    return *cache().get(g, n);
}

IntegerLattice ideal_power_full_basis(const AbelianPGroup& g, unsigned n)
{
    IntegerLattice cur = IntegerLattice::full(g.order());
    IntVector row(g.order());
    for (unsigned step = 0; step < n; ++step) {
        LatticeBuilder b(g.order());
        for (std::size_t chi = 1; chi < g.order(); ++chi) {
            auto e = sparse(RepRingElement::reduced(g, chi));
            for (std::size_t r = 0; r < cur.rank(); ++r) {
                multiply_row(g, e, cur.basis().row(r), row);
                b.add(row);
            }
        }
        cur = b.finish();
    }
    return cur;
}

IntegerLattice gamma_span(const AbelianPGroup& g, unsigned n, unsigned weight_cap)
{
    if (n < 1 || weight_cap < n)
        throw std::invalid_argument("gamma_span: need 1 <= n <= weight_cap");
    auto q = weight_ideals(g, weight_cap);
    LatticeBuilder b(g.order());
    for (unsigned w = n; w <= weight_cap; ++w)
        b.add(q[w]);
    return b.finish();
}

std::vector<IntegerLattice> gamma_spans(const AbelianPGroup& g, unsigned max_n, unsigned extra_weight)
{
    auto q = weight_ideals(g, max_n + extra_weight);
    std::vector<IntegerLattice> out;
    for (unsigned n = 1; n <= max_n; ++n) {
        LatticeBuilder b(g.order());
        for (unsigned w = n; w <= n + extra_weight; ++w)
            b.add(q[w]);
        out.push_back(b.finish());
    }
    return out;
}

std::vector<GradedPiece> gr_gamma(const AbelianPGroup& g, unsigned max_topdeg, const Budget& budget)
{
    if (max_topdeg < 2 || max_topdeg % 2 != 0)
        throw std::invalid_argument("gr_gamma: max_topdeg must be even and >= 2");
    if (max_topdeg > budget.max_topdeg)
        throw BudgetExceeded("max_topdeg " + std::to_string(max_topdeg) + " exceeds budget of "
                             + std::to_string(budget.max_topdeg));
    if (g.order() > budget.max_group_order)
        throw BudgetExceeded("group order exceeds budget of " + std::to_string(budget.max_group_order));
    std::vector<GradedPiece> out;
    for (unsigned n = 0; 2 * n <= max_topdeg; ++n)
        out.push_back({2 * n, lattice_quotient(*cache().get(g, n), *cache().get(g, n + 1))});
    return out;
}

Filtration element_filtration(const AbelianPGroup& g, const RepRingElement& a, unsigned cap)
{
    if (!(a.group() == g))
        throw GroupMismatch("element_filtration: element does not belong to " + g.name());
    for (unsigned n = 1; n <= cap; ++n)
        if (!member(*cache().get(g, n), a.coeffs()))
            return {n - 1, false};
    return {cap, true};
}

} // namespace gammafilt
