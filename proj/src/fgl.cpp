#include "gammafilt/fgl.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "gammafilt/exactlin.hpp"
#include "gammafilt/grouprings.hpp"

namespace gammafilt {

namespace {

mpz_class ipow(unsigned long base, unsigned e)
{
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), base, e);
    return out;
}

Ring combine(Ring a, Ring b)
{
    return (a == Ring::periodic || b == Ring::periodic) ? Ring::periodic : Ring::connective;
}

void append_monomial(std::ostringstream& os, const SeriesMonomial& m, unsigned n_vars, bool need_star)
{
    auto var = [&](const char* name, int e) {
        if (e == 0)
            return;
        os << (need_star ? "*" : "") << name;
        if (e != 1)
            os << '^' << e;
        need_star = true;
    };
    var("v1", m.k);
    if (n_vars == 1) {
        var("y", m.i);
    } else {
        var("y1", m.i);
        var("y2", m.j);
    }
}

} // namespace

// ---------------------------------------------------------------------------
// GradedSeries

GradedSeries::GradedSeries(unsigned long p, Ring ring, unsigned n_vars) : p_(p), ring_(ring), n_vars_(n_vars)
{
    if (!is_prime(p))
        throw std::invalid_argument("GradedSeries: p = " + std::to_string(p) + " is not prime");
}

GradedSeries GradedSeries::y1(unsigned long p, Ring ring)
{
    GradedSeries s(p, ring);
    s.add_term({1, 0, 0}, 1);
    return s;
}

GradedSeries GradedSeries::y2(unsigned long p, Ring ring)
{
    GradedSeries s(p, ring);
    s.add_term({0, 1, 0}, 1);
    return s;
}

GradedSeries GradedSeries::y(unsigned long p, Ring ring)
{
    GradedSeries s(p, ring, 1);
    s.add_term({1, 0, 0}, 1);
    return s;
}

GradedSeries GradedSeries::v1(unsigned long p, Ring ring)
{
    GradedSeries s(p, ring);
    s.add_term({0, 0, 1}, 1);
    return s;
}

GradedSeries GradedSeries::constant(unsigned long p, const mpq_class& c, Ring ring)
{
    GradedSeries s(p, ring);
    s.add_term({0, 0, 0}, c);
    return s;
}

GradedSeries GradedSeries::from_poly(unsigned long p, const IntPoly& poly, Ring ring)
{
    if (poly.n_vars() > 2)
        throw std::invalid_argument("GradedSeries::from_poly: at most two variables");
    GradedSeries s(p, ring);
    for (const auto& [e, c] : poly.terms())
        s.add_term({e.size() > 0 ? static_cast<int>(e[0]) : 0, e.size() > 1 ? static_cast<int>(e[1]) : 0, 0},
                   mpq_class(c));
    return s;
}

void GradedSeries::add_term(const SeriesMonomial& m, const mpq_class& c)
{
    if (c == 0)
        return;
    if (mpz_divisible_ui_p(c.get_den_mpz_t(), p_))
        throw std::domain_error("coefficient " + c.get_str() + " is not " + std::to_string(p_) + "-local");
    if (ring_ == Ring::connective && m.k < 0)
        throw std::domain_error("negative power of v1 in the connective ring");
    if (m.i < 0 || m.j < 0)
        throw std::domain_error("negative power of y");
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

mpq_class GradedSeries::coefficient(const SeriesMonomial& m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? mpq_class(0) : it->second;
}

bool GradedSeries::homogeneous() const
{
    if (terms_.empty())
        return true;
    const auto deg = [&](const SeriesMonomial& m) {
        return 2 * m.i + 2 * m.j - 2 * static_cast<int>(p_ - 1) * m.k;
    };
    const int d = deg(terms_.begin()->first);
    return std::all_of(terms_.begin(), terms_.end(), [&](const auto& t) { return deg(t.first) == d; });
}

int GradedSeries::topdeg() const
{
    if (!homogeneous())
        throw AssertionFailure("series " + to_string() + " is not homogeneous");
    if (terms_.empty())
        return 0;
    const auto& m = terms_.begin()->first;
    return 2 * m.i + 2 * m.j - 2 * static_cast<int>(p_ - 1) * m.k;
}

int GradedSeries::max_y_degree() const
{
    int d = 0;
    for (const auto& [m, c] : terms_)
        d = std::max(d, m.i + m.j);
    return d;
}

GradedSeries GradedSeries::truncated(int max_y_degree) const
{
    GradedSeries out(p_, ring_, n_vars_);
    for (const auto& [m, c] : terms_)
        if (m.i + m.j <= max_y_degree)
            out.terms_.emplace(m, c);
    return out;
}

GradedSeries GradedSeries::v_part(int k) const
{
    GradedSeries out(p_, ring_, n_vars_);
    for (const auto& [m, c] : terms_)
        if (m.k == k)
            out.terms_.emplace(m, c);
    return out;
}

GradedSeries GradedSeries::shifted(int k) const
{
    GradedSeries out(p_, ring_, n_vars_);
    for (const auto& [m, c] : terms_)
        out.add_term({m.i, m.j, m.k + k}, c);
    return out;
}

GradedSeries GradedSeries::as_ring(Ring ring) const
{
    GradedSeries out(p_, ring, n_vars_);
    for (const auto& [m, c] : terms_)
        out.add_term(m, c);
    return out;
}

void GradedSeries::check_compatible(const GradedSeries& o) const
{
    if (o.p_ != p_)
        throw std::invalid_argument("series over different primes");
}

GradedSeries& GradedSeries::operator+=(const GradedSeries& o)
{
    check_compatible(o);
    if (!terms_.empty() && !o.terms_.empty() && topdeg() != o.topdeg())
        throw AssertionFailure("adding series of topological degrees " + std::to_string(topdeg()) + " and "
                               + std::to_string(o.topdeg()));
    ring_ = combine(ring_, o.ring_);
    n_vars_ = std::max(n_vars_, o.n_vars_);
    for (const auto& [m, c] : o.terms_)
        add_term(m, c);
    return *this;
}

GradedSeries& GradedSeries::operator-=(const GradedSeries& o)
{
    return *this += -o;
}

GradedSeries& GradedSeries::operator*=(const mpq_class& k)
{
    if (k == 0) {
        terms_.clear();
        return *this;
    }
    if (mpz_divisible_ui_p(k.get_den_mpz_t(), p_))
        throw std::domain_error("scalar " + k.get_str() + " is not " + std::to_string(p_) + "-local");
    for (auto& [m, c] : terms_)
        c *= k;
    return *this;
}

GradedSeries GradedSeries::operator-() const
{
    GradedSeries out = *this;
    for (auto& [m, c] : out.terms_)
        c = -c;
    return out;
}

GradedSeries GradedSeries::mul_truncated(const GradedSeries& o, int max_y_degree) const
{
    check_compatible(o);
    GradedSeries out(p_, combine(ring_, o.ring_), std::max(n_vars_, o.n_vars_));
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) {
            if (ma.i + ma.j + mb.i + mb.j > max_y_degree)
                continue;
            out.add_term({ma.i + mb.i, ma.j + mb.j, ma.k + mb.k}, ca * cb);
        }
    return out;
}

GradedSeries operator*(const GradedSeries& a, const GradedSeries& b)
{
    return a.mul_truncated(b, std::numeric_limits<int>::max());
}

GradedSeries GradedSeries::pow_truncated(unsigned e, int max_y_degree) const
{
    GradedSeries out = constant(p_, 1, ring_);
    out.n_vars_ = n_vars_;
    for (unsigned i = 0; i < e; ++i)
        out = out.mul_truncated(*this, max_y_degree);
    return out;
}

IntPoly GradedSeries::to_poly() const
{
    IntPoly out(2);
    for (const auto& [m, c] : terms_) {
        if (m.k != 0)
            throw std::domain_error("to_poly: term with v1 power " + std::to_string(m.k));
        if (c.get_den() != 1)
            throw std::domain_error("to_poly: non-integral coefficient " + c.get_str());
        out.add_term({static_cast<unsigned>(m.i), static_cast<unsigned>(m.j)}, c.get_num());
    }
    return out;
}

std::string GradedSeries::to_string() const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        const bool neg = c < 0;
        const mpq_class mag = abs(c);
        os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
        first = false;
        const bool unit = (m.i == 0 && m.j == 0 && m.k == 0);
        if (mag != 1 || unit)
            os << mag.get_str();
        append_monomial(os, m, n_vars_, mag != 1 || unit);
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// p-series

GradedSeries compose(const GradedSeries& outer, const GradedSeries& inner, int trunc)
{
    GradedSeries out(outer.prime(), combine(outer.ring(), inner.ring()), 1);
    std::vector<GradedSeries> powers{GradedSeries::constant(outer.prime(), 1, inner.ring())};
    for (const auto& [m, c] : outer.terms()) {
        if (m.j != 0)
            throw std::invalid_argument("compose: outer series is not univariate");
        while (static_cast<int>(powers.size()) <= m.i)
            powers.push_back(powers.back().mul_truncated(inner, trunc));
        GradedSeries term = powers[m.i].shifted(m.k) * c;
        for (const auto& [tm, tc] : term.terms())
            out.add_term(tm, tc);
    }
    return out;
}

GradedSeries p_series(unsigned long p, unsigned r, int trunc)
{
    if (r < 1 || trunc < 1)
        throw std::invalid_argument("p_series: need r >= 1 and trunc >= 1");
    const GradedSeries y = GradedSeries::y(p);
    // [p](y) = p y + v1 y^p
    GradedSeries bracket_p = y * mpq_class(p);
    if (static_cast<int>(p) <= trunc)
        bracket_p += y.pow_truncated(static_cast<unsigned>(p), trunc).shifted(1);
    GradedSeries out = y;
    for (unsigned step = 0; step < r; ++step)
        out = compose(bracket_p, out, trunc);
    return out;
}

namespace {

// Univariate y -> y1 (axis y1) or y2.
GradedSeries embed(const GradedSeries& uni, Axis axis)
{
    GradedSeries out(uni.prime(), uni.ring());
    for (const auto& [m, c] : uni.terms())
        out.add_term(axis == Axis::y1 ? SeriesMonomial{m.i, 0, m.k} : SeriesMonomial{0, m.i, m.k}, c);
    return out;
}

// Residue d of c modulo `base` with |d| < base and sign(d) = sign(c).
mpq_class signed_digit(const mpq_class& c, const mpz_class& base)
{
    mpz_class inv, x;
    if (!mpz_invert(inv.get_mpz_t(), c.get_den_mpz_t(), base.get_mpz_t()))
        throw std::domain_error("signed_digit: denominator not invertible");
    x = c.get_num() * inv;
    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), base.get_mpz_t());
    if (c < 0 && x != 0)
        x -= base;
    return mpq_class(x);
}

} // namespace

GradedSeries reduce(const GradedSeries& s, const QuotientSpec& q)
{
    if (q.ring != Ring::periodic || s.ring() != Ring::periodic)
        throw NotPeriodic("reduce requires the periodic ring (v1 inverted)");
    if (q.r < 1 || q.s < 1)
        throw std::invalid_argument("reduce: exponents must be >= 1");
    const unsigned long p = s.prime();
    if (q.p != p)
        throw std::invalid_argument("reduce: quotient and series over different primes");

    const mpz_class base1 = ipow(p, q.r), base2 = ipow(p, q.s);
    // rest_i = [p^e](y_i) - p^e y_i
    const GradedSeries rest1 = embed(p_series(p, q.r, q.trunc), Axis::y1) - GradedSeries::y1(p) * mpq_class(base1);
    const GradedSeries rest2 = embed(p_series(p, q.s, q.trunc), Axis::y2) - GradedSeries::y2(p) * mpq_class(base2);

    using Key = std::tuple<int, SeriesMonomial>;
    std::map<Key, mpq_class> work;
    for (const auto& [m, c] : s.terms())
        if (m.i + m.j <= q.trunc)
            work[{m.i + m.j, m}] += c;

    GradedSeries out(p, Ring::periodic, s.n_vars());
    while (!work.empty()) {
        auto node = work.extract(work.begin());
        const SeriesMonomial m = std::get<1>(node.key());
        const mpq_class c = node.mapped();
        if (c == 0)
            continue;
        const bool on_y2 = m.j >= 1;
        if (!on_y2 && m.i == 0) {
            out.add_term(m, c);
            continue;
        }
        const mpz_class& base = on_y2 ? base2 : base1;
        const GradedSeries& rest = on_y2 ? rest2 : rest1;
        const mpq_class d = signed_digit(c, base);
        out.add_term(m, d);
        const mpq_class carry = (c - d) / mpq_class(base);
        if (carry == 0)
            continue;
        const SeriesMonomial stem{m.i - (on_y2 ? 0 : 1), m.j - (on_y2 ? 1 : 0), m.k};
        for (const auto& [rm, rc] : rest.terms()) {
            const SeriesMonomial nm{stem.i + rm.i, stem.j + rm.j, stem.k + rm.k};
            if (nm.i + nm.j > q.trunc)
                continue;
            work[{nm.i + nm.j, nm}] -= carry * rc;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// s_r

SrDerivation derive_sr(unsigned long p, unsigned r, int trunc)
{
    if (r < 1)
        throw std::invalid_argument("derive_sr: r must be >= 1");
    const int pr = static_cast<int>(ipow(p, r).get_si());
    if (trunc <= 0)
        trunc = pr + 1 + static_cast<int>(r * (p - 1));

    SrDerivation out{p, r, trunc, GradedSeries(p), IntPoly(2), GradedSeries(p), IntPoly(2), {}};
    const GradedSeries relation = GradedSeries::y2(p) * embed(p_series(p, r, trunc), Axis::y1);
    out.reduced = reduce(relation.truncated(trunc), {p, r, 1, trunc});

    GradedSeries scaled = out.reduced.shifted(-static_cast<int>(r)) * mpq_class(r % 2 ? -1 : 1);
    for (const auto& [m, c] : scaled.terms())
        if (m.k < 0)
            throw AssertionFailure("derive_sr: term with v1^" + std::to_string(m.k) + " after scaling by v1^-"
                                   + std::to_string(r));
    const GradedSeries lead = scaled.v_part(0);
    out.leading = lead.to_poly();
    out.corrections = scaled - lead;

    const unsigned a = r * static_cast<unsigned>(p - 1) + 1;
    const unsigned b = (r - 1) * static_cast<unsigned>(p - 1) + 1;
    out.expected = IntPoly::monomial({1, a}) - IntPoly::monomial({static_cast<unsigned>(p), b});
    out.modulus = {2, b + 1};
    const IntPoly diff = out.leading - out.expected;
    for (const auto& [e, c] : diff.terms())
        if (!(e[0] >= out.modulus[0] && e[1] >= out.modulus[1]))
            throw AssertionFailure("derive_sr(" + std::to_string(p) + ", " + std::to_string(r) + "): leading part "
                                   + out.leading.to_string() + " is not congruent to " + out.expected.to_string()
                                   + " modulo y1^2*y2^" + std::to_string(out.modulus[1]));
    return out;
}

GradedSeries y_series(unsigned long p, unsigned i, Ring ring)
{
    const int e = static_cast<int>(ipow(p, i).get_si());
    GradedSeries s(p, ring);
    s.add_term({e, 1, 0}, 1);
    s.add_term({1, e, 0}, -1);
    return s;
}

namespace {

bool all_divisible(const GradedSeries& s, const mpz_class& d)
{
    for (const auto& [m, c] : s.terms()) {
        if (c.get_den() != 1 || !mpz_divisible_p(c.get_num_mpz_t(), d.get_mpz_t()))
            return false;
    }
    return true;
}

std::pair<GradedSeries, GradedSeries> p2_series_pair(unsigned long p, int trunc)
{
    const GradedSeries ps = p_series(p, 2, trunc).as_ring(Ring::connective);
    return {embed(ps, Axis::y1), embed(ps, Axis::y2)};
}

} // namespace

StarIdentity star_identity(unsigned long p, int trunc)
{
    const int p2 = static_cast<int>(p * p);
    if (trunc <= 0)
        trunc = p2 + 1;
    if (trunc < p2 + 1)
        throw std::invalid_argument("star_identity: trunc must be >= p^2 + 1");
    const auto [f1, f2] = p2_series_pair(p, trunc);
    const Ring k = Ring::connective;
    StarIdentity out{p, GradedSeries::y2(p, k) * f1 - GradedSeries::y1(p, k) * f2, GradedSeries(p, k),
                     GradedSeries(p, k), static_cast<int>(p)};
    const std::string who = "star_identity(" + std::to_string(p) + ")";
    const mpz_class p_sq = ipow(p, 2);

    if (!out.expansion.v_part(0).is_zero())
        throw AssertionFailure(who + ": expansion has a v1^0 term");
    out.v1_part = out.expansion.v_part(1).shifted(-1);
    out.top_part = out.expansion.v_part(static_cast<int>(p) + 1).shifted(-static_cast<int>(p) - 1);
    const GradedSeries y1 = y_series(p, 1, k), y2 = y_series(p, 2, k);
    if (!all_divisible(out.v1_part - y1 * mpq_class(p), p_sq))
        throw AssertionFailure(who + ": v1 coefficient " + out.v1_part.to_string() + " is not p*y(1) mod p^2");
    if (!(out.top_part == y2))
        throw AssertionFailure(who + ": v1^(p+1) coefficient " + out.top_part.to_string() + " is not y(2)");
    for (int e = 2; e <= static_cast<int>(p); ++e)
        if (!all_divisible(out.expansion.v_part(e), p_sq))
            throw AssertionFailure(who + ": v1^" + std::to_string(e) + " part not divisible by p^2");
    for (const auto& [m, c] : out.expansion.terms())
        if (m.k > static_cast<int>(p) + 1)
            throw AssertionFailure(who + ": unexpected v1^" + std::to_string(m.k) + " term");
    // After dividing by v1, y(2) carries v1^(p+1-1).
    out.y2_v1_exponent = static_cast<int>(p);
    return out;
}

Y1pIdentity y1p_identity(unsigned long p, int trunc)
{
    const int p2 = static_cast<int>(p * p);
    if (trunc <= 0)
        trunc = p2 + static_cast<int>(p);
    const auto [f1, f2] = p2_series_pair(p, trunc);
    const Ring k = Ring::connective;
    const unsigned pe = static_cast<unsigned>(p);
    const GradedSeries lhs = GradedSeries::y2(p, k).pow_truncated(pe, trunc) * f1
                             - GradedSeries::y1(p, k).pow_truncated(pe, trunc) * f2;
    Y1pIdentity out{p, lhs, lhs.v_part(0), GradedSeries(p, k), 0};
    const std::string who = "y1p_identity(" + std::to_string(p) + ")";
    const mpz_class p_sq = ipow(p, 2);
    const GradedSeries y1 = y_series(p, 1, k);

    if (out.v0_part == y1 * mpq_class(p_sq))
        out.v0_sign = 1;
    else if (out.v0_part == y1 * mpq_class(-p_sq))
        out.v0_sign = -1;
    else
        throw AssertionFailure(who + ": v1^0 part " + out.v0_part.to_string() + " is not +-p^2 y(1)");

    out.top_part = lhs.v_part(static_cast<int>(p) + 1).shifted(-static_cast<int>(p) - 1);
    GradedSeries frob(p, k);
    frob.add_term({p2, static_cast<int>(p), 0}, 1);
    frob.add_term({static_cast<int>(p), p2, 0}, -1);
    if (!(out.top_part == frob))
        throw AssertionFailure(who + ": v1^(p+1) part " + out.top_part.to_string() + " differs from "
                               + frob.to_string());
    if (!(modp(out.top_part) == modp(y1.pow_truncated(pe, std::numeric_limits<int>::max()))))
        throw AssertionFailure(who + ": v1^(p+1) part is not y(1)^p mod p");
    for (const auto& [m, c] : lhs.terms()) {
        if (m.k == 0 || m.k == static_cast<int>(p) + 1)
            continue;
        if (c.get_den() != 1 || !mpz_divisible_p(c.get_num_mpz_t(), p_sq.get_mpz_t()))
            throw AssertionFailure(who + ": term outside (p^2 v1) at v1^" + std::to_string(m.k));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Descent

DescentCertificate descent_membership(unsigned long p, const GradedSeries& target, int v1_cap, int saturation)
{
    if (v1_cap < 1 || saturation < 0)
        throw std::invalid_argument("descent_membership: need v1_cap >= 1 and saturation >= 0");
    const int T = target.topdeg();
    const int pm1 = static_cast<int>(p - 1);
    const int p2 = static_cast<int>(p * p);

    // Coordinates y1^i y2^j v1^k, -saturation <= k < v1_cap, in degree T;
    // negative k first so the v1-free part is a coordinate suffix.
    auto monomials = [&](int deg) {
        std::vector<SeriesMonomial> out;
        for (int kk = -saturation; kk < v1_cap; ++kk) {
            const int twice_y = deg + 2 * pm1 * kk;
            if (twice_y < 0 || twice_y % 2)
                continue;
            const int yd = twice_y / 2;
            for (int i = yd; i >= 0; --i)
                out.push_back({i, yd - i, kk});
        }
        return out;
    };
    std::map<SeriesMonomial, std::size_t> coord;
    std::size_t negative = 0;
    for (const auto& m : monomials(T)) {
        coord.emplace(m, coord.size());
        negative += m.k < 0;
    }

    auto to_vector = [&](const GradedSeries& s) {
        IntVector v(coord.size());
        for (const auto& [m, c] : s.terms()) {
            if (m.k >= v1_cap)
                continue;
            if (c.get_den() != 1)
                throw std::domain_error("descent: non-integral coefficient");
            v[coord.at(m)] = c.get_num();
        }
        return v;
    };

    const auto [f1, f2] = p2_series_pair(p, p2);
    const GradedSeries g3 = y_series(p, 1, Ring::connective).shifted(1) * mpq_class(ipow(p, 2));

    LatticeBuilder b(coord.size());
    std::size_t gens = 0;
    for (const GradedSeries* g : {&f1, &f2, &g3}) {
        const GradedSeries gp = g->as_ring(Ring::periodic);
        for (const auto& m : monomials(T - g->topdeg())) {
            GradedSeries mono(p, Ring::periodic);
            mono.add_term(m, 1);
            b.add(to_vector(mono * gp));
            ++gens;
        }
    }
    const IntegerLattice span = vanishing_prefix(b.finish(), negative);
    const bool holds = member_localized(span, to_vector(target.as_ring(Ring::periodic)), p);
    return {p, v1_cap, saturation, T, coord.size() - negative, gens, span.rank(), holds, target.to_string()};
}

DescentCertificate descent_check(unsigned long p, int v1_cap, int saturation)
{
    if (v1_cap <= 0)
        v1_cap = static_cast<int>(p) + 2;
    if (saturation < 0)
        saturation = 1;
    const unsigned pe = static_cast<unsigned>(p);
    const GradedSeries target =
        y_series(p, 1, Ring::connective).pow_truncated(pe, std::numeric_limits<int>::max()).shifted(pe + 1);
    auto cert = descent_membership(p, target, v1_cap, saturation);
    if (!cert.holds)
        throw CertificateFailure("descent_check(" + std::to_string(p) + "): " + cert.target
                                 + " is not in the ideal modulo v1^" + std::to_string(v1_cap)
                                 + " (saturation " + std::to_string(saturation) + ")");
    return cert;
}

// ---------------------------------------------------------------------------
// Z/p polynomials

void ModPPoly::add_term(const SeriesMonomial& m, long c)
{
    long r = c % static_cast<long>(p_);
    if (r < 0)
        r += static_cast<long>(p_);
    if (r == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(m, static_cast<unsigned long>(r));
    if (!inserted) {
        it->second = (it->second + static_cast<unsigned long>(r)) % p_;
        if (it->second == 0)
            terms_.erase(it);
    }
}

unsigned long ModPPoly::coefficient(const SeriesMonomial& m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? 0 : it->second;
}

ModPPoly& ModPPoly::operator+=(const ModPPoly& o)
{
    for (const auto& [m, c] : o.terms_)
        add_term(m, static_cast<long>(c));
    return *this;
}

ModPPoly& ModPPoly::operator-=(const ModPPoly& o)
{
    for (const auto& [m, c] : o.terms_)
        add_term(m, -static_cast<long>(c));
    return *this;
}

ModPPoly operator*(const ModPPoly& a, const ModPPoly& b)
{
    ModPPoly out(a.p_);
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_)
            out.add_term({ma.i + mb.i, ma.j + mb.j, ma.k + mb.k}, static_cast<long>((ca * cb) % a.p_));
    return out;
}

ModPPoly ModPPoly::linear_substitution(long a, long b, long c, long d) const
{
    ModPPoly first(p_), second(p_), one(p_);
    first.add_term({1, 0, 0}, a);
    first.add_term({0, 1, 0}, b);
    second.add_term({1, 0, 0}, c);
    second.add_term({0, 1, 0}, d);
    one.add_term({0, 0, 0}, 1);
    std::vector<ModPPoly> pf{one}, ps{one};
    ModPPoly out(p_);
    for (const auto& [m, coef] : terms_) {
        while (static_cast<int>(pf.size()) <= m.i)
            pf.push_back(pf.back() * first);
        while (static_cast<int>(ps.size()) <= m.j)
            ps.push_back(ps.back() * second);
        ModPPoly v(p_);
        v.add_term({0, 0, m.k}, static_cast<long>(coef));
        out += pf[m.i] * ps[m.j] * v;
    }
    return out;
}

std::string ModPPoly::to_string() const
{
    if (terms_.empty())
        return "0";
    // v1-degree ascending, then the y-part in decreasing grlex
    std::vector<std::pair<SeriesMonomial, unsigned long>> sorted(terms_.begin(), terms_.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        const auto& x = a.first;
        const auto& y = b.first;
        return std::make_tuple(x.k, -(x.i + x.j), -x.i) < std::make_tuple(y.k, -(y.i + y.j), -y.i);
    });
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : sorted) {
        os << (first ? "" : " + ");
        first = false;
        const bool unit = (m.i == 0 && m.j == 0 && m.k == 0);
        if (c != 1 || unit)
            os << c;
        append_monomial(os, m, 2, c != 1 || unit);
    }
    return os.str();
}

namespace {

// Lex order y1 > y2 > v1 for division.
bool lex_less(const SeriesMonomial& a, const SeriesMonomial& b)
{
    return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k);
}

std::pair<SeriesMonomial, unsigned long> leading(const ModPPoly& f)
{
    auto it = std::max_element(f.terms().begin(), f.terms().end(),
                               [](const auto& x, const auto& y) { return lex_less(x.first, y.first); });
    return *it;
}

unsigned long inverse_mod(unsigned long a, unsigned long p)
{
    mpz_class inv;
    mpz_class za(a), zp(p);
    mpz_invert(inv.get_mpz_t(), za.get_mpz_t(), zp.get_mpz_t());
    return inv.get_ui();
}

} // namespace

void divide(const ModPPoly& f, const ModPPoly& g, ModPPoly& quotient, ModPPoly& remainder)
{
    if (g.is_zero())
        throw std::domain_error("divide: division by zero polynomial");
    const unsigned long p = f.prime();
    quotient = ModPPoly(p);
    remainder = ModPPoly(p);
    ModPPoly rest = f;
    const auto [lg, cg] = leading(g);
    const unsigned long cg_inv = inverse_mod(cg, p);
    while (!rest.is_zero()) {
        const auto [lf, cf] = leading(rest);
        if (lf.i >= lg.i && lf.j >= lg.j && lf.k >= lg.k) {
            ModPPoly t(p);
            t.add_term({lf.i - lg.i, lf.j - lg.j, lf.k - lg.k}, static_cast<long>((cf * cg_inv) % p));
            quotient += t;
            rest -= t * g;
        } else {
            ModPPoly lt(p);
            lt.add_term(lf, static_cast<long>(cf));
            remainder += lt;
            rest -= lt;
        }
    }
}

DicksonQuotient dickson_quotient(unsigned long p)
{
    if (!is_prime(p))
        throw std::invalid_argument("dickson_quotient: p is not prime");
    const ModPPoly y1 = modp(y_series(p, 1)), y2 = modp(y_series(p, 2));
    DicksonQuotient out{p, ModPPoly(p), ModPPoly(p), false, false};
    ModPPoly rem(p);
    divide(y2, y1, out.quotient, rem);
    const std::string who = "dickson_quotient(" + std::to_string(p) + ")";
    if (!rem.is_zero())
        throw AssertionFailure(who + ": nonzero remainder " + rem.to_string());
    const int pm1 = static_cast<int>(p - 1);
    for (int i = 0; i <= static_cast<int>(p); ++i)
        out.expected.add_term({pm1 * i, pm1 * (static_cast<int>(p) - i), 0}, 1);
    if (!(out.quotient == out.expected))
        throw AssertionFailure(who + ": quotient " + out.quotient.to_string() + " differs from "
                               + out.expected.to_string());
    out.transvection_invariant = out.quotient.linear_substitution(1, 1, 0, 1) == out.quotient;
    out.swap_invariant = out.quotient.linear_substitution(0, 1, 1, 0) == out.quotient;
    return out;
}

// ---------------------------------------------------------------------------
// Restriction and mod-p reduction

GradedSeries restrict(const GradedSeries& s, Axis keep)
{
    GradedSeries out(s.prime(), s.ring(), s.n_vars());
    for (const auto& [m, c] : s.terms())
        if (keep == Axis::y1 ? m.j == 0 : m.i == 0)
            out.add_term(m, c);
    return out;
}

ModPPoly restrict(const ModPPoly& s, Axis keep)
{
    ModPPoly out(s.prime());
    for (const auto& [m, c] : s.terms())
        if (keep == Axis::y1 ? m.j == 0 : m.i == 0)
            out.add_term(m, static_cast<long>(c));
    return out;
}

ModPPoly modp(const GradedSeries& s)
{
    const unsigned long p = s.prime();
    const mpz_class zp(p);
    ModPPoly out(p);
    for (const auto& [m, c] : s.terms()) {
        mpz_class inv, x;
        mpz_invert(inv.get_mpz_t(), c.get_den_mpz_t(), zp.get_mpz_t());
        x = c.get_num() * inv;
        mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), zp.get_mpz_t());
        out.add_term(m, x.get_si());
    }
    return out;
}

namespace {

bool in_truncation(const SeriesMonomial& m, unsigned long p)
{
    const int p2 = static_cast<int>(p * p);
    return m.i >= p2 || m.j >= p2;
}

} // namespace

ModPPoly modp_reduce(const GradedSeries& s)
{
    const ModPPoly full = modp(s);
    ModPPoly out(s.prime());
    for (const auto& [m, c] : full.terms())
        if (!in_truncation(m, s.prime()))
            out.add_term(m, static_cast<long>(c));
    return out;
}

bool in_truncation_ideal(const GradedSeries& s)
{
    return modp_reduce(s).is_zero();
}

} // namespace gammafilt
