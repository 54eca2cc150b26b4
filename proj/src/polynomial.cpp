#include "gammafilt/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace gammafilt {

unsigned total_degree(const Exponents& e)
{
    return std::accumulate(e.begin(), e.end(), 0u);
}

bool GrlexLess::operator()(const Exponents& a, const Exponents& b) const
{
    const unsigned da = total_degree(a), db = total_degree(b);
    if (da != db)
        return da < db;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

IntPoly IntPoly::variable(std::size_t n_vars, std::size_t i)
{
    Exponents e(n_vars, 0);
    e.at(i) = 1;
    return monomial(e);
}

IntPoly IntPoly::constant(std::size_t n_vars, const mpz_class& c)
{
    return monomial(Exponents(n_vars, 0), c);
}

IntPoly IntPoly::monomial(const Exponents& e, const mpz_class& c)
{
    IntPoly p(e.size());
    p.add_term(e, c);
    return p;
}

int IntPoly::homogeneous_degree() const
{
    if (terms_.empty())
        return -1;
    const unsigned d = total_degree(terms_.begin()->first);
    for (const auto& [e, c] : terms_)
        if (total_degree(e) != d)
            return -1;
    return static_cast<int>(d);
}

void IntPoly::add_term(const Exponents& e, const mpz_class& c)
{
    if (e.size() != n_)
        throw std::invalid_argument("IntPoly: exponent vector has wrong length");
    if (c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

mpz_class IntPoly::coefficient(const Exponents& e) const
{
    auto it = terms_.find(e);
    return it == terms_.end() ? mpz_class(0) : it->second;
}

IntPoly& IntPoly::operator+=(const IntPoly& o)
{
    if (o.n_ > n_)
        *this = widened(o.n_);
    for (const auto& [e, c] : o.terms_) {
        Exponents w = e;
        w.resize(n_, 0);
        add_term(w, c);
    }
    return *this;
}

IntPoly& IntPoly::operator-=(const IntPoly& o)
{
    return *this += -o;
}

IntPoly& IntPoly::operator*=(const mpz_class& k)
{
    if (k == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, c] : terms_)
        c *= k;
    return *this;
}

IntPoly IntPoly::operator-() const
{
    IntPoly out = *this;
    for (auto& [e, c] : out.terms_)
        c = -c;
    return out;
}

IntPoly operator*(const IntPoly& a, const IntPoly& b)
{
    const std::size_t n = std::max(a.n_, b.n_);
    IntPoly out(n);
    Exponents e(n);
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            for (std::size_t i = 0; i < n; ++i)
                e[i] = (i < ea.size() ? ea[i] : 0) + (i < eb.size() ? eb[i] : 0);
            out.add_term(e, ca * cb);
        }
    return out;
}

IntPoly IntPoly::pow(unsigned e) const
{
    IntPoly out = constant(n_, 1);
    for (unsigned i = 0; i < e; ++i)
        out = out * *this;
    return out;
}

IntPoly IntPoly::widened(std::size_t n_vars) const
{
    if (n_vars < n_)
        throw std::invalid_argument("IntPoly::widened: cannot drop variables");
    IntPoly out(n_vars);
    for (const auto& [e, c] : terms_) {
        Exponents w = e;
        w.resize(n_vars, 0);
        out.add_term(w, c);
    }
    return out;
}

IntPoly IntPoly::permuted(const std::vector<std::size_t>& perm) const
{
    if (perm.size() != n_)
        throw std::invalid_argument("IntPoly::permuted: permutation has wrong size");
    IntPoly out(n_);
    for (const auto& [e, c] : terms_) {
        Exponents w(n_, 0);
        for (std::size_t i = 0; i < n_; ++i)
            w[perm[i]] = e[i];
        out.add_term(w, c);
    }
    return out;
}

std::string IntPoly::to_string() const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        const bool neg = c < 0;
        const mpz_class mag = abs(c);
        os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
        first = false;
        const bool constant_term = total_degree(e) == 0;
        bool need_star = false;
        if (mag != 1 || constant_term) {
            os << mag.get_str();
            need_star = true;
        }
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0)
                continue;
            os << (need_star ? "*" : "") << 'y' << (i + 1);
            if (e[i] != 1)
                os << '^' << e[i];
            need_star = true;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
    Parser(std::string_view text, std::size_t n_vars) : s_(text), n_(n_vars) {}

    IntPoly parse()
    {
        IntPoly p = expr();
        skip_ws();
        if (pos_ != s_.size())
            fail("unexpected character");
        return p.widened(std::max(n_, max_var_));
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw ParseError("polynomial \"" + std::string(s_) + "\": " + what + " at position " + std::to_string(pos_));
    }

    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string digits()
    {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (start == pos_)
            fail("expected a number");
        return std::string(s_.substr(start, pos_ - start));
    }

    IntPoly expr()
    {
        IntPoly acc = term();
        for (;;) {
            if (accept('+'))
                acc += term();
            else if (accept('-'))
                acc -= term();
            else
                return acc;
        }
    }

    IntPoly term()
    {
        bool neg = false;
        while (true) {
            if (accept('-'))
                neg = !neg;
            else if (!accept('+'))
                break;
        }
        IntPoly acc = factor();
        while (accept('*'))
            acc = acc * factor();
        return neg ? -acc : acc;
    }

    IntPoly factor()
    {
        IntPoly base = atom();
        if (accept('^')) {
            const std::string e = digits();
            if (e.size() > 6)
                fail("exponent too large");
            base = base.pow(static_cast<unsigned>(std::stoul(e)));
        }
        return base;
    }

    IntPoly atom()
    {
        skip_ws();
        if (pos_ >= s_.size())
            fail("unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            IntPoly inner = expr();
            if (!accept(')'))
                fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)))
            return IntPoly::constant(0, mpz_class(digits()));
        if (c == 'y') {
            ++pos_;
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                fail("expected variable index after 'y'");
            const std::string idx = digits();
            const unsigned long k = std::stoul(idx);
            if (k < 1 || (n_ && k > n_))
                fail("variable y" + idx + " out of range");
            max_var_ = std::max<std::size_t>(max_var_, k);
            return IntPoly::variable(k, k - 1);
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    std::string_view s_;
    std::size_t n_;
    std::size_t pos_ = 0;
    std::size_t max_var_ = 0;
};

} // namespace

IntPoly parse_poly(std::string_view text, std::size_t n_vars)
{
    return Parser(text, n_vars).parse();
}

} // namespace gammafilt
