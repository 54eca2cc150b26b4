// Acceptance gate: one PASS/FAIL line per criterion.  Every comparison is
// exact (zero tolerance); each criterion also has a wall-clock limit.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "gammafilt/cli.hpp"
#include "gammafilt/exactlin.hpp"
#include "gammafilt/fgl.hpp"
#include "gammafilt/gradedpres.hpp"
#include "gammafilt/grouprings.hpp"
#include "support.hpp"

using namespace gammafilt;

namespace {

struct Criterion {
    int id;
    std::string title;
    double limit_seconds;
    std::function<bool(std::ostream&)> check;
};

mpz_class ipow(unsigned long b, unsigned e)
{
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), b, e);
    return out;
}

cli::CommandResult verify(std::string preset, std::optional<unsigned long> p, std::optional<unsigned> r,
                          unsigned max_topdeg, std::optional<unsigned long> q = {}, std::optional<unsigned> n = {})
{
    cli::RunConfig cfg;
    cfg.command = "verify";
    cfg.subcommand = std::move(preset);
    cfg.p = p;
    cfg.r = r;
    cfg.q = q;
    cfg.n = n;
    cfg.max_topdeg = max_topdeg;
    return cli::dispatch(cfg);
}

bool verified_through(const cli::CommandResult& res, unsigned max_topdeg, std::ostream& why)
{
    const auto& rep = res.report;
    if (res.exit_code != cli::verified || !rep.value("verdict", false)) {
        why << "verdict false";
        return false;
    }
    if (rep["degrees"].empty() || rep["degrees"].back()["degree"] != max_topdeg) {
        why << "degrees not covered";
        return false;
    }
    return true;
}

void partitions(unsigned n, unsigned largest, std::vector<unsigned>& cur, std::vector<std::vector<unsigned>>& out)
{
    if (n == 0) {
        out.push_back(cur);
        return;
    }
    for (unsigned k = std::min(n, largest); k >= 1; --k) {
        cur.push_back(k);
        partitions(n - k, k, cur, out);
        cur.pop_back();
    }
}

// ---------------------------------------------------------------------------

bool check_square_p2(std::ostream& why)
{
    for (unsigned long p : {2ul, 3ul}) {
        const auto res = verify("thm1.2", p, {}, 24);
        if (!verified_through(res, 24, why)) {
            why << " at p=" << p;
            return false;
        }
    }
    why << "p=2,3 degrees 0..24 all match, certificates hold";
    return true;
}

bool check_two_presentations(std::ostream& why)
{
    AbelianPGroup g(2, {2, 2});
    const auto a = compare(chetard44(), g, generator_substitution(g), 24);
    const auto b = compare(thm12(2), g, generator_substitution(g), 24);
    for (std::size_t i = 0; i < a.degrees.size(); ++i)
        if (a.degrees[i].presentation.order() != b.degrees[i].presentation.order()) {
            why << "orders differ at degree " << a.degrees[i].degree;
            return false;
        }
    if (!a.verdict || !b.verdict) {
        why << "ground truth mismatch";
        return false;
    }
    why << "identical orders and ground-truth match in degrees 0..24";
    return true;
}

bool check_refuted_q4(std::ostream& why)
{
    const auto res = verify("old-thm1.1", {}, {}, 24, 4, 2);
    const auto& rep = res.report;
    if (res.exit_code != cli::refuted || rep["first_mismatch"] != 6) {
        why << "expected refutation at degree 6";
        return false;
    }
    nlohmann::json d6;
    for (const auto& d : rep["degrees"])
        if (d["degree"] == 6)
            d6 = d;
    const bool ok = d6["presentation_order"] == 256 && d6["groundtruth_order"] == 128;
    why << "first mismatch degree 6: " << d6["presentation_order"] << " vs " << d6["groundtruth_order"];
    return ok;
}

bool check_elementary(std::ostream& why)
{
    for (auto [p, n] : std::vector<std::pair<unsigned long, unsigned>>{{2, 2}, {2, 3}, {3, 2}, {5, 2}}) {
        const unsigned top = 2 * static_cast<unsigned>(p + 2) + 2;
        const auto res = verify("thm1.1", p, 1, top, {}, n);
        if (!verified_through(res, top, why)) {
            why << " at (p,n)=(" << p << "," << n << ")";
            return false;
        }
    }
    why << "(2,2),(2,3),(3,2),(5,2) through degree 2(p+2)+2";
    return true;
}

bool check_sr_family(std::ostream& why)
{
    for (auto [p, r] : std::vector<std::pair<unsigned long, unsigned>>{{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}}) {
        try {
            derive_sr(p, r);
        } catch (const AssertionFailure& e) {
            why << e.what();
            return false;
        }
        const auto res = verify("thm3.1", p, r, 20);
        if (!verified_through(res, 20, why)) {
            why << " at (p,r)=(" << p << "," << r << ")";
            return false;
        }
        if (!res.report["refinements"].empty())
            why << "(" << p << "," << r << ") refined: " << res.report["refinements"].dump() << "; ";
    }
    for (unsigned r : {2u, 3u})
        if (!verified_through(verify("chetard-conj", {}, r, 20), 20, why)) {
            why << " for the conjectured presentation at r=" << r;
            return false;
        }
    why << "congruences hold, presentations match through degree 20, conjecture displays r=2,3 match";
    return true;
}

bool check_fgl_suite(std::ostream& why)
{
    if (p_series(2, 2, 10).to_string() != "4*y + 6*v1*y^2 + 4*v1^2*y^3 + v1^3*y^4") {
        why << "p_series(2,2)";
        return false;
    }
    for (unsigned long p : {2ul, 3ul})
        for (unsigned r = 1; r <= 3; ++r) {
            const int deg = static_cast<int>(r * (p - 1) + 1);
            GradedSeries lhs(p), rhs(p);
            lhs.add_term({0, 1, 0}, mpq_class(ipow(p, r)));
            rhs.add_term({0, deg, static_cast<int>(r)}, r % 2 ? -1 : 1);
            if (!(reduce(lhs, {p, r, 1, deg + 2}) == rhs)) {
                why << "reduce p^r y2 at p=" << p << " r=" << r;
                return false;
            }
        }
    try {
        for (unsigned long p : {2ul, 3ul}) {
            star_identity(p);
            y1p_identity(p);
            if (!descent_check(p).holds)
                return false;
        }
    } catch (const std::exception& e) {
        why << e.what();
        return false;
    }
    why << "p-series, reduce (r<=3), star, y1p (v1^0 sign -1), descent (one v1 division) for p=2,3";
    return true;
}

bool check_dickson(std::ostream& why)
{
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul}) {
        DicksonQuotient d{p, ModPPoly(p), ModPPoly(p), false, false};
        try {
            d = dickson_quotient(p);
        } catch (const AssertionFailure& e) {
            why << e.what();
            return false;
        }
        ModPPoly lead(p);
        lead.add_term({static_cast<int>(p * (p - 1)), 0, 0}, 1);
        if (!(restrict(d.quotient, Axis::y1) == lead) || !d.transvection_invariant) {
            why << "p=" << p;
            return false;
        }
    }
    why << "p=2,3,5,7 exact quotient, restriction y1^{p(p-1)}, transvection invariant";
    return true;
}

bool check_gamma_ideal(std::ostream& why)
{
    std::size_t groups = 0;
    for (auto [p, max_total] : std::vector<std::pair<unsigned long, unsigned>>{{2, 6}, {3, 4}})
        for (unsigned total = 1; total <= max_total; ++total) {
            std::vector<std::vector<unsigned>> parts;
            std::vector<unsigned> cur;
            partitions(total, total, cur, parts);
            for (const auto& exps : parts) {
                AbelianPGroup g(p, exps);
                const auto spans = gamma_spans(g, 8, 2);
                for (unsigned n = 1; n <= 8; ++n)
                    if (!(spans[n - 1] == ideal_power(g, n))) {
                        why << g.name() << " n=" << n;
                        return false;
                    }
                ++groups;
            }
        }
    why << groups << " groups, n<=8, weight cap n+2";
    return true;
}

bool check_exactlin_suite(std::ostream& why)
{
    std::mt19937_64 rng(20261015);
    std::uniform_int_distribution<std::size_t> dim(1, 8);
    for (int t = 0; t < 500; ++t) {
        const std::size_t rows = dim(rng), cols = dim(rng);
        const auto m = testsupport::random_matrix(rng, rows, cols, t % 2 ? 1000000 : 9);
        const auto f = snf(m);
        const auto& d = f.factors();
        for (std::size_t i = 0; i + 1 < d.size(); ++i)
            if (d[i + 1] != 0 && (d[i] == 0 || d[i + 1] % d[i] != 0)) {
                why << "divisibility chain, matrix " << t;
                return false;
            }
        const auto P = testsupport::random_unimodular(rng, rows), Q = testsupport::random_unimodular(rng, cols);
        if (!(snf(P * m * Q) == f)) {
            why << "unimodular invariance, matrix " << t;
            return false;
        }
        const auto l = hnf(m);
        for (std::size_t i = 0; i < rows; ++i)
            if (!member(l, m.row(i))) {
                why << "hnf lost a generator, matrix " << t;
                return false;
            }
        const auto back = hnf(P * m);
        if (!(back == l)) {
            why << "hnf not canonical, matrix " << t;
            return false;
        }
        if (!(lattice_quotient(IntegerLattice::full(cols), l) == f) || !lattice_quotient(l, l).empty()) {
            why << "quotient inconsistent, matrix " << t;
            return false;
        }
        std::uniform_int_distribution<long> coef(-5, 5);
        IntVector v(cols), w(cols);
        for (std::size_t i = 0; i < rows; ++i) {
            const long a = coef(rng), b = coef(rng);
            for (std::size_t j = 0; j < cols; ++j) {
                v[j] += a * m(i, j);
                w[j] += b * m(i, j);
            }
        }
        IntVector s(cols);
        for (std::size_t j = 0; j < cols; ++j)
            s[j] = v[j] + w[j];
        if (!member(l, v) || !member(l, w) || !member(l, s)) {
            why << "membership not closed, matrix " << t;
            return false;
        }
        // a vector outside: e_j scaled by 1 when the quotient has torsion or free part there
        if (!f.empty()) {
            bool some_outside = false;
            for (std::size_t j = 0; j < cols && !some_outside; ++j) {
                IntVector e(cols);
                e[j] = 1;
                some_outside = !member(l, e);
            }
            if (!some_outside) {
                why << "nontrivial quotient but every unit vector is a member, matrix " << t;
                return false;
            }
        }
    }
    why << "500 matrices up to 8x8, entries up to 10^6";
    return true;
}

} // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {1, "Z/p^2 x Z/p^2 presentation, p=2,3, degrees <= 24", 120, check_square_p2},
        {2, "two presentations of Z/4 x Z/4 agree", 30, check_two_presentations},
        {3, "refuted q=4 statement, first mismatch at degree 6", 30, check_refuted_q4},
        {4, "(Z/p)^n presentations", 120, check_elementary},
        {5, "s_r congruences and Z/p^r x Z/p presentations", 120, check_sr_family},
        {6, "formal group law identities", 60, check_fgl_suite},
        {7, "Dickson quotient suite", 10, check_dickson},
        {8, "gamma filtration equals augmentation powers, |G| <= 81", 300, check_gamma_ideal},
        {9, "exact linear algebra properties", 60, check_exactlin_suite},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        std::ostringstream why;
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = c.check(why);
        } catch (const std::exception& e) {
            why << "exception: " << e.what();
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = dt <= c.limit_seconds;
        if (!in_time)
            why << "; over time limit";
        ok = ok && in_time;
        failed += !ok;
        std::cout << "criterion " << c.id << " " << (ok ? "PASS" : "FAIL") << "  " << c.title << "  [" << why.str()
                  << "; exact; " << std::fixed << std::setprecision(2) << dt << " s <= " << c.limit_seconds
                  << " s]" << std::endl;
    }
    std::cout << (failed ? "acceptance: FAILED " + std::to_string(failed) + " criteria" : "acceptance: all criteria PASS")
              << std::endl;
    return failed ? 1 : 0;
}
