#include "gammafilt/cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "gammafilt/fgl.hpp"
#include "gammafilt/gradedpres.hpp"

namespace gammafilt::cli {

using nlohmann::json;

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class Stopwatch {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

json integer_json(const mpz_class& z)
{
    if (z.fits_slong_p())
        return z.get_si();
    return z.get_str();
}

json factors_json(const InvariantFactors& f)
{
    json out = json::array();
    for (const auto& d : f.factors())
        out.push_back(integer_json(d));
    return out;
}

unsigned long need_p(const RunConfig& cfg)
{
    if (!cfg.p)
        throw UsageError(cfg.command + ": --p is required");
    return *cfg.p;
}

AbelianPGroup need_group(const RunConfig& cfg)
{
    if (cfg.exponents.empty())
        throw UsageError(cfg.command + ": --exponents is required");
    return AbelianPGroup(need_p(cfg), cfg.exponents, cfg.budget);
}

json header(const RunConfig& cfg)
{
    json config = {{"command", cfg.command}, {"max_degree", cfg.max_topdeg}};
    if (!cfg.subcommand.empty())
        config["subcommand"] = cfg.subcommand;
    if (cfg.p)
        config["p"] = *cfg.p;
    if (cfg.r)
        config["r"] = *cfg.r;
    if (cfg.n)
        config["n"] = *cfg.n;
    if (cfg.q)
        config["q"] = *cfg.q;
    if (!cfg.exponents.empty())
        config["exponents"] = cfg.exponents;
    return {{"schema", 1}, {"tool", "gammafilt"}, {"version", tool_version}, {"config", config}};
}

std::string factors_text(const json& arr)
{
    std::string s = "(";
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (i)
            s += ",";
        s += arr[i].is_string() ? arr[i].get<std::string>() : arr[i].dump();
    }
    return s + ")";
}

std::string verdict_line(bool v)
{
    return std::string("verdict: ") + (v ? "VERIFIED" : "REFUTED") + "\n";
}

// ---------------------------------------------------------------------------

json comparison_json(const ComparisonReport& rep)
{
    json degrees = json::array();
    for (const auto& d : rep.degrees)
        degrees.push_back({{"degree", d.degree},
                           {"presentation", factors_json(d.presentation)},
                           {"presentation_order", integer_json(d.presentation.order())},
                           {"groundtruth", factors_json(d.groundtruth)},
                           {"groundtruth_order", integer_json(d.groundtruth.order())},
                           {"match", d.match}});
    json certs = json::array();
    for (const auto& c : rep.certificates)
        certs.push_back({{"relation", c.relation.to_string()},
                         {"required_filtration", c.required_filtration},
                         {"achieved_filtration", c.achieved},
                         {"ok", c.ok}});
    json rels = json::array();
    for (const auto& r : rep.relations)
        rels.push_back(r.to_string());
    return {{"group", rep.group},
            {"relations", rels},
            {"degrees", degrees},
            {"certificates", certs},
            {"refinements", rep.refinements},
            {"first_mismatch", rep.first_mismatch ? json(*rep.first_mismatch) : json(nullptr)},
            {"verdict", rep.verdict}};
}

std::string comparison_table(const json& j)
{
    std::ostringstream os;
    os << "group " << j["group"].get<std::string>() << "\nrelations:\n";
    for (const auto& r : j["relations"])
        os << "  " << r.get<std::string>() << "\n";
    os << std::left << std::setw(8) << "degree" << std::setw(28) << "presentation" << std::setw(28)
       << "ground truth" << "match\n";
    for (const auto& d : j["degrees"])
        os << std::setw(8) << d["degree"].get<unsigned>() << std::setw(28) << factors_text(d["presentation"])
           << std::setw(28) << factors_text(d["groundtruth"]) << (d["match"].get<bool>() ? "yes" : "NO") << "\n";
    os << "certificates:\n";
    for (const auto& c : j["certificates"])
        os << "  " << c["relation"].get<std::string>() << " in I^" << c["achieved_filtration"].get<unsigned>()
           << " (need I^" << c["required_filtration"].get<unsigned>() << ") " << (c["ok"].get<bool>() ? "ok" : "FAIL")
           << "\n";
    for (const auto& r : j["refinements"])
        os << "refinement: " << r.get<std::string>() << "\n";
    if (!j["first_mismatch"].is_null())
        os << "first mismatch at degree " << j["first_mismatch"].get<unsigned>() << "\n";
    return os.str();
}

GradedPresentation load_presentation(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open presentation file " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("presentation file " + path + ": " + e.what());
    }
    if (!doc.contains("vars") || !doc["vars"].is_number_unsigned() || !doc.contains("relations")
        || !doc["relations"].is_array())
        throw UsageError("presentation file must hold {\"vars\": n, \"relations\": [...]}");
    const std::size_t n = doc["vars"].get<std::size_t>();
    std::vector<IntPoly> rels;
    for (const auto& r : doc["relations"]) {
        if (!r.is_string())
            throw UsageError("relations must be strings");
        rels.push_back(parse_poly(r.get<std::string>(), n).widened(n));
    }
    return GradedPresentation(n, std::move(rels), doc.value("name", path));
}

bool is_fgl_op(const std::string& s)
{
    return s == "pseries" || s == "sr" || s == "star" || s == "y1p" || s == "descent" || s == "dickson";
}

} // namespace

// ---------------------------------------------------------------------------

CommandResult cmd_grgamma(const RunConfig& cfg)
{
    Stopwatch clock;
    const AbelianPGroup g = need_group(cfg);
    const auto pieces = gr_gamma(g, cfg.max_topdeg, cfg.budget);
    CommandResult res;
    res.report = header(cfg);
    json degrees = json::array();
    std::ostringstream os;
    os << "gr_gamma of R(" << g.name() << ")\n" << std::left << std::setw(8) << "degree" << std::setw(16) << "order"
       << "invariant factors\n";
    for (const auto& piece : pieces) {
        degrees.push_back({{"degree", piece.degree},
                           {"invariant_factors", factors_json(piece.factors)},
                           {"order", integer_json(piece.factors.order())}});
        os << std::setw(8) << piece.degree << std::setw(16) << piece.factors.order().get_str()
           << piece.factors.to_string() << "\n";
    }
    res.report["group"] = g.name();
    res.report["degrees"] = degrees;
    res.report["verdict"] = true;
    res.report["timings"] = {{"gr_gamma_seconds", clock.seconds()}};
    res.table = os.str();
    return res;
}

CommandResult cmd_verify(const RunConfig& cfg)
{
    if (cfg.subcommand.empty())
        throw UsageError("verify: --preset is required");
    if (is_fgl_op(cfg.subcommand))
        return cmd_fgl(cfg);

    Stopwatch clock;
    CommandResult res;
    res.report = header(cfg);
    res.report["preset"] = cfg.subcommand;

    std::optional<GradedPresentation> pres;
    std::optional<AbelianPGroup> group;
    std::vector<IntPoly> candidates;
    std::ostringstream pre;

    if (cfg.subcommand == "custom") {
        if (cfg.presentation_file.empty())
            throw UsageError("verify --preset custom needs --presentation");
        pres = load_presentation(cfg.presentation_file);
        group = need_group(cfg);
    } else {
        PresetParams params;
        params.p = cfg.p;
        params.r = cfg.r;
        params.q = cfg.q;
        params.n = cfg.n.value_or(2);
        if (cfg.subcommand == "thm3.1" || cfg.subcommand == "thm1.3") {
            const auto sr = derive_sr(need_p(cfg), cfg.r.value_or(1), cfg.trunc);
            params.r = sr.r;
            params.s_r = sr.leading;
            for (int k = 1; k <= static_cast<int>(sr.corrections.max_y_degree()); ++k) {
                const GradedSeries part = sr.corrections.v_part(k);
                if (!part.is_zero())
                    candidates.push_back(part.shifted(-k).to_poly());
            }
            json corr = json::array();
            for (const auto& c : candidates)
                corr.push_back(c.to_string());
            res.report["sr"] = {{"leading", sr.leading.to_string()},
                                {"expected", sr.expected.to_string()},
                                {"corrections", sr.corrections.to_string()},
                                {"correction_candidates", corr}};
            pre << "s_r = " << sr.leading.to_string() << "\ncorrections: " << sr.corrections.to_string() << "\n";
        }
        pres = preset(cfg.subcommand, params);
        group = preset_group(cfg.subcommand, params, cfg.budget);
    }

    const auto subst = generator_substitution(*group);
    const ComparisonReport rep = candidates.empty()
                                     ? compare(*pres, *group, subst, cfg.max_topdeg)
                                     : compare_with_refinement(*pres, *group, subst, cfg.max_topdeg, candidates);
    const json body = comparison_json(rep);
    for (auto it = body.begin(); it != body.end(); ++it)
        res.report[it.key()] = it.value();
    res.report["presentation"] = pres->name();
    res.report["timings"] = {{"verify_seconds", clock.seconds()}};
    res.exit_code = rep.verdict ? verified : refuted;
    res.table = "preset " + cfg.subcommand + "\n" + pre.str() + comparison_table(body) + verdict_line(rep.verdict);
    return res;
}

CommandResult cmd_fgl(const RunConfig& cfg)
{
    Stopwatch clock;
    const std::string& op = cfg.subcommand;
    const unsigned long p = need_p(cfg);
    if (!is_prime(p))
        throw UsageError("p = " + std::to_string(p) + " is not prime");
    CommandResult res;
    res.report = header(cfg);
    res.report["operation"] = op;
    std::ostringstream os;
    bool verdict = true;

    try {
        if (op == "pseries") {
            const unsigned r = cfg.r.value_or(1);
            mpz_class pr;
            mpz_ui_pow_ui(pr.get_mpz_t(), p, r);
            const int trunc = cfg.trunc > 0 ? cfg.trunc : static_cast<int>(pr.get_si());
            const std::string s = p_series(p, r, trunc).to_string();
            res.report["series"] = s;
            res.report["trunc"] = trunc;
            os << "[" << pr.get_str() << "](y) = " << s << "\n";
        } else if (op == "sr") {
            const auto sr = derive_sr(p, cfg.r.value_or(1), cfg.trunc);
            std::string mod = "y1^" + std::to_string(sr.modulus[0]) + "*y2^" + std::to_string(sr.modulus[1]);
            res.report["leading"] = sr.leading.to_string();
            res.report["expected"] = sr.expected.to_string();
            res.report["modulus"] = mod;
            res.report["corrections"] = sr.corrections.to_string();
            res.report["reduced"] = sr.reduced.to_string();
            res.report["trunc"] = sr.trunc;
            os << "s_" << sr.r << " leading: " << sr.leading.to_string() << "\n"
               << "congruent to " << sr.expected.to_string() << " mod (" << mod << ")\n"
               << "corrections: " << sr.corrections.to_string() << "\n";
        } else if (op == "star") {
            const auto st = star_identity(p, cfg.trunc);
            res.report["expansion"] = st.expansion.to_string();
            res.report["v1_coefficient"] = st.v1_part.to_string();
            res.report["top_coefficient"] = st.top_part.to_string();
            res.report["y2_v1_exponent_after_division"] = st.y2_v1_exponent;
            os << "expansion: " << st.expansion.to_string() << "\n"
               << "v1 coefficient: " << st.v1_part.to_string() << "\n"
               << "v1^" << p + 1 << " coefficient: " << st.top_part.to_string() << "\n"
               << "after dividing by v1, y(2) carries v1^" << st.y2_v1_exponent << "\n";
        } else if (op == "y1p") {
            const auto id = y1p_identity(p, cfg.trunc);
            res.report["expansion"] = id.expansion.to_string();
            res.report["v0_part"] = id.v0_part.to_string();
            res.report["v0_sign"] = id.v0_sign;
            res.report["top_coefficient"] = id.top_part.to_string();
            os << "expansion: " << id.expansion.to_string() << "\n"
               << "v1^0 part: " << id.v0_part.to_string() << " (sign " << id.v0_sign << ")\n"
               << "v1^" << p + 1 << " coefficient: " << id.top_part.to_string() << "\n";
        } else if (op == "descent") {
            const auto c = descent_check(p, cfg.v1_cap, cfg.saturation);
            const auto neg = descent_membership(p, y_series(p, 1, Ring::connective), c.v1_cap, c.saturation);
            res.report["certificate"] = {{"target", c.target},        {"topdeg", c.topdeg},
                                         {"v1_cap", c.v1_cap},        {"saturation", c.saturation},
                                         {"coordinates", c.coordinates}, {"generators", c.generators},
                                         {"rank", c.rank},            {"holds", c.holds}};
            res.report["negative_control"] = {{"target", neg.target}, {"holds", neg.holds}};
            verdict = c.holds && !neg.holds;
            os << c.target << " in ideal mod v1^" << c.v1_cap << " (saturation " << c.saturation
               << "): " << (c.holds ? "yes" : "no") << "\n"
               << "degree " << c.topdeg << ", " << c.coordinates << " coordinates, " << c.generators
               << " generators, rank " << c.rank << "\n"
               << "control " << neg.target << " in ideal: " << (neg.holds ? "yes" : "no") << "\n";
        } else if (op == "dickson") {
            const auto d = dickson_quotient(p);
            const ModPPoly res_y1 = restrict(d.quotient, Axis::y1);
            ModPPoly expected_res(p);
            expected_res.add_term({static_cast<int>(p * (p - 1)), 0, 0}, 1);
            res.report["quotient"] = d.quotient.to_string();
            res.report["restriction"] = res_y1.to_string();
            res.report["transvection_invariant"] = d.transvection_invariant;
            res.report["swap_invariant"] = d.swap_invariant;
            verdict = d.transvection_invariant && d.swap_invariant && res_y1 == expected_res;
            os << "y(2)/y(1) = " << d.quotient.to_string() << " (mod " << p << ")\n"
               << "restriction y2 := 0: " << res_y1.to_string() << "\n"
               << "invariant under y1 -> y1 + y2: " << (d.transvection_invariant ? "yes" : "no") << "\n"
               << "invariant under y1 <-> y2: " << (d.swap_invariant ? "yes" : "no") << "\n";
        } else {
            throw UsageError("unknown fgl operation " + op);
        }
    } catch (const AssertionFailure& e) {
        verdict = false;
        res.report["error"] = e.what();
        os << "assertion failed: " << e.what() << "\n";
    } catch (const CertificateFailure& e) {
        verdict = false;
        res.report["error"] = e.what();
        os << "certificate failed: " << e.what() << "\n";
    }
    res.report["verdict"] = verdict;
    res.report["timings"] = {{"fgl_seconds", clock.seconds()}};
    res.exit_code = verdict ? verified : refuted;
    res.table = os.str() + verdict_line(verdict);
    return res;
}

CommandResult cmd_gamma_vs_ideal(const RunConfig& cfg)
{
    Stopwatch clock;
    const AbelianPGroup g = need_group(cfg);
    if (cfg.max_n < 1)
        throw UsageError("gamma-vs-ideal: --max-n must be >= 1");
    const auto spans = gamma_spans(g, cfg.max_n, cfg.extra_weight);
    CommandResult res;
    res.report = header(cfg);
    res.report["group"] = g.name();
    res.report["extra_weight"] = cfg.extra_weight;
    json rows = json::array();
    bool all = true;
    std::ostringstream os;
    os << "Gamma^n vs I^n for R(" << g.name() << ")\n";
    for (unsigned n = 1; n <= cfg.max_n; ++n) {
        const IntegerLattice ideal = ideal_power(g, n);
        const bool equal = spans[n - 1] == ideal;
        all = all && equal;
        rows.push_back({{"n", n}, {"equal", equal}, {"weight_cap", n + cfg.extra_weight}});
        os << "n = " << n << ": " << (equal ? "equal" : "DIFFERENT") << "\n";
    }
    res.report["spans"] = rows;
    res.report["verdict"] = all;
    res.report["timings"] = {{"spans_seconds", clock.seconds()}};
    res.exit_code = all ? verified : refuted;
    res.table = os.str() + verdict_line(all);
    return res;
}

CommandResult dispatch(const RunConfig& cfg)
{
    auto failure = [&](int code, const std::string& msg) {
        CommandResult res;
        res.report = header(cfg);
        res.report["error"] = msg;
        res.report["verdict"] = false;
        res.exit_code = code;
        res.table = "error: " + msg + "\n";
        return res;
    };
    try {
        if (cfg.command == "grgamma")
            return cmd_grgamma(cfg);
        if (cfg.command == "verify")
            return cmd_verify(cfg);
        if (cfg.command == "fgl")
            return cmd_fgl(cfg);
        if (cfg.command == "gamma-vs-ideal")
            return cmd_gamma_vs_ideal(cfg);
        return failure(usage, "unknown command " + cfg.command);
    } catch (const BudgetExceeded& e) {
        return failure(budget, e.what());
    } catch (const AssertionFailure& e) {
        return failure(refuted, e.what());
    } catch (const CertificateFailure& e) {
        return failure(refuted, e.what());
    } catch (const std::invalid_argument& e) {
        return failure(usage, e.what());
    } catch (const std::domain_error& e) {
        return failure(usage, e.what());
    }
}

json without_timings(json report)
{
    report.erase("timings");
    return report;
}

// ---------------------------------------------------------------------------

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"Gamma filtrations of representation rings of abelian p-groups", "gammafilt"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);

    auto common = [&](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"table", "json"}));
        sub->add_option("--out", cfg.out, "Write the report to this file");
        sub->add_option("--max-group-order", cfg.budget.max_group_order, "Budget: largest |G|");
        sub->add_option("--max-topdeg-budget", cfg.budget.max_topdeg, "Budget: largest topological degree");
    };
    auto group_opts = [&](CLI::App* sub) {
        sub->add_option("--p", cfg.p, "Prime");
        sub->add_option("--exponents", cfg.exponents, "Exponents r_i of Z/p^{r_i}, comma separated")
            ->delimiter(',');
    };

    auto* gr = app.add_subcommand("grgamma", "Associated graded ring of the gamma filtration");
    group_opts(gr);
    gr->add_option("--max-degree", cfg.max_topdeg, "Largest topological degree");
    common(gr);

    auto* ver = app.add_subcommand("verify", "Compare a preset presentation with the ground truth");
    ver->add_option("--preset", cfg.subcommand, "Preset name")->required();
    group_opts(ver);
    ver->add_option("--r", cfg.r);
    ver->add_option("--n", cfg.n);
    ver->add_option("--q", cfg.q);
    ver->add_option("--max-degree", cfg.max_topdeg, "Largest topological degree");
    ver->add_option("--presentation", cfg.presentation_file, "JSON file {\"vars\": n, \"relations\": [...]}");
    ver->add_option("--trunc", cfg.trunc, "y-degree truncation for series");
    ver->add_option("--v1-cap", cfg.v1_cap);
    ver->add_option("--saturation", cfg.saturation);
    common(ver);

    auto* fgl = app.add_subcommand("fgl", "Formal group law computations");
    fgl->require_subcommand(1);
    for (const char* op : {"pseries", "sr", "star", "y1p", "descent", "dickson"}) {
        auto* sub = fgl->add_subcommand(op);
        sub->add_option("--p", cfg.p, "Prime")->required();
        if (std::string(op) == "pseries" || std::string(op) == "sr")
            sub->add_option("--r", cfg.r);
        if (std::string(op) != "descent" && std::string(op) != "dickson")
            sub->add_option("--trunc", cfg.trunc, "y-degree truncation");
        if (std::string(op) == "descent") {
            sub->add_option("--v1-cap", cfg.v1_cap, "Terms with v1^k, k >= cap, vanish");
            sub->add_option("--saturation", cfg.saturation, "Allowed depth of division by v1");
        }
        common(sub);
        sub->callback([&cfg, op] { cfg.subcommand = op; });
    }

    auto* gvi = app.add_subcommand("gamma-vs-ideal", "Check Gamma^n = I^n");
    group_opts(gvi);
    gvi->add_option("--max-n", cfg.max_n, "Largest n");
    gvi->add_option("--extra-weight", cfg.extra_weight, "Weights above n included in Gamma^n");
    common(gvi);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return verified;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return verified;
    } catch (const CLI::CallForVersion&) {
        out << tool_version << "\n";
        return verified;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    }

    for (auto* sub : {gr, ver, fgl, gvi})
        if (sub->parsed())
            cfg.command = sub->get_name();

    const CommandResult res = dispatch(cfg);
    const std::string text = cfg.format == "json" ? res.report.dump(2) + "\n" : res.table;
    if (res.exit_code == usage && res.report.contains("error"))
        err << "error: " << res.report["error"].get<std::string>() << "\n";
    if (!cfg.out.empty()) {
        std::ofstream f(cfg.out);
        if (!f) {
            err << "error: cannot write " << cfg.out << "\n";
            return usage;
        }
        f << text;
    } else if (res.exit_code != usage) {
        out << text;
    }
    return res.exit_code;
}

} // namespace gammafilt::cli
