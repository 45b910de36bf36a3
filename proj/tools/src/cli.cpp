#include "ssfm_cli/cli.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"
#include "ssfm/characterize.hpp"
#include "ssfm/polytope.hpp"
#include "ssfm/rotations.hpp"
#include "ssfm/stability.hpp"
#include "ssfm/strongstab.hpp"

namespace ssfm::cli {

namespace {

using nlohmann::ordered_json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Outcome {
    int code = kExitOk;
    ordered_json result = ordered_json::object();
    std::string text;
};

class Session {
public:
    explicit Session(bool json) : json_(json) {}

    std::string read(const std::string& role, const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw UsageError("cannot read " + role + " file '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        inputs_[role] = {{"path", path}, {"fnv1a64", fnv1a_hex(ss.str())}};
        return ss.str();
    }

    Market load_market(const std::string& path) {
        std::vector<std::string> warnings;
        Market m = parse_market(read("market", path), &warnings);
        for (auto& w : warnings) diagnostics_.push_back(std::move(w));
        return m;
    }

    FractionalMatching load_fraction(const Market& m, const std::string& role, const std::string& path) {
        return parse_fractional(m, read(role, path));
    }

    void note_input(const std::string& role, ordered_json value) { inputs_[role] = std::move(value); }
    void diagnose(std::string msg) { diagnostics_.push_back(std::move(msg)); }

    void emit(const std::string& command, const Outcome& o, std::ostream& out) const {
        if (json_) {
            ordered_json report;
            report["command"] = command;
            report["inputs"] = inputs_;
            report["result"] = o.result;
            report["diagnostics"] = diagnostics_;
            out << report.dump(2) << '\n';
            return;
        }
        for (const auto& d : diagnostics_) out << "note: " << d << '\n';
        out << o.text;
    }

private:
    bool json_;
    ordered_json inputs_ = ordered_json::object();
    std::vector<std::string> diagnostics_;
};

ordered_json matching_json(const Market& m, const Matching& mu) {
    ordered_json j = ordered_json::object();
    for (FirmIndex f = 0; f < m.num_firms(); ++f) {
        ordered_json ws = ordered_json::array();
        for (WorkerIndex w : mu.workers_of(f)) ws.push_back(m.worker_name(w));
        j[m.firm_name(f)] = ws;
    }
    return j;
}

ordered_json fraction_json(const FractionalMatching& x) {
    ordered_json rows = ordered_json::array();
    for (FirmIndex f = 0; f < x.num_firms(); ++f) {
        ordered_json row = ordered_json::array();
        for (WorkerIndex w = 0; w < x.num_workers(); ++w) row.push_back(x.at(f, w).str());
        rows.push_back(row);
    }
    return rows;
}

ordered_json rotation_json(const Market& m, const Rotation& r) {
    ordered_json firms = ordered_json::array();
    ordered_json workers = ordered_json::array();
    for (FirmIndex f : r.firms) firms.push_back(m.firm_name(f));
    for (WorkerIndex w : r.workers) workers.push_back(m.worker_name(w));
    return {{"firms", firms}, {"workers", workers}};
}

ordered_json factors_json(const Market& m, const StrongStabilityReport::PairFactors& p) {
    return {{"firm", m.firm_name(p.firm)},
            {"worker", m.worker_name(p.worker)},
            {"firm_factor", p.firm_factor.str()},
            {"worker_factor", p.worker_factor.str()},
            {"product", p.product.str()}};
}

std::string pair_name(const Market& m, FirmIndex f, WorkerIndex w) {
    return "(" + m.firm_name(f) + "," + m.worker_name(w) + ")";
}

std::string matrix_text(const FractionalMatching& x) {
    std::ostringstream s;
    std::size_t width = 1;
    for (FirmIndex f = 0; f < x.num_firms(); ++f) {
        for (WorkerIndex w = 0; w < x.num_workers(); ++w) width = std::max(width, x.at(f, w).str().size());
    }
    for (FirmIndex f = 0; f < x.num_firms(); ++f) {
        s << "  ";
        for (WorkerIndex w = 0; w < x.num_workers(); ++w) {
            s << (w == 0 ? "" : " ") << std::setw(static_cast<int>(width)) << x.at(f, w).str();
        }
        s << '\n';
    }
    return s.str();
}

// Infeasible points make check and decompose fail with the first violation.
std::optional<Outcome> infeasible_outcome(const Market& m, const FractionalMatching& x) {
    const ConstraintReport rep = check_scp(m, x);
    if (rep.feasible()) return std::nullopt;
    Outcome o;
    o.code = kExitPropertyFails;
    ordered_json vs = ordered_json::array();
    for (const auto& v : rep.violations) {
        vs.push_back({{"constraint", to_string(m, v.id)}, {"lhs", v.lhs.str()}, {"rhs", v.rhs.str()}});
    }
    o.result = {{"feasible", false}, {"violations", vs}};
    const Violation& first = rep.violations.front();
    o.text = "infeasible: " + to_string(m, first.id) + " has lhs " + first.lhs.str() + " against rhs " +
             first.rhs.str() + "\n";
    return o;
}

Outcome cmd_solve(Session& s, const std::string& market_path, const std::string& side_name) {
    const Market m = s.load_market(market_path);
    const Side side = side_name == "workers" ? Side::Workers : Side::Firms;
    const Matching mu = deferred_acceptance(m, side);
    const FractionalMatching x = incidence_vector(m, mu);
    Outcome o;
    o.result = {{"side", side_name}, {"matching", matching_json(m, mu)}, {"incidence", fraction_json(x)}};
    o.text = side_name + "-proposing deferred acceptance\nmatching: " + to_string(m, mu) + "\nincidence:\n" +
             matrix_text(x);
    return o;
}

Outcome cmd_check(Session& s, const std::string& market_path, const std::string& frac_path) {
    const Market m = s.load_market(market_path);
    const FractionalMatching x = s.load_fraction(m, "fraction", frac_path);
    if (auto bad = infeasible_outcome(m, x)) return *bad;

    const StrongStabilityReport ss = strong_stability_check(m, x);
    const ExtremePointResult ep = is_extreme_point(m, x);
    Outcome o;
    o.code = ss.overall ? kExitOk : kExitPropertyFails;
    ordered_json pairs = ordered_json::array();
    for (const auto& p : ss.pairs) pairs.push_back(factors_json(m, p));
    o.result = {{"feasible", true},
                {"strongly_stable", ss.overall},
                {"integral", x.is_integral()},
                {"vertex", ep.is_vertex},
                {"tight_rank", ep.rank},
                {"dimension", ep.dimension},
                {"pairs", pairs}};
    if (const auto* w = ss.first_failure()) o.result["witness"] = factors_json(m, *w);

    std::ostringstream t;
    t << "feasible: yes\n";
    t << "pair      firm-factor  worker-factor  product\n";
    for (const auto& p : ss.pairs) {
        t << std::left << std::setw(10) << pair_name(m, p.firm, p.worker) << std::setw(13) << p.firm_factor.str()
          << std::setw(15) << p.worker_factor.str() << p.product.str() << '\n';
    }
    if (const auto* w = ss.first_failure()) {
        t << "strongly stable: no, witness " << pair_name(m, w->firm, w->worker) << " product " << w->product.str()
          << '\n';
    } else {
        t << "strongly stable: yes\n";
    }
    t << "integral: " << (x.is_integral() ? "yes" : "no") << '\n';
    t << "vertex: " << (ep.is_vertex ? "yes" : "no") << " (tight rank " << ep.rank << " of " << ep.dimension << ")\n";
    o.text = t.str();
    return o;
}

Outcome cmd_decompose(Session& s, const std::string& market_path, const std::string& frac_path) {
    const Market m = s.load_market(market_path);
    const FractionalMatching x = s.load_fraction(m, "fraction", frac_path);
    if (auto bad = infeasible_outcome(m, x)) return *bad;

    Outcome o;
    const Certification c = certify_strongly_stable(m, x);
    if (const auto* r = std::get_if<Refusal>(&c)) {
        o.code = kExitPropertyFails;
        o.result = {{"strongly_stable", false}, {"witness", factors_json(m, r->witness)}};
        o.text = "not strongly stable: " + pair_name(m, r->witness.firm, r->witness.worker) + " has factors " +
                 r->witness.firm_factor.str() + " and " + r->witness.worker_factor.str() + ", product " +
                 r->witness.product.str() + "\n";
        return o;
    }
    const auto& cert = std::get<HullCertificate>(c);
    const Decomposition d = decompose(m, x);

    ordered_json terms = ordered_json::array();
    std::ostringstream t;
    t << "decomposition:\n";
    for (const auto& term : d.terms) {
        terms.push_back({{"weight", term.weight.str()}, {"matching", matching_json(m, term.matching)}});
        t << "  " << std::left << std::setw(8) << term.weight.str() << to_string(m, term.matching) << '\n';
    }
    ordered_json rotations = ordered_json::array();
    for (const auto& r : cert.rotations) rotations.push_back(rotation_json(m, r));
    ordered_json cterms = ordered_json::array();
    t << "certificate base " << to_string(m, cert.base) << '\n';
    for (std::size_t i = 0; i < cert.rotations.size(); ++i) {
        t << "  rotation " << i << ": " << to_string(m, cert.rotations[i]) << '\n';
    }
    for (const auto& term : cert.terms) {
        cterms.push_back({{"rotations", term.rotation_ids}, {"weight", term.weight.str()}});
        t << "  " << std::left << std::setw(8) << term.weight.str() << "K={";
        for (std::size_t i = 0; i < term.rotation_ids.size(); ++i) t << (i ? "," : "") << term.rotation_ids[i];
        t << "}\n";
    }
    o.result = {{"strongly_stable", true},
                {"terms", terms},
                {"certificate",
                 {{"base", matching_json(m, cert.base)}, {"rotations", rotations}, {"terms", cterms}}}};
    o.text = t.str();
    return o;
}

Outcome cmd_rotations(Session& s, const std::string& market_path, const std::string& mu_path) {
    const Market m = s.load_market(market_path);
    Matching mu;
    if (mu_path.empty()) {
        mu = deferred_acceptance(m, Side::Firms);
    } else {
        mu = matching_from_incidence(m, s.load_fraction(m, "mu", mu_path));
    }
    Outcome o;
    if (!is_stable(m, mu)) {
        o.code = kExitPropertyFails;
        ordered_json bps = ordered_json::array();
        std::string text = "matching " + to_string(m, mu) + " is not stable:\n";
        for (const auto& bp : blocking_pairs(m, mu)) {
            bps.push_back({{"firm", m.firm_name(bp.firm)}, {"worker", m.worker_name(bp.worker)},
                           {"reason", to_string(bp.reason)}});
            text += "  " + pair_name(m, bp.firm, bp.worker) + " " + to_string(bp.reason) + "\n";
        }
        o.result = {{"stable", false}, {"base", matching_json(m, mu)}, {"blocking_pairs", bps}};
        o.text = text;
        return o;
    }
    const ReducedProfile rp = reduce_profile(m, mu);
    const RotationSet phi = find_cycles(rp);

    ordered_json firms = ordered_json::object();
    ordered_json workers = ordered_json::object();
    std::ostringstream t;
    t << "base: " << to_string(m, mu) << "\nreduced lists:\n";
    for (FirmIndex f = 0; f < m.num_firms(); ++f) {
        ordered_json l = ordered_json::array();
        t << "  " << m.firm_name(f) << ":";
        for (WorkerIndex w : rp.market.firm_prefs(f)) {
            l.push_back(m.worker_name(w));
            t << ' ' << m.worker_name(w);
        }
        t << '\n';
        firms[m.firm_name(f)] = l;
    }
    for (WorkerIndex w = 0; w < m.num_workers(); ++w) {
        ordered_json l = ordered_json::array();
        t << "  " << m.worker_name(w) << ":";
        for (FirmIndex f : rp.market.worker_prefs(w)) {
            l.push_back(m.firm_name(f));
            t << ' ' << m.firm_name(f);
        }
        t << '\n';
        workers[m.worker_name(w)] = l;
    }
    ordered_json rots = ordered_json::array();
    t << "rotations: " << phi.size() << '\n';
    for (const auto& r : phi) {
        ordered_json rj = rotation_json(m, r);
        const Matching next = apply_cycle(m, mu, r);
        rj["result"] = matching_json(m, next);
        rots.push_back(rj);
        t << "  " << to_string(m, r) << " -> " << to_string(m, next) << '\n';
    }
    o.result = {{"stable", true},
                {"base", matching_json(m, mu)},
                {"reduced", {{"firms", firms}, {"workers", workers}}},
                {"rotations", rots}};
    o.text = t.str();
    return o;
}

Outcome cmd_stable_all(Session& s, const std::string& market_path, const std::string& method, std::uint64_t cap) {
    const Market m = s.load_market(market_path);
    const std::vector<Matching> all =
        method == "rotations" ? enumerate_stable_via_rotations(m) : enumerate_stable_bruteforce(m, cap);
    Outcome o;
    ordered_json list = ordered_json::array();
    std::ostringstream t;
    t << all.size() << " stable matchings (" << method << ")\n";
    for (const auto& mu : all) {
        list.push_back(matching_json(m, mu));
        t << "  " << to_string(m, mu) << '\n';
    }
    const bool rht = check_rural_hospital(m, all);
    if (!rht) o.code = kExitPropertyFails;
    t << "rural hospital property: " << (rht ? "holds" : "fails") << '\n';
    o.result = {{"method", method}, {"count", all.size()}, {"matchings", list}, {"rural_hospital", rht}};
    o.text = t.str();
    return o;
}

Outcome cmd_verify(Session& s, const std::string& market_path, const std::vector<std::size_t>& random,
                   std::uint64_t seed, std::size_t samples, bool complete) {
    Market m;
    if (!random.empty()) {
        const ListDraw draw = complete ? ListDraw::Complete : ListDraw::Subset;
        m = gen_random_market(random[0], random[1], random[2], random[3], draw);
        s.note_input("random", {{"seed", random[0]},
                                {"firms", random[1]},
                                {"workers", random[2]},
                                {"qmax", random[3]},
                                {"lists", complete ? "complete" : "subset"}});
    } else {
        m = s.load_market(market_path);
    }
    const CharacterizationReport rep = verify_characterization(m, seed, samples);
    Outcome o;
    o.code = rep.ok() ? kExitOk : kExitPropertyFails;
    o.result = {{"seed", seed},
                {"samples", samples},
                {"stable_matchings", rep.stable_matchings},
                {"hull_samples", rep.hull_samples},
                {"certified", rep.certified},
                {"candidates", rep.candidates},
                {"candidates_outside", rep.candidates_outside},
                {"vertices", rep.vertices},
                {"fractional_vertices", rep.fractional_vertices},
                {"almost_integral_checked", rep.almost_integral_checked},
                {"counterexamples", rep.counterexamples}};
    std::ostringstream t;
    t << "stable matchings:      " << rep.stable_matchings << '\n'
      << "hull samples:          " << rep.hull_samples << '\n'
      << "certificates checked:  " << rep.certified << '\n'
      << "scp candidates:        " << rep.candidates << " (outside every hull " << rep.candidates_outside << ")\n"
      << "vertices reached:      " << rep.vertices << " (fractional " << rep.fractional_vertices << ")\n"
      << "almost-integral:       " << rep.almost_integral_checked << '\n'
      << "counterexamples:       " << rep.counterexamples.size() << '\n';
    for (const auto& c : rep.counterexamples) t << "  " << c << '\n';
    o.text = t.str();
    return o;
}

Outcome cmd_gen(Session& s, std::uint64_t seed, std::size_t nf, std::size_t nw, std::size_t qmax, bool complete) {
    const Market m = gen_random_market(seed, nf, nw, qmax, complete ? ListDraw::Complete : ListDraw::Subset);
    s.note_input("random", {{"seed", seed}, {"firms", nf}, {"workers", nw}, {"qmax", qmax},
                            {"lists", complete ? "complete" : "subset"}});
    Outcome o;
    o.text = serialize_market(m);
    o.result = {{"market", o.text}, {"acceptable_pairs", acceptable_pairs(m).size()}};
    return o;
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << h;
    return s.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Strongly stable fractional matchings in many-to-one markets", "ssfm"};
    app.require_subcommand(1);
    bool json = false;
    app.add_flag("--json", json, "Emit the JSON report instead of text");

    std::string market;
    std::string frac;
    std::string side = "firms";
    std::string mu_path;
    std::string method = "brute";
    std::uint64_t cap = kDefaultEnumerationCap;
    std::vector<std::size_t> random;
    std::uint64_t seed = 1;
    std::size_t samples = 100;
    bool complete = false;
    std::uint64_t gen_seed = 0;
    std::size_t nf = 0;
    std::size_t nw = 0;
    std::size_t qmax = 0;

    auto* solve = app.add_subcommand("solve", "Deferred acceptance");
    solve->add_option("market", market, "Market file")->required();
    solve->add_option("--side", side, "Proposing side")->check(CLI::IsMember({"firms", "workers"}));

    auto* check = app.add_subcommand("check", "Feasibility, strong-stability factors and vertex status");
    check->add_option("market", market, "Market file")->required();
    check->add_option("fraction", frac, "Fraction file")->required();

    auto* decomp = app.add_subcommand("decompose", "Ordered decomposition and hull certificate");
    decomp->add_option("market", market, "Market file")->required();
    decomp->add_option("fraction", frac, "Fraction file")->required();

    auto* rot = app.add_subcommand("rotations", "Reduced lists and rotations at a stable matching");
    rot->add_option("market", market, "Market file")->required();
    rot->add_option("--mu", mu_path, "0/1 fraction file of the base matching (default firm-optimal)");

    auto* all = app.add_subcommand("stable-all", "All stable matchings");
    all->add_option("market", market, "Market file")->required();
    all->add_option("--method", method, "Enumeration method")->check(CLI::IsMember({"brute", "rotations"}));
    all->add_option("--cap", cap, "Brute-force candidate cap");

    auto* verify = app.add_subcommand("verify", "Characterization harness");
    auto* verify_market = verify->add_option("market", market, "Market file");
    auto* verify_random = verify->add_option("--random", random, "Generate: seed firms workers qmax")->expected(4);
    verify_market->excludes(verify_random);
    verify->add_option("--seed", seed, "Harness seed");
    verify->add_option("--samples", samples, "Samples per market");
    verify->add_flag("--complete", complete, "Generated agents rank the whole other side");

    auto* gen = app.add_subcommand("gen", "Random market");
    gen->add_option("seed", gen_seed)->required();
    gen->add_option("firms", nf)->required()->check(CLI::PositiveNumber);
    gen->add_option("workers", nw)->required()->check(CLI::PositiveNumber);
    gen->add_option("qmax", qmax)->required()->check(CLI::PositiveNumber);
    gen->add_flag("--complete", complete, "Agents rank the whole other side");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    std::vector<const char*> argv{"ssfm"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    Session session(json);
    try {
        Outcome o;
        std::string name;
        if (solve->parsed()) {
            name = "solve";
            o = cmd_solve(session, market, side);
        } else if (check->parsed()) {
            name = "check";
            o = cmd_check(session, market, frac);
        } else if (decomp->parsed()) {
            name = "decompose";
            o = cmd_decompose(session, market, frac);
        } else if (rot->parsed()) {
            name = "rotations";
            o = cmd_rotations(session, market, mu_path);
        } else if (all->parsed()) {
            name = "stable-all";
            o = cmd_stable_all(session, market, method, cap);
        } else if (verify->parsed()) {
            if (market.empty() && random.empty()) throw UsageError("verify needs a market file or --random");
            if (!random.empty() && (random[1] == 0 || random[2] == 0 || random[3] == 0)) {
                throw UsageError("--random sizes must be positive");
            }
            name = "verify";
            o = cmd_verify(session, market, random, seed, samples, complete);
        } else {
            name = "gen";
            o = cmd_gen(session, gen_seed, nf, nw, qmax, complete);
        }
        session.emit(name, o, out);
        return o.code;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InvalidArgument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitUsage;
    } catch (const EnumerationCapExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitPropertyFails;
    }
}

}  // namespace ssfm::cli
