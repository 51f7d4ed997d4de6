#include "csitdof/cli.hpp"

#include "csitdof/achievability.hpp"
#include "csitdof/entropy_oracle.hpp"
#include "csitdof/errors.hpp"
#include "csitdof/mat_sim.hpp"
#include "csitdof/polytope.hpp"
#include "csitdof/region_outer.hpp"
#include "csitdof/serialize.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

namespace csitdof {

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

struct Options {
    std::optional<long> k;
    std::string sym_p;
    std::string sym_d;
    std::string profile;
    std::string pattern;
    std::string schedule;
    std::string out;
    std::string subset;
    std::string format = "json";
    std::optional<std::uint64_t> seed;
    std::size_t antennas = 0;
    std::size_t cases = 1000;
    bool joint = false;
    bool all = false;
    bool with_float = false;
    std::vector<std::string> files;
};

struct Source {
    MarginalProfile marginal;
    std::optional<JointProfile> joint;
    std::optional<CsitPattern> pattern;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text)) throw std::runtime_error("cannot write " + path);
}

void check_k(long k) {
    if (k < 1) throw ParseError("--k must be at least 1");
    if (static_cast<std::size_t>(k) > kMaxUsers)
        throw UnsupportedDimension("K = " + std::to_string(k) + " exceeds the supported maximum 6");
}

CsitPattern load_pattern(const std::string& path) {
    CsitPattern p = CsitPattern::parse(read_file(path));
    check_k(static_cast<long>(p.k()));
    return p;
}

Source load_source(const Options& o) {
    const int sources = int(!o.sym_p.empty() || !o.sym_d.empty()) + int(!o.profile.empty()) + int(!o.pattern.empty());
    if (sources != 1) throw ParseError("give exactly one of --sym-p/--sym-d, --profile or --pattern");

    if (!o.profile.empty() || !o.pattern.empty()) {
        Source s{MarginalProfile({MarginalTriple::from_pd(1, 0)}), std::nullopt, std::nullopt};
        if (!o.pattern.empty()) {
            s.pattern = load_pattern(o.pattern);
            s.joint = pattern_to_joint(*s.pattern);
            s.marginal = marginals_of_joint(*s.joint);
        } else {
            AnyProfile p = profile_from_json(parse_json(read_file(o.profile)));
            if (auto* j = std::get_if<JointProfile>(&p)) {
                s.joint = *j;
                s.marginal = marginals_of_joint(*j);
            } else {
                s.marginal = std::get<MarginalProfile>(p);
            }
        }
        if (o.k && static_cast<std::size_t>(*o.k) != s.marginal.k())
            throw ParseError("--k " + std::to_string(*o.k) + " disagrees with the input's K = " +
                             std::to_string(s.marginal.k()));
        return s;
    }

    if (!o.k) throw ParseError("--sym-p/--sym-d need --k");
    check_k(*o.k);
    const Rational p = o.sym_p.empty() ? Rational(0) : Rational::parse(o.sym_p);
    const Rational d = o.sym_d.empty() ? Rational(0) : Rational::parse(o.sym_d);
    return {MarginalProfile::symmetric(static_cast<std::size_t>(*o.k), MarginalTriple::from_pd(p, d)), std::nullopt,
            std::nullopt};
}

HPolytope region_of(const Source& s, bool joint) {
    if (!joint) return outer_bound(s.marginal);
    if (!s.joint) throw ParseError("--joint needs joint statistics (--pattern or a joint --profile)");
    return refined_outer_bound(*s.joint);
}

UserSet parse_subset(const std::string& text, std::size_t k) {
    UserSet out;
    if (text.empty() || text == "all") {
        for (std::size_t u = 0; u < k; ++u) out.push_back(u);
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        long u = 0;
        try {
            u = std::stol(item, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != item.size()) throw ParseError("bad user \"" + item + "\" in --subset");
        if (u < 1 || static_cast<std::size_t>(u) > k)
            throw ParseError("--subset user " + std::to_string(u) + " outside 1.." + std::to_string(k));
        out.push_back(static_cast<std::size_t>(u - 1));
    }
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end()) throw ParseError("--subset repeats a user");
    return out;
}

std::uint64_t resolve_seed(const Options& o) {
    if (o.seed) return *o.seed;
    const char* env = std::getenv("CSITDOF_SEED");
    if (env == nullptr || *env == '\0') return kDefaultSeed;
    const std::string text(env);
    std::size_t pos = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(text, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != text.size() || text.front() == '-')
        throw ParseError("CSITDOF_SEED must be a nonnegative integer, got \"" + text + "\"");
    return v;
}

const MarginalTriple& symmetric_triple(const Source& s) {
    if (!s.marginal.is_symmetric()) throw InvalidArgument("this command needs a symmetric profile");
    return s.marginal.user(0);
}

class Emitter {
public:
    Emitter(const Options& o, std::ostream& out) : o_(o), out_(out) {}
    void operator()(const std::string& text) const {
        if (o_.out.empty()) out_ << text;
        else write_file(o_.out, text);
    }

private:
    const Options& o_;
    std::ostream& out_;
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

int cmd_outer_bound(const Options& o, std::ostream& out) {
    const Source s = load_source(o);
    HPolytope h = region_of(s, o.joint);
    if (!o.all) h = remove_redundant(h);
    if (o.format == "csv") {
        std::ostringstream os;
        for (std::size_t i = 0; i < h.k(); ++i) os << 'a' << i + 1 << ',';
        os << "rhs,label\n";
        for (const auto& r : h.rows()) {
            for (const auto& c : r.coeffs) os << c.str() << ',';
            os << r.rhs.str() << ',' << r.label << '\n';
        }
        Emitter(o, out)(os.str());
    } else {
        Emitter(o, out)(dump(hpolytope_to_json(h, o.with_float)));
    }
    return kExitOk;
}

int cmd_vertices(const Options& o, std::ostream& out) {
    const Source s = load_source(o);
    const VRep v = enumerate_vertices(region_of(s, o.joint));
    if (o.format == "csv") {
        Emitter(o, out)(vrep_to_csv(v, o.with_float));
    } else if (o.with_float) {
        Json floats = Json::array();
        for (const auto& p : v.vertices) floats.push_back(dof_to_json(p, true).at("float"));
        Emitter(o, out)(dump(Json{{"vertices", vrep_to_json(v)}, {"vertices_float", floats}}));
    } else {
        Emitter(o, out)(dump(vrep_to_json(v)));
    }
    return kExitOk;
}

int cmd_achievable(const Options& o, std::ostream& out) {
    const Source s = load_source(o);
    const MarginalTriple& t = symmetric_triple(s);
    const std::size_t k = s.marginal.k();
    if (k < 2) throw InvalidArgument("achievable needs K >= 2");

    Json thresholds = Json::array();
    for (std::size_t j = 2; j <= k; ++j)
        thresholds.push_back({{"users", j}, {"lambda_d_min", rational_to_json(lambda_d_min(static_cast<int>(j), 1))}});

    Json corners = Json::array();
    for (const auto& subset : nonempty_subsets(k)) {
        Json entry{{"subset", Json::array()}};
        for (auto u : subset) entry["subset"].push_back(u + 1);
        entry["dof"] = dof_to_json(corner_point_symmetric(k, t.p(), subset), o.with_float);
        try {
            const Synthesis syn = synthesize_schedule(k, t.p(), t.d(), subset);
            entry["synthesizable"] = true;
            entry["period"] = syn.schedule.size();
        } catch (const NotSynthesizable& e) {
            entry["synthesizable"] = false;
            entry["reason"] = e.what();
        }
        corners.push_back(std::move(entry));
    }

    Json j{{"k", k},
           {"lambda_p", rational_to_json(t.p())},
           {"lambda_d", rational_to_json(t.d())},
           {"lambda_n", rational_to_json(t.n())},
           {"regime", to_string(classify_regime(k, t))},
           {"scheme_thresholds", thresholds},
           {"corner_points", corners}};
    Emitter(o, out)(dump(j));
    return kExitOk;
}

int cmd_synthesize(const Options& o, std::ostream& out, std::ostream& err) {
    const Source s = load_source(o);
    const MarginalTriple& t = symmetric_triple(s);
    const std::size_t k = s.marginal.k();
    const UserSet subset = parse_subset(o.subset, k);

    std::optional<Synthesis> syn;
    try {
        syn = synthesize_schedule(k, t.p(), t.d(), subset);
    } catch (const NotSynthesizable& e) {
        err << "not synthesizable: " << e.what() << '\n';
        return kExitNotSynthesizable;
    }

    Json j{{"k", k}, {"subset", Json::array()}};
    for (auto u : subset) j["subset"].push_back(u + 1);
    j["period"] = syn->schedule.size();
    j["zf_slots"] = syn->zf_slots;
    j["mat_slots"] = syn->mat_slots;
    j["dof"] = dof_to_json(syn->dof, o.with_float);
    j["marginals"] = profile_to_json(marginals_of_joint(pattern_to_joint(syn->pattern)))["users"];

    const Json schedule = schedule_to_json(syn->schedule);
    if (o.out.empty()) {
        j["pattern"] = syn->pattern.to_text();
        j["schedule"] = schedule;
    } else {
        const std::string pattern_path = o.out + ".pattern.txt";
        const std::string schedule_path = o.out + ".schedule.json";
        write_file(pattern_path, syn->pattern.to_text());
        write_file(schedule_path, dump(schedule));
        j["files"] = {{"pattern", pattern_path}, {"schedule", schedule_path}};
    }
    out << dump(j);
    return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
    const std::uint64_t seed = resolve_seed(o);
    std::optional<Schedule> schedule;
    std::optional<CsitPattern> pattern;
    if (!o.schedule.empty()) {
        if (o.pattern.empty()) throw ParseError("--schedule needs --pattern");
        pattern = load_pattern(o.pattern);
        schedule = schedule_from_json(parse_json(read_file(o.schedule)));
    } else {
        const Source s = load_source(o);
        if (s.pattern) throw ParseError("--pattern needs --schedule");
        const MarginalTriple& t = symmetric_triple(s);
        Synthesis syn = synthesize_schedule(s.marginal.k(), t.p(), t.d(), parse_subset(o.subset, s.marginal.k()));
        schedule = std::move(syn.schedule);
        pattern = std::move(syn.pattern);
    }

    try {
        const SimReport r = verify_schedule(*schedule, *pattern, seed, o.antennas);
        Emitter(o, out)(dump(sim_report_to_json(r)));
        return r.all_decodable ? kExitOk : kExitCheckFailed;
    } catch (const FeedbackViolation& e) {
        Emitter(o, out)(dump(Json{{"seed", seed},
                                  {"audit_pass", false},
                                  {"violation", {{"slot", e.slot()}, {"message", e.what()}}}}));
        return kExitCheckFailed;
    }
}

std::optional<std::string> first_violated(const HPolytope& h, const DoFPoint& p) {
    for (const auto& r : h.rows())
        if (!satisfies(r, p)) return r.label + ": " + r.to_string();
    return std::nullopt;
}

int cmd_compare(const Options& o, std::ostream& out) {
    if (o.files.size() != 2) throw ParseError("compare needs exactly two pattern files");
    const CsitPattern a = load_pattern(o.files[0]);
    const CsitPattern b = load_pattern(o.files[1]);
    if (a.k() != b.k()) throw DimensionMismatch("patterns have different K");

    const JointProfile ja = pattern_to_joint(a);
    const JointProfile jb = pattern_to_joint(b);
    const HPolytope ra = refined_outer_bound(ja);
    const HPolytope rb = refined_outer_bound(jb);
    const bool same_marginals = marginals_of_joint(ja) == marginals_of_joint(jb);
    const bool a_in_b = region_subset(ra, rb);
    const bool b_in_a = region_subset(rb, ra);

    Json j{{"k", a.k()},
           {"marginals_equal", same_marginals},
           {"a_subset_b", a_in_b},
           {"b_subset_a", b_in_a},
           {"equal", a_in_b && b_in_a}};
    if (!same_marginals) j["note"] = "marginal statistics differ";
    j["witness"] = nullptr;
    auto add_witness = [&](const HPolytope& larger, const HPolytope& smaller, const char* outside) {
        // Lexicographically largest offending vertex, so the pick is stable.
        const VRep v = enumerate_vertices(larger);
        for (auto it = v.vertices.rbegin(); it != v.vertices.rend(); ++it) {
            if (contains_point(smaller, *it)) continue;
            j["witness"] = {{"point", dof_to_json(*it, o.with_float)}, {"outside", outside}};
            if (auto row = first_violated(smaller, *it)) j["witness"]["violates"] = *row;
            break;
        }
    };
    if (b_in_a && !a_in_b) add_witness(ra, rb, "b");
    else if (a_in_b && !b_in_a) add_witness(rb, ra, "a");
    else if (!a_in_b && !b_in_a) add_witness(ra, rb, "b");
    Emitter(o, out)(dump(j));
    return kExitOk;
}

int cmd_verify_lemmas(const Options& o, std::ostream& out) {
    const std::uint64_t seed = resolve_seed(o);
    LemmaSweep sweep = lemma1_sweep(o.cases, o.cases, seed);

    auto record = [&sweep](double slack, const std::string& what, bool ok) {
        ++sweep.cases;
        sweep.min_slack = std::min(sweep.min_slack, slack);
        if (!ok) sweep.failures.push_back(what + ": slack " + std::to_string(slack));
    };
    const double fair[] = {0.5, 0.5};
    const DiscreteJoint bits({2, 2, 2}, std::vector<double>(8, 0.125));
    record(check_lemma1_discrete(bits), "independent bits", std::abs(check_lemma1_discrete(bits)) <= 1e-9);
    const double cond = check_lemma1_discrete_conditional(bits.with_independent(fair));
    record(cond, "independent bits given independent A", std::abs(cond) <= 1e-9);
    const GaussianJoint diag(Eigen::Vector4d(1.0, 2.0, 3.0, 4.0).asDiagonal().toDenseMatrix());
    record(check_lemma1_gaussian(diag), "diagonal Gaussian", std::abs(check_lemma1_gaussian(diag)) <= 1e-9);

    Json slopes = Json::array();
    const std::vector<double> grid = geometric_grid(1e2, 1e8, 7);
    const std::pair<CsitState, CsitState> pairs[] = {
        {CsitState::N, CsitState::P}, {CsitState::P, CsitState::P}, {CsitState::N, CsitState::N}, {CsitState::P, CsitState::N}};
    for (const auto& [m, q] : pairs) {
        const double slope = check_lemma2_gaussian(m, q, grid, seed).slope;
        const bool ok = q == CsitState::P ? slope <= 1.05 : std::abs(slope) <= 0.05;
        const std::string name = std::string(1, to_char(m)) + to_char(q);
        slopes.push_back({{"m", std::string(1, to_char(m))}, {"q", std::string(1, to_char(q))}, {"slope", slope}, {"ok", ok}});
        if (!ok) sweep.failures.push_back("prelog " + name + ": slope " + std::to_string(slope));
    }

    Json j = lemma_sweep_to_json(sweep);
    j["seed"] = seed;
    j["prelog"] = slopes;
    Emitter(o, out)(dump(j));
    return sweep.failures.empty() ? kExitOk : kExitCheckFailed;
}

void add_source_options(CLI::App* sub, Options& o) {
    sub->add_option("--k", o.k, "number of users (with --sym-p/--sym-d)");
    sub->add_option("--sym-p", o.sym_p, "symmetric lambda_P, e.g. 1/3");
    sub->add_option("--sym-d", o.sym_d, "symmetric lambda_D, e.g. 2/3");
    sub->add_option("--profile", o.profile, "profile JSON (marginal or joint)");
    sub->add_option("--pattern", o.pattern, "CSIT pattern text file");
}

void add_output_options(CLI::App* sub, Options& o, bool csv) {
    sub->add_option("--out", o.out, "write to this file instead of stdout");
    sub->add_flag("--float", o.with_float, "add decimal approximations");
    if (csv) sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"DoF regions of the K-user MISO broadcast channel with hybrid CSIT", "csitdof"};
    app.require_subcommand(1);

    auto* outer = app.add_subcommand("outer-bound", "outer-bound inequalities (irredundant unless --all)");
    add_source_options(outer, o);
    add_output_options(outer, o, true);
    outer->add_flag("--joint", o.joint, "add joint-statistics bounds (K = 3)");
    outer->add_flag("--all", o.all, "list every generated row, redundant or not");

    auto* vertices = app.add_subcommand("vertices", "exact vertices of the outer bound");
    add_source_options(vertices, o);
    add_output_options(vertices, o, true);
    vertices->add_flag("--joint", o.joint, "add joint-statistics bounds (K = 3)");

    auto* achievable = app.add_subcommand("achievable", "regime and corner points of a symmetric profile");
    add_source_options(achievable, o);
    add_output_options(achievable, o, false);

    auto* synth = app.add_subcommand("synthesize", "build a CSIT pattern and schedule for a corner point");
    add_source_options(synth, o);
    synth->add_option("--subset", o.subset, "users served by MAT, e.g. 1,2,3 (default all)");
    synth->add_option("--out", o.out, "file prefix for <prefix>.pattern.txt and <prefix>.schedule.json");
    synth->add_flag("--float", o.with_float, "add decimal approximations");

    auto* sim = app.add_subcommand("simulate", "run a schedule on random channels and check decodability");
    add_source_options(sim, o);
    sim->add_option("--schedule", o.schedule, "schedule JSON (with --pattern)");
    sim->add_option("--subset", o.subset, "corner subset when synthesizing from --sym-p/--sym-d");
    sim->add_option("--seed", o.seed, "RNG seed (default: $CSITDOF_SEED, then 1)");
    sim->add_option("--antennas", o.antennas, "transmit antennas (default K)");
    sim->add_option("--out", o.out, "write the report to this file");

    auto* cmp = app.add_subcommand("compare", "compare the joint-refined regions of two patterns");
    cmp->add_option("patterns", o.files, "two pattern files")->expected(2);
    cmp->add_flag("--float", o.with_float, "add decimal approximations");
    cmp->add_option("--out", o.out, "write to this file instead of stdout");

    auto* lemmas = app.add_subcommand("verify-lemmas", "randomized checks of the entropy lemmas");
    lemmas->add_option("--cases", o.cases, "random instances per family")->check(CLI::NonNegativeNumber);
    lemmas->add_option("--seed", o.seed, "RNG seed (default: $CSITDOF_SEED, then 1)");
    lemmas->add_option("--out", o.out, "write to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitParse;
    }

    try {
        if (*outer) return cmd_outer_bound(o, out);
        if (*vertices) return cmd_vertices(o, out);
        if (*achievable) return cmd_achievable(o, out);
        if (*synth) return cmd_synthesize(o, out, err);
        if (*sim) return cmd_simulate(o, out);
        if (*cmp) return cmd_compare(o, out);
        if (*lemmas) return cmd_verify_lemmas(o, out);
        return kExitInternal;
    } catch (const UnsupportedDimension& e) {
        err << "error: " << e.what() << '\n';
        return kExitDimension;
    } catch (const NotSynthesizable& e) {
        err << "not synthesizable: " << e.what() << '\n';
        return kExitNotSynthesizable;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace csitdof
