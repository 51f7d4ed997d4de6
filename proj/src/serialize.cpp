#include "csitdof/serialize.hpp"

#include "csitdof/errors.hpp"

#include <sstream>

namespace csitdof {

namespace {

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

std::size_t user_from_json(const Json& j, std::size_t k) {
    if (!j.is_number_integer()) throw ParseError("user numbers must be integers");
    const auto u = j.get<long long>();
    if (u < 1 || static_cast<std::size_t>(u) > k)
        throw ParseError("user " + std::to_string(u) + " outside 1.." + std::to_string(k));
    return static_cast<std::size_t>(u - 1);
}

UserSet users_from_json(const Json& j, std::size_t k) {
    if (!j.is_array()) throw ParseError("user list must be an array");
    UserSet out;
    for (const auto& u : j) out.push_back(user_from_json(u, k));
    std::sort(out.begin(), out.end());
    return out;
}

Json users_to_json(const UserSet& users) {
    Json out = Json::array();
    for (auto u : users) out.push_back(u + 1);
    return out;
}

std::size_t k_from_json(const Json& j) {
    const Json& k = field(j, "k");
    if (!k.is_number_integer() || k.get<long long>() < 1) throw ParseError("\"k\" must be a positive integer");
    const auto v = static_cast<std::size_t>(k.get<long long>());
    if (v > kMaxUsers) throw UnsupportedDimension("K = " + std::to_string(v) + " exceeds the supported maximum 6");
    return v;
}

Json rationals_to_json(const std::vector<Rational>& v) {
    Json out = Json::array();
    for (const auto& r : v) out.push_back(rational_to_json(r));
    return out;
}

Json doubles_of(const std::vector<Rational>& v) {
    Json out = Json::array();
    for (const auto& r : v) out.push_back(r.to_double());
    return out;
}

}  // namespace

Json rational_to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const Json& j) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
    throw ParseError("expected a rational string \"p/q\", got " + j.dump());
}

Json profile_to_json(const MarginalProfile& profile) {
    Json users = Json::array();
    for (const auto& t : profile.users())
        users.push_back({{"p", rational_to_json(t.p())}, {"d", rational_to_json(t.d())}, {"n", rational_to_json(t.n())}});
    return {{"type", "marginal"}, {"k", profile.k()}, {"users", users}};
}

Json profile_to_json(const JointProfile& joint) {
    Json mass = Json::object();
    for (const auto& [state, p] : joint.mass()) mass[to_string(state)] = rational_to_json(p);
    return {{"type", "joint"}, {"k", joint.k()}, {"mass", mass}};
}

AnyProfile profile_from_json(const Json& j) {
    const std::string type = field(j, "type").is_string() ? j.at("type").get<std::string>() : "";
    const std::size_t k = k_from_json(j);
    if (type == "marginal") {
        const Json& users = field(j, "users");
        if (!users.is_array() || users.size() != k)
            throw ParseError("\"users\" must list exactly " + std::to_string(k) + " triples");
        std::vector<MarginalTriple> triples;
        for (const auto& u : users) {
            const Rational p = rational_from_json(field(u, "p"));
            const Rational d = rational_from_json(field(u, "d"));
            triples.push_back(u.contains("n") ? MarginalTriple(p, d, rational_from_json(u.at("n")))
                                              : MarginalTriple::from_pd(p, d));
        }
        return MarginalProfile(std::move(triples));
    }
    if (type == "joint") {
        const Json& mass = field(j, "mass");
        if (!mass.is_object()) throw ParseError("\"mass\" must be an object keyed by joint states");
        std::map<JointState, Rational> m;
        for (const auto& [key, value] : mass.items()) {
            JointState s = joint_state_from_string(key);
            if (s.size() != k) throw ParseError("joint state \"" + key + "\" does not have length " + std::to_string(k));
            m[s] = m[s] + rational_from_json(value);
        }
        return JointProfile(k, std::move(m));
    }
    throw ParseError("profile \"type\" must be \"marginal\" or \"joint\"");
}

Json inequality_to_json(const LinearInequality& row, bool with_float) {
    Json out{{"coeffs", rationals_to_json(row.coeffs)}, {"rhs", rational_to_json(row.rhs)}, {"label", row.label}};
    if (with_float) {
        out["coeffs_float"] = doubles_of(row.coeffs);
        out["rhs_float"] = row.rhs.to_double();
    }
    return out;
}

LinearInequality inequality_from_json(const Json& j) {
    const Json& coeffs = field(j, "coeffs");
    if (!coeffs.is_array()) throw ParseError("\"coeffs\" must be an array");
    std::vector<Rational> c;
    for (const auto& x : coeffs) c.push_back(rational_from_json(x));
    const std::string label = j.contains("label") && j.at("label").is_string() ? j.at("label").get<std::string>() : "";
    return {std::move(c), rational_from_json(field(j, "rhs")), label};
}

Json hpolytope_to_json(const HPolytope& h, bool with_float) {
    Json rows = Json::array();
    for (const auto& r : h.rows()) rows.push_back(inequality_to_json(r, with_float));
    return {{"k", h.k()}, {"rows", rows}};
}

HPolytope hpolytope_from_json(const Json& j) {
    const std::size_t k = k_from_json(j);
    const Json& rows = field(j, "rows");
    if (!rows.is_array()) throw ParseError("\"rows\" must be an array");
    std::vector<LinearInequality> out;
    for (const auto& r : rows) out.push_back(inequality_from_json(r));
    return {k, std::move(out)};
}

Json vrep_to_json(const VRep& v) {
    Json out = Json::array();
    for (const auto& p : v.vertices) out.push_back(rationals_to_json(p.coords));
    return out;
}

VRep vrep_from_json(std::size_t k, const Json& j) {
    if (!j.is_array()) throw ParseError("vertex list must be an array");
    VRep v;
    v.k = k;
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != k) throw ParseError("vertex must have " + std::to_string(k) + " coordinates");
        std::vector<Rational> c;
        for (const auto& x : p) c.push_back(rational_from_json(x));
        v.vertices.emplace_back(std::move(c));
    }
    std::sort(v.vertices.begin(), v.vertices.end());
    v.vertices.erase(std::unique(v.vertices.begin(), v.vertices.end()), v.vertices.end());
    return v;
}

std::string vrep_to_csv(const VRep& v, bool with_float) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.k; ++i) os << (i ? "," : "") << 'd' << i + 1;
    if (with_float)
        for (std::size_t i = 0; i < v.k; ++i) os << ",d" << i + 1 << "_float";
    os << '\n';
    const std::vector<DoFPoint> order = v.k == 2 ? polygon_path(v) : v.vertices;
    for (const auto& p : order) {
        for (std::size_t i = 0; i < p.dim(); ++i) os << (i ? "," : "") << p[i].str();
        if (with_float)
            for (std::size_t i = 0; i < p.dim(); ++i) os << ',' << p[i].to_double();
        os << '\n';
    }
    return os.str();
}

Json schedule_to_json(const Schedule& s) {
    Json slots = Json::array();
    for (const auto& action : s.slots()) {
        if (const auto* zf = std::get_if<ZfAction>(&action)) {
            slots.push_back({{"type", "zf"}, {"serve", users_to_json(zf->served)}});
        } else if (const auto* mat = std::get_if<MatAction>(&action)) {
            slots.push_back({{"type", "mat"},
                             {"scheme", users_to_json(mat->scheme)},
                             {"phase", mat->phase},
                             {"recipients", users_to_json(mat->recipients)}});
        } else {
            slots.push_back({{"type", "single"}, {"user", std::get<SingleAction>(action).user + 1}});
        }
    }
    Json feedback = Json::array();
    for (const auto& f : s.feedback_plan()) feedback.push_back(to_string(f));
    return {{"k", s.k()}, {"slots", slots}, {"feedback", feedback}};
}

Schedule schedule_from_json(const Json& j) {
    const std::size_t k = k_from_json(j);
    const Json& slots = field(j, "slots");
    if (!slots.is_array()) throw ParseError("\"slots\" must be an array");
    std::vector<SlotAction> actions;
    for (const auto& slot : slots) {
        const Json& type = field(slot, "type");
        const std::string t = type.is_string() ? type.get<std::string>() : "";
        if (t == "zf") {
            actions.emplace_back(ZfAction{users_from_json(field(slot, "serve"), k)});
        } else if (t == "mat") {
            const Json& phase = field(slot, "phase");
            if (!phase.is_number_integer()) throw ParseError("\"phase\" must be an integer");
            actions.emplace_back(MatAction{users_from_json(field(slot, "scheme"), k), phase.get<int>(),
                                           users_from_json(field(slot, "recipients"), k)});
        } else if (t == "single") {
            actions.emplace_back(SingleAction{user_from_json(field(slot, "user"), k)});
        } else {
            throw ParseError("slot \"type\" must be zf, mat or single");
        }
    }
    return {k, std::move(actions)};
}

Json dof_to_json(const DoFPoint& p, bool with_float) {
    if (!with_float) return rationals_to_json(p.coords);
    return {{"exact", rationals_to_json(p.coords)}, {"float", doubles_of(p.coords)}};
}

Json sim_report_to_json(const SimReport& r) {
    Json users = Json::array();
    for (std::size_t i = 0; i < r.users.size(); ++i) {
        const auto& u = r.users[i];
        users.push_back({{"user", i + 1},
                         {"intended", u.intended},
                         {"decodable", u.decodable},
                         {"slots_used", u.slots_used},
                         {"delayed_required", u.delayed_required},
                         {"delayed_available", u.delayed_available},
                         {"perfect_required", u.perfect_required},
                         {"perfect_available", u.perfect_available}});
    }
    return {{"seed", r.seed},
            {"slots", r.slots},
            {"antennas", r.antennas},
            {"audit_pass", r.audit_pass},
            {"all_decodable", r.all_decodable},
            {"max_zf_leakage", r.max_zf_leakage},
            {"min_rank_margin", r.min_rank_margin},
            {"achieved_dof", rationals_to_json(r.achieved_dof.coords)},
            {"users", users}};
}

Json lemma_sweep_to_json(const LemmaSweep& s) {
    return {{"cases", s.cases}, {"min_slack", s.min_slack}, {"failures", s.failures}};
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace csitdof
