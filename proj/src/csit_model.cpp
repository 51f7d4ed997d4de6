#include "csitdof/csit_model.hpp"

#include "csitdof/errors.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace csitdof {

namespace {

void check_probability(const Rational& x, const char* name) {
    if (x < Rational(0) || x > Rational(1))
        throw InvalidArgument(std::string(name) + " = " + x.pretty() + " is not in [0,1]");
}

void check_user_count(std::size_t k) {
    if (k == 0) throw InvalidArgument("user count must be at least 1");
}

}  // namespace

char to_char(CsitState s) {
    switch (s) {
        case CsitState::P: return 'P';
        case CsitState::D: return 'D';
        case CsitState::N: return 'N';
    }
    return '?';
}

CsitState state_from_char(char c) {
    switch (c) {
        case 'P': return CsitState::P;
        case 'D': return CsitState::D;
        case 'N': return CsitState::N;
        default: break;
    }
    throw ParseError(std::string("invalid CSIT state character '") + c + "'");
}

MarginalTriple::MarginalTriple(Rational p, Rational d, Rational n)
    : p_(std::move(p)), d_(std::move(d)), n_(std::move(n)) {
    check_probability(p_, "lambda_P");
    check_probability(d_, "lambda_D");
    check_probability(n_, "lambda_N");
    if (p_ + d_ + n_ != Rational(1))
        throw InvalidArgument("marginal triple (" + p_.pretty() + ", " + d_.pretty() + ", " + n_.pretty() +
                              ") does not sum to 1");
}

MarginalTriple MarginalTriple::from_pd(const Rational& p, const Rational& d) {
    return MarginalTriple(p, d, Rational(1) - p - d);
}

const Rational& MarginalTriple::of(CsitState s) const {
    switch (s) {
        case CsitState::P: return p_;
        case CsitState::D: return d_;
        case CsitState::N: break;
    }
    return n_;
}

MarginalProfile::MarginalProfile(std::vector<MarginalTriple> users) : users_(std::move(users)) {
    check_user_count(users_.size());
}

MarginalProfile MarginalProfile::symmetric(std::size_t k, const MarginalTriple& triple) {
    check_user_count(k);
    return MarginalProfile(std::vector<MarginalTriple>(k, triple));
}

bool MarginalProfile::is_symmetric() const {
    return std::all_of(users_.begin(), users_.end(), [&](const MarginalTriple& t) { return t == users_.front(); });
}

std::string to_string(const JointState& s) {
    std::string out;
    out.reserve(s.size());
    for (auto q : s) out.push_back(to_char(q));
    return out;
}

JointState joint_state_from_string(std::string_view text) {
    if (text.empty()) throw ParseError("empty joint state");
    JointState s;
    s.reserve(text.size());
    for (char c : text) s.push_back(state_from_char(c));
    return s;
}

JointProfile::JointProfile(std::size_t k, std::map<JointState, Rational> mass) : k_(k) {
    check_user_count(k);
    Rational total;
    for (auto& [state, p] : mass) {
        if (state.size() != k)
            throw InvalidArgument("joint state " + to_string(state) + " has length " + std::to_string(state.size()) +
                                  ", expected " + std::to_string(k));
        if (p.sign() < 0) throw InvalidArgument("negative mass for joint state " + to_string(state));
        total += p;
        if (!p.is_zero()) mass_.emplace(state, p);
    }
    if (total != Rational(1)) throw InvalidArgument("joint masses sum to " + total.pretty() + ", expected 1");
}

Rational JointProfile::probability(const JointState& s) const {
    const auto it = mass_.find(s);
    return it == mass_.end() ? Rational(0) : it->second;
}

CsitPattern::CsitPattern(std::size_t k, std::size_t t, std::vector<CsitState> cells_row_major)
    : k_(k), t_(t), cells_(std::move(cells_row_major)) {
    check_user_count(k);
    if (t == 0) throw InvalidArgument("pattern period must be at least 1");
    if (cells_.size() != k * t) throw InvalidArgument("pattern cell count does not match K x T");
}

CsitPattern CsitPattern::from_columns(const std::vector<JointState>& columns) {
    if (columns.empty()) throw InvalidArgument("pattern needs at least one column");
    const std::size_t k = columns.front().size();
    std::vector<CsitState> cells(k * columns.size());
    for (std::size_t t = 0; t < columns.size(); ++t) {
        if (columns[t].size() != k) throw InvalidArgument("pattern columns have unequal length");
        for (std::size_t i = 0; i < k; ++i) cells[i * columns.size() + t] = columns[t][i];
    }
    return CsitPattern(k, columns.size(), std::move(cells));
}

CsitPattern CsitPattern::parse(std::string_view text) {
    std::vector<std::string> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
        if (line.empty()) continue;
        rows.push_back(line);
    }
    if (rows.empty()) throw ParseError("pattern text has no rows");
    const std::size_t t = rows.front().size();
    std::vector<CsitState> cells;
    cells.reserve(rows.size() * t);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != t)
            throw ParseError("pattern row " + std::to_string(i + 1) + " has length " + std::to_string(rows[i].size()) +
                             ", expected " + std::to_string(t));
        for (char c : rows[i]) cells.push_back(state_from_char(c));
    }
    return CsitPattern(rows.size(), t, std::move(cells));
}

JointState CsitPattern::column(std::size_t slot) const {
    JointState s(k_);
    for (std::size_t i = 0; i < k_; ++i) s[i] = at(i, slot);
    return s;
}

std::string CsitPattern::to_text() const {
    std::string out;
    out.reserve(k_ * (t_ + 1));
    for (std::size_t i = 0; i < k_; ++i) {
        for (std::size_t t = 0; t < t_; ++t) out.push_back(to_char(at(i, t)));
        out.push_back('\n');
    }
    return out;
}

MarginalProfile marginals_of_joint(const JointProfile& joint) {
    std::vector<Rational> p(joint.k()), d(joint.k()), n(joint.k());
    for (const auto& [state, mass] : joint.mass()) {
        for (std::size_t i = 0; i < joint.k(); ++i) {
            switch (state[i]) {
                case CsitState::P: p[i] += mass; break;
                case CsitState::D: d[i] += mass; break;
                case CsitState::N: n[i] += mass; break;
            }
        }
    }
    std::vector<MarginalTriple> users;
    users.reserve(joint.k());
    for (std::size_t i = 0; i < joint.k(); ++i) users.emplace_back(p[i], d[i], n[i]);
    return MarginalProfile(std::move(users));
}

JointProfile pattern_to_joint(const CsitPattern& pattern) {
    std::map<JointState, long> counts;
    for (std::size_t t = 0; t < pattern.t(); ++t) ++counts[pattern.column(t)];
    std::map<JointState, Rational> mass;
    for (const auto& [state, c] : counts) mass.emplace(state, Rational(c, static_cast<long>(pattern.t())));
    return JointProfile(pattern.k(), std::move(mass));
}

Rational aggregate_dash(const JointProfile& joint, std::span<const std::optional<CsitState>> filter) {
    std::vector<StateSet> sets;
    sets.reserve(filter.size());
    for (const auto& f : filter) sets.push_back(f ? StateSet{*f} : StateSet::any());
    return aggregate_sets(joint, sets);
}

Rational aggregate_sets(const JointProfile& joint, std::span<const StateSet> filter) {
    if (filter.size() != joint.k())
        throw DimensionMismatch("aggregate filter has length " + std::to_string(filter.size()) + ", expected " +
                                std::to_string(joint.k()));
    Rational total;
    for (const auto& [state, mass] : joint.mass()) {
        bool match = true;
        for (std::size_t i = 0; i < state.size() && match; ++i) match = filter[i].contains(state[i]);
        if (match) total += mass;
    }
    return total;
}

}  // namespace csitdof
