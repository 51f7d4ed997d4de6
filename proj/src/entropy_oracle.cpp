#include "csitdof/entropy_oracle.hpp"

#include "csitdof/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

namespace csitdof {

namespace {

constexpr double kNormTolerance = 1e-12;
constexpr double kSlackFloor = -1e-9;

std::vector<std::size_t> all_vars(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return v;
}

// 0-based windows of size n-1 over variables 0..n-1.
std::vector<std::vector<std::size_t>> windows(std::size_t n) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i = 1; i <= n; ++i) {
        auto w = sliding_window(n, i, n - 1);
        for (auto& x : w) --x;
        out.push_back(std::move(w));
    }
    return out;
}

double entropy_of(const std::vector<double>& masses) {
    double h = 0.0;
    for (double p : masses)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

}  // namespace

std::vector<std::size_t> sliding_window(std::size_t n, std::size_t i, std::size_t j) {
    if (n == 0 || i < 1 || i > n || j < 1 || j > n)
        throw InvalidArgument("sliding_window needs 1 <= i, j <= n (n = " + std::to_string(n) +
                              ", i = " + std::to_string(i) + ", j = " + std::to_string(j) + ")");
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < j; ++r) out.push_back((i - 1 + r) % n + 1);
    return out;
}

DiscreteJoint::DiscreteJoint(std::vector<std::size_t> alphabet, std::vector<double> pmf)
    : alphabet_(std::move(alphabet)), pmf_(std::move(pmf)) {
    if (alphabet_.size() < 2) throw InvalidArgument("a discrete joint needs at least two variables");
    std::size_t cells = 1;
    for (auto a : alphabet_) {
        if (a == 0) throw InvalidArgument("empty alphabet");
        cells *= a;
    }
    if (pmf_.size() != cells)
        throw InvalidArgument("pmf has " + std::to_string(pmf_.size()) + " entries, alphabet needs " +
                              std::to_string(cells));
    double total = 0.0;
    for (double p : pmf_) {
        if (!(p >= 0.0)) throw InvalidArgument("pmf has a negative or NaN entry");
        total += p;
    }
    if (std::abs(total - 1.0) > kNormTolerance)
        throw InvalidArgument("pmf sums to " + std::to_string(total) + ", not 1");
}

double DiscreteJoint::entropy(std::span<const std::size_t> vars) const {
    const std::size_t n = alphabet_.size();
    std::vector<std::size_t> stride(n, 1);
    for (std::size_t v = n - 1; v-- > 0;) stride[v] = stride[v + 1] * alphabet_[v + 1];

    std::size_t cells = 1;
    for (auto v : vars) {
        if (v >= n) throw InvalidArgument("variable index out of range");
        cells *= alphabet_[v];
    }
    std::vector<double> marginal(cells, 0.0);
    for (std::size_t idx = 0; idx < pmf_.size(); ++idx) {
        std::size_t key = 0;
        for (auto v : vars) key = key * alphabet_[v] + (idx / stride[v]) % alphabet_[v];
        marginal[key] += pmf_[idx];
    }
    return entropy_of(marginal);
}

DiscreteJoint DiscreteJoint::permuted(std::span<const std::size_t> order) const {
    const std::size_t n = alphabet_.size();
    std::vector<std::size_t> check(order.begin(), order.end());
    std::sort(check.begin(), check.end());
    if (check != all_vars(n)) throw InvalidArgument("permutation expected");

    std::vector<std::size_t> stride(n, 1);
    for (std::size_t v = n - 1; v-- > 0;) stride[v] = stride[v + 1] * alphabet_[v + 1];
    std::vector<std::size_t> alphabet(n);
    for (std::size_t v = 0; v < n; ++v) alphabet[v] = alphabet_[order[v]];

    std::vector<double> pmf(pmf_.size(), 0.0);
    for (std::size_t idx = 0; idx < pmf_.size(); ++idx) {
        std::size_t key = 0;
        for (std::size_t v = 0; v < n; ++v) key = key * alphabet[v] + (idx / stride[order[v]]) % alphabet_[order[v]];
        pmf[key] = pmf_[idx];
    }
    return {std::move(alphabet), std::move(pmf)};
}

DiscreteJoint DiscreteJoint::with_independent(std::span<const double> marginal) const {
    std::vector<std::size_t> alphabet = alphabet_;
    alphabet.push_back(marginal.size());
    std::vector<double> pmf;
    pmf.reserve(pmf_.size() * marginal.size());
    for (double p : pmf_)
        for (double q : marginal) pmf.push_back(p * q);
    return {std::move(alphabet), std::move(pmf)};
}

double check_lemma1_discrete(const DiscreteJoint& d) {
    const std::size_t n = d.n();
    double sum = 0.0;
    for (const auto& w : windows(n)) sum += d.entropy(w);
    return sum - static_cast<double>(n - 1) * d.entropy(all_vars(n));
}

double check_lemma1_discrete_conditional(const DiscreteJoint& d) {
    if (d.n() < 3) throw InvalidArgument("conditional form needs two variables plus the conditioning one");
    const std::size_t n = d.n() - 1;
    const std::size_t a = n;
    const std::size_t a_only[] = {a};
    const double h_a = d.entropy(a_only);
    double sum = 0.0;
    for (auto w : windows(n)) {
        w.push_back(a);
        sum += d.entropy(w) - h_a;
    }
    return sum - static_cast<double>(n - 1) * (d.entropy(all_vars(n + 1)) - h_a);
}

GaussianJoint::GaussianJoint(Eigen::MatrixXd cov) : cov_(std::move(cov)) {
    if (cov_.rows() != cov_.cols()) throw InvalidArgument("covariance must be square");
    if (cov_.rows() < 2) throw InvalidArgument("a Gaussian joint needs at least two variables");
    if (!cov_.isApprox(cov_.transpose(), 1e-12)) throw InvalidArgument("covariance is not symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(cov_);
    if (llt.info() != Eigen::Success) throw InvalidArgument("covariance is not positive definite");
    for (Eigen::Index i = 0; i < cov_.rows(); ++i)
        if (!(llt.matrixL()(i, i) > 0.0)) throw InvalidArgument("covariance is not positive definite");
}

double GaussianJoint::log2_det(std::span<const std::size_t> vars) const {
    const auto m = static_cast<Eigen::Index>(vars.size());
    Eigen::MatrixXd sub(m, m);
    for (Eigen::Index r = 0; r < m; ++r)
        for (Eigen::Index c = 0; c < m; ++c)
            sub(r, c) = cov_(static_cast<Eigen::Index>(vars[r]), static_cast<Eigen::Index>(vars[c]));
    const Eigen::MatrixXd l = Eigen::LLT<Eigen::MatrixXd>(sub).matrixL();
    double s = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) s += std::log2(l(i, i));
    return 2.0 * s;
}

double check_lemma1_gaussian(const GaussianJoint& g) {
    const std::size_t n = g.n();
    double sum = 0.0;
    for (const auto& w : windows(n)) sum += g.log2_det(w);
    return 0.5 * (sum - static_cast<double>(n - 1) * g.log2_det(all_vars(n)));
}

double check_lemma1_gaussian_conditional(const GaussianJoint& g) {
    if (g.n() < 3) throw InvalidArgument("conditional form needs two variables plus the conditioning one");
    const auto n = static_cast<Eigen::Index>(g.n() - 1);
    const Eigen::MatrixXd& s = g.covariance();
    const Eigen::MatrixXd cond =
        s.topLeftCorner(n, n) - s.topRightCorner(n, 1) * s.bottomLeftCorner(1, n) / s(n, n);
    return check_lemma1_gaussian(GaussianJoint(0.5 * (cond + cond.transpose())));
}

DiscreteJoint random_discrete_joint(std::vector<std::size_t> alphabet, std::mt19937_64& rng) {
    std::size_t cells = 1;
    for (auto a : alphabet) cells *= a;
    // Normalized i.i.d. exponentials are uniform on the simplex.
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> pmf(cells);
    double total = 0.0;
    for (auto& p : pmf) total += (p = expo(rng));
    for (auto& p : pmf) p /= total;
    return {std::move(alphabet), std::move(pmf)};
}

GaussianJoint random_gaussian_joint(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto m = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd a(m, m);
    for (Eigen::Index c = 0; c < m; ++c)
        for (Eigen::Index r = 0; r < m; ++r) a(r, c) = normal(rng);
    Eigen::MatrixXd cov = a * a.transpose() + 1e-6 * Eigen::MatrixXd::Identity(m, m);
    return GaussianJoint(0.5 * (cov + cov.transpose()));
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t points) {
    if (!(lo > 0.0) || !(hi > lo) || points < 2) throw InvalidArgument("geometric grid needs 0 < lo < hi, 2+ points");
    std::vector<double> out(points);
    const double step = std::log(hi / lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) out[i] = lo * std::exp(step * static_cast<double>(i));
    out.back() = hi;
    return out;
}

PrelogEstimate check_lemma2_gaussian(CsitState m_state, CsitState q_state, std::span<const double> powers,
                                     std::uint64_t seed, std::size_t samples) {
    if (m_state == CsitState::D || q_state == CsitState::D)
        throw InvalidArgument("the prelog check covers P and N states only");
    if (powers.size() < 2) throw InvalidArgument("need at least two powers");
    if (samples == 0) throw InvalidArgument("need at least one channel sample");
    for (double p : powers)
        if (!(p > 0.0)) throw InvalidArgument("powers must be positive");

    using C = std::complex<double>;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    auto draw = [&] { return Eigen::Vector2cd(C(normal(rng), normal(rng)), C(normal(rng), normal(rng))); };

    // Per channel sample, the received gain per unit power at m and at q.
    std::vector<std::pair<double, double>> unit_gains;
    unit_gains.reserve(samples);
    for (std::size_t s = 0; s < samples; ++s) {
        const Eigen::Vector2cd hm = draw();
        const Eigen::Vector2cd hq = draw();
        if (q_state == CsitState::P) {
            const Eigen::Vector2cd u = Eigen::Vector2cd(-std::conj(hq(1)), std::conj(hq(0))).normalized();
            unit_gains.emplace_back(std::norm(hm.dot(u)), std::norm(hq.dot(u)));
        } else if (m_state == CsitState::P) {
            const Eigen::Vector2cd u = hm.normalized();
            unit_gains.emplace_back(std::norm(hm.dot(u)), std::norm(hq.dot(u)));
        } else {
            unit_gains.emplace_back(0.5 * hm.squaredNorm(), 0.5 * hq.squaredNorm());
        }
    }

    PrelogEstimate est;
    est.powers.assign(powers.begin(), powers.end());
    for (double p : powers) {
        double acc = 0.0;
        for (const auto& [gm, gq] : unit_gains) acc += std::log2(1.0 + p * gm) - std::log2(1.0 + p * gq);
        est.mean_difference.push_back(acc / static_cast<double>(samples));
    }

    const auto k = static_cast<double>(powers.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < powers.size(); ++i) {
        const double x = std::log2(powers[i]);
        const double y = est.mean_difference[i];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    est.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    return est;
}

LemmaSweep lemma1_sweep(std::size_t discrete, std::size_t gaussian, std::uint64_t seed) {
    LemmaSweep out;
    out.min_slack = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick_n(2, 4), pick_a(2, 3), pick_g(2, 5);

    auto record = [&out](double slack, const std::string& what) {
        ++out.cases;
        out.min_slack = std::min(out.min_slack, slack);
        if (slack < kSlackFloor) out.failures.push_back(what + ": slack " + std::to_string(slack));
    };
    for (std::size_t c = 0; c < discrete; ++c) {
        std::vector<std::size_t> alphabet(pick_n(rng));
        for (auto& a : alphabet) a = pick_a(rng);
        record(check_lemma1_discrete(random_discrete_joint(alphabet, rng)), "discrete case " + std::to_string(c));
    }
    for (std::size_t c = 0; c < gaussian; ++c)
        record(check_lemma1_gaussian(random_gaussian_joint(pick_g(rng), rng)), "gaussian case " + std::to_string(c));
    if (out.cases == 0) out.min_slack = 0.0;
    return out;
}

}  // namespace csitdof
