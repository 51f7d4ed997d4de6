#include "csitdof/rational.hpp"

#include "csitdof/errors.hpp"

#include <cctype>

namespace csitdof {

namespace {

bool is_integer_literal(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rational::Rational(long num, long den) {
    if (den == 0) throw InvalidArgument("rational with zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);

    const auto slash = text.find('/');
    const std::string_view num = text.substr(0, slash);
    const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-' || den.front() == '+')
        throw ParseError("not a rational: '" + std::string(text) + "'");

    mpz_class n(std::string(num.front() == '+' ? num.substr(1) : num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    mpq_class q(n, d);
    q.canonicalize();
    return Rational(std::move(q));
}

std::string Rational::str() const {
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::pretty() const {
    return value_.get_str();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw InvalidArgument("division by zero rational");
    value_ /= o.value_;
    return *this;
}

Rational abs(const Rational& r) {
    return r.sign() < 0 ? -r : r;
}

Rational harmonic(int from, int to) {
    Rational sum;
    for (int i = from; i <= to; ++i) sum += Rational(1, i);
    return sum;
}

}  // namespace csitdof
