#include "facmech/rational.hpp"

#include <cctype>

namespace facmech {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

// Exact number of base-10 digits of |z|, z != 0. mpz_sizeinbase may
// overestimate by one for base 10.
long digit_count(const mpz_class& z) {
    long d = static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 10));
    if (d > 1) {
        mpz_class p10;
        mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(d - 1));
        if (cmp(abs(z), p10) < 0) --d;
    }
    return d;
}

mpz_class pow10(unsigned long k) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, k);
    return p;
}

} // namespace

Rat::Rat(long n, long d) {
    if (d == 0) throw UsageError("Rat: zero denominator");
    v_ = mpq_class(n, d);
    v_.canonicalize();
}

Rat::Rat(const mpq_class& v) : v_(v) {
    v_.canonicalize();
}

Rat::Rat(mpz_class num, mpz_class den) {
    if (sgn(den) == 0) throw UsageError("Rat: zero denominator");
    v_ = mpq_class(std::move(num), std::move(den));
    v_.canonicalize();
}

Rat& Rat::operator/=(const Rat& o) {
    if (o.is_zero()) throw UsageError("Rat: division by zero");
    v_ /= o.v_;
    return *this;
}

Rat Rat::parse(std::string_view text) {
    std::string_view num = text;
    std::string_view den;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        num = text.substr(0, slash);
        den = text.substr(slash + 1);
    }
    std::string_view num_digits = num;
    if (!num_digits.empty() && num_digits.front() == '-') num_digits.remove_prefix(1);
    if (!all_digits(num_digits)) throw ParseError("malformed rational: '" + std::string(text) + "'");

    mpq_class v(mpz_class(std::string(num), 10));
    if (den.data() != nullptr) {
        // Denominator must be a positive plain integer; a sign or zero here
        // means q <= 0, which the document format rejects.
        if (!all_digits(den)) throw ParseError("malformed rational (q must be a positive integer): '" + std::string(text) + "'");
        mpz_class q(std::string(den), 10);
        if (sgn(q) <= 0) throw ParseError("malformed rational (q <= 0): '" + std::string(text) + "'");
        v /= q;
    }
    v.canonicalize();
    return Rat(v);
}

std::string Rat::str() const {
    return v_.get_str();
}

std::string Rat::decimal(int sig) const {
    if (sig < 1) sig = 1;
    if (is_zero()) return "0";

    const mpz_class p = abs(num());
    const mpz_class q = den();
    const bool neg = sign() < 0;

    // e = unique integer with 10^e <= p/q < 10^(e+1). Start from the digit
    // counts, then correct by exact comparison:
    // p/q >= 10^ex  <=>  p*10^max(0,-ex) >= q*10^max(0,ex).
    long e = digit_count(p) - digit_count(q);
    auto at_least = [&](long ex) {
        mpz_class lhs = p, rhs = q;
        if (ex >= 0)
            rhs *= pow10(static_cast<unsigned long>(ex));
        else
            lhs *= pow10(static_cast<unsigned long>(-ex));
        return cmp(lhs, rhs) >= 0;
    };
    while (!at_least(e)) --e;
    while (at_least(e + 1)) ++e;

    // N = round_half_up(p * 10^(sig-1-e) / q), which has exactly sig digits.
    const long k = sig - 1 - e;
    mpz_class scaled_num = p, scaled_den = q;
    if (k >= 0)
        scaled_num *= pow10(static_cast<unsigned long>(k));
    else
        scaled_den *= pow10(static_cast<unsigned long>(-k));
    mpz_class n = (2 * scaled_num + scaled_den) / (2 * scaled_den);
    if (cmp(n, pow10(static_cast<unsigned long>(sig))) >= 0) {
        n = pow10(static_cast<unsigned long>(sig - 1));
        ++e;
    }

    std::string digits = n.get_str();
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();

    std::string out;
    if (e > 17 || e < -6) {
        out = digits.substr(0, 1);
        if (digits.size() > 1) out += "." + digits.substr(1);
        out += "e" + std::to_string(e);
    } else if (e >= 0) {
        if (static_cast<long>(digits.size()) <= e + 1) {
            out = digits + std::string(static_cast<size_t>(e + 1) - digits.size(), '0');
        } else {
            out = digits.substr(0, static_cast<size_t>(e + 1)) + "." + digits.substr(static_cast<size_t>(e + 1));
        }
    } else {
        out = "0." + std::string(static_cast<size_t>(-e - 1), '0') + digits;
    }
    return neg ? "-" + out : out;
}

int BoundExpr::compare(const Rat& r) const {
    const Rat diff = r - a;
    const int bs = b.sign();
    if (bs == 0) return diff.sign();
    if (bs > 0) {
        if (diff.sign() <= 0) return -1;
        const Rat lhs = diff * diff;
        const Rat rhs = Rat(2) * b * b;
        if (lhs < rhs) return -1;
        if (lhs > rhs) return 1;
        return 0; // unreachable for b != 0: would make sqrt(2) rational
    }
    if (diff.sign() >= 0) return 1;
    const Rat lhs = diff * diff;
    const Rat rhs = Rat(2) * b * b;
    if (lhs < rhs) return 1;
    if (lhs > rhs) return -1;
    return 0;
}

std::string BoundExpr::str() const {
    if (b.is_zero()) return a.str();
    std::string out;
    if (!a.is_zero()) out = a.str() + "+";
    if (b == Rat(1))
        out += "sqrt2";
    else
        out += b.str() + "*sqrt2";
    return out;
}

} // namespace facmech
