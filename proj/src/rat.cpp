#include <flowsched/rat.hpp>

#include <cctype>
#include <vector>

namespace flowsched {

std::string_view to_string(Errc code) {
    switch (code) {
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::NonPositiveField: return "NonPositiveField";
    case Errc::DistortionViolated: return "DistortionViolated";
    case Errc::EmptyInstance: return "EmptyInstance";
    case Errc::InvalidBase: return "InvalidBase";
    case Errc::InvalidMu: return "InvalidMu";
    case Errc::InvalidRho: return "InvalidRho";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::ParseError: return "ParseError";
    case Errc::PolicySelectedUnknownJob: return "PolicySelectedUnknownJob";
    case Errc::PolicyIdleWhilePending: return "PolicyIdleWhilePending";
    case Errc::IncompleteRun: return "IncompleteRun";
    case Errc::UnknownJob: return "UnknownJob";
    case Errc::DuplicateRelease: return "DuplicateRelease";
    case Errc::CompletedNonTop: return "CompletedNonTop";
    case Errc::InternalInconsistency: return "InternalInconsistency";
    case Errc::WeightedInstance: return "WeightedInstance";
    case Errc::TooLarge: return "TooLarge";
    case Errc::NonIntegerData: return "NonIntegerData";
    case Errc::VictimWeighted: return "VictimWeighted";
    case Errc::WrongPolicyKind: return "WrongPolicyKind";
    case Errc::SeriesMismatch: return "SeriesMismatch";
    case Errc::ZeroOpt: return "ZeroOpt";
    }
    return "Unknown";
}

Rat::Rat(long num, long den) : Rat(mpz_class(num), mpz_class(den)) {}

Rat::Rat(const mpz_class& num, const mpz_class& den) {
    if (den == 0) {
        throw Error(Errc::ParseError, "zero denominator");
    }
    value_ = mpq_class(num, den);
    value_.canonicalize();
}

Rat::Rat(mpq_class value) : value_(std::move(value)) {
    if (value_.get_den() == 0) {
        throw Error(Errc::ParseError, "zero denominator");
    }
    value_.canonicalize();
}

namespace {

bool is_int_literal(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) {
        return false;
    }
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            return false;
        }
    }
    return true;
}

mpz_class to_mpz(std::string_view s) {
    if (s[0] == '+') {
        s.remove_prefix(1);
    }
    return mpz_class(std::string(s), 10);
}

} // namespace

Rat Rat::parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        if (!is_int_literal(text)) {
            throw Error(Errc::ParseError, "not a rational: '" + std::string(text) + "'");
        }
        return Rat(to_mpz(text), mpz_class(1));
    }
    const auto n = text.substr(0, slash);
    const auto d = text.substr(slash + 1);
    if (!is_int_literal(n) || !is_int_literal(d) || d[0] == '-') {
        throw Error(Errc::ParseError, "not a rational: '" + std::string(text) + "'");
    }
    return Rat(to_mpz(n), to_mpz(d));
}

std::string Rat::str() const {
    if (is_integer()) {
        return value_.get_num().get_str();
    }
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rat::fraction() const {
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rat::decimal(int significant_digits) const {
    // 4 bits per decimal digit plus headroom is plenty for display.
    mpf_class f(value_, static_cast<mp_bitcnt_t>(significant_digits * 4 + 64));
    std::vector<char> buf(static_cast<std::size_t>(significant_digits) + 64);
    const std::string fmt = "%." + std::to_string(significant_digits) + "Fg";
    int len = gmp_snprintf(buf.data(), buf.size(), fmt.c_str(), f.get_mpf_t());
    if (len >= static_cast<int>(buf.size())) {
        buf.resize(static_cast<std::size_t>(len) + 1);
        gmp_snprintf(buf.data(), buf.size(), fmt.c_str(), f.get_mpf_t());
    }
    return std::string(buf.data());
}

mpz_class Rat::floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
    return q;
}

mpz_class Rat::ceil() const {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
    return q;
}

std::size_t Rat::hash() const {
    const std::size_t hn = std::hash<std::string>{}(value_.get_num().get_str(16));
    const std::size_t hd = std::hash<std::string>{}(value_.get_den().get_str(16));
    return hn ^ (hd + 0x9e3779b97f4a7c15ULL + (hn << 6) + (hn >> 2));
}

Rat& Rat::operator/=(const Rat& o) {
    if (o.is_zero()) {
        throw Error(Errc::InternalInconsistency, "division by zero");
    }
    value_ /= o.value_;
    return *this;
}

Rat pow(const Rat& base, std::int64_t exponent) {
    if (exponent == 0) {
        return Rat(1);
    }
    const auto e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
    mpz_class n;
    mpz_class d;
    mpz_pow_ui(n.get_mpz_t(), base.raw().get_num_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), base.raw().get_den_mpz_t(), e);
    if (exponent < 0) {
        if (n == 0) {
            throw Error(Errc::InternalInconsistency, "zero to a negative power");
        }
        return Rat(d, n);
    }
    return Rat(n, d);
}

Rat min(const Rat& a, const Rat& b) { return b < a ? b : a; }
Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

std::int64_t floor_log(const Rat& value, const Rat& base) {
    if (base <= Rat(1)) {
        throw Error(Errc::InvalidBase, "base must exceed 1, got " + base.str());
    }
    if (!value.is_positive()) {
        throw Error(Errc::NonPositiveField, "floor_log of non-positive value " + value.str());
    }
    // Galloping search over exact powers: find the bracket, then bisect.
    std::int64_t k = 0;
    if (value >= Rat(1)) {
        std::int64_t hi = 1;
        while (pow(base, hi) <= value) {
            hi *= 2;
        }
        std::int64_t lo = hi / 2; // base^lo <= value (lo = 0 on the first round)
        while (hi - lo > 1) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            if (pow(base, mid) <= value) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        k = lo;
    } else {
        std::int64_t lo = -1;
        while (pow(base, lo) > value) {
            lo *= 2;
        }
        std::int64_t hi = lo / 2; // base^hi > value
        while (hi - lo > 1) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            if (pow(base, mid) <= value) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        k = lo;
    }
    return k;
}

PowerRounding ceil_to_power(const Rat& value, const Rat& base) {
    const std::int64_t k = floor_log(value, base);
    Rat p = pow(base, k);
    if (p == value) {
        return {k, std::move(p)};
    }
    return {k + 1, pow(base, k + 1)};
}

} // namespace flowsched
