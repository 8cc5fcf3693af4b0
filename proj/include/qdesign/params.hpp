#pragma once

#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "qdesign/errors.hpp"
#include "qdesign/numeric.hpp"

namespace qdesign {

/// Gaussian binomial coefficient [v k]_q, exactly.
/// 0 when k < 0 or k > v; 1 when k = 0.  Each partial product is itself a
/// Gaussian binomial, so the incremental division is exact at every step.
inline Int gauss(long v, long k, unsigned q) {
    if (k < 0 || k > v) return 0;
    Int g = 1;
    Int qpow_top = int_pow(q, static_cast<unsigned>(v)); // q^(v-i) for i = 0
    Int qpow_bot = q;                                    // q^(i+1) for i = 0
    for (long i = 0; i < k; ++i) {
        g *= qpow_top - 1;
        Int d = qpow_bot - 1;
        if (g % d != 0) throw InternalError("gauss: non-exact intermediate division");
        g /= d;
        qpow_top /= q;
        qpow_bot *= q;
    }
    return g;
}

// ---------------------------------------------------------------------------
// ParameterSet
// ---------------------------------------------------------------------------

/// The numeric signature t-(v,k,lambda)_q of a subspace design.
class ParameterSet {
public:
    ParameterSet(unsigned t, unsigned v, unsigned k, Int lambda, unsigned q)
        : t_(t), v_(v), k_(k), q_(q), lambda_(std::move(lambda)) {
        if (!is_prime_power(q_))
            throw InvalidParameterSet("q = " + std::to_string(q_) + " is not a prime power");
        if (!(t_ <= k_ && k_ <= v_))
            throw InvalidParameterSet("need t <= k <= v in " + str_raw());
        if (lambda_ < 1)
            throw InvalidParameterSet("lambda must be >= 1 in " + str_raw());
        if (lambda_ > gauss(v_ - t_, k_ - t_, q_))
            throw InvalidParameterSet("lambda exceeds the complete design's lambda in " + str_raw());
    }

    unsigned t() const { return t_; }
    unsigned v() const { return v_; }
    unsigned k() const { return k_; }
    unsigned q() const { return q_; }
    const Int& lambda() const { return lambda_; }

    std::string str() const { return str_raw(); }

    friend bool operator==(const ParameterSet& a, const ParameterSet& b) = default;

private:
    std::string str_raw() const {
        return std::to_string(t_) + "-(" + std::to_string(v_) + "," + std::to_string(k_) + "," +
               lambda_.str() + ")_" + std::to_string(q_);
    }

    unsigned t_, v_, k_, q_;
    Int lambda_;
};

/// Parameters of the complete design: every k-subspace is a block.
inline ParameterSet complete_params(unsigned t, unsigned v, unsigned k, unsigned q) {
    return ParameterSet(t, v, k, gauss(v - t, k - t, q), q);
}

/// Parse "t-(v,k,lambda)_q".
inline ParameterSet parse_param_set(const std::string& s) {
    static const std::regex re(R"(^\s*(\d+)-\((\d+)\s*,\s*(\d+)\s*,\s*(\d+)\)_(\d+)\s*$)");
    std::smatch m;
    if (!std::regex_match(s, m, re))
        throw FormatError("cannot parse parameter set '" + s + "'; expected t-(v,k,lambda)_q");
    return ParameterSet(std::stoul(m[1]), std::stoul(m[2]), std::stoul(m[3]), Int(m[4].str()),
                        std::stoul(m[5]));
}

// ---------------------------------------------------------------------------
// lambda_s and admissibility
// ---------------------------------------------------------------------------

/// lambda_s = lambda [v-s t-s]/[k-s t-s], computed by both closed forms and
/// cross-checked.
inline Rat lambda_s(const ParameterSet& p, unsigned s) {
    if (s > p.t()) throw SOutOfRange("s = " + std::to_string(s) + " exceeds t in " + p.str());
    Rat a = Rat(p.lambda() * gauss(p.v() - s, p.t() - s, p.q())) /
            Rat(gauss(p.k() - s, p.t() - s, p.q()));
    Rat b = Rat(p.lambda() * gauss(p.v() - s, p.k() - s, p.q())) /
            Rat(gauss(p.v() - p.t(), p.k() - p.t(), p.q()));
    if (a != b) throw InternalError("lambda_s closed forms disagree for " + p.str());
    return a;
}

inline bool is_integer(const Rat& r) { return boost::multiprecision::denominator(r) == 1; }

inline Int to_integer(const Rat& r) {
    if (!is_integer(r)) throw NonIntegralLambda("expected an integer, got " + r.str());
    return boost::multiprecision::numerator(r);
}

struct ParamReport {
    bool admissible = false;
    std::vector<Rat> lambdas;          // lambda_s for s = 0..t
    std::optional<unsigned> failing_s; // least s with non-integral lambda_s
};

/// Integrality conditions lambda_s in Z for all s in {0,...,t}.
inline ParamReport is_admissible(const ParameterSet& p) {
    ParamReport rep;
    rep.lambdas.reserve(p.t() + 1);
    for (unsigned s = 0; s <= p.t(); ++s) {
        rep.lambdas.push_back(lambda_s(p, s));
        if (!is_integer(rep.lambdas.back()) && !rep.failing_s) rep.failing_s = s;
    }
    rep.admissible = !rep.failing_s.has_value();
    return rep;
}

// ---------------------------------------------------------------------------
// Parameter maps
// ---------------------------------------------------------------------------

inline ParameterSet derived_params(const ParameterSet& p) {
    if (p.t() == 0) throw TZero("derived parameters need t >= 1");
    return ParameterSet(p.t() - 1, p.v() - 1, p.k() - 1, p.lambda(), p.q());
}

/// mu as an exact rational, defined for every parameter set with t >= 1.
inline Rat residual_mu(const ParameterSet& p) {
    if (p.t() == 0) throw TZero("residual parameters need t >= 1");
    return Rat(p.lambda() * (int_pow(p.q(), p.v() - p.k()) - 1)) /
           Rat(int_pow(p.q(), p.k() - p.t() + 1) - 1);
}

inline ParameterSet residual_params(const ParameterSet& p) {
    Rat mu = residual_mu(p);
    // alternative form of mu, from the reduced parameter
    Rat alt = (lambda_s(p, p.t() - 1) - Rat(p.lambda())) / Rat(int_pow(p.q(), p.k() - p.t() + 1));
    if (mu != alt) throw InternalError("mu closed forms disagree for " + p.str());
    if (!is_integer(mu))
        throw NonIntegralMu("residual lambda " + mu.str() + " of " + p.str() + " is not integral");
    return ParameterSet(p.t() - 1, p.v() - 1, p.k(), boost::multiprecision::numerator(mu), p.q());
}

inline ParameterSet reduced_params(const ParameterSet& p) {
    if (p.t() == 0) throw TZero("reduced parameters need t >= 1");
    Rat l = lambda_s(p, p.t() - 1);
    if (!is_integer(l))
        throw NonIntegralLambda("lambda_(t-1) = " + l.str() + " of " + p.str() + " is not integral");
    return ParameterSet(p.t() - 1, p.v(), p.k(), boost::multiprecision::numerator(l), p.q());
}

inline ParameterSet dual_params(const ParameterSet& p) {
    if (p.v() - p.k() < p.t())
        throw NonIntegralDual("dual of " + p.str() + " would need t <= v-k");
    Int num = p.lambda() * gauss(p.v() - p.k(), p.t(), p.q());
    Int den = gauss(p.k(), p.t(), p.q());
    if (num % den != 0)
        throw NonIntegralDual("dual lambda of " + p.str() + " is not integral");
    return ParameterSet(p.t(), p.v(), p.v() - p.k(), num / den, p.q());
}

// ---------------------------------------------------------------------------
// The lambda/delta/rho identity
// ---------------------------------------------------------------------------

/// lambda_s = delta_s + q^(k-s) rho_s = q^(v-k) delta_s + rho_s, as exact
/// rationals.  delta_s and rho_s are the lambda_s values of the derived and
/// residual parameter sets; both are computed by their closed forms so the
/// identity is checkable even when mu is not integral.
inline bool check_lambda_identity(const ParameterSet& p, unsigned s) {
    if (p.t() == 0) throw TZero("identity needs t >= 1");
    if (s > p.t() - 1) throw SOutOfRange("identity needs s <= t-1");
    Rat denom(gauss(p.v() - p.t(), p.k() - p.t(), p.q()));
    Rat ls = lambda_s(p, s);
    Rat delta = Rat(p.lambda() * gauss(p.v() - s - 1, p.k() - s - 1, p.q())) / denom;
    Rat rho = Rat(p.lambda() * gauss(p.v() - s - 1, p.k() - s, p.q())) / denom;

    // cross-route: the same values through the parameter maps
    if (delta != lambda_s(derived_params(p), s))
        throw InternalError("delta_s routes disagree for " + p.str());
    Rat mu = residual_mu(p);
    Rat rho_via_mu = mu * Rat(gauss(p.v() - 1 - s, p.t() - 1 - s, p.q())) /
                     Rat(gauss(p.k() - s, p.t() - 1 - s, p.q()));
    if (rho != rho_via_mu) throw InternalError("rho_s routes disagree for " + p.str());

    Rat qks(int_pow(p.q(), p.k() - s));
    Rat qvk(int_pow(p.q(), p.v() - p.k()));
    return ls == delta + qks * rho && ls == qvk * delta + rho;
}

} // namespace qdesign
