#pragma once
// Elasticity of an order from pure group data: the class group Cl(R), the
// kernel of the extension map tau onto the class group of the maximal order,
// the class of the prime P over the conductor, and the conductor exponent a.
// Everything here is exact rational arithmetic; no number fields appear.

#include <string>

#include "dav/group.hpp"
#include "dav/rational.hpp"
#include "dav/zerosum.hpp"

namespace dav {

// Exact nonnegative rational elasticity or the distinguished value INFINITE.
class Elasticity {
public:
    static Elasticity infinite() {
        Elasticity e;
        e.infinite_ = true;
        return e;
    }
    static Elasticity finite(const Rational& v) {
        if (v < Rational(1)) throw invariant_violation_error("finite elasticity below 1");
        Elasticity e;
        e.value_ = v;
        return e;
    }

    bool is_infinite() const { return infinite_; }
    const Rational& value() const {
        if (infinite_) throw invalid_argument_error("infinite elasticity has no rational value");
        return value_;
    }
    std::string str() const { return infinite_ ? "infinite" : value_.str(); }

    friend bool operator==(const Elasticity& a, const Elasticity& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
        return a.value_ == b.value_;
    }
    // infinite dominates every finite value
    friend bool operator<(const Elasticity& a, const Elasticity& b) {
        if (a.infinite_) return false;
        if (b.infinite_) return true;
        return a.value_ < b.value_;
    }
    friend bool operator<=(const Elasticity& a, const Elasticity& b) { return a < b || a == b; }

private:
    bool infinite_ = false;
    Rational value_{1};
};

/// Group-theoretic picture of an order R whose conductor is I = P^a:
/// Cl(R), ker(tau) with Cl(maximal order) = Cl(R)/ker(tau), the class [P]
/// in the quotient, and the exponent a. The two flags are validated against
/// the data: [P] is trivial iff p_principal, and [P]^a is trivial iff the
/// conductor ideal is principal upstairs.
struct OrderClassData {
    FabGroup cl_r;
    Subgroup ker_tau;
    FabGroup cl_max;   // Cl(R)/ker(tau)
    GroupHom tau;      // natural projection
    ElemIndex p_class; // class of P in cl_max
    int a = 1;
    bool p_principal = false;
    bool conductor_principal = false;
};

inline OrderClassData make_order_class_data(FabGroup cl_r, Subgroup ker_tau,
                                            const Element& p_class_coords, int a,
                                            bool p_principal, bool conductor_principal) {
    if (a < 1) throw invalid_argument_error("conductor exponent a must be >= 1");
    require_subgroup(cl_r, ker_tau.set);
    QuotientResult q = quotient(cl_r, ker_tau.set);
    ElemIndex p_class = q.group.index(p_class_coords);
    if (p_principal != (p_class == q.group.zero()))
        throw precondition_error("p_principal flag inconsistent with the class of P");
    if (conductor_principal != (q.group.scalar(p_class, a) == q.group.zero()))
        throw precondition_error("conductor_principal flag inconsistent with [P]^a");
    return OrderClassData{std::move(cl_r), std::move(ker_tau), q.group, std::move(q.projection),
                          p_class, a, p_principal, conductor_principal};
}

/// d_S(Cl(R)) for S the preimage under tau of the class of P^i. The sign of
/// the power is immaterial (negation is an automorphism); both orientations
/// are computed and checked against each other.
inline int d_coset_of_power(const OrderClassData& data, int i, const ZerosumOptions& opt = {}) {
    if (i < 0) throw invalid_argument_error("power index must be >= 0");
    ElemIndex c = data.cl_max.scalar(data.p_class, i);
    Subset s = preimage(data.tau, Subset::of(data.cl_max, {c}));
    SrdResult r = small_rel_davenport(data.cl_r, s, opt);
    Subset sneg = preimage(data.tau, Subset::of(data.cl_max, {data.cl_max.neg(c)}));
    if (small_rel_davenport(data.cl_r, sneg, opt).value != r.value)
        throw invariant_violation_error("d over [P^i] and [P^-i] preimages disagree");
    return r.value;
}

/// Elasticity when the conductor I = P^a is principal in the maximal order
/// and prime in R:
///   max{ D(Cl(R))/2,  (D_{P^i}(Cl(R))+1)/2 + i/a  for 0 <= i <= a-1 }.
inline Elasticity elasticity_prime_conductor(const OrderClassData& data,
                                             const ZerosumOptions& opt = {}) {
    if (!data.conductor_principal)
        throw unsupported_case_error(
            "conductor not principal in the maximal order; for a = 1 use "
            "elasticity_prime_nonprincipal");
    Rational best(davenport(data.cl_r, opt), 2);
    for (int i = 0; i < data.a; ++i) {
        int dpi = d_coset_of_power(data, i, opt) + 1; // D_{P^i}
        Rational term = Rational(dpi + 1, 2) + Rational(i, data.a);
        if (best < term) best = term;
    }
    return Elasticity::finite(best);
}

/// Elasticity when the conductor is the prime P itself (a = 1) and P is not
/// principal upstairs: D(Cl(R))/2.
inline Elasticity elasticity_prime_nonprincipal(const OrderClassData& data,
                                                const ZerosumOptions& opt = {}) {
    if (data.a != 1)
        throw unsupported_case_error("non-principal primary conductor with a > 1 is not covered "
                                     "outside the quadratic engine");
    if (data.p_principal)
        throw precondition_error("elasticity_prime_nonprincipal requires [P] non-principal");
    return Elasticity::finite(Rational(davenport(data.cl_r, opt), 2));
}

/// More than one prime of the maximal order over a prime of R containing the
/// conductor forces infinite elasticity; exactly one passes through to the
/// finite formulas.
inline std::optional<Elasticity> infinite_elasticity_guard(int primes_over_conductor) {
    if (primes_over_conductor < 1)
        throw invalid_argument_error("at least one prime lies over the conductor");
    if (primes_over_conductor > 1) return Elasticity::infinite();
    return std::nullopt;
}

/// Single-term form max{ D(Cl(R))/2, (D_P(Cl(R))+1)/2 + (a-1)/a }, valid when
/// D_P dominates every D_{P^i}. The dominance is verified for 0 <= i <= a-1
/// and the result is checked against the general formula.
inline Elasticity simpler_formula_if_dominant(const OrderClassData& data,
                                              const ZerosumOptions& opt = {}) {
    if (!data.conductor_principal)
        throw unsupported_case_error("conductor not principal in the maximal order");
    const int dp = d_coset_of_power(data, 1, opt) + 1; // D_P
    for (int i = 0; i < data.a; ++i) {
        if (d_coset_of_power(data, i, opt) + 1 > dp)
            throw precondition_error("D_P does not dominate D_{P^" + std::to_string(i) + "}");
    }
    Rational val(davenport(data.cl_r, opt), 2);
    Rational term = Rational(dp + 1, 2) + Rational(data.a - 1, data.a);
    if (val < term) val = term;
    Elasticity out = Elasticity::finite(val);
    if (!(out == elasticity_prime_conductor(data, opt)))
        throw invariant_violation_error("dominant-case formula diverges from the general one");
    return out;
}

/// Numeric shadow of "Cl(R) isomorphic to Cl(maximal order)": with the latter
/// a quotient of the former, equal class numbers force the isomorphism.
inline bool locally_associated_numeric_test(long long h_r, long long h_max) {
    if (h_r < 1 || h_max < 1) throw invalid_argument_error("class numbers must be positive");
    return h_r == h_max;
}

/// Hypothesis test for the equal-elasticity construction: a locally
/// associated order with principal P, conductor P^a (a >= 2), and
/// rho(maximal order) >= (2a-1)/a has rho(R) = rho(maximal order) while
/// failing to be associated.
inline bool counterexample_condition(const OrderClassData& data, const Rational& rho_max) {
    if (data.ker_tau.size() != 1)
        throw precondition_error("locally associated data requires trivial ker(tau)");
    if (!data.p_principal) throw precondition_error("requires [P] principal");
    if (data.a < 2) throw precondition_error("requires conductor exponent a >= 2");
    return !(rho_max < Rational(2 * data.a - 1, data.a));
}

} // namespace dav
