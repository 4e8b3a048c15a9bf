#pragma once
// Elasticity engines for orders R_n = Z[n*alpha] in quadratic fields with
// primary conductor n = p^a: the general kernel-ladder formula, the cyclic
// closed form, class-number transport between levels, cyclicity inference,
// and the monotonicity check between nested orders.

#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dav/elasticity.hpp"
#include "dav/forms.hpp"
#include "dav/quadratic.hpp"
#include "dav/rational.hpp"
#include "dav/zerosum.hpp"

namespace dav {

/// Group-side view of a ladder: Cl(R_n), the nested kernels ker(tau_0) down
/// to ker(tau_a) = {0}, and (when p is ramified) the tau_0 fiber over [P].
/// Produced automatically for d < 0; supplied externally for real fields.
struct LadderData {
    FabGroup cl;
    std::vector<Subset> kernel; // size a+1, nested, last = {0}
    std::optional<Subset> p_fiber;
};

inline LadderData ladder_data(const TauLadder& lad) {
    LadderData out;
    out.cl = lad.level[lad.spec.a].group;
    for (const Subgroup& k : lad.kernel) out.kernel.push_back(k.set);
    out.p_fiber = lad.p_fiber;
    return out;
}

inline void validate_ladder(const LadderData& lad, int a, Splitting splitting) {
    if (static_cast<int>(lad.kernel.size()) != a + 1)
        throw invalid_argument_error("ladder needs a+1 kernels (tau_0 .. tau_a)");
    for (const Subset& k : lad.kernel) require_subgroup(lad.cl, k);
    for (int i = 0; i < a; ++i)
        if (!is_subset_of(lad.kernel[i + 1], lad.kernel[i]))
            throw invalid_argument_error("ladder kernels must be nested downward");
    if (lad.kernel[a].size() != 1)
        throw invalid_argument_error("ker(tau_a) must be trivial");
    if (splitting == Splitting::ramified) {
        if (!lad.p_fiber) throw invalid_argument_error("ramified ladder needs the fiber over [P]");
        std::vector<ElemIndex> shifted;
        for (ElemIndex e : lad.kernel[0].elems)
            shifted.push_back(lad.cl.add(lad.p_fiber->elems.front(), e));
        if (!(Subset::of(lad.cl, shifted) == *lad.p_fiber))
            throw invalid_argument_error("fiber over [P] must be a coset of ker(tau_0)");
    }
}

/// equal_step[j] (j = 1..a) answers: U(R_{p^{a-j}}) == U(R_{p^{a-j+1}})?
struct UnitSteps {
    std::vector<char> equal_step; // index 0 unused
};

/// Real fields: the unit groups mod torsion are generated by powers of the
/// fundamental unit; two orders share units iff the least entering powers
/// agree. The entering powers must be nondecreasing and divide one another.
inline UnitSteps unit_steps_real(const QuadraticOrderSpec& spec, const QuadInt& u) {
    std::vector<long long> k(spec.a + 1);
    for (int i = 0; i <= spec.a; ++i) k[i] = unit_index(u, ipow(spec.p, i));
    if (k[0] != 1) throw invariant_violation_error("unit index at conductor 1 must be 1");
    for (int i = 0; i < spec.a; ++i)
        if (k[i + 1] % k[i] != 0)
            throw invariant_violation_error("unit indices must divide up the tower");
    UnitSteps out;
    out.equal_step.assign(spec.a + 1, 0);
    for (int j = 1; j <= spec.a; ++j)
        out.equal_step[j] = (k[spec.a - j] == k[spec.a - j + 1]);
    return out;
}

/// Imaginary fields: all unit groups are {+-1} except the maximal orders of
/// Q(i) and Q(sqrt -3), whose extra torsion lies in no proper suborder.
inline UnitSteps unit_steps_imaginary(const QuadraticOrderSpec& spec) {
    UnitSteps out;
    out.equal_step.assign(spec.a + 1, 1);
    if (spec.d == -1 || spec.d == -3) out.equal_step[spec.a] = 0;
    return out;
}

/// The ladder constants d_j for j = 1..a: d over ker(tau_{a-j}) when the unit
/// groups differ at step j, otherwise d over ker(tau_{a-j}) \ ker(tau_{a-j+1}).
/// Cyclic class groups must give the same value either way; this is checked.
inline std::vector<int> dj_values(const LadderData& lad, const UnitSteps& units, int a,
                                  const ZerosumOptions& opt = {}) {
    if (static_cast<int>(units.equal_step.size()) != a + 1)
        throw invalid_argument_error("unit steps do not match the exponent");
    std::vector<int> out(a + 1, 0); // index 0 unused
    for (int j = 1; j <= a; ++j) {
        const Subset& big = lad.kernel[a - j];
        const Subset& small = lad.kernel[a - j + 1];
        int dj;
        if (units.equal_step[j]) {
            Subset diff = set_difference(big, small);
            if (diff.empty())
                throw invariant_violation_error(
                    "equal unit groups force strict class-number growth, but ker(tau_" +
                    std::to_string(a - j) + ") = ker(tau_" + std::to_string(a - j + 1) + ")");
            dj = small_rel_davenport(lad.cl, diff, opt).value;
            if (lad.cl.cyclic() && small_rel_davenport(lad.cl, big, opt).value != dj)
                throw invariant_violation_error(
                    "cyclic class group: d over kernel minus sub-kernel must match d over kernel");
        } else {
            dj = small_rel_davenport(lad.cl, big, opt).value;
        }
        out[j] = dj;
    }
    return out;
}

/// rho(R_n) for primary conductor n = p^a from the ladder:
///   ramified: max{ D(Cl)/2, a + D_P(Cl)/2, j + d_j/2 (1 <= j <= a) }
///   inert:    max{ D(Cl)/2, j + d_j/2 (1 <= j <= a) }
/// Split primes short-circuit to INFINITE before this engine runs.
inline Elasticity elasticity_rn(const QuadraticOrderSpec& spec, const LadderData& lad,
                                const UnitSteps& units, const ZerosumOptions& opt = {}) {
    if (spec.splitting == Splitting::split) return Elasticity::infinite();
    validate_ladder(lad, spec.a, spec.splitting);
    Rational best(davenport(lad.cl, opt), 2);
    std::vector<int> dj = dj_values(lad, units, spec.a, opt);
    for (int j = 1; j <= spec.a; ++j) {
        Rational term = Rational(j) + Rational(dj[j], 2);
        if (best < term) best = term;
    }
    if (spec.splitting == Splitting::ramified) {
        int dp = small_rel_davenport(lad.cl, *lad.p_fiber, opt).value + 1; // D_P
        Rational term = Rational(spec.a) + Rational(dp, 2);
        if (best < term) best = term;
    }
    if (best < Rational(spec.a))
        throw invariant_violation_error("elasticity fell below the conductor exponent");
    return Elasticity::finite(best);
}

/// Closed form when Cl(R_n) is cyclic of order h' with quotient of order h:
///   ramified, P principal:      h'/2 + max{0, a - (h-1)/2}
///   ramified, P non-principal:  h'/2 + max{0, a - (h-2)/4}
///   inert:                      h'/2 + max{0, a - h/2}
inline Elasticity elasticity_rn_cyclic(long long h, long long h_prime, int a, Splitting splitting,
                                       bool p_principal) {
    if (h < 1 || h_prime < 1 || a < 1) throw invalid_argument_error("h, h', a must be positive");
    if (h_prime % h != 0) throw invalid_argument_error("h must divide h'");
    if (splitting == Splitting::split)
        throw unsupported_case_error("split primes give infinite elasticity");
    Rational shift;
    if (splitting == Splitting::inert) {
        shift = Rational(a) - Rational(h, 2);
    } else if (p_principal) {
        shift = Rational(a) - Rational(h - 1, 2);
    } else {
        if (h % 2 != 0)
            throw precondition_error("a non-principal ramified class needs even quotient order");
        shift = Rational(a) - Rational(h - 2, 4);
    }
    if (shift < Rational(0)) shift = Rational(0);
    return Elasticity::finite(Rational(h_prime, 2) + shift);
}

/// |Cl(R_n)| from |Cl(maximal order)| = h: h * L(n,d) / [U : U(R_n)]. For
/// real fields the index comes from the fundamental unit; for imaginary ones
/// only d = -1, -3 carry extra torsion (factor 2 resp. 3 once n > 1).
inline long long cl_rn_order(long long h, const QuadraticOrderSpec& spec,
                             const QuadInt* unit = nullptr) {
    if (h < 1) throw invalid_argument_error("h must be positive");
    long long l = l_function(spec.n, spec.d);
    long long idx;
    if (spec.d > 0) {
        if (!unit) throw invalid_argument_error("real fields need the fundamental unit");
        idx = unit_index(*unit, spec.n);
    } else {
        idx = spec.n == 1 ? 1 : (spec.d == -1 ? 2 : spec.d == -3 ? 3 : 1);
    }
    if ((h * l) % idx != 0)
        throw invariant_violation_error("class-number transport is not integral");
    return h * l / idx;
}

enum class Cyclicity { cyclic, non_cyclic, ambiguous };

inline const char* to_string(Cyclicity c) {
    switch (c) {
        case Cyclicity::cyclic: return "cyclic";
        case Cyclicity::non_cyclic: return "non-cyclic";
        default: return "ambiguous";
    }
}

/// Which abelian groups of order h' admit a cyclic quotient of order h?
/// (Equivalently by duality: contain an element of order h.) Cyclic iff
/// Z_{h'} is the only candidate.
inline Cyclicity infer_cyclic(long long h_prime, long long h) {
    if (h < 1 || h_prime < 1 || h_prime % h != 0)
        throw invalid_argument_error("infer_cyclic needs h | h'");
    long long candidates = 0;
    bool cyclic_candidate = false;
    for (const auto& inv : abelian_groups_of_order(h_prime)) {
        long long exponent = inv.empty() ? 1 : inv.back();
        if (exponent % h != 0) continue;
        ++candidates;
        if (inv.size() <= 1) cyclic_candidate = true;
    }
    if (!cyclic_candidate) return Cyclicity::non_cyclic;
    return candidates == 1 ? Cyclicity::cyclic : Cyclicity::ambiguous;
}

/// Bundled class numbers of real quadratic fields, keyed by fundamental
/// discriminant; external data, overridable per call and per file.
class HTable {
public:
    static const HTable& bundled() {
        static HTable t = [] {
            HTable t;
            // squarefree d = 2..101, keyed by disc(Q(sqrt d))
            static constexpr std::pair<std::int64_t, long long> rows[] = {
                {8, 1},   {12, 1},  {5, 1},   {24, 1},  {28, 1},  {40, 2},  {44, 1},  {13, 1},
                {56, 1},  {60, 2},  {17, 1},  {76, 1},  {21, 1},  {88, 1},  {92, 1},  {104, 2},
                {29, 1},  {120, 2}, {124, 1}, {33, 1},  {136, 2}, {140, 2}, {37, 1},  {152, 1},
                {156, 2}, {41, 1},  {168, 2}, {172, 1}, {184, 1}, {188, 1}, {204, 2}, {53, 1},
                {220, 2}, {57, 1},  {232, 2}, {236, 1}, {61, 1},  {248, 1}, {65, 2},  {264, 2},
                {268, 1}, {69, 1},  {280, 2}, {284, 1}, {73, 1},  {296, 2}, {77, 1},  {312, 2},
                {316, 3}, {328, 4}, {332, 1}, {85, 2},  {344, 1}, {348, 2}, {89, 1},  {364, 2},
                {93, 1},  {376, 1}, {380, 2}, {97, 1},  {101, 1}};
            for (const auto& [dk, h] : rows) t.by_disc_[dk] = h;
            return t;
        }();
        return t;
    }

    // Lines "d_K h"; '#' starts a comment; blank lines ignored.
    static HTable from_stream(std::istream& in) {
        HTable t;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string body = line.substr(0, line.find('#'));
            std::istringstream ss(body);
            std::int64_t dk;
            long long h;
            if (!(ss >> dk)) continue; // blank or comment-only
            if (!(ss >> h) || h < 1)
                throw parse_error("h-table line " + std::to_string(lineno) + ": expected 'd_K h'");
            t.by_disc_[dk] = h;
        }
        return t;
    }

    std::optional<long long> lookup_disc(std::int64_t disc) const {
        auto it = by_disc_.find(disc);
        if (it == by_disc_.end()) return std::nullopt;
        return it->second;
    }
    std::optional<long long> lookup_field(std::int64_t d) const {
        return lookup_disc(fundamental_discriminant(d));
    }
    std::size_t size() const { return by_disc_.size(); }

private:
    std::map<std::int64_t, long long> by_disc_;
};

/// Inputs a caller may pin; anything absent is derived (or reported missing).
struct QuadPipelineOptions {
    std::optional<long long> h;       // |Cl(maximal order)| override
    std::optional<bool> p_principal;  // class of P principal downstairs?
    std::optional<LadderData> ladder; // supplied ladder (real fields)
    const HTable* table = &HTable::bundled();
    ZerosumOptions zerosum;
};

struct QuadPipelineResult {
    QuadraticOrderSpec spec;
    Elasticity rho = Elasticity::infinite();
    std::string route;  // "split-infinite" | "ladder-engine" | "cyclic-formula"
    std::string h_source; // "computed" | "input" | "table" | ""
    long long h = 0;
    long long h_prime = 0;
    long long l_value = 0;   // real fields
    long long unit_idx = 0;  // real fields
    std::string unit;        // real fields
    Cyclicity cyclicity = Cyclicity::ambiguous;
    bool used_p_principal = false;
    bool p_principal = false;
    std::vector<int> dj; // ladder route, indices 1..a
    std::vector<std::string> notes;
};

/// Full elasticity pipeline for R_n, n = p^a, in Q(sqrt d).
inline QuadPipelineResult elasticity_quadratic(std::int64_t d, std::int64_t p, int a,
                                               const QuadPipelineOptions& opt = {}) {
    QuadPipelineResult res;
    res.spec = make_order_spec(d, p, a);
    if (res.spec.splitting == Splitting::split) {
        res.rho = Elasticity::infinite();
        res.route = "split-infinite";
        res.notes.push_back("p splits: two primes over p share the same trace in R_n");
        return res;
    }

    if (d < 0) {
        TauLadder lad = tau_ladder_imaginary(res.spec);
        LadderData data = ladder_data(lad);
        UnitSteps units = unit_steps_imaginary(res.spec);
        res.h = lad.level[0].order();
        res.h_prime = lad.level[res.spec.a].order();
        res.h_source = "computed";
        long long transported = cl_rn_order(res.h, res.spec);
        if (transported != res.h_prime)
            throw invariant_violation_error("form count disagrees with class-number transport");
        res.dj = dj_values(data, units, res.spec.a, opt.zerosum);
        res.rho = elasticity_rn(res.spec, data, units, opt.zerosum);
        res.route = "ladder-engine";
        res.cyclicity = data.cl.cyclic() ? Cyclicity::cyclic : Cyclicity::non_cyclic;
        if (data.cl.cyclic()) {
            // [P] is principal downstairs iff its fiber is ker(tau_0) itself,
            // i.e. contains the identity class
            bool pp = res.spec.splitting == Splitting::ramified &&
                      data.p_fiber->contains(data.cl.zero());
            res.p_principal = pp;
            Elasticity cyc = elasticity_rn_cyclic(res.h, res.h_prime, res.spec.a,
                                                  res.spec.splitting, pp);
            if (!(cyc == res.rho))
                throw invariant_violation_error("ladder engine disagrees with the cyclic formula");
        }
        return res;
    }

    // real field
    if (opt.h) {
        res.h = *opt.h;
        res.h_source = "input";
    } else if (auto th = opt.table ? opt.table->lookup_field(d) : std::nullopt) {
        res.h = *th;
        res.h_source = "table";
        res.notes.push_back("h supplied from the bundled class-number table");
    } else {
        throw unsupported_case_error("no class number available for d = " + std::to_string(d) +
                                     "; pass h explicitly");
    }
    QuadInt u = fundamental_unit(d);
    res.unit = u.str();
    res.l_value = l_function(res.spec.n, d);
    res.unit_idx = unit_index(u, res.spec.n);
    res.h_prime = cl_rn_order(res.h, res.spec, &u);
    UnitSteps units = unit_steps_real(res.spec, u);

    if (opt.ladder) {
        validate_ladder(*opt.ladder, res.spec.a, res.spec.splitting);
        if (opt.ladder->cl.order() != res.h_prime)
            throw invalid_argument_error("supplied ladder order differs from computed |Cl(R_n)|");
        res.dj = dj_values(*opt.ladder, units, res.spec.a, opt.zerosum);
        res.rho = elasticity_rn(res.spec, *opt.ladder, units, opt.zerosum);
        res.route = "ladder-engine";
        res.cyclicity = opt.ladder->cl.cyclic() ? Cyclicity::cyclic : Cyclicity::non_cyclic;
        return res;
    }

    res.cyclicity = infer_cyclic(res.h_prime, res.h);
    if (res.cyclicity != Cyclicity::cyclic)
        throw unsupported_case_error("Cl(R_n) structure not forced by its order (" +
                                     std::string(to_string(res.cyclicity)) +
                                     "); supply a ladder");
    bool pp = true;
    if (res.spec.splitting == Splitting::ramified) {
        res.used_p_principal = true;
        if (opt.p_principal) {
            pp = *opt.p_principal;
        } else if (res.h == 1) {
            pp = true; // trivial class group: every ideal is principal
        } else {
            pp = ramified_prime_principal(d, p);
        }
        res.p_principal = pp;
    }
    res.rho = elasticity_rn_cyclic(res.h, res.h_prime, res.spec.a, res.spec.splitting, pp);
    res.route = "cyclic-formula";
    return res;
}

/// Verifies rho(R_{p^a}) <= rho(R_{p^b}) for a < b (same d, p), and that
/// equality happens exactly when both equal D(Cl(R_{p^a}))/2.
struct MonotonicityReport {
    QuadPipelineResult small, big;
    Rational half_davenport_small; // D(Cl(R_{p^a}))/2
    bool equal = false;
    bool equality_condition = false;
};

inline MonotonicityReport monotonicity_check(std::int64_t d, std::int64_t p, int a, int b,
                                             const QuadPipelineOptions& opt = {}) {
    if (b <= a) throw invalid_argument_error("monotonicity check needs a < b");
    MonotonicityReport rep;
    rep.small = elasticity_quadratic(d, p, a, opt);
    rep.big = elasticity_quadratic(d, p, b, opt);
    if (rep.small.rho.is_infinite() || rep.big.rho.is_infinite())
        throw unsupported_case_error("monotonicity check needs finite elasticities");
    // D(Cl(R_{p^a})): cyclic route knows it from h'; ladder route recomputes
    long long dav_small;
    if (rep.small.route == "cyclic-formula") {
        dav_small = rep.small.h_prime;
    } else {
        FabGroup cl = opt.ladder && d > 0 ? opt.ladder->cl
                                          : tau_ladder_imaginary(rep.small.spec)
                                                .level[rep.small.spec.a]
                                                .group;
        dav_small = davenport(cl, opt.zerosum);
    }
    rep.half_davenport_small = Rational(dav_small, 2);
    rep.equal = rep.small.rho == rep.big.rho;
    rep.equality_condition = rep.small.rho.value() == rep.half_davenport_small &&
                             rep.big.rho.value() == rep.half_davenport_small;
    if (rep.big.rho < rep.small.rho)
        throw invariant_violation_error("elasticity decreased down the tower");
    if (rep.equal != rep.equality_condition)
        throw invariant_violation_error("equality characterization failed");
    return rep;
}

} // namespace dav
