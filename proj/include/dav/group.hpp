#pragma once
// Finite abelian groups presented by invariant factors, together with
// subgroups, cosets, quotients and homomorphisms. All values are immutable
// after construction and safe to share across threads.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dav/error.hpp"
#include "dav/intmath.hpp"

namespace dav {

using ElemIndex = std::uint32_t;

// One group element: one residue per invariant factor. The trivial group
// has the single empty-vector element.
struct Element {
    std::vector<std::int64_t> coords;
    auto operator<=>(const Element&) const = default;
};

/// A finite abelian group Z_{d1} + ... + Z_{dr} with d1 | d2 | ... | dr.
/// Elements are enumerated lexicographically on coordinates; all other code
/// identifies elements by their position in that enumeration.
class FabGroup {
public:
    FabGroup() : order_(1) {} // trivial group

    explicit FabGroup(std::vector<std::int64_t> invariant_factors)
        : factors_(std::move(invariant_factors)), order_(1) {
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            if (factors_[i] < 2)
                throw invalid_group_error("invariant factor must be >= 2");
            if (i + 1 < factors_.size() && factors_[i + 1] % factors_[i] != 0)
                throw invalid_group_error("invariant factors must form a divisibility chain");
            order_ *= factors_[i];
        }
    }

    const std::vector<std::int64_t>& factors() const { return factors_; }
    std::int64_t order() const { return order_; }
    std::size_t rank() const { return factors_.size(); }
    std::int64_t exponent() const { return factors_.empty() ? 1 : factors_.back(); }
    bool trivial() const { return order_ == 1; }
    bool cyclic() const { return factors_.size() <= 1; }

    bool operator==(const FabGroup& o) const { return factors_ == o.factors_; }

    Element element(ElemIndex i) const {
        if (static_cast<std::int64_t>(i) >= order_)
            throw element_domain_error("element index out of range");
        Element e;
        e.coords.resize(factors_.size());
        std::int64_t v = i;
        for (std::size_t t = factors_.size(); t-- > 0;) {
            e.coords[t] = v % factors_[t];
            v /= factors_[t];
        }
        return e;
    }

    ElemIndex index(const Element& e) const {
        if (e.coords.size() != factors_.size())
            throw element_domain_error("element rank does not match group");
        std::int64_t v = 0;
        for (std::size_t t = 0; t < factors_.size(); ++t) {
            if (e.coords[t] < 0 || e.coords[t] >= factors_[t])
                throw element_domain_error("element coordinate out of range");
            v = v * factors_[t] + e.coords[t];
        }
        return static_cast<ElemIndex>(v);
    }

    // Index of the element with the given coordinates reduced mod factors.
    ElemIndex index_reduced(const std::vector<std::int64_t>& coords) const {
        if (coords.size() != factors_.size())
            throw element_domain_error("element rank does not match group");
        std::int64_t v = 0;
        for (std::size_t t = 0; t < factors_.size(); ++t) {
            std::int64_t c = coords[t] % factors_[t];
            if (c < 0) c += factors_[t];
            v = v * factors_[t] + c;
        }
        return static_cast<ElemIndex>(v);
    }

    ElemIndex zero() const { return 0; }

    ElemIndex add(ElemIndex a, ElemIndex b) const {
        std::int64_t va = a, vb = b, out = 0;
        // Peel coordinates from the least significant end; recombine at the end.
        std::int64_t place = 1;
        for (std::size_t t = factors_.size(); t-- > 0;) {
            const std::int64_t f = factors_[t];
            std::int64_t ca = va % f, cb = vb % f;
            va /= f;
            vb /= f;
            out += ((ca + cb) % f) * place;
            place *= f;
        }
        return static_cast<ElemIndex>(out);
    }

    ElemIndex neg(ElemIndex a) const {
        std::int64_t va = a, out = 0, place = 1;
        for (std::size_t t = factors_.size(); t-- > 0;) {
            const std::int64_t f = factors_[t];
            std::int64_t ca = va % f;
            va /= f;
            out += ((f - ca) % f) * place;
            place *= f;
        }
        return static_cast<ElemIndex>(out);
    }

    ElemIndex scalar(ElemIndex a, std::int64_t k) const {
        std::int64_t va = a, out = 0, place = 1;
        for (std::size_t t = factors_.size(); t-- > 0;) {
            const std::int64_t f = factors_[t];
            std::int64_t ca = va % f;
            va /= f;
            std::int64_t c = ((ca % f) * (((k % f) + f) % f)) % f;
            out += c * place;
            place *= f;
        }
        return static_cast<ElemIndex>(out);
    }

    std::int64_t element_order(ElemIndex a) const {
        std::int64_t ord = 1;
        std::int64_t va = a;
        for (std::size_t t = factors_.size(); t-- > 0;) {
            const std::int64_t f = factors_[t];
            std::int64_t ca = va % f;
            va /= f;
            ord = std::lcm(ord, f / std::gcd(ca, f));
        }
        return ord;
    }

    std::string key() const {
        std::string s = "[";
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(factors_[i]);
        }
        return s + "]";
    }

private:
    std::vector<std::int64_t> factors_;
    std::int64_t order_;
};

// A canonically sorted, duplicate-free set of elements of one group.
struct Subset {
    std::vector<ElemIndex> elems; // sorted ascending, unique

    static Subset of(const FabGroup& g, std::vector<ElemIndex> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        for (ElemIndex e : v)
            if (static_cast<std::int64_t>(e) >= g.order())
                throw element_domain_error("subset element outside group");
        return Subset{std::move(v)};
    }

    bool contains(ElemIndex e) const {
        return std::binary_search(elems.begin(), elems.end(), e);
    }
    std::size_t size() const { return elems.size(); }
    bool empty() const { return elems.empty(); }
    bool operator==(const Subset&) const = default;
};

inline Subset set_difference(const Subset& a, const Subset& b) {
    Subset out;
    std::set_difference(a.elems.begin(), a.elems.end(), b.elems.begin(), b.elems.end(),
                        std::back_inserter(out.elems));
    return out;
}

inline bool is_subset_of(const Subset& a, const Subset& b) {
    return std::includes(b.elems.begin(), b.elems.end(), a.elems.begin(), a.elems.end());
}

// A subgroup stored as an explicit element set; the generators it was built
// from are kept for provenance.
struct Subgroup {
    Subset set;
    std::vector<ElemIndex> generators;

    std::size_t size() const { return set.size(); }
    bool operator==(const Subgroup& o) const { return set == o.set; }
};

inline bool is_subgroup(const FabGroup& g, const Subset& s) {
    if (!s.contains(g.zero())) return false;
    for (ElemIndex a : s.elems)
        for (ElemIndex b : s.elems)
            if (!s.contains(g.add(a, b))) return false;
    return true;
}

/// Normalizes an arbitrary list of cyclic orders into invariant-factor form
/// via elementary divisors. Factors <= 1 are rejected; the empty list gives
/// the trivial group.
inline FabGroup make_group(const std::vector<std::int64_t>& moduli) {
    for (std::int64_t m : moduli)
        if (m <= 1) throw invalid_group_error("group modulus must be >= 2");
    // Collect prime-power elementary divisors per prime, largest first.
    std::map<std::int64_t, std::vector<int>> exps;
    std::size_t height = 0;
    for (std::int64_t m : moduli)
        for (const auto& pp : factorize(m))
            exps[pp.p].push_back(pp.e);
    for (auto& [p, v] : exps) {
        std::sort(v.rbegin(), v.rend());
        height = std::max(height, v.size());
    }
    std::vector<std::int64_t> inv(height, 1);
    for (auto& [p, v] : exps)
        for (std::size_t i = 0; i < v.size(); ++i)
            inv[i] *= ipow(p, v[i]); // inv[0] = largest factor
    std::reverse(inv.begin(), inv.end());
    return FabGroup(std::move(inv));
}

/// Smallest subgroup containing gens, by closure iteration.
inline Subgroup subgroup_generated(const FabGroup& g, const std::vector<ElemIndex>& gens) {
    for (ElemIndex e : gens)
        if (static_cast<std::int64_t>(e) >= g.order())
            throw element_domain_error("generator outside group");
    std::vector<char> seen(g.order(), 0);
    std::vector<ElemIndex> stack{g.zero()};
    seen[g.zero()] = 1;
    std::vector<ElemIndex> members;
    while (!stack.empty()) {
        ElemIndex x = stack.back();
        stack.pop_back();
        members.push_back(x);
        for (ElemIndex gen : gens) {
            ElemIndex y = g.add(x, gen);
            if (!seen[y]) {
                seen[y] = 1;
                stack.push_back(y);
            }
        }
    }
    return Subgroup{Subset::of(g, std::move(members)), gens};
}

inline void require_subgroup(const FabGroup& g, const Subset& s) {
    if (!is_subgroup(g, s))
        throw invalid_subgroup_error("set is not a subgroup");
}

/// Partition of G into cosets of H, ordered by minimal representative.
inline std::vector<Subset> cosets(const FabGroup& g, const Subset& h) {
    require_subgroup(g, h);
    std::vector<char> used(g.order(), 0);
    std::vector<Subset> out;
    for (std::int64_t rep = 0; rep < g.order(); ++rep) {
        if (used[rep]) continue;
        std::vector<ElemIndex> c;
        c.reserve(h.size());
        for (ElemIndex x : h.elems) {
            ElemIndex y = g.add(static_cast<ElemIndex>(rep), x);
            used[y] = 1;
            c.push_back(y);
        }
        out.push_back(Subset::of(g, std::move(c)));
    }
    return out;
}

/// Homomorphism given by the images of the source invariant-factor generators.
struct GroupHom {
    FabGroup source;
    FabGroup target;
    std::vector<ElemIndex> gen_images; // one per source invariant factor

    ElemIndex apply(ElemIndex x) const {
        Element e = source.element(x);
        ElemIndex y = target.zero();
        for (std::size_t t = 0; t < gen_images.size(); ++t)
            y = target.add(y, target.scalar(gen_images[t], e.coords[t]));
        return y;
    }

    Subset image_of(const Subset& s) const {
        std::vector<ElemIndex> v;
        v.reserve(s.size());
        for (ElemIndex x : s.elems) v.push_back(apply(x));
        return Subset::of(target, std::move(v));
    }
};

inline GroupHom compose_hom(const GroupHom& outer, const GroupHom& inner) {
    if (!(inner.target == outer.source))
        throw invalid_argument_error("hom composition: target/source mismatch");
    std::vector<ElemIndex> images;
    images.reserve(inner.gen_images.size());
    for (ElemIndex i : inner.gen_images) images.push_back(outer.apply(i));
    return GroupHom{inner.source, outer.target, std::move(images)};
}

inline GroupHom make_hom(FabGroup source, FabGroup target, std::vector<ElemIndex> images) {
    if (images.size() != source.rank())
        throw invalid_argument_error("homomorphism needs one image per source generator");
    for (std::size_t t = 0; t < images.size(); ++t) {
        if (static_cast<std::int64_t>(images[t]) >= target.order())
            throw element_domain_error("generator image outside target group");
        if (source.factors()[t] % target.element_order(images[t]) != 0)
            throw invalid_argument_error("generator image order does not divide source factor");
    }
    return GroupHom{std::move(source), std::move(target), std::move(images)};
}

/// {x in source | f(x) in S}. S must lie inside the target group.
inline Subset preimage(const GroupHom& f, const Subset& s) {
    for (ElemIndex e : s.elems)
        if (static_cast<std::int64_t>(e) >= f.target.order())
            throw element_domain_error("subset not contained in hom target");
    std::vector<ElemIndex> v;
    for (std::int64_t x = 0; x < f.source.order(); ++x)
        if (s.contains(f.apply(static_cast<ElemIndex>(x))))
            v.push_back(static_cast<ElemIndex>(x));
    return Subset::of(f.source, std::move(v));
}

/// {-s | s in S}, canonically sorted.
inline Subset negate_set(const FabGroup& g, const Subset& s) {
    std::vector<ElemIndex> v;
    v.reserve(s.size());
    for (ElemIndex e : s.elems) {
        if (static_cast<std::int64_t>(e) >= g.order())
            throw element_domain_error("subset element outside group");
        v.push_back(g.neg(e));
    }
    return Subset::of(g, std::move(v));
}

/// All invariant-factor presentations of abelian groups of the given order,
/// in a fixed deterministic order.
inline std::vector<std::vector<std::int64_t>> abelian_groups_of_order(std::int64_t n) {
    if (n < 1) throw invalid_argument_error("group order must be positive");
    // Partitions of each prime exponent, then merge per-prime chains.
    auto partitions = [](int n) {
        std::vector<std::vector<int>> out;
        std::vector<int> cur;
        std::function<void(int, int)> rec = [&](int left, int maxpart) {
            if (left == 0) {
                out.push_back(cur);
                return;
            }
            for (int k = std::min(left, maxpart); k >= 1; --k) {
                cur.push_back(k);
                rec(left - k, k);
                cur.pop_back();
            }
        };
        rec(n, n);
        return out;
    };
    std::vector<PrimePower> fact = factorize(n);
    std::vector<std::vector<std::vector<int>>> parts;
    for (const auto& pp : fact) parts.push_back(partitions(pp.e));
    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::size_t> pick(fact.size(), 0);
    while (true) {
        std::size_t height = 0;
        for (std::size_t i = 0; i < fact.size(); ++i)
            height = std::max(height, parts[i][pick[i]].size());
        std::vector<std::int64_t> inv(height, 1);
        for (std::size_t i = 0; i < fact.size(); ++i) {
            const auto& part = parts[i][pick[i]]; // descending
            for (std::size_t j = 0; j < part.size(); ++j)
                inv[j] *= ipow(fact[i].p, part[j]);
        }
        std::reverse(inv.begin(), inv.end()); // ascending divisibility chain
        out.push_back(std::move(inv));
        // advance odometer
        std::size_t i = 0;
        for (; i < fact.size(); ++i) {
            if (++pick[i] < parts[i].size()) break;
            pick[i] = 0;
        }
        if (i == fact.size() && !fact.empty()) break;
        if (fact.empty()) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Identification of an abstract finite abelian group given by an addition
/// table: returns the invariant-factor group it is isomorphic to plus an
/// explicit isomorphism (table index -> element index).
struct StructureResult {
    FabGroup group;
    std::vector<ElemIndex> to_group; // bijection, table index -> group element
};

inline StructureResult structure_from_table(
    std::int64_t n, const std::function<ElemIndex(ElemIndex, ElemIndex)>& add) {
    // Element orders; identity must be index 0.
    std::vector<std::int64_t> ord(n, 0);
    std::int64_t exponent = 1;
    for (std::int64_t x = 0; x < n; ++x) {
        ElemIndex y = static_cast<ElemIndex>(x);
        std::int64_t k = 1;
        while (y != 0) {
            y = add(y, static_cast<ElemIndex>(x));
            ++k;
            if (k > n) throw invariant_violation_error("table element order exceeds group order");
        }
        ord[x] = k;
        exponent = std::lcm(exponent, k);
    }

    // Pick the unique invariant-factor chain with matching order-divisor counts.
    std::vector<std::int64_t> chosen;
    for (const auto& cand : abelian_groups_of_order(n)) {
        if ((cand.empty() ? 1 : cand.back()) != exponent) continue;
        bool ok = true;
        for (std::int64_t e : divisors(exponent)) {
            std::int64_t expect = 1;
            for (std::int64_t f : cand) expect *= std::gcd(e, f);
            std::int64_t got = 0;
            for (std::int64_t x = 0; x < n; ++x)
                if (e % ord[x] == 0) ++got;
            if (expect != got) { ok = false; break; }
        }
        if (ok) { chosen = cand; break; }
    }
    if (n > 1 && chosen.empty())
        throw invariant_violation_error("no abelian structure matches the table");
    FabGroup grp = n == 1 ? FabGroup() : FabGroup(chosen);

    // Find generators realizing the decomposition: one element per factor,
    // largest factor first, each generating a summand independent from the
    // span of the ones already chosen. Backtracking keeps this exhaustive.
    const std::size_t r = grp.rank();
    std::vector<ElemIndex> gens(r, 0);
    std::vector<char> in_span(n, 0);
    in_span[0] = 1;
    std::vector<ElemIndex> span{0};

    std::function<bool(std::size_t)> place = [&](std::size_t t) -> bool {
        if (t == r) return true;
        const std::int64_t f = grp.factors()[r - 1 - t]; // largest first
        for (std::int64_t cand = 1; cand < n; ++cand) {
            if (ord[cand] != f) continue;
            bool direct = true;
            ElemIndex y = static_cast<ElemIndex>(cand);
            for (std::int64_t k = 1; k < f; ++k) {
                if (in_span[y]) { direct = false; break; }
                y = add(y, static_cast<ElemIndex>(cand));
            }
            if (!direct) continue;
            // extend span by <cand>
            std::vector<ElemIndex> added;
            y = static_cast<ElemIndex>(cand);
            for (std::int64_t k = 1; k < f; ++k) {
                for (ElemIndex s : span) {
                    ElemIndex z = add(s, y);
                    if (!in_span[z]) {
                        in_span[z] = 1;
                        added.push_back(z);
                    }
                }
                y = add(y, static_cast<ElemIndex>(cand));
            }
            span.insert(span.end(), added.begin(), added.end());
            gens[r - 1 - t] = static_cast<ElemIndex>(cand);
            if (place(t + 1)) return true;
            for (ElemIndex z : added) in_span[z] = 0;
            span.resize(span.size() - added.size());
        }
        return false;
    };
    if (!place(0))
        throw invariant_violation_error("failed to split table group into cyclic summands");

    // Map every coordinate tuple to its table element.
    std::vector<ElemIndex> to_group(n, 0);
    std::vector<char> hit(n, 0);
    for (std::int64_t i = 0; i < grp.order(); ++i) {
        Element e = grp.element(static_cast<ElemIndex>(i));
        ElemIndex x = 0;
        for (std::size_t t = 0; t < r; ++t) {
            ElemIndex y = 0;
            for (std::int64_t k = 0; k < e.coords[t]; ++k) y = add(y, gens[t]);
            x = add(x, y);
        }
        if (hit[x]) throw invariant_violation_error("cyclic summands are not independent");
        hit[x] = 1;
        to_group[x] = static_cast<ElemIndex>(i);
    }
    return StructureResult{std::move(grp), std::move(to_group)};
}

/// Quotient group G/H in invariant-factor form plus the natural projection.
struct QuotientResult {
    FabGroup group;
    GroupHom projection;
};

inline QuotientResult quotient(const FabGroup& g, const Subset& h) {
    std::vector<Subset> cls = cosets(g, h); // validates H
    const std::int64_t q = static_cast<std::int64_t>(cls.size());
    std::vector<ElemIndex> coset_of(g.order());
    for (std::size_t c = 0; c < cls.size(); ++c)
        for (ElemIndex x : cls[c].elems) coset_of[x] = static_cast<ElemIndex>(c);
    auto add = [&](ElemIndex a, ElemIndex b) -> ElemIndex {
        return coset_of[g.add(cls[a].elems.front(), cls[b].elems.front())];
    };
    StructureResult st = structure_from_table(q, add);

    std::vector<ElemIndex> images(g.rank());
    for (std::size_t t = 0; t < g.rank(); ++t) {
        Element gen;
        gen.coords.assign(g.rank(), 0);
        gen.coords[t] = 1;
        images[t] = st.to_group[coset_of[g.index(gen)]];
    }
    GroupHom proj = make_hom(g, st.group, std::move(images));
    return QuotientResult{st.group, std::move(proj)};
}

/// Every subgroup of G, found by closing the generation lattice: repeatedly
/// extend each known subgroup by one extra generator until a fixpoint.
inline std::vector<Subgroup> all_subgroups(const FabGroup& g) {
    std::set<std::vector<ElemIndex>> seen;
    std::vector<Subgroup> out;
    Subgroup triv = subgroup_generated(g, {});
    seen.insert(triv.set.elems);
    out.push_back(triv);
    for (std::size_t head = 0; head < out.size(); ++head) {
        Subgroup cur = out[head]; // copy: out grows below
        for (std::int64_t e = 1; e < g.order(); ++e) {
            if (cur.set.contains(static_cast<ElemIndex>(e))) continue;
            std::vector<ElemIndex> gens = cur.generators;
            gens.push_back(static_cast<ElemIndex>(e));
            Subgroup ext = subgroup_generated(g, gens);
            if (seen.insert(ext.set.elems).second) out.push_back(std::move(ext));
        }
    }
    std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
        if (a.set.size() != b.set.size()) return a.set.size() < b.set.size();
        return a.set.elems < b.set.elems;
    });
    return out;
}

} // namespace dav
