#include "adelic/dynamics.hpp"

#include <algorithm>
#include <map>

namespace adelic {

namespace {

PrimeSetExpr union_fold(const std::vector<PrimeSetExpr>& parts) {
    if (parts.empty()) return PrimeSetExpr::empty();
    PrimeSetExpr acc = parts[0];
    for (size_t i = 1; i < parts.size(); ++i) acc = PrimeSetExpr::union_of(acc, parts[i]);
    return acc;
}

std::vector<std::string> labels_of(const std::vector<std::pair<PrimeIdeal, long>>& supp) {
    std::vector<std::string> out;
    for (const auto& [P, e] : supp) {
        (void)e;
        out.push_back(P.label);
    }
    return out;
}

/// Explicit members of a set already known to be finite.
std::vector<PrimeIdeal> finite_members(const PrimeSetExpr& S, const Field& F) {
    PrimeSetNF nf = ps_normalize(S, F);
    if (!nf.residues.empty()) throw DomainError("expected a finite prime set");
    return nf.plus;
}

}  // namespace

// ---------------------------------------------------------------------------
// group elements

GroupElement ge_make(Element x, Element k) {
    if (k.is_zero()) throw DomainError("group elements need an invertible multiplier");
    return GroupElement{std::move(x), std::move(k)};
}

GroupElement ge_identity() { return GroupElement{Element(0), Element(1)}; }

GroupElement ge_compose(const GroupElement& g, const GroupElement& h, const Field& F) {
    return GroupElement{F.add(g.x, F.mul(g.k, h.x)), F.mul(g.k, h.k)};
}

GroupElement ge_inverse(const GroupElement& g, const Field& F) {
    Element ki = F.inv(g.k);
    return GroupElement{F.neg(F.mul(ki, g.x)), ki};
}

bool ge_equal(const GroupElement& g, const GroupElement& h) {
    return g.x == h.x && g.k == h.k;
}

// ---------------------------------------------------------------------------
// the action

OmegaPoint act(const GroupElement& g, const OmegaPoint& w, const Field& F) {
    if (g.k.is_zero()) throw DomainError("group elements need an invertible multiplier");
    SuperIdeal a2 = superideal_mul(g.k, w.a, F);
    Element global2 = F.add(g.x, F.mul(g.k, w.r.global));

    auto suppK = F.factor_element(g.k);
    std::vector<std::pair<PrimeIdeal, long>> suppX;
    if (!g.x.is_zero()) suppX = F.factor_element(g.x);

    // primes where either summand's valuation deviates from the bulk
    std::vector<PrimeIdeal> special;
    for (const auto& [P, e] : suppK) special.push_back(P);
    for (const auto& [P, e] : suppX)
        if (std::find(special.begin(), special.end(), P) == special.end())
            special.push_back(P);
    std::sort(special.begin(), special.end());

    auto vk_at = [&](const PrimeIdeal& P) {
        for (const auto& [Q, e] : suppK)
            if (Q == P) return e;
        return 0L;
    };
    auto vx_at = [&](const PrimeIdeal& P) {
        if (g.x.is_zero()) return ExtInt::infinity();
        return F.valuation_ext(g.x, P);
    };

    auto transform = [&](const LocalValue& lv, const ExtInt& vk, const ExtInt& vx) {
        ExtInt vkr = lv.valuation + vk;
        if (vx.inf) return LocalValue::generic(vkr, lv.not_in_k);
        if (vx != vkr) return LocalValue::generic(min(vx, vkr), lv.not_in_k);
        throw SymbolicCollision(
            "adding an exact element to a symbolic local value of equal valuation");
    };

    std::vector<std::pair<PrimeSetExpr, LocalValue>> ov2;
    for (const auto& [S, lv] : w.r.overrides) {
        if (lv.exact) {
            ov2.push_back({S, LocalValue::exact_k(F.add(g.x, F.mul(g.k, lv.value)))});
            continue;
        }
        if (special.empty()) {
            // x is zero or a unit of R, so both valuations are flat
            ov2.push_back({S, g.x.is_zero()
                                  ? lv
                                  : transform(lv, ExtInt::finite(0), ExtInt::finite(0))});
            continue;
        }
        std::vector<std::string> speciallabels;
        for (const auto& P : special) speciallabels.push_back(P.label);
        PrimeSetExpr bulk =
            PrimeSetExpr::intersect(S, PrimeSetExpr::complement(
                                           PrimeSetExpr::finite(speciallabels)));
        if (!ps_is_empty(bulk, F))
            ov2.push_back({bulk, transform(lv, ExtInt::finite(0),
                                           g.x.is_zero() ? ExtInt::infinity()
                                                         : ExtInt::finite(0))});
        for (const auto& P : special) {
            if (!ps_contains(S, P, F)) continue;
            ov2.push_back({PrimeSetExpr::finite({P.label}),
                           transform(lv, ExtInt::finite(vk_at(P)), vx_at(P))});
        }
    }
    return point_make(sketch_make(std::move(global2), std::move(ov2), F), std::move(a2));
}

// ---------------------------------------------------------------------------
// orbit closures and approximation

bool orbit_closure_contains(const OmegaPoint& base, const OmegaPoint& target,
                            const Field& F) {
    return ps_subset(zero_set(base.a), zero_set(target.a), F);
}

PrimeSetExpr quasi_orbit(const OmegaPoint& w) { return zero_set(w.a); }

ApproxResult approximate_into(const OmegaPoint& base, const BasicNeighborhood& V,
                              const Field& F) {
    const OmegaPoint& tgt = V.target;
    if (!orbit_closure_contains(base, tgt, F))
        throw DomainError("target lies outside the orbit closure of the base");
    PrimeSetExpr Zb = zero_set(tgt.a);

    for (const auto& [P, v] : V.exact) {
        if (ps_contains(Zb, P, F))
            throw DomainError("exact exponent constraint at a vanishing prime");
        ExtInt want = superideal_exp_at(tgt.a, P, F);
        if (want.inf || want.v != v)
            throw DomainError("exact exponent constraint disagrees with the target at " +
                              P.label);
    }
    for (const auto& [P, n] : V.floors) {
        if (!ps_contains(Zb, P, F))
            throw DomainError("floor constraint off the vanishing set at " + P.label);
        if (n < 0) throw DomainError("negative exponent floor");
    }

    auto need_exact = [&](const AdeleSketch& sk, const PrimeIdeal& P, const char* who) {
        LocalValue lv = sketch_local(sk, P, F);
        if (!lv.exact)
            throw InfeasibleSymbolic(std::string(who) +
                                     " first coordinate is symbolic at " + P.label);
        return lv.value;
    };
    for (const auto& [P, v] : V.exact) need_exact(base.r, P, "base");
    for (const auto& [P, n] : V.floors) need_exact(base.r, P, "base");

    // multiplier exponents: match exactly off the vanishing set, clear the
    // floors on it
    std::vector<PrimeIdeal> kprimes;
    std::vector<long> kexps;
    for (const auto& [P, v] : V.exact) {
        ExtInt cur = superideal_exp_at(base.a, P, F);
        kprimes.push_back(P);
        kexps.push_back(v - cur.v);
    }
    for (const auto& [P, n] : V.floors) {
        ExtInt cur = superideal_exp_at(base.a, P, F);
        if (cur.inf) continue;
        kprimes.push_back(P);
        kexps.push_back(n + std::abs(cur.v));
    }

    std::vector<PrimeIdeal> excluded = kprimes;
    for (const auto& [P, n] : V.floors) excluded.push_back(P);
    for (const auto& [P, m] : V.first) excluded.push_back(P);

    Element k(1);
    std::vector<std::string> transcript;
    if (!kprimes.empty()) {
        auto got = F.element_with_valuations(kprimes, kexps);
        if (!got) {
            // one auxiliary prime of inverse class makes the product principal
            const ClassGroup& G = F.class_group();
            int cls = G.identity;
            for (size_t i = 0; i < kprimes.size(); ++i)
                cls = G.compose(cls,
                                G.power(F.ideal_class_index(kprimes[i].lattice), kexps[i]));
            int want = G.inverse(cls);
            std::optional<PrimeIdeal> aux;
            Int p = 2;
            while (!aux && p <= F.search_bound()) {
                for (const auto& Q : F.factor_rational_prime(p.get_si()).primes) {
                    if (std::find(excluded.begin(), excluded.end(), Q) != excluded.end())
                        continue;
                    if (F.ideal_class_index(Q.lattice) == want) {
                        aux = Q;
                        break;
                    }
                }
                p = next_prime(p);
            }
            if (!aux) throw SearchExhausted("no auxiliary prime of the required class");
            transcript.push_back("auxiliary prime " + aux->label);
            kprimes.push_back(*aux);
            kexps.push_back(1);
            got = F.element_with_valuations(kprimes, kexps);
            if (!got) throw SearchExhausted("no multiplier with the prescribed valuations");
        }
        k = *got;
    }

    Element x(0);
    if (!V.first.empty()) {
        std::vector<PrimeIdeal> cprimes;
        std::vector<Element> targets;
        std::vector<long> precs;
        for (const auto& [P, m] : V.first) {
            Element sP = need_exact(tgt.r, P, "target");
            Element rP = need_exact(base.r, P, "base");
            cprimes.push_back(P);
            targets.push_back(F.sub(sP, F.mul(k, rP)));
            precs.push_back(m);
        }
        x = F.crt_approximate(cprimes, targets, precs);
    }

    GroupElement g{x, k};
    transcript.push_back("k = " + F.element_str(k));
    transcript.push_back("x = " + F.element_str(x));

    OmegaPoint moved = act(g, base, F);
    bool ok = true;
    for (const auto& [P, v] : V.exact) {
        ExtInt got2 = superideal_exp_at(moved.a, P, F);
        bool pass = !got2.inf && got2.v == v;
        transcript.push_back("second coordinate at " + P.label + ": exponent " +
                             got2.str() + ", required exactly " + std::to_string(v) +
                             (pass ? " [ok]" : " [fail]"));
        ok = ok && pass;
    }
    for (const auto& [P, n] : V.floors) {
        ExtInt got2 = superideal_exp_at(moved.a, P, F);
        bool pass = got2 >= ExtInt::finite(n);
        transcript.push_back("second coordinate at " + P.label + ": exponent " +
                             got2.str() + ", required at least " + std::to_string(n) +
                             (pass ? " [ok]" : " [fail]"));
        ok = ok && pass;
    }
    for (const auto& [P, m] : V.first) {
        ValInterval iv = local_sub(moved.r, tgt.r, P, F);
        bool pass = !iv.minus_inf && iv.lower >= ExtInt::finite(m);
        transcript.push_back("first coordinate at " + P.label + ": difference valuation " +
                             iv.lower.str() + ", required at least " + std::to_string(m) +
                             (pass ? " [ok]" : " [fail]"));
        ok = ok && pass;
    }
    if (!ok) throw DomainError("constructed move failed verification");
    return ApproxResult{g, std::move(transcript)};
}

// ---------------------------------------------------------------------------
// stabilizers

std::string stab_tag_name(StabTag t) {
    switch (t) {
        case StabTag::Trivial: return "Trivial";
        case StabTag::FullAffineOverR: return "FullAffineOverR";
        case StabTag::MultiplicativeLine: return "MultiplicativeLine";
        case StabTag::ConstraintSet: return "ConstraintSet";
        case StabTag::Unknown: return "Unknown";
    }
    return "?";
}

namespace {

struct SRegion {
    PrimeSetExpr E;
    ExtInt e;
    LocalValue lv;
    bool infinite;
};

std::vector<SRegion> regions_of(const OmegaPoint& w, const Field& F) {
    std::vector<std::pair<PrimeSetExpr, LocalValue>> parts = w.r.overrides;
    std::vector<PrimeSetExpr> covered;
    for (const auto& [S, v] : w.r.overrides) covered.push_back(S);
    PrimeSetExpr rest = covered.empty() ? PrimeSetExpr::all()
                                        : PrimeSetExpr::complement(union_fold(covered));
    parts.push_back({rest, LocalValue::exact_k(w.r.global)});

    std::vector<SRegion> out;
    for (const auto& [S, e] : w.a.pieces)
        for (const auto& [T, lv] : parts) {
            PrimeSetExpr E = PrimeSetExpr::intersect(S, T);
            if (ps_is_empty(E, F)) continue;
            out.push_back({E, e, lv, ps_cardinality(E, F).infinite});
        }
    return out;
}

/// Is the exact value m provably different from a symbolic value of
/// valuation v living somewhere on E?  (Witnessed by a prime where the
/// valuations disagree.)
bool exact_generic_mismatch(const Element& m, long v, const PrimeSetExpr& E,
                            const Field& F) {
    if (m.is_zero()) return true;  // infinite valuation against a finite one
    auto supp = F.factor_element(m);
    if (v != 0 && !ps_subset(E, PrimeSetExpr::finite(labels_of(supp)), F)) return true;
    for (const auto& [P, w] : supp)
        if (w != v && ps_contains(E, P, F)) return true;
    return false;
}

/// Does w_el satisfy v_P(w_el) >= e for every P in E?  (Exact data only;
/// fully decidable.)
bool region_bound_holds(const Element& w_el, const PrimeSetExpr& E, const ExtInt& e,
                        const Field& F) {
    if (w_el.is_zero()) return true;
    if (e.inf) return false;  // nonzero element, nonempty region
    auto supp = F.factor_element(w_el);
    if (e.v <= 0) {
        for (const auto& [P, v] : supp)
            if (v < e.v && ps_contains(E, P, F)) return false;
        return true;
    }
    std::vector<std::string> good;
    for (const auto& [P, v] : supp)
        if (v >= e.v) good.push_back(P.label);
    return ps_subset(E, PrimeSetExpr::finite(std::move(good)), F);
}

/// Shared analysis of the equality constraint x + (k-1) r_P = 0 over a set
/// of regions: returns Trivial when two local values are provably distinct
/// or a symbolic value provably avoids K, the common exact value when all
/// regions agree exactly, and Unknown when symbolic values could hide
/// either outcome.
struct EqualityAnalysis {
    enum { ForcesTrivial, CommonExact, Undecided } verdict;
    Element common;
};

EqualityAnalysis analyze_equality(const std::vector<SRegion>& regs, const Field& F) {
    std::vector<std::pair<Element, const SRegion*>> exacts;
    std::vector<const SRegion*> generics;
    for (const auto& R : regs) {
        if (R.lv.exact) {
            bool seen = false;
            for (const auto& [val, reg] : exacts)
                if (val == R.lv.value) seen = true;
            if (!seen) exacts.push_back({R.lv.value, &R});
        } else {
            if (R.lv.not_in_k) return {EqualityAnalysis::ForcesTrivial, {}};
            generics.push_back(&R);
        }
    }
    if (exacts.size() >= 2) return {EqualityAnalysis::ForcesTrivial, {}};
    for (const auto* g : generics)
        for (const auto& [val, reg] : exacts)
            if (exact_generic_mismatch(val, g->lv.valuation.v, g->E, F))
                return {EqualityAnalysis::ForcesTrivial, {}};
    for (size_t i = 0; i < generics.size(); ++i)
        for (size_t j = i + 1; j < generics.size(); ++j)
            if (generics[i]->lv.valuation != generics[j]->lv.valuation)
                return {EqualityAnalysis::ForcesTrivial, {}};
    if (!generics.empty()) return {EqualityAnalysis::Undecided, {}};
    return {EqualityAnalysis::CommonExact, exacts.front().first};
}

}  // namespace

StabilizerDescription stabilizer(const OmegaPoint& w, const Field& F,
                                 long refinement_cap) {
    std::vector<SRegion> regs = regions_of(w, F);
    PrimeSetExpr Z = zero_set(w.a);
    bool z_empty = ps_is_empty(Z, F);
    bool z_all = ps_equal(Z, PrimeSetExpr::all(), F);

    // a symbolic value outside K on the vanishing set pins k = 1, x = 0
    for (const auto& R : regs)
        if (R.e.inf && !R.lv.exact && R.lv.not_in_k)
            return {StabTag::Trivial, std::nullopt, {}};

    if (z_all) {
        EqualityAnalysis ea = analyze_equality(regs, F);
        if (ea.verdict == EqualityAnalysis::ForcesTrivial)
            return {StabTag::Trivial, std::nullopt, {}};
        if (ea.verdict == EqualityAnalysis::Undecided)
            return {StabTag::Unknown, std::nullopt, {}};
        return {StabTag::MultiplicativeLine, GroupElement{ea.common, Element(1)}, {}};
    }

    if (z_empty) {
        bool realizable = true;
        for (const auto& [S, e] : w.a.pieces)
            if (!e.inf && e.v != 0 && ps_cardinality(S, F).infinite) realizable = false;
        bool all_exact = true;
        for (const auto& R : regs) all_exact = all_exact && R.lv.exact;

        if (realizable && all_exact) {
            // the point is a candidate translate of (0, unit ideal)
            std::vector<PrimeIdeal> kprimes;
            std::vector<long> kexps;
            for (const auto& [S, e] : w.a.pieces) {
                if (e.inf || e.v == 0) continue;
                for (const auto& P : finite_members(S, F)) {
                    kprimes.push_back(P);
                    kexps.push_back(e.v);
                }
            }
            std::optional<Element> k0 = Element(1);
            if (!kprimes.empty()) k0 = F.element_with_valuations(kprimes, kexps);
            if (!k0) {
                // exponents are not the divisor of any single field element;
                // report the residual description
                std::vector<std::string> cs;
                cs.push_back("k ranges over the unit group of R");
                cs.push_back(
                    "x is constrained by v_P(x - (1 - k) r_P) >= e_P at every prime");
                return {StabTag::ConstraintSet, std::nullopt, std::move(cs)};
            }

            // translation part: match r to the listed precisions, chasing
            // denominators until the constraint set is closed
            std::map<PrimeIdeal, std::pair<Element, long>> constrained;
            auto local_at = [&](const PrimeIdeal& P) {
                return sketch_local(w.r, P, F).value;
            };
            auto exp_at = [&](const PrimeIdeal& P) {
                ExtInt e = superideal_exp_at(w.a, P, F);
                return e.v;  // finite: the vanishing set is empty
            };
            auto add_prime = [&](const PrimeIdeal& P) {
                if (constrained.count(P)) return false;
                constrained[P] = {local_at(P), exp_at(P)};
                return true;
            };
            // a pole at one prime over p makes the approximation denominator
            // divisible by p, so every prime over p needs a constraint
            auto add_over = [&](long p) {
                bool any = false;
                for (const auto& Q : F.factor_rational_prime(p).primes)
                    any = add_prime(Q) || any;
                return any;
            };
            for (size_t i = 0; i < kprimes.size(); ++i)
                if (kexps[i] > 0) add_prime(kprimes[i]);
            for (const auto& R : regs) {
                if (!R.lv.exact || R.lv.value.is_zero()) continue;
                for (const auto& [P, v] : F.factor_element(R.lv.value))
                    if (v < 0 && ps_contains(R.E, P, F)) add_over(P.p);
            }
            bool grew = true;
            while (grew) {
                grew = false;
                std::vector<long> batch;
                for (const auto& [P, tv] : constrained) {
                    if (tv.first.is_zero()) continue;
                    for (const auto& [Q, v] : F.factor_element(tv.first))
                        if (v < 0 && !constrained.count(Q)) batch.push_back(Q.p);
                }
                for (long p : batch) grew = add_over(p) || grew;
            }

            Element m(0);
            if (!constrained.empty()) {
                std::vector<PrimeIdeal> cp;
                std::vector<Element> ct;
                std::vector<long> cm;
                for (const auto& [P, tv] : constrained) {
                    cp.push_back(P);
                    ct.push_back(tv.first);
                    cm.push_back(tv.second);
                }
                m = F.crt_approximate(cp, ct, cm);
            }

            GroupElement g{m, *k0};
            OmegaPoint unit_point =
                point_make(sketch_make(Element(0), {}, F), superideal_unit());
            if (points_equivalent(w, act(g, unit_point, F), F, refinement_cap) == Tri::Yes)
                return {StabTag::FullAffineOverR, g, {}};
            return {StabTag::Unknown, std::nullopt, {}};
        }

        // infinite-support valuation obstructions: unbounded agreement with
        // the vanishing pattern is impossible for a nontrivial (x, k)
        bool role1 = false, role2 = false;
        for (const auto& R : regs) {
            if (!R.infinite || R.e.inf || R.e.v < 1) continue;
            if (!R.lv.exact) {
                if (R.lv.valuation.v < R.e.v) role1 = true;
                if (R.lv.valuation.v >= 1) role2 = true;
            } else if (R.lv.value.is_zero()) {
                role2 = true;
            } else {
                role1 = true;
            }
        }
        if (role1 && role2) return {StabTag::Trivial, std::nullopt, {}};

        if (all_exact) {
            // k is confined to the finite unit group and x is pinned by any
            // infinite piece of positive exponent; enumerate and verify
            const SRegion* force = nullptr;
            for (const auto& R : regs)
                if (R.infinite && !R.e.inf && R.e.v >= 1) force = &R;
            if (force) {
                Element c = force->lv.value;
                std::vector<GroupElement> survivors;
                for (const auto& u : F.unit_group().elements) {
                    Element x = F.mul(F.sub(Element(1), u), c);
                    bool ok = true;
                    for (const auto& R : regs) {
                        Element w_el =
                            F.add(x, F.mul(F.sub(u, Element(1)), R.lv.value));
                        if (!region_bound_holds(w_el, R.E, R.e, F)) {
                            ok = false;
                            break;
                        }
                    }
                    if (ok) survivors.push_back(GroupElement{x, u});
                }
                if (survivors.size() == 1) return {StabTag::Trivial, std::nullopt, {}};
                std::vector<std::string> cs;
                for (const auto& s : survivors)
                    cs.push_back("(x, k) = (" + F.element_str(s.x) + ", " +
                                 F.element_str(s.k) + ")");
                return {StabTag::ConstraintSet, std::nullopt, std::move(cs)};
            }
        }
        return {StabTag::Unknown, std::nullopt, {}};
    }

    // mixed vanishing set: the equality constraints on it decide k and x up
    // to the residual congruences off it
    std::vector<SRegion> zregs;
    for (const auto& R : regs)
        if (R.e.inf) zregs.push_back(R);
    EqualityAnalysis ea = analyze_equality(zregs, F);
    if (ea.verdict == EqualityAnalysis::ForcesTrivial)
        return {StabTag::Trivial, std::nullopt, {}};
    if (ea.verdict == EqualityAnalysis::Undecided)
        return {StabTag::Unknown, std::nullopt, {}};
    std::vector<std::string> cs;
    cs.push_back("x = (1 - k) * (" + F.element_str(ea.common) + ")");
    cs.push_back("v_P(k) = 0 at every prime off the vanishing set");
    cs.push_back("v_P((k - 1) * (r_P - (" + F.element_str(ea.common) +
                 "))) >= e_P at every prime off the vanishing set");
    return {StabTag::ConstraintSet, std::nullopt, std::move(cs)};
}

Tri same_stabilizer(const StabilizerDescription& s1, const StabilizerDescription& s2,
                    const Field& F) {
    if (s1.tag == StabTag::Unknown || s2.tag == StabTag::Unknown) return Tri::Unknown;
    if (s1.tag != s2.tag) {
        if (s1.tag == StabTag::ConstraintSet || s2.tag == StabTag::ConstraintSet)
            return Tri::Unknown;
        return Tri::No;
    }
    switch (s1.tag) {
        case StabTag::Trivial:
            return Tri::Yes;
        case StabTag::FullAffineOverR: {
            if (!s1.conjugator || !s2.conjugator) return Tri::Unknown;
            // equal iff the conjugators differ by a normalizer element:
            // unit multiplier and translation y with y(1-u) integral for
            // every unit u
            GroupElement h = ge_compose(ge_inverse(*s2.conjugator, F), *s1.conjugator, F);
            if (!F.is_unit(h.k)) return Tri::No;
            for (const auto& u : F.unit_group().elements)
                if (!F.is_integral(F.mul(h.x, F.sub(Element(1), u)))) return Tri::No;
            return Tri::Yes;
        }
        case StabTag::MultiplicativeLine:
            if (!s1.conjugator || !s2.conjugator) return Tri::Unknown;
            // the subgroup {(x0(1-k), k)} determines and is determined by x0
            return s1.conjugator->x == s2.conjugator->x ? Tri::Yes : Tri::No;
        case StabTag::ConstraintSet:
            return s1.constraints == s2.constraints ? Tri::Yes : Tri::Unknown;
        default:
            return Tri::Unknown;
    }
}

// ---------------------------------------------------------------------------
// trivial-stabilizer constructions

OmegaPoint trivial_stabilizer_point(const PrimeSetExpr& A, const Field& F,
                                    const std::optional<PrimeSetExpr>& family) {
    bool a_empty = ps_is_empty(A, F);
    bool a_all = ps_equal(A, PrimeSetExpr::all(), F);

    if (!a_empty) {
        SuperIdeal a =
            a_all ? superideal_zero()
                  : superideal_make({{A, ExtInt::infinity()},
                                     {PrimeSetExpr::complement(A), ExtInt::finite(0)}},
                                    F);
        PrimeIdeal witness = ps_smallest_member(A, F);
        AdeleSketch r = sketch_make(
            Element(0),
            {{PrimeSetExpr::finite({witness.label}),
              LocalValue::generic(ExtInt::finite(0), true)}},
            F);
        return point_make(std::move(r), std::move(a));
    }

    PrimeSetExpr Q = family.value_or(
        F.is_rational() ? PrimeSetExpr::residue_class(4, {1})
                        : PrimeSetExpr::residue_class(1, {0}, SplitFilter::Split));
    if (!ps_cardinality(Q, F).infinite)
        throw DomainError("the auxiliary prime family must be infinite");
    auto [Q1, Q2] = ps_split_infinite(Q, F);
    SuperIdeal a = superideal_make({{Q, ExtInt::finite(1)},
                                    {PrimeSetExpr::complement(Q), ExtInt::finite(0)}},
                                   F);
    AdeleSketch r = sketch_make(
        Element(0),
        {{Q1, LocalValue::generic(ExtInt::finite(0), false)},
         {Q2, LocalValue::generic(ExtInt::finite(1), false)}},
        F);
    return point_make(std::move(r), std::move(a));
}

OmegaPoint essential_freeness_witness(const Field& F) {
    OmegaPoint w = trivial_stabilizer_point(PrimeSetExpr::empty(), F);
    if (stabilizer(w, F).tag != StabTag::Trivial)
        throw DomainError("witness construction lost its triviality certificate");
    OmegaPoint unit_point = point_make(sketch_make(Element(0), {}, F), superideal_unit());
    OmegaPoint zero_point = point_make(sketch_make(Element(0), {}, F), superideal_zero());
    if (!orbit_closure_contains(w, unit_point, F) ||
        !orbit_closure_contains(w, zero_point, F) || !orbit_closure_contains(w, w, F))
        throw DomainError("witness orbit is not dense");
    return w;
}

// ---------------------------------------------------------------------------
// the primitive-ideal lattice

PrimIdealDescriptor primitive_ideal(PrimeSetExpr A) { return PrimIdealDescriptor{std::move(A)}; }

bool ideal_leq(const PrimIdealDescriptor& I, const PrimIdealDescriptor& J, const Field& F) {
    return ps_subset(I.A, J.A, F);
}

bool ideal_equal(const PrimIdealDescriptor& I, const PrimIdealDescriptor& J, const Field& F) {
    return ps_equal(I.A, J.A, F);
}

bool is_maximal(const PrimIdealDescriptor& I, const Field& F) {
    return ps_equal(I.A, PrimeSetExpr::all(), F);
}

AlgebraIdeal ideal_of_open(PowerCofiniteOpen U) { return AlgebraIdeal{std::move(U)}; }

bool algebra_ideal_leq(const AlgebraIdeal& a, const AlgebraIdeal& b) {
    return pc_leq(a.open, b.open);
}

AlgebraIdeal algebra_ideal_meet(const AlgebraIdeal& a, const AlgebraIdeal& b) {
    return AlgebraIdeal{pc_intersect(a.open, b.open)};
}

AlgebraIdeal algebra_ideal_join(const AlgebraIdeal& a, const AlgebraIdeal& b) {
    return AlgebraIdeal{pc_union(a.open, b.open)};
}

}  // namespace adelic
