#include "adelic/omega.hpp"

#include <algorithm>

namespace adelic {

namespace {

ExtInt ext_min(const ExtInt& a, const ExtInt& b) { return a < b ? a : b; }

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

}  // namespace

std::string tri_name(Tri t) {
    switch (t) {
        case Tri::Yes: return "yes";
        case Tri::No: return "no";
        case Tri::Unknown: return "unknown";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// superideals

SuperIdeal superideal_make(std::vector<std::pair<PrimeSetExpr, ExtInt>> pieces,
                           const Field& F) {
    std::vector<std::pair<PrimeSetExpr, ExtInt>> kept;
    for (auto& [S, e] : pieces)
        if (!ps_is_empty(S, F)) kept.push_back({std::move(S), e});
    if (kept.empty()) throw DomainError("superideal pieces must cover every prime");
    for (size_t i = 0; i < kept.size(); ++i)
        for (size_t j = i + 1; j < kept.size(); ++j)
            if (!ps_is_empty(PrimeSetExpr::intersect(kept[i].first, kept[j].first), F))
                throw DomainError("superideal pieces overlap");
    std::vector<PrimeSetExpr> all;
    for (const auto& [S, e] : kept) all.push_back(S);
    if (!ps_equal(union_fold(all), PrimeSetExpr::all(), F))
        throw DomainError("superideal pieces must cover every prime");
    for (const auto& [S, e] : kept)
        if (!e.inf && e.v < 0 && ps_cardinality(S, F).infinite)
            throw DomainError("negative exponents are only allowed on finite sets");
    return SuperIdeal{std::move(kept)};
}

SuperIdeal superideal_unit() {
    return SuperIdeal{{{PrimeSetExpr::all(), ExtInt::finite(0)}}};
}

SuperIdeal superideal_zero() {
    return SuperIdeal{{{PrimeSetExpr::all(), ExtInt::infinity()}}};
}

SuperIdeal superideal_of(const Element& k, const Field& F, bool allow_zero) {
    if (k.is_zero()) {
        if (!allow_zero) throw DomainError("superideal of zero requires the explicit flag");
        return superideal_zero();
    }
    auto supp = F.factor_element(k);
    if (supp.empty()) return superideal_unit();
    std::vector<std::pair<PrimeSetExpr, ExtInt>> pieces;
    for (const auto& [P, e] : supp)
        pieces.push_back({PrimeSetExpr::finite({P.label}), ExtInt::finite(e)});
    pieces.push_back({PrimeSetExpr::complement(PrimeSetExpr::finite(labels_of(supp))),
                      ExtInt::finite(0)});
    return SuperIdeal{std::move(pieces)};
}

SuperIdeal superideal_mul(const Element& k, const SuperIdeal& a, const Field& F) {
    if (k.is_zero()) throw DomainError("scaling a superideal by zero");
    auto supp = F.factor_element(k);
    if (supp.empty()) return a;
    PrimeSetExpr suppExpr = PrimeSetExpr::finite(labels_of(supp));
    std::vector<std::pair<PrimeSetExpr, ExtInt>> pieces;
    for (const auto& [S, e] : a.pieces)
        pieces.push_back({PrimeSetExpr::intersect(S, PrimeSetExpr::complement(suppExpr)), e});
    for (const auto& [P, v] : supp)
        pieces.push_back({PrimeSetExpr::finite({P.label}),
                          superideal_exp_at(a, P, F) + ExtInt::finite(v)});
    return superideal_make(std::move(pieces), F);
}

PrimeSetExpr zero_set(const SuperIdeal& a) {
    std::vector<PrimeSetExpr> parts;
    for (const auto& [S, e] : a.pieces)
        if (e.inf) parts.push_back(S);
    return union_fold(parts);
}

ExtInt superideal_exp_at(const SuperIdeal& a, const PrimeIdeal& P, const Field& F) {
    for (const auto& [S, e] : a.pieces)
        if (ps_contains(S, P, F)) return e;
    throw DomainError("superideal pieces do not cover " + P.label);
}

bool superideal_equal(const SuperIdeal& a, const SuperIdeal& b, const Field& F) {
    for (const auto& [S, e] : a.pieces)
        for (const auto& [T, f] : b.pieces)
            if (e != f && !ps_is_empty(PrimeSetExpr::intersect(S, T), F)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// sketches

LocalValue LocalValue::generic(ExtInt val, bool not_in_k) {
    if (val.inf) {
        if (not_in_k) throw DomainError("a local value of infinite valuation lies in K");
        return exact_k(Element(0));
    }
    LocalValue v;
    v.exact = false;
    v.valuation = val;
    v.not_in_k = not_in_k;
    return v;
}

AdeleSketch sketch_make(Element global,
                        std::vector<std::pair<PrimeSetExpr, LocalValue>> overrides,
                        const Field& F) {
    std::vector<std::pair<PrimeSetExpr, LocalValue>> kept;
    for (auto& [S, v] : overrides)
        if (!ps_is_empty(S, F)) kept.push_back({std::move(S), std::move(v)});
    for (size_t i = 0; i < kept.size(); ++i)
        for (size_t j = i + 1; j < kept.size(); ++j)
            if (!ps_is_empty(PrimeSetExpr::intersect(kept[i].first, kept[j].first), F))
                throw DomainError("sketch overrides overlap");
    for (const auto& [S, v] : kept)
        if (!v.exact && !v.valuation.inf && v.valuation.v < 0 &&
            ps_cardinality(S, F).infinite)
            throw DomainError("negative valuations are only allowed on finite sets");
    return AdeleSketch{std::move(global), std::move(kept)};
}

LocalValue sketch_local(const AdeleSketch& r, const PrimeIdeal& P, const Field& F) {
    for (const auto& [S, v] : r.overrides)
        if (ps_contains(S, P, F)) return v;
    return LocalValue::exact_k(r.global);
}

ExtInt local_valuation(const LocalValue& v, const PrimeIdeal& P, const Field& F) {
    if (v.exact) return F.valuation_ext(v.value, P);
    return v.valuation;
}

OmegaPoint point_make(AdeleSketch r, SuperIdeal a) {
    return OmegaPoint{std::move(r), std::move(a)};
}

// ---------------------------------------------------------------------------
// valuation arithmetic

ValInterval local_sub(const AdeleSketch& r, const AdeleSketch& s, const PrimeIdeal& P,
                      const Field& F) {
    LocalValue lr = sketch_local(r, P, F), ls = sketch_local(s, P, F);
    if (lr.exact && ls.exact)
        return ValInterval::exactly(F.valuation_ext(F.sub(lr.value, ls.value), P));
    ExtInt v1 = local_valuation(lr, P, F), v2 = local_valuation(ls, P, F);
    if (v1 != v2) return ValInterval::exactly(ext_min(v1, v2));
    return ValInterval::at_least(v1);
}

// ---------------------------------------------------------------------------
// equivalence

namespace {

bool same_expr(const PrimeSetExpr& a, const PrimeSetExpr& b) {
    return ps_print(a) == ps_print(b);
}

bool structurally_equal(const OmegaPoint& o1, const OmegaPoint& o2) {
    if (o1.a.pieces.size() != o2.a.pieces.size()) return false;
    for (size_t i = 0; i < o1.a.pieces.size(); ++i)
        if (o1.a.pieces[i].second != o2.a.pieces[i].second ||
            !same_expr(o1.a.pieces[i].first, o2.a.pieces[i].first))
            return false;
    if (o1.r.global != o2.r.global) return false;
    if (o1.r.overrides.size() != o2.r.overrides.size()) return false;
    for (size_t i = 0; i < o1.r.overrides.size(); ++i)
        if (!(o1.r.overrides[i].second == o2.r.overrides[i].second) ||
            !same_expr(o1.r.overrides[i].first, o2.r.overrides[i].first))
            return false;
    return true;
}

// one maximal region on which the exponent and both local descriptors are
// constant; E is known nonempty
struct Region {
    PrimeSetExpr E;
    ExtInt e;
    LocalValue l1, l2;
};

// congruence v_P(l1 - l2) >= e on all of E, with e = inf read as equality
Tri analyze_region(const Region& R, const Field& F) {
    const LocalValue& l1 = R.l1;
    const LocalValue& l2 = R.l2;

    if (l1.exact && l2.exact) {
        Element d = F.sub(l1.value, l2.value);
        if (d.is_zero()) return Tri::Yes;
        if (R.e.inf) return Tri::No;
        long e = R.e.v;
        auto supp = F.factor_element(d);
        if (e <= 0) {
            // off the support the valuation is 0 >= e; only listed primes
            // can dip below
            for (const auto& [P, w] : supp)
                if (w < e && ps_contains(R.E, P, F)) return Tri::No;
            return Tri::Yes;
        }
        std::vector<std::string> good;
        for (const auto& [P, w] : supp)
            if (w >= e) good.push_back(P.label);
        return ps_subset(R.E, PrimeSetExpr::finite(std::move(good)), F) ? Tri::Yes
                                                                        : Tri::No;
    }

    // normalize: x exact (if any), g generic
    const LocalValue* ex = l1.exact ? &l1 : (l2.exact ? &l2 : nullptr);
    const LocalValue* ge = l1.exact ? &l2 : &l1;

    if (R.e.inf) {
        // equality of local values required
        if (ex) {
            if (ge->not_in_k) return Tri::No;
            ExtInt v = ge->valuation;  // finite by construction
            if (ex->value.is_zero()) return Tri::No;
            auto supp = F.factor_element(ex->value);
            PrimeSetExpr suppExpr = PrimeSetExpr::finite(labels_of(supp));
            if (v.v != 0 && !ps_subset(R.E, suppExpr, F)) return Tri::No;
            for (const auto& [P, w] : supp)
                if (w != v.v && ps_contains(R.E, P, F)) return Tri::No;
            return Tri::Unknown;
        }
        return l1.valuation != l2.valuation ? Tri::No : Tri::Unknown;
    }

    long e = R.e.v;
    if (!ex) {
        // two symbolic values
        ExtInt v1 = l1.valuation, v2 = l2.valuation;
        if (v1 != v2) return ext_min(v1, v2) >= ExtInt::finite(e) ? Tri::Yes : Tri::No;
        return v1 >= ExtInt::finite(e) ? Tri::Yes : Tri::Unknown;
    }

    long v = ge->valuation.v;
    if (ex->value.is_zero())
        return v >= e ? Tri::Yes : Tri::No;  // difference has exact valuation v
    bool unknown = false;
    auto supp = F.factor_element(ex->value);
    PrimeSetExpr suppExpr = PrimeSetExpr::finite(labels_of(supp));
    if (!ps_is_empty(PrimeSetExpr::intersect(R.E, PrimeSetExpr::complement(suppExpr)), F)) {
        // generic against exact valuation 0
        if (v != 0) {
            if (std::min(0L, v) < e) return Tri::No;
        } else if (e > 0) {
            unknown = true;
        }
    }
    for (const auto& [P, w] : supp) {
        if (!ps_contains(R.E, P, F)) continue;
        if (w != v) {
            if (std::min(w, v) < e) return Tri::No;
        } else if (v < e) {
            unknown = true;
        }
    }
    return unknown ? Tri::Unknown : Tri::Yes;
}

}  // namespace

Tri points_equivalent(const OmegaPoint& o1, const OmegaPoint& o2, const Field& F,
                      long refinement_cap) {
    if (structurally_equal(o1, o2)) return Tri::Yes;
    if (!superideal_equal(o1.a, o2.a, F)) return Tri::No;

    auto parts_of = [](const AdeleSketch& r) {
        std::vector<std::pair<PrimeSetExpr, LocalValue>> parts = r.overrides;
        std::vector<PrimeSetExpr> covered;
        for (const auto& [S, v] : r.overrides) covered.push_back(S);
        PrimeSetExpr rest = covered.empty()
                                ? PrimeSetExpr::all()
                                : PrimeSetExpr::complement(union_fold(covered));
        parts.push_back({rest, LocalValue::exact_k(r.global)});
        return parts;
    };
    auto parts1 = parts_of(o1.r), parts2 = parts_of(o2.r);

    long candidates = static_cast<long>(o1.a.pieces.size()) *
                      static_cast<long>(parts1.size()) *
                      static_cast<long>(parts2.size());
    if (candidates > refinement_cap)
        throw RefinementCapExceeded("piece refinement needs " + std::to_string(candidates) +
                                    " regions, cap is " + std::to_string(refinement_cap));

    bool unknown = false;
    for (const auto& [S, e] : o1.a.pieces)
        for (const auto& [T1, l1] : parts1)
            for (const auto& [T2, l2] : parts2) {
                PrimeSetExpr E =
                    PrimeSetExpr::intersect(S, PrimeSetExpr::intersect(T1, T2));
                if (ps_is_empty(E, F)) continue;
                Tri t = analyze_region(Region{E, e, l1, l2}, F);
                if (t == Tri::No) return Tri::No;
                if (t == Tri::Unknown) unknown = true;
            }
    return unknown ? Tri::Unknown : Tri::Yes;
}

}  // namespace adelic
