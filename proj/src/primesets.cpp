#include "adelic/primesets.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>

namespace adelic {

namespace {

constexpr long kModulusCap = 1000000;

std::vector<long> prime_factors_of(long n) {
    std::vector<long> out;
    for (auto [p, e] : factor_int(Int(n))) {
        (void)e;
        out.push_back(p);
    }
    return out;
}

bool sorted_contains(const std::vector<long>& v, long x) {
    return std::binary_search(v.begin(), v.end(), x);
}

bool prime_list_contains(const std::vector<PrimeIdeal>& v, const PrimeIdeal& P) {
    auto it = std::lower_bound(v.begin(), v.end(), P);
    return it != v.end() && *it == P;
}

void sort_primes(std::vector<PrimeIdeal>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

long lcm_capped(long a, long b) {
    long g = std::gcd(a, b);
    long l = a / g;
    if (l > kModulusCap / b) throw DomainError("residue modulus exceeds the supported cap");
    return l * b;
}

// does the residue description of nf (ignoring exceptions) cover p?
bool nf_base_covered(const PrimeSetNF& nf, long p) {
    if (p % nf.modulus == 0 && nf.modulus > 1) return false;
    if (nf.modulus == 1) return !nf.residues.empty();
    return sorted_contains(nf.residues, p % nf.modulus);
}

bool nf_member(const PrimeSetNF& nf, const PrimeIdeal& P) {
    if (nf_base_covered(nf, P.p)) return !prime_list_contains(nf.minus, P);
    return prime_list_contains(nf.plus, P);
}

std::vector<long> unit_residues(long M) {
    if (M == 1) return {0};
    std::vector<long> out;
    for (long r = 1; r < M; ++r)
        if (std::gcd(r, M) == 1) out.push_back(r);
    return out;
}

bool filter_admits(const Field& F, const PrimeIdeal& P, SplitFilter f) {
    if (f == SplitFilter::Any) return true;
    SplitType t = F.factor_rational_prime(P.p).type;
    switch (f) {
        case SplitFilter::Split: return t == SplitType::Split;
        case SplitFilter::Inert: return t == SplitType::Inert;
        case SplitFilter::Ramified: return t == SplitType::Ramified;
        default: return true;
    }
}

// lift nf to the larger modulus L (a multiple of nf.modulus)
PrimeSetNF nf_lift(const PrimeSetNF& nf, long L, const Field& F) {
    if (L == nf.modulus) return nf;
    PrimeSetNF out;
    out.modulus = L;
    for (long r : unit_residues(L)) {
        bool cov = nf.modulus == 1 ? !nf.residues.empty()
                                   : sorted_contains(nf.residues, r % nf.modulus);
        if (cov) out.residues.push_back(r);
    }
    for (long p : prime_factors_of(L))
        for (const auto& P : F.factor_rational_prime(p).primes)
            if (nf_member(nf, P)) out.plus.push_back(P);
    for (const auto& P : nf.plus)
        if (L % P.p != 0) out.plus.push_back(P);
    for (const auto& P : nf.minus)
        if (L % P.p != 0) out.minus.push_back(P);
    sort_primes(out.plus);
    sort_primes(out.minus);
    return out;
}

PrimeSetNF nf_make(long M, std::vector<long> residues, const Field& F,
                   const std::vector<std::pair<PrimeIdeal, bool>>& decided) {
    // `decided` carries explicit membership decisions at exceptional primes
    PrimeSetNF out;
    out.modulus = M;
    std::sort(residues.begin(), residues.end());
    residues.erase(std::unique(residues.begin(), residues.end()), residues.end());
    out.residues = std::move(residues);
    for (const auto& [P, member] : decided) {
        bool base = nf_base_covered(out, P.p);
        if (member && !base) out.plus.push_back(P);
        if (!member && base) out.minus.push_back(P);
    }
    sort_primes(out.plus);
    sort_primes(out.minus);
    (void)F;
    return out;
}

PrimeSetNF nf_combine(const PrimeSetNF& a, const PrimeSetNF& b, bool is_union, const Field& F) {
    long L = lcm_capped(a.modulus, b.modulus);
    PrimeSetNF A = nf_lift(a, L, F), B = nf_lift(b, L, F);
    std::vector<long> res;
    if (is_union) {
        std::set_union(A.residues.begin(), A.residues.end(), B.residues.begin(),
                       B.residues.end(), std::back_inserter(res));
    } else {
        std::set_intersection(A.residues.begin(), A.residues.end(), B.residues.begin(),
                              B.residues.end(), std::back_inserter(res));
    }
    std::vector<std::pair<PrimeIdeal, bool>> decided;
    std::set<PrimeIdeal> cand;
    for (long p : prime_factors_of(L))
        for (const auto& P : F.factor_rational_prime(p).primes) cand.insert(P);
    for (const auto& v : {A.plus, A.minus, B.plus, B.minus})
        for (const auto& P : v) cand.insert(P);
    for (const auto& P : cand) {
        bool m = is_union ? (nf_member(A, P) || nf_member(B, P))
                          : (nf_member(A, P) && nf_member(B, P));
        decided.push_back({P, m});
    }
    return nf_make(L, std::move(res), F, decided);
}

PrimeSetNF nf_complement(const PrimeSetNF& a, const Field& F) {
    std::vector<long> res;
    for (long r : unit_residues(a.modulus))
        if (!sorted_contains(a.residues, r)) res.push_back(r);
    std::vector<std::pair<PrimeIdeal, bool>> decided;
    std::set<PrimeIdeal> cand;
    for (long p : prime_factors_of(a.modulus))
        for (const auto& P : F.factor_rational_prime(p).primes) cand.insert(P);
    for (const auto& v : {a.plus, a.minus})
        for (const auto& P : v) cand.insert(P);
    for (const auto& P : cand) decided.push_back({P, !nf_member(a, P)});
    return nf_make(a.modulus, std::move(res), F, decided);
}

PrimeSetNF nf_residue_atom(long m, const std::vector<long>& given, SplitFilter f,
                           const Field& F) {
    if (m < 1) throw UsageError("residue modulus must be positive");
    if (m > kModulusCap) throw DomainError("residue modulus exceeds the supported cap");
    std::vector<long> rs;
    for (long r : given) rs.push_back(((r % m) + m) % m);
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    auto given_covers = [&](long p) {
        if (m == 1) return !rs.empty();
        return sorted_contains(rs, p % m);
    };

    long M = m;
    long absdisc = F.is_rational() ? 1 : std::abs(F.discriminant());
    if (f != SplitFilter::Any && !F.is_rational()) M = lcm_capped(m, absdisc);

    std::vector<long> res;
    for (long r : unit_residues(M)) {
        bool cov = (m == 1) ? !rs.empty() : sorted_contains(rs, r % m);
        if (!cov) continue;
        if (f == SplitFilter::Any) {
            res.push_back(r);
        } else if (F.is_rational()) {
            // every rational prime is filed under "split" by convention
            if (f == SplitFilter::Split) res.push_back(r);
        } else {
            int chi = kronecker(Int(F.discriminant()), r);
            if ((f == SplitFilter::Split && chi == 1) ||
                (f == SplitFilter::Inert && chi == -1))
                res.push_back(r);
        }
    }

    // primes dividing M (plus non-unit residue classes, which only contain
    // divisors of the modulus) are decided individually
    std::vector<std::pair<PrimeIdeal, bool>> decided;
    std::vector<long> mf = prime_factors_of(M);
    std::set<long> cand(mf.begin(), mf.end());
    for (long r : rs) {
        long g = std::gcd(r, m);
        if (g > 1)
            for (long p : prime_factors_of(g)) cand.insert(p);
    }
    for (long p : cand)
        for (const auto& P : F.factor_rational_prime(p).primes)
            decided.push_back({P, given_covers(p) && filter_admits(F, P, f)});
    return nf_make(M, std::move(res), F, decided);
}

PrimeSetNF nf_of(const PrimeSetExpr& e, const Field& F) {
    using K = PrimeSetExpr::Kind;
    switch (e.kind()) {
        case K::Empty:
            return PrimeSetNF{};
        case K::All: {
            PrimeSetNF nf;
            nf.residues = {0};
            return nf;
        }
        case K::Finite: {
            PrimeSetNF nf;
            for (const auto& lab : e.labels()) nf.plus.push_back(F.require_prime(lab));
            sort_primes(nf.plus);
            return nf;
        }
        case K::Residue:
            return nf_residue_atom(e.modulus(), e.residues(), e.filter(), F);
        case K::Union:
            return nf_combine(nf_of(e.children()[0], F), nf_of(e.children()[1], F), true, F);
        case K::Intersect:
            return nf_combine(nf_of(e.children()[0], F), nf_of(e.children()[1], F), false, F);
        case K::Complement:
            return nf_complement(nf_of(e.children()[0], F), F);
    }
    throw DomainError("unreachable prime set kind");
}

}  // namespace

std::string split_filter_name(SplitFilter f) {
    switch (f) {
        case SplitFilter::Any: return "any";
        case SplitFilter::Split: return "split";
        case SplitFilter::Inert: return "inert";
        case SplitFilter::Ramified: return "ramified";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// expression constructors

PrimeSetExpr::PrimeSetExpr() : PrimeSetExpr(Data{}) {}

PrimeSetExpr PrimeSetExpr::empty() { return PrimeSetExpr(Data{}); }

PrimeSetExpr PrimeSetExpr::all() {
    Data d;
    d.kind = Kind::All;
    return PrimeSetExpr(std::move(d));
}

PrimeSetExpr PrimeSetExpr::finite(std::vector<std::string> labels) {
    Data d;
    d.kind = Kind::Finite;
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    d.labels = std::move(labels);
    return PrimeSetExpr(std::move(d));
}

PrimeSetExpr PrimeSetExpr::residue_class(long modulus, std::vector<long> residues,
                                         SplitFilter filter) {
    Data d;
    d.kind = Kind::Residue;
    d.modulus = modulus;
    std::sort(residues.begin(), residues.end());
    residues.erase(std::unique(residues.begin(), residues.end()), residues.end());
    d.residues = std::move(residues);
    d.filter = filter;
    return PrimeSetExpr(std::move(d));
}

PrimeSetExpr PrimeSetExpr::union_of(PrimeSetExpr a, PrimeSetExpr b) {
    Data d;
    d.kind = Kind::Union;
    d.children = {std::move(a), std::move(b)};
    return PrimeSetExpr(std::move(d));
}

PrimeSetExpr PrimeSetExpr::intersect(PrimeSetExpr a, PrimeSetExpr b) {
    Data d;
    d.kind = Kind::Intersect;
    d.children = {std::move(a), std::move(b)};
    return PrimeSetExpr(std::move(d));
}

PrimeSetExpr PrimeSetExpr::complement(PrimeSetExpr a) {
    Data d;
    d.kind = Kind::Complement;
    d.children = {std::move(a)};
    return PrimeSetExpr(std::move(d));
}

// ---------------------------------------------------------------------------
// queries

PrimeSetNF ps_normalize(const PrimeSetExpr& e, const Field& F) { return nf_of(e, F); }

PrimeSetExpr ps_from_nf(const PrimeSetNF& nf) {
    PrimeSetExpr base = PrimeSetExpr::empty();
    if (!nf.residues.empty()) {
        if (nf.modulus == 1)
            base = PrimeSetExpr::all();
        else
            base = PrimeSetExpr::residue_class(nf.modulus, nf.residues);
    }
    if (!nf.plus.empty()) {
        std::vector<std::string> labs;
        for (const auto& P : nf.plus) labs.push_back(P.label);
        PrimeSetExpr fin = PrimeSetExpr::finite(std::move(labs));
        base = nf.residues.empty() ? fin : PrimeSetExpr::union_of(base, fin);
    }
    if (!nf.minus.empty()) {
        std::vector<std::string> labs;
        for (const auto& P : nf.minus) labs.push_back(P.label);
        base = PrimeSetExpr::intersect(
            base, PrimeSetExpr::complement(PrimeSetExpr::finite(std::move(labs))));
    }
    return base;
}

bool ps_contains(const PrimeSetExpr& S, const PrimeIdeal& P, const Field& F) {
    return nf_member(nf_of(S, F), P);
}

Cardinality ps_cardinality(const PrimeSetExpr& S, const Field& F) {
    PrimeSetNF nf = nf_of(S, F);
    if (!nf.residues.empty()) return Cardinality{true, 0};
    return Cardinality{false, static_cast<long>(nf.plus.size())};
}

bool ps_is_empty(const PrimeSetExpr& S, const Field& F) {
    PrimeSetNF nf = nf_of(S, F);
    return nf.residues.empty() && nf.plus.empty();
}

bool ps_subset(const PrimeSetExpr& S, const PrimeSetExpr& T, const Field& F) {
    return ps_is_empty(PrimeSetExpr::intersect(S, PrimeSetExpr::complement(T)), F);
}

bool ps_equal(const PrimeSetExpr& S, const PrimeSetExpr& T, const Field& F) {
    return ps_subset(S, T, F) && ps_subset(T, S, F);
}

std::pair<PrimeSetExpr, PrimeSetExpr> ps_split_infinite(const PrimeSetExpr& S,
                                                        const Field& F) {
    PrimeSetNF nf = nf_of(S, F);
    if (nf.residues.empty()) throw DomainError("cannot split a finite prime set");
    long M2 = lcm_capped(nf.modulus, nf.modulus % 2 == 0 ? 2 * nf.modulus : 4 * nf.modulus);
    PrimeSetNF L = nf_lift(nf, M2, F);

    PrimeSetNF s1, s2;
    s1.modulus = s2.modulus = M2;
    // each covered class mod modulus has exactly two unit lifts mod M2;
    // the smaller goes left, the larger right
    std::vector<long> keys = nf.modulus == 1 ? std::vector<long>{0} : nf.residues;
    for (long r : keys) {
        std::vector<long> lifts;
        for (long l : L.residues)
            if (nf.modulus == 1 || l % nf.modulus == r) lifts.push_back(l);
        if (lifts.size() != 2) throw DomainError("residue refinement inconsistency");
        s1.residues.push_back(lifts[0]);
        s2.residues.push_back(lifts[1]);
    }
    std::sort(s1.residues.begin(), s1.residues.end());
    std::sort(s2.residues.begin(), s2.residues.end());
    bool left = true;
    for (const auto& P : L.plus) {  // alternate explicit members
        (left ? s1 : s2).plus.push_back(P);
        left = !left;
    }
    for (const auto& P : L.minus) {
        long r = P.p % M2;
        (sorted_contains(s1.residues, r) ? s1 : s2).minus.push_back(P);
    }
    return {ps_from_nf(s1), ps_from_nf(s2)};
}

std::vector<PrimeIdeal> ps_members_up_to(const PrimeSetExpr& S, const Field& F, long bound) {
    PrimeSetNF nf = nf_of(S, F);
    std::vector<PrimeIdeal> out;
    for (const auto& P : F.primes_up_to(bound))
        if (nf_member(nf, P)) out.push_back(P);
    return out;
}

PrimeIdeal ps_smallest_member(const PrimeSetExpr& S, const Field& F) {
    PrimeSetNF nf = nf_of(S, F);
    Int p = 2;
    while (p <= kModulusCap) {
        for (const auto& P : F.factor_rational_prime(p.get_si()).primes)
            if (nf_member(nf, P)) return P;
        p = next_prime(p);
    }
    throw SearchExhausted("no member found in prime set");
}

// ---------------------------------------------------------------------------
// printing and parsing

namespace {

void print_rec(const PrimeSetExpr& e, std::ostream& os) {
    using K = PrimeSetExpr::Kind;
    switch (e.kind()) {
        case K::Empty: os << "empty"; return;
        case K::All: os << "all"; return;
        case K::Finite: {
            os << "(finite";
            for (const auto& l : e.labels()) os << " \"" << l << "\"";
            os << ")";
            return;
        }
        case K::Residue: {
            os << "(res " << e.modulus() << " (";
            bool first = true;
            for (long r : e.residues()) {
                if (!first) os << " ";
                os << r;
                first = false;
            }
            os << ")";
            if (e.filter() != SplitFilter::Any) os << " " << split_filter_name(e.filter());
            os << ")";
            return;
        }
        case K::Union:
        case K::Intersect: {
            os << (e.kind() == K::Union ? "(union" : "(inter");
            for (const auto& c : e.children()) {
                os << " ";
                print_rec(c, os);
            }
            os << ")";
            return;
        }
        case K::Complement: {
            os << "(not ";
            print_rec(e.children()[0], os);
            os << ")";
            return;
        }
    }
}

struct Tokenizer {
    std::string s;
    size_t pos = 0;

    std::string next() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos >= s.size()) return "";
        char c = s[pos];
        if (c == '(' || c == ')') {
            ++pos;
            return std::string(1, c);
        }
        if (c == '"') {
            size_t end = s.find('"', pos + 1);
            if (end == std::string::npos) throw UsageError("unterminated string in prime set");
            std::string tok = s.substr(pos + 1, end - pos - 1);
            pos = end + 1;
            return "\"" + tok;
        }
        size_t start = pos;
        while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) &&
               s[pos] != '(' && s[pos] != ')')
            ++pos;
        return s.substr(start, pos - start);
    }

    std::string peek() {
        size_t save = pos;
        std::string t = next();
        pos = save;
        return t;
    }
};

long parse_long(const std::string& t) {
    try {
        size_t used = 0;
        long v = std::stol(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw UsageError("bad number in prime set: " + t);
    }
}

PrimeSetExpr parse_rec(Tokenizer& tz) {
    std::string t = tz.next();
    if (t.empty()) throw UsageError("unexpected end of prime set expression");
    if (t == "empty") return PrimeSetExpr::empty();
    if (t == "all") return PrimeSetExpr::all();
    if (t != "(") throw UsageError("bad token in prime set: " + t);
    std::string head = tz.next();
    if (head == "finite") {
        std::vector<std::string> labels;
        while (tz.peek() != ")") {
            std::string lt = tz.next();
            if (lt.empty()) throw UsageError("unterminated finite set");
            if (lt[0] != '"') throw UsageError("finite set expects quoted labels");
            labels.push_back(lt.substr(1));
        }
        tz.next();
        return PrimeSetExpr::finite(std::move(labels));
    }
    if (head == "res") {
        long m = parse_long(tz.next());
        if (tz.next() != "(") throw UsageError("res expects a residue list");
        std::vector<long> rs;
        while (tz.peek() != ")") rs.push_back(parse_long(tz.next()));
        tz.next();
        SplitFilter f = SplitFilter::Any;
        if (tz.peek() != ")") {
            std::string ft = tz.next();
            if (ft == "any")
                f = SplitFilter::Any;
            else if (ft == "split")
                f = SplitFilter::Split;
            else if (ft == "inert")
                f = SplitFilter::Inert;
            else if (ft == "ramified")
                f = SplitFilter::Ramified;
            else
                throw UsageError("bad splitting filter: " + ft);
        }
        if (tz.next() != ")") throw UsageError("malformed res atom");
        return PrimeSetExpr::residue_class(m, std::move(rs), f);
    }
    if (head == "union" || head == "inter") {
        std::vector<PrimeSetExpr> parts;
        while (tz.peek() != ")") parts.push_back(parse_rec(tz));
        tz.next();
        if (parts.size() < 2) throw UsageError(head + " expects at least two operands");
        PrimeSetExpr acc = parts[0];
        for (size_t i = 1; i < parts.size(); ++i)
            acc = head == "union" ? PrimeSetExpr::union_of(acc, parts[i])
                                  : PrimeSetExpr::intersect(acc, parts[i]);
        return acc;
    }
    if (head == "not") {
        PrimeSetExpr c = parse_rec(tz);
        if (tz.next() != ")") throw UsageError("malformed not expression");
        return PrimeSetExpr::complement(c);
    }
    throw UsageError("unknown prime set operator: " + head);
}

}  // namespace

std::string ps_print(const PrimeSetExpr& e) {
    std::ostringstream os;
    print_rec(e, os);
    return os.str();
}

PrimeSetExpr ps_parse(const std::string& text) {
    Tokenizer tz{text};
    PrimeSetExpr e = parse_rec(tz);
    if (!tz.next().empty()) throw UsageError("trailing input after prime set expression");
    return e;
}

// ---------------------------------------------------------------------------
// power-cofinite opens

PowerCofiniteOpen pc_make(std::vector<std::vector<PrimeIdeal>> gens) {
    for (auto& g : gens) sort_primes(g);
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    // keep only inclusion-minimal generator sets
    std::vector<std::vector<PrimeIdeal>> keep;
    for (size_t i = 0; i < gens.size(); ++i) {
        bool minimal = true;
        for (size_t j = 0; j < gens.size() && minimal; ++j) {
            if (i == j) continue;
            bool sub = std::includes(gens[i].begin(), gens[i].end(), gens[j].begin(),
                                     gens[j].end());
            if (sub && gens[j] != gens[i]) minimal = false;
            if (sub && gens[j] == gens[i] && j < i) minimal = false;
        }
        if (minimal) keep.push_back(gens[i]);
    }
    return PowerCofiniteOpen{std::move(keep)};
}

PowerCofiniteOpen pc_empty_open() { return PowerCofiniteOpen{}; }

PowerCofiniteOpen pc_whole_open() { return PowerCofiniteOpen{{{}}}; }

PowerCofiniteOpen pc_union(const PowerCofiniteOpen& U, const PowerCofiniteOpen& V) {
    std::vector<std::vector<PrimeIdeal>> gens = U.gens;
    gens.insert(gens.end(), V.gens.begin(), V.gens.end());
    return pc_make(std::move(gens));
}

PowerCofiniteOpen pc_intersect(const PowerCofiniteOpen& U, const PowerCofiniteOpen& V) {
    std::vector<std::vector<PrimeIdeal>> gens;
    for (const auto& G : U.gens)
        for (const auto& H : V.gens) {
            std::vector<PrimeIdeal> GH = G;
            GH.insert(GH.end(), H.begin(), H.end());
            gens.push_back(std::move(GH));
        }
    return pc_make(std::move(gens));
}

bool pc_leq(const PowerCofiniteOpen& U, const PowerCofiniteOpen& V) {
    // U_G subseteq union_j U_{H_j} iff some H_j subseteq G
    for (const auto& G : U.gens) {
        bool dominated = false;
        for (const auto& H : V.gens)
            if (std::includes(G.begin(), G.end(), H.begin(), H.end())) {
                dominated = true;
                break;
            }
        if (!dominated) return false;
    }
    return true;
}

bool pc_equal(const PowerCofiniteOpen& U, const PowerCofiniteOpen& V) {
    return U.gens == V.gens;
}

bool pc_contains_point(const PowerCofiniteOpen& U, const PrimeSetExpr& A, const Field& F) {
    PrimeSetNF nf = nf_of(A, F);
    for (const auto& G : U.gens) {
        bool avoid = true;
        for (const auto& P : G)
            if (nf_member(nf, P)) {
                avoid = false;
                break;
            }
        if (avoid) return true;
    }
    return false;
}

PointClosure pc_point_closure(PrimeSetExpr A) { return PointClosure{std::move(A)}; }

bool pc_closure_contains(const PointClosure& C, const PrimeSetExpr& T, const Field& F) {
    return ps_subset(C.base, T, F);
}

}  // namespace adelic
