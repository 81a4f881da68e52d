#include "causent/constraint_gen.hpp"

#include "lp.hpp"

#include <algorithm>
#include <map>

namespace causent {

std::string tag_name(RowTag t)
{
    switch (t) {
    case RowTag::shannon: return "shannon";
    case RowTag::ci: return "ci";
    case RowTag::ingleton: return "ingleton";
    case RowTag::zy: return "zy";
    case RowTag::wm: return "wm";
    case RowTag::dpi: return "dpi";
    case RowTag::qci: return "qci";
    case RowTag::glue: return "glue";
    case RowTag::user: return "user";
    case RowTag::purity: return "purity";
    case RowTag::nonneg: return "nonneg";
    }
    throw error("bad tag");
}

RowTag tag_from_name(const std::string& name)
{
    for (RowTag t : {RowTag::shannon, RowTag::ci, RowTag::ingleton, RowTag::zy, RowTag::wm,
                     RowTag::dpi, RowTag::qci, RowTag::glue, RowTag::user, RowTag::purity,
                     RowTag::nonneg})
        if (tag_name(t) == name)
            return t;
    throw error("unknown provenance tag '" + name + "'");
}

void ConstraintSystem::add_eq(Row r, RowTag tag)
{
    normalize_row(r, true);
    if (is_zero_row(r))
        return;
    eqs.push_back(std::move(r));
    eq_tags.push_back(tag);
}

void ConstraintSystem::add_ineq(Row r, RowTag tag)
{
    normalize_row(r);
    if (is_zero_row(r))
        return;
    ineqs.push_back(std::move(r));
    ineq_tags.push_back(tag);
}

void ConstraintSystem::append(const ConstraintSystem& other)
{
    if (!coords || !other.coords || !(*coords == *other.coords))
        throw error("appending constraint systems over different coordinates");
    eqs.insert(eqs.end(), other.eqs.begin(), other.eqs.end());
    eq_tags.insert(eq_tags.end(), other.eq_tags.begin(), other.eq_tags.end());
    ineqs.insert(ineqs.end(), other.ineqs.begin(), other.ineqs.end());
    ineq_tags.insert(ineq_tags.end(), other.ineq_tags.begin(), other.ineq_tags.end());
}

HCone ConstraintSystem::cone() const
{
    HCone c;
    for (int i = 0; i < coords->size(); ++i)
        c.coords.push_back(coords->label(i));
    c.eqs = eqs;
    c.ineqs = ineqs;
    return c;
}

CoordsPtr quantum_coords(const ElementTable& et)
{
    return std::make_shared<CoordinateSystem>(et.coexisting_sets());
}

// ---------------------------------------------------------------------------
// Shannon system

static NameSet minus(const NameSet& a, const NameSet& b)
{
    NameSet out;
    for (const auto& x : a)
        if (!b.count(x))
            out.insert(x);
    return out;
}

// Subsets of `pool` in canonical order (size, then lex).
static std::vector<NameSet> subsets_of(const std::vector<std::string>& pool, bool nonempty)
{
    std::vector<NameSet> out;
    for (unsigned long long mask = nonempty ? 1 : 0; mask < (1ull << pool.size()); ++mask) {
        NameSet s;
        for (size_t i = 0; i < pool.size(); ++i)
            if (mask & (1ull << i))
                s.insert(pool[i]);
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const NameSet& a, const NameSet& b) {
        if (a.size() != b.size())
            return a.size() < b.size();
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
    return out;
}

ConstraintSystem shannon_matrix(CoordsPtr coords)
{
    std::vector<std::string> vars = coords->universe();
    int n = int(vars.size());
    if (n < 2)
        throw error("shannon_matrix needs at least 2 variables");
    if (coords->size() != (1 << n) - 1)
        throw error("shannon_matrix needs the full power-set coordinate system");

    ConstraintSystem out;
    out.coords = coords;
    NameSet all(vars.begin(), vars.end());
    for (const auto& v : vars)
        out.add_ineq(expr(MeasureKind::H_cond, {{v}, minus(all, {v})}, coords).dense(),
                     RowTag::shannon);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            std::vector<std::string> rest;
            for (int k = 0; k < n; ++k)
                if (k != i && k != j)
                    rest.push_back(vars[k]);
            for (const auto& u : subsets_of(rest, false))
                out.add_ineq(
                    expr(MeasureKind::I_cond, {{vars[i]}, {vars[j]}, u}, coords).dense(),
                    RowTag::shannon);
        }
    return out;
}

ConstraintSystem ci_matrix(const CausalStructure& s, CoordsPtr coords)
{
    ConstraintSystem out;
    out.coords = coords;
    std::set<std::string> seen;
    for (const auto& st : local_markov(s)) {
        Row r = expr(MeasureKind::I_cond, {st.left, st.right, st.given}, coords).dense();
        normalize_row(r, true);
        if (is_zero_row(r) || !seen.insert(row_key(r)).second)
            continue;
        out.add_eq(std::move(r), RowTag::ci);
    }
    return out;
}

LinearExpression ingleton_expression(const std::string& t, const std::string& u,
                                     const std::string& v, const std::string& w,
                                     CoordsPtr coords)
{
    LinearExpression e = expr(MeasureKind::I_cond, {{t}, {u}, {v}}, coords);
    e.add(expr(MeasureKind::I_cond, {{t}, {u}, {w}}, coords));
    e.add(expr(MeasureKind::I, {{v}, {w}}, coords));
    e.add(expr(MeasureKind::I, {{t}, {u}}, coords), -1);
    return e;
}

ConstraintSystem ingleton_rows(
    CoordsPtr coords, const std::optional<std::vector<std::array<std::string, 4>>>& quadruples)
{
    std::vector<std::string> vars = coords->universe();
    if (vars.size() < 4)
        throw error("ingleton_rows needs at least 4 variables");

    std::vector<std::array<std::string, 4>> quads;
    if (quadruples) {
        quads = *quadruples;
    } else {
        int n = int(vars.size());
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                for (int c = b + 1; c < n; ++c)
                    for (int d = c + 1; d < n; ++d)
                        quads.push_back({vars[a], vars[b], vars[c], vars[d]});
    }

    ConstraintSystem out;
    out.coords = coords;
    for (const auto& q : quads) {
        // {T,U} ranges over the 2-subsets; {V,W} is the complement.
        static const int splits[6][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2},
                                         {1, 2, 0, 3}, {1, 3, 0, 2}, {2, 3, 0, 1}};
        for (const auto& sp : splits)
            out.add_ineq(
                ingleton_expression(q[sp[0]], q[sp[1]], q[sp[2]], q[sp[3]], coords).dense(),
                RowTag::ingleton);
    }
    return out;
}

ConstraintSystem zhang_yeung_rows(CoordsPtr coords)
{
    std::vector<std::string> vars = coords->universe();
    int n = int(vars.size());
    if (n < 4)
        throw error("zhang_yeung_rows needs at least 4 variables");

    ConstraintSystem out;
    out.coords = coords;
    std::set<std::string> seen;
    auto add = [&](const std::string& t, const std::string& u, const std::string& v,
                   const std::string& w) {
        LinearExpression e;
        e.coords = coords;
        auto term = [&](const NameSet& s, int c) {
            int idx = coords->require(s);
            e.coeff[idx] += c;
            if (e.coeff[idx] == 0)
                e.coeff.erase(idx);
        };
        // Doubled so all coefficients are integral.
        term({t}, -2);
        term({u}, -2);
        term({v}, -1);
        term({t, u}, 3);
        term({t, v}, 3);
        term({t, w}, 1);
        term({u, v}, 3);
        term({u, w}, 1);
        term({v, w}, -1);
        term({t, u, v}, -4);
        term({t, u, w}, -1);
        Row r = e.dense();
        normalize_row(r);
        if (seen.insert(row_key(r)).second)
            out.add_ineq(std::move(r), RowTag::zy);
    };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    if (a == b || a == c || a == d || b == c || b == d || c == d)
                        continue;
                    if (a > b)
                        continue;  // T <-> U symmetry
                    add(vars[a], vars[b], vars[c], vars[d]);
                }
    return out;
}

ConstraintSystem nonneg_rows(CoordsPtr coords)
{
    ConstraintSystem out;
    out.coords = coords;
    for (int i = 0; i < coords->size(); ++i) {
        Row r(coords->size(), Rat(0));
        r[i] = 1;
        out.add_ineq(std::move(r), RowTag::nonneg);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Quantum generators

namespace {

// Emits candidate rows in a deterministic order, keeping a candidate only if
// it is not already implied by what was emitted.
struct PrunedEmitter {
    ConstraintSystem& sys;

    bool implied_ineq(const Row& r) const
    {
        return lp::exact_implied(sys.ineqs, sys.eqs, r);
    }
    bool implied_eq(const Row& r) const
    {
        Row neg(r.size());
        for (size_t i = 0; i < r.size(); ++i)
            neg[i] = -r[i];
        return implied_ineq(r) && implied_ineq(neg);
    }
    void emit_ineq(Row r, RowTag tag)
    {
        normalize_row(r);
        if (is_zero_row(r) || implied_ineq(r))
            return;
        sys.add_ineq(std::move(r), tag);
    }
    void emit_eq(Row r, RowTag tag)
    {
        normalize_row(r, true);
        if (is_zero_row(r) || implied_eq(r))
            return;
        sys.add_eq(std::move(r), tag);
    }
};

Row h_minus_h(const NameSet& big, const NameSet& small, CoordsPtr coords)
{
    LinearExpression e = expr(MeasureKind::H, {big}, coords);
    e.add(expr(MeasureKind::H, {small}, coords), -1);
    return e.dense();
}

}  // namespace

ConstraintSystem quantum_basic_matrix(const CausalStructure& s, const ElementTable& et)
{
    CoordsPtr coords = quantum_coords(et);
    ConstraintSystem out;
    out.coords = coords;
    PrunedEmitter emit{out};

    auto maximal = et.maximal_coexisting_sets();

    // Elemental submodularity within each coexisting set.
    {
        std::set<std::string> seen;
        for (const auto& m : maximal) {
            std::vector<std::string> v(m.begin(), m.end());
            for (size_t i = 0; i < v.size(); ++i)
                for (size_t j = i + 1; j < v.size(); ++j) {
                    std::vector<std::string> rest;
                    for (size_t k = 0; k < v.size(); ++k)
                        if (k != i && k != j)
                            rest.push_back(v[k]);
                    for (const auto& u : subsets_of(rest, false)) {
                        Row r = expr(MeasureKind::I_cond, {{v[i]}, {v[j]}, u}, coords).dense();
                        normalize_row(r);
                        if (seen.insert(row_key(r)).second)
                            emit.emit_ineq(std::move(r), RowTag::shannon);
                    }
                }
        }
    }

    // Monotonicity H(S) >= H(K) whenever nothing removed can be entangled
    // with anything kept; deepest candidates first so the shallow ones prune.
    {
        struct Cand {
            NameSet set, kept;
        };
        std::vector<Cand> cands;
        std::set<std::pair<NameSet, NameSet>> seen;
        for (const auto& m : maximal) {
            std::vector<std::string> v(m.begin(), m.end());
            for (const auto& set : subsets_of(v, true)) {
                if (set.size() < 2)
                    continue;
                std::vector<std::string> sv(set.begin(), set.end());
                for (const auto& kept : subsets_of(sv, true)) {
                    if (kept.size() == set.size())
                        continue;
                    NameSet removed = minus(set, kept);
                    bool ok = true;
                    for (const auto& r : removed)
                        for (const auto& k : kept)
                            if (et.entanglement_possible(r, k))
                                ok = false;
                    if (ok && seen.insert({set, kept}).second)
                        cands.push_back({set, kept});
                }
            }
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.set.size() != b.set.size())
                return a.set.size() > b.set.size();
            if (a.kept.size() != b.kept.size())
                return a.kept.size() > b.kept.size();
            if (a.set != b.set)
                return a.set < b.set;
            return a.kept < b.kept;
        });
        for (const auto& c : cands)
            emit.emit_ineq(h_minus_h(c.set, c.kept, coords), RowTag::shannon);
    }

    // Weak monotonicity H(i|K) + H(i|L) >= 0 for partitions K,L of the rest
    // of a coexisting set.
    {
        struct Cand {
            std::string i;
            NameSet k, l;
        };
        std::vector<Cand> cands;
        std::set<std::string> seen;
        for (const auto& m : maximal) {
            for (const auto& i : m) {
                std::vector<std::string> rest;
                for (const auto& x : m)
                    if (x != i)
                        rest.push_back(x);
                for (const auto& k : subsets_of(rest, false)) {
                    NameSet l = minus(NameSet(rest.begin(), rest.end()), k);
                    if (k > l)
                        continue;  // unordered partition
                    LinearExpression e = expr(MeasureKind::H_cond, {{i}, k}, coords);
                    e.add(expr(MeasureKind::H_cond, {{i}, l}, coords));
                    Row r = e.dense();
                    normalize_row(r);
                    if (is_zero_row(r) || !seen.insert(row_key(r)).second)
                        continue;
                    cands.push_back({i, k, l});
                }
            }
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.i != b.i)
                return a.i < b.i;
            if (a.k != b.k)
                return a.k < b.k;
            return a.l < b.l;
        });
        for (const auto& c : cands) {
            LinearExpression e = expr(MeasureKind::H_cond, {{c.i}, c.k}, coords);
            e.add(expr(MeasureKind::H_cond, {{c.i}, c.l}, coords));
            emit.emit_ineq(e.dense(), RowTag::wm);
        }
    }
    return out;
}

ConstraintSystem quantum_ci_matrix(const CausalStructure& s, const ElementTable& et)
{
    CoordsPtr coords = quantum_coords(et);

    // Prune against the basic system plus previously emitted equalities.
    ConstraintSystem basic = quantum_basic_matrix(s, et);
    ConstraintSystem out;
    out.coords = coords;

    struct Cand {
        NameSet left, right, given;
        Row row;
    };
    std::vector<Cand> cands;
    std::set<std::string> seen;
    for (const auto& m : et.maximal_coexisting_sets()) {
        std::vector<std::string> v(m.begin(), m.end());
        int n = int(v.size());
        std::vector<int> assign(n, 0);
        for (long long code = 0; code < (1LL << (2 * n)); ++code) {
            long long c = code;
            NameSet left, right, given;
            for (int i = 0; i < n; ++i) {
                switch (c % 4) {
                case 1: left.insert(v[i]); break;
                case 2: right.insert(v[i]); break;
                case 3: given.insert(v[i]); break;
                }
                c /= 4;
            }
            if (left.empty() || right.empty() || left > right)
                continue;
            if (!et.aux_d_separated(left, right, given))
                continue;
            Row r = expr(MeasureKind::I_cond, {left, right, given}, coords).dense();
            normalize_row(r, true);
            if (is_zero_row(r) || !seen.insert(row_key(r)).second)
                continue;
            cands.push_back({left, right, given, std::move(r)});
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.given.size() != b.given.size())
            return a.given.size() < b.given.size();
        size_t sa = a.left.size() + a.right.size();
        size_t sb = b.left.size() + b.right.size();
        if (sa != sb)
            return sa > sb;
        return row_key(a.row) < row_key(b.row);
    });

    std::vector<Row> context_ineqs = basic.ineqs;
    for (const auto& c : cands) {
        std::vector<Row> context_eqs = basic.eqs;
        context_eqs.insert(context_eqs.end(), out.eqs.begin(), out.eqs.end());
        Row neg(c.row.size());
        for (size_t i = 0; i < c.row.size(); ++i)
            neg[i] = -c.row[i];
        if (lp::exact_implied(context_ineqs, context_eqs, c.row) &&
            lp::exact_implied(context_ineqs, context_eqs, neg))
            continue;
        out.add_eq(c.row, RowTag::qci);
    }
    return out;
}

ConstraintSystem dpi_matrix(const CausalStructure& s, const ElementTable& et,
                            std::optional<int> spectator_cap)
{
    CoordsPtr coords = quantum_coords(et);
    ConstraintSystem out;
    out.coords = coords;

    int cap = spectator_cap.value_or(int(et.elements().size()) <= 6
                                         ? int(et.elements().size())
                                         : 3);

    auto coexists_with_all = [&](const std::string& e, const NameSet& set) {
        for (const auto& x : set)
            if (x != e && !et.coexist(e, x))
                return false;
        return true;
    };
    auto is_clique = [&](const NameSet& set) {
        for (const auto& a : set)
            if (!coexists_with_all(a, set))
                return false;
        return true;
    };

    std::set<std::string> seen;
    for (int v : s.topological_order()) {
        // Quantum inputs: subsystems consumed at this node.
        NameSet inputs;
        for (const auto& sub : s.subsystems())
            for (int d : sub.children)
                if (d == v)
                    inputs.insert(sub.label);
        if (inputs.empty())
            continue;

        NameSet copied;  // classical inputs, retained on both sides
        for (int p : s.parents_of(v))
            if (s.node(p).role == Role::observed)
                copied.insert(s.node(p).name);

        NameSet outputs;
        if (s.node(v).role == Role::observed) {
            outputs.insert(s.node(v).name);
        } else {
            for (const auto& sub : s.subsystems())
                if (sub.source == v)
                    outputs.insert(sub.label);
        }

        NameSet in_side = inputs, out_side = outputs;
        in_side.insert(copied.begin(), copied.end());
        out_side.insert(copied.begin(), copied.end());
        if (!is_clique(in_side) || !is_clique(out_side))
            continue;

        std::vector<std::string> spectators;
        for (const auto& e : et.elements()) {
            if (in_side.count(e) || out_side.count(e))
                continue;
            if (coexists_with_all(e, in_side) && coexists_with_all(e, out_side))
                spectators.push_back(e);
        }

        for (const auto& t : subsets_of(spectators, true)) {
            if (int(t.size()) > cap)
                continue;
            if (!is_clique(t))
                continue;
            NameSet in_all = in_side, out_all = out_side;
            in_all.insert(t.begin(), t.end());
            out_all.insert(t.begin(), t.end());
            if (!is_clique(in_all) || !is_clique(out_all))
                continue;

            // Spectator parts in product with everything else add nothing.
            bool reducible = false;
            std::vector<std::string> tv(t.begin(), t.end());
            for (unsigned long long mask = 1; mask + 1 < (1ull << tv.size()) + 1 && !reducible;
                 ++mask) {
                if (mask >= (1ull << tv.size()))
                    break;
                NameSet part;
                for (size_t i = 0; i < tv.size(); ++i)
                    if (mask & (1ull << i))
                        part.insert(tv[i]);
                NameSet rest = in_all;
                rest.insert(out_all.begin(), out_all.end());
                for (const auto& e : part)
                    rest.erase(e);
                if (!et.shares_ancestry(part, rest))
                    reducible = true;
            }
            if (reducible)
                continue;

            LinearExpression e = expr(MeasureKind::I, {in_side, t}, coords);
            e.add(expr(MeasureKind::I, {out_side, t}, coords), -1);
            Row r = e.dense();
            normalize_row(r);
            if (is_zero_row(r) || !seen.insert(row_key(r)).second)
                continue;
            out.add_ineq(std::move(r), RowTag::dpi);
        }
    }
    return out;
}

ConstraintSystem quantum_reduction_equalities(const CausalStructure& s, const ElementTable& et,
                                              bool enable)
{
    CoordsPtr coords = quantum_coords(et);
    ConstraintSystem out;
    out.coords = coords;
    if (!enable)
        return out;

    std::set<std::string> seen;
    auto push_eq = [&](Row r) {
        normalize_row(r, true);
        if (is_zero_row(r) || !seen.insert(row_key(r)).second)
            return;
        out.add_eq(std::move(r), RowTag::purity);
    };

    for (int v = 0; v < s.node_count(); ++v) {
        if (s.node(v).role != Role::unobserved)
            continue;
        NameSet outs;
        for (const auto& sub : s.subsystems())
            if (sub.source == v)
                outs.insert(sub.label);
        if (outs.empty())
            continue;

        if (s.parents_of(v).empty()) {
            // Purity: H(all outputs) = 0; the Schmidt pair for two subsystems.
            if (coords->find(outs) >= 0)
                push_eq(expr(MeasureKind::H, {outs}, coords).dense());
            if (outs.size() == 2) {
                auto it = outs.begin();
                NameSet s1{*it++}, s2{*it};
                push_eq(h_minus_h(s1, s2, coords));
            }
            continue;
        }

        // Stinespring: with a quantum child the map extends to an isometry,
        // so input and output entropies coincide (classical parents kept).
        bool has_unobserved_child = false;
        for (int c : s.children_of(v))
            if (s.node(c).role == Role::unobserved)
                has_unobserved_child = true;
        if (!has_unobserved_child)
            continue;
        NameSet in_side, out_side;
        for (int p : s.parents_of(v))
            if (s.node(p).role == Role::observed)
                in_side.insert(s.node(p).name);
        out_side = in_side;
        for (const auto& sub : s.subsystems())
            for (int d : sub.children)
                if (d == v)
                    in_side.insert(sub.label);
        out_side.insert(outs.begin(), outs.end());
        if (coords->find(in_side) >= 0 && coords->find(out_side) >= 0)
            push_eq(h_minus_h(in_side, out_side, coords));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Glued no-signalling system

ConstraintSystem ns_glued_system(const CausalStructure& s, const std::string& node, int values,
                                 const std::vector<ConstraintSystem>& extra)
{
    int x = s.index(node);
    if (s.node(x).role != Role::observed)
        throw error("glued system selector '" + node + "' is unobserved");
    if (!s.parents_of(x).empty())
        throw error("glued system selector '" + node + "' has parents");
    if (values < 1)
        throw error("glued system needs at least 1 value");

    auto rel = s.relations({node});
    std::vector<std::string> up, shared;
    for (const auto& n : rel.descendants)
        if (s.node(s.index(n)).role == Role::observed)
            up.push_back(n);
    for (const auto& n : rel.non_descendants)
        if (s.node(s.index(n)).role == Role::observed)
            shared.push_back(n);
    std::sort(up.begin(), up.end());
    std::sort(shared.begin(), shared.end());

    auto copy_name = [&](const std::string& base, int val) {
        return base + "|" + node + "=" + std::to_string(val);
    };

    // Blocks share the coordinates on non-descendants only.
    std::set<NameSet> subsets;
    std::vector<std::vector<std::string>> block_vars(values);
    for (int val = 0; val < values; ++val) {
        std::vector<std::string> vars = shared;
        for (const auto& n : up)
            vars.push_back(copy_name(n, val));
        std::sort(vars.begin(), vars.end());
        block_vars[val] = vars;
        for (const auto& sub : subsets_of(vars, true))
            subsets.insert(sub);
    }
    auto coords = std::make_shared<CoordinateSystem>(
        std::vector<NameSet>(subsets.begin(), subsets.end()));

    ConstraintSystem out;
    out.coords = coords;

    // Per-value elemental Shannon rows (shared-only rows deduplicate).
    std::set<std::string> seen;
    for (int val = 0; val < values; ++val) {
        const auto& vars = block_vars[val];
        NameSet all(vars.begin(), vars.end());
        if (vars.size() >= 2) {
            for (const auto& v : vars) {
                Row r = expr(MeasureKind::H_cond, {{v}, minus(all, {v})}, coords).dense();
                normalize_row(r);
                if (seen.insert(row_key(r)).second)
                    out.add_ineq(std::move(r), RowTag::shannon);
            }
            for (size_t i = 0; i < vars.size(); ++i)
                for (size_t j = i + 1; j < vars.size(); ++j) {
                    std::vector<std::string> rest;
                    for (size_t k = 0; k < vars.size(); ++k)
                        if (k != i && k != j)
                            rest.push_back(vars[k]);
                    for (const auto& u : subsets_of(rest, false)) {
                        Row r =
                            expr(MeasureKind::I_cond, {{vars[i]}, {vars[j]}, u}, coords).dense();
                        normalize_row(r);
                        if (seen.insert(row_key(r)).second)
                            out.add_ineq(std::move(r), RowTag::shannon);
                    }
                }
        } else if (vars.size() == 1) {
            Row r = expr(MeasureKind::H, {{vars[0]}}, coords).dense();
            if (seen.insert(row_key(r)).second)
                out.add_ineq(std::move(r), RowTag::shannon);
        }
    }

    // Per-value observed d-separation equalities, conditioning on the
    // selector, pruned against the system built so far.
    {
        struct Cand {
            Row row;
            size_t given_size, lr_size;
        };
        std::vector<Cand> cands;
        std::set<std::string> cseen;
        for (int val = 0; val < values; ++val) {
            const auto& vars = block_vars[val];
            int n = int(vars.size());
            auto original = [&](const std::string& name) {
                for (const auto& u : up)
                    if (name == copy_name(u, val))
                        return u;
                return name;
            };
            for (long long code = 0; code < (1LL << (2 * n)); ++code) {
                long long c = code;
                NameSet left, right, given, oleft, oright, ogiven;
                for (int i = 0; i < n; ++i) {
                    switch (c % 4) {
                    case 1: left.insert(vars[i]); oleft.insert(original(vars[i])); break;
                    case 2: right.insert(vars[i]); oright.insert(original(vars[i])); break;
                    case 3: given.insert(vars[i]); ogiven.insert(original(vars[i])); break;
                    }
                    c /= 4;
                }
                if (left.empty() || right.empty() || left > right)
                    continue;
                ogiven.insert(node);
                if (!s.is_d_separated(oleft, oright, ogiven))
                    continue;
                Row r = expr(MeasureKind::I_cond, {left, right, given}, coords).dense();
                normalize_row(r, true);
                if (is_zero_row(r) || !cseen.insert(row_key(r)).second)
                    continue;
                cands.push_back({std::move(r), given.size(), left.size() + right.size()});
            }
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.given_size != b.given_size)
                return a.given_size < b.given_size;
            if (a.lr_size != b.lr_size)
                return a.lr_size > b.lr_size;
            return row_key(a.row) < row_key(b.row);
        });
        for (const auto& c : cands) {
            Row neg(c.row.size());
            for (size_t i = 0; i < c.row.size(); ++i)
                neg[i] = -c.row[i];
            if (lp::exact_implied(out.ineqs, out.eqs, c.row) &&
                lp::exact_implied(out.ineqs, out.eqs, neg))
                continue;
            out.add_eq(c.row, RowTag::ci);
        }
    }

    // User rows join by coordinate label.
    for (const auto& ex : extra) {
        auto remap = [&](const Row& r) {
            Row m(coords->size(), Rat(0));
            for (int i = 0; i < ex.coords->size(); ++i) {
                if (r[i] == 0)
                    continue;
                int j = coords->find(ex.coords->subset(i));
                if (j < 0)
                    throw error("extra row references unknown coordinate '" +
                                ex.coords->label(i) + "'");
                m[j] = r[i];
            }
            return m;
        };
        for (const auto& r : ex.eqs)
            out.add_eq(remap(r), RowTag::user);
        for (const auto& r : ex.ineqs)
            out.add_ineq(remap(r), RowTag::user);
    }
    return out;
}

}  // namespace causent
