#include "causent/polyhedron.hpp"

#include "lp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

namespace causent {

// ---------------------------------------------------------------------------
// HCone basics

void HCone::validate() const
{
    for (const auto& r : eqs)
        if (int(r.size()) != dim())
            throw error("equality row length mismatch");
    for (const auto& r : ineqs) {
        if (int(r.size()) != dim())
            throw error("inequality row length mismatch");
        if (is_zero_row(r))
            throw error("all-zero inequality row");
    }
}

int HCone::coord_index(const std::string& label) const
{
    for (int i = 0; i < dim(); ++i)
        if (coords[i] == label)
            return i;
    throw error("unknown coordinate '" + label + "'");
}

static Rat dot(const Row& a, const Row& b)
{
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0)
            s += a[i] * b[i];
    return s;
}

// ---------------------------------------------------------------------------
// Implication / equality / membership

bool implies(const HCone& c, const Row& e, Sense sense)
{
    if (int(e.size()) != c.dim())
        throw error("expression length does not match cone dimension");
    if (sense == Sense::geq)
        return lp::exact_implied(c.ineqs, c.eqs, e);
    Row neg(e.size());
    for (size_t i = 0; i < e.size(); ++i)
        neg[i] = -e[i];
    return lp::exact_implied(c.ineqs, c.eqs, e) && lp::exact_implied(c.ineqs, c.eqs, neg);
}

bool implies(const HCone& c, const LinearExpression& e, Sense sense)
{
    Row r(c.dim(), Rat(0));
    for (const auto& [i, q] : e.coeff) {
        NameSet s = e.coords->subset(i);
        r[c.coord_index(join_names(set_to_vector(s)))] = q;
    }
    return implies(c, r, sense);
}

bool equals(const HCone& a, const HCone& b)
{
    if (a.coords != b.coords)
        throw error("cone comparison across different ambient spaces");
    for (const auto& r : b.eqs)
        if (!implies(a, r, Sense::eq))
            return false;
    for (const auto& r : b.ineqs)
        if (!implies(a, r, Sense::geq))
            return false;
    for (const auto& r : a.eqs)
        if (!implies(b, r, Sense::eq))
            return false;
    for (const auto& r : a.ineqs)
        if (!implies(b, r, Sense::geq))
            return false;
    return true;
}

bool contains(const HCone& c, const std::vector<double>& v, double tolerance)
{
    if (int(v.size()) != c.dim())
        throw error("vector length does not match cone dimension");
    auto val = [&](const Row& r) {
        double s = 0;
        for (size_t i = 0; i < v.size(); ++i)
            s += r[i].get_d() * v[i];
        return s;
    };
    for (const auto& r : c.eqs)
        if (std::abs(val(r)) > tolerance)
            return false;
    for (const auto& r : c.ineqs)
        if (val(r) < -tolerance)
            return false;
    return true;
}

bool contains_exact(const HCone& c, const Row& v)
{
    if (int(v.size()) != c.dim())
        throw error("vector length does not match cone dimension");
    for (const auto& r : c.eqs)
        if (dot(r, v) != 0)
            return false;
    for (const auto& r : c.ineqs)
        if (dot(r, v) < 0)
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// Redundancy removal

namespace {

// Reduced row echelon form; returns pivot column per kept row.
std::vector<int> rref(std::vector<Row>& rows, int dim)
{
    std::vector<int> pivots;
    int rank = 0;
    for (int col = 0; col < dim && rank < int(rows.size()); ++col) {
        int piv = -1;
        for (int i = rank; i < int(rows.size()); ++i)
            if (rows[i][col] != 0) {
                piv = i;
                break;
            }
        if (piv < 0)
            continue;
        std::swap(rows[rank], rows[piv]);
        Rat p = rows[rank][col];
        for (auto& x : rows[rank])
            x /= p;
        for (int i = 0; i < int(rows.size()); ++i) {
            if (i == rank || rows[i][col] == 0)
                continue;
            Rat f = rows[i][col];
            for (int j = 0; j < dim; ++j)
                if (rows[rank][j] != 0)
                    rows[i][j] -= f * rows[rank][j];
        }
        pivots.push_back(col);
        ++rank;
    }
    rows.resize(rank);
    for (auto& r : rows)
        normalize_row(r, true);
    return pivots;
}

void reduce_mod_equalities(Row& r, const std::vector<Row>& eqs, const std::vector<int>& pivots)
{
    for (size_t k = 0; k < eqs.size(); ++k) {
        int p = pivots[k];
        if (r[p] == 0)
            continue;
        Rat f = r[p] / eqs[k][p];
        for (size_t j = 0; j < r.size(); ++j)
            if (eqs[k][j] != 0)
                r[j] -= f * eqs[k][j];
    }
}

}  // namespace

HCone remove_redundant(const HCone& cin)
{
    cin.validate();
    HCone c;
    c.coords = cin.coords;
    c.eqs = cin.eqs;
    for (auto& r : c.eqs)
        normalize_row(r, true);
    std::vector<int> pivots = rref(c.eqs, cin.dim());

    std::set<std::string> seen;
    for (Row r : cin.ineqs) {
        reduce_mod_equalities(r, c.eqs, pivots);
        normalize_row(r);
        if (is_zero_row(r))
            continue;
        if (seen.insert(row_key(r)).second)
            c.ineqs.push_back(std::move(r));
    }

    std::vector<bool> alive(c.ineqs.size(), true);
    for (size_t i = 0; i < c.ineqs.size(); ++i) {
        std::vector<const Row*> others;
        for (size_t j = 0; j < c.ineqs.size(); ++j)
            if (j != i && alive[j])
                others.push_back(&c.ineqs[j]);
        std::vector<const Row*> eqp;
        for (const auto& e : c.eqs)
            eqp.push_back(&e);
        if (lp::exact_implied(others, eqp, c.ineqs[i]))
            alive[i] = false;
    }
    std::vector<Row> kept;
    for (size_t i = 0; i < c.ineqs.size(); ++i)
        if (alive[i])
            kept.push_back(std::move(c.ineqs[i]));
    c.ineqs = std::move(kept);
    return c;
}

// ---------------------------------------------------------------------------
// Fourier-Motzkin elimination

namespace {

struct Bits {
    std::vector<uint64_t> w;

    static Bits single(int i, int total)
    {
        Bits b;
        b.w.assign((total + 63) / 64, 0);
        b.w[i / 64] |= uint64_t(1) << (i % 64);
        return b;
    }
    static Bits none(int total)
    {
        Bits b;
        b.w.assign((total + 63) / 64, 0);
        return b;
    }
    Bits united(const Bits& o) const
    {
        Bits b = *this;
        for (size_t i = 0; i < b.w.size(); ++i)
            b.w[i] |= o.w[i];
        return b;
    }
    void set(int i) { w[i / 64] |= uint64_t(1) << (i % 64); }
    int count() const
    {
        int n = 0;
        for (uint64_t x : w)
            n += __builtin_popcountll(x);
        return n;
    }
};

struct FmRow {
    Row v;
    Bits hist;   // ancestor rows (original inequality indices)
    Bits evars;  // eliminated variables used in the derivation
    bool vetted = false;  // survived an LP sweep against the then-current system
};

// Hybrid minimization: double-precision LP proposes a certificate, the exact
// rational check over the certificate's support confirms it. Rows are only
// dropped on exact confirmation, so the cone never changes. LPs run over the
// live coordinates only.
void hybrid_sweep(std::vector<FmRow>& rows, const std::vector<Row>& eqs, const FmOptions& opt,
                  bool fresh_only = false)
{
    const int dim = rows.empty() ? (eqs.empty() ? 0 : int(eqs[0].size()))
                                 : int(rows[0].v.size());
    std::vector<char> live(dim, 0);
    for (const auto& r : rows)
        for (int t = 0; t < dim; ++t)
            if (r.v[t] != 0)
                live[t] = 1;
    for (const auto& e : eqs)
        for (int t = 0; t < dim; ++t)
            if (e[t] != 0)
                live[t] = 1;
    std::vector<int> live_cols;
    for (int t = 0; t < dim; ++t)
        if (live[t])
            live_cols.push_back(t);
    auto restrict_row = [&](const Row& r) {
        Row s(live_cols.size());
        for (size_t i = 0; i < live_cols.size(); ++i)
            s[i] = r[live_cols[i]];
        return s;
    };
    std::vector<Row> rrows, reqs;
    for (const auto& r : rows)
        rrows.push_back(restrict_row(r.v));
    for (const auto& e : eqs)
        reqs.push_back(restrict_row(e));
    std::vector<const Row*> all, eqp;
    for (const auto& r : rrows)
        all.push_back(&r);
    for (const auto& e : reqs)
        eqp.push_back(&e);

    lp::FloatFarkas solver(all, eqp);
    std::vector<char> banned(rows.size(), 0);
    int dropped = 0, tested = 0;
    for (size_t i = 0; i < rows.size(); ++i) {
        if (fresh_only && rows[i].vetted)
            continue;
        ++tested;
        banned[i] = 1;
        auto cert = solver.test(rrows[i], banned);
        if (cert && cert->ineq_support.size() <= 40 &&
            lp::certify_support(all, eqp, *cert, rrows[i]))
            ++dropped;  // keep banned
        else
            banned[i] = 0;
    }
    if (dropped) {
        std::vector<FmRow> kept;
        for (size_t i = 0; i < rows.size(); ++i)
            if (!banned[i])
                kept.push_back(std::move(rows[i]));
        rows = std::move(kept);
    }
    for (auto& r : rows)
        r.vetted = true;
    if (opt.log) {
        std::ostringstream msg;
        msg << "  lp sweep tested " << tested << ", dropped " << dropped << ", "
            << rows.size() << " rows left";
        opt.log(msg.str());
    }
}

}  // namespace

HCone fm_eliminate(const HCone& cin, const NameSet& drop, const FmOptions& opt)
{
    cin.validate();
    std::vector<int> drop_idx;
    for (const auto& label : drop)
        drop_idx.push_back(cin.coord_index(label));
    std::sort(drop_idx.begin(), drop_idx.end());

    const int dim = cin.dim();
    std::vector<Row> eqs = cin.eqs;
    for (auto& e : eqs)
        normalize_row(e, true);

    std::vector<FmRow> rows;
    {
        std::set<std::string> seen;
        int m0 = int(cin.ineqs.size());
        for (int i = 0; i < m0; ++i) {
            Row r = cin.ineqs[i];
            normalize_row(r);
            if (is_zero_row(r))
                continue;
            if (seen.insert(row_key(r)).second)
                rows.push_back(FmRow{std::move(r), Bits::single(i, m0), Bits::none(dim)});
        }
    }

    std::vector<bool> pending(dim, false);
    for (int j : drop_idx)
        pending[j] = true;

    // Gaussian substitution via equalities that touch a dropped coordinate.
    for (bool changed = true; changed;) {
        changed = false;
        for (int j : drop_idx) {
            if (!pending[j])
                continue;
            int pick = -1;
            for (size_t k = 0; k < eqs.size(); ++k)
                if (eqs[k][j] != 0) {
                    pick = int(k);
                    break;
                }
            if (pick < 0)
                continue;
            Row e = eqs[pick];
            eqs.erase(eqs.begin() + pick);
            for (auto& other : eqs)
                if (other[j] != 0) {
                    Rat f = other[j] / e[j];
                    for (int t = 0; t < dim; ++t)
                        if (e[t] != 0)
                            other[t] -= f * e[t];
                    normalize_row(other, true);
                }
            std::set<std::string> seen;
            std::vector<FmRow> next;
            for (auto& fr : rows) {
                if (fr.v[j] != 0) {
                    Rat f = fr.v[j] / e[j];
                    for (int t = 0; t < dim; ++t)
                        if (e[t] != 0)
                            fr.v[t] -= f * e[t];
                    normalize_row(fr.v);
                }
                if (is_zero_row(fr.v))
                    continue;
                if (seen.insert(row_key(fr.v)).second)
                    next.push_back(std::move(fr));
            }
            rows = std::move(next);
            pending[j] = false;
            changed = true;
        }
    }

    // Pairwise elimination of the remaining dropped coordinates. The LP sweep
    // runs above the configured threshold and also adaptively: once a sweep
    // has shown the minimal size, growing far beyond it just wastes pair
    // combinations.
    int steps = 0;
    int last_kept = 80;
    bool swept_since_growth = false;
    auto sweep_trigger = [&] {
        return std::min(long(opt.lp_threshold), std::max(160l, long(last_kept) * 2));
    };
    for (;;) {
        int best = -1;
        long best_cost = 0;
        for (int j : drop_idx) {
            if (!pending[j])
                continue;
            long p = 0, n = 0;
            for (const auto& fr : rows) {
                if (fr.v[j] > 0)
                    ++p;
                else if (fr.v[j] < 0)
                    ++n;
            }
            long cost = p * n;
            if (best < 0 || cost < best_cost ||
                (cost == best_cost && cin.coords[j] < cin.coords[best])) {
                best = j;
                best_cost = cost;
            }
        }
        if (best < 0)
            break;
        if (!swept_since_growth && best_cost > 4 * sweep_trigger() &&
            long(rows.size()) > sweep_trigger() / 2) {
            hybrid_sweep(rows, eqs, opt, true);
            last_kept = int(rows.size());
            swept_since_growth = true;
            continue;  // re-pick with fresh counts
        }
        int j = best;
        ++steps;
        swept_since_growth = false;
        auto step_t0 = std::chrono::steady_clock::now();

        std::vector<FmRow> zero, pos, neg;
        for (auto& fr : rows) {
            if (fr.v[j] == 0)
                zero.push_back(std::move(fr));
            else if (fr.v[j] > 0)
                pos.push_back(std::move(fr));
            else
                neg.push_back(std::move(fr));
        }
        std::set<std::string> seen;
        std::vector<FmRow> next;
        for (auto& fr : zero) {
            if (seen.insert(row_key(fr.v)).second)
                next.push_back(std::move(fr));
        }
        for (const auto& p : pos)
            for (const auto& n : neg) {
                Bits hist = p.hist.united(n.hist);
                Bits evars = p.evars.united(n.evars);
                evars.set(j);
                // Imbert: after k eliminations every irredundant row is a
                // combination of at most k+1 original rows.
                if (hist.count() > steps + 1)
                    continue;
                Row r(dim, Rat(0));
                Rat cp = -n.v[j], cn = p.v[j];
                for (int t = 0; t < dim; ++t) {
                    if (p.v[t] != 0)
                        r[t] += cp * p.v[t];
                    if (n.v[t] != 0)
                        r[t] += cn * n.v[t];
                }
                normalize_row(r);
                if (is_zero_row(r))
                    continue;
                if (seen.insert(row_key(r)).second)
                    next.push_back(FmRow{std::move(r), std::move(hist), std::move(evars)});
            }
        rows = std::move(next);
        pending[j] = false;

        if (opt.log) {
            std::ostringstream msg;
            msg << "fm: eliminated " << cin.coords[j] << " (" << pos.size() << "x"
                << neg.size() << "), " << rows.size() << " rows ["
                << std::chrono::duration<double>(std::chrono::steady_clock::now() - step_t0)
                       .count()
                << "s]";
            opt.log(msg.str());
        }
        if (long(rows.size()) > sweep_trigger()) {
            hybrid_sweep(rows, eqs, opt, true);
            if (int(rows.size()) > opt.lp_threshold)
                hybrid_sweep(rows, eqs, opt, false);
            last_kept = int(rows.size());
            swept_since_growth = true;
        }
    }

    // Assemble the projection on the kept coordinates.
    std::vector<int> kept_cols;
    for (int t = 0; t < dim; ++t)
        if (!drop.count(cin.coords[t]))
            kept_cols.push_back(t);
    HCone out;
    for (int t : kept_cols)
        out.coords.push_back(cin.coords[t]);
    auto compact = [&](const Row& r) {
        Row s(kept_cols.size());
        for (size_t i = 0; i < kept_cols.size(); ++i)
            s[i] = r[kept_cols[i]];
        return s;
    };
    for (const auto& e : eqs) {
        for (int j : drop_idx)
            if (e[j] != 0)
                throw error("internal: equality still touches a dropped coordinate");
        Row s = compact(e);
        if (!is_zero_row(s))
            out.eqs.push_back(std::move(s));
    }
    for (const auto& fr : rows) {
        for (int j : drop_idx)
            if (fr.v[j] != 0)
                throw error("internal: inequality still touches a dropped coordinate");
        Row s = compact(fr.v);
        if (!is_zero_row(s))
            out.ineqs.push_back(std::move(s));
    }

    if (opt.final_minimize)
        out = remove_redundant(out);
    return out;
}

// ---------------------------------------------------------------------------
// Projection via incremental hull

namespace {

bool rationalize(double x, long max_den, Rat& out)
{
    bool neg = x < 0;
    double a = std::abs(x);
    if (a > 1e15)
        return false;
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double frac = a;
    for (int it = 0; it < 64; ++it) {
        double fl = std::floor(frac);
        if (fl > 1e15)
            return false;
        long ai = long(fl);
        long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > max_den)
            break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        double rem = frac - fl;
        if (std::abs(double(p1) / double(q1) - a) < 1e-11)
            break;
        if (rem < 1e-12)
            break;
        frac = 1.0 / rem;
    }
    if (q1 == 0)
        return false;
    if (std::abs(double(p1) / double(q1) - a) > 1e-7 * std::max(1.0, a))
        return false;
    out = Rat(neg ? -p1 : p1, q1);
    out.canonicalize();
    return true;
}

}  // namespace

HCone project_via_hull(const HCone& cin, const NameSet& drop, const FmOptions& opt,
                       const std::vector<Row>& seeds)
{
    cin.validate();
    const int dim = cin.dim();
    std::vector<int> kept_cols;
    for (int t = 0; t < dim; ++t)
        if (!drop.count(cin.coords[t]))
            kept_cols.push_back(t);
    for (const auto& label : drop)
        cin.coord_index(label);
    const int kdim = int(kept_cols.size());

    auto lift = [&](const Row& g) {
        Row full(dim, Rat(0));
        for (int k = 0; k < kdim; ++k)
            full[kept_cols[k]] = g[k];
        return full;
    };
    auto project = [&](const Row& v) {
        Row p(kdim);
        for (int k = 0; k < kdim; ++k)
            p[k] = v[kept_cols[k]];
        return p;
    };

    std::vector<const Row*> ip, ep;
    for (const auto& r : cin.ineqs)
        ip.push_back(&r);
    for (const auto& e : cin.eqs)
        ep.push_back(&e);
    lp::FloatFarkas solver(ip, ep);
    std::vector<char> no_bans(cin.ineqs.size(), 0);

    auto in_cone = [&](const Row& v) {
        for (const auto& r : cin.ineqs)
            if (dot(r, v) < 0)
                return false;
        for (const auto& e : cin.eqs)
            if (dot(e, v) != 0)
                return false;
        return true;
    };

    std::vector<Row> rays;
    std::set<std::string> ray_keys;
    auto add_ray = [&](Row p) {
        normalize_row(p);
        if (is_zero_row(p))
            throw error("internal: hull separator projects to zero");
        if (!ray_keys.insert(row_key(p)).second)
            throw error("internal: hull separator repeats a known ray");
        rays.push_back(std::move(p));
    };

    for (const auto& s : seeds) {
        if (int(s.size()) != dim || !in_cone(s))
            continue;
        Row p = project(s);
        normalize_row(p);
        if (!is_zero_row(p) && ray_keys.insert(row_key(p)).second)
            rays.push_back(std::move(p));
    }

    RaySet rs;
    rs.coords.clear();
    for (int k = 0; k < kdim; ++k)
        rs.coords.push_back(cin.coords[kept_cols[k]]);

    for (int iter = 0; iter < 2000; ++iter) {
        rs.rays = rays;
        rs.lineality.clear();
        HCone cand = from_rays(rs);

        std::vector<Row> to_check = cand.ineqs;
        for (const auto& e : cand.eqs) {
            to_check.push_back(e);
            Row neg(e.size());
            for (size_t i = 0; i < e.size(); ++i)
                neg[i] = -e[i];
            to_check.push_back(std::move(neg));
        }

        if (opt.log)
            opt.log("hull round " + std::to_string(iter) + ": " + std::to_string(rays.size()) +
                    " rays, " + std::to_string(to_check.size()) + " candidate facets");

        bool all_valid = true;
        for (const auto& g : to_check) {
            Row lifted = lift(g);
            bool decided = false;

            // Perturbed float solve first (non-degenerate, fast), then the
            // plain float solve; anything still open goes to the exact LP.
            for (double perturb : {1e-7, 0.0}) {
                auto cert = solver.test(lifted, no_bans, perturb);
                if (cert && lp::certify_support(ip, ep, *cert, lifted)) {
                    decided = true;  // facet exactly valid on the input cone
                    break;
                }
                if (!cert && !solver.last_separator().empty()) {
                    Row v(dim);
                    bool ok = true;
                    for (int i = 0; i < dim && ok; ++i)
                        ok = rationalize(solver.last_separator()[i], 1000000, v[i]);
                    if (ok) {
                        normalize_row(v);
                        if (!is_zero_row(v) && in_cone(v) && dot(lifted, v) < 0) {
                            add_ray(project(v));
                            decided = true;
                            all_valid = false;
                            break;
                        }
                    }
                }
            }
            if (decided && all_valid)
                continue;
            if (decided)
                break;

            // Exact decision.
            Row sep;
            if (lp::exact_implied(ip, ep, lifted, &sep))
                continue;
            if (!in_cone(sep) || dot(lifted, sep) >= 0)
                throw error("internal: exact Farkas separator failed verification");
            add_ray(project(sep));
            all_valid = false;
            break;
        }
        if (all_valid) {
            if (opt.log)
                opt.log("hull projection converged with " + std::to_string(rays.size()) +
                        " rays in " + std::to_string(iter + 1) + " rounds");
            return remove_redundant(cand);
        }
    }
    throw error("projection via hull did not converge");
}

// ---------------------------------------------------------------------------
// Double description

namespace {

struct DDRay {
    Row v;
    std::set<int> tight;  // processed inequality indices tight at this ray
};

struct DDState {
    int dim;
    std::vector<Row> lin;
    std::vector<DDRay> rays;
    std::vector<Row> processed;     // inequality rows already handled
    std::vector<Row> processed_eq;  // equality rows already handled (tight everywhere)

    // Minimal-face test: p and n span a face of dimension lineality+2 exactly
    // when the constraints tight at both have rank dim - |lin| - 2.
    bool adjacent(const DDRay& a, const DDRay& b) const
    {
        std::vector<const Row*> tight_rows;
        for (int q : a.tight)
            if (b.tight.count(q))
                tight_rows.push_back(&processed[q]);
        for (const auto& e : processed_eq)
            tight_rows.push_back(&e);
        return lp::rank(tight_rows, dim) >= dim - int(lin.size()) - 2;
    }

    void dedup()
    {
        std::set<std::string> seen;
        std::vector<DDRay> out;
        for (auto& r : rays) {
            normalize_row(r.v);
            if (is_zero_row(r.v))
                continue;
            if (seen.insert(row_key(r.v)).second)
                out.push_back(std::move(r));
        }
        rays = std::move(out);
    }

    void hit_lineality(const Row& a, bool equality)
    {
        int hit = -1;
        for (size_t i = 0; i < lin.size(); ++i)
            if (dot(a, lin[i]) != 0) {
                hit = int(i);
                break;
            }
        Row l = lin[hit];
        Rat al = dot(a, l);
        if (!equality && al < 0) {
            for (auto& x : l)
                x = -x;
            al = -al;
        }
        std::vector<Row> nl;
        for (size_t i = 0; i < lin.size(); ++i) {
            if (int(i) == hit)
                continue;
            Row li = lin[i];
            Rat f = dot(a, li) / al;
            for (int t = 0; t < dim; ++t)
                if (l[t] != 0)
                    li[t] -= f * l[t];
            normalize_row(li, true);
            nl.push_back(std::move(li));
        }
        lin = std::move(nl);
        for (auto& r : rays) {
            Rat f = dot(a, r.v) / al;
            if (f == 0)
                continue;
            for (int t = 0; t < dim; ++t)
                if (l[t] != 0)
                    r.v[t] -= f * l[t];
        }
        if (!equality) {
            DDRay nr;
            nr.v = l;
            for (int q = 0; q < int(processed.size()); ++q)
                nr.tight.insert(q);  // orthogonal to all previously processed rows
            rays.push_back(std::move(nr));
        }
        dedup();
    }

    void add_constraint(const Row& a, bool equality)
    {
        for (const auto& l : lin)
            if (dot(a, l) != 0) {
                hit_lineality(a, equality);
                if (equality) {
                    processed_eq.push_back(a);
                } else {
                    processed.push_back(a);
                    int q = int(processed.size()) - 1;
                    for (auto& r : rays)
                        if (dot(a, r.v) == 0)
                            r.tight.insert(q);
                }
                return;
            }

        std::vector<DDRay> keep, plus, minus;
        for (auto& r : rays) {
            Rat s = dot(a, r.v);
            if (s == 0)
                keep.push_back(std::move(r));
            else if (s > 0)
                plus.push_back(std::move(r));
            else
                minus.push_back(std::move(r));
        }
        int q = -1;
        if (equality) {
            processed_eq.push_back(a);
        } else {
            processed.push_back(a);
            q = int(processed.size()) - 1;
        }
        for (auto& r : keep)
            if (q >= 0)
                r.tight.insert(q);

        std::vector<DDRay> born;
        for (const auto& p : plus)
            for (const auto& n : minus) {
                if (!adjacent(p, n))
                    continue;
                DDRay nr;
                nr.v.assign(dim, Rat(0));
                Rat cp = dot(a, p.v), cn = dot(a, n.v);
                for (int t = 0; t < dim; ++t)
                    nr.v[t] = cp * n.v[t] - cn * p.v[t];
                for (int t : p.tight)
                    if (n.tight.count(t))
                        nr.tight.insert(t);
                if (q >= 0)
                    nr.tight.insert(q);
                born.push_back(std::move(nr));
            }
        rays = std::move(keep);
        if (!equality)
            for (auto& r : plus)
                rays.push_back(std::move(r));
        for (auto& r : born)
            rays.push_back(std::move(r));
        dedup();
    }
};

}  // namespace

RaySet extreme_rays(const HCone& c, int dim_cap)
{
    c.validate();
    if (c.dim() > dim_cap)
        throw cap_error("extreme_rays: dimension " + std::to_string(c.dim()) +
                    " exceeds the cap of " + std::to_string(dim_cap) +
                    "; project the cone first or raise the cap");

    DDState st;
    st.dim = c.dim();
    for (int i = 0; i < st.dim; ++i) {
        Row e(st.dim, Rat(0));
        e[i] = 1;
        st.lin.push_back(std::move(e));
    }
    std::vector<Row> eq_rows = c.eqs, ineq_rows = c.ineqs;
    for (auto& r : eq_rows)
        normalize_row(r, true);
    for (auto& r : ineq_rows)
        normalize_row(r);
    auto by_support = [](const Row& a, const Row& b) {
        int sa = 0, sb = 0;
        for (const auto& x : a)
            sa += x != 0;
        for (const auto& x : b)
            sb += x != 0;
        if (sa != sb)
            return sa < sb;
        return row_key(a) < row_key(b);
    };
    std::sort(eq_rows.begin(), eq_rows.end(), by_support);
    std::sort(ineq_rows.begin(), ineq_rows.end(), by_support);
    for (const auto& e : eq_rows)
        st.add_constraint(e, true);
    for (const auto& a : ineq_rows)
        st.add_constraint(a, false);

    // Exact extremality filter against the full input system.
    RaySet out;
    out.coords = c.coords;
    std::vector<const Row*> eq_ptrs;
    for (const auto& e : c.eqs)
        eq_ptrs.push_back(&e);
    int lin_dim = lp::rank([&] {
        std::vector<const Row*> p;
        for (const auto& l : st.lin)
            p.push_back(&l);
        return p;
    }(), st.dim);
    for (auto& r : st.rays) {
        std::vector<const Row*> tight = eq_ptrs;
        bool feasible = true;
        for (const auto& a : c.ineqs) {
            Rat s = dot(a, r.v);
            if (s == 0)
                tight.push_back(&a);
            else if (s < 0)
                feasible = false;
        }
        for (const auto& e : c.eqs)
            if (dot(e, r.v) != 0)
                feasible = false;
        if (!feasible)
            throw error("internal: double description produced an infeasible ray");
        if (lp::rank(tight, st.dim) == st.dim - lin_dim - 1)
            out.rays.push_back(r.v);
    }
    std::sort(out.rays.begin(), out.rays.end(), [](const Row& a, const Row& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
    out.lineality = st.lin;
    rref(out.lineality, st.dim);
    return out;
}

HCone from_rays(const RaySet& r)
{
    if (r.coords.empty())
        throw error("from_rays: ray set carries no coordinate labels");
    const int dim = int(r.coords.size());
    HCone polar;
    polar.coords = r.coords;
    for (const auto& ray : r.rays) {
        if (int(ray.size()) != dim)
            throw error("ray length mismatch");
        polar.ineqs.push_back(ray);
    }
    for (const auto& l : r.lineality) {
        if (int(l.size()) != dim)
            throw error("lineality vector length mismatch");
        polar.eqs.push_back(l);
    }
    RaySet dual = extreme_rays(polar, dim);
    HCone out;
    out.coords = r.coords;
    out.ineqs = dual.rays;
    out.eqs = dual.lineality;
    return out;
}

}  // namespace causent
