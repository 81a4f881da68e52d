#include "causent/entropy_space.hpp"

#include <algorithm>
#include <cmath>

namespace causent {

// ---------------------------------------------------------------------------
// CoordinateSystem

static bool canonical_less(const NameSet& a, const NameSet& b)
{
    if (a.size() != b.size())
        return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

CoordinateSystem::CoordinateSystem(std::vector<NameSet> subsets) : subsets_(std::move(subsets))
{
    for (const auto& s : subsets_)
        if (s.empty())
            throw error("empty subset in coordinate system");
    std::sort(subsets_.begin(), subsets_.end(), canonical_less);
    for (int i = 0; i < int(subsets_.size()); ++i)
        if (!index_.emplace(subsets_[i], i).second)
            throw error("duplicate subset in coordinate system");
}

CoordinateSystem CoordinateSystem::power_set(const std::vector<std::string>& vars)
{
    if (vars.empty())
        throw error("power set of no variables");
    NameSet unique(vars.begin(), vars.end());
    if (unique.size() != vars.size())
        throw error("duplicate variable name");
    std::vector<std::string> v(unique.begin(), unique.end());
    std::vector<NameSet> subsets;
    for (unsigned long long mask = 1; mask < (1ull << v.size()); ++mask) {
        NameSet s;
        for (size_t i = 0; i < v.size(); ++i)
            if (mask & (1ull << i))
                s.insert(v[i]);
        subsets.push_back(std::move(s));
    }
    return CoordinateSystem(std::move(subsets));
}

std::string CoordinateSystem::label(int i) const
{
    return join_names(set_to_vector(subsets_[i]));
}

int CoordinateSystem::find(const NameSet& s) const
{
    auto it = index_.find(s);
    return it == index_.end() ? -1 : it->second;
}

int CoordinateSystem::require(const NameSet& s) const
{
    int i = find(s);
    if (i < 0)
        throw error("subset {" + join_names(set_to_vector(s)) +
                    "} is not a coordinate (not coexisting)");
    return i;
}

std::vector<std::string> CoordinateSystem::universe() const
{
    NameSet u;
    for (const auto& s : subsets_)
        u.insert(s.begin(), s.end());
    return set_to_vector(u);
}

// ---------------------------------------------------------------------------
// LinearExpression

Row LinearExpression::dense() const
{
    Row r(coords->size(), Rat(0));
    for (const auto& [i, q] : coeff)
        r[i] = q;
    return r;
}

LinearExpression& LinearExpression::add(const LinearExpression& other, const Rat& scale)
{
    if (!(*coords == *other.coords))
        throw error("coordinate-system mismatch");
    for (const auto& [i, q] : other.coeff) {
        Rat& c = coeff[i];
        c += q * scale;
        if (c == 0)
            coeff.erase(i);
    }
    return *this;
}

static NameSet set_union(const NameSet& a, const NameSet& b)
{
    NameSet u = a;
    u.insert(b.begin(), b.end());
    return u;
}

LinearExpression expr(MeasureKind kind, const std::vector<NameSet>& args, CoordsPtr coords)
{
    LinearExpression e;
    e.coords = coords;
    auto term = [&](const NameSet& s, int sign) {
        if (s.empty())
            return;  // H({}) = 0
        int i = coords->require(s);
        Rat& c = e.coeff[i];
        c += sign;
        if (c == 0)
            e.coeff.erase(i);
    };
    switch (kind) {
    case MeasureKind::H:
        if (args.size() != 1)
            throw error("H takes one subset");
        term(args[0], +1);
        break;
    case MeasureKind::H_cond:
        if (args.size() != 2)
            throw error("H(.|.) takes two subsets");
        term(set_union(args[0], args[1]), +1);
        term(args[1], -1);
        break;
    case MeasureKind::I:
        if (args.size() != 2)
            throw error("I(.:.) takes two subsets");
        term(args[0], +1);
        term(args[1], +1);
        term(set_union(args[0], args[1]), -1);
        break;
    case MeasureKind::I_cond:
        if (args.size() != 3)
            throw error("I(.:.|.) takes three subsets");
        term(set_union(args[0], args[2]), +1);
        term(set_union(args[1], args[2]), +1);
        term(args[2], -1);
        term(set_union(set_union(args[0], args[1]), args[2]), -1);
        break;
    }
    return e;
}

LinearExpression expr_from_row(const Row& row, CoordsPtr coords)
{
    if (int(row.size()) != coords->size())
        throw error("row length does not match coordinate system");
    LinearExpression e;
    e.coords = coords;
    for (int i = 0; i < int(row.size()); ++i)
        if (row[i] != 0)
            e.coeff[i] = row[i];
    return e;
}

// ---------------------------------------------------------------------------
// JointDistribution

size_t JointDistribution::outcome_count() const
{
    size_t n = 1;
    for (const auto& a : alphabets)
        n *= a.size();
    return n;
}

void JointDistribution::validate() const
{
    if (vars.size() != alphabets.size())
        throw error("variable/alphabet count mismatch");
    if (!std::is_sorted(vars.begin(), vars.end()))
        throw error("variables must be sorted");
    for (const auto& a : alphabets)
        if (a.empty())
            throw error("empty alphabet");
    if (pmf.size() != outcome_count())
        throw error("pmf size does not match alphabet shape");
    Rat total = 0;
    for (const auto& p : pmf) {
        if (p < 0)
            throw error("negative probability");
        total += p;
    }
    if (total != 1)
        throw error("pmf not normalized (sums to " + rat_to_string(total) + ")");
}

Rat JointDistribution::probability(const std::vector<int>& outcome) const
{
    size_t idx = 0;
    for (size_t i = 0; i < vars.size(); ++i)
        idx = idx * alphabets[i].size() + outcome[i];
    return pmf[idx];
}

// ---------------------------------------------------------------------------
// Shannon entropy of marginals

// Exact when p = 1/2^k; exponent returned through k.
static bool is_reciprocal_power_of_two(const Rat& p, unsigned long& k)
{
    if (p.get_num() != 1)
        return false;
    const mpz_class& den = p.get_den();
    if (mpz_popcount(den.get_mpz_t()) != 1)
        return false;
    k = mpz_scan1(den.get_mpz_t(), 0);
    return true;
}

EntropyVector entropy_vector(const JointDistribution& p, CoordsPtr coords)
{
    p.validate();
    std::map<std::string, size_t> var_index;
    for (size_t i = 0; i < p.vars.size(); ++i)
        var_index[p.vars[i]] = i;

    EntropyVector out;
    out.coords = coords;
    out.values.resize(coords->size());
    out.exact.resize(coords->size());

    size_t total = p.outcome_count();
    std::vector<int> outcome(p.vars.size());
    for (int ci = 0; ci < coords->size(); ++ci) {
        std::vector<size_t> sel;
        for (const auto& name : coords->subset(ci)) {
            auto it = var_index.find(name);
            if (it == var_index.end())
                throw error("coordinate variable '" + name + "' not in distribution");
            sel.push_back(it->second);
        }
        std::map<std::vector<int>, Rat> marginal;
        for (size_t flat = 0; flat < total; ++flat) {
            size_t rest = flat;
            for (size_t i = p.vars.size(); i-- > 0;) {
                outcome[i] = int(rest % p.alphabets[i].size());
                rest /= p.alphabets[i].size();
            }
            if (p.pmf[flat] == 0)
                continue;
            std::vector<int> key;
            for (size_t i : sel)
                key.push_back(outcome[i]);
            marginal[key] += p.pmf[flat];
        }

        double h = 0.0;
        Rat h_exact = 0;
        bool exact = true;
        for (const auto& [key, prob] : marginal) {
            double pd = prob.get_d();
            h -= pd * std::log2(pd);
            unsigned long k = 0;
            if (is_reciprocal_power_of_two(prob, k))
                h_exact += prob * Rat(long(k));
            else
                exact = false;
        }
        out.values[ci] = h;
        if (exact) {
            out.exact[ci] = h_exact;
            out.values[ci] = h_exact.get_d();
        }
    }
    return out;
}

bool EntropyVector::all_exact() const
{
    for (const auto& e : exact)
        if (!e)
            return false;
    return true;
}

Row EntropyVector::exact_row() const
{
    if (!all_exact())
        throw error("entropy vector has inexact components");
    Row r;
    for (const auto& e : exact)
        r.push_back(*e);
    return r;
}

double evaluate(const LinearExpression& e, const EntropyVector& v)
{
    if (!(*e.coords == *v.coords))
        throw error("coordinate-system mismatch");
    double out = 0.0;
    for (const auto& [i, q] : e.coeff)
        out += q.get_d() * v.values[i];
    return out;
}

std::optional<Rat> evaluate_exact(const LinearExpression& e, const EntropyVector& v)
{
    if (!(*e.coords == *v.coords))
        throw error("coordinate-system mismatch");
    Rat out = 0;
    for (const auto& [i, q] : e.coeff) {
        if (!v.exact[i])
            return std::nullopt;
        out += q * *v.exact[i];
    }
    return out;
}

}  // namespace causent
