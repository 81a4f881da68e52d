#include "causent/oracle.hpp"

#include <algorithm>
#include <random>

namespace causent {

JointDistribution matus_distribution()
{
    JointDistribution p;
    p.vars = {"T", "U", "V", "W"};
    p.alphabets = {{"0", "1"}, {"0", "1"}, {"0", "1"}, {"0", "1"}};
    p.pmf.assign(16, Rat(0));
    for (int v = 0; v < 2; ++v)
        for (int w = 0; w < 2; ++w) {
            int t = (v == 0 && w == 0) ? 1 : 0;
            int u = (v == 1 && w == 1) ? 1 : 0;
            size_t idx = ((size_t(t) * 2 + u) * 2 + v) * 2 + w;
            p.pmf[idx] = Rat(1, 4);
        }
    p.validate();
    return p;
}

JointDistribution compose(const CausalStructure& s, const CPDAssignment& a)
{
    std::vector<std::string> vars = s.node_names();
    for (const auto& v : vars)
        if (!a.cpds.count(v))
            throw error("no CPD for node '" + v + "'");

    JointDistribution p;
    p.vars = vars;
    for (const auto& v : vars)
        p.alphabets.push_back(a.cpds.at(v).alphabet);

    std::map<std::string, int> pos;
    for (size_t i = 0; i < vars.size(); ++i)
        pos[vars[i]] = int(i);

    // Sorted parent lists index the CPD tables.
    std::vector<std::vector<int>> parents(vars.size());
    for (size_t i = 0; i < vars.size(); ++i) {
        NameSet par;
        for (int pi : s.parents_of(s.index(vars[i])))
            par.insert(s.node(pi).name);
        for (const auto& n : par)
            parents[i].push_back(pos.at(n));
    }

    size_t total = p.outcome_count();
    p.pmf.assign(total, Rat(0));
    std::vector<int> outcome(vars.size());
    for (size_t flat = 0; flat < total; ++flat) {
        size_t rest = flat;
        for (size_t i = vars.size(); i-- > 0;) {
            outcome[i] = int(rest % p.alphabets[i].size());
            rest /= p.alphabets[i].size();
        }
        Rat prob = 1;
        for (size_t i = 0; i < vars.size() && prob != 0; ++i) {
            const auto& cpd = a.cpds.at(vars[i]);
            size_t row = 0;
            for (int pj : parents[i])
                row = row * p.alphabets[pj].size() + outcome[pj];
            if (row >= cpd.table.size())
                throw error("CPD for '" + vars[i] + "' has too few rows");
            if (outcome[i] >= int(cpd.table[row].size()))
                throw error("CPD for '" + vars[i] + "' has too few columns");
            prob *= cpd.table[row][outcome[i]];
        }
        p.pmf[flat] = prob;
    }
    p.validate();
    return p;
}

namespace {

constexpr int kGrid = 64;

// Uniform-ish dyadic pmf: grid cut points from the engine.
std::vector<Rat> random_dyadic_pmf(std::mt19937_64& rng, int size)
{
    std::vector<int> cuts{0, kGrid};
    std::uniform_int_distribution<int> dist(0, kGrid);
    for (int i = 0; i < size - 1; ++i)
        cuts.push_back(dist(rng));
    std::sort(cuts.begin(), cuts.end());
    std::vector<Rat> pmf;
    for (int i = 0; i < size; ++i)
        pmf.push_back(Rat(cuts[i + 1] - cuts[i], kGrid));
    return pmf;
}

CPDAssignment random_assignment(const CausalStructure& s, int alphabet_size,
                                std::mt19937_64& rng)
{
    std::vector<std::string> alphabet;
    for (int i = 0; i < alphabet_size; ++i)
        alphabet.push_back(std::to_string(i));

    CPDAssignment a;
    for (const auto& name : s.node_names()) {
        int rows = 1;
        for (int p = 0; p < int(s.parents_of(s.index(name)).size()); ++p)
            rows *= alphabet_size;
        CPDAssignment::CPD cpd;
        cpd.alphabet = alphabet;
        for (int r = 0; r < rows; ++r)
            cpd.table.push_back(random_dyadic_pmf(rng, alphabet_size));
        a.cpds[name] = std::move(cpd);
    }
    return a;
}

}  // namespace

JointDistribution sample_compatible_one(const CausalStructure& s, int alphabet_size,
                                        uint64_t seed, uint64_t index)
{
    std::mt19937_64 rng(seed + index);
    return compose(s, random_assignment(s, alphabet_size, rng));
}

std::vector<JointDistribution> sample_compatible(const CausalStructure& s, int alphabet_size,
                                                 int count, uint64_t seed)
{
    std::vector<JointDistribution> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k)
        out.push_back(sample_compatible_one(s, alphabet_size, seed, uint64_t(k)));
    return out;
}

JointDistribution marginalize(const JointDistribution& p, const NameSet& keep)
{
    JointDistribution out;
    std::vector<size_t> sel;
    for (size_t i = 0; i < p.vars.size(); ++i)
        if (keep.count(p.vars[i])) {
            out.vars.push_back(p.vars[i]);
            out.alphabets.push_back(p.alphabets[i]);
            sel.push_back(i);
        }
    if (out.vars.size() != keep.size())
        throw error("marginalize: unknown variable in keep set");
    out.pmf.assign(out.outcome_count(), Rat(0));
    std::vector<int> outcome(p.vars.size());
    for (size_t flat = 0; flat < p.pmf.size(); ++flat) {
        size_t rest = flat;
        for (size_t i = p.vars.size(); i-- > 0;) {
            outcome[i] = int(rest % p.alphabets[i].size());
            rest /= p.alphabets[i].size();
        }
        if (p.pmf[flat] == 0)
            continue;
        size_t idx = 0;
        for (size_t k = 0; k < sel.size(); ++k)
            idx = idx * out.alphabets[k].size() + outcome[sel[k]];
        out.pmf[idx] += p.pmf[flat];
    }
    return out;
}

EntropyVector marginal_entropy_vector(const JointDistribution& p, const HCone& cone)
{
    std::vector<NameSet> subsets;
    NameSet used;
    for (const auto& label : cone.coords) {
        NameSet s;
        std::string cur;
        for (char ch : label) {
            if (ch == ',') {
                s.insert(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
        if (!cur.empty())
            s.insert(cur);
        used.insert(s.begin(), s.end());
        subsets.push_back(std::move(s));
    }
    auto coords = std::make_shared<CoordinateSystem>(subsets);
    JointDistribution q = marginalize(p, used);
    EntropyVector ev = entropy_vector(q, coords);

    // Reorder onto the cone's coordinate order.
    EntropyVector out;
    out.coords = coords;
    out.values.resize(cone.dim());
    out.exact.resize(cone.dim());
    for (int i = 0; i < cone.dim(); ++i) {
        int j = coords->require(subsets[i]);
        out.values[i] = ev.values[j];
        out.exact[i] = ev.exact[j];
    }
    return out;
}

std::optional<JointDistribution> falsify(const HCone& c, const CausalStructure& s, int budget,
                                         int alphabet_size, uint64_t seed)
{
    if (c.eqs.empty() && c.ineqs.empty())
        return std::nullopt;

    auto violation = [&](const JointDistribution& p) {
        EntropyVector ev = marginal_entropy_vector(p, c);
        double worst = 0.0;
        for (const auto& r : c.ineqs) {
            double v = 0;
            for (int i = 0; i < c.dim(); ++i)
                v += r[i].get_d() * ev.values[i];
            worst = std::min(worst, v);
        }
        for (const auto& r : c.eqs) {
            double v = 0;
            for (int i = 0; i < c.dim(); ++i)
                v += r[i].get_d() * ev.values[i];
            worst = std::min(worst, -std::abs(v));
        }
        return worst;
    };

    const double tol = 1e-9;
    int spent = 0;
    for (uint64_t restart = 0; spent < budget; ++restart) {
        std::mt19937_64 rng(seed + restart * 1000003ull);
        CPDAssignment a = random_assignment(s, alphabet_size, rng);
        JointDistribution p = compose(s, a);
        ++spent;
        double best = violation(p);
        if (best < -tol)
            return p;

        // Hill-climb on single CPD entries along the dyadic grid.
        bool improved = true;
        while (improved && spent < budget) {
            improved = false;
            for (auto& [node, cpd] : a.cpds) {
                for (auto& row : cpd.table) {
                    for (size_t i = 0; i < row.size() && spent < budget; ++i) {
                        for (size_t j = 0; j < row.size() && spent < budget; ++j) {
                            if (i == j || row[i] < Rat(1, kGrid))
                                continue;
                            row[i] -= Rat(1, kGrid);
                            row[j] += Rat(1, kGrid);
                            JointDistribution q = compose(s, a);
                            ++spent;
                            double v = violation(q);
                            if (v < best) {
                                best = v;
                                improved = true;
                                if (best < -tol)
                                    return q;
                            } else {
                                row[i] += Rat(1, kGrid);
                                row[j] -= Rat(1, kGrid);
                            }
                        }
                    }
                }
            }
        }
    }
    return std::nullopt;
}

}  // namespace causent
