#include "causent/marginal.hpp"

#include "causent/json_io.hpp"
#include "causent/oracle.hpp"

#include <algorithm>
#include <filesystem>

namespace causent {

CoordsPtr marginal_closure(const CausalStructure& s, const MarginalScenario& m)
{
    std::vector<std::string> observed = s.observed_names();
    NameSet observed_set(observed.begin(), observed.end());
    std::set<NameSet> subsets;
    if (m.kept.empty()) {
        for (unsigned long long mask = 1; mask < (1ull << observed.size()); ++mask) {
            NameSet sub;
            for (size_t i = 0; i < observed.size(); ++i)
                if (mask & (1ull << i))
                    sub.insert(observed[i]);
            subsets.insert(std::move(sub));
        }
    } else {
        for (const auto& kept : m.kept) {
            for (const auto& v : kept)
                if (!observed_set.count(v))
                    throw error("marginal set names non-observed variable '" + v + "'");
            std::vector<std::string> v(kept.begin(), kept.end());
            for (unsigned long long mask = 1; mask < (1ull << v.size()); ++mask) {
                NameSet sub;
                for (size_t i = 0; i < v.size(); ++i)
                    if (mask & (1ull << i))
                        sub.insert(v[i]);
                subsets.insert(std::move(sub));
            }
        }
    }
    return std::make_shared<CoordinateSystem>(
        std::vector<NameSet>(subsets.begin(), subsets.end()));
}

namespace {

std::string marginal_key(const MarginalScenario& m)
{
    Json j = Json::array();
    for (const auto& s : m.kept)
        j.push_back(join_names(set_to_vector(s)));
    return j.dump();
}

std::optional<HCone> cache_load(const PipelineOptions& opt, const std::string& key)
{
    if (!opt.cache_dir)
        return std::nullopt;
    std::string path = *opt.cache_dir + "/" + sha256_hex(key) + ".json";
    if (!std::filesystem::exists(path))
        return std::nullopt;
    try {
        return hcone_from_json(load_json_file(path));
    } catch (const std::exception&) {
        return std::nullopt;  // stale or foreign file; recompute
    }
}

void cache_store(const PipelineOptions& opt, const std::string& key, const HCone& c)
{
    if (!opt.cache_dir)
        return;
    std::filesystem::create_directories(*opt.cache_dir);
    write_json_file(*opt.cache_dir + "/" + sha256_hex(key) + ".json", to_json(c));
}

// Exact entropy vectors of a battery of simple compatible strategies: every
// node constant, a uniform bit, a copy of one parent, or the parity of its
// parents. All probabilities are powers of two, so the vectors are exact;
// they seed the hull projection with achievable rays.
std::vector<Row> strategy_seeds(const CausalStructure& s, CoordsPtr coords)
{
    std::vector<std::string> names = s.node_names();
    const int n = int(names.size());
    std::vector<std::vector<int>> choices(n);  // 0 const, 1 uniform, 2+k copy parent k, -1 xor
    std::vector<std::vector<std::string>> parent_names(n);
    long long combos = 1;
    for (int i = 0; i < n; ++i) {
        NameSet par;
        for (int p : s.parents_of(s.index(names[i])))
            par.insert(s.node(p).name);
        parent_names[i] = set_to_vector(par);
        choices[i] = {0, 1};
        for (size_t k = 0; k < parent_names[i].size(); ++k)
            choices[i].push_back(2 + int(k));
        if (parent_names[i].size() >= 2)
            choices[i].push_back(-1);
        combos *= int(choices[i].size());
    }
    if (combos > 20000)
        return {};

    std::vector<Row> seeds;
    std::set<std::string> seen;
    std::vector<int> pick(n, 0);
    for (long long code = 0; code < combos; ++code) {
        long long c = code;
        CPDAssignment a;
        for (int i = 0; i < n; ++i) {
            int choice = choices[i][c % choices[i].size()];
            c /= choices[i].size();
            CPDAssignment::CPD cpd;
            cpd.alphabet = {"0", "1"};
            int rows = 1 << parent_names[i].size();
            for (int r = 0; r < rows; ++r) {
                std::vector<Rat> pmf(2, Rat(0));
                if (choice == 0)
                    pmf[0] = 1;
                else if (choice == 1)
                    pmf[0] = pmf[1] = Rat(1, 2);
                else if (choice == -1) {
                    int parity = __builtin_popcount(unsigned(r)) & 1;
                    pmf[parity] = 1;
                } else {
                    int k = choice - 2;
                    int bit = (r >> (parent_names[i].size() - 1 - k)) & 1;
                    pmf[bit] = 1;
                }
                cpd.table.push_back(std::move(pmf));
            }
            a.cpds[names[i]] = std::move(cpd);
        }
        EntropyVector ev = entropy_vector(compose(s, a), coords);
        if (!ev.all_exact())
            continue;
        Row row = ev.exact_row();
        normalize_row(row);
        if (is_zero_row(row))
            continue;
        if (seen.insert(row_key(row)).second)
            seeds.push_back(std::move(row));
    }
    return seeds;
}

HCone project(const ConstraintSystem& sys, CoordsPtr kept, const PipelineOptions& opt,
              const std::vector<Row>& seeds = {})
{
    NameSet kept_labels;
    for (int i = 0; i < kept->size(); ++i)
        kept_labels.insert(kept->label(i));
    HCone cone = sys.cone();
    NameSet drop;
    for (const auto& label : cone.coords)
        if (!kept_labels.count(label))
            drop.insert(label);
    for (const auto& label : kept_labels)
        if (std::find(cone.coords.begin(), cone.coords.end(), label) == cone.coords.end())
            throw error("marginal coordinate '" + label + "' does not exist in the model");
    FmOptions fm;
    fm.lp_threshold = opt.fm_lp_threshold;
    fm.log = opt.log;
    // Very wide eliminations hit Fourier-Motzkin's intermediate blow-up; the
    // hull method computes the same projection in the target space.
    if (int(drop.size()) >= 90)
        return project_via_hull(cone, drop, fm, seeds);
    return fm_eliminate(cone, drop, fm);
}

}  // namespace

HCone classical_outer(const CausalStructure& s, const MarginalScenario& m,
                      NonShannon nonshannon, const PipelineOptions& opt)
{
    std::string key = "classical_outer\n" + s.to_dsl() + marginal_key(m) +
                      std::to_string(int(nonshannon));
    if (auto hit = cache_load(opt, key))
        return *hit;

    auto coords = std::make_shared<CoordinateSystem>(
        CoordinateSystem::power_set(s.node_names()));
    ConstraintSystem sys = shannon_matrix(coords);
    sys.append(ci_matrix(s, coords));
    if ((nonshannon == NonShannon::ingleton || nonshannon == NonShannon::both) &&
        s.node_count() >= 4)
        sys.append(ingleton_rows(coords));
    if ((nonshannon == NonShannon::zy || nonshannon == NonShannon::both) &&
        s.node_count() >= 4)
        sys.append(zhang_yeung_rows(coords));
    // per-coordinate non-negativity is implied by the elemental rows

    HCone out = project(sys, marginal_closure(s, m), opt,
                        s.node_count() >= 7 ? strategy_seeds(s, coords) : std::vector<Row>{});
    cache_store(opt, key, out);
    return out;
}

HCone classical_inner(const CausalStructure& s, const MarginalScenario& m,
                      const PipelineOptions& opt)
{
    std::string key = "classical_inner\n" + s.to_dsl() + marginal_key(m);
    if (auto hit = cache_load(opt, key))
        return *hit;

    auto coords = std::make_shared<CoordinateSystem>(
        CoordinateSystem::power_set(s.node_names()));
    ConstraintSystem sys = shannon_matrix(coords);
    sys.append(ci_matrix(s, coords));
    if (s.node_count() >= 4)
        sys.append(ingleton_rows(coords));
    // per-coordinate non-negativity is implied by the elemental rows

    HCone out = project(sys, marginal_closure(s, m), opt,
                        s.node_count() >= 7 ? strategy_seeds(s, coords) : std::vector<Row>{});
    cache_store(opt, key, out);
    return out;
}

HCone quantum_outer(const CausalStructure& s, const MarginalScenario& m, bool purity,
                    const PipelineOptions& opt)
{
    std::string key = "quantum_outer\n" + s.to_dsl() + marginal_key(m) +
                      (purity ? "purity" : "");
    if (auto hit = cache_load(opt, key))
        return *hit;

    ElementTable et(s);
    ConstraintSystem sys = quantum_basic_matrix(s, et);
    sys.append(quantum_ci_matrix(s, et));
    sys.append(dpi_matrix(s, et));
    sys.append(quantum_reduction_equalities(s, et, purity));
    sys.append(nonneg_rows(sys.coords));

    HCone out = project(sys, marginal_closure(s, m), opt);
    cache_store(opt, key, out);
    return out;
}

HCone postselected_pipeline(const CausalStructure& s,
                            const std::vector<std::pair<std::string, int>>& selectors,
                            const MarginalScenario& m, Model model, NonShannon nonshannon,
                            bool purity, const PipelineOptions& opt)
{
    if (model == Model::ns)
        throw error("use ns_pipeline for the no-signalling model");
    CausalStructure cur = s;
    for (const auto& [node, n] : selectors)
        cur = cur.post_select(node, n);
    if (model == Model::classical)
        return classical_outer(cur, m, nonshannon, opt);
    return quantum_outer(cur, m, purity, opt);
}

HCone ns_pipeline(const CausalStructure& s, const std::string& node, int values,
                  const std::vector<ConstraintSystem>& extra, const MarginalScenario& m,
                  const PipelineOptions& opt)
{
    std::string key = "ns\n" + s.to_dsl() + node + ":" + std::to_string(values) +
                      marginal_key(m);
    for (const auto& ex : extra)
        key += to_json(ex).dump();
    if (auto hit = cache_load(opt, key))
        return *hit;

    ConstraintSystem sys = ns_glued_system(s, node, values, extra);
    // per-coordinate non-negativity is implied by the per-block elemental rows

    CoordsPtr kept;
    if (m.kept.empty()) {
        kept = sys.coords;
    } else {
        std::set<NameSet> subsets;
        for (const auto& k : m.kept) {
            std::vector<std::string> v(k.begin(), k.end());
            for (unsigned long long mask = 1; mask < (1ull << v.size()); ++mask) {
                NameSet sub;
                for (size_t i = 0; i < v.size(); ++i)
                    if (mask & (1ull << i))
                        sub.insert(v[i]);
                subsets.insert(std::move(sub));
            }
        }
        kept = std::make_shared<CoordinateSystem>(
            std::vector<NameSet>(subsets.begin(), subsets.end()));
    }

    HCone out = project(sys, kept, opt);
    cache_store(opt, key, out);
    return out;
}

}  // namespace causent
