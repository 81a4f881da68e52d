// causent: exact entropy cones for causal structures.
//
// Exit codes: 0 success / vector inside; 1 certificate of incompatibility;
// 2 input error; 3 resource cap; 4 invalid flag combination.

#include "causent/json_io.hpp"
#include "causent/marginal.hpp"
#include "causent/oracle.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace causent;

namespace {

enum ExitCode { kOk = 0, kOutside = 1, kInputError = 2, kResourceCap = 3, kFlagError = 4 };

struct RunConfig {
    std::string model = "classical";
    std::string nonshannon = "none";
    bool purity = false;
    std::vector<std::string> selectors;  // NODE:N
    std::string marginal_file;
    std::string extra_file;
    std::string output = "json";
    std::string cache_dir;
    int dim_cap = 25;
    int fm_threshold = 2000;
    uint64_t seed = 0;
    bool verbose = false;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw error("cannot open '" + path + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::vector<std::pair<std::string, int>> parse_selectors(const RunConfig& cfg)
{
    std::vector<std::pair<std::string, int>> out;
    for (const auto& sel : cfg.selectors) {
        auto colon = sel.rfind(':');
        if (colon == std::string::npos)
            throw error("selector '" + sel + "' is not NODE:N");
        int n = std::stoi(sel.substr(colon + 1));
        out.push_back({sel.substr(0, colon), n});
    }
    return out;
}

// Marginal kept-sets file: one set per line, members comma-separated,
// '#' comments.
MarginalScenario parse_marginal(const std::string& path)
{
    MarginalScenario m;
    if (path.empty())
        return m;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        NameSet set;
        std::string cur;
        for (char ch : line + ",") {
            if (ch == ',') {
                if (!cur.empty())
                    set.insert(cur);
                cur.clear();
            } else if (!std::isspace(static_cast<unsigned char>(ch))) {
                cur += ch;
            }
        }
        if (!set.empty())
            m.kept.push_back(std::move(set));
    }
    return m;
}

PipelineOptions pipeline_options(const RunConfig& cfg)
{
    PipelineOptions opt;
    opt.fm_lp_threshold = cfg.fm_threshold;
    if (!cfg.cache_dir.empty())
        opt.cache_dir = cfg.cache_dir;
    else if (const char* env = std::getenv("CAUSENT_CACHE"); env && *env)
        opt.cache_dir = std::string(env);
    if (cfg.verbose)
        opt.log = [](const std::string& s) { std::cerr << s << "\n"; };
    return opt;
}

HCone build_cone(const CausalStructure& s, const RunConfig& cfg)
{
    MarginalScenario m = parse_marginal(cfg.marginal_file);
    PipelineOptions opt = pipeline_options(cfg);
    auto selectors = parse_selectors(cfg);

    NonShannon ns = NonShannon::none;
    if (cfg.nonshannon == "ingleton")
        ns = NonShannon::ingleton;
    else if (cfg.nonshannon == "zy")
        ns = NonShannon::zy;
    else if (cfg.nonshannon == "both")
        ns = NonShannon::both;
    else if (cfg.nonshannon != "none")
        throw error("unknown --nonshannon value '" + cfg.nonshannon + "'");

    if (cfg.model == "classical")
        return postselected_pipeline(s, selectors, m, Model::classical, ns, false, opt);
    if (cfg.model == "quantum")
        return postselected_pipeline(s, selectors, m, Model::quantum, ns, cfg.purity, opt);
    if (cfg.model == "ns") {
        if (selectors.size() != 1)
            throw CLI::ValidationError(
                "--model ns requires exactly one --postselect NODE:N selector");
        std::vector<ConstraintSystem> extras;
        if (!cfg.extra_file.empty())
            extras.push_back(constraint_system_from_json(load_json_file(cfg.extra_file)));
        return ns_pipeline(s, selectors[0].first, selectors[0].second, extras, m, opt);
    }
    throw CLI::ValidationError("unknown --model '" + cfg.model + "'");
}

// Display form of a row: recognizes scaled I(S:T|U), H(S|T) and H(S)
// patterns, otherwise prints the plain sum of H terms.
std::string render_row(const Row& r, const std::vector<std::string>& labels, bool equality)
{
    auto h_sum = [&]() {
        std::string out;
        bool first = true;
        for (size_t i = 0; i < r.size(); ++i) {
            if (r[i] == 0)
                continue;
            Rat c = r[i];
            if (first) {
                if (c < 0)
                    out += "-";
            } else {
                out += c < 0 ? " - " : " + ";
            }
            Rat a = abs(c);
            if (a != 1)
                out += rat_to_string(a) + " ";
            out += "H(" + labels[i] + ")";
            first = false;
        }
        return out;
    };

    std::map<std::string, int> index;
    for (size_t i = 0; i < labels.size(); ++i)
        index[labels[i]] = int(i);
    std::vector<int> support;
    for (size_t i = 0; i < r.size(); ++i)
        if (r[i] != 0)
            support.push_back(int(i));

    auto split = [&](int idx) {
        NameSet s;
        std::string cur;
        for (char ch : labels[idx] + ",") {
            if (ch == ',') {
                if (!cur.empty())
                    s.insert(cur);
                cur.clear();
            } else
                cur += ch;
        }
        return s;
    };
    auto name = [&](const NameSet& s) { return join_names(set_to_vector(s)); };
    auto matches = [&](const std::map<int, Rat>& pattern, Rat scale) {
        std::map<int, Rat> want;
        for (const auto& [i, c] : pattern) {
            Rat v = c * scale;
            if (v != 0)
                want[i] = v;
        }
        std::map<int, Rat> have;
        for (int i : support)
            have[i] = r[i];
        return want == have;
    };

    std::string tail = equality ? " = 0" : " >= 0";
    if (support.size() == 1 && r[support[0]] > 0)
        return (r[support[0]] == 1 ? "" : rat_to_string(r[support[0]]) + " ") +
               ("H(" + labels[support[0]] + ")") + tail;

    // H(S|T): +H(ST) - H(T)
    if (support.size() == 2)
        for (int a : support)
            for (int b : support) {
                if (a == b || r[a] <= 0 || r[a] != -r[b])
                    continue;
                NameSet A = split(a), B = split(b);
                if (std::includes(A.begin(), A.end(), B.begin(), B.end())) {
                    NameSet S;
                    for (const auto& x : A)
                        if (!B.count(x))
                            S.insert(x);
                    std::string coeff = r[a] == 1 ? "" : rat_to_string(r[a]) + " ";
                    return coeff + "H(" + name(S) + "|" + name(B) + ")" + tail;
                }
            }

    // I(S:T|U): +H(SU) +H(TU) -H(U) -H(STU); unconditional when U empty.
    if (support.size() == 3 || support.size() == 4)
        for (int a : support)
            for (int b : support) {
                if (a >= b || r[a] <= 0 || r[a] != r[b])
                    continue;
                NameSet A = split(a), B = split(b);
                NameSet U;
                for (const auto& x : A)
                    if (B.count(x))
                        U.insert(x);
                NameSet S, T, STU;
                for (const auto& x : A)
                    if (!U.count(x))
                        S.insert(x);
                for (const auto& x : B)
                    if (!U.count(x))
                        T.insert(x);
                if (S.empty() || T.empty())
                    continue;
                STU = A;
                STU.insert(B.begin(), B.end());
                std::map<int, Rat> pattern;
                pattern[a] += 1;
                pattern[b] += 1;
                int stu = index.count(name(STU)) ? index[name(STU)] : -1;
                if (stu < 0)
                    continue;
                pattern[stu] -= 1;
                if (!U.empty()) {
                    int u = index.count(name(U)) ? index[name(U)] : -1;
                    if (u < 0)
                        continue;
                    pattern[u] -= 1;
                }
                if (matches(pattern, r[a])) {
                    std::string coeff = r[a] == 1 ? "" : rat_to_string(r[a]) + " ";
                    std::string cond = U.empty() ? "" : "|" + name(U);
                    return coeff + "I(" + name(S) + ":" + name(T) + cond + ")" + tail;
                }
            }

    return h_sum() + tail;
}

void print_cone(const HCone& c, const RunConfig& cfg)
{
    if (cfg.output == "json") {
        std::cout << to_json(c).dump(1) << "\n";
    } else if (cfg.output == "csv") {
        std::cout << "sense," << join_names(c.coords) << "\n";
        for (const auto& r : c.eqs) {
            std::cout << "eq";
            for (const auto& q : r)
                std::cout << "," << q;
            std::cout << "\n";
        }
        for (const auto& r : c.ineqs) {
            std::cout << "geq";
            for (const auto& q : r)
                std::cout << "," << q;
            std::cout << "\n";
        }
    } else if (cfg.output == "text") {
        for (const auto& r : c.eqs)
            std::cout << render_row(r, c.coords, true) << "\n";
        for (const auto& r : c.ineqs)
            std::cout << render_row(r, c.coords, false) << "\n";
    } else {
        throw CLI::ValidationError("unknown --output '" + cfg.output + "'");
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"exact entropy cones for causal structures"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string dag_file, input_file;
    double tolerance = 1e-9;
    int count = 10, alphabet = 2;
    bool with_entropies = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--model", cfg.model, "classical|quantum|ns");
        cmd->add_option("--nonshannon", cfg.nonshannon, "none|ingleton|zy|both");
        cmd->add_flag("--purity", cfg.purity, "enable purity/Stinespring equalities");
        cmd->add_option("--postselect", cfg.selectors, "post-select NODE:N (repeatable)");
        cmd->add_option("--marginal", cfg.marginal_file, "kept-sets file");
        cmd->add_option("--extra", cfg.extra_file, "extra constraint-system JSON (ns model)");
        cmd->add_option("--output", cfg.output, "json|csv|text");
        cmd->add_option("--cache", cfg.cache_dir, "cache directory (or $CAUSENT_CACHE)");
        cmd->add_option("--dim-cap", cfg.dim_cap, "ray enumeration dimension cap");
        cmd->add_option("--fm-threshold", cfg.fm_threshold, "FM LP redundancy threshold");
        cmd->add_option("--seed", cfg.seed, "sampling seed");
        cmd->add_flag("--verbose", cfg.verbose, "progress to stderr");
    };

    auto* cmd_parse = app.add_subcommand("parse", "validate a DSL file, echo canonical form");
    cmd_parse->add_option("dag", dag_file)->required();

    auto* cmd_cone = app.add_subcommand("cone", "marginal H-representation");
    cmd_cone->add_option("dag", dag_file)->required();
    add_common(cmd_cone);

    auto* cmd_rays = app.add_subcommand("rays", "extremal rays of the marginal cone");
    cmd_rays->add_option("dag", dag_file)->required();
    add_common(cmd_rays);

    auto* cmd_postselect = app.add_subcommand("postselect", "emit the transformed DSL");
    cmd_postselect->add_option("dag", dag_file)->required();
    add_common(cmd_postselect);

    auto* cmd_check = app.add_subcommand("check", "test a vector or distribution");
    cmd_check->add_option("dag", dag_file)->required();
    cmd_check->add_option("input", input_file, "vector or distribution JSON")->required();
    cmd_check->add_option("--tolerance", tolerance, "membership tolerance");
    add_common(cmd_check);

    auto* cmd_sample = app.add_subcommand("sample", "sample compatible distributions");
    cmd_sample->add_option("dag", dag_file)->required();
    cmd_sample->add_option("--count", count);
    cmd_sample->add_option("--alphabet", alphabet);
    cmd_sample->add_flag("--entropies", with_entropies, "include observed entropy vectors");
    add_common(cmd_sample);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kFlagError;
    }

    try {
        if (cmd_parse->parsed()) {
            std::cout << parse_structure(read_file(dag_file)).to_dsl();
            return kOk;
        }
        CausalStructure s = parse_structure(read_file(dag_file));

        if (cmd_postselect->parsed()) {
            for (const auto& [node, n] : parse_selectors(cfg))
                s = s.post_select(node, n);
            std::cout << s.to_dsl();
            return kOk;
        }
        if (cmd_cone->parsed()) {
            print_cone(build_cone(s, cfg), cfg);
            return kOk;
        }
        if (cmd_rays->parsed()) {
            HCone cone = build_cone(s, cfg);
            RaySet rays = extreme_rays(cone, cfg.dim_cap);
            if (cfg.output == "text") {
                for (const auto& r : rays.rays)
                    std::cout << "ray " << join_names([&] {
                        std::vector<std::string> xs;
                        for (const auto& q : r)
                            xs.push_back(rat_to_string(q));
                        return xs;
                    }(), " ") << "\n";
            } else {
                std::cout << to_json(rays).dump(1) << "\n";
            }
            return kOk;
        }
        if (cmd_check->parsed()) {
            HCone cone = build_cone(s, cfg);
            Json in = load_json_file(input_file);
            EntropyVector ev;
            if (in.contains("pmf")) {
                ev = marginal_entropy_vector(distribution_from_json(in), cone);
            } else {
                NamedVector nv = vector_from_json(in);
                std::map<std::string, Rat> by_label;
                for (size_t i = 0; i < nv.coords.size(); ++i)
                    by_label[nv.coords[i]] = nv.values[i];
                ev.values.resize(cone.dim());
                ev.exact.resize(cone.dim());
                for (int i = 0; i < cone.dim(); ++i) {
                    auto it = by_label.find(cone.coords[i]);
                    if (it == by_label.end())
                        throw error("vector file lacks coordinate '" + cone.coords[i] + "'");
                    ev.values[i] = it->second.get_d();
                    ev.exact[i] = it->second;
                }
            }
            auto value = [&](const Row& r) {
                double v = 0;
                for (int i = 0; i < cone.dim(); ++i)
                    v += r[i].get_d() * ev.values[i];
                return v;
            };
            bool inside = true;
            Json report = Json::array();
            auto judge = [&](const Row& r, bool eq) {
                double v = value(r);
                bool ok = eq ? std::abs(v) <= tolerance : v >= -tolerance;
                inside = inside && ok;
                Json entry;
                entry["row"] = render_row(r, cone.coords, eq);
                entry["value"] = v;
                entry["ok"] = ok;
                report.push_back(entry);
                if (cfg.output == "text" && !ok)
                    std::cout << "violated: " << render_row(r, cone.coords, eq)
                              << "  (value " << v << ")\n";
            };
            for (const auto& r : cone.eqs)
                judge(r, true);
            for (const auto& r : cone.ineqs)
                judge(r, false);
            if (cfg.output == "text")
                std::cout << (inside ? "inside" : "outside") << "\n";
            else {
                Json out;
                out["verdict"] = inside ? "inside" : "outside";
                out["rows"] = report;
                std::cout << out.dump(1) << "\n";
            }
            return inside ? kOk : kOutside;
        }
        if (cmd_sample->parsed()) {
            Json out = Json::array();
            auto obs = s.observed_names();
            for (int k = 0; k < count; ++k) {
                JointDistribution p = sample_compatible_one(s, alphabet, cfg.seed, uint64_t(k));
                Json entry;
                entry["distribution"] = to_json(p);
                if (with_entropies) {
                    auto coords = std::make_shared<CoordinateSystem>(
                        CoordinateSystem::power_set(obs));
                    EntropyVector ev =
                        entropy_vector(marginalize(p, NameSet(obs.begin(), obs.end())), coords);
                    Json vals = Json::array();
                    Json labels = Json::array();
                    for (int i = 0; i < coords->size(); ++i) {
                        labels.push_back(coords->label(i));
                        vals.push_back(ev.values[i]);
                    }
                    entry["coordinates"] = labels;
                    entry["entropies"] = vals;
                }
                out.push_back(entry);
            }
            std::cout << out.dump(1) << "\n";
            return kOk;
        }
        return kFlagError;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFlagError;
    } catch (const cap_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kResourceCap;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
}
