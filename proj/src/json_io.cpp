#include "causent/json_io.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <sstream>

namespace causent {

namespace {

Json row_to_json(const Row& r)
{
    Json a = Json::array();
    for (const auto& q : r) {
        if (q.get_den() != 1)
            throw error("row not integer-normalized");
        a.push_back(q.get_num().get_str());
    }
    return a;
}

Row row_from_json(const Json& a)
{
    Row r;
    for (const auto& x : a) {
        if (x.is_string())
            r.push_back(rat_from_string(x.get<std::string>()));
        else if (x.is_number_integer())
            r.push_back(Rat(long(x.get<long long>())));
        else
            throw error("row entries must be integers or rational strings");
    }
    return r;
}

std::vector<std::string> labels_from_json(const Json& j)
{
    std::vector<std::string> out;
    for (const auto& x : j)
        out.push_back(x.get<std::string>());
    return out;
}

NameSet split_label(const std::string& label)
{
    NameSet s;
    std::string cur;
    for (char ch : label) {
        if (ch == ',') {
            if (!cur.empty())
                s.insert(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty())
        s.insert(cur);
    return s;
}

}  // namespace

Json to_json(const ConstraintSystem& cs)
{
    Json j;
    Json coords = Json::array();
    for (int i = 0; i < cs.coords->size(); ++i)
        coords.push_back(cs.coords->label(i));
    j["coordinates"] = coords;
    Json eqs = Json::array(), ineqs = Json::array(), prov = Json::array();
    for (size_t i = 0; i < cs.eqs.size(); ++i) {
        eqs.push_back(row_to_json(cs.eqs[i]));
        prov.push_back(tag_name(cs.eq_tags[i]));
    }
    for (size_t i = 0; i < cs.ineqs.size(); ++i) {
        ineqs.push_back(row_to_json(cs.ineqs[i]));
        prov.push_back(tag_name(cs.ineq_tags[i]));
    }
    j["equalities"] = eqs;
    j["inequalities"] = ineqs;
    j["provenance"] = prov;
    return j;
}

Json to_json(const HCone& c)
{
    Json j;
    j["coordinates"] = c.coords;
    Json eqs = Json::array(), ineqs = Json::array();
    for (const auto& r : c.eqs) {
        Row n = r;
        normalize_row(n, true);
        eqs.push_back(row_to_json(n));
    }
    for (const auto& r : c.ineqs) {
        Row n = r;
        normalize_row(n);
        ineqs.push_back(row_to_json(n));
    }
    j["equalities"] = eqs;
    j["inequalities"] = ineqs;
    return j;
}

HCone hcone_from_json(const Json& j)
{
    HCone c;
    c.coords = labels_from_json(j.at("coordinates"));
    for (const auto& r : j.at("equalities"))
        c.eqs.push_back(row_from_json(r));
    for (const auto& r : j.at("inequalities"))
        c.ineqs.push_back(row_from_json(r));
    c.validate();
    return c;
}

ConstraintSystem constraint_system_from_json(const Json& j)
{
    std::vector<NameSet> subsets;
    for (const auto& label : j.at("coordinates"))
        subsets.push_back(split_label(label.get<std::string>()));
    ConstraintSystem cs;
    cs.coords = std::make_shared<CoordinateSystem>(subsets);

    // Coordinates may arrive in any order; remap rows onto canonical order.
    std::vector<int> remap;
    for (const auto& label : j.at("coordinates"))
        remap.push_back(cs.coords->require(split_label(label.get<std::string>())));

    std::vector<std::string> prov;
    if (j.contains("provenance"))
        for (const auto& p : j.at("provenance"))
            prov.push_back(p.get<std::string>());
    size_t pi = 0;
    auto tag = [&]() {
        return pi < prov.size() ? tag_from_name(prov[pi++]) : RowTag::user;
    };
    auto remap_row = [&](const Row& r) {
        Row m(cs.coords->size(), Rat(0));
        for (size_t i = 0; i < r.size(); ++i)
            m[remap[i]] = r[i];
        return m;
    };
    for (const auto& r : j.at("equalities"))
        cs.add_eq(remap_row(row_from_json(r)), tag());
    for (const auto& r : j.at("inequalities"))
        cs.add_ineq(remap_row(row_from_json(r)), tag());
    return cs;
}

Json to_json(const RaySet& r)
{
    Json j;
    j["coordinates"] = r.coords;
    Json rays = Json::array(), lin = Json::array();
    for (const auto& v : r.rays)
        rays.push_back(row_to_json(v));
    for (const auto& v : r.lineality)
        lin.push_back(row_to_json(v));
    j["rays"] = rays;
    j["lineality"] = lin;
    return j;
}

RaySet rayset_from_json(const Json& j)
{
    RaySet r;
    if (j.contains("coordinates"))
        r.coords = labels_from_json(j.at("coordinates"));
    for (const auto& v : j.at("rays"))
        r.rays.push_back(row_from_json(v));
    for (const auto& v : j.at("lineality"))
        r.lineality.push_back(row_from_json(v));
    return r;
}

Json to_json(const JointDistribution& p)
{
    Json j;
    Json vars = Json::array();
    for (size_t i = 0; i < p.vars.size(); ++i) {
        Json v;
        v["name"] = p.vars[i];
        v["alphabet"] = p.alphabets[i];
        vars.push_back(v);
    }
    j["variables"] = vars;
    Json pmf = Json::array();
    std::vector<int> outcome(p.vars.size(), 0);
    for (size_t flat = 0; flat < p.pmf.size(); ++flat) {
        size_t rest = flat;
        for (size_t i = p.vars.size(); i-- > 0;) {
            outcome[i] = int(rest % p.alphabets[i].size());
            rest /= p.alphabets[i].size();
        }
        if (p.pmf[flat] == 0)
            continue;
        Json entry;
        Json o;
        for (size_t i = 0; i < p.vars.size(); ++i)
            o[p.vars[i]] = p.alphabets[i][outcome[i]];
        entry["outcome"] = o;
        entry["p"] = rat_to_string(p.pmf[flat]);
        pmf.push_back(entry);
    }
    j["pmf"] = pmf;
    return j;
}

JointDistribution distribution_from_json(const Json& j)
{
    JointDistribution p;
    std::vector<std::pair<std::string, std::vector<std::string>>> vars;
    for (const auto& v : j.at("variables"))
        vars.push_back({v.at("name").get<std::string>(),
                        labels_from_json(v.at("alphabet"))});
    std::sort(vars.begin(), vars.end());
    for (auto& [name, alpha] : vars) {
        p.vars.push_back(name);
        p.alphabets.push_back(alpha);
    }
    p.pmf.assign(p.outcome_count(), Rat(0));
    for (const auto& entry : j.at("pmf")) {
        size_t idx = 0;
        for (size_t i = 0; i < p.vars.size(); ++i) {
            std::string sym = entry.at("outcome").at(p.vars[i]).get<std::string>();
            auto it = std::find(p.alphabets[i].begin(), p.alphabets[i].end(), sym);
            if (it == p.alphabets[i].end())
                throw error("outcome symbol '" + sym + "' not in alphabet of " + p.vars[i]);
            idx = idx * p.alphabets[i].size() + size_t(it - p.alphabets[i].begin());
        }
        const auto& pv = entry.at("p");
        p.pmf[idx] = pv.is_string() ? rat_from_string(pv.get<std::string>())
                                    : Rat(pv.get<double>());
    }
    p.validate();
    return p;
}

NamedVector vector_from_json(const Json& j)
{
    NamedVector v;
    v.coords = labels_from_json(j.at("coordinates"));
    for (const auto& x : j.at("values")) {
        if (x.is_string())
            v.values.push_back(rat_from_string(x.get<std::string>()));
        else
            v.values.push_back(Rat(x.get<double>()));
    }
    if (v.coords.size() != v.values.size())
        throw error("vector file: coordinates/values length mismatch");
    return v;
}

std::string sha256_hex(const std::string& data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

Json load_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw error("cannot open '" + path + "'");
    Json j;
    in >> j;
    return j;
}

void write_json_file(const std::string& path, const Json& j)
{
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out)
            throw error("cannot write '" + tmp + "'");
        out << j.dump(1) << "\n";
    }
    std::rename(tmp.c_str(), path.c_str());
}

}  // namespace causent
