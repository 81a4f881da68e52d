#include "causent/polyhedron.hpp"

#include "causent/causal_graph.hpp"
#include "causent/constraint_gen.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <random>

using namespace causent;

namespace {

CoordsPtr power(const std::vector<std::string>& vars)
{
    return std::make_shared<CoordinateSystem>(CoordinateSystem::power_set(vars));
}

HCone shannon_cone(const std::vector<std::string>& vars)
{
    return shannon_matrix(power(vars)).cone();
}

// Seeded random cone with small integer rows.
HCone random_cone(std::mt19937_64& rng, int max_dim = 8)
{
    int dim = 3 + int(rng() % (max_dim - 2));
    HCone c;
    for (int i = 0; i < dim; ++i)
        c.coords.push_back("x" + std::to_string(i));
    int rows = 4 + int(rng() % 9);
    for (int r = 0; r < rows; ++r) {
        Row row(dim);
        bool nonzero = false;
        for (int i = 0; i < dim; ++i) {
            row[i] = int(rng() % 7) - 3;
            nonzero = nonzero || row[i] != 0;
        }
        if (!nonzero)
            continue;
        if (rng() % 5 == 0)
            c.eqs.push_back(row);
        else
            c.ineqs.push_back(row);
    }
    return c;
}

}  // namespace

TEST_CASE("FM on the instrumental scenario reproduces the one extra row")
{
    CausalStructure ic = parse_structure(fixtures::kIC);
    auto cs = power(ic.node_names());
    ConstraintSystem sys = shannon_matrix(cs);
    sys.append(ci_matrix(ic, cs));
    HCone cone = sys.cone();
    NameSet drop;
    for (const auto& label : cone.coords)
        if (label.find('A') != std::string::npos)
            drop.insert(label);
    HCone marg = fm_eliminate(cone, drop);

    HCone expected = shannon_cone({"X", "Y", "Z"});
    expected.coords = marg.coords;
    expected.ineqs.push_back(Row{-1, 0, 1, 0, 0, -1, 1});  // I(X:YZ) <= H(Z)
    CHECK(equals(marg, expected));
    // exactly one row beyond Shannon(3)
    HCone shannon3 = shannon_cone({"X", "Y", "Z"});
    int extra = 0;
    for (const auto& r : marg.ineqs)
        if (!implies(shannon3, r, Sense::geq))
            ++extra;
    CHECK(extra == 1);
}

TEST_CASE("FM with nothing to drop is an LP-equivalent cone")
{
    HCone c = shannon_cone({"X", "Y", "Z"});
    HCone out = fm_eliminate(c, {});
    CHECK(equals(out, c));
}

TEST_CASE("projecting an unconstrained Shannon cone drops to the smaller Shannon cone")
{
    HCone c = shannon_cone({"W", "X", "Y", "Z"});
    NameSet drop;
    for (const auto& label : c.coords)
        if (label.find('W') != std::string::npos)
            drop.insert(label);
    HCone out = fm_eliminate(c, drop);
    HCone expected = shannon_cone({"X", "Y", "Z"});
    expected.coords = out.coords;
    CHECK(equals(out, expected));
}

TEST_CASE("redundancy removal")
{
    HCone c = shannon_cone({"X", "Y", "Z"});
    c.ineqs.push_back(c.ineqs[0]);
    CHECK(remove_redundant(c).ineqs.size() == 9);

    HCone d;
    d.coords = {"x"};
    d.ineqs = {Row{1}, Row{2}};
    CHECK(remove_redundant(d).ineqs.size() == 1);
}

TEST_CASE("implication verdicts")
{
    HCone shannon4 = shannon_cone({"T", "U", "V", "W"});
    auto cs = power({"T", "U", "V", "W"});
    ConstraintSystem zy = zhang_yeung_rows(cs);
    CHECK_FALSE(implies(shannon4, zy.ineqs[0], Sense::geq));

    Row zero(shannon4.dim(), Rat(0));
    CHECK(implies(shannon4, zero, Sense::geq));
    CHECK(implies(shannon4, zero, Sense::eq));

    // every Zhang-Yeung row is however consistent: it holds on the Ingleton cone
    HCone ingleton = shannon4;
    for (const auto& r : ingleton_rows(cs).ineqs)
        ingleton.ineqs.push_back(r);
    for (const auto& r : zy.ineqs)
        CHECK(implies(ingleton, r, Sense::geq));
}

TEST_CASE("cone equality")
{
    HCone a = shannon_cone({"X", "Y", "Z"});
    HCone b = a;
    std::rotate(b.ineqs.begin(), b.ineqs.begin() + 4, b.ineqs.end());
    CHECK(equals(a, b));

    HCone zy = shannon_cone({"T", "U", "V", "W"});
    HCone plus = zy;
    for (const auto& r : zhang_yeung_rows(power({"T", "U", "V", "W"})).ineqs)
        plus.ineqs.push_back(r);
    CHECK_FALSE(equals(zy, plus));

    HCone other = a;
    other.coords[0] = "Q";
    CHECK_THROWS_AS(equals(a, other), error);
}

TEST_CASE("membership")
{
    HCone shannon4 = shannon_cone({"T", "U", "V", "W"});
    // Matus entropy vector
    double h = -0.25 * std::log2(0.25) - 0.75 * std::log2(0.75);
    std::vector<double> v{h, h, 1, 1, 1.5, 1.5, 1.5, 1.5, 1.5, 2, 2, 2, 2, 2, 2};
    CHECK(contains(shannon4, v, 1e-9));
    HCone with_ingleton = shannon4;
    for (const auto& r : ingleton_rows(power({"T", "U", "V", "W"})).ineqs)
        with_ingleton.ineqs.push_back(r);
    CHECK_FALSE(contains(with_ingleton, v, 1e-9));

    std::vector<double> zero(15, 0.0);
    CHECK(contains(with_ingleton, zero, 0.0));

    Row exact{1, 1, 1};
    HCone pair = shannon_cone({"X", "Y"});
    CHECK(contains_exact(pair, exact));
}

TEST_CASE("extreme rays of the quadrant")
{
    HCone c;
    c.coords = {"x", "y"};
    c.ineqs = {Row{1, 0}, Row{0, 1}};
    RaySet r = extreme_rays(c);
    REQUIRE(r.rays.size() == 2);
    CHECK(r.rays[0] == Row{0, 1});
    CHECK(r.rays[1] == Row{1, 0});
    CHECK(r.lineality.empty());
}

TEST_CASE("dimension cap refusal")
{
    HCone c;
    for (int i = 0; i < 30; ++i)
        c.coords.push_back("x" + std::to_string(i));
    Row row(30, Rat(0));
    row[0] = 1;
    c.ineqs.push_back(row);
    CHECK_THROWS_AS(extreme_rays(c), cap_error);
    CHECK_NOTHROW(extreme_rays(c, 30));
}

TEST_CASE("single-ray H-representation")
{
    RaySet r;
    r.coords = {"x", "y"};
    r.rays = {Row{1, 1}};
    HCone h = from_rays(r);
    HCone expected;
    expected.coords = {"x", "y"};
    expected.eqs = {Row{1, -1}};
    expected.ineqs = {Row{1, 0}};
    CHECK(equals(h, expected));
}

TEST_CASE("ray/facet round trips on random cones")
{
    std::mt19937_64 rng(2024);
    int done = 0;
    while (done < 40) {
        HCone c = random_cone(rng);
        ++done;
        RaySet rays = extreme_rays(c, 10);
        HCone back = from_rays(rays);
        CHECK(equals(back, c));
        std::set<std::string> keys;
        for (Row r : rays.rays) {
            normalize_row(r);
            for (const auto& q : r)
                CHECK(q.get_den() == 1);
            CHECK(keys.insert(row_key(r)).second);  // no duplicate rays
        }
    }
}

TEST_CASE("FM composition and projection soundness on random cones")
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        HCone c = random_cone(rng);
        int dim = c.dim();
        NameSet s, t;
        for (int i = 0; i < dim; ++i) {
            int pick = int(rng() % 3);
            if (pick == 0 && int(s.size() + t.size()) < dim - 2)
                s.insert(c.coords[i]);
            else if (pick == 1 && int(s.size() + t.size()) < dim - 2)
                t.insert(c.coords[i]);
        }
        NameSet both = s;
        both.insert(t.begin(), t.end());
        HCone once = fm_eliminate(c, both);
        HCone twice = fm_eliminate(fm_eliminate(c, s), t);
        CHECK(equals(once, twice));

        // sampled rays of the original cone satisfy the projection
        RaySet rays = extreme_rays(c, 10);
        std::vector<int> kept;
        for (int i = 0; i < dim; ++i)
            if (!both.count(c.coords[i]))
                kept.push_back(i);
        for (const auto& r : rays.rays) {
            Row proj(kept.size());
            for (size_t k = 0; k < kept.size(); ++k)
                proj[k] = r[kept[k]];
            CHECK(contains_exact(once, proj));
        }
    }
}

TEST_CASE("hull projection agrees with FM")
{
    CausalStructure ic = parse_structure(fixtures::kIC);
    auto cs = power(ic.node_names());
    ConstraintSystem sys = shannon_matrix(cs);
    sys.append(ci_matrix(ic, cs));
    HCone cone = sys.cone();
    NameSet drop;
    for (const auto& label : cone.coords)
        if (label.find('A') != std::string::npos)
            drop.insert(label);
    HCone via_fm = fm_eliminate(cone, drop);
    HCone via_hull = project_via_hull(cone, drop);
    CHECK(equals(via_fm, via_hull));

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 15; ++trial) {
        HCone c = random_cone(rng, 6);
        NameSet d{c.coords[0], c.coords[1]};
        CHECK(equals(fm_eliminate(c, d), project_via_hull(c, d)));
    }
}

TEST_CASE("normalized outputs have integer coefficients")
{
    CausalStructure ic = parse_structure(fixtures::kIC);
    auto cs = power(ic.node_names());
    ConstraintSystem sys = shannon_matrix(cs);
    sys.append(ci_matrix(ic, cs));
    for (const auto& r : sys.ineqs)
        for (const auto& q : r)
            CHECK(q.get_den() == 1);
    HCone cone = sys.cone();
    NameSet drop;
    for (const auto& label : cone.coords)
        if (label.find('A') != std::string::npos)
            drop.insert(label);
    HCone marg = fm_eliminate(cone, drop);
    for (const auto& r : marg.ineqs) {
        Row n = r;
        normalize_row(n);
        for (const auto& q : n)
            CHECK(q.get_den() == 1);
    }
}
