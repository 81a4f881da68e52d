#include "causent/causal_graph.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <random>

using namespace causent;

TEST_CASE("parse instrumental scenario")
{
    CausalStructure ic = parse_structure(fixtures::kIC);
    CHECK(ic.name == "IC");
    CHECK(ic.node_count() == 4);
    CHECK(ic.node(ic.index("A")).role == Role::unobserved);
    CHECK(ic.node(ic.index("X")).role == Role::observed);
    CHECK(ic.edges().size() == 4);
    CHECK(ic.has_edge(ic.index("A"), ic.index("Z")));
    // subsystem labels are generated for unobserved-source edges
    REQUIRE(ic.subsystems().size() == 2);
    CHECK(ic.subsystems()[0].label == "A_Y");
    CHECK(ic.subsystems()[1].label == "A_Z");
}

TEST_CASE("parse trivial structure")
{
    CausalStructure s = parse_structure("structure One { node X observed }");
    CHECK(s.node_count() == 1);
    CHECK(s.edges().empty());
}

TEST_CASE("parse errors")
{
    CHECK_THROWS_WITH_AS(parse_structure("structure Bad { node X observed node X observed }"),
                         doctest::Contains("duplicate node"), error);
    CHECK_THROWS_WITH_AS(parse_structure("structure Bad { node X observed edge X -> Y }"),
                         doctest::Contains("names no node"), error);
    // a cycle through Y -> A closing A -> ... -> Y
    CHECK_THROWS_WITH_AS(parse_structure(R"(structure Bad {
        node A observed
        node Z observed
        node Y observed
        edge A -> Z
        edge Z -> Y
        edge Y -> A
    })"),
                         doctest::Contains("cycle"), error);
    CHECK_THROWS_WITH_AS(parse_structure("structure Bad { node X observed ;"),
                         doctest::Contains("line 1"), error);
    CHECK_THROWS_WITH_AS(parse_structure("structure Bad { node X sideways }"),
                         doctest::Contains("role"), error);
}

TEST_CASE("relations on the instrumental scenario")
{
    CausalStructure ic = parse_structure(fixtures::kIC);
    auto rel = ic.relations({"Z"});
    CHECK(rel.parents == NameSet{"A", "X"});
    CHECK(rel.descendants == NameSet{"Y"});
    CHECK(rel.non_descendants == NameSet{"A", "X"});
    CHECK(rel.ancestors == NameSet{"A", "X"});

    auto rel_a = ic.relations({"A"});
    CHECK(rel_a.parents.empty());
    CHECK(rel_a.descendants == NameSet{"Y", "Z"});

    CHECK_THROWS_AS(ic.relations({"Q"}), error);
}

TEST_CASE("relations on the triangle")
{
    CausalStructure tri = parse_structure(fixtures::kTriangle);
    auto rel = tri.relations({"X"});
    CHECK(rel.parents == NameSet{"B", "C"});
    CHECK(rel.non_descendants == NameSet{"A", "B", "C", "Y", "Z"});
}

TEST_CASE("d-separation on the instrumental scenario")
{
    CausalStructure ic = parse_structure(fixtures::kIC);
    CHECK(ic.is_d_separated({"X"}, {"A"}, {}));
    CHECK(ic.is_d_separated({"X"}, {"Y"}, {"A", "Z"}));
    CHECK_FALSE(ic.is_d_separated({"X"}, {"Y"}, {}));
    CHECK_THROWS_AS(ic.is_d_separated({"X"}, {"X"}, {}), error);
}

TEST_CASE("collider activation including descendants")
{
    CausalStructure s("collider",
                      {{"X", Role::observed},
                       {"Y", Role::observed},
                       {"K", Role::observed},
                       {"D", Role::observed}},
                      {{"X", "K"}, {"Y", "K"}, {"K", "D"}});
    CHECK(s.is_d_separated({"X"}, {"Y"}, {}));
    CHECK_FALSE(s.is_d_separated({"X"}, {"Y"}, {"K"}));
    CHECK_FALSE(s.is_d_separated({"X"}, {"Y"}, {"D"}));  // descendant of a collider
}

TEST_CASE("d-separation is symmetric on random DAGs")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 3 + int(rng() % 4);
        std::vector<std::pair<std::string, Role>> nodes;
        for (int i = 0; i < n; ++i)
            nodes.push_back({"N" + std::to_string(i), Role::observed});
        std::vector<std::pair<std::string, std::string>> edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng() % 3 == 0)
                    edges.push_back({"N" + std::to_string(i), "N" + std::to_string(j)});
        CausalStructure s("R", nodes, edges);

        NameSet x, y, z;
        for (int i = 0; i < n; ++i) {
            switch (rng() % 4) {
            case 0: x.insert("N" + std::to_string(i)); break;
            case 1: y.insert("N" + std::to_string(i)); break;
            case 2: z.insert("N" + std::to_string(i)); break;
            }
        }
        if (x.empty() || y.empty())
            continue;
        CHECK(s.is_d_separated(x, y, z) == s.is_d_separated(y, x, z));
    }
}

TEST_CASE("local Markov statements")
{
    CausalStructure ic = parse_structure(fixtures::kIC);
    auto statements = local_markov(ic);
    REQUIRE(statements.size() == 3);  // A, X, Y; Z has no non-parent non-descendants
    CHECK(statements[0].left == NameSet{"A"});
    CHECK(statements[0].right == NameSet{"X"});
    CHECK(statements[0].given.empty());
    CHECK(statements[1].left == NameSet{"X"});
    CHECK(statements[1].right == NameSet{"A"});
    CHECK(statements[2].left == NameSet{"Y"});
    CHECK(statements[2].right == NameSet{"X"});
    CHECK(statements[2].given == NameSet{"A", "Z"});

    auto chain = local_markov(parse_structure(fixtures::kChain));
    REQUIRE(chain.size() == 1);
    CHECK(chain[0].left == NameSet{"Y"});
    CHECK(chain[0].right == NameSet{"X"});
    CHECK(chain[0].given == NameSet{"Z"});

    CausalStructure full("Full",
                         {{"A", Role::observed}, {"B", Role::observed}, {"C", Role::observed}},
                         {{"A", "B"}, {"A", "C"}, {"B", "C"}});
    CHECK(local_markov(full).empty());
}

TEST_CASE("local Markov statements are d-separations")
{
    for (const char* text : {fixtures::kIC, fixtures::kBell, fixtures::kTriangle,
                             fixtures::kFig3a, fixtures::kInfoCausality}) {
        CausalStructure s = parse_structure(text);
        for (const auto& st : local_markov(s))
            CHECK(s.is_d_separated(st.left, st.right, st.given));
    }
}

TEST_CASE("post-selection of the instrumental scenario")
{
    CausalStructure ic = parse_structure(fixtures::kIC);
    CausalStructure ps = ic.post_select("X", 2);
    CHECK(ps.node_count() == 5);  // 2*|desc| + |nondesc|
    for (const char* name : {"A", "Z|X=0", "Z|X=1", "Y|X=0", "Y|X=1"})
        CHECK(ps.find(name).has_value());
    // A feeds all four copies; copies only link within their branch
    for (const char* copy : {"Z|X=0", "Z|X=1", "Y|X=0", "Y|X=1"})
        CHECK(ps.has_edge(ps.index("A"), ps.index(copy)));
    CHECK(ps.has_edge(ps.index("Z|X=0"), ps.index("Y|X=0")));
    CHECK(ps.has_edge(ps.index("Z|X=1"), ps.index("Y|X=1")));
    CHECK_FALSE(ps.has_edge(ps.index("Z|X=0"), ps.index("Y|X=1")));
    CHECK(ps.edges().size() == 6);
}

TEST_CASE("post-selection of the Bell scenario, applied twice")
{
    CausalStructure bell = parse_structure(fixtures::kBell);
    CausalStructure ps = bell.post_select("A", 2).post_select("B", 2);
    CHECK(ps.node_count() == 5);
    for (const char* copy : {"X|A=0", "X|A=1", "Y|B=0", "Y|B=1"})
        CHECK(ps.has_edge(ps.index("C"), ps.index(copy)));
    CHECK(ps.edges().size() == 4);
}

TEST_CASE("post-selection of Fig. 3(a)")
{
    CausalStructure s = parse_structure(fixtures::kFig3a);
    CausalStructure ps = s.post_select("C", 2);
    CHECK(ps.node_count() == 7);
    for (const char* c : {"Y|C=0", "Y|C=1", "Z"})
        CHECK(ps.has_edge(ps.index("A"), ps.index(c)));
    for (const char* c : {"X|C=0", "X|C=1", "Z"})
        CHECK(ps.has_edge(ps.index("B"), ps.index(c)));
    CHECK(ps.edges().size() == 6);
}

TEST_CASE("post-selection node-count identity on random structures")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 3 + int(rng() % 4);
        std::vector<std::pair<std::string, Role>> nodes{{"S", Role::observed}};
        for (int i = 1; i < n; ++i)
            nodes.push_back({"N" + std::to_string(i), Role::observed});
        std::vector<std::pair<std::string, std::string>> edges;
        for (int i = 0; i < n; ++i)
            for (int j = std::max(i + 1, 1); j < n; ++j)
                if (rng() % 3 == 0)
                    edges.push_back({nodes[i].first, nodes[j].first});
        CausalStructure s("R", nodes, edges);
        int values = 2 + int(rng() % 3);
        auto rel = s.relations({"S"});
        CausalStructure ps = s.post_select("S", values);
        CHECK(ps.node_count() ==
              values * int(rel.descendants.size()) + int(rel.non_descendants.size()));
        CHECK_NOTHROW(ps.topological_order());
    }
}

TEST_CASE("post-selection errors")
{
    CausalStructure ic = parse_structure(fixtures::kIC);
    CHECK_THROWS_AS(ic.post_select("Z", 2), error);  // has parents
    CHECK_THROWS_AS(ic.post_select("A", 2), error);  // unobserved
    CHECK_THROWS_AS(ic.post_select("X", 1), error);
}

TEST_CASE("coexisting sets of the quantum instrumental scenario")
{
    CausalStructure ic = parse_structure(fixtures::kIC);
    ElementTable et(ic);
    CHECK(et.elements() == std::vector<std::string>{"A_Y", "A_Z", "X", "Y", "Z"});
    auto maximal = et.maximal_coexisting_sets();
    REQUIRE(maximal.size() == 3);
    CHECK(maximal[0] == NameSet{"A_Y", "A_Z", "X"});
    CHECK(maximal[1] == NameSet{"A_Y", "X", "Z"});
    CHECK(maximal[2] == NameSet{"X", "Y", "Z"});
    CHECK(et.coexisting_sets().size() == 15);
}

TEST_CASE("coexisting sets without unobserved nodes")
{
    CausalStructure s("Obs",
                      {{"X", Role::observed}, {"Y", Role::observed}, {"Z", Role::observed}},
                      {{"X", "Y"}});
    ElementTable et(s);
    CHECK(et.coexisting_sets().size() == 7);  // 2^3 - 1
}

TEST_CASE("coexisting sets of the quantum Bell scenario")
{
    // The birth/death rule gives four maximal sets; no set holds both a
    // subsystem and its measurement outcome.
    CausalStructure bell = parse_structure(fixtures::kBell);
    ElementTable et(bell);
    auto maximal = et.maximal_coexisting_sets();
    REQUIRE(maximal.size() == 4);
    CHECK(maximal[0] == NameSet{"A", "B", "C_X", "C_Y"});
    CHECK(maximal[1] == NameSet{"A", "B", "C_X", "Y"});
    CHECK(maximal[2] == NameSet{"A", "B", "C_Y", "X"});
    CHECK(maximal[3] == NameSet{"A", "B", "X", "Y"});
    for (const auto& set : et.coexisting_sets()) {
        bool both = set.count("C_X") && set.count("X");
        CHECK_FALSE(both);
    }
}

TEST_CASE("coexistence closure and pairwise predicate")
{
    for (const char* text : {fixtures::kIC, fixtures::kBell, fixtures::kInfoCausality}) {
        CausalStructure s = parse_structure(text);
        ElementTable et(s);
        auto sets = et.coexisting_sets();
        std::set<NameSet> have(sets.begin(), sets.end());
        for (const auto& set : sets) {
            for (const auto& skip : set) {
                NameSet sub = set;
                sub.erase(skip);
                if (!sub.empty())
                    CHECK(have.count(sub));
            }
            for (const auto& a : set)
                for (const auto& b : set)
                    if (a < b)
                        CHECK(et.coexist(a, b));
        }
    }
}

TEST_CASE("coexisting sets after quantum post-selection")
{
    // Post-selected information-causality scenario: instances of Y for
    // different settings are alternatives, the shared subsystem A_Y dies at
    // both of them.
    CausalStructure s = parse_structure(fixtures::kInfoCausality);
    CausalStructure ps = s.post_select("S", 2);
    ElementTable et(ps);
    auto maximal = et.maximal_coexisting_sets();
    REQUIRE(maximal.size() == 4);
    CHECK(maximal[0] == NameSet{"A_Y", "A_Z", "X1", "X2"});
    CHECK(maximal[1] == NameSet{"A_Y", "X1", "X2", "Z"});
    CHECK(maximal[2] == NameSet{"X1", "X2", "Y|S=0", "Z"});
    CHECK(maximal[3] == NameSet{"X1", "X2", "Y|S=1", "Z"});
}

TEST_CASE("DSL round trip")
{
    CausalStructure ic = parse_structure(fixtures::kIC);
    CausalStructure again = parse_structure(ic.to_dsl());
    CHECK(again.node_count() == ic.node_count());
    CHECK(again.edges().size() == ic.edges().size());
    CHECK(again.subsystems().size() == ic.subsystems().size());
}
