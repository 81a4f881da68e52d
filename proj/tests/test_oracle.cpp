#include "causent/oracle.hpp"

#include "causent/constraint_gen.hpp"
#include "causent/marginal.hpp"
#include "fixtures.hpp"

#include <doctest.h>

using namespace causent;

namespace {

CoordsPtr power(const std::vector<std::string>& vars)
{
    return std::make_shared<CoordinateSystem>(CoordinateSystem::power_set(vars));
}

}  // namespace

TEST_CASE("Matus distribution entropies")
{
    JointDistribution p = matus_distribution();
    auto cs = power({"T", "U", "V", "W"});
    EntropyVector v = entropy_vector(p, cs);
    CHECK(*v.exact[cs->require({"V", "W"})] == 2);
    CHECK(v.values[cs->require({"T"})] == doctest::Approx(0.8112781245).epsilon(1e-9));
    CHECK(evaluate(ingleton_expression("T", "U", "V", "W", cs), v) ==
          doctest::Approx(-0.1225562489).epsilon(1e-7));
}

TEST_CASE("composition of deterministic CPDs on the instrumental scenario")
{
    CausalStructure ic = parse_structure(fixtures::kIC);
    CPDAssignment a;
    // A constant, X uniform, Z = X, Y = Z
    a.cpds["A"] = {{"0", "1"}, {{Rat(1), Rat(0)}}};
    a.cpds["X"] = {{"0", "1"}, {{Rat(1, 2), Rat(1, 2)}}};
    // parents of Z sorted: A, X; of Y: A, Z
    a.cpds["Z"] = {{"0", "1"},
                   {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(1), Rat(0)}, {Rat(0), Rat(1)}}};
    a.cpds["Y"] = {{"0", "1"},
                   {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(1), Rat(0)}, {Rat(0), Rat(1)}}};
    JointDistribution p = compose(ic, a);
    auto cs = power({"X", "Y", "Z"});
    EntropyVector v = entropy_vector(marginalize(p, {"X", "Y", "Z"}), cs);
    CHECK(v.exact_row() == Row{1, 1, 1, 1, 1, 1, 1});

    HCone marg = classical_outer(ic, MarginalScenario::full());
    CHECK(contains_exact(marg, v.exact_row()));
}

TEST_CASE("composition of independent uniform CPDs is a product")
{
    CausalStructure s("Pair", {{"X", Role::observed}, {"Y", Role::observed}}, {});
    CPDAssignment a;
    a.cpds["X"] = {{"0", "1"}, {{Rat(1, 2), Rat(1, 2)}}};
    a.cpds["Y"] = {{"0", "1"}, {{Rat(1, 2), Rat(1, 2)}}};
    JointDistribution p = compose(s, a);
    for (const auto& q : p.pmf)
        CHECK(q == Rat(1, 4));

    CPDAssignment missing;
    missing.cpds["X"] = a.cpds["X"];
    CHECK_THROWS_AS(compose(s, missing), error);
}

TEST_CASE("composed distributions satisfy the CI equalities")
{
    for (const char* text : {fixtures::kIC, fixtures::kTriangle}) {
        CausalStructure s = parse_structure(text);
        auto cs = power(s.node_names());
        auto ci = ci_matrix(s, cs);
        for (int k = 0; k < 10; ++k) {
            JointDistribution p = sample_compatible_one(s, 2, 13, uint64_t(k));
            EntropyVector v = entropy_vector(p, cs);
            for (const auto& r : ci.eqs) {
                double val = 0;
                for (int i = 0; i < cs->size(); ++i)
                    val += r[i].get_d() * v.values[i];
                CHECK(std::abs(val) <= 1e-9);
            }
        }
    }
}

TEST_CASE("sampling is reproducible bit for bit")
{
    CausalStructure ic = parse_structure(fixtures::kIC);
    auto a = sample_compatible(ic, 2, 5, 7);
    auto b = sample_compatible(ic, 2, 5, 7);
    REQUIRE(a.size() == 5);
    for (size_t i = 0; i < a.size(); ++i)
        CHECK(a[i].pmf == b[i].pmf);
    auto c = sample_compatible(ic, 2, 1, 8);
    CHECK(a[0].pmf != c[0].pmf);
    CHECK(sample_compatible(ic, 2, 0, 7).empty());
}

TEST_CASE("sampled instrumental distributions live inside the marginal cone")
{
    CausalStructure ic = parse_structure(fixtures::kIC);
    HCone marg = classical_outer(ic, MarginalScenario::full());
    for (int k = 0; k < 100; ++k) {
        JointDistribution p = sample_compatible_one(ic, 2, 7, uint64_t(k));
        EntropyVector v = marginal_entropy_vector(p, marg);
        CHECK(contains(marg, v.values, 1e-9));
    }
}

TEST_CASE("falsification finds violations of a false row and none of a true cone")
{
    CausalStructure ic = parse_structure(fixtures::kIC);
    HCone marg = classical_outer(ic, MarginalScenario::full());
    CHECK_FALSE(falsify(marg, ic, 200, 2, 3).has_value());

    HCone broken = marg;
    // claim H(Y) <= H(X): false (take Y uniform from A, X constant)
    Row bad(broken.dim(), Rat(0));
    bad[broken.coord_index("X")] = 1;
    bad[broken.coord_index("Y")] = -1;
    broken.ineqs.push_back(bad);
    auto witness = falsify(broken, ic, 2000, 2, 3);
    REQUIRE(witness.has_value());
    EntropyVector v = marginal_entropy_vector(*witness, broken);
    CHECK_FALSE(contains(broken, v.values, 1e-9));

    HCone empty;
    empty.coords = marg.coords;
    CHECK_FALSE(falsify(empty, ic, 50, 2, 3).has_value());
}
