#ifndef CAUSENT_CONSTRAINT_GEN_HPP
#define CAUSENT_CONSTRAINT_GEN_HPP

#include "causent/causal_graph.hpp"
#include "causent/entropy_space.hpp"
#include "causent/polyhedron.hpp"

#include <array>
#include <optional>

namespace causent {

enum class RowTag { shannon, ci, ingleton, zy, wm, dpi, qci, glue, user, purity, nonneg };

std::string tag_name(RowTag t);
RowTag tag_from_name(const std::string& name);

struct ConstraintSystem {
    CoordsPtr coords;
    std::vector<Row> eqs;
    std::vector<Row> ineqs;
    std::vector<RowTag> eq_tags;
    std::vector<RowTag> ineq_tags;

    void add_eq(Row r, RowTag tag);
    void add_ineq(Row r, RowTag tag);
    void append(const ConstraintSystem& other);
    HCone cone() const;
    int rows() const { return int(eqs.size() + ineqs.size()); }
};

CoordsPtr quantum_coords(const ElementTable& et);

// Minimal elemental Shannon system: n monotonicity rows H(All)-H(All\i) >= 0
// plus n(n-1)2^(n-3) submodularity rows I(i:j|U) >= 0.
ConstraintSystem shannon_matrix(CoordsPtr coords);

// Local-Markov equalities I(X : nondesc\parents | parents) = 0, deduplicated
// at the linear-functional level.
ConstraintSystem ci_matrix(const CausalStructure& s, CoordsPtr coords);

LinearExpression ingleton_expression(const std::string& t, const std::string& u,
                                     const std::string& v, const std::string& w,
                                     CoordsPtr coords);

// Six Ingleton rows per four-element subset (all subsets, or the given ones).
ConstraintSystem ingleton_rows(
    CoordsPtr coords,
    const std::optional<std::vector<std::array<std::string, 4>>>& quadruples = std::nullopt);

ConstraintSystem zhang_yeung_rows(CoordsPtr coords);

// Submodularity within coexisting sets, monotonicity where the removed part
// cannot be entangled with the rest, and the surviving weak-monotonicity
// rows. Redundant candidates are pruned by LP against the emitted system.
ConstraintSystem quantum_basic_matrix(const CausalStructure& s, const ElementTable& et);

// d-separation-justified independence equalities within coexisting sets,
// pruned against the basic rows.
ConstraintSystem quantum_ci_matrix(const CausalStructure& s, const ElementTable& et);

// Data-processing rows I(inputs,copied : T) >= I(outputs,copied : T) at each
// node consuming a quantum subsystem, one row per surviving spectator set.
ConstraintSystem dpi_matrix(const CausalStructure& s, const ElementTable& et,
                            std::optional<int> spectator_cap = std::nullopt);

// Purity of parentless quantum nodes and Stinespring input/output equalities.
ConstraintSystem quantum_reduction_equalities(const CausalStructure& s, const ElementTable& et,
                                              bool enable);

// Glued no-signalling system: one block of coordinates per post-selected
// value sharing the non-descendant coordinates, with per-value Shannon and
// observed-d-separation rows plus user-supplied extra rows.
ConstraintSystem ns_glued_system(const CausalStructure& s, const std::string& node, int values,
                                 const std::vector<ConstraintSystem>& extra = {});

ConstraintSystem nonneg_rows(CoordsPtr coords);

}  // namespace causent

#endif
