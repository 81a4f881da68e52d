#ifndef CAUSENT_POLYHEDRON_HPP
#define CAUSENT_POLYHEDRON_HPP

#include "causent/common.hpp"
#include "causent/entropy_space.hpp"

#include <functional>
#include <string>
#include <vector>

namespace causent {

// H-representation of a polyhedral cone. Coordinate non-negativity is NOT
// implicit; cones wanting it carry explicit rows.
struct HCone {
    std::vector<std::string> coords;
    std::vector<Row> eqs;     // each row = 0
    std::vector<Row> ineqs;   // each row >= 0

    int dim() const { return int(coords.size()); }
    void validate() const;
    int coord_index(const std::string& label) const;
};

struct RaySet {
    std::vector<std::string> coords;
    std::vector<Row> rays;       // integer, gcd-normalized
    std::vector<Row> lineality;  // basis, reduced echelon form
};

// Thrown when extreme_rays refuses a dimension above the configured cap.
struct cap_error : error {
    using error::error;
};

struct FmOptions {
    int lp_threshold = 2000;       // hybrid LP sweep triggers above this row count
    bool final_minimize = true;    // exact minimization of the projected system
    std::function<void(const std::string&)> log;
};

// Fourier-Motzkin projection onto coords \ drop. Equalities are used for
// Gaussian substitution first; remaining drops are eliminated pairwise with
// redundancy control after each step.
HCone fm_eliminate(const HCone& c, const NameSet& drop, const FmOptions& opt = {});

// Minimal equivalent system: equality basis + each inequality kept iff not
// implied by the rest (exact LP). Deterministic given input order.
HCone remove_redundant(const HCone& c);

// Projection by incremental hull in the target space: discovers extremal rays
// of the projection and certifies every facet of their hull exactly against
// the input system, so the result equals the Fourier-Motzkin projection. Far
// cheaper than FM when many coordinates are dropped at once. Seeds are
// optional known points of the cone (full-dimensional, exact); invalid seeds
// are ignored.
HCone project_via_hull(const HCone& c, const NameSet& drop, const FmOptions& opt = {},
                       const std::vector<Row>& seeds = {});

enum class Sense { geq, eq };

// Exact Farkas verdict: does every point of c satisfy e >= 0 (or = 0)?
bool implies(const HCone& c, const Row& e, Sense sense);
bool implies(const HCone& c, const LinearExpression& e, Sense sense);

// Mutual row implication.
bool equals(const HCone& a, const HCone& b);

bool contains(const HCone& c, const std::vector<double>& v, double tolerance);
bool contains_exact(const HCone& c, const Row& v);

// Double-description enumeration of extremal rays; throws when dim exceeds
// the cap (FM the system down first, or raise the cap).
RaySet extreme_rays(const HCone& c, int dim_cap = 25);

// Minimal H-representation of the conic hull of a ray set (dual DD run).
HCone from_rays(const RaySet& r);

}  // namespace causent

#endif
