#ifndef CAUSENT_MARGINAL_HPP
#define CAUSENT_MARGINAL_HPP

#include "causent/causal_graph.hpp"
#include "causent/constraint_gen.hpp"
#include "causent/polyhedron.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace causent {

// Maximal kept sets of observed variables; empty means the full observed
// power set. The coordinate system of a marginal cone is the subset closure.
struct MarginalScenario {
    std::vector<NameSet> kept;

    static MarginalScenario full() { return {}; }
    static MarginalScenario of(std::vector<NameSet> sets) { return {std::move(sets)}; }
};

CoordsPtr marginal_closure(const CausalStructure& s, const MarginalScenario& m);

enum class NonShannon { none, ingleton, zy, both };
enum class Model { classical, quantum, ns };

struct PipelineOptions {
    int fm_lp_threshold = 2000;
    std::optional<std::string> cache_dir;
    std::function<void(const std::string&)> log;
};

HCone classical_outer(const CausalStructure& s, const MarginalScenario& m,
                      NonShannon nonshannon = NonShannon::none,
                      const PipelineOptions& opt = {});

HCone classical_inner(const CausalStructure& s, const MarginalScenario& m,
                      const PipelineOptions& opt = {});

HCone quantum_outer(const CausalStructure& s, const MarginalScenario& m, bool purity = false,
                    const PipelineOptions& opt = {});

HCone postselected_pipeline(const CausalStructure& s,
                            const std::vector<std::pair<std::string, int>>& selectors,
                            const MarginalScenario& m, Model model,
                            NonShannon nonshannon = NonShannon::none, bool purity = false,
                            const PipelineOptions& opt = {});

HCone ns_pipeline(const CausalStructure& s, const std::string& node, int values,
                  const std::vector<ConstraintSystem>& extra, const MarginalScenario& m,
                  const PipelineOptions& opt = {});

}  // namespace causent

#endif
