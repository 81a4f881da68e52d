#ifndef CAUSENT_ORACLE_HPP
#define CAUSENT_ORACLE_HPP

#include "causent/causal_graph.hpp"
#include "causent/entropy_space.hpp"
#include "causent/polyhedron.hpp"

#include <map>
#include <optional>

namespace causent {

// V, W uniform bits; T = AND(!V,!W), U = AND(V,W).
JointDistribution matus_distribution();

// Conditional pmfs per node, indexed by the node's parents in sorted order.
struct CPDAssignment {
    struct CPD {
        std::vector<std::string> alphabet;
        // table[parent outcome index] = pmf over the node's alphabet;
        // the parent outcome index is row-major over sorted parent names.
        std::vector<std::vector<Rat>> table;
    };
    std::map<std::string, CPD> cpds;
};

// Product of the conditionals per the Markov factorization; exact rational.
JointDistribution compose(const CausalStructure& s, const CPDAssignment& a);

// Pseudorandom compatible distributions over dyadic CPDs (grid 1/64).
// Distribution k uses a generator seeded with seed + k, so runs with the
// same seed are bit-for-bit identical.
std::vector<JointDistribution> sample_compatible(const CausalStructure& s, int alphabet_size,
                                                 int count, uint64_t seed);
JointDistribution sample_compatible_one(const CausalStructure& s, int alphabet_size,
                                        uint64_t seed, uint64_t index);

// Searches for a compatible distribution whose marginal entropy vector
// violates the cone: random restarts plus hill-climbing on CPD entries.
std::optional<JointDistribution> falsify(const HCone& c, const CausalStructure& s, int budget,
                                         int alphabet_size = 2, uint64_t seed = 0);

// Marginal of a joint distribution onto a subset of its variables.
JointDistribution marginalize(const JointDistribution& p, const NameSet& keep);

// Entropy vector of the observed marginal on the cone's coordinates.
EntropyVector marginal_entropy_vector(const JointDistribution& p, const HCone& cone);

}  // namespace causent

#endif
