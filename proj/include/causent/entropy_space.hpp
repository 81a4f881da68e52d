#ifndef CAUSENT_ENTROPY_SPACE_HPP
#define CAUSENT_ENTROPY_SPACE_HPP

#include "causent/common.hpp"

#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace causent {

// Ordered list of non-empty variable sets indexing entropy-vector components.
// Canonical order: by cardinality, then lexicographic on sorted member names.
class CoordinateSystem {
public:
    CoordinateSystem() = default;
    explicit CoordinateSystem(std::vector<NameSet> subsets);

    static CoordinateSystem power_set(const std::vector<std::string>& vars);

    int size() const { return int(subsets_.size()); }
    const NameSet& subset(int i) const { return subsets_[i]; }
    const std::vector<NameSet>& subsets() const { return subsets_; }
    std::string label(int i) const;
    int find(const NameSet& s) const;                       // -1 when absent
    int require(const NameSet& s) const;                    // throws when absent
    std::vector<std::string> universe() const;              // sorted union

    friend bool operator==(const CoordinateSystem&, const CoordinateSystem&) = default;

private:
    std::vector<NameSet> subsets_;
    std::map<NameSet, int> index_;
};

using CoordsPtr = std::shared_ptr<const CoordinateSystem>;

enum class MeasureKind { H, H_cond, I, I_cond };

struct LinearExpression {
    CoordsPtr coords;
    std::map<int, Rat> coeff;

    Row dense() const;
    LinearExpression& add(const LinearExpression& other, const Rat& scale = 1);
};

// H(args[0]), H(args[0]|args[1]), I(args[0]:args[1]), I(args[0]:args[1]|args[2]).
// Throws when a needed composite subset is not a coordinate.
LinearExpression expr(MeasureKind kind, const std::vector<NameSet>& args, CoordsPtr coords);
LinearExpression expr_from_row(const Row& row, CoordsPtr coords);

struct EntropyVector {
    CoordsPtr coords;
    std::vector<double> values;
    std::vector<std::optional<Rat>> exact;   // set when the marginal is exactly computable

    bool all_exact() const;
    Row exact_row() const;                   // throws unless all_exact()
};

struct JointDistribution {
    std::vector<std::string> vars;                         // sorted
    std::vector<std::vector<std::string>> alphabets;       // per variable
    std::vector<Rat> pmf;                                  // row-major over alphabets

    size_t outcome_count() const;
    void validate() const;                                 // normalization, shapes
    Rat probability(const std::vector<int>& outcome) const;
};

EntropyVector entropy_vector(const JointDistribution& p, CoordsPtr coords);

double evaluate(const LinearExpression& e, const EntropyVector& v);
std::optional<Rat> evaluate_exact(const LinearExpression& e, const EntropyVector& v);

}  // namespace causent

#endif
