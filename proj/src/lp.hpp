#ifndef CAUSENT_LP_HPP
#define CAUSENT_LP_HPP

#include "causent/common.hpp"

#include <optional>
#include <vector>

namespace causent::lp {

// Exact Farkas test: does there exist y >= 0, lambda free with
//   sum_i y_i * ineqs[i] + sum_j lambda_j * eqs[j] = c ?
// Equivalently: is c >= 0 implied by {ineqs >= 0, eqs = 0}?
// Phase-1 rational simplex with Bland's rule. When the answer is no and
// `separator` is non-null, it receives an exact point v of the cone with
// v.c < 0 (the Farkas alternative, read off the final simplex multipliers).
bool exact_implied(const std::vector<const Row*>& ineqs,
                   const std::vector<const Row*>& eqs,
                   const Row& c, Row* separator = nullptr);

bool exact_implied(const std::vector<Row>& ineqs, const std::vector<Row>& eqs, const Row& c,
                   Row* separator = nullptr);

// Double-precision phase-1 simplex over the same system. Returns the support
// (indices into ineqs / eqs) of a candidate certificate when the LP looks
// feasible, nullopt otherwise. Advisory only; never trusted without the
// exact confirmation below.
struct FloatCertificate {
    std::vector<int> ineq_support;
    std::vector<int> eq_support;
};

// Reusable solver: the structural matrix is assembled once, each test only
// copies it into the working tableau. Banned inequality columns are barred
// from entering the basis (used to exclude the tested row itself and rows
// already dropped).
class FloatFarkas {
public:
    FloatFarkas(const std::vector<const Row*>& ineqs, const std::vector<const Row*>& eqs);

    // perturb > 0 adds perturb * (sum of structural columns) to the target,
    // which breaks the heavy degeneracy of homogeneous Farkas systems; the
    // caller must confirm any result exactly.
    std::optional<FloatCertificate> test(const Row& c, const std::vector<char>& banned_ineq,
                                         double perturb = 0.0);

    // Approximate separating point from the last failed test (empty if the
    // last test succeeded or was inconclusive).
    const std::vector<double>& last_separator() const { return separator_; }

private:
    int dim_, m_, k_, cols_, total_;
    std::vector<double> base_;  // dim x cols, row-major
    std::vector<double> colsum_;
    std::vector<double> T_, rhs_, obj_;
    std::vector<int> basis_;
    std::vector<double> separator_;
    std::vector<int> flip_;
};

std::optional<FloatCertificate> float_certificate(const std::vector<const Row*>& ineqs,
                                                  const std::vector<const Row*>& eqs,
                                                  const Row& c);

// Exact confirmation of a candidate support: solves the Farkas system
// restricted to the named rows and to the coordinates they touch.
bool certify_support(const std::vector<const Row*>& ineqs,
                     const std::vector<const Row*>& eqs,
                     const FloatCertificate& support,
                     const Row& c);

// Rank of a set of rational rows.
int rank(const std::vector<const Row*>& rows, int dim);

}  // namespace causent::lp

#endif
