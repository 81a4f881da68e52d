#ifndef CAUSENT_COMMON_HPP
#define CAUSENT_COMMON_HPP

#include <gmpxx.h>

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace causent {

using Rat = mpq_class;
using Row = std::vector<Rat>;
using NameSet = std::set<std::string>;

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scale a row to coprime integers. Equalities additionally get their first
// nonzero entry made positive so identical functionals hash identically.
void normalize_row(Row& r, bool sign_normalize = false);

bool is_zero_row(const Row& r);

// Key usable in hash maps / ordered sets; rows must be normalized first.
std::string row_key(const Row& r);

std::string rat_to_string(const Rat& q);
Rat rat_from_string(const std::string& s);  // "a/b" or "a"

std::string join_names(const std::vector<std::string>& names, const std::string& sep = ",");

template <typename T>
std::vector<T> set_to_vector(const std::set<T>& s)
{
    return std::vector<T>(s.begin(), s.end());
}

}  // namespace causent

#endif
