#include "causent/common.hpp"

#include <sstream>

namespace causent {

void normalize_row(Row& r, bool sign_normalize)
{
    mpz_class lcm_den = 1;
    for (const auto& q : r)
        if (q != 0)
            mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), q.get_den().get_mpz_t());

    mpz_class gcd_num = 0;
    for (auto& q : r) {
        if (q == 0)
            continue;
        q *= lcm_den;
        q.canonicalize();
        mpz_gcd(gcd_num.get_mpz_t(), gcd_num.get_mpz_t(), q.get_num().get_mpz_t());
    }
    if (gcd_num > 1)
        for (auto& q : r)
            if (q != 0) {
                q /= gcd_num;
                q.canonicalize();
            }

    if (sign_normalize)
        for (const auto& q : r) {
            if (q == 0)
                continue;
            if (q < 0)
                for (auto& x : r)
                    x = -x;
            break;
        }
}

bool is_zero_row(const Row& r)
{
    for (const auto& q : r)
        if (q != 0)
            return false;
    return true;
}

std::string row_key(const Row& r)
{
    std::ostringstream out;
    for (const auto& q : r)
        out << q.get_str() << '|';
    return out.str();
}

std::string rat_to_string(const Rat& q)
{
    return q.get_str();
}

Rat rat_from_string(const std::string& s)
{
    Rat q;
    if (q.set_str(s, 10) != 0)
        throw error("invalid rational: '" + s + "'");
    q.canonicalize();
    return q;
}

std::string join_names(const std::vector<std::string>& names, const std::string& sep)
{
    std::string out;
    for (size_t i = 0; i < names.size(); ++i) {
        if (i)
            out += sep;
        out += names[i];
    }
    return out;
}

}  // namespace causent
