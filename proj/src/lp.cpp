#include "lp.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace causent::lp {

namespace {

// Dense phase-1 tableau over the Farkas system  M z = rhs, z >= 0 with
// M = [ineq_1 .. ineq_m, +eq_1, -eq_1, ..], one artificial per row.
struct ExactTableau {
    int rows = 0, cols = 0;  // cols = structural count; artificials appended
    std::vector<Row> T;      // rows x (cols + rows)
    Row rhs;
    Row obj;                 // reduced costs over structural + artificial
    Rat objval = 0;
    std::vector<int> basis;  // column index per row
    std::vector<int> flip;   // row sign normalization applied at setup

    // Farkas alternative at an infeasible optimum: a point v of the cone
    // with v.c < 0, read off the simplex multipliers.
    Row separator() const
    {
        Row v(rows, Rat(0));
        for (int i = 0; i < rows; ++i) {
            Rat pi = 0;
            for (int r = 0; r < rows; ++r)
                if (basis[r] >= cols)
                    pi += T[r][cols + i];
            v[i] = -Rat(flip[i]) * pi;
        }
        return v;
    }

    bool solve_feasible()
    {
        const int total = cols + rows;
        for (int iter = 0;; ++iter) {
            if (iter > 20000)
                throw error("exact simplex iteration cap exceeded");
            int enter = -1;
            for (int j = 0; j < total; ++j)
                if (obj[j] < 0) {
                    enter = j;  // Bland: smallest index
                    break;
                }
            if (enter < 0)
                break;
            int leave = -1;
            Rat best;
            for (int i = 0; i < rows; ++i) {
                if (T[i][enter] <= 0)
                    continue;
                Rat ratio = rhs[i] / T[i][enter];
                if (leave < 0 || ratio < best ||
                    (ratio == best && basis[i] < basis[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave < 0)
                throw error("phase-1 LP unbounded (cannot happen)");
            pivot(leave, enter);
        }
        return objval == 0;
    }

    void pivot(int r, int e)
    {
        Rat piv = T[r][e];
        const int total = cols + rows;
        for (int j = 0; j < total; ++j)
            if (T[r][j] != 0)
                T[r][j] /= piv;
        rhs[r] /= piv;
        T[r][e] = 1;
        for (int i = 0; i < rows; ++i) {
            if (i == r || T[i][e] == 0)
                continue;
            Rat f = T[i][e];
            for (int j = 0; j < total; ++j)
                if (T[r][j] != 0)
                    T[i][j] -= f * T[r][j];
            rhs[i] -= f * rhs[r];
            T[i][e] = 0;
        }
        if (obj[e] != 0) {
            Rat f = obj[e];
            for (int j = 0; j < total; ++j)
                if (T[r][j] != 0)
                    obj[j] -= f * T[r][j];
            objval += f * rhs[r];
            obj[e] = 0;
        }
        basis[r] = e;
    }
};

ExactTableau build_exact(const std::vector<const Row*>& ineqs,
                         const std::vector<const Row*>& eqs,
                         const Row& c)
{
    const int dim = int(c.size());
    const int m = int(ineqs.size());
    const int k = int(eqs.size());
    ExactTableau t;
    t.rows = dim;
    t.cols = m + 2 * k;
    t.T.assign(dim, Row(t.cols + dim, Rat(0)));
    t.rhs = c;
    t.basis.resize(dim);

    for (int j = 0; j < m; ++j)
        for (int i = 0; i < dim; ++i)
            t.T[i][j] = (*ineqs[j])[i];
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < dim; ++i) {
            t.T[i][m + 2 * j] = (*eqs[j])[i];
            t.T[i][m + 2 * j + 1] = -(*eqs[j])[i];
        }
    t.flip.assign(dim, 1);
    for (int i = 0; i < dim; ++i) {
        if (t.rhs[i] < 0) {
            for (int j = 0; j < t.cols; ++j)
                t.T[i][j] = -t.T[i][j];
            t.rhs[i] = -t.rhs[i];
            t.flip[i] = -1;
        }
        t.T[i][t.cols + i] = 1;
        t.basis[i] = t.cols + i;
    }
    // Reduced costs for the artificial basis: obj = -sum of constraint rows.
    t.obj.assign(t.cols + dim, Rat(0));
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < t.cols; ++j)
            t.obj[j] -= t.T[i][j];
        t.objval += t.rhs[i];
    }
    return t;
}

}  // namespace

bool exact_implied(const std::vector<const Row*>& ineqs,
                   const std::vector<const Row*>& eqs,
                   const Row& c, Row* separator)
{
    if (is_zero_row(c))
        return true;
    ExactTableau t = build_exact(ineqs, eqs, c);
    if (t.solve_feasible())
        return true;
    if (separator)
        *separator = t.separator();
    return false;
}

bool exact_implied(const std::vector<Row>& ineqs, const std::vector<Row>& eqs, const Row& c,
                   Row* separator)
{
    std::vector<const Row*> ip, ep;
    for (const auto& r : ineqs)
        ip.push_back(&r);
    for (const auto& r : eqs)
        ep.push_back(&r);
    return exact_implied(ip, ep, c, separator);
}

// ---------------------------------------------------------------------------
// Double-precision presolve

FloatFarkas::FloatFarkas(const std::vector<const Row*>& ineqs,
                         const std::vector<const Row*>& eqs)
{
    dim_ = ineqs.empty() ? (eqs.empty() ? 0 : int(eqs[0]->size())) : int(ineqs[0]->size());
    m_ = int(ineqs.size());
    k_ = int(eqs.size());
    cols_ = m_ + 2 * k_;
    total_ = cols_ + dim_;
    base_.assign(size_t(dim_) * cols_, 0.0);
    for (int j = 0; j < m_; ++j)
        for (int i = 0; i < dim_; ++i)
            base_[size_t(i) * cols_ + j] = (*ineqs[j])[i].get_d();
    for (int j = 0; j < k_; ++j)
        for (int i = 0; i < dim_; ++i) {
            double v = (*eqs[j])[i].get_d();
            base_[size_t(i) * cols_ + m_ + 2 * j] = v;
            base_[size_t(i) * cols_ + m_ + 2 * j + 1] = -v;
        }
    colsum_.assign(dim_, 0.0);
    for (int i = 0; i < dim_; ++i) {
        double s = 0.0;
        for (int j = 0; j < m_; ++j)
            s += base_[size_t(i) * cols_ + j];
        colsum_[i] = s;
    }
    T_.assign(size_t(dim_) * total_, 0.0);
    rhs_.assign(dim_, 0.0);
    obj_.assign(total_, 0.0);
    basis_.assign(dim_, 0);
}

std::optional<FloatCertificate> FloatFarkas::test(const Row& c,
                                                  const std::vector<char>& banned_ineq,
                                                  double perturb)
{
    const double eps = 1e-9;
    const int dim = dim_, cols = cols_, total = total_, m = m_;

    separator_.clear();
    std::fill(T_.begin(), T_.end(), 0.0);
    std::fill(obj_.begin(), obj_.end(), 0.0);
    flip_.assign(dim, 1);
    double objval = 0.0;
    for (int i = 0; i < dim; ++i) {
        double* t = &T_[size_t(i) * total];
        const double* b = &base_[size_t(i) * cols];
        double r = c[i].get_d() + perturb * colsum_[i];
        if (r < 0) {
            for (int j = 0; j < cols; ++j)
                t[j] = -b[j];
            r = -r;
            flip_[i] = -1;
        } else {
            for (int j = 0; j < cols; ++j)
                t[j] = b[j];
        }
        rhs_[i] = r;
        t[cols + i] = 1.0;
        basis_[i] = cols + i;
        for (int j = 0; j < cols; ++j)
            obj_[j] -= t[j];
        objval += r;
    }

    auto banned = [&](int j) { return j < m && banned_ineq[j]; };

    // Phase-1 normally finishes in O(dim) pivots; degenerate stalls are cut
    // off early and treated as "not shown redundant".
    const int cap = 12 * dim + 100;
    const int bland_after = 3 * dim + 30;
    int zero_steps = 0;
    for (int iter = 0; iter < cap; ++iter) {
        int enter = -1;
        if (iter < bland_after) {  // Dantzig, then Bland to dodge cycling
            double best = -1e-7;
            for (int j = 0; j < total; ++j)
                if (obj_[j] < best && !banned(j)) {
                    best = obj_[j];
                    enter = j;
                }
        } else {
            for (int j = 0; j < total; ++j)
                if (obj_[j] < -1e-7 && !banned(j)) {
                    enter = j;
                    break;
                }
        }
        if (enter < 0)
            break;
        int leave = -1;
        double best = 0.0;
        for (int i = 0; i < dim; ++i) {
            double piv = T_[size_t(i) * total + enter];
            if (piv <= eps)
                continue;
            double ratio = rhs_[i] / piv;
            if (leave < 0 || ratio < best - eps ||
                (ratio < best + eps && basis_[i] < basis_[leave])) {
                best = ratio;
                leave = i;
            }
        }
        if (leave < 0)
            return std::nullopt;  // numerically unbounded; give up
        if (best < eps) {
            if (++zero_steps > dim + 40)
                return std::nullopt;  // degenerate stall
        } else {
            zero_steps = 0;
        }
        double* lrow = &T_[size_t(leave) * total];
        double piv = lrow[enter];
        for (int j = 0; j < total; ++j)
            lrow[j] /= piv;
        rhs_[leave] /= piv;
        lrow[enter] = 1.0;
        for (int i = 0; i < dim; ++i) {
            if (i == leave)
                continue;
            double* row = &T_[size_t(i) * total];
            double f = row[enter];
            if (std::fabs(f) < 1e-12)
                continue;
            for (int j = 0; j < total; ++j)
                row[j] -= f * lrow[j];
            rhs_[i] -= f * rhs_[leave];
            row[enter] = 0.0;
        }
        double f = obj_[enter];
        if (std::fabs(f) > 0) {
            for (int j = 0; j < total; ++j)
                obj_[j] -= f * lrow[j];
            objval += f * rhs_[leave];
            obj_[enter] = 0.0;
        }
        basis_[leave] = enter;
    }
    if (std::fabs(objval) > 1e-7) {
        // Optimal and infeasible: the simplex multipliers give a separating
        // point candidate v = -D pi with pi = sum of artificial-basic rows
        // of B^{-1}.
        bool optimal = true;
        for (int j = 0; j < total && optimal; ++j)
            if (obj_[j] < -1e-7 && !banned(j))
                optimal = false;
        if (optimal) {
            separator_.assign(dim, 0.0);
            for (int i = 0; i < dim; ++i) {
                double pi = 0.0;
                for (int r = 0; r < dim; ++r)
                    if (basis_[r] >= cols)
                        pi += T_[size_t(r) * total + cols + i];
                separator_[i] = -flip_[i] * pi;
            }
        }
        return std::nullopt;
    }

    FloatCertificate cert;
    std::set<int> ineq_sup, eq_sup;
    for (int i = 0; i < dim; ++i) {
        if (rhs_[i] < 1e-9 || basis_[i] >= cols)
            continue;
        if (basis_[i] < m)
            ineq_sup.insert(basis_[i]);
        else
            eq_sup.insert((basis_[i] - m) / 2);
    }
    cert.ineq_support.assign(ineq_sup.begin(), ineq_sup.end());
    cert.eq_support.assign(eq_sup.begin(), eq_sup.end());
    return cert;
}

std::optional<FloatCertificate> float_certificate(const std::vector<const Row*>& ineqs,
                                                  const std::vector<const Row*>& eqs,
                                                  const Row& c)
{
    FloatFarkas solver(ineqs, eqs);
    std::vector<char> banned(ineqs.size(), 0);
    return solver.test(c, banned);
}

bool certify_support(const std::vector<const Row*>& ineqs,
                     const std::vector<const Row*>& eqs,
                     const FloatCertificate& support,
                     const Row& c)
{
    const int dim = int(c.size());
    std::vector<const Row*> sel_ineqs, sel_eqs;
    for (int i : support.ineq_support)
        sel_ineqs.push_back(ineqs[i]);
    for (int j : support.eq_support)
        sel_eqs.push_back(eqs[j]);

    std::vector<int> used;
    std::vector<bool> in_use(dim, false);
    auto touch = [&](const Row& r) {
        for (int i = 0; i < dim; ++i)
            if (r[i] != 0 && !in_use[i]) {
                in_use[i] = true;
                used.push_back(i);
            }
    };
    touch(c);
    for (const Row* r : sel_ineqs)
        touch(*r);
    for (const Row* r : sel_eqs)
        touch(*r);
    std::sort(used.begin(), used.end());

    auto restrict_row = [&](const Row& r) {
        Row out(used.size());
        for (size_t i = 0; i < used.size(); ++i)
            out[i] = r[used[i]];
        return out;
    };
    std::vector<Row> ri, re;
    for (const Row* r : sel_ineqs)
        ri.push_back(restrict_row(*r));
    for (const Row* r : sel_eqs)
        re.push_back(restrict_row(*r));
    return exact_implied(ri, re, restrict_row(c));
}

int rank(const std::vector<const Row*>& rows, int dim)
{
    std::vector<Row> M;
    for (const Row* r : rows)
        M.push_back(*r);
    int rk = 0;
    for (int col = 0; col < dim && rk < int(M.size()); ++col) {
        int piv = -1;
        for (int i = rk; i < int(M.size()); ++i)
            if (M[i][col] != 0) {
                piv = i;
                break;
            }
        if (piv < 0)
            continue;
        std::swap(M[rk], M[piv]);
        for (int i = 0; i < int(M.size()); ++i) {
            if (i == rk || M[i][col] == 0)
                continue;
            Rat f = M[i][col] / M[rk][col];
            for (int j = col; j < dim; ++j)
                M[i][j] -= f * M[rk][j];
        }
        ++rk;
    }
    return rk;
}

}  // namespace causent::lp
