// lp.hpp - minimization LP solver (dense two-phase simplex) and a
// cutting-plane driver for LPs whose rows come from a separation oracle.
//
// Scope: small/medium dense instances with nonnegative variables, solved
// deterministically. Pricing is Dantzig (most negative reduced cost, lowest
// index on ties); after a pivot-count threshold the pricing switches to
// Bland's rule, which guarantees termination. LPs whose row count exceeds an
// activation threshold are solved by lazy row activation: solve a subset,
// add every row the iterate violates, repeat until the full row set is
// satisfied. The returned solution is optimal for the complete LP within
// tol_feas.

#ifndef KSEP_LP_HPP
#define KSEP_LP_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ksep/errors.hpp"

namespace ksep {

enum class RowSense : char { le = '<', ge = '>', eq = '=' };

struct LpRow {
    std::vector<std::pair<int, double>> coeffs;  // (var index, coefficient)
    RowSense sense = RowSense::le;
    double rhs = 0.0;
};

struct LinearProgram {
    int num_vars = 0;
    std::vector<std::pair<int, double>> objective;  // sparse c, min c'x
    std::vector<LpRow> rows;
    std::vector<double> upper_bounds;  // empty = none; +inf entries allowed

    void add_row(std::vector<std::pair<int, double>> coeffs, RowSense sense, double rhs) {
        rows.push_back(LpRow{std::move(coeffs), sense, rhs});
    }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    std::vector<double> values;
    double objective = 0.0;
    long iterations = 0;
    // duals per row at optimality (sign convention for min c'x:
    // y <= 0 on "<=" rows, y >= 0 on ">=" rows, free on "=")
    std::vector<double> row_duals;
};

namespace lpdetail {

constexpr double kPivotTol = 1e-9;

inline double row_activity(const LpRow& row, const std::vector<double>& x) {
    double a = 0.0;
    for (auto [j, c] : row.coeffs) a += c * x[j];
    return a;
}

// violation > 0 means the row is not satisfied.
inline double row_violation(const LpRow& row, const std::vector<double>& x) {
    const double a = row_activity(row, x);
    switch (row.sense) {
        case RowSense::le: return a - row.rhs;
        case RowSense::ge: return row.rhs - a;
        case RowSense::eq: return std::fabs(a - row.rhs);
    }
    return 0.0;
}

// Dense two-phase tableau simplex over the given subset of rows, with
// periodic refactorization (the tableau is rebuilt from the original data and
// the current basis) to stop roundoff from accumulating across long
// degenerate stretches.
class Simplex {
  public:
    Simplex(const LinearProgram& lp, const std::vector<int>& row_ids) : lp_(lp) {
        n_ = lp.num_vars;
        const int r = static_cast<int>(row_ids.size());
        // column layout: [0,n) structural, [n, n+r) slack/surplus, artificials after
        std::vector<char> needs_art(r, 0);
        orig_rhs_.resize(r);
        sign_.assign(r, 1);
        for (int i = 0; i < r; ++i) {
            const LpRow& row = lp.rows[row_ids[i]];
            orig_rhs_[i] = row.rhs;
            RowSense sense = row.sense;
            if (orig_rhs_[i] < 0) {  // normalize to b >= 0
                sign_[i] = -1;
                orig_rhs_[i] = -orig_rhs_[i];
                if (sense == RowSense::le) sense = RowSense::ge;
                else if (sense == RowSense::ge) sense = RowSense::le;
            }
            needs_art[i] = (sense != RowSense::le);
            senses_.push_back(sense);
        }
        int num_art = 0;
        for (char f : needs_art) num_art += f;
        cols_ = n_ + r + num_art;
        rows_ = r;
        basis_.assign(rows_, -1);
        attached_col_.assign(r, -1);
        art_begin_ = n_ + r;
        orig_cols_.assign(cols_, {});
        int art = art_begin_;
        for (int i = 0; i < r; ++i) {
            const LpRow& row = lp.rows[row_ids[i]];
            for (auto [j, c] : row.coeffs)
                if (c != 0.0) orig_cols_[j].push_back({i, sign_[i] * c});
            const int slack = n_ + i;
            if (senses_[i] == RowSense::le) {
                orig_cols_[slack].push_back({i, 1.0});
                basis_[i] = slack;
                attached_col_[i] = slack;
            } else if (senses_[i] == RowSense::ge) {
                orig_cols_[slack].push_back({i, -1.0});
                orig_cols_[art].push_back({i, 1.0});
                basis_[i] = art;
                attached_col_[i] = slack;
                ++art;
            } else {
                orig_cols_[art].push_back({i, 1.0});
                basis_[i] = art;
                attached_col_[i] = art;
                ++art;
            }
        }
        has_artificials_ = num_art > 0;
        t_.assign(static_cast<std::size_t>(rows_ + 1) * (cols_ + 1), 0.0);
        for (int j = 0; j < cols_; ++j)
            for (auto [i, c] : orig_cols_[j]) at(i, j) = c;
        for (int i = 0; i < rows_; ++i) at(i, cols_) = orig_rhs_[i];
    }

    // Runs both phases. Returns status; values() holds structural variables.
    LpStatus solve(long& iterations) {
        if (has_artificials_) {
            // phase 1: minimize sum of artificials
            set_phase1_costs();
            if (!optimize(iterations, /*allow_art=*/true))
                throw internal_error("lp_solve: phase 1 unbounded");
            if (at(rows_, cols_) < -1e-7) return LpStatus::infeasible;
            pivot_out_artificials(iterations);
        }
        set_phase2_costs();
        if (!optimize(iterations, /*allow_art=*/false)) return LpStatus::unbounded;
        return LpStatus::optimal;
    }

    // Resume from a known feasible basis (column generation re-solves: the
    // previous vertex stays feasible when only variables were added).
    // Callers must guarantee feasibility; only phase 2 runs.
    LpStatus solve_from_basis(const std::vector<int>& basis, long& iterations) {
        if (static_cast<int>(basis.size()) != rows_)
            throw internal_error("solve_from_basis: basis size mismatch");
        basis_ = basis;
        refactor(/*phase1=*/false);
        for (int i = 0; i < rows_; ++i)
            if (at(i, cols_) < -1e-7)
                throw internal_error("solve_from_basis: warm basis infeasible");
        if (!optimize(iterations, /*allow_art=*/false)) return LpStatus::unbounded;
        return LpStatus::optimal;
    }

    const std::vector<int>& basis() const { return basis_; }
    int num_structural() const { return n_; }

    std::vector<double> values() const {
        std::vector<double> x(n_, 0.0);
        for (int i = 0; i < rows_; ++i)
            if (basis_[i] < n_) x[basis_[i]] = at(i, cols_);
        return x;
    }

    // Row multipliers at optimality, recovered from the reduced cost of each
    // row's attached slack/surplus/artificial column.
    std::vector<double> duals() const {
        std::vector<double> y(rows_, 0.0);
        for (int i = 0; i < rows_; ++i) {
            const double r = at(rows_, attached_col_[i]);
            double pi;
            if (senses_[i] == RowSense::ge)
                pi = r;  // surplus column is -e_i
            else
                pi = -r;  // slack or artificial is +e_i
            y[i] = sign_[i] * pi;
        }
        return y;
    }

  private:
    double& at(int i, int j) { return t_[static_cast<std::size_t>(i) * (cols_ + 1) + j]; }
    double at(int i, int j) const { return t_[static_cast<std::size_t>(i) * (cols_ + 1) + j]; }

    void set_phase1_costs() {
        for (int j = 0; j <= cols_; ++j) at(rows_, j) = 0.0;
        for (int j = art_begin_; j < cols_; ++j) at(rows_, j) = 1.0;
        // price out basic artificials so reduced costs start consistent
        for (int i = 0; i < rows_; ++i) {
            if (basis_[i] >= art_begin_) {
                for (int j = 0; j <= cols_; ++j) at(rows_, j) -= at(i, j);
            }
        }
    }

    void set_phase2_costs() {
        for (int j = 0; j <= cols_; ++j) at(rows_, j) = 0.0;
        for (auto [j, c] : lp_.objective) at(rows_, j) = c;
        for (int i = 0; i < rows_; ++i) {
            const int b = basis_[i];
            const double cb = at(rows_, b);
            if (cb != 0.0) {
                for (int j = 0; j <= cols_; ++j) at(rows_, j) -= cb * at(i, j);
                at(rows_, b) = 0.0;
            }
        }
    }

    // After phase 1, replace basic artificials by structural/slack columns
    // where possible; rows that admit none are redundant and keep a zero
    // artificial in the basis.
    void pivot_out_artificials(long& iterations) {
        for (int i = 0; i < rows_; ++i) {
            if (basis_[i] < art_begin_) continue;
            int enter = -1;
            for (int j = 0; j < art_begin_; ++j) {
                if (std::fabs(at(i, j)) > 1e-7) {
                    enter = j;
                    break;
                }
            }
            if (enter >= 0) {
                pivot(i, enter);
                ++iterations;
            }
        }
    }

    // Returns false on unboundedness.
    bool optimize(long& iterations, bool allow_art) {
        const int limit_cols = allow_art ? cols_ : art_begin_;
        const long bland_after = 2000 + 10L * rows_;
        long phase_iters = 0;
        long since_refactor = 0;
        while (true) {
            if (phase_iters > 500000)
                throw internal_error("lp_solve: iteration cap exceeded");
            if (since_refactor >= 1000) {
                refactor(allow_art);
                since_refactor = 0;
            }
#ifdef KSEP_LP_DEBUG
            if (phase_iters > 0 && phase_iters % 5000 == 0) {
                double minrc = 0;
                for (int j = 0; j < limit_cols; ++j) minrc = std::min(minrc, at(rows_, j));
                fprintf(stderr, "[lp] phase_iters=%ld obj=%.12g minrc=%.3g\n", phase_iters,
                        -at(rows_, cols_), minrc);
            }
#endif
            const bool bland = phase_iters > bland_after;
            int enter = -1;
            double best = -kPivotTol;
            for (int j = 0; j < limit_cols; ++j) {
                const double rc = at(rows_, j);
                if (rc < best) {
                    enter = j;
                    if (bland) break;
                    best = rc;
                }
                // barred: artificial columns in phase 2 handled by limit_cols
            }
            if (enter < 0) {  // looks optimal: confirm on a fresh tableau
                if (since_refactor == 0) return true;
                refactor(allow_art);
                since_refactor = 0;
                continue;
            }
            int leave = -1;
            // a basic artificial touched by the entering column must leave at
            // a zero-length step or it could grow away from zero
            if (!allow_art) {
                for (int i = 0; i < rows_; ++i) {
                    if (basis_[i] >= art_begin_ && std::fabs(at(i, enter)) > 1e-7) {
                        leave = i;
                        break;
                    }
                }
            }
            if (leave < 0) leave = ratio_test(enter, bland);
            if (leave < 0) {  // looks unbounded: confirm on a fresh tableau
                if (since_refactor == 0) return false;
                refactor(allow_art);
                since_refactor = 0;
                continue;
            }
            pivot(leave, enter);
            ++iterations;
            ++phase_iters;
            ++since_refactor;
        }
    }

    // Rebuild the tableau exactly from the original columns and the current
    // basis: invert B by Gauss-Jordan with partial pivoting, apply it to every
    // column, and re-derive the cost row for the current phase.
    void refactor(bool phase1) {
        const int r = rows_;
        if (r == 0) {
            if (phase1) set_phase1_costs(); else set_phase2_costs();
            return;
        }
        std::vector<double> binv(static_cast<std::size_t>(r) * r, 0.0);
        for (int i = 0; i < r; ++i) binv[static_cast<std::size_t>(i) * r + i] = 1.0;
        std::vector<double> bmat(static_cast<std::size_t>(r) * r, 0.0);
        for (int i = 0; i < r; ++i)
            for (auto [row, c] : orig_cols_[basis_[i]])
                bmat[static_cast<std::size_t>(row) * r + i] = c;
        for (int col = 0; col < r; ++col) {
            int piv = col;
            double best = std::fabs(bmat[static_cast<std::size_t>(col) * r + col]);
            for (int i = col + 1; i < r; ++i) {
                const double v = std::fabs(bmat[static_cast<std::size_t>(i) * r + col]);
                if (v > best) {
                    best = v;
                    piv = i;
                }
            }
            if (best < 1e-11) throw internal_error("lp_solve: singular basis in refactor");
            if (piv != col) {
                for (int j = 0; j < r; ++j) {
                    std::swap(bmat[static_cast<std::size_t>(piv) * r + j],
                              bmat[static_cast<std::size_t>(col) * r + j]);
                    std::swap(binv[static_cast<std::size_t>(piv) * r + j],
                              binv[static_cast<std::size_t>(col) * r + j]);
                }
            }
            const double inv = 1.0 / bmat[static_cast<std::size_t>(col) * r + col];
            for (int j = 0; j < r; ++j) {
                bmat[static_cast<std::size_t>(col) * r + j] *= inv;
                binv[static_cast<std::size_t>(col) * r + j] *= inv;
            }
            for (int i = 0; i < r; ++i) {
                if (i == col) continue;
                const double f = bmat[static_cast<std::size_t>(i) * r + col];
                if (f == 0.0) continue;
                for (int j = 0; j < r; ++j) {
                    bmat[static_cast<std::size_t>(i) * r + j] -=
                        f * bmat[static_cast<std::size_t>(col) * r + j];
                    binv[static_cast<std::size_t>(i) * r + j] -=
                        f * binv[static_cast<std::size_t>(col) * r + j];
                }
            }
        }
        // t = B^-1 [A | I], exploiting column sparsity
        std::fill(t_.begin(), t_.end(), 0.0);
        for (int j = 0; j < cols_; ++j) {
            for (auto [row, c] : orig_cols_[j]) {
                const double* bcol = &binv[0];
                for (int i = 0; i < rows_; ++i)
                    t_[static_cast<std::size_t>(i) * (cols_ + 1) + j] +=
                        bcol[static_cast<std::size_t>(i) * r + row] * c;
            }
        }
        for (int i = 0; i < rows_; ++i) {
            double v = 0.0;
            for (int row = 0; row < r; ++row)
                v += binv[static_cast<std::size_t>(i) * r + row] * orig_rhs_[row];
            at(i, cols_) = v;
        }
        // basic columns are unit vectors by construction; snap them exactly
        for (int i = 0; i < rows_; ++i) {
            for (int ii = 0; ii < rows_; ++ii) at(ii, basis_[i]) = (ii == i) ? 1.0 : 0.0;
        }
        if (phase1) set_phase1_costs(); else set_phase2_costs();
    }

    // Two-pass ratio test. Pass one finds the minimum ratio over acceptably
    // large pivot candidates (clamping roundoff-negative basic values keeps
    // degenerate pivots monotone); pass two picks the largest pivot element
    // among the near-ties, which keeps the tableau from blowing up. Under
    // Bland's rule the tie-break switches to the smallest basic index.
    int ratio_test(int enter, bool bland) const {
        constexpr double kAccept = 1e-7;
        for (int attempt = 0; attempt < 2; ++attempt) {
            const double eligible = attempt == 0 ? kAccept : kPivotTol;
            double min_ratio = -1.0;
            for (int i = 0; i < rows_; ++i) {
                const double a = at(i, enter);
                if (a > eligible) {
                    const double ratio = std::max(at(i, cols_), 0.0) / a;
                    if (min_ratio < 0.0 || ratio < min_ratio) min_ratio = ratio;
                }
            }
            if (min_ratio < 0.0) continue;  // retry with the tiny-pivot fallback
            const double window = min_ratio + 1e-9 * (1.0 + min_ratio);
            int leave = -1;
            double best_pivot = 0.0;
            for (int i = 0; i < rows_; ++i) {
                const double a = at(i, enter);
                if (a <= eligible) continue;
                const double ratio = std::max(at(i, cols_), 0.0) / a;
                if (ratio > window) continue;
                if (bland) {
                    if (leave < 0 || basis_[i] < basis_[leave]) leave = i;
                } else if (a > best_pivot) {
                    leave = i;
                    best_pivot = a;
                }
            }
            if (leave >= 0) return leave;
        }
        return -1;
    }

    void pivot(int pr, int pc) {
        const double pv = at(pr, pc);
        double* prow = &t_[static_cast<std::size_t>(pr) * (cols_ + 1)];
        const double inv = 1.0 / pv;
        for (int j = 0; j <= cols_; ++j) prow[j] *= inv;
        prow[pc] = 1.0;
        for (int i = 0; i <= rows_; ++i) {
            if (i == pr) continue;
            double* row = &t_[static_cast<std::size_t>(i) * (cols_ + 1)];
            const double f = row[pc];
            if (f == 0.0) continue;
            for (int j = 0; j <= cols_; ++j) row[j] -= f * prow[j];
            row[pc] = 0.0;
        }
        basis_[pr] = pc;
    }

    const LinearProgram& lp_;
    int n_ = 0, rows_ = 0, cols_ = 0, art_begin_ = 0;
    bool has_artificials_ = false;
    std::vector<double> t_;
    std::vector<int> basis_;
    std::vector<RowSense> senses_;
    std::vector<int> sign_;
    std::vector<int> attached_col_;
    std::vector<std::vector<std::pair<int, double>>> orig_cols_;  // sign-normalized
    std::vector<double> orig_rhs_;
};

}  // namespace lpdetail

// Solve min c'x subject to lp.rows, 0 <= x (<= upper bounds when given).
// Deterministic; infeasible/unbounded reported in the status.
inline LpSolution lp_solve(const LinearProgram& lp, double tol_feas = 1e-7) {
    LinearProgram work = lp;
    if (!lp.upper_bounds.empty()) {
        for (int j = 0; j < lp.num_vars; ++j) {
            const double ub = lp.upper_bounds[j];
            if (std::isfinite(ub)) work.add_row({{j, 1.0}}, RowSense::le, ub);
        }
        work.upper_bounds.clear();
    }
    const int total_rows = static_cast<int>(work.rows.size());
    LpSolution sol;

    // Lazy row activation for tall LPs: equality rows seed the active set.
    constexpr int kActivationThreshold = 900;
    std::vector<int> active;
    std::vector<char> is_active(total_rows, 0);
    if (total_rows > kActivationThreshold) {
        for (int i = 0; i < total_rows; ++i) {
            if (work.rows[i].sense == RowSense::eq) {
                active.push_back(i);
                is_active[i] = 1;
            }
        }
    } else {
        for (int i = 0; i < total_rows; ++i) active.push_back(i);
        std::fill(is_active.begin(), is_active.end(), 1);
    }

    while (true) {
        lpdetail::Simplex simplex(work, active);
        sol.status = simplex.solve(sol.iterations);
        if (sol.status == LpStatus::infeasible) return sol;  // subset infeasible => LP infeasible
        if (sol.status == LpStatus::unbounded) {
            if (active.size() == static_cast<std::size_t>(total_rows)) return sol;
            // activate everything and retry once
            for (int i = 0; i < total_rows; ++i)
                if (!is_active[i]) active.push_back(i);
            std::fill(is_active.begin(), is_active.end(), 1);
            continue;
        }
        sol.values = simplex.values();
        bool added = false;
        for (int i = 0; i < total_rows; ++i) {
            if (is_active[i]) continue;
            if (lpdetail::row_violation(work.rows[i], sol.values) > tol_feas * 0.5) {
                active.push_back(i);
                is_active[i] = 1;
                added = true;
            }
        }
        if (!added) {
            sol.row_duals.assign(lp.rows.size(), 0.0);
            const std::vector<double> local = simplex.duals();
            for (std::size_t i = 0; i < active.size(); ++i)
                if (active[i] < static_cast<int>(lp.rows.size()))
                    sol.row_duals[active[i]] = local[i];
            break;
        }
    }
    sol.objective = 0.0;
    for (auto [j, c] : lp.objective) sol.objective += c * sol.values[j];
    return sol;
}

// ---------------------------------------------------------------------------
// Cutting-plane driver.
//
// The oracle receives the current point and returns a row it violates by
// more than the oracle's own tolerance, or nullopt. Added rows stay in the
// program; the result carries the final LP so callers can inspect or warm
// up from the accumulated cuts.

using SeparationOracle =
    std::function<std::optional<LpRow>(const std::vector<double>&)>;

struct SeparationResult {
    LpSolution solution;
    LinearProgram lp;
    int rounds = 0;
    std::vector<double> objective_history;
};

inline SeparationResult lp_solve_with_separation(LinearProgram lp,
                                                 const SeparationOracle& oracle,
                                                 double tol, int max_rounds) {
    SeparationResult res;
    for (int round = 0;; ++round) {
        LpSolution sol = lp_solve(lp, std::min(tol, 1e-7));
        if (sol.status != LpStatus::optimal) {
            res.solution = sol;
            res.lp = std::move(lp);
            res.rounds = round;
            return res;
        }
        res.objective_history.push_back(sol.objective);
        auto cut = oracle(sol.values);
        if (!cut) {
            res.solution = std::move(sol);
            res.lp = std::move(lp);
            res.rounds = round;
            return res;
        }
        if (lpdetail::row_violation(*cut, sol.values) <= 0)
            throw internal_error("separation oracle returned a satisfied row");
        if (round >= max_rounds)
            throw convergence_error("cutting-plane driver: max_rounds exhausted",
                                    sol.values);
        lp.rows.push_back(std::move(*cut));
    }
}

// ---------------------------------------------------------------------------
// Debug dump in LP interchange text format (for external cross-checks).

inline std::string dump_lp(const LinearProgram& lp) {
    std::ostringstream out;
    out.precision(17);
    auto var = [](int j) { return "x" + std::to_string(j); };
    out << "Minimize\n obj:";
    for (auto [j, c] : lp.objective) out << (c >= 0 ? " + " : " - ") << std::fabs(c) << ' ' << var(j);
    out << "\nSubject To\n";
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        const LpRow& r = lp.rows[i];
        out << " c" << i << ":";
        for (auto [j, c] : r.coeffs) out << (c >= 0 ? " + " : " - ") << std::fabs(c) << ' ' << var(j);
        switch (r.sense) {
            case RowSense::le: out << " <= "; break;
            case RowSense::ge: out << " >= "; break;
            case RowSense::eq: out << " = "; break;
        }
        out << r.rhs << '\n';
    }
    out << "Bounds\n";
    for (int j = 0; j < lp.num_vars; ++j) {
        out << " 0 <= " << var(j);
        if (!lp.upper_bounds.empty() && std::isfinite(lp.upper_bounds[j]))
            out << " <= " << lp.upper_bounds[j];
        out << '\n';
    }
    out << "End\n";
    return out.str();
}

}  // namespace ksep

#endif  // KSEP_LP_HPP
