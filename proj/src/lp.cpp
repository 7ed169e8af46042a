#include <polyban/lp.hpp>

#include <algorithm>

namespace polyban {
namespace {

// Standard-form tableau: maximize c.z subject to A z = b, z >= 0, b >= 0.
// Column layout: [x+ | x- (for free vars) | slacks | artificials].
// basis[r] is the column basic in row r.
class Tableau {
 public:
  Tableau(const Mat& a, const Vec& b, Eigen::Index ncols)
      : a_(a), b_(b), basis_(static_cast<size_t>(a.rows()), -1), ncols_(ncols) {}

  Eigen::Index rows() const { return a_.rows(); }
  const Vec& rhs() const { return b_; }
  const Mat& body() const { return a_; }
  int basic_in(Eigen::Index r) const { return basis_[static_cast<size_t>(r)]; }
  void set_basic(Eigen::Index r, int col) { basis_[static_cast<size_t>(r)] = col; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    const Rational piv = a_(r, c);
    a_.row(r) /= piv;
    b_(r) /= piv;
    for (Eigen::Index i = 0; i < a_.rows(); ++i) {
      if (i == r || a_(i, c) == 0) continue;
      const Rational m = a_(i, c);
      a_.row(i) -= m * a_.row(r);
      b_(i) -= m * b_(r);
    }
    basis_[static_cast<size_t>(r)] = static_cast<int>(c);
  }

  // Reduced costs for objective c over current basis: cbar = c - c_B B^-1 A,
  // computed by eliminating basic columns from a working copy of c.
  RowVec reduced_costs(const RowVec& c) const {
    RowVec cbar = c;
    for (Eigen::Index r = 0; r < a_.rows(); ++r) {
      const int bc = basis_[static_cast<size_t>(r)];
      if (bc < 0 || cbar(bc) == 0) continue;
      cbar -= cbar(bc) * a_.row(r);
    }
    return cbar;
  }

  Rational objective_value(const RowVec& c) const {
    Rational v = 0;
    for (Eigen::Index r = 0; r < a_.rows(); ++r) {
      const int bc = basis_[static_cast<size_t>(r)];
      if (bc >= 0) v += c(bc) * b_(r);
    }
    return v;
  }

  Vec solution(Eigen::Index upto) const {
    Vec z = Vec::Zero(ncols_);
    for (Eigen::Index r = 0; r < a_.rows(); ++r) {
      const int bc = basis_[static_cast<size_t>(r)];
      if (bc >= 0) z(bc) = b_(r);
    }
    return z.head(upto);
  }

  // Bland's rule on the given objective, restricted to columns < limit.
  // Returns Optimal or Unbounded; unbounded_col receives the offender.
  LpStatus run_simplex(const RowVec& c, Eigen::Index limit, Eigen::Index* unbounded_col) {
    for (;;) {
      RowVec cbar = reduced_costs(c);
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < limit; ++j) {
        if (cbar(j) > 0) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::Optimal;

      Eigen::Index leave = -1;
      Rational best_ratio = 0;
      for (Eigen::Index r = 0; r < a_.rows(); ++r) {
        if (a_(r, enter) <= 0) continue;
        const Rational ratio = b_(r) / a_(r, enter);
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio &&
             basis_[static_cast<size_t>(r)] < basis_[static_cast<size_t>(leave)])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave < 0) {
        if (unbounded_col) *unbounded_col = enter;
        return LpStatus::Unbounded;
      }
      pivot(leave, enter);
    }
  }

 private:
  Mat a_;
  Vec b_;
  std::vector<int> basis_;
  Eigen::Index ncols_;
};

struct StandardForm {
  Mat a;               // m x n, all equalities
  Vec b;               // >= 0
  RowVec c;            // phase-2 objective over structural+slack columns
  Eigen::Index nstruct = 0;  // structural columns (before artificials)
  std::vector<int> pos_col;  // original var -> x+ column
  std::vector<int> neg_col;  // original var -> x- column (-1 if nonneg)
  std::vector<Eigen::Index> art_rows;  // rows that need an artificial
};

StandardForm standardize(const LinearProgram& lp) {
  const Eigen::Index n = lp.nvars();
  const Eigen::Index m = static_cast<Eigen::Index>(lp.row_coeffs.size());
  StandardForm sf;
  sf.pos_col.assign(static_cast<size_t>(n), -1);
  sf.neg_col.assign(static_cast<size_t>(n), -1);

  Eigen::Index col = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    sf.pos_col[static_cast<size_t>(j)] = static_cast<int>(col++);
    const bool free_var = lp.nonneg.empty() || !lp.nonneg[static_cast<size_t>(j)];
    if (free_var) sf.neg_col[static_cast<size_t>(j)] = static_cast<int>(col++);
  }
  const Eigen::Index nvar_cols = col;
  // One slack per inequality row.
  Eigen::Index nslack = 0;
  for (Rel rel : lp.row_rels)
    if (rel != Rel::Eq) ++nslack;
  sf.nstruct = nvar_cols + nslack;

  sf.a = Mat::Zero(m, sf.nstruct);
  sf.b = Vec::Zero(m);
  Eigen::Index slack = nvar_cols;
  for (Eigen::Index r = 0; r < m; ++r) {
    RowVec row = lp.row_coeffs[static_cast<size_t>(r)];
    Rational rhs = lp.row_rhs[static_cast<size_t>(r)];
    Rel rel = lp.row_rels[static_cast<size_t>(r)];
    if (rel == Rel::Ge) {  // a.x >= b  ->  -a.x <= -b
      row = -row;
      rhs = -rhs;
      rel = Rel::Le;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const Rational v = row(j);
      if (v == 0) continue;
      sf.a(r, sf.pos_col[static_cast<size_t>(j)]) = v;
      if (sf.neg_col[static_cast<size_t>(j)] >= 0)
        sf.a(r, sf.neg_col[static_cast<size_t>(j)]) = -v;
    }
    if (rel == Rel::Le) {
      sf.a(r, slack) = 1;
      ++slack;
    }
    sf.b(r) = rhs;
  }
  // Make b >= 0 row by row.
  for (Eigen::Index r = 0; r < m; ++r) {
    if (sf.b(r) < 0) {
      sf.a.row(r) = -sf.a.row(r);
      sf.b(r) = -sf.b(r);
    }
  }
  sf.c = RowVec::Zero(sf.nstruct);
  for (Eigen::Index j = 0; j < n; ++j) {
    sf.c(sf.pos_col[static_cast<size_t>(j)]) = lp.objective(j);
    if (sf.neg_col[static_cast<size_t>(j)] >= 0)
      sf.c(sf.neg_col[static_cast<size_t>(j)]) = -lp.objective(j);
  }
  return sf;
}

Vec recover_point(const StandardForm& sf, const Vec& z, Eigen::Index n) {
  Vec x(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Rational v = z(sf.pos_col[static_cast<size_t>(j)]);
    if (sf.neg_col[static_cast<size_t>(j)] >= 0)
      v -= z(sf.neg_col[static_cast<size_t>(j)]);
    x(j) = v;
  }
  return x;
}

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
  const Eigen::Index n = lp.nvars();
  const Eigen::Index m = static_cast<Eigen::Index>(lp.row_coeffs.size());
  StandardForm sf = standardize(lp);

  // Identify rows whose slack can serve as the initial basic variable
  // (Le rows that were not sign-flipped); the rest get artificials.
  std::vector<int> initial_basis(static_cast<size_t>(m), -1);
  {
    // A slack column serves iff its coefficient is +1 after sign fixing.
    for (Eigen::Index col = 0; col < sf.nstruct; ++col) {
      // slack columns are unit columns by construction; detect them.
      Eigen::Index nz = -1;
      bool unit = true;
      for (Eigen::Index r = 0; r < m; ++r) {
        if (sf.a(r, col) == 0) continue;
        if (nz >= 0 || (sf.a(r, col) != 1 && sf.a(r, col) != -1)) {
          unit = false;
          break;
        }
        nz = r;
      }
      if (unit && nz >= 0 && sf.a(nz, col) == 1 && initial_basis[static_cast<size_t>(nz)] < 0) {
        // Only adopt genuine slack columns (beyond the variable block).
        bool is_slack = true;
        for (Eigen::Index j = 0; j < n; ++j) {
          if (col == sf.pos_col[static_cast<size_t>(j)] ||
              col == sf.neg_col[static_cast<size_t>(j)]) {
            is_slack = false;
            break;
          }
        }
        if (is_slack) initial_basis[static_cast<size_t>(nz)] = static_cast<int>(col);
      }
    }
  }
  Eigen::Index nart = 0;
  for (Eigen::Index r = 0; r < m; ++r)
    if (initial_basis[static_cast<size_t>(r)] < 0) ++nart;

  const Eigen::Index total = sf.nstruct + nart;
  Mat a = Mat::Zero(m, total);
  a.leftCols(sf.nstruct) = sf.a;
  {
    Eigen::Index art = sf.nstruct;
    for (Eigen::Index r = 0; r < m; ++r) {
      if (initial_basis[static_cast<size_t>(r)] < 0) {
        a(r, art) = 1;
        initial_basis[static_cast<size_t>(r)] = static_cast<int>(art);
        ++art;
      }
    }
  }

  Tableau tab(a, sf.b, total);
  for (Eigen::Index r = 0; r < m; ++r) tab.set_basic(r, initial_basis[static_cast<size_t>(r)]);

  LpResult res;

  if (nart > 0) {
    RowVec phase1 = RowVec::Zero(total);
    for (Eigen::Index j = sf.nstruct; j < total; ++j) phase1(j) = -1;
    tab.run_simplex(phase1, total, nullptr);
    if (tab.objective_value(phase1) != 0) {
      res.status = LpStatus::Infeasible;
      return res;
    }
    // Pivot lingering artificials out of the basis (or drop redundant rows
    // implicitly: a zero row with a basic artificial stays harmlessly basic
    // at value 0 as long as its column is never re-entered).
    for (Eigen::Index r = 0; r < m; ++r) {
      if (tab.basic_in(r) >= sf.nstruct) {
        for (Eigen::Index j = 0; j < sf.nstruct; ++j) {
          if (tab.body()(r, j) != 0) {
            tab.pivot(r, j);
            break;
          }
        }
      }
    }
  }

  RowVec phase2 = RowVec::Zero(total);
  phase2.head(sf.nstruct) = sf.c;
  Eigen::Index unbounded_col = -1;
  const LpStatus st = tab.run_simplex(phase2, sf.nstruct, &unbounded_col);
  if (st == LpStatus::Unbounded) {
    res.status = LpStatus::Unbounded;
    res.point = recover_point(sf, tab.solution(sf.nstruct), n);
    // Recession direction: entering column's ray in structural space.
    Vec zray = Vec::Zero(sf.nstruct);
    zray(unbounded_col) = 1;
    for (Eigen::Index r = 0; r < tab.rows(); ++r) {
      const int bc = tab.basic_in(r);
      if (bc >= 0 && bc < sf.nstruct) zray(bc) = -tab.body()(r, unbounded_col);
    }
    res.ray = recover_point(sf, zray, n);
    return res;
  }

  res.status = LpStatus::Optimal;
  res.point = recover_point(sf, tab.solution(sf.nstruct), n);
  res.value = lp.objective.dot(res.point);
  return res;
}

std::optional<Vec> lp_feasible_point(const LinearProgram& lp) {
  LinearProgram probe = lp;
  probe.objective.setZero();
  LpResult r = solve_lp(probe);
  if (r.status == LpStatus::Optimal) return r.point;
  return std::nullopt;
}

}  // namespace polyban
