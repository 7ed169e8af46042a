#ifndef POLYBAN_LP_HPP
#define POLYBAN_LP_HPP

#include <polyban/rational.hpp>

#include <vector>

namespace polyban {

enum class Rel { Le, Eq, Ge };

/// maximize objective . x subject to the rows. Variables are free unless
/// marked nonneg. All data rational, all pivoting exact; the solver is a
/// two-phase primal simplex with Bland's rule, so it terminates on every
/// instance.
struct LinearProgram {
  Vec objective;
  std::vector<RowVec> row_coeffs;
  std::vector<Rel> row_rels;
  std::vector<Rational> row_rhs;
  std::vector<bool> nonneg;  // empty means all free

  explicit LinearProgram(Eigen::Index nvars)
      : objective(Vec::Zero(nvars)), nonneg(static_cast<size_t>(nvars), false) {}

  Eigen::Index nvars() const { return objective.size(); }

  void add_row(const RowVec& a, Rel rel, const Rational& b) {
    if (a.size() != nvars()) throw std::invalid_argument("LP row has wrong arity");
    row_coeffs.push_back(a);
    row_rels.push_back(rel);
    row_rhs.push_back(b);
  }
};

enum class LpStatus { Optimal, Unbounded, Infeasible };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;  // optimal objective value (Optimal only)
  Vec point;       // optimizer (Optimal), or a feasible point (Unbounded)
  Vec ray;         // improving recession direction (Unbounded only)
};

LpResult solve_lp(const LinearProgram& lp);

/// Phase-1 only: a point satisfying every row, if one exists.
std::optional<Vec> lp_feasible_point(const LinearProgram& lp);

}  // namespace polyban

#endif  // POLYBAN_LP_HPP
