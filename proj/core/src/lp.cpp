#include "chorefair/lp.hpp"

#include "chorefair/errors.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace chorefair {

namespace {

struct Row {
  std::vector<Rational> coeff;
  Relation relation = Relation::LessEqual;
  Rational rhs;
  bool active = true;
};

struct Reduced {
  std::vector<Rational> lower, upper;
  std::vector<bool> fixed;
  std::vector<Row> rows;
  bool infeasible = false;
};

void check_shape(const LinearSystem& system) {
  const auto vars = static_cast<std::size_t>(system.variable_count);
  if (system.variable_count < 0 || system.lower.size() != vars ||
      system.upper.size() != vars) {
    throw std::invalid_argument("bound vectors do not match variable count");
  }
  for (const LinearConstraint& c : system.constraints) {
    if (c.coefficients.size() != vars) {
      throw std::invalid_argument("constraint width does not match variable count");
    }
  }
}

bool relation_holds(const Rational& lhs, Relation relation,
                    const Rational& rhs) {
  switch (relation) {
    case Relation::LessEqual:
      return lhs <= rhs;
    case Relation::Equal:
      return lhs == rhs;
    case Relation::GreaterEqual:
      return lhs >= rhs;
  }
  return false;
}

// Exact fixpoint presolve: drop empty rows (checking their truth), turn
// singleton rows into bound updates, substitute variables whose bounds
// have collapsed to a point. Every step preserves the solution set of
// the remaining system plus recorded fixings.
void presolve(Reduced& r) {
  const std::size_t vars = r.lower.size();
  std::vector<bool> substituted(vars, false);
  bool changed = true;
  while (changed && !r.infeasible) {
    changed = false;
    for (std::size_t v = 0; v < vars; ++v) {
      if (r.lower[v] > r.upper[v]) {
        r.infeasible = true;
        return;
      }
      if (!substituted[v] && r.lower[v] == r.upper[v]) {
        substituted[v] = true;
        r.fixed[v] = true;
        for (Row& row : r.rows) {
          if (!row.active || row.coeff[v] == 0) continue;
          row.rhs -= row.coeff[v] * r.lower[v];
          row.coeff[v] = 0;
        }
        changed = true;
      }
    }
    for (Row& row : r.rows) {
      if (!row.active) continue;
      std::size_t nonzero = 0;
      std::size_t last = 0;
      for (std::size_t v = 0; v < vars; ++v) {
        if (row.coeff[v] != 0) {
          ++nonzero;
          last = v;
          if (nonzero > 1) break;
        }
      }
      if (nonzero == 0) {
        if (!relation_holds(Rational(0), row.relation, row.rhs)) {
          r.infeasible = true;
          return;
        }
        row.active = false;
        changed = true;
      } else if (nonzero == 1) {
        const Rational a = row.coeff[last];
        const Rational bound = row.rhs / a;
        const bool upper_bound =
            (row.relation == Relation::LessEqual && a > 0) ||
            (row.relation == Relation::GreaterEqual && a < 0);
        const bool lower_bound =
            (row.relation == Relation::GreaterEqual && a > 0) ||
            (row.relation == Relation::LessEqual && a < 0);
        if (row.relation == Relation::Equal) {
          if (bound > r.lower[last]) r.lower[last] = bound;
          if (bound < r.upper[last]) r.upper[last] = bound;
        } else if (upper_bound) {
          if (bound < r.upper[last]) r.upper[last] = bound;
        } else if (lower_bound) {
          if (bound > r.lower[last]) r.lower[last] = bound;
        }
        row.active = false;
        changed = true;
      }
    }
  }
}

// Phase-one simplex on rows over shifted variables y = x - lower >= 0.
// Returns the y-values of the free variables, or nullopt if infeasible.
class PhaseOne {
 public:
  PhaseOne(const Reduced& r, const std::vector<std::size_t>& free_vars,
           bool skip_implied_upper)
      : free_vars_(free_vars) {
    const std::size_t q = free_vars_.size();

    // Shifted rows: sum a * y REL rhs', with >= rows negated to <=.
    struct ShiftedRow {
      std::vector<Rational> coeff;
      bool equality = false;
      Rational rhs;
    };
    std::vector<ShiftedRow> shifted;
    for (const Row& row : r.rows) {
      if (!row.active) continue;
      ShiftedRow s;
      s.coeff.resize(q);
      s.rhs = row.rhs;
      const bool flip = row.relation == Relation::GreaterEqual;
      s.equality = row.relation == Relation::Equal;
      for (std::size_t c = 0; c < q; ++c) {
        const std::size_t v = free_vars_[c];
        s.coeff[c] = flip ? -row.coeff[v] : row.coeff[v];
        s.rhs -= row.coeff[v] * r.lower[v];  // shift by x = y + lower first
      }
      if (flip) s.rhs = -s.rhs;  // ... then negate the whole shifted row
      shifted.push_back(std::move(s));
    }

    // y_c <= upper - lower, unless some all-nonnegative row already
    // implies a bound at least that tight.
    for (std::size_t c = 0; c < q; ++c) {
      const std::size_t v = free_vars_[c];
      const Rational span = r.upper[v] - r.lower[v];
      bool implied = false;
      if (skip_implied_upper) {
        for (const ShiftedRow& s : shifted) {
          if (s.coeff[c] <= 0) continue;
          bool all_nonneg = true;
          for (const Rational& a : s.coeff) {
            if (a < 0) {
              all_nonneg = false;
              break;
            }
          }
          if (all_nonneg && s.rhs / s.coeff[c] <= span) {
            implied = true;
            break;
          }
        }
      }
      if (!implied) {
        ShiftedRow s;
        s.coeff.resize(q);
        s.coeff[c] = 1;
        s.rhs = span;
        shifted.push_back(std::move(s));
      }
    }

    // Tableau: columns = y variables, slacks, artificials; rhs kept
    // non-negative so slacks/artificials can start as the basis.
    const std::size_t row_count = shifted.size();
    std::size_t slack_count = 0;
    for (const ShiftedRow& s : shifted) {
      if (!s.equality) ++slack_count;
    }
    cols_ = q + slack_count;  // artificial columns appended below
    table_.assign(row_count, {});
    basis_.assign(row_count, 0);
    rhs_.assign(row_count, Rational(0));

    std::size_t next_slack = q;
    std::vector<std::size_t> needs_artificial;
    for (std::size_t rI = 0; rI < row_count; ++rI) {
      ShiftedRow& s = shifted[rI];
      const bool negate = s.rhs < 0;
      table_[rI].assign(cols_, Rational(0));
      for (std::size_t c = 0; c < q; ++c) {
        table_[rI][c] = negate ? -s.coeff[c] : s.coeff[c];
      }
      rhs_[rI] = negate ? -s.rhs : s.rhs;
      if (!s.equality) {
        table_[rI][next_slack] = negate ? Rational(-1) : Rational(1);
        if (!negate) {
          basis_[rI] = next_slack;
        } else {
          needs_artificial.push_back(rI);
        }
        ++next_slack;
      } else {
        needs_artificial.push_back(rI);
      }
    }
    artificial_start_ = cols_;
    cols_ += needs_artificial.size();
    for (auto& row : table_) row.resize(cols_, Rational(0));
    for (std::size_t a = 0; a < needs_artificial.size(); ++a) {
      const std::size_t rI = needs_artificial[a];
      table_[rI][artificial_start_ + a] = 1;
      basis_[rI] = artificial_start_ + a;
    }
  }

  std::optional<std::vector<Rational>> run() {
    while (true) {
      // Reduced phase-one costs: entering any non-artificial column
      // with a positive score strictly decreases the artificial sum.
      std::size_t entering = cols_;
      for (std::size_t c = 0; c < artificial_start_; ++c) {
        Rational score(0);
        for (std::size_t rI = 0; rI < table_.size(); ++rI) {
          if (basis_[rI] >= artificial_start_ && table_[rI][c] != 0) {
            score += table_[rI][c];
          }
        }
        if (score > 0) {
          entering = c;  // Bland: smallest improving column index
          break;
        }
      }
      if (entering == cols_) break;

      std::size_t leaving = table_.size();
      Rational best_ratio(0);
      for (std::size_t rI = 0; rI < table_.size(); ++rI) {
        if (table_[rI][entering] <= 0) continue;
        const Rational ratio = rhs_[rI] / table_[rI][entering];
        if (leaving == table_.size() || ratio < best_ratio ||
            (ratio == best_ratio && basis_[rI] < basis_[leaving])) {
          leaving = rI;
          best_ratio = ratio;
        }
      }
      if (leaving == table_.size()) {
        // The artificial sum is bounded below by zero, so an
        // unbounded improving direction cannot exist.
        throw InternalInvariantViolation("phase-one ray detected");
      }
      pivot(leaving, entering);
    }

    Rational artificial_sum(0);
    for (std::size_t rI = 0; rI < table_.size(); ++rI) {
      if (basis_[rI] >= artificial_start_) artificial_sum += rhs_[rI];
    }
    if (artificial_sum != 0) return std::nullopt;

    std::vector<Rational> y(free_vars_.size(), Rational(0));
    for (std::size_t rI = 0; rI < table_.size(); ++rI) {
      if (basis_[rI] < y.size()) y[basis_[rI]] = rhs_[rI];
    }
    return y;
  }

 private:
  void pivot(std::size_t row, std::size_t col) {
    const Rational p = table_[row][col];
    for (Rational& a : table_[row]) a /= p;
    rhs_[row] /= p;
    for (std::size_t rI = 0; rI < table_.size(); ++rI) {
      if (rI == row || table_[rI][col] == 0) continue;
      const Rational factor = table_[rI][col];
      for (std::size_t c = 0; c < cols_; ++c) {
        if (table_[row][c] != 0) table_[rI][c] -= factor * table_[row][c];
      }
      rhs_[rI] -= factor * rhs_[row];
    }
    basis_[row] = col;
  }

  std::vector<std::size_t> free_vars_;
  std::vector<std::vector<Rational>> table_;
  std::vector<Rational> rhs_;
  std::vector<std::size_t> basis_;
  std::size_t cols_ = 0;
  std::size_t artificial_start_ = 0;
};

}  // namespace

bool satisfies(const LinearSystem& system, const std::vector<Rational>& point) {
  check_shape(system);
  if (point.size() != static_cast<std::size_t>(system.variable_count)) {
    return false;
  }
  for (std::size_t v = 0; v < point.size(); ++v) {
    if (point[v] < system.lower[v] || point[v] > system.upper[v]) return false;
  }
  for (const LinearConstraint& c : system.constraints) {
    Rational lhs(0);
    for (std::size_t v = 0; v < point.size(); ++v) {
      if (c.coefficients[v] != 0) lhs += c.coefficients[v] * point[v];
    }
    if (!relation_holds(lhs, c.relation, c.rhs)) return false;
  }
  return true;
}

FeasibilityResult feasible(const LinearSystem& system,
                           const SolveOptions& options) {
  check_shape(system);

  Reduced reduced;
  reduced.lower = system.lower;
  reduced.upper = system.upper;
  reduced.fixed.assign(static_cast<std::size_t>(system.variable_count), false);
  for (const LinearConstraint& c : system.constraints) {
    reduced.rows.push_back(Row{c.coefficients, c.relation, c.rhs, true});
  }

  if (options.presolve) {
    presolve(reduced);
  } else {
    for (std::size_t v = 0; v < reduced.lower.size(); ++v) {
      if (reduced.lower[v] > reduced.upper[v]) reduced.infeasible = true;
    }
  }
  if (reduced.infeasible) return {false, {}};

  std::vector<std::size_t> free_vars;
  for (std::size_t v = 0; v < reduced.lower.size(); ++v) {
    if (!reduced.fixed[v]) free_vars.push_back(v);
  }

  PhaseOne simplex(reduced, free_vars, options.presolve);
  const auto y = simplex.run();
  if (!y) return {false, {}};

  std::vector<Rational> point(reduced.lower.size());
  for (std::size_t v = 0; v < point.size(); ++v) point[v] = reduced.lower[v];
  for (std::size_t c = 0; c < free_vars.size(); ++c) {
    point[free_vars[c]] += (*y)[c];
  }
  if (!satisfies(system, point)) {
    throw InternalInvariantViolation(
        "simplex produced a point that fails the exact recheck");
  }
  return {true, std::move(point)};
}

}  // namespace chorefair
