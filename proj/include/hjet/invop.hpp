#ifndef HJET_INVOP_HPP_
#define HJET_INVOP_HPP_

#include <stdexcept>
#include <vector>

#include "hjet/geometry.hpp"
#include "hjet/jets.hpp"
#include "hjet/matrix.hpp"
#include "hjet/ratfunc.hpp"

namespace hjet {

using RMatrix = Matrix<RatFunc>;
using RVector = std::vector<RatFunc>;

class InvopError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sum_i S^i(t) d_t^i, each S^i of shape target x source.
struct DiffOp {
  size_t source = 0;
  size_t target = 0;
  std::vector<RMatrix> coeffs;

  DiffOp() = default;
  DiffOp(size_t target_dim, size_t source_dim, size_t order);
  static DiffOp identity(size_t n);
  static DiffOp multiplication(const RMatrix& m);

  size_t order() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  // Highest level with a nonzero coefficient; 0 for the zero operator.
  size_t effective_order() const;
  bool is_identity() const;
  RVector apply(const RVector& f) const;
  // Coefficients evaluated at t.
  std::vector<QMatrix> at(const Rational& t) const;
  bool operator==(const DiffOp&) const = default;
};

RMatrix derivative(const RMatrix& m);
DiffOp op_compose(const DiffOp& s, const DiffOp& r);
DiffOp op_adjoint(const DiffOp& s);

// L_u = L^0 + L^1 d_t with L^1 = (lambda^s_mu o u) and
// L^0 = ((d_mu lambda^s_nu o u) d_t u^nu).
DiffOp linearization(const Distribution& d, const PolyCurve& u);

// A(t) for the curve, entries polynomial in t.
Matrix<UniPoly> regularity_matrix_along(const Distribution& d, const PolyCurve& u, size_t q);

struct InverseResult {
  DiffOp op;
  size_t q = 0;
  Rational t0;
  // Columns of A(t) used as the pivot minor, chosen leftmost at t0.
  std::vector<size_t> pivot_columns;
  UniPoly pivot_minor;
  // Open interval around t0 on which the pivot minor has no root; the whole
  // line when the minor is constant.
  bool whole_line = false;
  Rational lo, hi;
};

// S with S o L_u^dagger = Id near t0.
InverseResult solve_S(const Distribution& d, const PolyCurve& u, const Rational& t0, size_t q);
// M = S^dagger, so that L_u o M = Id near t0.
InverseResult build_M(const Distribution& d, const PolyCurve& u, const Rational& t0, size_t q);

}  // namespace hjet

#endif  // HJET_INVOP_HPP_
