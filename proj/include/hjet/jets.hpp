#ifndef HJET_JETS_HPP_
#define HJET_JETS_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hjet/geometry.hpp"
#include "hjet/matrix.hpp"
#include "hjet/ratfunc.hpp"

namespace hjet {

class JetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// (t0, D^0 = u(t0), D^1 = u'(t0), ..., D^{alpha+1}) with N-vector entries
// over S (Rational, or MultiPoly in the indeterminates X_1..X_alpha).
template <class S>
struct CurveJet {
  Rational t0 = 0;
  std::vector<std::vector<S>> d;

  size_t order() const { return d.empty() ? 0 : d.size() - 1; }
  size_t dim() const { return d.empty() ? 0 : d[0].size(); }
  CurveJet truncated(size_t order) const;
  bool operator==(const CurveJet&) const = default;
};

using QJet = CurveJet<Rational>;
using PolyJet = CurveJet<MultiPoly>;

PolyJet to_poly_jet(const QJet& jet);
// Substitutes X_{k+1} = values[k]; every indeterminate must be assigned.
QJet specialize(const PolyJet& jet, const std::vector<Rational>& values);

// u(t) with one univariate polynomial per coordinate.
class PolyCurve {
 public:
  PolyCurve() = default;
  explicit PolyCurve(std::vector<UniPoly> components) : c_(std::move(components)) {}

  size_t dim() const { return c_.size(); }
  const UniPoly& operator[](size_t mu) const { return c_.at(mu); }
  const std::vector<UniPoly>& components() const { return c_; }
  QVector at(const Rational& t) const;
  PolyCurve derivative() const;
  QJet jet(const Rational& t0, size_t order) const;

 private:
  std::vector<UniPoly> c_;
};

// Label of tau^q: zero, one of the adapted-frame vectors tau^{s,j}, or an
// explicit rational vector in D_x.
struct TauLabel {
  enum class Kind { kZero, kTau, kVector };
  Kind kind = Kind::kZero;
  int s = 0;
  int j = 0;
  QVector vector;

  static TauLabel zero() { return {}; }
  static TauLabel tau(int s, int j) { return {Kind::kTau, s, j, {}}; }
  static TauLabel explicit_vector(QVector v) { return {Kind::kVector, 0, 0, std::move(v)}; }
  bool is_zero() const { return kind == Kind::kZero; }
  std::string to_string() const;
  bool operator==(const TauLabel&) const = default;
};

class TauAssignment {
 public:
  void set(int q, TauLabel label);
  // Zero when unset.
  TauLabel at(int q) const;
  const std::map<int, TauLabel>& entries() const { return labels_; }
  // Levels q with a nonzero label, ascending.
  std::vector<int> nonzero_levels() const;
  bool operator==(const TauAssignment&) const = default;
  QVector resolve(int q, const AdaptedFrameData* frame, size_t dim) const;

 private:
  std::map<int, TauLabel> labels_;
};

// Entry (s, k) = d_t^k ((lambda^s_mu o u) d_t u^mu) at t0 for 0 <= k <= alpha,
// where the jet has order alpha + 1.
template <class S>
Matrix<S> pullback_jet(const std::vector<OneForm>& coframe, const CurveJet<S>& jet);

// Level r solve: D^{r+1} = Rinv (-lower order terms) + K free[r-1], with
// Rinv the leftmost-pivot right inverse and K the RREF kernel basis of
// Lambda = coframe at the base point. `free` holds n-vectors for levels
// 1..alpha; missing levels are zero.
template <class S>
CurveJet<S> tangency_solve(const Distribution& d, const std::vector<S>& first_jet, size_t alpha,
                           const std::vector<std::vector<S>>& free = {});

// Tangency solve with the free part at level q equal to X_q tau^q, X_q the
// indeterminate with index q-1.
PolyJet symbolic_fiber(const Distribution& d, const QVector& first_jet, size_t alpha, const TauAssignment& tau,
                       const AdaptedFrameData* frame);

VarNames x_names(size_t count);

}  // namespace hjet

#endif  // HJET_JETS_HPP_
