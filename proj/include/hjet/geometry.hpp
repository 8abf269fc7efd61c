#ifndef HJET_GEOMETRY_HPP_
#define HJET_GEOMETRY_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hjet/matrix.hpp"
#include "hjet/multipoly.hpp"

namespace hjet {

using QVector = std::vector<Rational>;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// X = X^mu d_mu with polynomial coefficients in y^1..y^N.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(std::vector<MultiPoly> coeffs);
  static VectorField zero(size_t dim);
  static VectorField constant(const QVector& v);
  static VectorField coordinate(size_t dim, size_t mu);

  size_t dim() const { return c_.size(); }
  const MultiPoly& operator[](size_t mu) const { return c_.at(mu); }
  const std::vector<MultiPoly>& coefficients() const { return c_; }
  bool is_zero() const;

  // Directional derivative X(f).
  MultiPoly apply(const MultiPoly& f) const;
  QVector at(const QVector& point) const;

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(const MultiPoly& f, const VectorField& x);
  friend VectorField operator*(const Rational& c, const VectorField& x);
  friend bool operator==(const VectorField&, const VectorField&) = default;

  std::string to_string(const VarNames& names) const;

 private:
  std::vector<MultiPoly> c_;
};

// lambda = lambda_mu dy^mu with polynomial coefficients.
class OneForm {
 public:
  OneForm() = default;
  explicit OneForm(std::vector<MultiPoly> coeffs);

  size_t dim() const { return c_.size(); }
  const MultiPoly& operator[](size_t mu) const { return c_.at(mu); }
  const std::vector<MultiPoly>& coefficients() const { return c_; }

  MultiPoly pair(const VectorField& x) const;
  Rational pair_at(const QVector& point, const QVector& v) const;
  QVector at(const QVector& point) const;
  // Coefficient of dlambda on dy^nu ^ dy^mu: d_nu lambda_mu - d_mu lambda_nu.
  MultiPoly d_coefficient(size_t nu, size_t mu) const;
  // Pointwise dlambda|_x(a, b).
  Rational d_at(const QVector& point, const QVector& a, const QVector& b) const;

  OneForm& operator+=(const OneForm& o);
  friend OneForm operator*(const Rational& c, const OneForm& l);
  friend bool operator==(const OneForm&, const OneForm&) = default;

  std::string to_string(const VarNames& names) const;

 private:
  std::vector<MultiPoly> c_;
};

// [X, Y]^mu = X^nu d_nu Y^mu - Y^nu d_nu X^mu.
VectorField lie_bracket(const VectorField& x, const VectorField& y);

// dlambda(X, Y) = X(lambda(Y)) - Y(lambda(X)) - lambda([X, Y]).
MultiPoly d_oneform_eval(const OneForm& lambda, const VectorField& x, const VectorField& y);

// Corank-p distribution on R^N cut out by p polynomial one-forms, with
// polynomial spanning fields and a rational base point.
class Distribution {
 public:
  // Spanning fields are derived from the coframe near the base point.
  static Distribution from_coframe(std::vector<OneForm> coframe, QVector base_point, size_t dim);
  // Generators must annihilate the coframe identically and span its kernel at
  // the base point.
  static Distribution with_generators(std::vector<OneForm> coframe, std::vector<VectorField> generators,
                                      QVector base_point, size_t dim);

  size_t ambient_dim() const { return dim_; }
  size_t rank() const { return dim_ - coframe_.size(); }
  size_t corank() const { return coframe_.size(); }
  const std::vector<OneForm>& coframe() const { return coframe_; }
  const std::vector<VectorField>& generators() const { return generators_; }
  const QVector& base_point() const { return base_; }

  // p x N matrix of coframe values at a point (Lambda at the base point).
  QMatrix coframe_at(const QVector& point) const;
  QMatrix coframe_at_base() const { return coframe_at(base_); }

  // Same distribution with the coframe replaced by G * coframe, G invertible.
  Distribution recombined(const QMatrix& g) const;

 private:
  Distribution() = default;
  void validate_coframe() const;

  size_t dim_ = 0;
  std::vector<OneForm> coframe_;
  std::vector<VectorField> generators_;
  QVector base_;
};

// Spanning fields of ker(coframe) near `point`: for the leftmost pivot columns
// J of Lambda(point) and each free column k, e_k - Lambda_J^{-1} Lambda_k
// scaled by det Lambda_J so the coefficients stay polynomial.
std::vector<VectorField> spanning_fields(const std::vector<OneForm>& coframe, const QVector& point, size_t dim);

// Type m = (m_0 = 0, m_1 = n, ..., m_{r+1} = N) with jumps p_s = m_{s+1} - m_s
// for s >= 1 and p_0 = 0.
class GrowthVector {
 public:
  GrowthVector() = default;
  explicit GrowthVector(std::vector<int> m);
  // Comma separated, e.g. "0,10,12,14".
  static GrowthVector parse(const std::string& text);

  const std::vector<int>& values() const { return m_; }
  int step() const { return static_cast<int>(m_.size()) - 2; }
  int rank() const { return m_[1]; }
  int ambient_dim() const { return m_.back(); }
  int corank() const { return ambient_dim() - rank(); }
  int jump(int s) const;
  // Drops levels with zero jump.
  GrowthVector compressed() const;
  bool has_zero_jump() const;
  std::string to_string() const;
  friend bool operator==(const GrowthVector&, const GrowthVector&) = default;

 private:
  std::vector<int> m_;
};

struct FlagResult {
  // ranks[i] = dim D^i_x for i = 0..levels.
  std::vector<int> ranks;
  bool bracket_generating = false;
  // fields[i] holds the generators introduced at flag level i+1; level 1 is
  // the spanning set of D, level i+1 the brackets [D, level i].
  std::vector<std::vector<VectorField>> fields;
  // basis[i]: columns spanning D^{i+1}_x.
  std::vector<QMatrix> basis;

  GrowthVector growth_vector() const;
};

// D^{i+1} = D^i + [D, D^i] evaluated at the base point; stops when the
// evaluated rank stabilizes, reaches N, or after max_step bracket steps.
FlagResult flag_at_point(const Distribution& d, int max_step);
inline int default_max_step(const Distribution& d) { return static_cast<int>(2 * d.ambient_dim()); }

enum class PairOrder { kForward, kReverse };

// Vectors tau^{s,j} in D_x, eta^{s,j} in D^s_x, zeta^{s,j} in D^{s+1}_x and
// the recombined coframe lambda^{s,j}, indexed [s-1][j-1].
struct AdaptedFrameData {
  GrowthVector type;
  std::vector<std::vector<QVector>> tau, eta, zeta;
  std::vector<std::vector<VectorField>> tau_field, eta_field;
  // [tau~, eta~]_x for the selected extensions.
  std::vector<std::vector<QVector>> bracket_at_x;
  std::vector<std::vector<OneForm>> lambda;
  // lambda^{s,j} rows = recombination * input coframe.
  QMatrix recombination;
  bool duality_ok = false;
  bool triangular_ok = false;

  // zeta^bullet = (zeta^{1,.}, ..., zeta^{r,.}) and matching flat lambda.
  std::vector<QVector> zeta_flat() const;
  std::vector<OneForm> lambda_flat() const;
  // Offset of level s (1-based) inside the flat ordering.
  size_t level_offset(int s) const;
  // p x p matrix lambda^{s,j}(zeta^{s',j'}) at x.
  QMatrix duality_matrix(const QVector& x) const;
};

// Greedy selection of bracket pairs framing D^{s+1}_x / D^s_x for each step.
// `requested` may repeat ranks (zero jumps); those steps get no vectors.
AdaptedFrameData adapted_frame(const Distribution& d, const FlagResult& flag,
                               PairOrder order = PairOrder::kForward,
                               const std::optional<GrowthVector>& requested = std::nullopt);

}  // namespace hjet

#endif  // HJET_GEOMETRY_HPP_
