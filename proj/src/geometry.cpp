#include "hjet/geometry.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "hjet/linalg.hpp"

namespace hjet {

namespace {

std::vector<MultiPoly> with_arity(std::vector<MultiPoly> c, const char* what) {
  const auto dim = static_cast<uint32_t>(c.size());
  for (auto& p : c) {
    for (uint32_t v : p.variables())
      if (v >= dim) throw GeometryError(std::string(what) + " coefficient uses a variable beyond the ambient dimension");
    p.extend_nvars(dim);
  }
  return c;
}

void require_same_dim(size_t a, size_t b) {
  if (a != b) throw GeometryError("arity mismatch");
}

QMatrix columns_of(const std::vector<QVector>& vs, size_t dim) {
  QMatrix m(dim, vs.size());
  for (size_t j = 0; j < vs.size(); ++j)
    for (size_t i = 0; i < dim; ++i) m(i, j) = vs[j][i];
  return m;
}

bool is_zero_vector(const QVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return is_zero(x); });
}

// Incremental echelon basis of a Q-span of vector fields, used to discard
// brackets that are Q-linear combinations of earlier ones.
class FieldSpan {
 public:
  bool insert(const VectorField& x) {
    Row row = flatten(x);
    reduce(row);
    if (row.empty()) return false;
    const Key pivot = row.rbegin()->first;
    rows_.emplace(pivot, std::move(row));
    return true;
  }

 private:
  struct KeyLess {
    bool operator()(const std::pair<size_t, Monomial>& a, const std::pair<size_t, Monomial>& b) const {
      if (a.first != b.first) return a.first < b.first;
      return DegLexLess{}(a.second, b.second);
    }
  };
  using Key = std::pair<size_t, Monomial>;
  using Row = std::map<Key, Rational, KeyLess>;

  static Row flatten(const VectorField& x) {
    Row row;
    for (size_t mu = 0; mu < x.dim(); ++mu)
      for (const auto& [m, c] : x[mu].terms()) row.emplace(Key{mu, m}, c);
    return row;
  }

  void reduce(Row& row) const {
    while (!row.empty()) {
      auto top = std::prev(row.end());
      auto it = rows_.find(top->first);
      if (it == rows_.end()) return;
      const Rational f = top->second / it->second.rbegin()->second;
      for (const auto& [k, c] : it->second) {
        Rational& dst = row[k];
        dst -= f * c;
        if (is_zero(dst)) row.erase(k);
      }
    }
  }

  std::map<Key, Row, KeyLess> rows_;
};

std::string vector_terms(const std::vector<MultiPoly>& c, const VarNames& names, const std::string& basis) {
  std::ostringstream out;
  bool first = true;
  for (size_t mu = 0; mu < c.size(); ++mu) {
    if (c[mu].is_zero()) continue;
    if (!first) out << " + ";
    first = false;
    out << "(" << c[mu].to_string(names) << ")" << basis << names.at(mu);
  }
  return first ? "0" : out.str();
}

}  // namespace

VectorField::VectorField(std::vector<MultiPoly> coeffs) : c_(with_arity(std::move(coeffs), "vector field")) {}

VectorField VectorField::zero(size_t dim) {
  return VectorField(std::vector<MultiPoly>(dim, MultiPoly::zero(static_cast<uint32_t>(dim))));
}

VectorField VectorField::constant(const QVector& v) {
  std::vector<MultiPoly> c;
  for (const auto& x : v) c.emplace_back(x, static_cast<uint32_t>(v.size()));
  return VectorField(std::move(c));
}

VectorField VectorField::coordinate(size_t dim, size_t mu) {
  QVector v(dim, Rational(0));
  v.at(mu) = 1;
  return constant(v);
}

bool VectorField::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const MultiPoly& p) { return p.is_zero(); });
}

MultiPoly VectorField::apply(const MultiPoly& f) const {
  MultiPoly r = MultiPoly::zero(static_cast<uint32_t>(dim()));
  for (size_t mu = 0; mu < dim(); ++mu) {
    if (c_[mu].is_zero()) continue;
    MultiPoly df = f.derivative(static_cast<uint32_t>(mu));
    if (!df.is_zero()) r += c_[mu] * df;
  }
  return r;
}

QVector VectorField::at(const QVector& point) const {
  require_same_dim(point.size(), dim());
  QVector v;
  v.reserve(dim());
  for (const auto& p : c_) v.push_back(p.evaluate(point));
  return v;
}

VectorField& VectorField::operator+=(const VectorField& o) {
  require_same_dim(dim(), o.dim());
  for (size_t mu = 0; mu < dim(); ++mu) c_[mu] += o.c_[mu];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  require_same_dim(dim(), o.dim());
  for (size_t mu = 0; mu < dim(); ++mu) c_[mu] -= o.c_[mu];
  return *this;
}

VectorField operator*(const MultiPoly& f, const VectorField& x) {
  VectorField r = x;
  for (auto& c : r.c_) c = f * c;
  return r;
}

VectorField operator*(const Rational& s, const VectorField& x) {
  VectorField r = x;
  for (auto& c : r.c_) c *= s;
  return r;
}

std::string VectorField::to_string(const VarNames& names) const { return vector_terms(c_, names, "*d_"); }

OneForm::OneForm(std::vector<MultiPoly> coeffs) : c_(with_arity(std::move(coeffs), "one-form")) {}

MultiPoly OneForm::pair(const VectorField& x) const {
  require_same_dim(dim(), x.dim());
  MultiPoly r = MultiPoly::zero(static_cast<uint32_t>(dim()));
  for (size_t mu = 0; mu < dim(); ++mu)
    if (!c_[mu].is_zero() && !x[mu].is_zero()) r += c_[mu] * x[mu];
  return r;
}

Rational OneForm::pair_at(const QVector& point, const QVector& v) const {
  require_same_dim(dim(), v.size());
  Rational r = 0;
  for (size_t mu = 0; mu < dim(); ++mu)
    if (!is_zero(v[mu])) r += c_[mu].evaluate(point) * v[mu];
  return r;
}

QVector OneForm::at(const QVector& point) const {
  require_same_dim(point.size(), dim());
  QVector v;
  for (const auto& p : c_) v.push_back(p.evaluate(point));
  return v;
}

MultiPoly OneForm::d_coefficient(size_t nu, size_t mu) const {
  return c_.at(mu).derivative(static_cast<uint32_t>(nu)) - c_.at(nu).derivative(static_cast<uint32_t>(mu));
}

Rational OneForm::d_at(const QVector& point, const QVector& a, const QVector& b) const {
  require_same_dim(dim(), a.size());
  require_same_dim(dim(), b.size());
  Rational r = 0;
  for (size_t nu = 0; nu < dim(); ++nu) {
    for (size_t mu = 0; mu < dim(); ++mu) {
      if (nu == mu) continue;
      const Rational w = a[nu] * b[mu];
      if (is_zero(w)) continue;
      r += d_coefficient(nu, mu).evaluate(point) * w;
    }
  }
  return r;
}

OneForm& OneForm::operator+=(const OneForm& o) {
  require_same_dim(dim(), o.dim());
  for (size_t mu = 0; mu < dim(); ++mu) c_[mu] += o.c_[mu];
  return *this;
}

OneForm operator*(const Rational& s, const OneForm& l) {
  OneForm r = l;
  for (auto& c : r.c_) c *= s;
  return r;
}

std::string OneForm::to_string(const VarNames& names) const { return vector_terms(c_, names, "*d"); }

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  require_same_dim(x.dim(), y.dim());
  std::vector<MultiPoly> c;
  c.reserve(x.dim());
  for (size_t mu = 0; mu < x.dim(); ++mu) c.push_back(x.apply(y[mu]) - y.apply(x[mu]));
  return VectorField(std::move(c));
}

MultiPoly d_oneform_eval(const OneForm& lambda, const VectorField& x, const VectorField& y) {
  require_same_dim(lambda.dim(), x.dim());
  require_same_dim(lambda.dim(), y.dim());
  return x.apply(lambda.pair(y)) - y.apply(lambda.pair(x)) - lambda.pair(lie_bracket(x, y));
}

std::vector<VectorField> spanning_fields(const std::vector<OneForm>& coframe, const QVector& point, size_t dim) {
  const size_t p = coframe.size();
  std::vector<VectorField> fields;
  if (p == 0) {
    for (size_t k = 0; k < dim; ++k) fields.push_back(VectorField::coordinate(dim, k));
    return fields;
  }
  QMatrix at_x(p, dim);
  for (size_t s = 0; s < p; ++s) {
    QVector row = coframe[s].at(point);
    for (size_t mu = 0; mu < dim; ++mu) at_x(s, mu) = row[mu];
  }
  const auto red = rref(at_x);
  if (red.pivots.size() != p) throw GeometryError("coframe rank-deficient at base point");
  const std::vector<size_t>& pivots = red.pivots;

  const auto nv = static_cast<uint32_t>(dim);
  PolyMatrix lam_j(p, p);
  for (size_t s = 0; s < p; ++s)
    for (size_t i = 0; i < p; ++i) lam_j(s, i) = coframe[s][pivots[i]];
  const MultiPoly det = determinant(lam_j);

  // adj(L)_{ij} = (-1)^{i+j} det(L without row j, column i)
  PolyMatrix adj(p, p);
  for (size_t i = 0; i < p; ++i) {
    for (size_t j = 0; j < p; ++j) {
      std::vector<size_t> rows, cols;
      for (size_t r = 0; r < p; ++r)
        if (r != j) rows.push_back(r);
      for (size_t c = 0; c < p; ++c)
        if (c != i) cols.push_back(c);
      MultiPoly minor = p == 1 ? MultiPoly(Rational(1), nv) : determinant(lam_j.select_rows(rows).select_columns(cols));
      adj(i, j) = (i + j) % 2 ? -minor : minor;
    }
  }
  const bool constant_det = det.is_constant();
  const Rational scale = constant_det ? Rational(1) / det.constant_term() : Rational(1);

  std::vector<bool> is_pivot(dim, false);
  for (size_t c : pivots) is_pivot[c] = true;
  for (size_t k = 0; k < dim; ++k) {
    if (is_pivot[k]) continue;
    std::vector<MultiPoly> c(dim, MultiPoly::zero(nv));
    c[k] = constant_det ? MultiPoly(Rational(1), nv) : det;
    for (size_t i = 0; i < p; ++i) {
      MultiPoly acc = MultiPoly::zero(nv);
      for (size_t s = 0; s < p; ++s)
        if (!adj(i, s).is_zero() && !coframe[s][k].is_zero()) acc += adj(i, s) * coframe[s][k];
      c[pivots[i]] = constant_det ? -(acc * scale) : -acc;
    }
    fields.emplace_back(std::move(c));
  }
  return fields;
}

QMatrix Distribution::coframe_at(const QVector& point) const {
  QMatrix m(coframe_.size(), dim_);
  for (size_t s = 0; s < coframe_.size(); ++s) {
    QVector row = coframe_[s].at(point);
    for (size_t mu = 0; mu < dim_; ++mu) m(s, mu) = row[mu];
  }
  return m;
}

void Distribution::validate_coframe() const {
  if (base_.size() != dim_) throw GeometryError("base point has wrong dimension");
  if (coframe_.size() > dim_) throw GeometryError("more coframe forms than ambient dimensions");
  for (const auto& l : coframe_) require_same_dim(l.dim(), dim_);
  if (exact_rank(coframe_at(base_)) != coframe_.size()) throw GeometryError("coframe rank-deficient at base point");
}

Distribution Distribution::from_coframe(std::vector<OneForm> coframe, QVector base_point, size_t dim) {
  Distribution d;
  d.dim_ = dim;
  d.coframe_ = std::move(coframe);
  d.base_ = std::move(base_point);
  d.validate_coframe();
  d.generators_ = spanning_fields(d.coframe_, d.base_, dim);
  return d;
}

Distribution Distribution::with_generators(std::vector<OneForm> coframe, std::vector<VectorField> generators,
                                           QVector base_point, size_t dim) {
  Distribution d;
  d.dim_ = dim;
  d.coframe_ = std::move(coframe);
  d.base_ = std::move(base_point);
  d.validate_coframe();
  std::vector<QVector> values;
  for (size_t g = 0; g < generators.size(); ++g) {
    require_same_dim(generators[g].dim(), dim);
    for (size_t s = 0; s < d.coframe_.size(); ++s) {
      if (!d.coframe_[s].pair(generators[g]).is_zero()) {
        throw GeometryError("generator " + std::to_string(g + 1) + " does not annihilate coframe form " +
                            std::to_string(s + 1));
      }
    }
    values.push_back(generators[g].at(d.base_));
  }
  if (exact_rank(columns_of(values, dim)) != d.rank()) {
    throw GeometryError("generators do not span the distribution at the base point");
  }
  d.generators_ = std::move(generators);
  return d;
}

Distribution Distribution::recombined(const QMatrix& g) const {
  const size_t p = coframe_.size();
  if (g.rows() != p || g.cols() != p) throw GeometryError("recombination matrix has wrong shape");
  if (exact_rank(g) != p) throw GeometryError("recombination matrix is singular");
  std::vector<OneForm> forms;
  for (size_t s = 0; s < p; ++s) {
    OneForm acc(std::vector<MultiPoly>(dim_, MultiPoly::zero(static_cast<uint32_t>(dim_))));
    for (size_t k = 0; k < p; ++k)
      if (!is_zero(g(s, k))) acc += g(s, k) * coframe_[k];
    forms.push_back(std::move(acc));
  }
  Distribution d = *this;
  d.coframe_ = std::move(forms);
  return d;
}

GrowthVector::GrowthVector(std::vector<int> m) : m_(std::move(m)) {
  if (m_.size() < 2) throw std::invalid_argument("growth vector needs at least (m_0, m_1)");
  if (m_[0] != 0) throw std::invalid_argument("growth vector must start with m_0 = 0");
  if (m_[1] < 1) throw std::invalid_argument("growth vector needs rank m_1 >= 1");
  for (size_t i = 1; i < m_.size(); ++i)
    if (m_[i] < m_[i - 1]) throw std::invalid_argument("growth vector must be weakly increasing");
}

GrowthVector GrowthVector::parse(const std::string& text) {
  std::vector<int> m;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed growth vector entry '" + item + "'");
    }
    while (used < item.size() && item[used] == ' ') ++used;
    if (used != item.size()) throw std::invalid_argument("malformed growth vector entry '" + item + "'");
    m.push_back(v);
  }
  return GrowthVector(std::move(m));
}

int GrowthVector::jump(int s) const {
  if (s == 0) return 0;
  if (s < 1 || s > step()) throw std::out_of_range("growth vector level out of range");
  return m_[s + 1] - m_[s];
}

GrowthVector GrowthVector::compressed() const {
  std::vector<int> m = {m_[0], m_[1]};
  for (size_t i = 2; i < m_.size(); ++i)
    if (m_[i] > m.back()) m.push_back(m_[i]);
  return GrowthVector(std::move(m));
}

bool GrowthVector::has_zero_jump() const {
  for (int s = 1; s <= step(); ++s)
    if (jump(s) == 0) return true;
  return false;
}

std::string GrowthVector::to_string() const {
  std::string out;
  for (size_t i = 0; i < m_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(m_[i]);
  }
  return out;
}

GrowthVector FlagResult::growth_vector() const {
  if (!bracket_generating) throw GeometryError("distribution is not bracket-generating at the base point");
  return GrowthVector(ranks);
}

FlagResult flag_at_point(const Distribution& d, int max_step) {
  if (max_step < 1) throw std::invalid_argument("max_step must be at least 1");
  const size_t dim = d.ambient_dim();
  const QVector& x = d.base_point();
  FlagResult out;
  FieldSpan span;
  std::vector<QVector> independent;

  auto absorb = [&](const QVector& v) {
    independent.push_back(v);
    if (exact_rank(columns_of(independent, dim)) < independent.size()) independent.pop_back();
  };

  std::vector<VectorField> level;
  for (const auto& g : d.generators())
    if (!g.is_zero() && span.insert(g)) level.push_back(g);
  for (const auto& g : level) absorb(g.at(x));
  out.ranks = {0, static_cast<int>(independent.size())};
  out.fields.push_back(level);
  out.basis.push_back(columns_of(independent, dim));
  if (independent.size() == dim) {
    out.bracket_generating = true;
    return out;
  }

  for (int step = 1; step <= max_step; ++step) {
    std::vector<VectorField> next;
    for (const auto& a : out.fields.front()) {
      for (const auto& y : out.fields.back()) {
        VectorField b = lie_bracket(a, y);
        if (!b.is_zero() && span.insert(b)) next.push_back(std::move(b));
      }
    }
    const size_t before = independent.size();
    for (const auto& b : next) absorb(b.at(x));
    if (next.empty() || independent.size() == before) break;
    out.ranks.push_back(static_cast<int>(independent.size()));
    out.fields.push_back(std::move(next));
    out.basis.push_back(columns_of(independent, dim));
    if (independent.size() == dim) {
      out.bracket_generating = true;
      break;
    }
  }
  return out;
}

std::vector<QVector> AdaptedFrameData::zeta_flat() const {
  std::vector<QVector> out;
  for (const auto& level : zeta) out.insert(out.end(), level.begin(), level.end());
  return out;
}

std::vector<OneForm> AdaptedFrameData::lambda_flat() const {
  std::vector<OneForm> out;
  for (const auto& level : lambda) out.insert(out.end(), level.begin(), level.end());
  return out;
}

size_t AdaptedFrameData::level_offset(int s) const {
  if (s < 1 || s > static_cast<int>(zeta.size()) + 1) throw std::out_of_range("frame level out of range");
  size_t off = 0;
  for (int i = 1; i < s; ++i) off += zeta[i - 1].size();
  return off;
}

QMatrix AdaptedFrameData::duality_matrix(const QVector& x) const {
  const auto z = zeta_flat();
  const auto l = lambda_flat();
  QMatrix m(l.size(), z.size());
  for (size_t i = 0; i < l.size(); ++i)
    for (size_t j = 0; j < z.size(); ++j) m(i, j) = l[i].pair_at(x, z[j]);
  return m;
}

AdaptedFrameData adapted_frame(const Distribution& d, const FlagResult& flag, PairOrder order,
                               const std::optional<GrowthVector>& requested) {
  const GrowthVector gv = flag.growth_vector();
  if (requested && !(requested->compressed() == gv)) {
    throw GeometryError("requested type " + requested->to_string() + " does not match the flag " + gv.to_string());
  }
  const size_t dim = d.ambient_dim();
  const QVector& x = d.base_point();
  const int r = gv.step();

  AdaptedFrameData out;
  out.type = gv;
  for (int s = 1; s <= r; ++s) {
    const int ps = gv.jump(s);
    std::vector<const VectorField*> taus;
    for (const auto& a : flag.fields.front()) taus.push_back(&a);
    std::vector<const VectorField*> etas;
    const QMatrix& lower = flag.basis[s - 1];
    const size_t lower_rank = s == 1 ? 0 : flag.basis[s - 2].cols();
    for (int lvl = 0; lvl < s; ++lvl) {
      for (const auto& y : flag.fields[lvl]) {
        QVector v = y.at(x);
        if (is_zero_vector(v)) continue;
        if (s > 1) {
          std::vector<QVector> cols;
          for (size_t c = 0; c < flag.basis[s - 2].cols(); ++c) cols.push_back(flag.basis[s - 2].column(c));
          cols.push_back(v);
          if (exact_rank(columns_of(cols, dim)) == lower_rank) continue;
        }
        etas.push_back(&y);
      }
    }
    if (order == PairOrder::kReverse) {
      std::reverse(taus.begin(), taus.end());
      std::reverse(etas.begin(), etas.end());
    }

    std::vector<QVector> current;
    for (size_t c = 0; c < lower.cols(); ++c) current.push_back(lower.column(c));
    std::vector<QVector> tau, eta, zeta, brackets;
    std::vector<VectorField> tau_f, eta_f;
    for (const VectorField* a : taus) {
      for (const VectorField* y : etas) {
        if (static_cast<int>(zeta.size()) == ps) break;
        QVector b = lie_bracket(*a, *y).at(x);
        QVector v = b;
        for (auto& e : v) e = -e;
        current.push_back(v);
        if (exact_rank(columns_of(current, dim)) < current.size()) {
          current.pop_back();
          continue;
        }
        tau.push_back(a->at(x));
        eta.push_back(y->at(x));
        zeta.push_back(v);
        brackets.push_back(b);
        tau_f.push_back(*a);
        eta_f.push_back(*y);
      }
    }
    if (static_cast<int>(zeta.size()) != ps) {
      throw GeometryError("bracket pairing is not surjective at step " + std::to_string(s));
    }
    out.tau.push_back(tau);
    out.eta.push_back(eta);
    out.zeta.push_back(zeta);
    out.bracket_at_x.push_back(brackets);
    out.tau_field.push_back(tau_f);
    out.eta_field.push_back(eta_f);
  }

  // lambda' = G lambda with G (Lambda(x) Z) = Id.
  const size_t p = d.corank();
  const QMatrix lam_x = d.coframe_at(x);
  const QMatrix z = columns_of(out.zeta_flat(), dim);
  const QMatrix g = p == 0 ? QMatrix(0, 0) : right_inverse(lam_x * z);
  out.recombination = g;
  const auto nv = static_cast<uint32_t>(dim);
  std::vector<OneForm> flat;
  for (size_t i = 0; i < p; ++i) {
    OneForm acc(std::vector<MultiPoly>(dim, MultiPoly::zero(nv)));
    for (size_t k = 0; k < p; ++k)
      if (!is_zero(g(i, k))) acc += g(i, k) * d.coframe()[k];
    flat.push_back(std::move(acc));
  }
  size_t next = 0;
  for (int s = 1; s <= r; ++s) {
    out.lambda.emplace_back(flat.begin() + next, flat.begin() + next + gv.jump(s));
    next += gv.jump(s);
  }

  out.duality_ok = out.duality_matrix(x) == QMatrix::identity(p);
  out.triangular_ok = true;
  for (int s = 1; s <= r; ++s) {
    for (size_t j = 0; j < out.tau[s - 1].size(); ++j) {
      for (int s2 = s; s2 <= r; ++s2) {
        for (size_t j2 = 0; j2 < out.lambda[s2 - 1].size(); ++j2) {
          const Rational v = out.lambda[s2 - 1][j2].d_at(x, out.tau[s - 1][j], out.eta[s - 1][j]);
          const Rational want = (s2 == s && j2 == j) ? 1 : 0;
          if (v != want) out.triangular_ok = false;
        }
      }
    }
  }

  if (requested && requested->has_zero_jump()) {
    AdaptedFrameData expanded = out;
    expanded.type = *requested;
    for (auto* v : {&expanded.tau, &expanded.eta, &expanded.zeta, &expanded.bracket_at_x}) v->clear();
    expanded.tau_field.clear();
    expanded.eta_field.clear();
    expanded.lambda.clear();
    size_t src = 0;
    for (int s = 1; s <= requested->step(); ++s) {
      if (requested->jump(s) == 0) {
        expanded.tau.emplace_back();
        expanded.eta.emplace_back();
        expanded.zeta.emplace_back();
        expanded.bracket_at_x.emplace_back();
        expanded.tau_field.emplace_back();
        expanded.eta_field.emplace_back();
        expanded.lambda.emplace_back();
        continue;
      }
      expanded.tau.push_back(out.tau[src]);
      expanded.eta.push_back(out.eta[src]);
      expanded.zeta.push_back(out.zeta[src]);
      expanded.bracket_at_x.push_back(out.bracket_at_x[src]);
      expanded.tau_field.push_back(out.tau_field[src]);
      expanded.eta_field.push_back(out.eta_field[src]);
      expanded.lambda.push_back(out.lambda[src]);
      ++src;
    }
    return expanded;
  }
  return out;
}

}  // namespace hjet
