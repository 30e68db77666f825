#include "polarity/weights.hpp"

#include <cmath>
#include <sstream>

#include "polarity/errors.hpp"

namespace polarity {

double conjugate(double p) {
  if (!std::isfinite(p) || !(p > 1.0)) fail(ErrorCode::ExponentOutOfRange, "conjugate exponent needs p > 1");
  return p / (p - 1.0);
}

Exponents Exponents::make(double p, double q) {
  if (!std::isfinite(p) || !(p > 1.0)) fail(ErrorCode::ExponentOutOfRange, "p must satisfy 1 < p < inf");
  if (!std::isfinite(q) || !(q > 1.0)) fail(ErrorCode::ExponentOutOfRange, "q must satisfy 1 < q < inf");
  Exponents e;
  e.p = p;
  e.q = q;
  e.p_conj = conjugate(p);
  e.q_conj = conjugate(q);
  e.s = std::max(e.p_conj, q);
  return e;
}

Exponents Exponents::swapped() const { return make(q_conj, p_conj); }

struct Weight::Node {
  Kind kind = Kind::Constant;
  double number = 0.0;  // constant value, alpha, scale or exponent
  int dim = 0;
  Vec vec;              // aniso alphas or translation
  GridData grid;
  std::vector<Weight> children;
};

Weight::Weight(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

namespace {

std::shared_ptr<Weight::Node> make_node(Weight::Kind k) {
  auto n = std::make_shared<Weight::Node>();
  n->kind = k;
  return n;
}

}  // namespace

Weight Weight::constant(double c) {
  if (!std::isfinite(c) || c < 0.0) fail(ErrorCode::InvalidArgument, "constant weight must be finite and >= 0");
  auto n = make_node(Kind::Constant);
  n->number = c;
  return Weight(n);
}

namespace {

Weight raw_power(double alpha, int dim);
Weight raw_aniso(Vec alphas);

}  // namespace

Weight Weight::power(double alpha, int dim) {
  if (dim < 1) fail(ErrorCode::InvalidArgument, "power weight dimension must be >= 1");
  if (!std::isfinite(alpha)) fail(ErrorCode::InvalidArgument, "power exponent must be finite");
  if (!(alpha > -dim))
    fail(ErrorCode::NotLocallyIntegrable, "|x|^alpha is locally integrable only for alpha > -n");
  return raw_power(alpha, dim);
}

Weight Weight::aniso(Vec alphas) {
  if (alphas.size() < 1) fail(ErrorCode::InvalidArgument, "anisotropic weight needs at least one exponent");
  if (!alphas.allFinite()) fail(ErrorCode::InvalidArgument, "anisotropic exponents must be finite");
  if ((alphas.array() <= -1.0).any())
    fail(ErrorCode::NotLocallyIntegrable, "prod |x_i|^alpha_i is locally integrable only for alpha_i > -1");
  return raw_aniso(std::move(alphas));
}

namespace {

Weight raw_power(double alpha, int dim) {
  if (alpha == 0.0) return Weight::constant(1.0);
  auto n = make_node(Weight::Kind::Power);
  n->number = alpha;
  n->dim = dim;
  return Weight(std::shared_ptr<const Weight::Node>(n));
}

}  // namespace

Weight Weight::grid(Vec lo, Vec hi, std::vector<int> shape, std::vector<double> values) {
  const auto d = static_cast<Eigen::Index>(shape.size());
  if (d < 1) fail(ErrorCode::InvalidArgument, "grid weight needs a shape");
  if (lo.size() != d || hi.size() != d) fail(ErrorCode::DimensionMismatch, "grid bounds do not match the shape");
  std::size_t total = 1;
  for (int s : shape) {
    if (s < 2) fail(ErrorCode::InvalidArgument, "grid weight needs at least 2 nodes per axis");
    total *= static_cast<std::size_t>(s);
  }
  if (values.size() != total) fail(ErrorCode::InvalidArgument, "grid value count does not match the shape");
  if (!lo.allFinite() || !hi.allFinite() || ((hi - lo).array() <= 0.0).any())
    fail(ErrorCode::InvalidArgument, "grid domain must be a nondegenerate box");
  for (double v : values)
    if (!std::isfinite(v) || v < 0.0) fail(ErrorCode::InvalidArgument, "grid samples must be finite and >= 0");
  auto n = make_node(Kind::Grid);
  n->dim = static_cast<int>(d);
  n->grid = GridData{std::move(lo), std::move(hi), std::move(shape), std::move(values)};
  return Weight(n);
}

Weight Weight::grid_from(Vec lo, Vec hi, std::vector<int> shape, const std::function<double(const Vec&)>& f) {
  const auto d = static_cast<int>(shape.size());
  if (lo.size() != d || hi.size() != d) fail(ErrorCode::DimensionMismatch, "grid bounds do not match the shape");
  std::size_t total = 1;
  for (int s : shape) total *= static_cast<std::size_t>(std::max(s, 0));
  std::vector<double> values(total);
  std::vector<int> idx(d, 0);
  Vec x(d);
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t rem = k;
    for (int i = d - 1; i >= 0; --i) {
      idx[i] = static_cast<int>(rem % shape[i]);
      rem /= shape[i];
    }
    for (int i = 0; i < d; ++i) x(i) = lo(i) + (hi(i) - lo(i)) * idx[i] / (shape[i] - 1);
    values[k] = f(x);
  }
  return grid(std::move(lo), std::move(hi), std::move(shape), std::move(values));
}

namespace {

Weight raw_aniso(Vec alphas) {
  if ((alphas.array() == 0.0).all()) return Weight::constant(1.0);
  auto n = make_node(Weight::Kind::Aniso);
  n->dim = static_cast<int>(alphas.size());
  n->vec = std::move(alphas);
  return Weight(std::shared_ptr<const Weight::Node>(n));
}

int merged_dim(int a, int b) {
  if (a == 0) return b;
  if (b == 0 || a == b) return a;
  fail(ErrorCode::DimensionMismatch, "weights of different dimensions combined");
}

}  // namespace

Weight Weight::product(std::vector<Weight> factors) {
  double c = 1.0;
  std::vector<Weight> flat;
  std::function<void(const Weight&)> add = [&](const Weight& f) {
    switch (f.kind()) {
      case Kind::Constant: c *= f.constant_value(); break;
      case Kind::Scaled:
        c *= f.scale();
        add(f.inner());
        break;
      case Kind::Product:
        for (const auto& g : f.factors()) add(g);
        break;
      default: flat.push_back(f);
    }
  };
  for (const auto& f : factors) add(f);
  if (c == 0.0) return constant(0.0);

  // Merge powers with powers and anisotropic factors with each other.
  std::vector<Weight> merged;
  int power_dim = 0;
  double power_alpha = 0.0;
  bool have_power = false;
  Vec aniso_sum;
  int dim = 0;
  for (const auto& f : flat) {
    dim = merged_dim(dim, f.dim());
    if (f.kind() == Kind::Power) {
      power_dim = merged_dim(power_dim, f.dim());
      power_alpha += f.alpha();
      have_power = true;
    } else if (f.kind() == Kind::Aniso) {
      if (aniso_sum.size() == 0) aniso_sum = Vec::Zero(f.alphas().size());
      if (aniso_sum.size() != f.alphas().size())
        fail(ErrorCode::DimensionMismatch, "anisotropic weights of different dimensions combined");
      aniso_sum += f.alphas();
    } else {
      merged.push_back(f);
    }
  }
  if (have_power) {
    Weight p = raw_power(power_alpha, power_dim);
    if (p.kind() != Kind::Constant) merged.push_back(p);
  }
  if (aniso_sum.size() > 0) {
    Weight a = raw_aniso(aniso_sum);
    if (a.kind() != Kind::Constant) merged.push_back(a);
  }
  Weight body = constant(1.0);
  if (merged.size() == 1) {
    body = merged.front();
  } else if (merged.size() > 1) {
    auto n = make_node(Kind::Product);
    n->dim = dim;
    n->children = std::move(merged);
    body = Weight(n);
  }
  return scaled(c, body);
}

Weight Weight::scaled(double c, const Weight& w) {
  if (!std::isfinite(c) || c < 0.0) fail(ErrorCode::InvalidArgument, "weight scale must be finite and >= 0");
  if (c == 0.0) return constant(0.0);
  if (c == 1.0) return w;
  if (w.kind() == Kind::Constant) return constant(c * w.constant_value());
  if (w.kind() == Kind::Scaled) return scaled(c * w.scale(), w.inner());
  auto n = make_node(Kind::Scaled);
  n->number = c;
  n->dim = w.dim();
  n->children = {w};
  return Weight(n);
}

Weight Weight::translated(Vec shift, const Weight& w) {
  if (!shift.allFinite()) fail(ErrorCode::InvalidArgument, "weight translation must be finite");
  if (w.dim() != 0 && shift.size() != w.dim()) fail(ErrorCode::DimensionMismatch, "translation dimension");
  if (w.kind() == Kind::Constant || shift.cwiseAbs().maxCoeff() == 0.0) return w;
  if (w.kind() == Kind::Scaled) return scaled(w.scale(), translated(shift, w.inner()));
  if (w.kind() == Kind::Translated) return translated(shift + w.shift(), w.inner());
  auto n = make_node(Kind::Translated);
  n->dim = static_cast<int>(shift.size());
  n->vec = std::move(shift);
  n->children = {w};
  return Weight(n);
}

Weight Weight::pow(const Weight& w, double e) {
  if (!std::isfinite(e)) fail(ErrorCode::InvalidArgument, "weight exponent must be finite");
  if (e == 1.0) return w;
  if (e == 0.0) return constant(1.0);
  switch (w.kind()) {
    case Kind::Constant:
      if (w.constant_value() == 0.0 && e < 0.0) fail(ErrorCode::ZeroWeight, "negative power of the zero weight");
      return constant(std::pow(w.constant_value(), e));
    case Kind::Power: return raw_power(w.alpha() * e, w.dim());
    case Kind::Aniso: return raw_aniso(w.alphas() * e);
    case Kind::Scaled: return scaled(std::pow(w.scale(), e), pow(w.inner(), e));
    case Kind::Translated: return translated(w.shift(), pow(w.inner(), e));
    case Kind::Pow: return pow(w.inner(), w.exponent() * e);
    case Kind::Product: {
      std::vector<Weight> fs;
      for (const auto& f : w.factors()) fs.push_back(pow(f, e));
      return product(std::move(fs));
    }
    case Kind::Grid: break;
  }
  auto n = make_node(Kind::Pow);
  n->number = e;
  n->dim = w.dim();
  n->children = {w};
  return Weight(n);
}

Weight::Kind Weight::kind() const { return node_->kind; }
int Weight::dim() const { return node_->dim; }

double Weight::constant_value() const { return node_->number; }
double Weight::alpha() const { return node_->number; }
const Vec& Weight::alphas() const { return node_->vec; }
const Weight::GridData& Weight::grid_data() const { return node_->grid; }
const std::vector<Weight>& Weight::factors() const { return node_->children; }
double Weight::scale() const { return node_->number; }
const Vec& Weight::shift() const { return node_->vec; }
double Weight::exponent() const { return node_->number; }
const Weight& Weight::inner() const { return node_->children.front(); }

namespace {

double power_value(double r, double alpha) {
  if (r == 0.0) return alpha > 0.0 ? 0.0 : (alpha == 0.0 ? 1.0 : INFINITY);
  return std::pow(r, alpha);
}

double grid_value(const Weight::GridData& g, const Vec& x) {
  const auto d = static_cast<int>(g.shape.size());
  if (x.size() != d) fail(ErrorCode::DimensionMismatch, "grid weight evaluated at a point of wrong dimension");
  std::vector<int> base(d);
  std::vector<double> frac(d);
  for (int i = 0; i < d; ++i) {
    const double span = g.hi(i) - g.lo(i);
    double t = (x(i) - g.lo(i)) / span;
    if (t < -1e-12 || t > 1.0 + 1e-12) return 0.0;
    t = std::clamp(t, 0.0, 1.0) * (g.shape[i] - 1);
    int k = std::min(static_cast<int>(std::floor(t)), g.shape[i] - 2);
    base[i] = k;
    frac[i] = t - k;
  }
  double sum = 0.0;
  for (int corner = 0; corner < (1 << d); ++corner) {
    double wgt = 1.0;
    std::size_t idx = 0;
    for (int i = 0; i < d; ++i) {
      const int bit = (corner >> i) & 1;
      wgt *= bit ? frac[i] : 1.0 - frac[i];
      idx = idx * g.shape[i] + (base[i] + bit);
    }
    if (wgt != 0.0) sum += wgt * g.values[idx];
  }
  return sum;
}

}  // namespace

double Weight::operator()(const Vec& x) const {
  if (dim() != 0 && x.size() != dim()) fail(ErrorCode::DimensionMismatch, "weight evaluated at a point of wrong dimension");
  switch (kind()) {
    case Kind::Constant: return constant_value();
    case Kind::Power: return power_value(x.norm(), alpha());
    case Kind::Aniso: {
      double v = 1.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) v *= power_value(std::abs(x(i)), alphas()(i));
      return v;
    }
    case Kind::Grid: return grid_value(grid_data(), x);
    case Kind::Product: {
      double v = 1.0;
      for (const auto& f : factors()) v *= f(x);
      return v;
    }
    case Kind::Scaled: return scale() * inner()(x);
    case Kind::Translated: return inner()(Vec(x + shift()));
    case Kind::Pow: {
      const double b = inner()(x);
      if (b == 0.0 && exponent() < 0.0) return INFINITY;
      return std::pow(b, exponent());
    }
  }
  return 0.0;
}

bool Weight::is_zero() const { return kind() == Kind::Constant && constant_value() == 0.0; }

bool Weight::locally_integrable(int n) const {
  if (n == 0) n = std::max(dim(), 1);
  switch (kind()) {
    case Kind::Constant:
    case Kind::Grid: return true;
    case Kind::Power: return alpha() > -n;
    case Kind::Aniso: return (alphas().array() > -1.0).all();
    case Kind::Product: {
      for (const auto& f : factors())
        if (!f.locally_integrable(n)) return false;
      return true;
    }
    case Kind::Scaled:
    case Kind::Translated: return inner().locally_integrable(n);
    case Kind::Pow: return exponent() > 0.0 && inner().locally_integrable(n);
  }
  return false;
}

std::string Weight::describe() const {
  std::ostringstream os;
  switch (kind()) {
    case Kind::Constant: os << "constant(" << constant_value() << ")"; break;
    case Kind::Power: os << "|x|^" << alpha(); break;
    case Kind::Aniso: {
      os << "aniso(";
      for (Eigen::Index i = 0; i < alphas().size(); ++i) os << (i ? "," : "") << alphas()(i);
      os << ")";
      break;
    }
    case Kind::Grid: os << "grid(" << grid_data().values.size() << " nodes)"; break;
    case Kind::Product: {
      for (std::size_t i = 0; i < factors().size(); ++i) os << (i ? " * " : "") << factors()[i].describe();
      break;
    }
    case Kind::Scaled: os << scale() << " * " << inner().describe(); break;
    case Kind::Translated: os << inner().describe() << " shifted"; break;
    case Kind::Pow: os << "(" << inner().describe() << ")^" << exponent(); break;
  }
  return os.str();
}

DualWeight dual_weight(const Weight& v, const Exponents& exps, int dim) {
  if (v.is_zero()) fail(ErrorCode::ZeroWeight, "dual weight of the zero weight");
  DualWeight r{Weight::pow(v, -exps.p_conj / exps.p), true, {}};
  const int n = dim > 0 ? dim : std::max(std::max(v.dim(), r.w.dim()), 1);
  if (!r.w.locally_integrable(n)) {
    r.locally_integrable = false;
    r.warning = "NotLocallyIntegrable: dual weight " + r.w.describe() + " is not locally integrable";
  }
  return r;
}

namespace {

void check_pair_dim(const Weight& w, int dim, const char* name) {
  if (w.dim() != 0 && w.dim() != dim)
    fail(ErrorCode::DimensionMismatch, std::string(name) + " has dimension " + std::to_string(w.dim()) +
                                           ", expected " + std::to_string(dim));
}

}  // namespace

WeightPair WeightPair::from_uv(const Weight& u, const Weight& v, const Exponents& exps, int dim) {
  check_pair_dim(u, dim, "u");
  check_pair_dim(v, dim, "v");
  DualWeight d = dual_weight(v, exps, dim);
  WeightPair p{u, v, d.w, dim, {}};
  if (!d.locally_integrable) p.warnings.push_back(d.warning);
  return p;
}

WeightPair WeightPair::from_uw(const Weight& u, const Weight& w, const Exponents& exps, int dim) {
  check_pair_dim(u, dim, "u");
  check_pair_dim(w, dim, "w");
  if (w.is_zero()) fail(ErrorCode::ZeroWeight, "w must not vanish identically");
  WeightPair p{u, Weight::pow(w, -exps.p / exps.p_conj), w, dim, {}};
  if (!w.locally_integrable(dim))
    p.warnings.push_back("NotLocallyIntegrable: w = " + w.describe() + " is not locally integrable");
  return p;
}

}  // namespace polarity
