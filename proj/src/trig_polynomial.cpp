#include "ergodic_spectra/trig_polynomial.hpp"

#include <cmath>

#include "ergodic_spectra/errors.hpp"

namespace ergodic_spectra {

namespace {

TrigPolynomial::Terms pruned(TrigPolynomial::Terms terms) {
  std::erase_if(terms, [](const auto& kv) { return std::abs(kv.second) < kPruneThreshold; });
  return terms;
}

}  // namespace

TrigPolynomial::TrigPolynomial(std::size_t depth, std::size_t width) : depth_(depth), width_(width) {
  if (depth == 0 || width == 0) throw DimensionError("trig polynomial needs depth, width >= 1");
}

TrigPolynomial::TrigPolynomial(std::size_t depth, std::size_t width, Terms terms)
    : TrigPolynomial(depth, width) {
  for (const auto& [m, c] : terms) {
    if (m.depth() != depth || m.width() != width) {
      throw DimensionError("trig polynomial term has the wrong frequency shape");
    }
  }
  terms_ = pruned(std::move(terms));
}

TrigPolynomial TrigPolynomial::constant(std::size_t depth, std::size_t width, Complex value) {
  return TrigPolynomial(depth, width, {{FrequencyVector(depth, width), value}});
}

TrigPolynomial TrigPolynomial::character(const FrequencyVector& m, Complex coefficient) {
  return TrigPolynomial(m.depth(), m.width(), {{m, coefficient}});
}

TrigPolynomial TrigPolynomial::cosine(const FrequencyVector& m, double amplitude) {
  if (m.is_zero()) return constant(m.depth(), m.width(), amplitude);
  return TrigPolynomial(m.depth(), m.width(), {{m, amplitude / 2}, {-m, amplitude / 2}});
}

TrigPolynomial TrigPolynomial::sine(const FrequencyVector& m, double amplitude) {
  if (m.is_zero()) return TrigPolynomial(m.depth(), m.width());
  const Complex half(0.0, amplitude / 2);
  return TrigPolynomial(m.depth(), m.width(), {{m, -half}, {-m, half}});
}

Complex TrigPolynomial::coefficient(const FrequencyVector& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Complex{} : it->second;
}

bool TrigPolynomial::is_real_valued(double tol) const {
  for (const auto& [m, c] : terms_) {
    if (std::abs(coefficient(-m) - std::conj(c)) > tol) return false;
  }
  return true;
}

void TrigPolynomial::check_compatible(const TrigPolynomial& other) const {
  if (depth_ != other.depth_ || width_ != other.width_) {
    throw DimensionError("trig polynomial operands live on different tori");
  }
}

TrigPolynomial TrigPolynomial::operator+(const TrigPolynomial& other) const {
  check_compatible(other);
  Terms out = terms_;
  for (const auto& [m, c] : other.terms_) out[m] += c;
  return TrigPolynomial(depth_, width_, std::move(out));
}

TrigPolynomial TrigPolynomial::operator-(const TrigPolynomial& other) const {
  return *this + other.scaled(-1.0);
}

TrigPolynomial TrigPolynomial::operator*(const TrigPolynomial& other) const {
  check_compatible(other);
  Terms out;
  for (const auto& [m, c] : terms_) {
    for (const auto& [m2, c2] : other.terms_) out[m + m2] += c * c2;
  }
  return TrigPolynomial(depth_, width_, std::move(out));
}

TrigPolynomial TrigPolynomial::scaled(Complex factor) const {
  return map_coefficients([factor](const FrequencyVector&) { return factor; });
}

TrigPolynomial TrigPolynomial::conj() const {
  Terms out;
  for (const auto& [m, c] : terms_) out.emplace(-m, std::conj(c));
  return TrigPolynomial(depth_, width_, std::move(out));
}

TrigPolynomial TrigPolynomial::lifted(std::size_t depth) const {
  if (depth == depth_) return *this;
  Terms out;
  for (const auto& [m, c] : terms_) out.emplace(m.padded(depth), c);
  return TrigPolynomial(depth, width_, std::move(out));
}

Complex TrigPolynomial::evaluate_prefix(const TorusPoint& x) const {
  if (x.width() != width_ || x.depth() < depth_) {
    throw DimensionError("trig polynomial evaluated on an incompatible point");
  }
  return evaluate_coords(x.coords());
}

Complex TrigPolynomial::evaluate_coords(std::span<const double> coords) const {
  if (coords.size() < depth_ * width_) throw DimensionError("too few coordinates for evaluation");
  Complex sum{};
  for (const auto& [m, c] : terms_) {
    sum += c * std::polar(1.0, kTwoPi * char_phase(m.entries(), coords));
  }
  return sum;
}

TrigPolynomial trig_algebra(const TrigPolynomial& p, const TrigPolynomial& q, AlgebraOp op,
                            Complex scale) {
  switch (op) {
    case AlgebraOp::add: return p + q;
    case AlgebraOp::mul: return p * q;
    case AlgebraOp::conj: return p.conj();
    case AlgebraOp::scale: return p.scaled(scale);
  }
  throw ConfigError("unknown algebra operation");
}

Complex trig_eval(const TrigPolynomial& p, const TorusPoint& x) {
  if (p.depth() != x.depth() || p.width() != x.width()) {
    throw DimensionError("trig_eval: dimension mismatch");
  }
  return p.evaluate_prefix(x);
}

Complex trig_integral(const TrigPolynomial& p) {
  return p.coefficient(FrequencyVector(p.depth(), p.width()));
}

double coefficient_l1(const TrigPolynomial& p) {
  double sum = 0.0;
  for (const auto& [m, c] : p.terms()) sum += std::abs(c);
  return sum;
}

}  // namespace ergodic_spectra
