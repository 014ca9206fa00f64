#include "ergodic_spectra/flow.hpp"

#include <cmath>
#include <string>

#include "ergodic_spectra/errors.hpp"

namespace ergodic_spectra {

FlowDirection::FlowDirection(std::vector<double> velocity) : velocity_(std::move(velocity)) {
  if (velocity_.empty()) throw ConfigError("flow direction must have at least one entry");
  for (std::size_t k = 0; k < velocity_.size(); ++k) {
    if (velocity_[k] == 0.0 || !std::isfinite(velocity_[k])) {
      throw ConfigError("flow direction entry " + std::to_string(k + 1) +
                        " must be finite and nonzero");
    }
  }
}

double FlowDirection::pairing(std::span<const std::int64_t> block) const {
  if (block.size() != velocity_.size()) throw DimensionError("flow pairing: width mismatch");
  double sum = 0.0;
  for (std::size_t k = 0; k < block.size(); ++k) sum += static_cast<double>(block[k]) * velocity_[k];
  return sum;
}

FlowDirection subgroup_direction(double y, std::size_t width) {
  if (y == 0.0 || std::abs(y) == 1.0) {
    throw ConfigError("subgroup parameter y must not be 0 or +-1 (powers are rationally dependent)");
  }
  if (width == 0) throw DimensionError("subgroup_direction: width must be >= 1");
  std::vector<double> v(width);
  double power = 1.0;
  for (auto& entry : v) {
    power *= y;
    entry = power;
  }
  return FlowDirection(std::move(v));
}

Diagnostics audit_flow(const FlowDirection& v) {
  Diagnostics out;
  for (std::size_t k = 0; k < v.width(); ++k) {
    if (looks_rational(v.velocity()[k])) {
      out.push_back({Severity::warning, "flow entry " + std::to_string(k + 1) +
                                            " is visibly rational; subgroup may not be ergodic"});
    }
  }
  return out;
}

TorusPoint flow_apply(const TorusPoint& x, double t, const FlowDirection& v, std::size_t factor) {
  if (factor < 1 || factor > x.depth()) {
    throw DimensionError("flow_apply: factor " + std::to_string(factor) + " out of range");
  }
  if (v.width() != x.width()) throw DimensionError("flow_apply: width mismatch");
  std::vector<double> coords(x.coords().begin(), x.coords().end());
  const std::size_t offset = (factor - 1) * x.width();
  for (std::size_t k = 0; k < x.width(); ++k) coords[offset + k] += t * v.velocity()[k];
  return TorusPoint(x.depth(), x.width(), std::move(coords));
}

namespace {

void check_factor(const TrigPolynomial& p, const FlowDirection& v, std::size_t factor) {
  if (factor < 1 || factor > p.depth()) {
    throw DimensionError("flow factor " + std::to_string(factor) + " out of range");
  }
  if (v.width() != p.width()) throw DimensionError("flow width does not match polynomial");
}

}  // namespace

TrigPolynomial translation_apply(const TrigPolynomial& p, double t, const FlowDirection& v,
                                 std::size_t factor) {
  check_factor(p, v, factor);
  return p.map_coefficients([&](const FrequencyVector& m) {
    return std::polar(1.0, kTwoPi * t * v.pairing(m.block(factor)));
  });
}

TrigPolynomial generator_apply(const TrigPolynomial& p, const FlowDirection& v, std::size_t factor) {
  check_factor(p, v, factor);
  return p.map_coefficients(
      [&](const FrequencyVector& m) { return Complex(-kTwoPi * v.pairing(m.block(factor)), 0.0); });
}

}  // namespace ergodic_spectra
