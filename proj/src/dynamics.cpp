#include "ergodic_spectra/dynamics.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "ergodic_spectra/errors.hpp"

namespace ergodic_spectra {

IntMatrix::IntMatrix(std::size_t n) : n_(n), entries_(n * n, 0) {}

IntMatrix::IntMatrix(std::size_t n, std::vector<std::int64_t> entries)
    : n_(n), entries_(std::move(entries)) {
  if (entries_.size() != n * n) throw DimensionError("integer matrix entry count mismatch");
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.entries_[i * n + i] = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  std::vector<std::int64_t> flat;
  for (const auto& r : rows) {
    if (r.size() != rows.size()) throw DimensionError("integer matrix must be square");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return IntMatrix(rows.size(), std::move(flat));
}

std::int64_t IntMatrix::determinant() const {
  if (n_ == 0) return 1;
  std::vector<__int128> a(entries_.begin(), entries_.end());
  auto el = [&](std::size_t r, std::size_t c) -> __int128& { return a[r * n_ + c]; };
  __int128 prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n_; ++k) {
    if (el(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n_ && el(swap, k) == 0) ++swap;
      if (swap == n_) return 0;
      for (std::size_t c = 0; c < n_; ++c) std::swap(el(k, c), el(swap, c));
      sign = -sign;
    }
    for (std::size_t r = k + 1; r < n_; ++r) {
      for (std::size_t c = k + 1; c < n_; ++c) {
        el(r, c) = (el(r, c) * el(k, k) - el(r, k) * el(k, c)) / prev;
      }
    }
    prev = el(k, k);
  }
  return static_cast<std::int64_t>(sign * el(n_ - 1, n_ - 1));
}

std::vector<std::int64_t> IntMatrix::transpose_apply(std::span<const std::int64_t> m) const {
  if (m.size() != n_) throw DimensionError("transpose_apply: width mismatch");
  std::vector<std::int64_t> out(n_, 0);
  for (std::size_t r = 0; r < n_; ++r) {
    for (std::size_t c = 0; c < n_; ++c) out[c] += at(r, c) * m[r];
  }
  return out;
}

const IntMatrix& SystemConfig::homomorphism(std::size_t j, std::size_t i) const {
  if (j < 2 || j > depth || i < 1 || i >= j) throw DimensionError("homomorphism index out of range");
  return xi.at(j - 2).at(i - 1);
}

const TrigPolynomial& SystemConfig::perturbation(std::size_t j, std::size_t k) const {
  if (j < 2 || j > depth || k < 1 || k > width) throw DimensionError("perturbation index out of range");
  return eta.at(j - 2).at(k - 1);
}

bool SystemConfig::is_affine() const {
  for (const auto& row : eta) {
    for (const auto& p : row) {
      if (!p.is_zero()) return false;
    }
  }
  return true;
}

Diagnostics validate_config(const SystemConfig& cfg) {
  Diagnostics out;
  auto error = [&](std::string msg) { out.push_back({Severity::error, std::move(msg)}); };
  auto warn = [&](std::string msg) { out.push_back({Severity::warning, std::move(msg)}); };

  if (cfg.width < 1) error("truncation n must be >= 1");
  if (cfg.depth < 2) error("depth d must be >= 2");
  if (cfg.alpha.size() != cfg.width) error("alpha must have n entries");
  if (cfg.flow.width() != cfg.width) error("flow direction must have n entries");
  if (cfg.xi.size() + 1 != cfg.depth) error("xi must list one entry per factor j = 2..d");
  if (cfg.eta.size() + 1 != cfg.depth) error("eta must list one entry per factor j = 2..d");
  if (has_errors(out)) return out;

  for (std::size_t j = 2; j <= cfg.depth; ++j) {
    const auto& mats = cfg.xi[j - 2];
    const std::string tag = "factor j=" + std::to_string(j) + ": ";
    if (mats.size() != j - 1) {
      error(tag + "xi must hold j-1 matrices");
      continue;
    }
    bool shapes_ok = true;
    for (const auto& m : mats) {
      if (m.size() != cfg.width) {
        error(tag + "xi matrices must be n x n");
        shapes_ok = false;
      }
    }
    if (shapes_ok && mats.back().determinant() == 0) {
      error(tag + "homomorphism condition violated (det M_{j,j-1} = 0)");
    }
    const auto& comps = cfg.eta[j - 2];
    if (comps.size() != cfg.width) {
      error(tag + "eta must hold n perturbation components");
      continue;
    }
    for (std::size_t k = 0; k < comps.size(); ++k) {
      const auto& p = comps[k];
      if (p.depth() != j - 1 || p.width() != cfg.width) {
        error(tag + "eta component " + std::to_string(k + 1) + " must live on (T^n)^(j-1)");
      } else if (!p.is_real_valued()) {
        error(tag + "perturbation not real-valued (component " + std::to_string(k + 1) + ")");
      }
    }
  }

  for (std::size_t k = 0; k < cfg.alpha.size(); ++k) {
    if (!std::isfinite(cfg.alpha[k])) {
      error("alpha entry " + std::to_string(k + 1) + " is not finite");
    } else if (looks_rational(cfg.alpha[k])) {
      warn("alpha entry " + std::to_string(k + 1) + " is visibly rational; rotation may not be dense");
    }
  }
  for (auto& d : audit_flow(cfg.flow)) out.push_back(std::move(d));
  return out;
}

FurstenbergSystem::FurstenbergSystem(SystemConfig cfg) : cfg_(std::move(cfg)) {
  Diagnostics diags = validate_config(cfg_);
  std::ostringstream errors;
  for (auto& d : diags) {
    if (d.severity == Severity::error) {
      errors << d.message << "; ";
    } else {
      warnings_.push_back(std::move(d));
    }
  }
  if (!errors.str().empty()) throw ConfigError("invalid system config: " + errors.str());
}

void FurstenbergSystem::check_factor(std::size_t j) const {
  if (j < 2 || j > cfg_.depth) throw DimensionError("factor index j=" + std::to_string(j) + " out of range");
}

void FurstenbergSystem::phi_lift(std::size_t j, std::span<const double> coords,
                                 std::span<double> out) const {
  const std::size_t n = cfg_.width;
  const auto& mats = cfg_.xi[j - 2];
  for (std::size_t r = 0; r < n; ++r) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < j; ++i) {
      const IntMatrix& m = mats[i];
      const double* block = coords.data() + i * n;
      for (std::size_t c = 0; c < n; ++c) {
        if (const auto e = m.at(r, c); e != 0) sum += static_cast<double>(e) * block[c];
      }
    }
    const TrigPolynomial& p = cfg_.eta[j - 2][r];
    if (!p.is_zero()) {
      const Complex value = p.evaluate_coords(coords);
      if (std::abs(value.imag()) > 1e-12) {
        throw NumericalContractError("perturbation evaluated with imaginary residue " +
                                     std::to_string(value.imag()));
      }
      sum += value.real();
    }
    out[r] = sum;
  }
}

std::vector<double> FurstenbergSystem::phi_eval(std::size_t j, const TorusPoint& x) const {
  check_factor(j);
  if (x.width() != cfg_.width || x.depth() < j - 1) throw DimensionError("phi_eval: point too small");
  std::vector<double> out(cfg_.width);
  phi_lift(j, x.coords(), out);
  for (double& v : out) v = wrap_unit(v);
  return out;
}

namespace {

// Stack storage for the per-step shift; orbit loops are hot enough that a heap
// allocation per step shows up.
class ShiftBuffer {
 public:
  explicit ShiftBuffer(std::size_t n) : n_(n) {
    if (n > local_.size()) heap_.resize(n);
  }
  std::span<double> span() { return heap_.empty() ? std::span<double>(local_.data(), n_) : std::span<double>(heap_); }

 private:
  std::size_t n_;
  std::array<double, 16> local_{};
  std::vector<double> heap_;
};

}  // namespace

void FurstenbergSystem::advance(std::span<double> coords, std::size_t depth) const {
  const std::size_t n = cfg_.width;
  ShiftBuffer buffer(n);
  const std::span<double> shift = buffer.span();
  // Descending so each block reads the pre-step values of the blocks before it.
  for (std::size_t j = depth; j >= 2; --j) {
    phi_lift(j, coords, shift);
    for (std::size_t k = 0; k < n; ++k) coords[(j - 1) * n + k] = wrap_unit(coords[(j - 1) * n + k] + shift[k]);
  }
  for (std::size_t k = 0; k < n; ++k) coords[k] = wrap_unit(coords[k] + cfg_.alpha[k]);
}

void FurstenbergSystem::retreat(std::span<double> coords, std::size_t depth) const {
  const std::size_t n = cfg_.width;
  for (std::size_t k = 0; k < n; ++k) coords[k] = wrap_unit(coords[k] - cfg_.alpha[k]);
  ShiftBuffer buffer(n);
  const std::span<double> shift = buffer.span();
  for (std::size_t j = 2; j <= depth; ++j) {
    phi_lift(j, coords, shift);
    for (std::size_t k = 0; k < n; ++k) coords[(j - 1) * n + k] = wrap_unit(coords[(j - 1) * n + k] - shift[k]);
  }
}

TorusPoint FurstenbergSystem::apply(const TorusPoint& x) const {
  if (x.width() != cfg_.width || x.depth() > cfg_.depth) throw DimensionError("apply: point shape mismatch");
  std::vector<double> coords(x.coords().begin(), x.coords().end());
  advance(coords, x.depth());
  return TorusPoint(x.depth(), x.width(), std::move(coords));
}

TorusPoint FurstenbergSystem::apply_inverse(const TorusPoint& x) const {
  if (x.width() != cfg_.width || x.depth() > cfg_.depth) throw DimensionError("apply_inverse: point shape mismatch");
  std::vector<double> coords(x.coords().begin(), x.coords().end());
  retreat(coords, x.depth());
  return TorusPoint(x.depth(), x.width(), std::move(coords));
}

Orbit FurstenbergSystem::orbit(const TorusPoint& x0, std::size_t count, Direction direction) const {
  if (x0.width() != cfg_.width || x0.depth() > cfg_.depth) throw DimensionError("orbit: point shape mismatch");
  return Orbit(*this, x0, count, direction);
}

Complex twist_factor(const FurstenbergSystem& system, std::size_t j, const FrequencyVector& chi,
                     std::span<const double> coords) {
  std::vector<double> phi(system.width());
  system.phi_lift(j, coords, phi);
  for (double& v : phi) v = wrap_unit(v);
  return std::polar(1.0, kTwoPi * char_phase(chi.entries(), phi));
}

Complex FurstenbergSystem::cocycle_eval(std::size_t j, const FrequencyVector& chi, const TorusPoint& x,
                                        std::size_t count) const {
  check_factor(j);
  if (chi.depth() != 1 || chi.width() != cfg_.width) throw DimensionError("cocycle_eval: chi must be a single-factor frequency");
  if (chi.is_zero()) throw ConfigError("cocycle_eval: chi must be a nontrivial character");
  if (x.width() != cfg_.width || x.depth() < j - 1) throw DimensionError("cocycle_eval: point too small");

  const std::size_t depth = j - 1;
  std::vector<double> coords(x.coords().begin(), x.coords().begin() + depth * cfg_.width);
  Complex product = 1.0;
  for (std::size_t step = 0; step < count; ++step) {
    product *= twist_factor(*this, j, chi, coords);
    if ((step + 1) % kCocycleRenormPeriod == 0) {
      const double modulus = std::abs(product);
      if (std::abs(modulus - 1.0) > 1e-9) {
        throw NumericalContractError("cocycle modulus drifted by " + std::to_string(modulus - 1.0));
      }
      product /= modulus;
    }
    advance(coords, depth);
  }
  return product;
}

Orbit::Orbit(const FurstenbergSystem& system, TorusPoint x0, std::size_t count, Direction direction)
    : system_(&system), x0_(std::move(x0)), count_(count), direction_(direction) {}

Orbit::iterator Orbit::begin() const {
  iterator it;
  it.system_ = system_;
  it.depth_ = x0_.depth();
  it.direction_ = direction_;
  it.coords_.assign(x0_.coords().begin(), x0_.coords().end());
  it.remaining_ = count_;
  return it;
}

TorusPoint Orbit::iterator::operator*() const {
  return TorusPoint(depth_, coords_.size() / depth_, coords_);
}

Orbit::iterator& Orbit::iterator::operator++() {
  if (remaining_ == 0) return *this;
  --remaining_;
  if (remaining_ > 0) {
    if (direction_ == Direction::forward) {
      system_->advance(coords_, depth_);
    } else {
      system_->retreat(coords_, depth_);
    }
  }
  return *this;
}

}  // namespace ergodic_spectra
