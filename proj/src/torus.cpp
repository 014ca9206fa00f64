#include "ergodic_spectra/torus.hpp"

#include <cmath>
#include <string>

#include "ergodic_spectra/errors.hpp"

namespace ergodic_spectra {

double wrap_unit(double value) {
  double frac = value - std::floor(value);
  if (frac >= 1.0) frac = 0.0;
  return frac;
}

TorusPoint::TorusPoint(std::size_t depth, std::size_t width)
    : depth_(depth), width_(width), coords_(depth * width, 0.0) {
  if (depth == 0 || width == 0) throw DimensionError("torus point needs depth >= 1 and width >= 1");
}

TorusPoint::TorusPoint(std::size_t depth, std::size_t width, std::vector<double> coords)
    : depth_(depth), width_(width), coords_(std::move(coords)) {
  if (depth == 0 || width == 0) throw DimensionError("torus point needs depth >= 1 and width >= 1");
  if (coords_.size() != depth * width) throw DimensionError("torus point coordinate count mismatch");
  for (double& c : coords_) c = wrap_unit(c);
}

TorusPoint TorusPoint::from_blocks(const std::vector<std::vector<double>>& blocks) {
  if (blocks.empty()) throw DimensionError("torus point needs at least one block");
  const std::size_t width = blocks.front().size();
  std::vector<double> flat;
  flat.reserve(blocks.size() * width);
  for (const auto& b : blocks) {
    if (b.size() != width) throw DimensionError("torus point blocks differ in length");
    flat.insert(flat.end(), b.begin(), b.end());
  }
  return TorusPoint(blocks.size(), width, std::move(flat));
}

std::span<const double> TorusPoint::block(std::size_t factor) const {
  if (factor < 1 || factor > depth_) {
    throw DimensionError("factor index " + std::to_string(factor) + " out of range");
  }
  return std::span<const double>(coords_).subspan((factor - 1) * width_, width_);
}

double TorusPoint::operator()(std::size_t factor, std::size_t k) const {
  return block(factor)[k];
}

TorusPoint TorusPoint::prefix(std::size_t depth) const {
  if (depth < 1 || depth > depth_) throw DimensionError("prefix depth out of range");
  return TorusPoint(depth, width_,
                    std::vector<double>(coords_.begin(), coords_.begin() + depth * width_));
}

TorusPoint torus_translate(const TorusPoint& p, const TorusPoint& q) {
  if (p.depth() != q.depth() || p.width() != q.width()) {
    throw DimensionError("torus_translate: dimension mismatch");
  }
  std::vector<double> sum(p.coords().size());
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = p.coords()[i] + q.coords()[i];
  return TorusPoint(p.depth(), p.width(), std::move(sum));
}

FrequencyVector::FrequencyVector(std::size_t depth, std::size_t width)
    : depth_(depth), width_(width), entries_(depth * width, 0) {}

FrequencyVector::FrequencyVector(std::size_t depth, std::size_t width,
                                 std::vector<std::int64_t> entries)
    : depth_(depth), width_(width), entries_(std::move(entries)) {
  if (entries_.size() != depth * width) throw DimensionError("frequency entry count mismatch");
}

FrequencyVector FrequencyVector::from_blocks(const std::vector<std::vector<std::int64_t>>& blocks) {
  if (blocks.empty()) throw DimensionError("frequency vector needs at least one block");
  const std::size_t width = blocks.front().size();
  std::vector<std::int64_t> flat;
  for (const auto& b : blocks) {
    if (b.size() != width) throw DimensionError("frequency blocks differ in length");
    flat.insert(flat.end(), b.begin(), b.end());
  }
  return FrequencyVector(blocks.size(), width, std::move(flat));
}

std::span<const std::int64_t> FrequencyVector::block(std::size_t factor) const {
  if (factor < 1 || factor > depth_) {
    throw DimensionError("factor index " + std::to_string(factor) + " out of range");
  }
  return std::span<const std::int64_t>(entries_).subspan((factor - 1) * width_, width_);
}

bool FrequencyVector::is_zero() const {
  for (auto e : entries_) {
    if (e != 0) return false;
  }
  return true;
}

FrequencyVector FrequencyVector::operator-() const {
  FrequencyVector out = *this;
  for (auto& e : out.entries_) e = -e;
  return out;
}

FrequencyVector FrequencyVector::operator+(const FrequencyVector& other) const {
  if (depth_ != other.depth_ || width_ != other.width_) {
    throw DimensionError("frequency addition: dimension mismatch");
  }
  FrequencyVector out = *this;
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] += other.entries_[i];
  return out;
}

FrequencyVector FrequencyVector::padded(std::size_t depth) const {
  if (depth < depth_) throw DimensionError("cannot pad a frequency to a smaller depth");
  FrequencyVector out(depth, width_);
  std::copy(entries_.begin(), entries_.end(), out.entries_.begin());
  return out;
}

std::strong_ordering FrequencyVector::operator<=>(const FrequencyVector& other) const {
  if (auto c = depth_ <=> other.depth_; c != 0) return c;
  if (auto c = width_ <=> other.width_; c != 0) return c;
  return entries_ <=> other.entries_;
}

double char_phase(std::span<const std::int64_t> m, std::span<const double> coords) {
  // Reducing each product separately keeps large frequencies from eating precision.
  long double phase = 0.0L;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    const long double prod = static_cast<long double>(m[i]) * coords[i];
    phase += prod - std::floor(prod);
  }
  return wrap_unit(static_cast<double>(phase - std::floor(phase)));
}

Complex char_eval(const FrequencyVector& m, const TorusPoint& x) {
  if (m.depth() != x.depth() || m.width() != x.width()) {
    throw DimensionError("char_eval: dimension mismatch");
  }
  return std::polar(1.0, kTwoPi * char_phase(m.entries(), x.coords()));
}

}  // namespace ergodic_spectra
