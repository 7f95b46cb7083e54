#include "plap/boundary_data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "plap/error.hpp"
#include "plap/rng.hpp"

namespace plap {
namespace {

class GenericSampler final : public BoundarySampler {
 public:
  GenericSampler(const BoundaryData& data, std::vector<Point> points)
      : data_(data), points_(std::move(points)) {}
  void fill(double t, std::span<double> out) const override {
    for (std::size_t i = 0; i < points_.size(); ++i) out[i] = data_.value(points_[i], t);
  }

 private:
  const BoundaryData& data_;
  std::vector<Point> points_;
};

class FunctionBoundary final : public BoundaryData {
 public:
  explicit FunctionBoundary(std::function<double(const Point&, double)> f) : f_(std::move(f)) {}
  double value(const Point& x, double t) const override { return f_(x, t); }

 private:
  std::function<double(const Point&, double)> f_;
};

class CombinedSampler final : public BoundarySampler {
 public:
  CombinedSampler(std::unique_ptr<BoundarySampler> a, double wa, std::unique_ptr<BoundarySampler> b,
                  double wb, double c, std::size_t size)
      : a_(std::move(a)), b_(std::move(b)), wa_(wa), wb_(wb), c_(c), scratch_(size) {}
  void fill(double t, std::span<double> out) const override {
    a_->fill(t, out);
    b_->fill(t, scratch_);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = wa_ * out[i] + wb_ * scratch_[i] + c_;
  }

 private:
  std::unique_ptr<BoundarySampler> a_, b_;
  double wa_, wb_, c_;
  mutable std::vector<double> scratch_;
};

class CombinedBoundary final : public BoundaryData {
 public:
  CombinedBoundary(BoundaryPtr a, double wa, BoundaryPtr b, double wb, double c)
      : a_(std::move(a)), b_(std::move(b)), wa_(wa), wb_(wb), c_(c) {}
  double value(const Point& x, double t) const override {
    return wa_ * a_->value(x, t) + wb_ * b_->value(x, t) + c_;
  }
  std::unique_ptr<BoundarySampler> sampler(std::vector<Point> points) const override {
    const std::size_t size = points.size();
    auto sa = a_->sampler(points);
    auto sb = b_->sampler(std::move(points));
    return std::make_unique<CombinedSampler>(std::move(sa), wa_, std::move(sb), wb_, c_, size);
  }

 private:
  BoundaryPtr a_, b_;
  double wa_, wb_, c_;
};

constexpr double kHalfPi = 0.5 * std::numbers::pi;

double spatial_angle(const TrigTerm& term, const Point& x, int n) {
  double kx = 0.0;
  for (int a = 0; a < n; ++a) kx += static_cast<double>(term.k[a]) * x[a];
  return kHalfPi * kx + term.phase;
}

// cos(A + B) = cos A cos B - sin A sin B with the spatial angle A cached per
// point, so each level costs one multiply-add pair per term and point.
class TrigSampler final : public BoundarySampler {
 public:
  TrigSampler(const TrigBoundary& data, const std::vector<Point>& points)
      : terms_(data.terms()), scale_(data.scale()), count_(points.size()) {
    cos_a_.resize(terms_.size() * count_);
    sin_a_.resize(terms_.size() * count_);
    for (std::size_t j = 0; j < terms_.size(); ++j)
      for (std::size_t i = 0; i < count_; ++i) {
        const double a = spatial_angle(terms_[j], points[i], data.dim());
        cos_a_[j * count_ + i] = terms_[j].amp * std::cos(a);
        sin_a_[j * count_ + i] = terms_[j].amp * std::sin(a);
      }
  }

  void fill(double t, std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t j = 0; j < terms_.size(); ++j) {
      const double b = kHalfPi * static_cast<double>(terms_[j].omega) * t;
      const double cb = std::cos(b);
      const double sb = std::sin(b);
      const double* ca = cos_a_.data() + j * count_;
      const double* sa = sin_a_.data() + j * count_;
      for (std::size_t i = 0; i < count_; ++i) out[i] += ca[i] * cb - sa[i] * sb;
    }
    for (double& v : out) v *= scale_;
  }

 private:
  std::vector<TrigTerm> terms_;
  double scale_;
  std::size_t count_;
  std::vector<double> cos_a_, sin_a_;
};

}  // namespace

std::unique_ptr<BoundarySampler> BoundaryData::sampler(std::vector<Point> points) const {
  return std::make_unique<GenericSampler>(*this, std::move(points));
}

BoundaryPtr make_function_boundary(std::function<double(const Point&, double)> f) {
  return std::make_shared<FunctionBoundary>(std::move(f));
}

BoundaryPtr make_combined_boundary(BoundaryPtr a, double weight_a, BoundaryPtr b, double weight_b,
                                   double constant) {
  return std::make_shared<CombinedBoundary>(std::move(a), weight_a, std::move(b), weight_b, constant);
}

TrigBoundary::TrigBoundary(int n, std::vector<TrigTerm> terms, double scale)
    : n_(n), terms_(std::move(terms)), scale_(scale) {}

double TrigBoundary::raw_value(const Point& x, double t) const {
  double sum = 0.0;
  for (const auto& term : terms_)
    sum += term.amp * std::cos(spatial_angle(term, x, n_) + kHalfPi * static_cast<double>(term.omega) * t);
  return sum;
}

double TrigBoundary::value(const Point& x, double t) const { return scale_ * raw_value(x, t); }

std::unique_ptr<BoundarySampler> TrigBoundary::sampler(std::vector<Point> points) const {
  return std::make_unique<TrigSampler>(*this, points);
}

std::vector<std::pair<Point, double>> normalization_lattice(int n) {
  constexpr int kSide = 33;  // [-1, 1] at spacing 1/16
  constexpr int kLevels = 17;  // [-1, 0] at spacing 1/16
  std::size_t spatial = 1;
  for (int a = 0; a < n; ++a) spatial *= kSide;
  std::vector<std::pair<Point, double>> out;
  out.reserve(spatial * kLevels);
  for (int m = 0; m < kLevels; ++m) {
    const double t = -1.0 + m / 16.0;
    for (std::size_t node = 0; node < spatial; ++node) {
      Point x{};
      std::size_t rest = node;
      for (int a = n - 1; a >= 0; --a) {
        x[a] = -1.0 + static_cast<double>(rest % kSide) / 16.0;
        rest /= kSide;
      }
      out.emplace_back(x, t);
    }
  }
  return out;
}

std::shared_ptr<const TrigBoundary> generate_boundary_data(std::uint64_t seed, int smoothness, int n) {
  if (smoothness < 1) throw ConfigError("data smoothness must be at least 1");
  if (n < 1 || n > kMaxDim) throw ConfigError("dimension must be 1, 2 or 3");
  SplitMix64 rng(seed);
  std::vector<TrigTerm> terms(static_cast<std::size_t>(2 * smoothness + 2));
  for (auto& term : terms) {
    double k2 = 0.0;
    for (int a = 0; a < n; ++a) {
      term.k[a] = rng.integer(-smoothness, smoothness);
      k2 += static_cast<double>(term.k[a] * term.k[a]);
    }
    term.omega = rng.integer(0, smoothness);
    const double u_amp = rng.uniform();
    const double u_phase = rng.uniform();
    term.amp = (2.0 * u_amp - 1.0) / (1.0 + k2 + static_cast<double>(term.omega * term.omega));
    term.phase = 2.0 * std::numbers::pi * u_phase;
  }
  TrigBoundary raw(n, terms, 1.0);
  double sup = 0.0;
  for (const auto& [x, t] : normalization_lattice(n)) sup = std::max(sup, std::abs(raw.raw_value(x, t)));
  if (!(sup > 0.0)) throw NumericalError("generated boundary data vanishes on the reference lattice");
  return std::make_shared<TrigBoundary>(n, std::move(terms), 1.0 / sup);
}

}  // namespace plap
