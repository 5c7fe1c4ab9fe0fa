#include "cflow/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace cflow {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

WeightFunction::WeightFunction(double cap) : cap_(cap) {
  if (!(cap > 0.0) || !std::isfinite(cap))
    throw InputError("capacity must be positive and finite");
}

void WeightFunction::check_domain(double x) const {
  if (!(x >= 0.0) || !(x <= cap_))
    throw InputError("flow value " + fmt(x) + " outside domain [0, " +
                     fmt(cap_) + "]");
}

namespace {

class LinearWeight final : public WeightFunction {
public:
  LinearWeight(double w, double cap) : WeightFunction(cap), w_(w) {}

  double value(double x) const override {
    check_domain(x);
    return w_ * x;
  }
  double gradient(double x) const override {
    check_domain(x);
    return w_;
  }
  double forward_headroom(double x, double theta) const override {
    check_domain(x);
    return w_ >= theta ? cap_ - x : 0.0;
  }
  double backward_headroom(double x, double theta) const override {
    check_domain(x);
    return w_ <= theta ? x : 0.0;
  }
  double min_gradient() const override { return w_; }
  double max_gradient() const override { return w_; }
  bool is_linear() const override { return true; }
  double linear_weight() const override { return w_; }
  std::string spec() const override { return "lin " + fmt(w_); }

private:
  double w_;
};

class QuadWeight final : public WeightFunction {
public:
  QuadWeight(double a, double b, double cap) : WeightFunction(cap), a_(a), b_(b) {
    if (b < 0.0) throw InputError("quad curvature must be non-negative");
  }

  double value(double x) const override {
    check_domain(x);
    return a_ * x - b_ * x * x;
  }
  double gradient(double x) const override {
    check_domain(x);
    return a_ - 2.0 * b_ * x;
  }
  double forward_headroom(double x, double theta) const override {
    check_domain(x);
    if (gradient(x) < theta) return 0.0;
    if (b_ == 0.0) return cap_ - x;
    double crossing = (a_ - theta) / (2.0 * b_);
    return std::min(cap_ - x, crossing - x);
  }
  double backward_headroom(double x, double theta) const override {
    check_domain(x);
    if (gradient(x) > theta) return 0.0;
    if (b_ == 0.0) return x;
    double crossing = (a_ - theta) / (2.0 * b_);
    return x - std::max(0.0, crossing);
  }
  double min_gradient() const override { return a_ - 2.0 * b_ * cap_; }
  double max_gradient() const override { return a_; }
  std::string spec() const override { return "quad " + fmt(a_) + " " + fmt(b_); }

private:
  double a_, b_;
};

class PwlWeight final : public WeightFunction {
public:
  PwlWeight(std::vector<double> bp, std::vector<double> g, double cap)
      : WeightFunction(cap), bp_(std::move(bp)), g_(std::move(g)) {
    if (bp_.empty() || bp_.size() != g_.size())
      throw InputError("pwl needs matching breakpoint/gradient lists");
    double prev = 0.0;
    for (size_t i = 0; i < bp_.size(); ++i) {
      if (!(bp_[i] > prev))
        throw InputError("pwl breakpoints must be strictly increasing");
      if (i > 0 && !(g_[i] < g_[i - 1]))
        throw InputError("pwl gradients must be strictly decreasing");
      prev = bp_[i];
    }
    if (bp_.back() != cap_)
      throw InputError("pwl breakpoints must end at the capacity");
    prefix_.resize(bp_.size());
    double acc = 0.0, lo = 0.0;
    for (size_t i = 0; i < bp_.size(); ++i) {
      acc += g_[i] * (bp_[i] - lo);
      prefix_[i] = acc;
      lo = bp_[i];
    }
  }

  double value(double x) const override {
    check_domain(x);
    size_t i = segment_at(x);
    double lo = i == 0 ? 0.0 : bp_[i - 1];
    double base = i == 0 ? 0.0 : prefix_[i - 1];
    return base + g_[i] * (x - lo);
  }

  double gradient(double x) const override {
    check_domain(x);
    return g_[segment_at(x)];
  }

  double gradient_before(double x) const override {
    check_domain(x);
    if (x == 0.0) return g_.front();
    // segment owning the mass just below x
    size_t i = std::lower_bound(bp_.begin(), bp_.end(), x) - bp_.begin();
    return g_[std::min(i, g_.size() - 1)];
  }

  double forward_headroom(double x, double theta) const override {
    check_domain(x);
    size_t i = segment_at(x);
    if (x == cap_ || g_[i] < theta) return 0.0;
    while (i + 1 < g_.size() && g_[i + 1] >= theta) ++i;
    return bp_[i] - x;
  }

  double backward_headroom(double x, double theta) const override {
    check_domain(x);
    if (x == 0.0) return 0.0;
    // walk down whole segments while their gradient stays <= theta
    size_t i = std::lower_bound(bp_.begin(), bp_.end(), x) - bp_.begin();
    i = std::min(i, g_.size() - 1);
    if (g_[i] > theta) return 0.0;
    while (i > 0 && g_[i - 1] <= theta) --i;
    double lo = i == 0 ? 0.0 : bp_[i - 1];
    return x - lo;
  }

  double min_gradient() const override { return g_.back(); }
  double max_gradient() const override { return g_.front(); }

  std::string spec() const override {
    std::ostringstream os;
    os << "pwl " << g_.size();
    for (size_t i = 0; i < g_.size(); ++i)
      os << " " << fmt(bp_[i]) << " " << fmt(g_[i]);
    return os.str();
  }

private:
  // index of the segment whose gradient applies to the next unit above x
  size_t segment_at(double x) const {
    if (x == cap_) return g_.size() - 1;
    size_t i = std::upper_bound(bp_.begin(), bp_.end(), x) - bp_.begin();
    return std::min(i, g_.size() - 1);
  }

  std::vector<double> bp_, g_, prefix_;
};

class GenericWeight final : public WeightFunction {
public:
  GenericWeight(std::function<double(double)> grad, double lo, double hi,
                double cap, double tol)
      : WeightFunction(cap), grad_(std::move(grad)), lo_(lo), hi_(hi),
        tol_(tol > 0.0 ? tol : 1e-9 * cap) {
    if (!std::isfinite(lo_) || !std::isfinite(hi_) || lo_ > hi_)
      throw InputError("generic family requires finite gradient bounds");
  }

  double value(double x) const override {
    check_domain(x);
    return integrate(0.0, x);
  }
  double gradient(double x) const override {
    check_domain(x);
    return grad_(x);
  }
  double forward_headroom(double x, double theta) const override {
    check_domain(x);
    if (grad_(x) < theta) return 0.0;
    if (grad_(cap_) >= theta) return cap_ - x;
    // bisect for the crossing of the non-increasing gradient
    double lo = x, hi = cap_;
    while (hi - lo > tol_) {
      double mid = 0.5 * (lo + hi);
      (grad_(mid) >= theta ? lo : hi) = mid;
    }
    return lo - x;
  }
  double backward_headroom(double x, double theta) const override {
    check_domain(x);
    if (grad_(x) > theta) return 0.0;
    if (grad_(0.0) <= theta) return x;
    double lo = 0.0, hi = x;
    while (hi - lo > tol_) {
      double mid = 0.5 * (lo + hi);
      (grad_(mid) <= theta ? hi : lo) = mid;
    }
    return x - hi;
  }
  double min_gradient() const override { return lo_; }
  double max_gradient() const override { return hi_; }

private:
  // adaptive Simpson to relative tolerance 1e-10
  double integrate(double a, double b) const {
    if (b <= a) return 0.0;
    double fa = grad_(a), fb = grad_(b), fm = grad_(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double scale = std::max(1.0, std::abs(whole));
    return simpson(a, b, fa, fm, fb, whole, 1e-10 * scale, 40);
  }
  double simpson(double a, double b, double fa, double fm, double fb,
                 double whole, double tol, int depth) const {
    double m = 0.5 * (a + b);
    double lm = grad_(0.5 * (a + m)), rm = grad_(0.5 * (m + b));
    double left = (m - a) / 6.0 * (fa + 4.0 * lm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * rm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
      return left + right + (left + right - whole) / 15.0;
    return simpson(a, m, fa, lm, fm, left, 0.5 * tol, depth - 1) +
           simpson(m, b, fm, rm, fb, right, 0.5 * tol, depth - 1);
  }

  std::function<double(double)> grad_;
  double lo_, hi_, tol_;
};

class PaddedWeight final : public WeightFunction {
public:
  PaddedWeight(WeightPtr base, double bump, double knee)
      : WeightFunction(base->cap()), base_(std::move(base)), bump_(bump),
        knee_(knee) {
    if (!(knee_ > 0.0) || knee_ >= cap_)
      throw InputError("padding knee must lie inside the domain");
    ramp_ = (base_->value(knee_) + bump_ * knee_) / knee_;
  }

  double value(double x) const override {
    check_domain(x);
    if (x <= knee_) return ramp_ * x;
    return base_->value(x) + bump_ * x;
  }
  double gradient(double x) const override {
    check_domain(x);
    if (x < knee_) return ramp_;
    return base_->gradient(x) + bump_;
  }
  double gradient_before(double x) const override {
    check_domain(x);
    if (x <= knee_) return ramp_;
    return base_->gradient_before(x) + bump_;
  }
  double forward_headroom(double x, double theta) const override {
    check_domain(x);
    if (x < knee_) {
      if (ramp_ < theta) return 0.0;
      return (knee_ - x) + base_->forward_headroom(knee_, theta - bump_);
    }
    return base_->forward_headroom(x, theta - bump_);
  }
  double backward_headroom(double x, double theta) const override {
    check_domain(x);
    if (x <= knee_) return ramp_ <= theta ? x : 0.0;
    double d = base_->backward_headroom(x, theta - bump_);
    if (x - d > knee_) return d;
    // removable range reaches into the ramp
    return ramp_ <= theta ? x : x - knee_;
  }
  double min_gradient() const override { return base_->min_gradient() + bump_; }
  double max_gradient() const override {
    return std::max(ramp_, base_->max_gradient() + bump_);
  }

private:
  WeightPtr base_;
  double bump_, knee_, ramp_;
};

}  // namespace

WeightPtr make_linear(double w, double cap) {
  return std::make_shared<LinearWeight>(w, cap);
}

WeightPtr make_quadratic(double a, double b, double cap) {
  return std::make_shared<QuadWeight>(a, b, cap);
}

WeightPtr make_piecewise(std::vector<double> breakpoints,
                         std::vector<double> gradients, double cap) {
  return std::make_shared<PwlWeight>(std::move(breakpoints),
                                     std::move(gradients), cap);
}

WeightPtr make_generic(std::function<double(double)> gradient,
                       double grad_lower, double grad_upper, double cap,
                       double flow_tol) {
  return std::make_shared<GenericWeight>(std::move(gradient), grad_lower,
                                         grad_upper, cap, flow_tol);
}

WeightPtr make_padded(WeightPtr base, double bump, double knee) {
  return std::make_shared<PaddedWeight>(std::move(base), bump, knee);
}

}  // namespace cflow
