#include "parashear/roof.hpp"

#include "parashear/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace parashear::roof {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kGrid = 256;

bool is_representative(const Mode& k) { return k.second > 0 || (k.second == 0 && k.first > 0); }

}  // namespace

RoofFunction::RoofFunction(std::map<Mode, std::complex<double>> coeffs) : coeffs_(std::move(coeffs)) {
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    if (it->second == std::complex<double>(0.0, 0.0))
      it = coeffs_.erase(it);
    else
      ++it;
  }
  double lip_x = 0.0;
  double lip_y = 0.0;
  for (const auto& [k, c] : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw PreconditionViolated("roof: non-finite coefficient");
    const Mode partner{-k.first, -k.second};
    const auto it = coeffs_.find(partner);
    const std::complex<double> pc = it == coeffs_.end() ? 0.0 : it->second;
    if (std::abs(pc - std::conj(c)) > 1e-14 * std::max(1.0, std::abs(c))) {
      std::ostringstream msg;
      msg << "roof: coefficient (" << k.first << "," << k.second
          << ") lacks its conjugate partner, f would not be real";
      throw PreconditionViolated(msg.str());
    }
    degree_ = std::max({degree_, std::abs(k.first), std::abs(k.second)});
    lip_x += kTwoPi * std::abs(c) * std::abs(k.first);
    lip_y += kTwoPi * std::abs(c) * std::abs(k.second);
    if (k == Mode{0, 0})
      half_.push_back({0, 0, {c.real(), 0.0}});
    else if (is_representative(k))
      half_.push_back({k.first, k.second, 2.0 * c});
  }

  double lo = INFINITY;
  double hi = -INFINITY;
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      const double v = (*this)(static_cast<double>(i) / kGrid, static_cast<double>(j) / kGrid);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const double margin = (lip_x + lip_y) * 0.5 / kGrid;
  floor_ = lo - margin;
  ceiling_ = hi + margin;
  if (!(floor_ > 0.0)) {
    std::ostringstream msg;
    msg << "roof: certified lower bound " << floor_ << " is not positive";
    throw PreconditionViolated(msg.str());
  }
}

double RoofFunction::operator()(double x, double y) const {
  double acc = 0.0;
  for (const auto& t : half_) {
    const double ph = kTwoPi * (t.m * x + t.n * y);
    acc += t.w.real() * std::cos(ph) - t.w.imag() * std::sin(ph);
  }
  return acc;
}

double RoofFunction::operator()(const torus::TorusPoint& p) const {
  return (*this)(p.x.to_double(), p.y.to_double());
}

double RoofFunction::mean() const {
  const auto it = coeffs_.find({0, 0});
  return it == coeffs_.end() ? 0.0 : it->second.real();
}

bool RoofFunction::is_constant() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const auto& kv) { return kv.first == Mode{0, 0}; });
}

RoofFunction default_roof() {
  return RoofFunction({{{0, 0}, {1.0, 0.0}},
                       {{0, 1}, {0.1, 0.0}},
                       {{0, -1}, {0.1, 0.0}},
                       {{1, 0}, {0.0, -0.05}},
                       {{-1, 0}, {0.0, 0.05}}});
}

RoofFunction constant_roof(double value) { return RoofFunction({{{0, 0}, {value, 0.0}}}); }

RoofFunction roof_from_rows(const std::vector<std::array<double, 4>>& rows) {
  std::map<Mode, std::complex<double>> coeffs;
  for (const auto& r : rows) {
    const int m = static_cast<int>(r[0]);
    const int n = static_cast<int>(r[1]);
    if (m != r[0] || n != r[1]) throw ConfigError("roof: mode indices must be integers");
    coeffs[{m, n}] += std::complex<double>(r[2], r[3]);
  }
  return RoofFunction(std::move(coeffs));
}

double sobolev_norm(const RoofFunction& f, double s) {
  double acc = 0.0;
  for (const auto& [k, c] : f.coefficients()) {
    const double w = 1.0 + static_cast<double>(k.first) * k.first + static_cast<double>(k.second) * k.second;
    acc += std::norm(c) * std::pow(w, s);
  }
  return std::sqrt(acc);
}

}  // namespace parashear::roof
