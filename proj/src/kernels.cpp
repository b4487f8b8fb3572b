#include "parashear/kernels.hpp"

#include "parashear/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <string>

namespace parashear::kernels {

using torus::Phase;
using torus::SkewShift;
using torus::TorusPoint;

Accumulation accumulation_from_env() {
  const char* v = std::getenv("PARASHEAR_PRECISION");
  if (v == nullptr) return Accumulation::Double;
  const std::string s(v);
  if (s == "extended" || s == "80" || s == "long" || s == "long double") return Accumulation::Extended;
  return Accumulation::Double;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
using cplx = std::complex<double>;

cplx unit_phase(Phase p) {
  const double a = kTwoPi * p.to_double();
  return {std::cos(a), std::sin(a)};
}

template <class Acc>
struct Neumaier {
  Acc sum = 0;
  Acc comp = 0;

  void add(Acc v) {
    const Acc t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  Acc value() const { return sum + comp; }
};

// Evaluates f along the orbit of p from index `start` by phase recurrence,
// recomputing the phases exactly every kReanchor steps.
class Walker {
 public:
  Walker(const SkewShift& ss, const roof::RoofFunction& f, const TorusPoint& p, std::int64_t start)
      : ss_(ss), terms_(f.half_terms()), p_(p), j_(start), ea_(unit_phase(ss.alpha)),
        eb_(unit_phase(ss.beta)), deg_(std::max(1, f.max_degree())),
        px_(static_cast<std::size_t>(deg_) + 1, cplx(1.0)), py_(static_cast<std::size_t>(deg_) + 1, cplx(1.0)) {
    anchor();
  }

  double next() {
    if (since_anchor_ == kReanchor) anchor();
    px_[1] = ex_;
    py_[1] = ey_;
    for (int k = 2; k <= deg_; ++k) {
      px_[static_cast<std::size_t>(k)] = px_[static_cast<std::size_t>(k - 1)] * ex_;
      py_[static_cast<std::size_t>(k)] = py_[static_cast<std::size_t>(k - 1)] * ey_;
    }
    double acc = 0.0;
    for (const auto& t : terms_) {
      const cplx xm = t.m >= 0 ? px_[static_cast<std::size_t>(t.m)]
                               : std::conj(px_[static_cast<std::size_t>(-t.m)]);
      const cplx v = t.w * xm * py_[static_cast<std::size_t>(t.n)];
      acc += v.real();
    }
    ey_ *= ex_ * eb_;
    ex_ *= ea_;
    ++j_;
    ++since_anchor_;
    return acc;
  }

 private:
  void anchor() {
    const TorusPoint q = torus::skew_iterate(ss_, j_, p_);
    ex_ = unit_phase(q.x);
    ey_ = unit_phase(q.y);
    since_anchor_ = 0;
  }

  const SkewShift& ss_;
  const std::vector<roof::RoofFunction::Term>& terms_;
  TorusPoint p_;
  std::int64_t j_;
  cplx ea_;
  cplx eb_;
  int deg_;
  std::vector<cplx> px_;
  std::vector<cplx> py_;
  cplx ex_;
  cplx ey_;
  std::int64_t since_anchor_ = 0;
};

struct ChunkPlan {
  std::int64_t n0;
  std::int64_t count;
  std::int64_t chunks;

  std::int64_t begin(std::int64_t c) const { return n0 + c * kChunk; }
  std::int64_t size(std::int64_t c) const { return std::min(kChunk, count - c * kChunk); }
};

ChunkPlan plan(std::int64_t n0, std::int64_t count) {
  if (count < 0) throw PreconditionViolated("kernels: negative range");
  return {n0, count, (count + kChunk - 1) / kChunk};
}

// Per-chunk totals (and optional local prefixes into out[1 + offset]) for
// g(j) = f(T^j p) - [has_q] f(T^j q).
template <class Acc>
std::vector<Acc> chunk_pass(const SkewShift& ss, const roof::RoofFunction& f, const TorusPoint& p,
                            const TorusPoint* q, const ChunkPlan& pl, double* local_prefix) {
  std::vector<Acc> totals(static_cast<std::size_t>(pl.chunks));
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < pl.chunks; ++c) {
    Walker wp(ss, f, p, pl.begin(c));
    Neumaier<Acc> acc;
    const std::int64_t len = pl.size(c);
    if (q != nullptr) {
      Walker wq(ss, f, *q, pl.begin(c));
      for (std::int64_t i = 0; i < len; ++i) {
        const double a = wp.next();
        const double b = wq.next();
        acc.add(static_cast<Acc>(a - b));
        if (local_prefix) local_prefix[c * kChunk + i + 1] = static_cast<double>(acc.value());
      }
    } else {
      for (std::int64_t i = 0; i < len; ++i) {
        acc.add(static_cast<Acc>(wp.next()));
        if (local_prefix) local_prefix[c * kChunk + i + 1] = static_cast<double>(acc.value());
      }
    }
    totals[static_cast<std::size_t>(c)] = acc.value();
  }
  return totals;
}

template <class Acc>
double total_of(const SkewShift& ss, const roof::RoofFunction& f, const TorusPoint& p,
                const TorusPoint* q, std::int64_t n0, std::int64_t n1) {
  const auto pl = plan(n0, n1 - n0);
  const auto totals = chunk_pass<Acc>(ss, f, p, q, pl, nullptr);
  Neumaier<Acc> acc;
  for (const Acc t : totals) acc.add(t);
  return static_cast<double>(acc.value());
}

template <class Acc>
std::vector<double> prefix_of(const SkewShift& ss, const roof::RoofFunction& f, const TorusPoint& p,
                              const TorusPoint* q, std::int64_t n0, std::int64_t count) {
  const auto pl = plan(n0, count);
  std::vector<double> out(static_cast<std::size_t>(count) + 1, 0.0);
  const auto totals = chunk_pass<Acc>(ss, f, p, q, pl, out.data());
  std::vector<Acc> offsets(totals.size());
  Neumaier<Acc> run;
  for (std::size_t c = 0; c < totals.size(); ++c) {
    offsets[c] = run.value();
    run.add(totals[c]);
  }
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 1; c < pl.chunks; ++c) {
    const Acc off = offsets[static_cast<std::size_t>(c)];
    const std::int64_t len = pl.size(c);
    for (std::int64_t i = 0; i < len; ++i) {
      double& slot = out[static_cast<std::size_t>(c * kChunk + i + 1)];
      slot = static_cast<double>(off + static_cast<Acc>(slot));
    }
  }
  return out;
}

template <class Fn>
auto dispatch(Accumulation acc, Fn&& fn) {
  if (acc == Accumulation::Extended) return fn(static_cast<long double>(0));
  return fn(0.0);
}

}  // namespace

double orbit_sum(const SkewShift& ss, const roof::RoofFunction& f, const TorusPoint& p,
                 std::int64_t n0, std::int64_t n1, Accumulation acc) {
  return dispatch(acc, [&](auto tag) { return total_of<decltype(tag)>(ss, f, p, nullptr, n0, n1); });
}

double difference_sum(const SkewShift& ss, const roof::RoofFunction& f, const TorusPoint& p,
                      const TorusPoint& q, std::int64_t n0, std::int64_t n1, Accumulation acc) {
  return dispatch(acc, [&](auto tag) { return total_of<decltype(tag)>(ss, f, p, &q, n0, n1); });
}

std::vector<double> orbit_prefix(const SkewShift& ss, const roof::RoofFunction& f,
                                 const TorusPoint& p, std::int64_t n0, std::int64_t count,
                                 Accumulation acc) {
  return dispatch(acc,
                  [&](auto tag) { return prefix_of<decltype(tag)>(ss, f, p, nullptr, n0, count); });
}

std::vector<double> difference_prefix(const SkewShift& ss, const roof::RoofFunction& f,
                                      const TorusPoint& p, const TorusPoint& q, std::int64_t n0,
                                      std::int64_t count, Accumulation acc) {
  return dispatch(acc,
                  [&](auto tag) { return prefix_of<decltype(tag)>(ss, f, p, &q, n0, count); });
}

namespace {

struct Kahan {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    const double y = v - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

double orbit_sum_serial(const SkewShift& ss, const roof::RoofFunction& f, const TorusPoint& p,
                        std::int64_t n0, std::int64_t n1) {
  Kahan k;
  TorusPoint cur = torus::skew_iterate(ss, n0, p);
  for (std::int64_t j = n0; j < n1; ++j) {
    k.add(f(cur));
    cur = torus::skew_step(ss, cur);
  }
  return k.sum;
}

double difference_sum_serial(const SkewShift& ss, const roof::RoofFunction& f, const TorusPoint& p,
                             const TorusPoint& q, std::int64_t n0, std::int64_t n1) {
  Kahan k;
  TorusPoint a = torus::skew_iterate(ss, n0, p);
  TorusPoint b = torus::skew_iterate(ss, n0, q);
  for (std::int64_t j = n0; j < n1; ++j) {
    k.add(f(a) - f(b));
    a = torus::skew_step(ss, a);
    b = torus::skew_step(ss, b);
  }
  return k.sum;
}

std::vector<double> difference_prefix_serial(const SkewShift& ss, const roof::RoofFunction& f,
                                             const TorusPoint& p, const TorusPoint& q,
                                             std::int64_t n0, std::int64_t count) {
  std::vector<double> out(static_cast<std::size_t>(count) + 1, 0.0);
  Kahan k;
  TorusPoint a = torus::skew_iterate(ss, n0, p);
  TorusPoint b = torus::skew_iterate(ss, n0, q);
  for (std::int64_t i = 0; i < count; ++i) {
    k.add(f(a) - f(b));
    out[static_cast<std::size_t>(i) + 1] = k.sum;
    a = torus::skew_step(ss, a);
    b = torus::skew_step(ss, b);
  }
  return out;
}

}  // namespace parashear::kernels
