#pragma once

#include "parashear/roof.hpp"
#include "parashear/torus.hpp"

#include <cstdint>
#include <vector>

namespace parashear::kernels {

enum class Accumulation { Double, Extended };

/// PARASHEAR_PRECISION: "extended" / "80" / "long" select long double
/// accumulators; anything else (or unset) selects double.
Accumulation accumulation_from_env();

/// Work is split into chunks of this many orbit steps, independent of the
/// thread count, and chunk results are merged in index order.
inline constexpr std::int64_t kChunk = std::int64_t{1} << 14;
/// Phases are recomputed exactly every this many steps.
inline constexpr std::int64_t kReanchor = 256;

/// sum_{j=n0}^{n1-1} f(T^j p), n0 <= n1.
double orbit_sum(const torus::SkewShift& ss, const roof::RoofFunction& f, const torus::TorusPoint& p,
                 std::int64_t n0, std::int64_t n1, Accumulation acc = accumulation_from_env());

/// sum_{j=n0}^{n1-1} (f(T^j p) - f(T^j q)).
double difference_sum(const torus::SkewShift& ss, const roof::RoofFunction& f,
                      const torus::TorusPoint& p, const torus::TorusPoint& q, std::int64_t n0,
                      std::int64_t n1, Accumulation acc = accumulation_from_env());

/// out[i] = sum_{j=n0}^{n0+i-1} f(T^j p) for i = 0..count.
std::vector<double> orbit_prefix(const torus::SkewShift& ss, const roof::RoofFunction& f,
                                 const torus::TorusPoint& p, std::int64_t n0, std::int64_t count,
                                 Accumulation acc = accumulation_from_env());

/// out[i] = sum_{j=n0}^{n0+i-1} (f(T^j p) - f(T^j q)) for i = 0..count.
std::vector<double> difference_prefix(const torus::SkewShift& ss, const roof::RoofFunction& f,
                                      const torus::TorusPoint& p, const torus::TorusPoint& q,
                                      std::int64_t n0, std::int64_t count,
                                      Accumulation acc = accumulation_from_env());

/// Serial references: exact 128-bit orbit, direct trigonometric evaluation,
/// one Kahan accumulator over the whole range.
double orbit_sum_serial(const torus::SkewShift& ss, const roof::RoofFunction& f,
                        const torus::TorusPoint& p, std::int64_t n0, std::int64_t n1);
double difference_sum_serial(const torus::SkewShift& ss, const roof::RoofFunction& f,
                             const torus::TorusPoint& p, const torus::TorusPoint& q,
                             std::int64_t n0, std::int64_t n1);
std::vector<double> difference_prefix_serial(const torus::SkewShift& ss,
                                             const roof::RoofFunction& f,
                                             const torus::TorusPoint& p,
                                             const torus::TorusPoint& q, std::int64_t n0,
                                             std::int64_t count);

}  // namespace parashear::kernels
