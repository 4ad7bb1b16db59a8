#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <capflow/capflow.hpp>

namespace capflow::test {

inline double rel_diff(double a, double b)
{
  return std::abs(a - b) / std::abs(b);
}

// Fixed-seed draws for the property tests.
class Draw
{
public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

  TubeShape shape()
  {
    return all_tube_shapes[std::uniform_int_distribution<std::size_t>(0, all_tube_shapes.size() - 1)(rng_)];
  }

  // ratio r_max / r_min in [1.05, 8], index in the validated range
  TubeSpec tube()
  {
    const double r_min = log_uniform(0.2, 5.0);
    return TubeSpec(shape(), r_min, r_min * uniform(1.05, 8.0), log_uniform(0.5, 20.0));
  }
  double index() { return uniform(0.25, 1.9); }

private:
  std::mt19937_64 rng_;
};

// Brute-force Appell F1 in the polydisc: a square truncation of the double
// sum in long double, with Pochhammer tables built independently.
inline long double appell_brute_force(double a, double b1, double b2, double c, double x, double y,
                               int terms = 200)
{
  std::vector<long double> ac(2 * terms, 1.0L); // (a)_k / (c)_k
  for (int k = 1; k < 2 * terms; ++k)
    ac[k] = ac[k - 1] * (a + k - 1) / (c + k - 1);
  std::vector<long double> bx(terms, 1.0L), by(terms, 1.0L); // (b)_m x^m / m!
  for (int m = 1; m < terms; ++m) {
    bx[m] = bx[m - 1] * (b1 + m - 1) * x / m;
    by[m] = by[m - 1] * (b2 + m - 1) * y / m;
  }
  long double sum = 0.0L;
  for (int m = 0; m < terms; ++m)
    for (int n = 0; n < terms; ++n)
      sum += ac[m + n] * bx[m] * by[n];
  return sum;
}

} // namespace capflow::test
