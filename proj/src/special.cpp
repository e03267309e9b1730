#include "fint/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "fint/errors.hpp"

namespace fint {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// log Gamma(z) for Re z >= 1/2
std::complex<double> lanczos_log(std::complex<double> z) {
  z -= 1.0;
  std::complex<double> acc = kLanczos[0];
  for (std::size_t k = 1; k < kLanczos.size(); ++k) acc += kLanczos[k] / (z + double(k));
  const std::complex<double> t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(acc);
}

}  // namespace

std::complex<double> gamma_fn(std::complex<double> z) {
  if (z.imag() == 0.0) return std::tgamma(z.real());
  if (z.real() < 0.5) {
    // reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z)
    return std::numbers::pi / (std::sin(std::numbers::pi * z) * gamma_fn(1.0 - z));
  }
  return std::exp(lanczos_log(z));
}

std::complex<double> log_gamma(std::complex<double> z) {
  require(z.real() > 0.0, "log_gamma: requires Re z > 0");
  if (z.imag() == 0.0) return std::lgamma(z.real());
  if (z.real() < 0.5) {
    // shift up one step: log Gamma(z) = log Gamma(z + 1) - log z
    return lanczos_log(z + 1.0) - std::log(z);
  }
  return lanczos_log(z);
}

}  // namespace fint
