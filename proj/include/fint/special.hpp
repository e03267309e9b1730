#pragma once

#include <complex>

namespace fint {

/// Gamma function on the complex plane (Lanczos, g = 7, with reflection for
/// Re z < 1/2). Real arguments go through std::tgamma.
std::complex<double> gamma_fn(std::complex<double> z);

/// Principal branch of log Gamma for Re z > 0.
std::complex<double> log_gamma(std::complex<double> z);

}  // namespace fint
