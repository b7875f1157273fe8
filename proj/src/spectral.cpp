#include "cspd/spectral.hpp"

#include <cmath>
#include <sstream>

namespace cspd {

void check_dyadic(const Grid& g, double N) {
  const double e = std::log2(N);
  const bool power_of_two = N > 0.0 && std::isfinite(e) && std::abs(e - std::round(e)) < 1e-12;
  if (!power_of_two || N < g.band_low() * (1.0 - 1e-12) || N > g.band_high() * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "dyadic index N = " << N << " is not a power of two in the resolvable band ["
       << g.band_low() << ", " << g.band_high() << "]";
    throw DomainError(os.str());
  }
}

std::vector<double> resolvable_dyadics(const Grid& g) {
  std::vector<double> out;
  for (int e = static_cast<int>(std::ceil(std::log2(g.band_low()) - 1e-12));
       std::ldexp(1.0, e) <= g.band_high() * (1.0 + 1e-12); ++e)
    out.push_back(std::ldexp(1.0, e));
  return out;
}

}  // namespace cspd
