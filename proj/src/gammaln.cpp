#include "gammaln.hpp"

#include <cmath>
#include <numbers>

namespace gammafn
{

namespace
{

constexpr long double kG = 607.0L / 128.0L;

// Godfrey's coefficient set for g = 607/128, n = 15.
constexpr long double kC[15] = {
   0.99999999999999709182L,
   57.156235665862923517L,
   -59.597960355475491248L,
   14.136097974741747174L,
   -0.49191381609762019978L,
   0.33994649984811888699e-4L,
   0.46523628927048575665e-4L,
   -0.98374475304879564677e-4L,
   0.15808870322491248884e-3L,
   -0.21026444172410488319e-3L,
   0.21743961811521264320e-3L,
   -0.16431810653676389022e-3L,
   0.84418223983852743293e-4L,
   -0.26190838401581408670e-4L,
   0.36899182659531622704e-5L,
};

constexpr long double kPi = std::numbers::pi_v<long double>;
const long double kHalfLog2Pi = 0.5L * std::log(2.0L * kPi);

cplx lngamma_shifted(cplx z)
{
   // valid for Re z >= 0.5
   const cplx zm = z - 1.0L;
   cplx s = kC[0];
   for (int i = 1; i < 15; ++i) s += kC[i] / (zm + static_cast<long double>(i));
   const cplx t = zm + kG + 0.5L;
   return kHalfLog2Pi + (zm + 0.5L) * std::log(t) - t + std::log(s);
}

} // namespace

cplx lngamma(cplx z)
{
   if (z.real() < 0.5L) {
      // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
      return std::log(kPi / std::sin(kPi * z)) - lngamma_shifted(1.0L - z);
   }
   return lngamma_shifted(z);
}

cplx gamma(cplx z) { return std::exp(lngamma(z)); }

} // namespace gammafn
