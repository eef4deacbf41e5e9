#ifndef ARTIFACT_GAMMALN_HPP
#define ARTIFACT_GAMMALN_HPP

#include <complex>

// Complex gamma function by the Lanczos approximation (g = 607/128, 15 terms),
// evaluated in long double. Relative accuracy ~1e-15 over the strips used
// here (|Re z| <= 4, |Im z| <= 35); reflection handles Re z < 1/2.
namespace gammafn
{

using cplx = std::complex<long double>;

// log Gamma(z); imaginary part is NOT reduced to a principal branch under
// reflection, so use it only through exp() or in differences.
cplx lngamma(cplx z);

// Gamma(z) = exp(lngamma(z)).
cplx gamma(cplx z);

} // namespace gammafn

#endif // ARTIFACT_GAMMALN_HPP
