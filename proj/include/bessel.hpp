#ifndef ARTIFACT_BESSEL_HPP
#define ARTIFACT_BESSEL_HPP

#include <complex>

#include "errors.hpp"

// Modified Bessel functions I_k(z), K_k(z) of complex order k at real z > 0.
// Three integral representations plus a power series, evaluated in long
// double with adaptive Gauss-Kronrod quadrature; a router picks the
// representation per (k, z) region and falls back to the order recurrence
// I_{k} = I_{k+2} + (2(k+1)/z) I_{k+1} where no single representation is
// accurate. Pure and stateless; safe to call concurrently.
namespace bessel
{

struct BesselOrder {
   std::complex<double> k;
   double re_max = 1.0;  // accepted strip |Re k| <= re_max
   double im_max = 30.0; // integrand growth cosh(ku) caps |Im k|

   void validate() const; // throws errors::OrderOutOfStrip
};

struct BesselValue {
   std::complex<double> value;
   double abs_error_estimate; // upper bound (quadrature estimate + series tail)
};

// Routed evaluators; relative accuracy <= 1e-10 for |Im k| <= 10,
// <= 1e-7 for |Im k| <= 30.
BesselValue bessel_I(const BesselOrder &k, double z);
BesselValue bessel_K(const BesselOrder &k, double z);

// Single-representation evaluators, exposed so the representations can be
// cross-checked against each other on their common domain.
//   poisson_I:     2^{1-k} z^k / (Gamma(k+1/2)Gamma(1/2)) *
//                  int_0^1 (1-u^2)^{k-1/2} cosh(zu) du,  Re k > -1/4
//   schlafli_I:    (1/pi) int_0^pi e^{z cos u} cos(ku) du
//                  - sin(k pi)/pi int_0^inf e^{-z cosh u - ku} du
//   cosh_kernel_K: int_0^inf cosh(ku) e^{-z cosh u} du
BesselValue poisson_I(const BesselOrder &k, double z);
BesselValue schlafli_I(const BesselOrder &k, double z);
BesselValue cosh_kernel_K(const BesselOrder &k, double z);

// Long double core, used directly by the kernel builders (shifted orders
// k-1, k, k+1 may leave the public strip by design there).
namespace detail
{

using real = long double;
using cplx = std::complex<real>;

struct Eval {
   cplx v;
   real err;
   bool ok; // quadrature converged / series tail certified
};

Eval series_I(cplx k, real z); // power series, good for z <= 6
Eval poisson_I(cplx k, real z);
Eval schlafli_I(cplx k, real z);
Eval cosh_kernel_K(cplx k, real z);
Eval route_I(cplx k, real z);
Eval route_K(cplx k, real z);

} // namespace detail

} // namespace bessel

#endif // ARTIFACT_BESSEL_HPP
