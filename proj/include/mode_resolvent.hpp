#ifndef ARTIFACT_MODE_RESOLVENT_HPP
#define ARTIFACT_MODE_RESOLVENT_HPP

#include <complex>
#include <vector>

#include "errors.hpp"

// Per-mode Green kernels of P0 = -d^2/dr^2 + e^{2r} mu^2 + n^2/4 on the
// radial line r = log x, and resolvent application on a grid. The kernel
// continues analytically across the critical line Re k = 0 into
// Re k > -1/4 (k = lambda - n/2); the only obstruction is the free-mode
// resonance at k = 0.
namespace mode_resolvent
{

using cdbl = std::complex<double>;

struct SpectralPoint {
   int n;
   cdbl lambda;

   SpectralPoint(int n_, cdbl lambda_);

   cdbl k() const { return lambda - 0.5 * n; }
   cdbl Lambda() const { return lambda * (static_cast<double>(n) - lambda); }
};

struct RadialGrid {
   std::vector<double> r; // ascending
   std::vector<double> w; // positive quadrature weights

   static RadialGrid uniform(double r_min, double r_max, int npts); // trapezoid

   void validate() const;
   std::size_t size() const { return r.size(); }
   double r_min() const { return r.front(); }
   double r_max() const { return r.back(); }
   double spacing() const; // uniform step; throws if the grid is graded
   bool operator==(const RadialGrid &) const = default;
};

struct GridFunction {
   RadialGrid grid;
   std::vector<cdbl> values;

   void validate() const;
};

// Green kernel of Q = -d^2/dr^2 + e^{2r} - k^2 normalized so that
// (Q' - Lambda) R = identity with the resolvent orientation:
//   R_Q(k; r, t) = I_k(e^{min(r,t)}) K_k(e^{max(r,t)}).
// Symmetric in (r, t); both Heaviside branches agree on the diagonal
// (H(0) = 1/2 fixed for determinism).
cdbl green_kernel_Q(cdbl k, double r, double t);

// Mode kernel: mu > 0 translates Q by log mu; mu = 0 is the free line,
//   R_0(k; r, t) = (2k)^{-1} e^{-k|r-t|}.
cdbl green_kernel_mode(cdbl k, double mu, int n, double r, double t);

// u_i = sum_m w_m G(r_i, r_m) f_m - (h^2/12) f_i. The diagonal correction
// is the Euler-Maclaurin repair of the trapezoid rule across the kernel's
// |r-t| kink; without it the quadrature error floor is h^2 |k|^2 /12.
GridFunction apply_resolvent(cdbl k, double mu, const GridFunction &f);

// || (-D_h^2 + e^{2r} mu^2 - k^2) u - f ||_{L2,h} / ||f||_{L2,h} with the
// standard second-difference stencil, interior points only.
double residual_norm(cdbl k, double mu, const GridFunction &u, const GridFunction &f);

// shared domain checks (also used by the parametrix machinery)
void require_continuable(cdbl k, double mu); // ContinuationOutOfRange

namespace detail
{

// I_k(mu e^{r_i}) and K_k(mu e^{r_i}) at every node, long double throughout,
// each value certified against the band accuracy contract.
void node_bessel_vectors(std::complex<long double> k, double mu,
                         const std::vector<double> &r,
                         std::vector<std::complex<long double>> &iv,
                         std::vector<std::complex<long double>> &kv);

} // namespace detail

} // namespace mode_resolvent

#endif // ARTIFACT_MODE_RESOLVENT_HPP
