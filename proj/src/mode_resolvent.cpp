#include "mode_resolvent.hpp"

#include "bessel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mode_resolvent
{

namespace
{

using real = long double;
using cplx = std::complex<real>;

constexpr double kResonanceRadius = 1e-3; // free resonance at k = 0
constexpr double kContinuationFloor = -0.25;

real band_tol(const cplx &k)
{
   return std::fabs((double)std::imag(k)) <= 10.0L ? 1e-10L : 1e-7L;
}

// certify a routed evaluation against the band accuracy contract
cplx checked(const bessel::detail::Eval &e, const cplx &k, const char *what)
{
   const real mag = std::abs(e.v);
   if (std::isnan((double)std::real(e.v)) || std::isnan((double)std::imag(e.v)))
      throw errors::QuadratureFailure(std::string(what) + ": evaluation produced NaN");
   if (e.err > band_tol(k) * std::max(mag, (real)1e-320L))
      throw errors::QuadratureFailure(std::string(what) +
                                      ": quadrature error above the band accuracy contract");
   return e.v;
}

bool grid_is_uniform(const RadialGrid &g)
{
   const std::size_t n = g.size();
   const double h0 = (g.r.back() - g.r.front()) / double(n - 1);
   for (std::size_t i = 0; i + 1 < n; ++i)
      if (std::fabs((g.r[i + 1] - g.r[i]) - h0) > 1e-12 * std::max(1.0, std::fabs(h0)))
         return false;
   return true;
}

cdbl narrow(const cplx &v, const char *what)
{
   const cdbl out((double)std::real(v), (double)std::imag(v));
   if (!std::isfinite(out.real()) || !std::isfinite(out.imag()))
      throw errors::QuadratureFailure(std::string(what) + ": value overflows double");
   return out;
}

} // namespace

namespace detail
{

void node_bessel_vectors(const cplx k, double mu, const std::vector<double> &r,
                         std::vector<cplx> &iv, std::vector<cplx> &kv)
{
   iv.resize(r.size());
   kv.resize(r.size());
   for (std::size_t i = 0; i < r.size(); ++i) {
      const real z = (real)mu * std::exp((real)r[i]);
      iv[i] = checked(bessel::detail::route_I(k, z), k, "mode kernel I");
      kv[i] = checked(bessel::detail::route_K(k, z), k, "mode kernel K");
   }
}

} // namespace detail

SpectralPoint::SpectralPoint(int n_, cdbl lambda_) : n(n_), lambda(lambda_)
{
   if (n < 1)
      throw std::invalid_argument("SpectralPoint: n must be a positive integer");
   if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
      throw std::invalid_argument("SpectralPoint: lambda must be finite");
   const cdbl kk = k();
   const cdbl via_k = 0.25 * double(n) * double(n) - kk * kk;
   if (std::abs(Lambda() - via_k) > 1e-10 * (1.0 + std::abs(Lambda())))
      throw errors::InvariantViolation("SpectralPoint: lambda(n-lambda) != n^2/4 - k^2");
}

RadialGrid RadialGrid::uniform(double r_min, double r_max, int npts)
{
   if (!(r_max > r_min) || npts < 8)
      throw std::invalid_argument("RadialGrid::uniform: need r_max > r_min and npts >= 8");
   RadialGrid g;
   g.r.resize(npts);
   g.w.resize(npts);
   const double h = (r_max - r_min) / double(npts - 1);
   for (int i = 0; i < npts; ++i) {
      g.r[i] = r_min + h * double(i);
      g.w[i] = h;
   }
   g.r.back() = r_max; // exact endpoint; cap conditions match on it bitwise
   g.w.front() = 0.5 * h;
   g.w.back() = 0.5 * h;
   return g;
}

void RadialGrid::validate() const
{
   if (r.size() < 2 || r.size() != w.size())
      throw errors::InvariantViolation("RadialGrid: need >= 2 nodes and matching weights");
   for (std::size_t i = 0; i < r.size(); ++i) {
      if (!std::isfinite(r[i]) || !std::isfinite(w[i]) || w[i] <= 0.0)
         throw errors::InvariantViolation("RadialGrid: nodes finite, weights positive");
      if (i + 1 < r.size() && !(r[i] < r[i + 1]))
         throw errors::InvariantViolation("RadialGrid: nodes must ascend strictly");
   }
}

double RadialGrid::spacing() const
{
   if (!grid_is_uniform(*this))
      throw std::invalid_argument("RadialGrid::spacing: grid is graded");
   return (r.back() - r.front()) / double(size() - 1);
}

void GridFunction::validate() const
{
   grid.validate();
   if (values.size() != grid.size())
      throw errors::InvariantViolation("GridFunction: values/grid size mismatch");
   for (const cdbl &v : values)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
         throw errors::InvariantViolation("GridFunction: non-finite value");
}

void require_continuable(cdbl k, double mu)
{
   if (!std::isfinite(k.real()) || !std::isfinite(k.imag()))
      throw std::invalid_argument("mode kernel: k must be finite");
   if (!(mu >= 0.0) || !std::isfinite(mu))
      throw std::invalid_argument("mode kernel: mu must be >= 0");
   if (std::abs(k) < kResonanceRadius)
      throw errors::ContinuationOutOfRange(
          "mode kernel: k within 1e-3 of the free resonance at k = 0");
   if (!(k.real() > kContinuationFloor))
      throw errors::ContinuationOutOfRange(
          "mode kernel: continuation only reaches Re k > -1/4");
}

cdbl green_kernel_Q(cdbl k, double r, double t)
{
   require_continuable(k, 1.0);
   const cplx kl((real)k.real(), (real)k.imag());
   const real z_lo = std::exp((real)std::min(r, t));
   const real z_hi = std::exp((real)std::max(r, t));
   const cplx iv = checked(bessel::detail::route_I(kl, z_lo), kl, "green_kernel_Q I");
   const cplx kv = checked(bessel::detail::route_K(kl, z_hi), kl, "green_kernel_Q K");
   return narrow(iv * kv, "green_kernel_Q");
}

cdbl green_kernel_mode(cdbl k, double mu, int n, double r, double t)
{
   if (n < 1)
      throw std::invalid_argument("green_kernel_mode: n must be a positive integer");
   require_continuable(k, mu);
   if (mu == 0.0) {
      const cdbl e = std::exp(-k * std::fabs(r - t));
      return e / (2.0 * k);
   }
   const double shift = std::log(mu);
   return green_kernel_Q(k, r + shift, t + shift);
}

GridFunction apply_resolvent(cdbl k, double mu, const GridFunction &f)
{
   f.validate();
   require_continuable(k, mu);

   const std::size_t n = f.grid.size();
   const std::vector<double> &r = f.grid.r;
   const std::vector<double> &w = f.grid.w;

   double fmax = 0.0;
   for (const cdbl &v : f.values)
      fmax = std::max(fmax, std::abs(v));
   const std::size_t guard = (std::size_t)std::ceil(0.05 * double(n));
   if (fmax > 0.0) {
      for (std::size_t i = 0; i < guard; ++i)
         if (std::abs(f.values[i]) >= 1e-12 * fmax ||
             std::abs(f.values[n - 1 - i]) >= 1e-12 * fmax)
            throw errors::SupportViolation(
                "apply_resolvent: source not supported away from the grid boundary");
   }

   // solutions at every node: phi grows to the right, psi decays
   std::vector<cplx> phi(n), psi(n);
   const cplx kl((real)k.real(), (real)k.imag());
   cplx norm; // G(r,t) = norm * phi(min) * psi(max)
   if (mu == 0.0) {
      for (std::size_t i = 0; i < n; ++i) {
         phi[i] = std::exp(kl * (real)r[i]);
         psi[i] = std::exp(-kl * (real)r[i]);
      }
      norm = (real)0.5 / kl;
   } else {
      detail::node_bessel_vectors(kl, mu, r, phi, psi);
      norm = (real)1;
   }

   std::vector<cplx> fv(n);
   for (std::size_t i = 0; i < n; ++i)
      fv[i] = cplx((real)f.values[i].real(), (real)f.values[i].imag());

   // u_i = psi_i sum_{m<=i} phi_m w_m f_m + phi_i sum_{m>i} psi_m w_m f_m
   std::vector<cplx> up(n);
   cplx acc = 0;
   for (std::size_t i = 0; i < n; ++i) {
      acc += phi[i] * (real)w[i] * fv[i];
      up[i] = psi[i] * acc;
   }
   acc = 0;
   for (std::size_t i = n; i-- > 0;) {
      up[i] += phi[i] * acc;
      acc += psi[i] * (real)w[i] * fv[i];
   }

   const bool uniform = grid_is_uniform(f.grid);
   const real c = uniform
                      ? (real)((r.back() - r.front()) / double(n - 1)) *
                            (real)((r.back() - r.front()) / double(n - 1)) / (real)12
                      : (real)0;

   GridFunction u;
   u.grid = f.grid;
   u.values.resize(n);
   for (std::size_t i = 0; i < n; ++i)
      u.values[i] = narrow(norm * up[i] - c * fv[i], "apply_resolvent");
   return u;
}

double residual_norm(cdbl k, double mu, const GridFunction &u, const GridFunction &f)
{
   u.validate();
   f.validate();
   if (!(u.grid == f.grid))
      throw std::invalid_argument("residual_norm: u and f live on different grids");
   const std::size_t n = u.grid.size();
   if (n < 3)
      throw std::invalid_argument("residual_norm: need at least 3 nodes");
   const double h = u.grid.spacing();
   const cdbl ksq = k * k;

   long double num = 0.0L, den = 0.0L;
   for (std::size_t i = 1; i + 1 < n; ++i) {
      const cdbl d2 = (-u.values[i - 1] + 2.0 * u.values[i] - u.values[i + 1]) / (h * h);
      const double pot = mu * mu * std::exp(2.0 * u.grid.r[i]);
      const cdbl res = d2 + (pot + ksq) * u.values[i] - f.values[i];
      num += (long double)std::norm(res);
      den += (long double)std::norm(f.values[i]);
   }
   if (den == 0.0L)
      throw errors::ZeroDenominator("residual_norm: source vanishes on interior nodes");
   return (double)std::sqrt(num / den);
}

} // namespace mode_resolvent
