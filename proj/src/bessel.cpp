#include "bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gammaln.hpp"
#include "quadgk.hpp"

namespace bessel
{

namespace detail
{

namespace
{

constexpr real kPi = std::numbers::pi_v<real>;
// accuracy floor of the Lanczos gamma entering series/poisson prefactors
constexpr real kGammaRel = 1e-14L;

} // namespace

Eval series_I(cplx k, real z)
{
   // sum_m (z^2/4)^m / (m! Gamma(k+m+1)), prefactor (z/2)^k; the reciprocal
   // gamma is built up by the recurrence term *= q / (m (k+m)).
   const real tol = 1e-20L;
   cplx term = 1.0L / gammafn::gamma(k + 1.0L);
   cplx s = term;
   real mass = std::abs(term);
   const cplx q = cplx(z * z / 4.0L, 0.0L);
   int m = 0;
   bool ok = false;
   while (true) {
      ++m;
      term = term * q / (static_cast<real>(m) * (k + static_cast<real>(m)));
      s += term;
      mass += std::abs(term);
      if (std::abs(term) <= tol * std::abs(s)) {
         ok = true;
         break;
      }
      if (m > 200) break;
   }
   const cplx pref = std::exp(k * std::log(cplx(z / 2.0L, 0.0L)));
   const real err = std::abs(pref) * (std::abs(term) + 1e-18L * mass) +
                    kGammaRel * std::abs(pref * s);
   return {pref * s, err, ok};
}

Eval poisson_I(cplx k, real z)
{
   // u = 1 - v^2 substitution flattens the (1-u^2)^{k-1/2} endpoint:
   // 2 int_0^1 v^{2k} (2-v^2)^{k-1/2} cosh(z(1-v^2)) dv
   const cplx km = k - 0.5L;
   auto f = [&](real v) -> cplx {
      if (v <= 0.0L) return cplx(0.0L, 0.0L);
      const real lv = std::log(v);
      return 2.0L * std::exp(2.0L * k * lv + km * std::log(cplx(2.0L - v * v))) *
             std::cosh(z * (1.0L - v * v));
   };
   const auto q = quadgk::adaptive(f, 0.0L, 1.0L);
   const cplx pref =
      std::exp((1.0L - k) * std::log(cplx(2.0L)) + k * std::log(cplx(z))) /
      (gammafn::gamma(k + 0.5L) * gammafn::gamma(cplx(0.5L)));
   const real err =
      std::abs(pref) * q.error + 2.0L * kGammaRel * std::abs(pref * q.value);
   return {pref * q.value, err, q.converged};
}

Eval schlafli_I(cplx k, real z)
{
   auto f1 = [&](real u) -> cplx { return std::exp(z * std::cos(u)) * std::cos(k * u); };
   const auto q1 = quadgk::adaptive(f1, 0.0L, kPi);
   // truncation: tail of the correction integral times |sin(k pi)| must stay
   // negligible against results as small as e^{z - pi|Im k|}; 62 e-folds margin
   real um = 1.0L;
   const real thr = z + kPi * std::abs(k.imag()) + 62.0L;
   while (z * std::cosh(um) + k.real() * um < thr) um += 0.5L;
   auto f2 = [&](real u) -> cplx { return std::exp(-z * std::cosh(u) - k * u); };
   const auto q2 = quadgk::adaptive(f2, 0.0L, um);
   const cplx sk = std::sin(k * kPi);
   const cplx val = q1.value / kPi - sk / kPi * q2.value;
   const real err = q1.error / kPi + std::abs(sk) / kPi * q2.error;
   return {val, err, q1.converged && q2.converged};
}

Eval cosh_kernel_K(cplx k, real z)
{
   // K can be as small as e^{-z - pi|Im k|/2}; truncate well below that scale
   real um = 1.0L;
   const real thr = z + kPi * std::abs(k.imag()) / 2.0L + 62.0L;
   while (z * std::cosh(um) - std::abs(k.real()) * um < thr) um += 0.5L;
   auto f = [&](real u) -> cplx { return std::cosh(k * u) * std::exp(-z * std::cosh(u)); };
   const auto q = quadgk::adaptive(f, 0.0L, um);
   return {q.value, q.error, q.converged};
}

Eval route_I(cplx k, real z)
{
   const real a = k.real();
   const real b = std::abs(k.imag());
   // the series keeps its digits much further out for oscillatory orders
   // (cancellation only e^{z^2/(4|Im k|)}), and the quadrature
   // representations degrade there: Poisson's v^{2k} endpoint oscillates at
   // every scale, Schlafli cancels below z = pi|Im k|/4
   if (z <= 6.0L || (b >= 8.0L && z <= kPi * b / 4.0L)) {
      if (a > -0.26L) return series_I(k, z);
      // order recurrence from two series evaluations (both Re >= 0.74)
      const Eval hi = series_I(k + 2.0L, z);
      const Eval lo = series_I(k + 1.0L, z);
      const cplx c = 2.0L * (k + 1.0L) / z;
      return {hi.v + c * lo.v, hi.err + std::abs(c) * lo.err, hi.ok && lo.ok};
   }
   if (b > 10.0L && z >= kPi * b / 4.0L) return schlafli_I(k, z);
   if (a > -0.26L && z <= 30.0L) return poisson_I(k, z);
   if (b <= 8.0L || z > 30.0L) return schlafli_I(k, z);
   // remaining corner: shifted orders land in the Poisson branch
   const Eval hi = route_I(k + 2.0L, z);
   const Eval lo = route_I(k + 1.0L, z);
   const cplx c = 2.0L * (k + 1.0L) / z;
   return {hi.v + c * lo.v, hi.err + std::abs(c) * lo.err, hi.ok && lo.ok};
}

Eval route_K(cplx k, real z)
{
   const real b = std::abs(k.imag());
   if (b <= 8.0L || z >= b) return cosh_kernel_K(k, z);
   // connection formula K_k = pi (I_{-k} - I_k) / (2 sin(k pi)); safe here
   // because |sin(k pi)| ~ e^{pi|Im k|}/2 is huge for |Im k| > 8
   const Eval im = route_I(-k, z);
   const Eval ip = route_I(k, z);
   const cplx den = 2.0L * std::sin(k * kPi);
   const cplx val = kPi * (im.v - ip.v) / den;
   const real err = kPi * (im.err + ip.err) / std::abs(den);
   return {val, err, im.ok && ip.ok};
}

} // namespace detail

namespace
{

void require_positive_z(double z)
{
   if (!(z > 0.0) || !std::isfinite(z))
      throw std::invalid_argument("bessel: argument z must be positive and finite");
}

BesselValue finish(const detail::Eval &e, const BesselOrder &k, const char *what)
{
   const std::complex<double> v(static_cast<double>(e.v.real()),
                                static_cast<double>(e.v.imag()));
   if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      std::ostringstream os;
      os << what << ": value overflowed double range";
      throw errors::QuadratureFailure(os.str());
   }
   // fold in the rounding of the long double result to double
   const double est = static_cast<double>(e.err) +
                      std::abs(v) * std::numeric_limits<double>::epsilon();
   // certify the band accuracy target (the quadrature may stop at its panel
   // budget with an estimate far below this but above its own 1e-16 goal)
   const double tol = std::abs(k.k.imag()) <= 10.0 ? 1e-10 : 1e-7;
   if (est > tol * std::abs(v)) {
      std::ostringstream os;
      os << what << ": error estimate " << est
         << " cannot certify relative tolerance " << tol;
      throw errors::QuadratureFailure(os.str());
   }
   return {v, est};
}

detail::cplx widen(std::complex<double> k)
{
   return detail::cplx(static_cast<long double>(k.real()),
                       static_cast<long double>(k.imag()));
}

} // namespace

void BesselOrder::validate() const
{
   if (!std::isfinite(k.real()) || !std::isfinite(k.imag()) ||
       std::abs(k.real()) > re_max || std::abs(k.imag()) > im_max) {
      std::ostringstream os;
      os << "order k = (" << k.real() << ", " << k.imag()
         << ") outside accepted strip |Re k| <= " << re_max
         << ", |Im k| <= " << im_max;
      throw errors::OrderOutOfStrip(os.str());
   }
}

BesselValue bessel_I(const BesselOrder &k, double z)
{
   k.validate();
   require_positive_z(z);
   return finish(detail::route_I(widen(k.k), z), k, "bessel_I");
}

BesselValue bessel_K(const BesselOrder &k, double z)
{
   k.validate();
   require_positive_z(z);
   return finish(detail::route_K(widen(k.k), z), k, "bessel_K");
}

BesselValue poisson_I(const BesselOrder &k, double z)
{
   k.validate();
   require_positive_z(z);
   if (k.k.real() <= -0.26) {
      throw errors::OrderOutOfStrip(
         "poisson_I: representation needs Re k > -1/4 (with margin)");
   }
   return finish(detail::poisson_I(widen(k.k), z), k, "poisson_I");
}

BesselValue schlafli_I(const BesselOrder &k, double z)
{
   k.validate();
   require_positive_z(z);
   return finish(detail::schlafli_I(widen(k.k), z), k, "schlafli_I");
}

BesselValue cosh_kernel_K(const BesselOrder &k, double z)
{
   k.validate();
   require_positive_z(z);
   return finish(detail::cosh_kernel_K(widen(k.k), z), k, "cosh_kernel_K");
}

} // namespace bessel
