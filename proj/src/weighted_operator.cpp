#include "weighted_operator.hpp"

#include "bessel.hpp"
#include "svd_norm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace weighted_operator
{

namespace
{

using real = long double;
using cplx = std::complex<real>;

cdbl narrow(const cplx &v, const char *what)
{
   const cdbl out((double)std::real(v), (double)std::imag(v));
   if (!std::isfinite(out.real()) || !std::isfinite(out.imag()))
      throw errors::QuadratureFailure(std::string(what) + ": value overflows double");
   return out;
}

// absolute budget per discretized weighted entry; the matrix 2-norm error
// stays below dim * tol <= 4e-7 at the SVD dimension cap, far under the
// norms of interest
constexpr real kEntryAbsTol = 1e-10L;

// total relative truncation allowed for a marched mode solution
constexpr real kMarchTol = 3e-14L;

cplx checked_eval(const bessel::detail::Eval &e, const char *what)
{
   if (!e.ok || !std::isfinite((double)e.err) ||
       !std::isfinite((double)std::real(e.v)) || !std::isfinite((double)std::imag(e.v)))
      throw errors::QuadratureFailure(std::string(what) +
                                      ": Bessel evaluation failed");
   return e.v;
}

real mag1(const cplx &v) // 1-norm envelope, within sqrt(2) of |v|
{
   return std::fabs(std::real(v)) + std::fabs(std::imag(v));
}

// Solutions of the mode equation u'' = (mu^2 e^{2r} + k^2) u at the grid
// nodes: phi = I_k(mu e^r) grows to the right, psi = K_k(mu e^r) decays;
// G = scale * phi(min) * psi(max). Nodes are only filled where rho > 0
// (leading `active` nodes); weighted entries vanish elsewhere.
//
// Direct quadrature of the Bessel representations costs seconds per mode
// inside the oscillatory region, so the interior values are marched with
// a Numerov scheme on a substep lattice, seeded by direct evaluations at
// the cheap ends (power-series region at the bottom, exponential region
// at the top) and audited against one direct evaluation at the far end
// of each march. perr/qerr are absolute error bounds per node built from
// the audit mismatch, the a-priori truncation mass, and the seed errors.
struct ModeData {
   std::vector<cplx> phi, psi;
   std::vector<real> perr, qerr;
   cplx scale;
   std::size_t active = 0;
};

ModeData mode_data(const cdbl &k, double mu, const mode_resolvent::RadialGrid &grid,
                   const WeightFunction &weight)
{
   const std::size_t dim = grid.size();
   const cplx kl((real)k.real(), (real)k.imag());
   ModeData md;
   md.phi.assign(dim, cplx(0.0L, 0.0L));
   md.psi.assign(dim, cplx(0.0L, 0.0L));
   md.perr.assign(dim, 0.0L);
   md.qerr.assign(dim, 0.0L);

   if (mu == 0.0) {
      for (std::size_t i = 0; i < dim; ++i) {
         md.phi[i] = std::exp(kl * (real)grid.r[i]);
         md.psi[i] = std::exp(-kl * (real)grid.r[i]);
      }
      md.scale = (real)0.5 / kl;
      md.active = dim;
      return md;
   }

   md.scale = (real)1;
   std::size_t active = 0;
   while (active < dim && weight.rho(grid.r[active]) != 0.0)
      ++active;
   md.active = active;
   if (active == 0)
      return md; // weight vanishes on the whole grid

   const real lmu = (real)mu;
   auto z_at = [&](real r) { return lmu * std::exp(r); };
   const real r0 = (real)grid.r[0];
   const real rt = (real)grid.r[active - 1];
   if ((double)z_at(rt) > 11000.0)
      throw errors::QuadratureFailure("mode march: argument overflows the range");

   if (active == 1) {
      const auto ie = bessel::detail::route_I(kl, z_at(r0));
      const auto ke = bessel::detail::route_K(kl, z_at(r0));
      md.phi[0] = checked_eval(ie, "mode march seed I");
      md.psi[0] = checked_eval(ke, "mode march seed K");
      md.perr[0] = ie.err;
      md.qerr[0] = ke.err;
      return md;
   }

   const real h = (real)grid.spacing(); // marching needs a uniform lattice
   const cplx k2 = kl * kl;
   const real ak2 = std::abs(k2);

   // substep from the truncation budget: sum over substeps of
   // (h'^2 q / 12)^3 local errors must stay under kMarchTol
   real mass = 0.0L;
   for (std::size_t i = 0; i + 1 < active; ++i) {
      const real qb = ak2 + lmu * lmu * std::exp(2.0L * (real)grid.r[i + 1]);
      mass += h * qb * qb * qb;
   }
   const real qtop = ak2 + lmu * lmu * std::exp(2.0L * rt);
   real hp = std::pow(240.0L * kMarchTol / mass, 0.2L);
   hp = std::min(hp, 0.5L / std::sqrt(qtop)); // resolve the local wavelength
   const long m = std::clamp((long)std::ceil((double)(h / hp)), 1L, 1L << 21);
   hp = h / (real)m;
   const long nsteps = (long)(active - 1) * m;
   const real eps_model =
       mass * hp * hp * hp * hp * hp / 240.0L + (real)nsteps * 1e-19L;

   const real hp2_12 = hp * hp / 12.0L;
   const cplx c1 = hp2_12 * k2;
   const real c2 = hp2_12 * lmu * lmu;
   const real e2hp = std::exp(2.0L * hp);

   std::vector<real> amp((std::size_t)active - 1, 0.0L); // per-interval envelope

   // one sweep of the Numerov lattice; dir = +1 climbs from node 0 (the
   // growing solution I), dir = -1 descends from the top node (K)
   auto march = [&](int dir, std::vector<cplx> &out, std::vector<real> &err,
                    const char *seed_what, const char *audit_what) {
      const real rs = dir > 0 ? r0 : rt;
      const auto seed0 = dir > 0 ? bessel::detail::route_I(kl, z_at(rs))
                                 : bessel::detail::route_K(kl, z_at(rs));
      const auto seed1 = dir > 0 ? bessel::detail::route_I(kl, z_at(rs + hp))
                                 : bessel::detail::route_K(kl, z_at(rs - hp));
      cplx yp = checked_eval(seed0, seed_what);
      cplx yc = checked_eval(seed1, seed_what);
      const real seed_ref = std::max(std::abs(seed0.v), std::abs(seed1.v));
      const real eps_seed =
          seed_ref > 0.0L ? (seed0.err + seed1.err) / seed_ref + 2e-19L : 0.0L;

      std::fill(amp.begin(), amp.end(), 0.0L);
      const std::size_t start = dir > 0 ? 0 : active - 1;
      out[start] = yp;
      real ecur = std::exp(2.0L * rs);
      cplx bp = 1.0L - (c1 + c2 * ecur);
      ecur = dir > 0 ? ecur * e2hp : ecur / e2hp;
      cplx bc = 1.0L - (c1 + c2 * ecur);
      long pos = 1; // substeps taken from the seed node
      for (std::size_t i = 0; i + 1 < active; ++i) {
         const std::size_t cell = dir > 0 ? i : active - 2 - i;
         real cellmax = std::max(mag1(yp), mag1(yc));
         while (pos < (long)(i + 1) * m) {
            if ((pos & 4095) == 0) // kill multiplicative drift in e^{2r}
               ecur = std::exp(2.0L * (rs + (real)dir * (real)pos * hp));
            ecur = dir > 0 ? ecur * e2hp : ecur / e2hp;
            const cplx bn = 1.0L - (c1 + c2 * ecur);
            const cplx yn = ((12.0L - 10.0L * bc) * yc - bp * yp) / bn;
            yp = yc;
            yc = yn;
            bp = bc;
            bc = bn;
            ++pos;
            cellmax = std::max(cellmax, mag1(yc));
         }
         amp[cell] = cellmax;
         out[dir > 0 ? i + 1 : active - 2 - i] = yc;
      }

      // audit: direct evaluation at the far end of the march
      const real rfar = dir > 0 ? rt : r0;
      const auto far = dir > 0 ? bessel::detail::route_I(kl, z_at(rfar))
                               : bessel::detail::route_K(kl, z_at(rfar));
      const cplx fv = checked_eval(far, audit_what);
      const std::size_t fend = dir > 0 ? active - 1 : 0;
      const real ref = std::max(std::abs(fv),
                                0.75L * amp[dir > 0 ? active - 2 : 0]);
      if (!(ref > 0.0L))
         throw errors::QuadratureFailure(std::string(audit_what) +
                                         ": vanishing reference amplitude");
      const real eps =
          (std::abs(out[fend] - fv) + far.err) / ref + eps_model + eps_seed;
      for (std::size_t i = 0; i < active; ++i) {
         const std::size_t c0 = i == 0 ? 0 : i - 1;
         const std::size_t c1i = std::min(i, active - 2);
         const real a = std::max({std::abs(out[i]), amp[c0], amp[c1i]});
         err[i] = eps * a;
      }
   };

   march(+1, md.phi, md.perr, "mode march seed I", "mode march audit I");
   march(-1, md.psi, md.qerr, "mode march seed K", "mode march audit K");
   return md;
}

WeightedKernelMatrix matrix_from(const ModeData &md, cdbl k, double mu, int n,
                                 const mode_resolvent::RadialGrid &grid,
                                 const WeightFunction &weight)
{
   const std::size_t dim = grid.size();
   std::vector<real> a(dim, 0.0L);
   for (std::size_t i = 0; i < md.active; ++i)
      a[i] = (real)weight.rho(grid.r[i]) * std::sqrt((real)grid.w[i]);
   const real sc = std::abs(md.scale);

   WeightedKernelMatrix out;
   out.grid = grid;
   out.k = k;
   out.mu = mu;
   out.n = n;
   out.entries = Eigen::MatrixXcd::Zero((Eigen::Index)dim, (Eigen::Index)dim);
   for (std::size_t m = 0; m < md.active; ++m) {
      for (std::size_t i = 0; i <= m; ++i) {
         cdbl v(0.0, 0.0);
         if (a[i] != 0.0L && a[m] != 0.0L) {
            v = narrow(md.scale * md.phi[i] * md.psi[m] * (a[i] * a[m]),
                       "discretize_weighted_mode");
            const real err = sc * (a[i] * a[m]) *
                             (std::abs(md.phi[i]) * md.qerr[m] +
                              md.perr[i] * std::abs(md.psi[m]) +
                              md.perr[i] * md.qerr[m]);
            if (err > kEntryAbsTol)
               throw errors::QuadratureFailure(
                   "discretize_weighted_mode: entry error above the assembly budget");
         }
         out.entries((Eigen::Index)i, (Eigen::Index)m) = v;
         out.entries((Eigen::Index)m, (Eigen::Index)i) = v; // symmetric kernel
      }
   }
   return out;
}

double schur_from(const ModeData &md, const mode_resolvent::RadialGrid &grid,
                  const WeightFunction &weight)
{
   const std::size_t na = md.active;
   std::vector<real> ai(na), ak(na), rho(na);
   for (std::size_t i = 0; i < na; ++i) {
      rho[i] = (real)weight.rho(grid.r[i]);
      ai[i] = std::abs(md.phi[i]) + md.perr[i]; // upper bounds keep the test rigorous
      ak[i] = std::abs(md.psi[i]) + md.qerr[i];
   }
   const real sc = std::abs(md.scale);

   // row mass of |rho G rho| against the grid quadrature; Schur test with
   // p = sqrt(w) shows the matrix 2-norm is dominated by the max row mass
   real best = 0.0L;
   real s1 = 0.0L; // sum_{m<=i} w rho |phi|
   std::vector<real> s2(na + 1, 0.0L);
   for (std::size_t i = na; i-- > 0;)
      s2[i] = s2[i + 1] + (real)grid.w[i] * rho[i] * ak[i];
   for (std::size_t i = 0; i < na; ++i) {
      s1 += (real)grid.w[i] * rho[i] * ai[i];
      if (rho[i] == 0.0L)
         continue;
      const real row = sc * rho[i] * (ak[i] * s1 + ai[i] * s2[i + 1]);
      best = std::max(best, row);
   }
   return (double)best;
}

} // namespace

double WeightFunction::chi(double r) const
{
   if (r <= -1.0)
      return 1.0;
   if (r >= 0.0)
      return 0.0;
   const double t = -r;
   return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double WeightFunction::rho(double r) const
{
   const double c = chi(r);
   return c == 0.0 ? 0.0 : std::exp(0.5 * r) * c;
}

WeightedKernelMatrix discretize_weighted_mode(cdbl k, double mu, int n,
                                              const mode_resolvent::RadialGrid &grid,
                                              const WeightFunction &weight)
{
   if (n < 1)
      throw std::invalid_argument("discretize_weighted_mode: n must be positive");
   grid.validate();
   mode_resolvent::require_continuable(k, mu);
   return matrix_from(mode_data(k, mu, grid, weight), k, mu, n, grid, weight);
}

double operator_norm(const WeightedKernelMatrix &matrix, NormTarget target)
{
   const Eigen::Index dim = matrix.entries.rows();
   if (dim != matrix.entries.cols())
      throw std::invalid_argument("operator_norm: matrix must be square");
   if (dim > 4000)
      throw errors::DimensionTooLarge("operator_norm: dense SVD budget is 4000");

   if (target == NormTarget::L2) {
      // drop rows/columns that are exactly zero (outside supp rho); the
      // nonzero block carries the whole spectrum
      std::vector<Eigen::Index> keep;
      for (Eigen::Index i = 0; i < dim; ++i) {
         bool nz = false;
         for (Eigen::Index j = 0; j < dim && !nz; ++j)
            nz = matrix.entries(i, j) != cdbl(0.0, 0.0) ||
                 matrix.entries(j, i) != cdbl(0.0, 0.0);
         if (nz)
            keep.push_back(i);
      }
      if (keep.empty())
         return 0.0;
      Eigen::MatrixXcd sub((Eigen::Index)keep.size(), (Eigen::Index)keep.size());
      for (std::size_t c = 0; c < keep.size(); ++c)
         for (std::size_t rr = 0; rr < keep.size(); ++rr)
            sub((Eigen::Index)rr, (Eigen::Index)c) = matrix.entries(keep[rr], keep[c]);
      return svd_norm::largest_singular_value(std::move(sub));
   }

   // H1: largest singular value of S A, where S^T S is the discrete H1 form
   if ((Eigen::Index)matrix.grid.size() != dim)
      throw std::invalid_argument("operator_norm: grid/matrix size mismatch");
   const double h = matrix.grid.spacing();
   const Eigen::Index nrows = 2 * dim - 1;
   Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(nrows, dim);
   const double cn = 0.25 * double(matrix.n) * double(matrix.n) + 1.0;
   for (Eigen::Index j = 0; j + 1 < dim; ++j) {
      s(j, j) = -1.0 / (std::sqrt(h) * std::sqrt(matrix.grid.w[j]));
      s(j, j + 1) = 1.0 / (std::sqrt(h) * std::sqrt(matrix.grid.w[j + 1]));
   }
   for (Eigen::Index i = 0; i < dim; ++i) {
      const double pot = matrix.mu * matrix.mu * std::exp(2.0 * matrix.grid.r[i]);
      s(dim - 1 + i, i) = std::sqrt(pot + cn);
   }
   Eigen::MatrixXcd b = s * matrix.entries;
   return svd_norm::largest_singular_value(std::move(b));
}

double schur_bound(cdbl k, double mu, int n, const WeightFunction &weight,
                   const mode_resolvent::RadialGrid &grid)
{
   if (n < 1)
      throw std::invalid_argument("schur_bound: n must be positive");
   grid.validate();
   mode_resolvent::require_continuable(k, mu);
   return schur_from(mode_data(k, mu, grid, weight), grid, weight);
}

namespace
{

FullNorm assemble_impl(cdbl k, const cross_section::CrossSectionSpectrum &spectrum,
                       const mode_resolvent::RadialGrid &grid,
                       const WeightFunction &weight, double tail_tol, cdbl lambda,
                       std::vector<ModeSample> *log)
{
   if (!(tail_tol > 0.0))
      throw std::invalid_argument("assemble_full_norm: tail_tol must be positive");
   spectrum.validate();
   grid.validate();
   mode_resolvent::require_continuable(k, 0.0);

   // per-mode norms rise to a peak near mu = 1.9 |Im k| and are
   // nonincreasing beyond it; past this threshold a mode that fails to
   // raise the sup certifies the whole remaining tail
   const double mu_tail = std::max(10.0, 2.5 * std::abs(k));

   double sup = 0.0;
   int processed = 0;
   bool converged = false;
   for (const auto &entry : spectrum.entries) {
      const double mu = std::sqrt(entry.mu_sq);
      const ModeData md = mode_data(k, mu, grid, weight);
      const double schur = schur_from(md, grid, weight);

      // next-mode rule: the remaining tail cannot move the sup materially
      if (processed >= 1 && schur <= tail_tol * sup) {
         converged = true;
         break;
      }
      const double sup_prev = sup;
      double norm_upper = schur;
      double norm = 0.0;
      bool svd_ran = false;
      if (schur > sup) { // otherwise norm <= schur <= sup already
         norm = operator_norm(matrix_from(md, k, mu, spectrum.n, grid, weight),
                              NormTarget::L2);
         sup = std::max(sup, norm);
         norm_upper = norm;
         svd_ran = true;
      }
      ++processed;
      if (log)
         log->push_back({lambda, mu, schur, norm, svd_ran});
      if (processed >= 2 && mu >= mu_tail && norm_upper <= sup_prev) {
         converged = true;
         break;
      }
   }
   if (!converged && spectrum.entries.size() == 1)
      converged = true; // single-mode spectrum is exhaustive by contract
   if (!converged)
      throw errors::TailNotConverged(
          "assemble_full_norm: spectrum exhausted before the mode tail was dominated");
   return {sup, processed};
}

} // namespace

FullNorm assemble_full_norm(cdbl k, const cross_section::CrossSectionSpectrum &spectrum,
                            const mode_resolvent::RadialGrid &grid,
                            const WeightFunction &weight, double tail_tol)
{
   return assemble_impl(k, spectrum, grid, weight, tail_tol, k, nullptr);
}

NormScan critical_line_scan(int n, const cross_section::CrossSectionSpectrum &spectrum,
                            const mode_resolvent::RadialGrid &grid,
                            const WeightFunction &weight, double im_min, double im_max,
                            int count, double tail_tol, int threads,
                            std::vector<ModeSample> *mode_log)
{
   if (count < 1 || !(im_max >= im_min))
      throw std::invalid_argument("critical_line_scan: bad sample range");
   NormScan scan;
   scan.samples.resize(count);
   std::vector<std::vector<ModeSample>> logs(
       mode_log ? (std::size_t)count : (std::size_t)0);
   const int nt = std::clamp(threads, 1, count);
   std::vector<std::exception_ptr> errs((std::size_t)nt);
   auto worker = [&](int first) {
      try {
         for (int j = first; j < count; j += nt) {
            const double t = count == 1
                                 ? im_min
                                 : im_min + (im_max - im_min) * double(j) / (count - 1);
            const cdbl lambda(0.5 * n, t);
            const cdbl k = lambda - 0.5 * double(n);
            const FullNorm fn = assemble_impl(k, spectrum, grid, weight, tail_tol,
                                              lambda, mode_log ? &logs[j] : nullptr);
            scan.samples[j] = {lambda, fn.norm, fn.modes_used};
         }
      } catch (...) {
         errs[(std::size_t)first] = std::current_exception();
      }
   };
   if (nt == 1) {
      worker(0);
   } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < nt; ++t)
         pool.emplace_back(worker, t);
      for (auto &th : pool)
         th.join();
   }
   for (const std::exception_ptr &e : errs)
      if (e)
         std::rethrow_exception(e);
   if (mode_log)
      for (const auto &l : logs) // sample order, independent of thread count
         mode_log->insert(mode_log->end(), l.begin(), l.end());
   return scan;
}

double fit_exponential_bound(const NormScan &scan)
{
   if (scan.samples.empty())
      throw errors::EmptyScan("fit_exponential_bound: empty scan");
   double c = 0.0;
   for (const NormScanSample &s : scan.samples) {
      if (!(s.norm > 0.0))
         throw std::invalid_argument("fit_exponential_bound: norms must be positive");
      const double al = std::abs(s.lambda);
      const double ln = std::log(s.norm);
      if (al == 0.0) {
         if (ln > 0.0)
            throw std::invalid_argument(
                "fit_exponential_bound: norm > 1 at lambda = 0 admits no bound");
         continue;
      }
      c = std::max(c, std::max(0.0, ln) / al);
   }
   return c;
}

std::string norm_scan_to_csv(const NormScan &scan)
{
   std::ostringstream out;
   out << "re_lambda,im_lambda,norm,modes_used\n";
   char buf[128];
   for (const NormScanSample &s : scan.samples) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d\n", s.lambda.real(),
                    s.lambda.imag(), s.norm, s.modes_used);
      out << buf;
   }
   return out.str();
}

NormScan norm_scan_from_csv(const std::string &text)
{
   std::istringstream in(text);
   std::string line;
   if (!std::getline(in, line) || line != "re_lambda,im_lambda,norm,modes_used")
      throw errors::ParseError("norm scan CSV: bad header");
   NormScan scan;
   while (std::getline(in, line)) {
      if (line.empty())
         continue;
      double re = 0, im = 0, nm = 0;
      int used = 0;
      if (std::sscanf(line.c_str(), "%lg,%lg,%lg,%d", &re, &im, &nm, &used) != 4)
         throw errors::ParseError("norm scan CSV: bad row: " + line);
      scan.samples.push_back({cdbl(re, im), nm, used});
   }
   return scan;
}

void save_norm_scan(const std::string &path, const NormScan &scan)
{
   std::ofstream out(path, std::ios::binary);
   if (!out)
      throw errors::ParseError("cannot open for writing: " + path);
   out << norm_scan_to_csv(scan);
}

NormScan load_norm_scan(const std::string &path)
{
   std::ifstream in(path, std::ios::binary);
   if (!in)
      throw errors::ParseError("cannot open: " + path);
   std::ostringstream buf;
   buf << in.rdbuf();
   return norm_scan_from_csv(buf.str());
}

} // namespace weighted_operator
