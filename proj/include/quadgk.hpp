#ifndef ARTIFACT_QUADGK_HPP
#define ARTIFACT_QUADGK_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <tuple>
#include <vector>

// Globally adaptive Gauss-Kronrod 15/7 quadrature over long double, for
// complex-valued integrands. The worst panel (by Kronrod-Gauss discrepancy)
// is bisected until the total error drops below a relative target or below
// the roundoff floor of the |f|-mass accumulation, whichever is larger.
namespace quadgk
{

using real = long double;
using cplx = std::complex<real>;

struct GK15 {
   // Kronrod-15 abscissae on [0,1] (symmetric), Kronrod weights, Gauss-7 weights.
   static const std::array<real, 8> x_gk;
   static const std::array<real, 8> w_gk;
   static const std::array<real, 4> w_g;
};

struct Panel {
   real err;
   long uid;
   real a, b;
   cplx val;
   real mass;
};

struct PanelOrder {
   bool operator()(const Panel &p, const Panel &q) const
   {
      if (p.err != q.err) return p.err < q.err; // max-heap on error
      return p.uid > q.uid;                     // FIFO tie-break, deterministic
   }
};

struct Result {
   cplx value;
   real error;     // certified estimate: max(sum of panel errors, mass floor)
   int panels;
   bool converged; // false iff the panel budget ran out first
};

template <typename F>
std::tuple<cplx, real, real> gk15_panel(const F &f, real a, real b)
{
   const real c = (a + b) / 2;
   const real hl = (b - a) / 2;
   const cplx fc = f(c);
   cplx resk = GK15::w_gk[7] * fc;
   cplx resg = GK15::w_g[3] * fc;
   real resabs = GK15::w_gk[7] * std::abs(fc);
   for (int j = 0; j < 7; ++j) {
      const real x = hl * GK15::x_gk[j];
      const cplx f1 = f(c - x), f2 = f(c + x);
      resk += GK15::w_gk[j] * (f1 + f2);
      resabs += GK15::w_gk[j] * (std::abs(f1) + std::abs(f2));
      if (j % 2 == 1) resg += GK15::w_g[j / 2] * (f1 + f2);
   }
   const real err = std::abs(resk - resg) * std::abs(hl);
   return {resk * hl, err, resabs * std::abs(hl)};
}

template <typename F>
Result adaptive(const F &f, real a, real b, real rel_tol = 1e-16L,
                real mass_eps = 3e-19L, int max_panels = 4000)
{
   auto [val, err, mass] = gk15_panel(f, a, b);
   std::priority_queue<Panel, std::vector<Panel>, PanelOrder> heap;
   long uid = 0;
   heap.push(Panel{err, uid++, a, b, val, mass});
   cplx total = val;
   real toterr = err;
   real totmass = mass;
   int cnt = 1;
   while (toterr > std::max(rel_tol * std::abs(total), mass_eps * totmass) &&
          cnt < max_panels) {
      const Panel p = heap.top();
      heap.pop();
      const real pm = (p.a + p.b) / 2;
      auto [v1, e1, m1] = gk15_panel(f, p.a, pm);
      auto [v2, e2, m2] = gk15_panel(f, pm, p.b);
      total += v1 + v2 - p.val;
      toterr += e1 + e2 - p.err;
      totmass += m1 + m2 - p.mass;
      heap.push(Panel{e1, uid++, p.a, pm, v1, m1});
      heap.push(Panel{e2, uid++, pm, p.b, v2, m2});
      cnt += 2;
   }
   const bool ok =
      toterr <= std::max(rel_tol * std::abs(total), mass_eps * totmass);
   return {total, std::max(toterr, mass_eps * totmass), cnt, ok};
}

} // namespace quadgk

#endif // ARTIFACT_QUADGK_HPP
