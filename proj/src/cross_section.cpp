#include "cross_section.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace cross_section
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

unsigned long long binomial(long m, long k)
{
   if (m < 0 || k < 0 || k > m) return 0;
   unsigned long long r = 1;
   for (long i = 1; i <= k; ++i) r = r * static_cast<unsigned long long>(m - k + i) / static_cast<unsigned long long>(i);
   return r;
}

CrossSectionSpectrum circle_spectrum(double length, int count)
{
   CrossSectionSpectrum s;
   s.n = 1;
   for (int j = 0; j < count; ++j) {
      const double mu = kTwoPi * j / length;
      s.entries.push_back({mu * mu, j == 0 ? 1L : 2L});
   }
   return s;
}

CrossSectionSpectrum torus_spectrum(const std::vector<double> &lengths, int count)
{
   const int d = static_cast<int>(lengths.size());
   // enumerate the dual lattice up to a bound B on mu^2, growing B until
   // `count` distinct values are complete below it
   double bound = 1.0;
   for (double l : lengths) bound += kTwoPi * kTwoPi / (l * l);
   bound *= count; // generous seed; doubled on demand
   std::vector<double> vals;
   while (true) {
      vals.clear();
      std::vector<long> m(d, 0);
      std::vector<long> box(d);
      for (int i = 0; i < d; ++i)
         box[i] = static_cast<long>(std::floor(std::sqrt(bound) * lengths[i] / kTwoPi));
      // odometer over the box; values > bound are discarded, so every
      // retained value is counted with its full multiplicity
      for (int i = 0; i < d; ++i) m[i] = -box[i];
      while (true) {
         double q = 0.0;
         for (int i = 0; i < d; ++i) {
            const double f = kTwoPi * m[i] / lengths[i];
            q += f * f;
         }
         if (q <= bound) vals.push_back(q);
         int pos = 0;
         while (pos < d && ++m[pos] > box[pos]) {
            m[pos] = -box[pos];
            ++pos;
         }
         if (pos == d) break;
      }
      std::sort(vals.begin(), vals.end());
      // merge values equal up to roundoff
      std::vector<Eigenvalue> merged;
      for (double v : vals) {
         if (!merged.empty() && v - merged.back().mu_sq <= 1e-9 * (1.0 + v))
            ++merged.back().multiplicity;
         else
            merged.push_back({v, 1L});
      }
      if (static_cast<int>(merged.size()) > count &&
          merged[count].mu_sq < bound * 0.99) {
         CrossSectionSpectrum s;
         s.n = d;
         merged.resize(count);
         s.entries = std::move(merged);
         s.entries[0].mu_sq = 0.0; // exact zero for the constant mode
         return s;
      }
      bound *= 2.0;
   }
}

CrossSectionSpectrum sphere_spectrum(int n, int count)
{
   CrossSectionSpectrum s;
   s.n = n;
   for (long l = 0; l < count; ++l) {
      const double mu_sq = static_cast<double>(l) * (l + n - 1);
      const long mult = static_cast<long>(binomial(n + l, n) - binomial(n + l - 2, n));
      s.entries.push_back({mu_sq, mult});
   }
   return s;
}

} // namespace

GeometryKind GeometryKind::torus(std::vector<double> lengths)
{
   GeometryKind k{"torus", std::move(lengths), 0};
   k.dim = static_cast<int>(k.lengths.size());
   return k;
}

void CrossSectionSpectrum::validate() const
{
   if (n < 1) throw errors::InvariantViolation("cross-section dimension must be >= 1");
   if (entries.empty()) throw errors::InvariantViolation("spectrum is empty");
   if (entries.front().mu_sq != 0.0)
      throw errors::InvariantViolation("first eigenvalue must be 0 (constants)");
   double prev = -1.0;
   for (const auto &e : entries) {
      if (e.mu_sq < 0.0)
         throw errors::InvariantViolation("negative eigenvalue in spectrum");
      if (e.mu_sq <= prev)
         throw errors::InvariantViolation("eigenvalues must be strictly ascending");
      if (e.multiplicity < 1)
         throw errors::InvariantViolation("multiplicities must be >= 1");
      prev = e.mu_sq;
   }
}

CrossSectionSpectrum builtin_spectrum(const GeometryKind &kind, int count)
{
   if (count < 1) throw errors::InvariantViolation("count must be >= 1");
   CrossSectionSpectrum s;
   if (kind.name == "circle") {
      if (kind.lengths.size() != 1 || kind.lengths[0] <= 0.0)
         throw errors::InvariantViolation("circle needs one positive length");
      s = circle_spectrum(kind.lengths[0], count);
   } else if (kind.name == "torus") {
      if (kind.lengths.empty())
         throw errors::InvariantViolation("torus needs at least one length");
      for (double l : kind.lengths)
         if (l <= 0.0) throw errors::InvariantViolation("torus lengths must be positive");
      s = torus_spectrum(kind.lengths, count);
   } else if (kind.name == "sphere") {
      if (kind.dim < 1) throw errors::InvariantViolation("sphere dimension must be >= 1");
      s = sphere_spectrum(kind.dim, count);
   } else {
      throw errors::UnsupportedKind("unknown cross-section geometry: " + kind.name);
   }
   s.validate();
   return s;
}

CrossSectionSpectrum load_spectrum(const std::string &path)
{
   std::ifstream in(path);
   if (!in) throw errors::ParseError("cannot open spectrum file: " + path);
   CrossSectionSpectrum s;
   std::string line;
   int lineno = 0;
   if (!std::getline(in, line)) throw errors::ParseError(path + ": empty file");
   ++lineno;
   {
      std::istringstream ls(line);
      std::string extra;
      if (!(ls >> s.n) || (ls >> extra)) {
         throw errors::ParseError(path + ":1: expected the dimension n alone");
      }
   }
   while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::istringstream ls(line);
      Eigenvalue e{};
      std::string extra;
      if (!(ls >> e.mu_sq >> e.multiplicity) || (ls >> extra)) {
         std::ostringstream os;
         os << path << ":" << lineno << ": expected 'mu_sq multiplicity'";
         throw errors::ParseError(os.str());
      }
      s.entries.push_back(e);
   }
   s.validate();
   return s;
}

void save_spectrum(const CrossSectionSpectrum &spec, const std::string &path)
{
   spec.validate();
   std::ofstream out(path);
   if (!out) throw errors::ParseError("cannot write spectrum file: " + path);
   out << spec.n << "\n";
   char buf[64];
   for (const auto &e : spec.entries) {
      std::snprintf(buf, sizeof buf, "%.17g %ld\n", e.mu_sq, e.multiplicity);
      out << buf;
   }
}

} // namespace cross_section
