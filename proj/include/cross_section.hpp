#ifndef ARTIFACT_CROSS_SECTION_HPP
#define ARTIFACT_CROSS_SECTION_HPP

#include <string>
#include <vector>

#include "errors.hpp"

// Laplace spectrum of the compact cross-section (M, h0): the list of distinct
// eigenvalues mu_j^2 with multiplicities. Eigenfunctions are never
// materialized -- the mode decomposition is orthogonal, so every operator-norm
// statement reduces to a supremum over modes and only (mu_j^2, multiplicity)
// matter.
namespace cross_section
{

struct Eigenvalue {
   double mu_sq;
   long multiplicity;
   bool operator==(const Eigenvalue &) const = default;
};

struct CrossSectionSpectrum {
   int n = 0; // dimension of M
   std::vector<Eigenvalue> entries;

   void validate() const; // throws errors::InvariantViolation
   bool operator==(const CrossSectionSpectrum &) const = default;
};

struct GeometryKind {
   std::string name;             // "circle" | "torus" | "sphere"
   std::vector<double> lengths;  // circle: {L}; torus: lattice lengths
   int dim = 0;                  // sphere dimension (torus dim = lengths.size())

   static GeometryKind circle(double length) { return {"circle", {length}, 1}; }
   static GeometryKind torus(std::vector<double> lengths);
   static GeometryKind sphere(int n) { return {"sphere", {}, n}; }
};

// First `count` distinct eigenvalues of the built-in geometries:
//   circle of length L:  mu_j = 2 pi j / L, multiplicity 2 (j >= 1), 1 (j = 0)
//   torus with lengths:  values of sum (2 pi m_i / L_i)^2 over the dual lattice
//   sphere S^n:          mu^2 = l (l + n - 1), multiplicity C(n+l,n)-C(n+l-2,n)
CrossSectionSpectrum builtin_spectrum(const GeometryKind &kind, int count);

// Text format: line 1 = n; then one "mu_sq multiplicity" pair per line,
// ascending in mu_sq.
CrossSectionSpectrum load_spectrum(const std::string &path);
void save_spectrum(const CrossSectionSpectrum &spec, const std::string &path);

} // namespace cross_section

#endif // ARTIFACT_CROSS_SECTION_HPP
