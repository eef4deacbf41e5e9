#ifndef ARTIFACT_WEIGHTED_OPERATOR_HPP
#define ARTIFACT_WEIGHTED_OPERATOR_HPP

#include <Eigen/Core>
#include <complex>
#include <string>
#include <vector>

#include "cross_section.hpp"
#include "errors.hpp"
#include "mode_resolvent.hpp"

// Discretizations of the weighted resolvent rho R0 rho: per-mode operator
// norms by dense SVD, Schur-test upper bounds, the full-space norm as a
// supremum over modes, critical-line scans, and the exponential-constant fit.
namespace weighted_operator
{

using cdbl = std::complex<double>;

// chi is 1 for r <= -1, 0 for r >= 0, the degree-5 smoothstep between;
// rho(r) = e^{r/2} chi(r). The polynomial profile is pinned so results are
// reproducible bit-for-bit.
struct WeightFunction {
   double chi(double r) const;
   double rho(double r) const;
   double support_max() const { return 0.0; } // rho vanishes for r >= 0
};

struct WeightedKernelMatrix {
   mode_resolvent::RadialGrid grid;
   Eigen::MatrixXcd entries; // rho_i G(r_i,r_m) rho_m sqrt(w_i w_m)
   cdbl k;
   double mu = 0.0;
   int n = 1;
};

enum class NormTarget { L2, H1 };

struct NormScanSample {
   cdbl lambda;
   double norm = 0.0;
   int modes_used = 0;
};

struct NormScan {
   std::vector<NormScanSample> samples;
};

struct FullNorm {
   double norm = 0.0;
   int modes_used = 0;
};

// one row per mode examined during a scan; norm is meaningful only when
// svd_ran (the SVD is skipped when the Schur bound already rules a mode out)
struct ModeSample {
   cdbl lambda;
   double mu = 0.0;
   double schur = 0.0;
   double norm = 0.0;
   bool svd_ran = false;
};

WeightedKernelMatrix discretize_weighted_mode(cdbl k, double mu, int n,
                                              const mode_resolvent::RadialGrid &grid,
                                              const WeightFunction &weight);

// L2: largest singular value of the sqrt(w)-scaled matrix. H1: largest
// singular value of S A where S stacks the forward-difference rows with the
// diagonal sqrt(mu^2 e^{2r} + n^2/4 + 1), the square root of the discrete
// H1 quadratic form. Zero rows and columns are trimmed before the L2 SVD.
double operator_norm(const WeightedKernelMatrix &matrix, NormTarget target);

// max over grid points of the two one-sided weighted kernel mass integrals;
// a rigorous upper bound for the matrix 2-norm (Schur test with sqrt(w)).
double schur_bound(cdbl k, double mu, int n, const WeightFunction &weight,
                   const mode_resolvent::RadialGrid &grid);

// sup over modes of the per-mode norm, modes processed in ascending mu.
// The SVD runs only when a mode's Schur bound exceeds the current sup
// (otherwise the mode provably cannot raise it). Stops once the next
// mode's Schur bound drops below tail_tol * sup, or once a mode beyond
// the norm peak (mu >= max(10, 2.5 |k|), where per-mode norms are
// nonincreasing) fails to raise the sup; otherwise the spectrum is
// consumed and TailNotConverged is thrown. A single-entry spectrum is
// taken as exhaustive.
FullNorm assemble_full_norm(cdbl k, const cross_section::CrossSectionSpectrum &spectrum,
                            const mode_resolvent::RadialGrid &grid,
                            const WeightFunction &weight, double tail_tol = 1e-3);

// lambda_j = n/2 + i t_j, t_j uniform over [im_min, im_max]; samples are
// independent, so they may be computed on worker threads; the merge is a
// pure index-ordered write and results do not depend on the thread count.
// When mode_log is given it receives every examined mode in sample order.
NormScan critical_line_scan(int n, const cross_section::CrossSectionSpectrum &spectrum,
                            const mode_resolvent::RadialGrid &grid,
                            const WeightFunction &weight, double im_min, double im_max,
                            int count, double tail_tol = 1e-3, int threads = 1,
                            std::vector<ModeSample> *mode_log = nullptr);

// least C >= 0 with norm_i <= e^{C |lambda_i|} for every sample
double fit_exponential_bound(const NormScan &scan);

// CSV with header re_lambda,im_lambda,norm,modes_used
std::string norm_scan_to_csv(const NormScan &scan);
NormScan norm_scan_from_csv(const std::string &text);
void save_norm_scan(const std::string &path, const NormScan &scan);
NormScan load_norm_scan(const std::string &path);

} // namespace weighted_operator

#endif // ARTIFACT_WEIGHTED_OPERATOR_HPP
