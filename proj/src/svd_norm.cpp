#include "svd_norm.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

extern "C" {
void openblas_set_num_threads(int);
void zgesdd_(const char *jobz, const int *m, const int *n, std::complex<double> *a,
             const int *lda, double *s, std::complex<double> *u, const int *ldu,
             std::complex<double> *vt, const int *ldvt, std::complex<double> *work,
             const int *lwork, double *rwork, int *iwork, int *info);
}

namespace svd_norm
{

namespace
{
const int kBlasPinned = [] {
   openblas_set_num_threads(1);
   return 1;
}();
} // namespace

double largest_singular_value(Eigen::MatrixXcd a)
{
   (void)kBlasPinned;
   const int m = (int)a.rows();
   const int n = (int)a.cols();
   if (m == 0 || n == 0)
      return 0.0;
   const int mn = std::min(m, n);
   std::vector<double> s(mn);
   std::vector<double> rwork((std::size_t)(7 * mn + 16));
   std::vector<int> iwork((std::size_t)(8 * mn + 16));
   int info = 0;
   const char jobz = 'N';
   int lwork = -1;
   std::complex<double> wq;
   std::complex<double> *u = nullptr, *vt = nullptr;
   const int ldu = 1, ldvt = 1;
   zgesdd_(&jobz, &m, &n, a.data(), &m, s.data(), u, &ldu, vt, &ldvt, &wq, &lwork,
           rwork.data(), iwork.data(), &info);
   if (info != 0)
      throw std::runtime_error("svd_norm: workspace query failed");
   lwork = (int)wq.real() + 8;
   std::vector<std::complex<double>> work((std::size_t)lwork);
   zgesdd_(&jobz, &m, &n, a.data(), &m, s.data(), u, &ldu, vt, &ldvt, work.data(),
           &lwork, rwork.data(), iwork.data(), &info);
   if (info != 0)
      throw std::runtime_error("svd_norm: zgesdd did not converge");
   return s[0];
}

} // namespace svd_norm
