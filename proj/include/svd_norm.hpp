#ifndef ARTIFACT_SVD_NORM_HPP
#define ARTIFACT_SVD_NORM_HPP

#include <Eigen/Core>
#include <complex>

// Dense largest-singular-value computation, LAPACK divide-and-conquer with
// singular values only. BLAS is pinned to one thread so repeated runs are
// bit-identical; concurrency belongs to the callers, which parallelize over
// independent matrices.
namespace svd_norm
{

// destroys its argument copy internally; throws std::runtime_error when the
// backend fails to converge
double largest_singular_value(Eigen::MatrixXcd a);

} // namespace svd_norm

#endif // ARTIFACT_SVD_NORM_HPP
