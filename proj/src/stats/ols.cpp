// Copyright 2026 The sempol Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "sempol/error.hpp"
#include "sempol/timeseries.hpp"

namespace sempol {

OlsFit ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& response, const std::string& what) {
    const auto n = static_cast<std::size_t>(design.rows());
    const auto k = static_cast<std::size_t>(design.cols());
    if (n != static_cast<std::size_t>(response.size())) {
        fail(ErrorCode::InvalidArgument, what + ": design has " + std::to_string(n) + " rows, response " +
                                             std::to_string(response.size()));
    }
    if (k == 0 || n <= k) {
        fail(ErrorCode::Degenerate, what + ": " + std::to_string(n) + " rows cannot fit " + std::to_string(k) +
                                        " regressors with positive residual degrees of freedom");
    }
    if (!design.allFinite() || !response.allFinite()) fail(ErrorCode::InvalidArgument, what + ": non-finite input");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (static_cast<std::size_t>(qr.rank()) < k) {
        fail(ErrorCode::Degenerate, what + ": design matrix is rank deficient (rank " + std::to_string(qr.rank()) +
                                        " of " + std::to_string(k) + " columns); regressors are collinear");
    }
    OlsFit fit;
    fit.n = n;
    fit.k = k;
    fit.coefficients = qr.solve(response);
    const Eigen::VectorXd residuals = response - design * fit.coefficients;
    fit.rss = residuals.squaredNorm();

    // se_j = sqrt(s^2 * (X'X)^-1_jj) with (X'X)^-1 = P R^-1 R^-T P'.
    const double s2 = fit.rss / double(n - k);
    const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv = r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    const Eigen::VectorXd diag_perm = r_inv.rowwise().squaredNorm();
    fit.std_errors.resize(k);
    const auto& perm = qr.colsPermutation().indices();
    for (std::size_t j = 0; j < k; ++j) fit.std_errors[perm[j]] = std::sqrt(s2 * diag_perm[j]);
    return fit;
}

double regularized_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0) || x < 0.0 || x > 1.0) {
        fail(ErrorCode::InvalidArgument, "incomplete beta arguments out of domain");
    }
    return boost::math::ibeta(a, b, x);
}

double f_sf(double f, double d1, double d2) {
    if (!(d1 > 0.0) || !(d2 > 0.0)) fail(ErrorCode::InvalidArgument, "F degrees of freedom must be positive");
    if (std::isnan(f)) fail(ErrorCode::InvalidArgument, "F statistic is NaN");
    if (f <= 0.0) return 1.0;
    if (std::isinf(f)) return 0.0;
    // P(F > f) = I_{d2 / (d2 + d1 f)}(d2/2, d1/2)
    return boost::math::ibeta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

}  // namespace sempol
