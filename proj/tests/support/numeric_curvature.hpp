#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "pndp/metric.hpp"

namespace pndp::testing {

/// Finite-difference curvature of a metric at one chart point. Only the
/// numeric metric components are used, none of the symbolic machinery.
class NumericCurvature {
 public:
  NumericCurvature(const Metric& g, const Binding& at, double h = 1e-4)
      : g_(g), names_(g.chart().names()), at_(at), h_(h), n_(g.dim()) {
    compute();
  }

  [[nodiscard]] const Eigen::MatrixXd& metric() const { return g0_; }
  [[nodiscard]] const Eigen::MatrixXd& inverse() const { return ginv_; }
  [[nodiscard]] double christoffel(std::size_t k, std::size_t i, std::size_t j) const { return gamma_[idx(k, i, j)]; }
  [[nodiscard]] const Eigen::MatrixXd& ricci() const { return ricci_; }
  [[nodiscard]] double scalar() const { return (ginv_.cwiseProduct(ricci_)).sum(); }

 private:
  [[nodiscard]] std::size_t idx(std::size_t a, std::size_t b, std::size_t c) const { return (a * n_ + b) * n_ + c; }

  Eigen::MatrixXd eval_shifted(std::size_t a, double da, std::size_t b, double db) const {
    Binding p = at_;
    p.set(names_[a], at_.get(names_[a]) + da);
    p.set(names_[b], p.get(names_[b]) + db);
    return evaluate(g_, p);
  }

  void compute() {
    g0_ = evaluate(g_, at_);
    ginv_ = g0_.inverse();
    std::vector<Eigen::MatrixXd> dg(n_);
    for (std::size_t a = 0; a < n_; ++a) {
      dg[a] = (eval_shifted(a, h_, a, 0.0) - eval_shifted(a, -h_, a, 0.0)) / (2.0 * h_);
    }
    std::vector<Eigen::MatrixXd> ddg(n_ * n_);
    for (std::size_t a = 0; a < n_; ++a) {
      for (std::size_t b = 0; b < n_; ++b) {
        ddg[a * n_ + b] = (eval_shifted(a, h_, b, h_) - eval_shifted(a, h_, b, -h_) - eval_shifted(a, -h_, b, h_) +
                           eval_shifted(a, -h_, b, -h_)) /
                          (4.0 * h_ * h_);
      }
    }
    std::vector<Eigen::MatrixXd> dinv(n_);
    for (std::size_t a = 0; a < n_; ++a) dinv[a] = -ginv_ * dg[a] * ginv_;

    // lowered[l][i][j] = ∂_i g_jl + ∂_j g_il - ∂_l g_ij, and its derivatives
    gamma_.assign(n_ * n_ * n_, 0.0);
    std::vector<double> dgamma(n_ * n_ * n_ * n_, 0.0);  // (m, k, i, j)
    for (std::size_t k = 0; k < n_; ++k) {
      for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
          double acc = 0.0;
          for (std::size_t l = 0; l < n_; ++l) {
            const double low = dg[i](j, l) + dg[j](i, l) - dg[l](i, j);
            acc += 0.5 * ginv_(k, l) * low;
            for (std::size_t m = 0; m < n_; ++m) {
              const double dlow = ddg[m * n_ + i](j, l) + ddg[m * n_ + j](i, l) - ddg[m * n_ + l](i, j);
              dgamma[((m * n_ + k) * n_ + i) * n_ + j] += 0.5 * (dinv[m](k, l) * low + ginv_(k, l) * dlow);
            }
          }
          gamma_[idx(k, i, j)] = acc;
        }
      }
    }
    auto dG = [&](std::size_t m, std::size_t k, std::size_t i, std::size_t j) {
      return dgamma[((m * n_ + k) * n_ + i) * n_ + j];
    };
    ricci_ = Eigen::MatrixXd::Zero(n_, n_);
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::size_t k = 0; k < n_; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
          acc += dG(i, i, j, k) - dG(j, i, i, k);
          for (std::size_t m = 0; m < n_; ++m) {
            acc += gamma_[idx(i, i, m)] * gamma_[idx(m, j, k)] - gamma_[idx(i, j, m)] * gamma_[idx(m, i, k)];
          }
        }
        ricci_(j, k) = acc;
      }
    }
  }

  const Metric& g_;
  std::vector<std::string> names_;
  Binding at_;
  double h_;
  std::size_t n_;
  Eigen::MatrixXd g0_;
  Eigen::MatrixXd ginv_;
  std::vector<double> gamma_;
  Eigen::MatrixXd ricci_;
};

}  // namespace pndp::testing
