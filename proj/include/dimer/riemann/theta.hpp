#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dimer/error.hpp"

namespace dimer::riemann {

using VecC = Eigen::VectorXcd;
using VecR = Eigen::VectorXd;
using MatC = Eigen::MatrixXcd;

struct Characteristic {
    VecR d1, d2;  // entries in {0, 1/2}

    static Characteristic zero(int g);
    bool odd() const;
    int parity() const;  // 4<d1,d2> mod 2
};

// All characteristics of a given parity, in a fixed order.
std::vector<Characteristic> characteristics(int g, bool odd);

class Theta {
  public:
    Theta() = default;
    explicit Theta(MatC B, double eps = 1e-12);

    int genus() const { return static_cast<int>(B_.rows()); }
    const MatC& period_matrix() const { return B_; }

    cplx operator()(const VecC& z) const { return value(z, nullptr); }
    cplx value(const VecC& z, const Characteristic* ch) const;
    // Value and gradient in one pass.
    cplx value_grad(const VecC& z, const Characteristic* ch, VecC& grad) const;
    int terms_last() const { return terms_; }

  private:
    cplx sum(const VecC& z, const Characteristic* ch, VecC* grad) const;

    MatC B_;
    Eigen::MatrixXd Y_, Yinv_;
    double radius2_ = 0.0;  // pi * n^T Y n <= radius2_ kept
    mutable int terms_ = 0;
};

}  // namespace dimer::riemann
