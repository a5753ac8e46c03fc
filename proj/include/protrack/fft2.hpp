#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <complex>

namespace protrack {

using Spectrum = Eigen::Array<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic>;
using RealArray = Eigen::ArrayXXd;

/// Row/column-pass 2-D DFT over dense arrays. Plans are cached per instance,
/// so reuse one Fft2 per tracker; instances are not shareable across threads.
class Fft2 {
 public:
  Spectrum fwd(const RealArray& in) {
    const Eigen::Index rows = in.rows(), cols = in.cols();
    Eigen::MatrixXcd tmp(rows, cols);
    Eigen::VectorXcd line;
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Eigen::VectorXd row = in.matrix().row(r).transpose();
      fft_.fwd(line, row);
      tmp.row(r) = line.transpose();
    }
    Spectrum out(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Eigen::VectorXcd col = tmp.col(c);
      fft_.fwd(line, col);
      out.matrix().col(c) = line;
    }
    return out;
  }

  RealArray inv_real(const Spectrum& in) {
    const Eigen::Index rows = in.rows(), cols = in.cols();
    Eigen::MatrixXcd tmp(rows, cols);
    Eigen::VectorXcd line;
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Eigen::VectorXcd col = in.matrix().col(c);
      fft_.inv(line, col);
      tmp.col(c) = line;
    }
    RealArray out(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Eigen::VectorXcd row = tmp.row(r).transpose();
      fft_.inv(line, row);
      out.matrix().row(r) = line.real().transpose();
    }
    return out;
  }

 private:
  Eigen::FFT<double> fft_;
};

}  // namespace protrack
