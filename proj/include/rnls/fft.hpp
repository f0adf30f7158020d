#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <complex>
#include <stdexcept>

namespace rnls {

template <typename Real>
using ComplexArray2 =
    Eigen::Array<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using RealArray2 = Eigen::Array<Real, Eigen::Dynamic, Eigen::Dynamic>;

/// 2-D complex-to-complex transform pair on an M x M grid, built from
/// Eigen's 1-D FFT applied along both axes. Plans are cached per instance,
/// so keep one Fft2 per grid and reuse it.
///
/// Conventions (physical normalization, box side L, spacing dx = L/M):
///   forward:  c(k)  = dx^2 * sum_x u(x) exp(-i k.x)
///   inverse:  u(x)  = L^-2 * sum_k c(k) exp(+i k.x)
/// so inverse(forward(u)) == u and the Parseval identity reads
///   dx^2 sum |u|^2  ==  L^-2 sum |c|^2.
template <typename Real>
class Fft2 {
 public:
  using Complex = std::complex<Real>;
  using Array = ComplexArray2<Real>;

  Fft2(Eigen::Index m, Real box_length)
      : m_(m), scale_fwd_(box_length / m * (box_length / m)) {
    if (m < 2) throw std::invalid_argument("Fft2: grid size must be >= 2");
    if (!(box_length > Real(0)))
      throw std::invalid_argument("Fft2: box length must be positive");
  }

  Eigen::Index size() const { return m_; }

  Array forward(const Array& u) const {
    check(u);
    Array c = raw(u, /*inverse=*/false);
    c *= scale_fwd_;
    return c;
  }

  Array inverse(const Array& c) const {
    check(c);
    Array u = raw(c, /*inverse=*/true);
    u *= Real(1) / (scale_fwd_ * Real(m_) * Real(m_));
    return u;
  }

 private:
  void check(const Array& a) const {
    if (a.rows() != m_ || a.cols() != m_)
      throw std::invalid_argument("Fft2: field dimensions do not match grid");
  }

  // Unnormalized DFT over both axes: columns first, then rows via transpose.
  Array raw(const Array& in, bool inverse) const {
    using Vec = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
    Array work = in;
    Vec line(m_), lineout(m_);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index c = 0; c < m_; ++c) {
        line = work.col(c).matrix();
        if (inverse)
          fft_.inv(lineout, line);
        else
          fft_.fwd(lineout, line);
        work.col(c) = lineout.array();
      }
      work = work.transpose().eval();
    }
    if (inverse) work *= Real(m_) * Real(m_);  // undo Eigen's 1/n per axis
    return work;
  }

  Eigen::Index m_;
  Real scale_fwd_;
  mutable Eigen::FFT<Real> fft_;
};

}  // namespace rnls
