#include "polaronlab/lindblad.hpp"

#include <complex>
#include <stdexcept>

namespace polaronlab {

using cplx = std::complex<double>;

namespace tls {

CMatrix sigma_minus() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

CMatrix sigma_plus() { return sigma_minus().adjoint(); }

CMatrix sigma_x() { return sigma_minus() + sigma_plus(); }

CMatrix sigma_y() {
  const cplx i{0.0, 1.0};
  return -i * sigma_plus() + i * sigma_minus();
}

CMatrix sigma_z() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

CMatrix exciton_projector() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  return m;
}

}  // namespace tls

CMatrix lindblad_dissipator(const CMatrix& op, const CMatrix& rho) {
  const CMatrix od = op.adjoint();
  const CMatrix odo = od * op;
  return 2.0 * op * rho * od - odo * rho - rho * odo;
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

Liouvillian::Liouvillian(CMatrix hamiltonian, std::vector<CollapseChannel> channels)
    : h_(std::move(hamiltonian)), channels_(std::move(channels)) {
  if (h_.rows() != h_.cols()) throw std::invalid_argument("Hamiltonian must be square");
  for (const auto& ch : channels_) {
    if (ch.op.rows() != h_.rows() || ch.op.cols() != h_.cols()) {
      throw std::invalid_argument("collapse operator dimension mismatch");
    }
  }
}

CMatrix Liouvillian::apply(const CMatrix& rho) const {
  const cplx i{0.0, 1.0};
  CMatrix out = -i * commutator(h_, rho);
  for (const auto& ch : channels_) out += ch.rate * lindblad_dissipator(ch.op, rho);
  return out;
}

CMatrix Liouvillian::superoperator() const {
  const Eigen::Index n = dim();
  CMatrix s(n * n, n * n);
  for (Eigen::Index k = 0; k < n * n; ++k) {
    CMatrix basis = CMatrix::Zero(n, n);
    basis(k % n, k / n) = 1.0;
    s.col(k) = vectorize(apply(basis));
  }
  return s;
}

CVector vectorize(const CMatrix& m) {
  return Eigen::Map<const CVector>(m.data(), m.size());
}

CMatrix unvectorize(const CVector& v, Eigen::Index dim) {
  return Eigen::Map<const CMatrix>(v.data(), dim, dim);
}

}  // namespace polaronlab
