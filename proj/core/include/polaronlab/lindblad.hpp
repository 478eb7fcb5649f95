#pragma once

#include <vector>

#include <Eigen/Dense>

namespace polaronlab {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Two-level operators in the basis {|X>, |0>} (exciton first).
namespace tls {
CMatrix sigma_minus();  // |0><X|
CMatrix sigma_plus();   // |X><0|
CMatrix sigma_x();
CMatrix sigma_y();
CMatrix sigma_z();
CMatrix exciton_projector();  // |X><X|
}  // namespace tls

/// L_O[rho] = 2 O rho O^+ - {O^+ O, rho}.
CMatrix lindblad_dissipator(const CMatrix& op, const CMatrix& rho);

CMatrix commutator(const CMatrix& a, const CMatrix& b);

/// One collapse channel contributing rate * L_O[rho].
struct CollapseChannel {
  CMatrix op;
  double rate = 0.0;
};

/// Time-independent generator -i[H, rho] + sum_k rate_k L_{O_k}[rho].
class Liouvillian {
 public:
  Liouvillian(CMatrix hamiltonian, std::vector<CollapseChannel> channels);

  Eigen::Index dim() const { return h_.rows(); }
  CMatrix apply(const CMatrix& rho) const;

  /// Column-stacked superoperator matrix, vec(L[rho]) = S vec(rho).
  CMatrix superoperator() const;

 private:
  CMatrix h_;
  std::vector<CollapseChannel> channels_;
};

CVector vectorize(const CMatrix& m);
CMatrix unvectorize(const CVector& v, Eigen::Index dim);

}  // namespace polaronlab
