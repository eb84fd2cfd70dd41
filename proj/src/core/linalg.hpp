#pragma once

#include <optional>

#include "tensor.hpp"

namespace tgp {

// Symmetric positive definite matrix. Symmetry is checked (to 1e-12 relative)
// when a factorisation is requested; definiteness is whatever survives the
// jitter policy below.
using SpdMatrix = Matrix;

// Diagonal jitter added when a kernel matrix at near-duplicate points fails to
// factor: start at rel_start * mean(diag), escalate tenfold up to
// rel_max * mean(diag), then give up.
struct JitterPolicy {
  double rel_start = 1e-10;
  double escalate = 10.0;
  double rel_max = 1e-4;
};

// Lower-triangular Cholesky factor L with Sigma = L L^T.
// log_det is log|Sigma| of the factored (jittered) matrix.
struct CholFactor {
  Matrix lower;
  double log_det = 0.0;
  double jitter_added = 0.0;

  int size() const { return lower.rows(); }
};

void check_symmetric(const SpdMatrix& m, double rel_tol = 1e-12);

// Empty optional means not positive definite even at maximum jitter; callers
// inside an MCMC sweep treat that as a rejected proposal.
std::optional<CholFactor> try_cholesky(const SpdMatrix& m, const JitterPolicy& policy = {});

// Throwing variant for contexts where failure is a hard error.
CholFactor cholesky(const SpdMatrix& m, const JitterPolicy& policy = {});

// Forward substitution: returns L^{-1} b.
std::vector<double> solve_lower(const Matrix& lower, const std::vector<double>& b);

// Applies L^{-1} along one tensor mode without forming the inverse, i.e.
// mode_product(t, inverse(L), mode).
TensorK solve_lower_mode(const CholFactor& f, const TensorK& t, int mode);

}  // namespace tgp
