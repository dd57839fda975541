// Copyright 2026 The infolat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "infolat/mps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "infolat/errors.hpp"

namespace infolat {

namespace {

using Matrix = Eigen::MatrixXcd;
using RowMatrix = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kSchmidtCutoff = 1e-15;

// Rows (sigma, l) with sigma slowest: [A^0; A^1; ...].
Matrix stack_rows(const MatrixProductState::SiteTensor& t) {
  const Eigen::Index rows = t[0].rows();
  Matrix out(rows * static_cast<Eigen::Index>(t.size()), t[0].cols());
  for (std::size_t s = 0; s < t.size(); ++s) out.middleRows(static_cast<Eigen::Index>(s) * rows, rows) = t[s];
  return out;
}

// Columns (sigma, r) with sigma slowest: [A^0, A^1, ...].
Matrix stack_cols(const MatrixProductState::SiteTensor& t) {
  const Eigen::Index cols = t[0].cols();
  Matrix out(t[0].rows(), cols * static_cast<Eigen::Index>(t.size()));
  for (std::size_t s = 0; s < t.size(); ++s) out.middleCols(static_cast<Eigen::Index>(s) * cols, cols) = t[s];
  return out;
}

MatrixProductState::SiteTensor unstack_rows(const Matrix& m, int d) {
  const Eigen::Index rows = m.rows() / d;
  MatrixProductState::SiteTensor t(static_cast<std::size_t>(d));
  for (int s = 0; s < d; ++s) t[static_cast<std::size_t>(s)] = m.middleRows(s * rows, rows);
  return t;
}

MatrixProductState::SiteTensor unstack_cols(const Matrix& m, int d) {
  const Eigen::Index cols = m.cols() / d;
  MatrixProductState::SiteTensor t(static_cast<std::size_t>(d));
  for (int s = 0; s < d; ++s) t[static_cast<std::size_t>(s)] = m.middleCols(s * cols, cols);
  return t;
}

Eigen::Index kept_values(const Eigen::VectorXd& s) {
  Eigen::Index keep = 0;
  while (keep < s.size() && s(keep) > kSchmidtCutoff) ++keep;
  return std::max<Eigen::Index>(keep, 1);
}

double entropy_of_hermitian(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  const Eigen::VectorXd& e = solver.eigenvalues();
  return spectrum_entropy_bits(std::span<const double>(e.data(), static_cast<std::size_t>(e.size())));
}

void check_window(const MatrixProductState& mps, int ell, int m) {
  if (ell < 0 || m < 0 || m + ell > mps.num_sites() - 1) {
    throw std::out_of_range("subsystem [" + std::to_string(m) + ", " + std::to_string(m + ell) +
                            "] outside a chain of " + std::to_string(mps.num_sites()) + " sites");
  }
}

const MatrixProductState& canonical_view(const MatrixProductState& mps, MatrixProductState& storage) {
  if (mps.canonical()) return mps;
  storage = mps;
  storage.canonicalize();
  return storage;
}

double ipow(double base, int exponent) { return std::pow(base, exponent); }

bool is_edge_window(int num_sites, int ell, int m) { return m == 0 || m + ell == num_sites - 1; }

// Cost of absorbing `site` into a Right-accumulated environment whose left
// bond is fixed at chi_fixed.
double right_step_cost(const WindowShape& w, int site, double chi_fixed) {
  const double in = w.bond_dims[static_cast<std::size_t>(site)];
  const double out = w.bond_dims[static_cast<std::size_t>(site + 1)];
  return chi_fixed * chi_fixed * w.local_dim * (in * in * out + in * out * out);
}

double left_step_cost(const WindowShape& w, int site, double chi_fixed) {
  const double out = w.bond_dims[static_cast<std::size_t>(site)];
  const double in = w.bond_dims[static_cast<std::size_t>(site + 1)];
  return chi_fixed * chi_fixed * w.local_dim * (out * in * in + out * out * in);
}

double first_site_cost(const WindowShape& w, int site) {
  const double a = w.bond_dims[static_cast<std::size_t>(site)];
  const double b = w.bond_dims[static_cast<std::size_t>(site + 1)];
  return w.local_dim * a * a * b * b;
}

enum class EnvSource { Scratch, RightCache, LeftCache };

struct EnvPlan {
  EnvSource source = EnvSource::Scratch;
  double cost = 0.0;
};

EnvPlan plan_environment(const WindowShape& w, const CacheState& cache) {
  const int first = w.m;
  const int last = w.m + w.ell;
  const double chi_a = w.bond_dims[static_cast<std::size_t>(first)];
  const double chi_b = w.bond_dims[static_cast<std::size_t>(last + 1)];

  EnvPlan best{EnvSource::Scratch, first_site_cost(w, first)};
  for (int s = first + 1; s <= last; ++s) best.cost += right_step_cost(w, s, chi_a);

  if (cache.right_last >= first && cache.right_last <= last) {
    double c = 0.0;
    for (int s = cache.right_last + 1; s <= last; ++s) c += right_step_cost(w, s, chi_a);
    if (c < best.cost) best = {EnvSource::RightCache, c};
  }
  if (cache.left_first >= first && cache.left_first <= last) {
    double c = 0.0;
    for (int s = cache.left_first - 1; s >= first; --s) c += left_step_cost(w, s, chi_b);
    if (c < best.cost) best = {EnvSource::LeftCache, c};
  }
  return best;
}

Matrix transfer_matrix(const MatrixProductState& mps, const Environment& env) {
  const Eigen::VectorXd& lambda = mps.schmidt_values(env.last + 1);
  const int ca = env.chi_left;
  const int cb = env.chi_right;
  Matrix t(ca * cb, ca * cb);
  for (int a = 0; a < ca; ++a) {
    for (int ap = 0; ap < ca; ++ap) {
      for (int b = 0; b < cb; ++b) {
        for (int bp = 0; bp < cb; ++bp) t(a * cb + b, ap * cb + bp) = lambda(b) * lambda(bp) * env(a, ap, b, bp);
      }
    }
  }
  return t;
}

// Rows: configurations of sites [first, last) (first site most significant);
// columns: bond `last`.
Matrix left_piece(const MatrixProductState& mps, int first, int last) {
  Matrix p = Matrix::Identity(mps.bond_dim(first), mps.bond_dim(first));
  const int d = mps.local_dim();
  for (int k = first; k < last; ++k) {
    const auto& t = mps.site(k);
    Matrix next(p.rows() * d, t[0].cols());
    for (Eigen::Index r = 0; r < p.rows(); ++r) {
      for (int s = 0; s < d; ++s) next.row(r * d + s) = p.row(r) * t[static_cast<std::size_t>(s)];
    }
    p = std::move(next);
  }
  return p;
}

// Rows: bond `first`; columns: configurations of sites [first, last).
Matrix right_piece(const MatrixProductState& mps, int first, int last) {
  Matrix p = Matrix::Identity(mps.bond_dim(last), mps.bond_dim(last));
  const int d = mps.local_dim();
  for (int k = last - 1; k >= first; --k) {
    const auto& t = mps.site(k);
    Matrix next(t[0].rows(), d * p.cols());
    for (int s = 0; s < d; ++s) next.middleCols(s * p.cols(), p.cols()) = t[static_cast<std::size_t>(s)] * p;
    p = std::move(next);
  }
  return p;
}

}  // namespace

MatrixProductState::MatrixProductState(std::vector<SiteTensor> sites, int local_dim)
    : sites_(std::move(sites)), local_dim_(local_dim) {
  if (sites_.empty()) throw std::invalid_argument("MPS needs at least one site");
  if (local_dim_ < 2) throw std::invalid_argument("local dimension must be >= 2");
  for (std::size_t k = 0; k < sites_.size(); ++k) {
    const auto& t = sites_[k];
    if (static_cast<int>(t.size()) != local_dim_) throw std::invalid_argument("site tensor needs d matrices");
    for (const auto& a : t) {
      if (a.rows() != t[0].rows() || a.cols() != t[0].cols() || a.size() == 0) {
        throw std::invalid_argument("inconsistent site tensor shape");
      }
    }
    if (k > 0 && sites_[k - 1][0].cols() != t[0].rows()) throw std::invalid_argument("bond dimension mismatch");
  }
  if (sites_.front()[0].rows() != 1 || sites_.back()[0].cols() != 1) {
    throw std::invalid_argument("edge bond dimensions must be 1");
  }
}

int MatrixProductState::bond_dim(int bond) const {
  if (bond < 0 || bond > num_sites()) throw std::out_of_range("bond outside the chain");
  if (bond == num_sites()) return static_cast<int>(sites_.back()[0].cols());
  return static_cast<int>(sites_[static_cast<std::size_t>(bond)][0].rows());
}

std::vector<int> MatrixProductState::bond_dims() const {
  std::vector<int> out;
  for (int k = 0; k <= num_sites(); ++k) out.push_back(bond_dim(k));
  return out;
}

const Eigen::VectorXd& MatrixProductState::schmidt_values(int bond) const {
  if (!canonical_) throw std::logic_error("Schmidt values need canonical form");
  return schmidt_.at(static_cast<std::size_t>(bond));
}

void MatrixProductState::set_truncation(bool truncated, double discarded_weight) {
  truncated_ = truncated;
  discarded_weight_ = discarded_weight;
}

double MatrixProductState::left_isometry_residual(int k) const {
  const auto& t = site(k);
  Matrix g = Matrix::Zero(t[0].cols(), t[0].cols());
  for (const auto& a : t) g.noalias() += a.adjoint() * a;
  return (g - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

double MatrixProductState::norm() const {
  Matrix env = Matrix::Ones(1, 1);
  for (const auto& t : sites_) {
    Matrix next = Matrix::Zero(t[0].cols(), t[0].cols());
    for (const auto& a : t) next.noalias() += a.adjoint() * env * a;
    env = std::move(next);
  }
  return std::sqrt(std::max(env(0, 0).real(), 0.0));
}

Eigen::VectorXcd MatrixProductState::to_dense() const {
  if (num_sites() > kMaxDenseSites) throw std::invalid_argument("too many sites for a dense vector");
  const Matrix p = left_piece(*this, 0, num_sites());
  return p.col(0);
}

void MatrixProductState::set_canonical(std::vector<Eigen::VectorXd> schmidt_values) {
  const int L = num_sites();
  if (static_cast<int>(schmidt_values.size()) != L + 1) {
    throw std::invalid_argument("need Schmidt values for bonds 0..L");
  }
  for (int k = 0; k <= L; ++k) {
    const auto& s = schmidt_values[static_cast<std::size_t>(k)];
    if (s.size() != bond_dim(k)) throw std::invalid_argument("Schmidt vector length != bond dimension");
    if (s.minCoeff() < 0) throw std::invalid_argument("negative Schmidt value");
    for (Eigen::Index j = 1; j < s.size(); ++j) {
      if (s(j) > s(j - 1)) throw std::invalid_argument("Schmidt values must be non-increasing");
    }
    if (std::abs(s.squaredNorm() - 1.0) > 1e-10) throw std::invalid_argument("Schmidt values not normalized");
  }
  for (int k = 0; k < L; ++k) {
    if (left_isometry_residual(k) > 1e-10) {
      throw std::invalid_argument("site " + std::to_string(k) + " is not a left isometry");
    }
  }
  schmidt_ = std::move(schmidt_values);
  canonical_ = true;
}

void MatrixProductState::canonicalize() {
  const int L = num_sites();
  const int d = local_dim_;
  // Right-to-left LQ sweep: sites 1..L-1 become right isometries.
  for (int k = L - 1; k > 0; --k) {
    const Matrix m = stack_cols(sites_[static_cast<std::size_t>(k)]);
    Eigen::HouseholderQR<Matrix> qr(m.adjoint());
    const Eigen::Index r = std::min(m.rows(), m.cols());
    const Matrix q = qr.householderQ() * Matrix::Identity(m.cols(), r);
    const Matrix rr = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    sites_[static_cast<std::size_t>(k)] = unstack_cols(q.adjoint(), d);
    for (auto& a : sites_[static_cast<std::size_t>(k - 1)]) a = (a * rr.adjoint()).eval();
  }
  double nrm = 0.0;
  for (const auto& a : sites_[0]) nrm += a.squaredNorm();
  nrm = std::sqrt(nrm);
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw NumericalError("MPS has zero norm");
  for (auto& a : sites_[0]) a /= nrm;

  // Left-to-right SVD sweep into the Schmidt gauge.
  schmidt_.assign(static_cast<std::size_t>(L + 1), Eigen::VectorXd::Ones(1));
  for (int k = 0; k + 1 < L; ++k) {
    const Matrix m = stack_rows(sites_[static_cast<std::size_t>(k)]);
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::Index keep = kept_values(svd.singularValues());
    Eigen::VectorXd s = svd.singularValues().head(keep);
    s /= s.norm();
    sites_[static_cast<std::size_t>(k)] = unstack_rows(svd.matrixU().leftCols(keep), d);
    const Matrix carry = s.cast<std::complex<double>>().asDiagonal() * svd.matrixV().leftCols(keep).adjoint();
    for (auto& a : sites_[static_cast<std::size_t>(k + 1)]) a = (carry * a).eval();
    schmidt_[static_cast<std::size_t>(k + 1)] = s;
  }
  double last = 0.0;
  for (const auto& a : sites_.back()) last += a.squaredNorm();
  last = std::sqrt(last);
  for (auto& a : sites_.back()) a /= last;
  canonical_ = true;
}

MatrixProductState mps_from_dense(const DenseState& state, int chi_max, double trunc_eps) {
  if (chi_max < 1) throw std::invalid_argument("chi_max must be positive");
  if (trunc_eps < 0) throw std::invalid_argument("trunc_eps must be non-negative");
  const int L = state.num_sites();
  const int d = state.local_dim();
  std::vector<MatrixProductState::SiteTensor> sites;
  std::vector<Eigen::VectorXd> schmidt{Eigen::VectorXd::Ones(1)};
  bool truncated = false;
  double discarded = 0.0;

  // carry: chi x (d^(L-k)) with the configuration of site k slowest in the column index.
  Matrix carry = state.amplitudes().transpose();
  for (int k = 0; k + 1 < L; ++k) {
    const Eigen::Index chi = carry.rows();
    const Eigen::Index rest = carry.cols() / d;
    Matrix m(chi * d, rest);
    for (int s = 0; s < d; ++s) m.middleRows(s * chi, chi) = carry.middleCols(s * rest, rest);
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const Eigen::Index nonzero = kept_values(sv);
    Eigen::Index keep = std::min<Eigen::Index>(nonzero, chi_max);
    double tail = 0.0;
    for (Eigen::Index j = keep; j < sv.size(); ++j) tail += sv(j) * sv(j);
    while (keep > 1 && tail + sv(keep - 1) * sv(keep - 1) <= trunc_eps) {
      --keep;
      tail += sv(keep) * sv(keep);
    }
    if (keep < nonzero) truncated = true;
    discarded = std::max(discarded, tail);
    sites.push_back(unstack_rows(svd.matrixU().leftCols(keep), d));
    schmidt.push_back(sv.head(keep));
    carry = sv.head(keep).cast<std::complex<double>>().asDiagonal() * svd.matrixV().leftCols(keep).adjoint();
  }
  MatrixProductState::SiteTensor last(static_cast<std::size_t>(d));
  for (int s = 0; s < d; ++s) last[static_cast<std::size_t>(s)] = carry.col(s);
  sites.push_back(std::move(last));
  schmidt.push_back(Eigen::VectorXd::Ones(1));

  MatrixProductState mps(std::move(sites), d);
  if (truncated) {
    mps.canonicalize();
  } else {
    for (auto& s : schmidt) s /= s.norm();
    mps.set_canonical(std::move(schmidt));
  }
  mps.set_truncation(truncated, discarded);
  return mps;
}

double single_cut_entropy(const MatrixProductState& mps, int bond) {
  if (bond < 0 || bond > mps.num_sites()) throw std::out_of_range("bond outside the chain");
  MatrixProductState storage;
  const auto& c = canonical_view(mps, storage);
  return schmidt_entropy_bits(c.schmidt_values(bond));
}

const char* strategy_name(EntropyStrategy strategy) {
  switch (strategy) {
    case EntropyStrategy::SingleCut: return "single-cut";
    case EntropyStrategy::TransferMatrix: return "transfer-matrix";
    case EntropyStrategy::ReducedDensityMatrix: return "reduced-density-matrix";
    case EntropyStrategy::ComplementTransferMatrix: return "complement";
  }
  return "unknown";
}

Environment site_environment(const MatrixProductState& mps, int site) {
  const auto& t = mps.site(site);
  Environment env;
  env.first = site;
  env.last = site;
  env.chi_left = static_cast<int>(t[0].rows());
  env.chi_right = static_cast<int>(t[0].cols());
  env.data.assign(static_cast<std::size_t>(env.chi_left) * env.chi_left * env.chi_right * env.chi_right, 0.0);
  for (const auto& a : t) {
    for (int r = 0; r < env.chi_left; ++r) {
      for (int rp = 0; rp < env.chi_left; ++rp) {
        Eigen::Map<RowMatrix> block(&env(r, rp, 0, 0), env.chi_right, env.chi_right);
        block.noalias() += a.row(r).adjoint() * a.row(rp);
      }
    }
  }
  return env;
}

void extend_environment(const MatrixProductState& mps, Environment& env, Direction direction) {
  const int d = mps.local_dim();
  if (direction == Direction::Right) {
    const int site = env.last + 1;
    if (site >= mps.num_sites()) throw std::out_of_range("environment already at the right edge");
    const auto& t = mps.site(site);
    const int cc = static_cast<int>(t[0].cols());
    std::vector<std::complex<double>> out(static_cast<std::size_t>(env.chi_left) * env.chi_left * cc * cc);
    for (int a = 0; a < env.chi_left; ++a) {
      for (int ap = 0; ap < env.chi_left; ++ap) {
        Eigen::Map<const RowMatrix> block(&env(a, ap, 0, 0), env.chi_right, env.chi_right);
        Eigen::Map<RowMatrix> target(out.data() + (static_cast<std::size_t>(a) * env.chi_left + ap) * cc * cc, cc, cc);
        for (int s = 0; s < d; ++s) {
          const auto& m = t[static_cast<std::size_t>(s)];
          target.noalias() += m.adjoint() * (block * m);
        }
      }
    }
    env.data = std::move(out);
    env.chi_right = cc;
    env.last = site;
    return;
  }
  const int site = env.first - 1;
  if (site < 0) throw std::out_of_range("environment already at the left edge");
  const auto& t = mps.site(site);
  const int cc = static_cast<int>(t[0].rows());
  const int ca = env.chi_left;
  const Eigen::Index tail = static_cast<Eigen::Index>(env.chi_right) * env.chi_right;
  std::vector<std::complex<double>> out(static_cast<std::size_t>(cc) * cc * static_cast<std::size_t>(tail));
  Eigen::Map<const RowMatrix> e(env.data.data(), ca, ca * tail);
  for (int s = 0; s < d; ++s) {
    const auto& m = t[static_cast<std::size_t>(s)];
    // F[c][a'][bb'] = sum_a conj(A_{ca}) E[a][a'][bb']
    const RowMatrix f = m.conjugate() * e;
    for (int c = 0; c < cc; ++c) {
      Eigen::Map<const RowMatrix> fc(f.data() + static_cast<Eigen::Index>(c) * ca * tail, ca, tail);
      Eigen::Map<RowMatrix> target(out.data() + static_cast<std::size_t>(c) * cc * tail, cc, tail);
      target.noalias() += m * fc;
    }
  }
  env.data = std::move(out);
  env.chi_left = cc;
  env.first = site;
}

Environment build_environment(const MatrixProductState& mps, int first, int last, Direction direction) {
  if (first < 0 || last < first || last >= mps.num_sites()) throw std::out_of_range("bad environment window");
  if (direction == Direction::Right) {
    Environment env = site_environment(mps, first);
    while (env.last < last) extend_environment(mps, env, Direction::Right);
    return env;
  }
  Environment env = site_environment(mps, last);
  while (env.first > first) extend_environment(mps, env, Direction::Left);
  return env;
}

double transfer_matrix_entropy(const MatrixProductState& mps, const Environment& env) {
  return entropy_of_hermitian(transfer_matrix(mps, env));
}

double reduced_density_matrix_entropy(const MatrixProductState& mps, int ell, int m) {
  check_window(mps, ell, m);
  const int d = mps.local_dim();
  const int ca = mps.bond_dim(m);
  // N stacked with rows (a, sigma-string), a slowest.
  Matrix n = stack_rows(mps.site(m));
  {
    Matrix reordered(n.rows(), n.cols());
    for (int s = 0; s < d; ++s) {
      for (int a = 0; a < ca; ++a) reordered.row(a * d + s) = n.row(s * ca + a);
    }
    n = std::move(reordered);
  }
  Eigen::Index configs = d;
  for (int k = m + 1; k <= m + ell; ++k) {
    const auto& t = mps.site(k);
    Matrix next(n.rows() * d, t[0].cols());
    for (int a = 0; a < ca; ++a) {
      for (Eigen::Index c = 0; c < configs; ++c) {
        for (int s = 0; s < d; ++s) {
          next.row((a * configs + c) * d + s) = n.row(a * configs + c) * t[static_cast<std::size_t>(s)];
        }
      }
    }
    n = std::move(next);
    configs *= d;
  }
  const Eigen::VectorXd& lambda = mps.schmidt_values(m + ell + 1);
  n = n * lambda.cast<std::complex<double>>().asDiagonal();
  Matrix rho = Matrix::Zero(configs, configs);
  for (int a = 0; a < ca; ++a) {
    const auto x = n.middleRows(a * configs, configs);
    rho.noalias() += x * x.adjoint();
  }
  return entropy_of_hermitian(rho);
}

double complement_entropy(const MatrixProductState& mps, const Environment& env) {
  if (!mps.pure()) throw std::invalid_argument("complement route needs a pure state");
  const int L = mps.num_sites();
  if (env.first == 0 && env.last == L - 1) return 0.0;
  const Matrix lp = left_piece(mps, 0, env.first);
  const Matrix rp = right_piece(mps, env.last + 1, L);
  const int ca = env.chi_left;
  const int cb = env.chi_right;
  // G((a,b),(a',b')) = sum_sigma N_ab conj(N_a'b') = conj(E(a,a',b,b')).
  Matrix g(ca * cb, ca * cb);
  for (int a = 0; a < ca; ++a) {
    for (int ap = 0; ap < ca; ++ap) {
      for (int b = 0; b < cb; ++b) {
        for (int bp = 0; bp < cb; ++bp) g(a * cb + b, ap * cb + bp) = std::conj(env(a, ap, b, bp));
      }
    }
  }
  Matrix k(lp.rows() * rp.cols(), ca * cb);
  for (Eigen::Index s = 0; s < lp.rows(); ++s) {
    for (Eigen::Index r = 0; r < rp.cols(); ++r) {
      for (int a = 0; a < ca; ++a) {
        for (int b = 0; b < cb; ++b) k(s * rp.cols() + r, a * cb + b) = lp(s, a) * rp(b, r);
      }
    }
  }
  const Matrix rho = k * g * k.adjoint();
  return entropy_of_hermitian(rho);
}

double double_cut_entropy(const MatrixProductState& mps, int ell, int m, EntropyStrategy strategy) {
  check_window(mps, ell, m);
  MatrixProductState storage;
  const auto& c = canonical_view(mps, storage);
  const int L = c.num_sites();
  switch (strategy) {
    case EntropyStrategy::SingleCut:
      if (m == 0 && ell == L - 1) return 0.0;
      if (m == 0) return single_cut_entropy(c, ell + 1);
      if (m + ell == L - 1) return single_cut_entropy(c, m);
      throw std::invalid_argument("single-cut route needs a window touching an edge");
    case EntropyStrategy::TransferMatrix:
      return transfer_matrix_entropy(c, build_environment(c, m, m + ell));
    case EntropyStrategy::ReducedDensityMatrix:
      return reduced_density_matrix_entropy(c, ell, m);
    case EntropyStrategy::ComplementTransferMatrix:
      return complement_entropy(c, build_environment(c, m, m + ell));
  }
  throw std::invalid_argument("unknown strategy");
}

double complement_entropy(const MatrixProductState& mps, int ell, int m) {
  return double_cut_entropy(mps, ell, m, EntropyStrategy::ComplementTransferMatrix);
}

EntropyStrategy pick_strategy(const std::array<double, 4>& costs) {
  constexpr std::array<EntropyStrategy, 4> order{EntropyStrategy::TransferMatrix, EntropyStrategy::SingleCut,
                                                 EntropyStrategy::ComplementTransferMatrix,
                                                 EntropyStrategy::ReducedDensityMatrix};
  EntropyStrategy best = order[0];
  double best_cost = std::numeric_limits<double>::infinity();
  for (const auto s : order) {
    const double c = costs[static_cast<std::size_t>(s)];
    if (c < best_cost) {
      best = s;
      best_cost = c;
    }
  }
  return best;
}

StrategyChoice choose_strategy(const WindowShape& w, const CacheState& cache) {
  if (static_cast<int>(w.bond_dims.size()) != w.num_sites + 1) {
    throw std::invalid_argument("window shape needs chi_0..chi_L");
  }
  if (w.ell < 0 || w.m < 0 || w.m + w.ell >= w.num_sites) throw std::out_of_range("window outside the chain");
  const double inf = std::numeric_limits<double>::infinity();
  const double d = w.local_dim;
  const int first = w.m;
  const int last = w.m + w.ell;
  const double chi_a = w.bond_dims[static_cast<std::size_t>(first)];
  const double chi_b = w.bond_dims[static_cast<std::size_t>(last + 1)];
  const int sites = w.ell + 1;

  StrategyChoice out;
  out.costs.fill(inf);

  if (is_edge_window(w.num_sites, w.ell, w.m)) {
    const int bond = first == 0 ? last + 1 : first;
    out.costs[static_cast<std::size_t>(EntropyStrategy::SingleCut)] =
        std::max(1.0, static_cast<double>(w.bond_dims[static_cast<std::size_t>(bond)]));
  }

  const EnvPlan env = plan_environment(w, cache);
  const double tm_dim = chi_a * chi_b;
  out.costs[static_cast<std::size_t>(EntropyStrategy::TransferMatrix)] = env.cost + tm_dim * tm_dim * tm_dim;

  double rdm = 0.0;
  for (int k = 0; k < sites; ++k) {
    rdm += ipow(d, k + 1) * chi_a * w.bond_dims[static_cast<std::size_t>(first + k)] *
           w.bond_dims[static_cast<std::size_t>(first + k + 1)];
  }
  const double rdm_dim = ipow(d, sites);
  rdm += rdm_dim * rdm_dim * chi_a * chi_b + rdm_dim * rdm_dim * rdm_dim;
  out.costs[static_cast<std::size_t>(EntropyStrategy::ReducedDensityMatrix)] = rdm;

  if (w.pure && w.ell >= w.num_sites / 2) {
    const int outside = w.num_sites - sites;
    double pieces = 0.0;
    for (int k = 0; k < first; ++k) {
      pieces += ipow(d, k + 1) * w.bond_dims[static_cast<std::size_t>(k)] * w.bond_dims[static_cast<std::size_t>(k + 1)];
    }
    for (int k = last + 1; k < w.num_sites; ++k) {
      pieces += ipow(d, w.num_sites - k) * w.bond_dims[static_cast<std::size_t>(k)] *
                w.bond_dims[static_cast<std::size_t>(k + 1)];
    }
    const double c_dim = ipow(d, outside);
    out.costs[static_cast<std::size_t>(EntropyStrategy::ComplementTransferMatrix)] =
        env.cost + pieces + c_dim * tm_dim * tm_dim + c_dim * c_dim * tm_dim + c_dim * c_dim * c_dim;
  }

  out.strategy = pick_strategy(out.costs);
  out.cost = out.costs[static_cast<std::size_t>(out.strategy)];
  return out;
}

StrategyChoice choose_strategy(const MatrixProductState& mps, int ell, int m, const CacheState& cache) {
  check_window(mps, ell, m);
  return choose_strategy(WindowShape{mps.num_sites(), mps.local_dim(), ell, m, mps.bond_dims(), mps.pure()}, cache);
}

MpsEntropyProvider::MpsEntropyProvider(MatrixProductState mps, int cache_capacity)
    : mps_(std::move(mps)), capacity_(cache_capacity) {
  if (cache_capacity < 0) throw std::invalid_argument("cache capacity must be non-negative");
  if (!mps_.canonical()) mps_.canonicalize();
}

const MpsEntropyProvider::CacheEntry* MpsEntropyProvider::find(CacheKey key) const {
  for (const auto& e : cache_) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

void MpsEntropyProvider::store(CacheKey key, Environment env) {
  if (capacity_ == 0) return;
  for (auto& e : cache_) {
    if (e.key == key) {
      e.env = std::move(env);
      return;
    }
  }
  cache_.push_back({key, std::move(env)});
  if (static_cast<int>(cache_.size()) > capacity_) cache_.erase(cache_.begin());
}

Environment MpsEntropyProvider::environment_for(int ell, int m, const CacheState& state) {
  const WindowShape shape{mps_.num_sites(), mps_.local_dim(), ell, m, mps_.bond_dims(), mps_.pure()};
  const EnvPlan plan = plan_environment(shape, state);
  const int last = m + ell;
  Environment env;
  CacheKey key{m, Direction::Right};
  switch (plan.source) {
    case EnvSource::RightCache:
      env = find({m, Direction::Right})->env;
      break;
    case EnvSource::LeftCache:
      env = find({last, Direction::Left})->env;
      key = {last, Direction::Left};
      break;
    case EnvSource::Scratch:
      env = site_environment(mps_, m);
      ++contractions_;
      break;
  }
  while (env.last < last) {
    extend_environment(mps_, env, Direction::Right);
    ++contractions_;
  }
  while (env.first > m) {
    extend_environment(mps_, env, Direction::Left);
    ++contractions_;
  }
  store(key, env);
  return env;
}

double MpsEntropyProvider::subsystem_entropy(int ell, int m) {
  check_window(mps_, ell, m);
  CacheState state;
  if (const auto* e = find({m, Direction::Right}); e && e->env.last <= m + ell) state.right_last = e->env.last;
  if (const auto* e = find({m + ell, Direction::Left}); e && e->env.first >= m) state.left_first = e->env.first;
  const StrategyChoice choice = choose_strategy(mps_, ell, m, state);
  ++strategy_counts_[static_cast<std::size_t>(choice.strategy)];
  switch (choice.strategy) {
    case EntropyStrategy::SingleCut:
      return double_cut_entropy(mps_, ell, m, EntropyStrategy::SingleCut);
    case EntropyStrategy::ReducedDensityMatrix:
      contractions_ += static_cast<std::uint64_t>(ell + 1);
      return reduced_density_matrix_entropy(mps_, ell, m);
    case EntropyStrategy::TransferMatrix:
      return transfer_matrix_entropy(mps_, environment_for(ell, m, state));
    case EntropyStrategy::ComplementTransferMatrix: {
      const Environment env = environment_for(ell, m, state);
      contractions_ += static_cast<std::uint64_t>(mps_.num_sites() - ell - 1);
      return complement_entropy(mps_, env);
    }
  }
  throw std::logic_error("unknown strategy");
}

}  // namespace infolat
