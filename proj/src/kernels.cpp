#include "ushrink/kernels.hpp"

#include <cmath>
#include <string>

#include "ushrink/errors.hpp"

namespace ushrink {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_square_symmetric(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw InputError("precomputed kernel: matrix must be square, got " + std::to_string(m.rows()) +
                     "x" + std::to_string(m.cols()));
  }
  if (m.size() == 0) return;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= 1e-9 * scale)) {
    throw InputError("precomputed kernel: matrix is not symmetric (max |G - G^T| = " +
                     std::to_string(asym) + ")");
  }
}

}  // namespace

void validate(const KernelSpec& spec) {
  std::visit(Overloaded{
                 [](const LinearKernel&) {},
                 [](const GaussianKernel& k) {
                   if (!(k.bandwidth > 0.0) || !std::isfinite(k.bandwidth)) {
                     throw ParameterError("gaussian kernel: bandwidth must be positive and finite");
                   }
                 },
                 [](const ExponentialKernel& k) {
                   if (!(k.scale > 0.0) || !std::isfinite(k.scale)) {
                     throw ParameterError("exponential kernel: scale must be positive and finite");
                   }
                 },
                 [](const PrecomputedKernel& k) { check_square_symmetric(k.matrix); },
             },
             spec);
}

bool is_precomputed(const KernelSpec& spec) noexcept {
  return std::holds_alternative<PrecomputedKernel>(spec);
}

double eval_kernel(const KernelSpec& spec, const PointRef& x, const PointRef& y) {
  if (is_precomputed(spec)) {
    throw UnsupportedOperationError("eval_kernel: a precomputed kernel cannot be evaluated at new points");
  }
  if (x.size() != y.size()) {
    throw InputError("eval_kernel: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                     std::to_string(y.size()) + ")");
  }
  return std::visit(Overloaded{
                        [&](const LinearKernel&) { return x.dot(y); },
                        [&](const GaussianKernel& k) {
                          return std::exp(-(x - y).squaredNorm() / k.bandwidth);
                        },
                        [&](const ExponentialKernel& k) { return std::exp(x.dot(y) / k.scale); },
                        [](const PrecomputedKernel&) { return 0.0; },
                    },
                    spec);
}

GramMatrix::GramMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw InputError("gram: matrix must be square");
  }
  Matrix sym = 0.5 * (entries_ + entries_.transpose());
  entries_ = std::move(sym);
}

GramMatrix gram(const KernelSpec& spec, const Dataset& data) {
  validate(spec);
  const Index n = data.rows();
  if (n == 0) throw InputError("gram: dataset is empty");
  if (const auto* pre = std::get_if<PrecomputedKernel>(&spec)) {
    if (pre->matrix.rows() != n) {
      throw InputError("gram: precomputed matrix has dimension " + std::to_string(pre->matrix.rows()) +
                       " but the dataset has " + std::to_string(n) + " observations");
    }
    return GramMatrix(pre->matrix);
  }
  Matrix g(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      g(i, j) = eval_kernel(spec, data.row(i), data.row(j));
      g(j, i) = g(i, j);
    }
  }
  return GramMatrix(std::move(g));
}

Matrix cross_gram(const KernelSpec& spec, const Dataset& rows, const Dataset& cols) {
  validate(spec);
  if (rows.rows() > 0 && cols.rows() > 0 && rows.cols() != cols.cols()) {
    throw InputError("cross_gram: dimension mismatch (" + std::to_string(rows.cols()) + " vs " +
                     std::to_string(cols.cols()) + ")");
  }
  Matrix out(rows.rows(), cols.rows());
  for (Index i = 0; i < rows.rows(); ++i) {
    for (Index j = 0; j < cols.rows(); ++j) {
      out(i, j) = eval_kernel(spec, rows.row(i), cols.row(j));
    }
  }
  return out;
}

}  // namespace ushrink
