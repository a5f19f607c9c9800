// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#include "scope/nn/ops.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "scope/util/error.hpp"

namespace scope::nn {
namespace {

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument(fmt::format("{}: shape mismatch {}x{} vs {}x{}", op, a.rows(), a.cols(), b.rows(), b.cols()));
  }
}

Node& parent(Node& n, std::size_t i) { return *n.parents[i]; }

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) {
    throw InvalidArgument(fmt::format("matmul: {}x{} by {}x{}", a.rows(), a.cols(), b.rows(), b.cols()));
  }
  Matrix v = a.value() * b.value();
  return make_result(std::move(v), {a, b}, [](Node& n) {
    Node& pa = parent(n, 0);
    Node& pb = parent(n, 1);
    if (pa.requires_grad) pa.accumulate_expr(n.grad * pb.value.transpose());
    if (pb.requires_grad) pb.accumulate_expr(pa.value.transpose() * n.grad);
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "add");
  return make_result(a.value() + b.value(), {a, b}, [](Node& n) {
    for (auto& p : n.parents) {
      if (p->requires_grad) p->accumulate(n.grad);
    }
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "sub");
  return make_result(a.value() - b.value(), {a, b}, [](Node& n) {
    if (parent(n, 0).requires_grad) parent(n, 0).accumulate(n.grad);
    if (parent(n, 1).requires_grad) parent(n, 1).accumulate_expr(-n.grad);
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "mul");
  return make_result(a.value().cwiseProduct(b.value()), {a, b}, [](Node& n) {
    Node& pa = parent(n, 0);
    Node& pb = parent(n, 1);
    if (pa.requires_grad) pa.accumulate_expr(n.grad.cwiseProduct(pb.value));
    if (pb.requires_grad) pb.accumulate_expr(n.grad.cwiseProduct(pa.value));
  });
}

Tensor scale(const Tensor& a, double s) {
  return make_result(a.value() * s, {a}, [s](Node& n) { parent(n, 0).accumulate_expr(n.grad * s); });
}

Tensor add_row(const Tensor& a, const Tensor& row) {
  if (row.rows() != 1 || row.cols() != a.cols()) throw InvalidArgument("add_row: row must be 1 x cols");
  Matrix v = a.value();
  v.rowwise() += row.value().row(0);
  return make_result(std::move(v), {a, row}, [](Node& n) {
    if (parent(n, 0).requires_grad) parent(n, 0).accumulate(n.grad);
    if (parent(n, 1).requires_grad) parent(n, 1).accumulate_expr(n.grad.colwise().sum());
  });
}

Tensor mul_col(const Tensor& a, const Tensor& col) {
  if (col.cols() != 1 || col.rows() != a.rows()) throw InvalidArgument("mul_col: column must be rows x 1");
  Matrix v = a.value().array().colwise() * col.value().col(0).array();
  return make_result(std::move(v), {a, col}, [](Node& n) {
    Node& pa = parent(n, 0);
    Node& pc = parent(n, 1);
    if (pa.requires_grad) {
      Matrix g = n.grad.array().colwise() * pc.value.col(0).array();
      pa.accumulate(g);
    }
    if (pc.requires_grad) pc.accumulate_expr(n.grad.cwiseProduct(pa.value).rowwise().sum());
  });
}

Tensor relu(const Tensor& a) {
  Matrix v = a.value().cwiseMax(0.0);
  return make_result(std::move(v), {a}, [](Node& n) {
    Node& p = parent(n, 0);
    p.accumulate_expr((p.value.array() > 0.0).cast<double>().matrix().cwiseProduct(n.grad));
  });
}

Tensor sigmoid(const Tensor& a) {
  Matrix v = a.value().unaryExpr([](double x) { return 1.0 / (1.0 + std::exp(-x)); });
  return make_result(v, {a}, [v](Node& n) {
    parent(n, 0).accumulate_expr(n.grad.cwiseProduct(v.cwiseProduct((1.0 - v.array()).matrix())));
  });
}

Tensor norm3(const Tensor& x, const Tensor& y, const Tensor& z, double eps) {
  check_same_shape(x, y, "norm3");
  check_same_shape(x, z, "norm3");
  Matrix v = (x.value().array().square() + y.value().array().square() + z.value().array().square() + eps).sqrt();
  return make_result(v, {x, y, z}, [v](Node& n) {
    Matrix g = n.grad.cwiseQuotient(v);
    for (std::size_t i = 0; i < 3; ++i) {
      Node& p = parent(n, i);
      if (p.requires_grad) p.accumulate_expr(g.cwiseProduct(p.value));
    }
  });
}

Tensor sum_all(const Tensor& a) {
  Matrix v(1, 1);
  v(0, 0) = a.value().sum();
  return make_result(std::move(v), {a}, [](Node& n) {
    Node& p = parent(n, 0);
    p.accumulate_expr(Matrix::Constant(p.value.rows(), p.value.cols(), n.grad(0, 0)));
  });
}

Tensor sum_squares(const Tensor& a) {
  Matrix v(1, 1);
  v(0, 0) = a.value().squaredNorm();
  return make_result(std::move(v), {a}, [](Node& n) {
    Node& p = parent(n, 0);
    p.accumulate_expr(p.value * (2.0 * n.grad(0, 0)));
  });
}

Tensor sum_rows(const Tensor& a) {
  Matrix v = a.value().colwise().sum();
  return make_result(std::move(v), {a}, [](Node& n) {
    Node& p = parent(n, 0);
    Matrix g = n.grad.replicate(p.value.rows(), 1);
    p.accumulate(g);
  });
}

Tensor concat_cols(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw InvalidArgument("concat_cols: no inputs");
  const Eigen::Index rows = parts.front().rows();
  Eigen::Index cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) throw InvalidArgument("concat_cols: row counts differ");
    cols += p.cols();
  }
  Matrix v(rows, cols);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    v.middleCols(at, p.cols()) = p.value();
    at += p.cols();
  }
  return make_result(std::move(v), parts, [](Node& n) {
    Eigen::Index at = 0;
    for (auto& p : n.parents) {
      const auto c = p->value.cols();
      if (p->requires_grad) p->accumulate_expr(n.grad.middleCols(at, c));
      at += c;
    }
  });
}

Tensor gather_rows(const Tensor& a, const std::vector<int>& index) {
  Matrix v(static_cast<Eigen::Index>(index.size()), a.cols());
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] < -1 || index[i] >= a.rows()) throw InvalidArgument("gather_rows: index out of range");
    if (index[i] < 0) {
      v.row(static_cast<Eigen::Index>(i)).setZero();
    } else {
      v.row(static_cast<Eigen::Index>(i)) = a.value().row(index[i]);
    }
  }
  return make_result(std::move(v), {a}, [index](Node& n) {
    Node& p = parent(n, 0);
    if (p.grad.size() == 0) p.grad = Matrix::Zero(p.value.rows(), p.value.cols());
    for (std::size_t i = 0; i < index.size(); ++i) {
      if (index[i] >= 0) p.grad.row(index[i]) += n.grad.row(static_cast<Eigen::Index>(i));
    }
  });
}

Tensor scatter_add_rows(const Tensor& a, const std::vector<int>& index, Eigen::Index n_out) {
  if (static_cast<Eigen::Index>(index.size()) != a.rows()) throw InvalidArgument("scatter_add_rows: index size");
  Matrix v = Matrix::Zero(n_out, a.cols());
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] < 0 || index[i] >= n_out) throw InvalidArgument("scatter_add_rows: index out of range");
    v.row(index[i]) += a.value().row(static_cast<Eigen::Index>(i));
  }
  return make_result(std::move(v), {a}, [index](Node& n) {
    Node& p = parent(n, 0);
    if (p.grad.size() == 0) p.grad = Matrix::Zero(p.value.rows(), p.value.cols());
    for (std::size_t i = 0; i < index.size(); ++i) p.grad.row(static_cast<Eigen::Index>(i)) += n.grad.row(index[i]);
  });
}

Tensor propagate(const Tensor& a, const std::vector<int>& src, const std::vector<int>& dst, Eigen::Index n_out) {
  if (src.size() != dst.size()) throw InvalidArgument("propagate: src/dst length mismatch");
  Matrix v = Matrix::Zero(n_out, a.cols());
  for (std::size_t e = 0; e < src.size(); ++e) {
    if (src[e] < 0 || src[e] >= a.rows() || dst[e] < 0 || dst[e] >= n_out) {
      throw InvalidArgument("propagate: edge index out of range");
    }
    v.row(dst[e]) += a.value().row(src[e]);
  }
  return make_result(std::move(v), {a}, [src, dst](Node& n) {
    Node& p = parent(n, 0);
    if (p.grad.size() == 0) p.grad = Matrix::Zero(p.value.rows(), p.value.cols());
    for (std::size_t e = 0; e < src.size(); ++e) p.grad.row(src[e]) += n.grad.row(dst[e]);
  });
}

Tensor fit_rows(const Tensor& a, Eigen::Index n_rows) {
  Matrix v = Matrix::Zero(n_rows, a.cols());
  const auto keep = std::min(n_rows, a.rows());
  v.topRows(keep) = a.value().topRows(keep);
  return make_result(std::move(v), {a}, [keep](Node& n) {
    Node& p = parent(n, 0);
    if (p.grad.size() == 0) p.grad = Matrix::Zero(p.value.rows(), p.value.cols());
    p.grad.topRows(keep) += n.grad.topRows(keep);
  });
}

Tensor unfold(const Tensor& a, int k) {
  const Eigen::Index c = a.cols();
  const Eigen::Index out_rows = a.rows() - k + 1;
  if (k < 1 || out_rows < 1) throw InvalidArgument(fmt::format("unfold: {} rows too short for kernel {}", a.rows(), k));
  Matrix v(out_rows, k * c);
  for (Eigen::Index t = 0; t < out_rows; ++t) {
    for (int j = 0; j < k; ++j) v.block(t, j * c, 1, c) = a.value().row(t + j);
  }
  return make_result(std::move(v), {a}, [k, c, out_rows](Node& n) {
    Node& p = parent(n, 0);
    if (p.grad.size() == 0) p.grad = Matrix::Zero(p.value.rows(), p.value.cols());
    for (Eigen::Index t = 0; t < out_rows; ++t) {
      for (int j = 0; j < k; ++j) p.grad.row(t + j) += n.grad.block(t, j * c, 1, c);
    }
  });
}

Tensor batch_norm_train(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps, BatchStats* stats) {
  const auto rows = static_cast<double>(x.rows());
  if (x.rows() < 1) throw InvalidArgument("batch_norm: empty batch");
  RowVector mean = x.value().colwise().mean();
  Matrix centered = x.value().rowwise() - mean;
  RowVector var = centered.array().square().colwise().sum() / rows;
  RowVector inv_std = (var.array() + eps).rsqrt();
  Matrix xhat = centered.array().rowwise() * inv_std.array();
  Matrix y = xhat.array().rowwise() * gamma.value().row(0).array();
  y.rowwise() += beta.value().row(0);
  if (stats != nullptr) *stats = {mean, var};
  return make_result(std::move(y), {x, gamma, beta}, [xhat, inv_std, rows](Node& n) {
    Node& px = parent(n, 0);
    Node& pg = parent(n, 1);
    Node& pb = parent(n, 2);
    if (pg.requires_grad) pg.accumulate_expr(n.grad.cwiseProduct(xhat).colwise().sum());
    if (pb.requires_grad) pb.accumulate_expr(n.grad.colwise().sum());
    if (px.requires_grad) {
      Matrix gxhat = n.grad.array().rowwise() * pg.value.row(0).array();
      RowVector s1 = gxhat.colwise().sum();
      RowVector s2 = gxhat.cwiseProduct(xhat).colwise().sum();
      Matrix gx = gxhat * rows;
      gx.rowwise() -= s1;
      gx -= (xhat.array().rowwise() * s2.array()).matrix();
      gx = gx.array().rowwise() * (inv_std.array() / rows);
      px.accumulate(gx);
    }
  });
}

Tensor batch_norm_eval(const Tensor& x, const Tensor& gamma, const Tensor& beta, const RowVector& mean,
                       const RowVector& var, double eps) {
  RowVector inv_std = (var.array() + eps).rsqrt();
  RowVector s = inv_std.cwiseProduct(gamma.value().row(0));
  Matrix centered = x.value().rowwise() - mean;
  Matrix y = centered.array().rowwise() * s.array();
  y.rowwise() += beta.value().row(0);
  Matrix xhat = centered.array().rowwise() * inv_std.array();
  return make_result(std::move(y), {x, gamma, beta}, [xhat, s](Node& n) {
    Node& px = parent(n, 0);
    if (px.requires_grad) px.accumulate_expr((n.grad.array().rowwise() * s.array()).matrix());
    if (parent(n, 1).requires_grad) parent(n, 1).accumulate_expr(n.grad.cwiseProduct(xhat).colwise().sum());
    if (parent(n, 2).requires_grad) parent(n, 2).accumulate_expr(n.grad.colwise().sum());
  });
}

Tensor bce_with_logits(const Tensor& logits, const std::vector<double>& labels, double eps) {
  if (logits.cols() != 1 || logits.rows() != static_cast<Eigen::Index>(labels.size())) {
    throw InvalidArgument("bce_with_logits: logits must be n x 1 matching labels");
  }
  const auto n_rows = logits.rows();
  Matrix p(n_rows, 1);
  Matrix v = Matrix::Zero(1, 1);
  std::vector<bool> clamped(static_cast<std::size_t>(n_rows));
  for (Eigen::Index i = 0; i < n_rows; ++i) {
    const double z = logits.value()(i, 0);
    double pi = 1.0 / (1.0 + std::exp(-z));
    const double pc = std::clamp(pi, eps, 1.0 - eps);
    clamped[static_cast<std::size_t>(i)] = pc != pi;
    p(i, 0) = pi;
    const double y = labels[static_cast<std::size_t>(i)];
    v(0, 0) -= y * std::log(pc) + (1.0 - y) * std::log(1.0 - pc);
  }
  return make_result(std::move(v), {logits}, [p, labels, clamped](Node& n) {
    Matrix g(p.rows(), 1);
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      // d/dz of the clamped loss: zero where the clamp is active.
      g(i, 0) = clamped[static_cast<std::size_t>(i)] ? 0.0 : (p(i, 0) - labels[static_cast<std::size_t>(i)]) * n.grad(0, 0);
    }
    parent(n, 0).accumulate(g);
  });
}

Tensor bilinear_attention_pool(const Tensor& a, const Tensor& b_rows, const Tensor& q,
                               const std::vector<RowRange>& drug, const std::vector<RowRange>& protein) {
  const Eigen::Index k = a.cols();
  if (b_rows.cols() != k || q.cols() != k) throw InvalidArgument("bilinear_attention_pool: latent dims differ");
  if (drug.size() != protein.size() || drug.empty()) {
    throw InvalidArgument("bilinear_attention_pool: ranges must describe the same non-empty pairs");
  }
  for (std::size_t p = 0; p < drug.size(); ++p) {
    if (drug[p].size < 1 || protein[p].size < 1 || drug[p].start + drug[p].size > a.rows() ||
        protein[p].start + protein[p].size > b_rows.rows()) {
      throw InvalidArgument("bilinear_attention_pool: row range out of bounds");
    }
  }
  const auto n_pairs = static_cast<Eigen::Index>(drug.size());
  const Eigen::Index heads = q.rows();
  Matrix out = Matrix::Zero(n_pairs, k);
  for (Eigen::Index p = 0; p < n_pairs; ++p) {
    const auto A = a.value().middleRows(drug[static_cast<std::size_t>(p)].start, drug[static_cast<std::size_t>(p)].size);
    const auto B = b_rows.value().middleRows(protein[static_cast<std::size_t>(p)].start,
                                             protein[static_cast<std::size_t>(p)].size);
    for (Eigen::Index h = 0; h < heads; ++h) {
      Matrix aq = A.array().rowwise() * q.value().row(h).array();
      Matrix I = aq * B.transpose();
      // f'_k = sum_i A_ik (I B)_ik
      out.row(p) += (A.cwiseProduct(I * B)).colwise().sum();
    }
  }
  out /= static_cast<double>(heads);
  return make_result(std::move(out), {a, b_rows, q}, [drug, protein, heads](Node& n) {
    Node& pa = parent(n, 0);
    Node& pb = parent(n, 1);
    Node& pq = parent(n, 2);
    Matrix ga = Matrix::Zero(pa.value.rows(), pa.value.cols());
    Matrix gb = Matrix::Zero(pb.value.rows(), pb.value.cols());
    Matrix gq = Matrix::Zero(pq.value.rows(), pq.value.cols());
    for (std::size_t p = 0; p < drug.size(); ++p) {
      const auto [d0, dn] = drug[p];
      const auto [p0, pn] = protein[p];
      const auto A = pa.value.middleRows(d0, dn);
      const auto B = pb.value.middleRows(p0, pn);
      const RowVector g = n.grad.row(static_cast<Eigen::Index>(p)) / static_cast<double>(heads);
      // dL/dI_ij = sum_k g_k A_ik B_jk, shared by all heads.
      Matrix ag = A.array().rowwise() * g.array();
      Matrix G = ag * B.transpose();
      Matrix GB = G * B;
      Matrix GtA = G.transpose() * A;
      for (Eigen::Index h = 0; h < heads; ++h) {
        const RowVector qh = pq.value.row(h);
        Matrix aq = A.array().rowwise() * qh.array();
        Matrix I = aq * B.transpose();
        ga.middleRows(d0, dn) += ((I * B).array().rowwise() * g.array()).matrix() +
                                 (GB.array().rowwise() * qh.array()).matrix();
        gb.middleRows(p0, pn) += ((I.transpose() * A).array().rowwise() * g.array()).matrix() +
                                 (GtA.array().rowwise() * qh.array()).matrix();
        gq.row(h) += A.cwiseProduct(GB).colwise().sum();
      }
    }
    if (pa.requires_grad) pa.accumulate(ga);
    if (pb.requires_grad) pb.accumulate(gb);
    if (pq.requires_grad) pq.accumulate(gq);
  });
}

}  // namespace scope::nn
