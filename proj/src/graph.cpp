#include "sketchkd/graph.hpp"

#include <cmath>
#include <memory>
#include <utility>

namespace sketchkd {
namespace graph {

namespace {

bool wants_grad(const Tape& t, std::initializer_list<Var> parents) {
  if (!t.grad_enabled()) return false;
  for (Var p : parents) {
    if (p->requires_grad) return true;
  }
  return false;
}

}  // namespace

Var matmul(Tape& t, Var a, Var b) {
  require(a->val.cols() == b->val.rows(), "matmul: inner dims ", a->val.cols(),
          " vs ", b->val.rows());
  Var out = t.alloc(a->val * b->val);
  if (wants_grad(t, {a, b})) {
    out->requires_grad = true;
    out->backward = [a, b](const Mat& g) {
      if (a->requires_grad) a->accumulate(g * b->val.transpose());
      if (b->requires_grad) b->accumulate(a->val.transpose() * g);
    };
  }
  return out;
}

Var add(Tape& t, Var a, Var b) {
  require(a->val.rows() == b->val.rows() && a->val.cols() == b->val.cols(),
          "add: shape mismatch");
  Var out = t.alloc(a->val + b->val);
  if (wants_grad(t, {a, b})) {
    out->requires_grad = true;
    out->backward = [a, b](const Mat& g) {
      if (a->requires_grad) a->accumulate(g);
      if (b->requires_grad) b->accumulate(g);
    };
  }
  return out;
}

Var sub(Tape& t, Var a, Var b) {
  require(a->val.rows() == b->val.rows() && a->val.cols() == b->val.cols(),
          "sub: shape mismatch");
  Var out = t.alloc(a->val - b->val);
  if (wants_grad(t, {a, b})) {
    out->requires_grad = true;
    out->backward = [a, b](const Mat& g) {
      if (a->requires_grad) a->accumulate(g);
      if (b->requires_grad) b->accumulate(-g);
    };
  }
  return out;
}

Var hadamard(Tape& t, Var a, Var b) {
  require(a->val.rows() == b->val.rows() && a->val.cols() == b->val.cols(),
          "hadamard: shape mismatch");
  Var out = t.alloc(a->val.cwiseProduct(b->val));
  if (wants_grad(t, {a, b})) {
    out->requires_grad = true;
    out->backward = [a, b](const Mat& g) {
      if (a->requires_grad) a->accumulate(g.cwiseProduct(b->val));
      if (b->requires_grad) b->accumulate(g.cwiseProduct(a->val));
    };
  }
  return out;
}

Var hadamard_const(Tape& t, Var a, const Mat& c) {
  require(a->val.rows() == c.rows() && a->val.cols() == c.cols(),
          "hadamard_const: shape mismatch");
  Var out = t.alloc(a->val.cwiseProduct(c));
  if (wants_grad(t, {a})) {
    out->requires_grad = true;
    Mat cc = c;
    out->backward = [a, cc](const Mat& g) { a->accumulate(g.cwiseProduct(cc)); };
  }
  return out;
}

Var scale(Tape& t, Var a, double c) {
  Var out = t.alloc(a->val * c);
  if (wants_grad(t, {a})) {
    out->requires_grad = true;
    out->backward = [a, c](const Mat& g) { a->accumulate(g * c); };
  }
  return out;
}

Var add_scalar(Tape& t, Var a, double c) {
  Var out = t.alloc(a->val.array() + c);
  if (wants_grad(t, {a})) {
    out->requires_grad = true;
    out->backward = [a](const Mat& g) { a->accumulate(g); };
  }
  return out;
}

Var add_rowvec(Tape& t, Var a, Var row) {
  require(row->val.rows() == 1 && row->val.cols() == a->val.cols(),
          "add_rowvec: expected 1 x ", a->val.cols());
  Var out = t.alloc(a->val.rowwise() + row->val.row(0));
  if (wants_grad(t, {a, row})) {
    out->requires_grad = true;
    out->backward = [a, row](const Mat& g) {
      if (a->requires_grad) a->accumulate(g);
      if (row->requires_grad) row->accumulate(g.colwise().sum());
    };
  }
  return out;
}

Var relu(Tape& t, Var a) {
  Var out = t.alloc(a->val.cwiseMax(0.0));
  if (wants_grad(t, {a})) {
    out->requires_grad = true;
    out->backward = [a](const Mat& g) {
      a->accumulate((a->val.array() > 0.0).cast<double>().matrix().cwiseProduct(g));
    };
  }
  return out;
}

Var gelu(Tape& t, Var a) {
  const double inv_sqrt2 = 0.7071067811865475244;
  const double inv_sqrt2pi = 0.3989422804014326779;
  Mat phi = (0.5 * (1.0 + (a->val.array() * inv_sqrt2).erf())).matrix();
  Var out = t.alloc(a->val.cwiseProduct(phi));
  if (wants_grad(t, {a})) {
    out->requires_grad = true;
    Mat cdf = phi;
    out->backward = [a, cdf, inv_sqrt2pi](const Mat& g) {
      Mat pdf = (inv_sqrt2pi * (-0.5 * a->val.array().square()).exp()).matrix();
      a->accumulate(g.cwiseProduct(cdf + a->val.cwiseProduct(pdf)));
    };
  }
  return out;
}

Var log_elem(Tape& t, Var a) {
  Var out = t.alloc(a->val.array().log().matrix());
  if (wants_grad(t, {a})) {
    out->requires_grad = true;
    out->backward = [a](const Mat& g) {
      a->accumulate(g.cwiseQuotient(a->val));
    };
  }
  return out;
}

namespace {

Mat softmax_rows_val(const Mat& x) {
  Mat p(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    double m = x.row(r).maxCoeff();
    Eigen::ArrayXd e = (x.row(r).array() - m).exp();
    p.row(r) = (e / e.sum()).matrix();
  }
  return p;
}

}  // namespace

Var softmax_rows(Tape& t, Var a) {
  Var out = t.alloc(softmax_rows_val(a->val));
  if (wants_grad(t, {a})) {
    out->requires_grad = true;
    Node* o = out;
    out->backward = [a, o](const Mat& g) {
      Mat gp = g.cwiseProduct(o->val);
      Vec rs = gp.rowwise().sum();
      a->accumulate(gp - o->val.cwiseProduct(rs.replicate(1, g.cols())));
    };
  }
  return out;
}

Var log_softmax_rows(Tape& t, Var a) {
  Mat lp(a->val.rows(), a->val.cols());
  for (Eigen::Index r = 0; r < a->val.rows(); ++r) {
    double m = a->val.row(r).maxCoeff();
    double lse = std::log((a->val.row(r).array() - m).exp().sum()) + m;
    lp.row(r) = (a->val.row(r).array() - lse).matrix();
  }
  Var out = t.alloc(std::move(lp));
  if (wants_grad(t, {a})) {
    out->requires_grad = true;
    Node* o = out;
    out->backward = [a, o](const Mat& g) {
      Mat p = o->val.array().exp().matrix();
      Vec rs = g.rowwise().sum();
      a->accumulate(g - p.cwiseProduct(rs.replicate(1, g.cols())));
    };
  }
  return out;
}

Var layernorm_rows(Tape& t, Var a, Var gamma, Var beta, double eps) {
  const Eigen::Index c = a->val.cols();
  require(gamma->val.rows() == 1 && gamma->val.cols() == c, "layernorm: gamma 1 x C");
  require(beta->val.rows() == 1 && beta->val.cols() == c, "layernorm: beta 1 x C");
  Vec mu = a->val.rowwise().mean();
  Mat centered = a->val - mu.replicate(1, c);
  Vec var = centered.array().square().matrix().rowwise().mean();
  Vec inv_sigma = (var.array() + eps).rsqrt().matrix();
  Mat xhat = centered.cwiseProduct(inv_sigma.replicate(1, c));
  Mat y = (xhat.array().rowwise() * gamma->val.row(0).array()).matrix();
  y.rowwise() += beta->val.row(0);
  Var out = t.alloc(std::move(y));
  if (wants_grad(t, {a, gamma, beta})) {
    out->requires_grad = true;
    auto saved_xhat = std::make_shared<Mat>(std::move(xhat));
    auto saved_inv = std::make_shared<Vec>(std::move(inv_sigma));
    out->backward = [a, gamma, beta, saved_xhat, saved_inv](const Mat& g) {
      const Eigen::Index cc = g.cols();
      if (beta->requires_grad) beta->accumulate(g.colwise().sum());
      if (gamma->requires_grad)
        gamma->accumulate(g.cwiseProduct(*saved_xhat).colwise().sum());
      if (a->requires_grad) {
        Mat gg = (g.array().rowwise() * gamma->val.row(0).array()).matrix();
        Vec m1 = gg.rowwise().mean();
        Vec m2 = gg.cwiseProduct(*saved_xhat).rowwise().mean();
        Mat dx = gg - m1.replicate(1, cc) -
                 saved_xhat->cwiseProduct(m2.replicate(1, cc));
        a->accumulate(dx.cwiseProduct(saved_inv->replicate(1, cc)));
      }
    };
  }
  return out;
}

Var sum_cols(Tape& t, Var a) {
  Var out = t.alloc(a->val.rowwise().sum());
  if (wants_grad(t, {a})) {
    out->requires_grad = true;
    Eigen::Index c = a->val.cols();
    out->backward = [a, c](const Mat& g) { a->accumulate(g.replicate(1, c)); };
  }
  return out;
}

Var sum_all(Tape& t, Var a) {
  Mat s(1, 1);
  s(0, 0) = a->val.sum();
  Var out = t.alloc(std::move(s));
  if (wants_grad(t, {a})) {
    out->requires_grad = true;
    Eigen::Index r = a->val.rows(), c = a->val.cols();
    out->backward = [a, r, c](const Mat& g) {
      a->accumulate(Mat::Constant(r, c, g(0, 0)));
    };
  }
  return out;
}

Var mean_all(Tape& t, Var a) {
  return scale(t, sum_all(t, a), 1.0 / static_cast<double>(a->val.size()));
}

Var rowwise_sqdist(Tape& t, Var a, Var b) {
  require(a->val.rows() == b->val.rows() && a->val.cols() == b->val.cols(),
          "rowwise_sqdist: shape mismatch");
  Mat diff = a->val - b->val;
  Var out = t.alloc(diff.array().square().matrix().rowwise().sum());
  if (wants_grad(t, {a, b})) {
    out->requires_grad = true;
    auto saved = std::make_shared<Mat>(std::move(diff));
    Eigen::Index c = a->val.cols();
    out->backward = [a, b, saved, c](const Mat& g) {
      Mat d = 2.0 * saved->cwiseProduct(g.replicate(1, c));
      if (a->requires_grad) a->accumulate(d);
      if (b->requires_grad) b->accumulate(-d);
    };
  }
  return out;
}

Var space_to_depth(Tape& t, Var a, int n_images, int grid, int block) {
  require(block >= 1 && grid % block == 0, "space_to_depth: grid ", grid,
          " not divisible by block ", block);
  const int c = static_cast<int>(a->val.cols());
  require(a->val.rows() == static_cast<Eigen::Index>(n_images) * grid * grid,
          "space_to_depth: row count mismatch");
  const int og = grid / block;
  Mat out_val(static_cast<Eigen::Index>(n_images) * og * og,
              static_cast<Eigen::Index>(c) * block * block);
  for (int img = 0; img < n_images; ++img) {
    const int in0 = img * grid * grid;
    const int out0 = img * og * og;
    for (int oy = 0; oy < og; ++oy) {
      for (int ox = 0; ox < og; ++ox) {
        const int orow = out0 + oy * og + ox;
        for (int dy = 0; dy < block; ++dy) {
          for (int dx = 0; dx < block; ++dx) {
            const int irow = in0 + (oy * block + dy) * grid + (ox * block + dx);
            out_val.block(orow, (dy * block + dx) * c, 1, c) =
                a->val.block(irow, 0, 1, c);
          }
        }
      }
    }
  }
  Var out = t.alloc(std::move(out_val));
  if (wants_grad(t, {a})) {
    out->requires_grad = true;
    out->backward = [a, n_images, grid, block, c, og](const Mat& g) {
      Mat da = Mat::Zero(a->val.rows(), a->val.cols());
      for (int img = 0; img < n_images; ++img) {
        const int in0 = img * grid * grid;
        const int out0 = img * og * og;
        for (int oy = 0; oy < og; ++oy) {
          for (int ox = 0; ox < og; ++ox) {
            const int orow = out0 + oy * og + ox;
            for (int dy = 0; dy < block; ++dy) {
              for (int dx = 0; dx < block; ++dx) {
                const int irow =
                    in0 + (oy * block + dy) * grid + (ox * block + dx);
                da.block(irow, 0, 1, c) += g.block(orow, (dy * block + dx) * c, 1, c);
              }
            }
          }
        }
      }
      a->accumulate(da);
    };
  }
  return out;
}

Var concat_blocks(Tape& t, Var a, int na, Var b, int nb, int n_images) {
  require(a->val.cols() == b->val.cols(), "concat_blocks: channel mismatch");
  require(a->val.rows() == static_cast<Eigen::Index>(n_images) * na &&
              b->val.rows() == static_cast<Eigen::Index>(n_images) * nb,
          "concat_blocks: row counts");
  const Eigen::Index c = a->val.cols();
  Mat out_val(static_cast<Eigen::Index>(n_images) * (na + nb), c);
  for (int img = 0; img < n_images; ++img) {
    out_val.block(static_cast<Eigen::Index>(img) * (na + nb), 0, na, c) =
        a->val.block(static_cast<Eigen::Index>(img) * na, 0, na, c);
    out_val.block(static_cast<Eigen::Index>(img) * (na + nb) + na, 0, nb, c) =
        b->val.block(static_cast<Eigen::Index>(img) * nb, 0, nb, c);
  }
  Var out = t.alloc(std::move(out_val));
  if (wants_grad(t, {a, b})) {
    out->requires_grad = true;
    out->backward = [a, b, na, nb, n_images, c](const Mat& g) {
      if (a->requires_grad) {
        Mat da(a->val.rows(), c);
        for (int img = 0; img < n_images; ++img)
          da.block(static_cast<Eigen::Index>(img) * na, 0, na, c) =
              g.block(static_cast<Eigen::Index>(img) * (na + nb), 0, na, c);
        a->accumulate(da);
      }
      if (b->requires_grad) {
        Mat db(b->val.rows(), c);
        for (int img = 0; img < n_images; ++img)
          db.block(static_cast<Eigen::Index>(img) * nb, 0, nb, c) =
              g.block(static_cast<Eigen::Index>(img) * (na + nb) + na, 0, nb, c);
        b->accumulate(db);
      }
    };
  }
  return out;
}

Var take_block_head(Tape& t, Var a, int n_per_image, int n_images, int head) {
  require(a->val.rows() == static_cast<Eigen::Index>(n_per_image) * n_images,
          "take_block_head: row counts");
  require(head >= 1 && head <= n_per_image, "take_block_head: head size");
  const Eigen::Index c = a->val.cols();
  Mat out_val(static_cast<Eigen::Index>(n_images) * head, c);
  for (int img = 0; img < n_images; ++img)
    out_val.block(static_cast<Eigen::Index>(img) * head, 0, head, c) =
        a->val.block(static_cast<Eigen::Index>(img) * n_per_image, 0, head, c);
  Var out = t.alloc(std::move(out_val));
  if (wants_grad(t, {a})) {
    out->requires_grad = true;
    out->backward = [a, n_per_image, n_images, head, c](const Mat& g) {
      Mat da = Mat::Zero(a->val.rows(), c);
      for (int img = 0; img < n_images; ++img)
        da.block(static_cast<Eigen::Index>(img) * n_per_image, 0, head, c) =
            g.block(static_cast<Eigen::Index>(img) * head, 0, head, c);
      a->accumulate(da);
    };
  }
  return out;
}

Var take_block_tail(Tape& t, Var a, int n_per_image, int n_images, int skip) {
  require(a->val.rows() == static_cast<Eigen::Index>(n_per_image) * n_images,
          "take_block_tail: row counts");
  require(skip >= 0 && skip < n_per_image, "take_block_tail: skip size");
  const int keep = n_per_image - skip;
  const Eigen::Index c = a->val.cols();
  Mat out_val(static_cast<Eigen::Index>(n_images) * keep, c);
  for (int img = 0; img < n_images; ++img)
    out_val.block(static_cast<Eigen::Index>(img) * keep, 0, keep, c) =
        a->val.block(static_cast<Eigen::Index>(img) * n_per_image + skip, 0, keep, c);
  Var out = t.alloc(std::move(out_val));
  if (wants_grad(t, {a})) {
    out->requires_grad = true;
    out->backward = [a, n_per_image, n_images, skip, keep, c](const Mat& g) {
      Mat da = Mat::Zero(a->val.rows(), c);
      for (int img = 0; img < n_images; ++img)
        da.block(static_cast<Eigen::Index>(img) * n_per_image + skip, 0, keep, c) =
            g.block(static_cast<Eigen::Index>(img) * keep, 0, keep, c);
      a->accumulate(da);
    };
  }
  return out;
}

Var block_mean_rows(Tape& t, Var a, int n_per_image, int n_images) {
  require(a->val.rows() == static_cast<Eigen::Index>(n_per_image) * n_images,
          "block_mean_rows: row counts");
  const Eigen::Index c = a->val.cols();
  Mat out_val(n_images, c);
  for (int img = 0; img < n_images; ++img)
    out_val.row(img) =
        a->val.block(static_cast<Eigen::Index>(img) * n_per_image, 0, n_per_image, c)
            .colwise()
            .mean();
  Var out = t.alloc(std::move(out_val));
  if (wants_grad(t, {a})) {
    out->requires_grad = true;
    out->backward = [a, n_per_image, n_images, c](const Mat& g) {
      Mat da(a->val.rows(), c);
      const double inv = 1.0 / n_per_image;
      for (int img = 0; img < n_images; ++img)
        da.block(static_cast<Eigen::Index>(img) * n_per_image, 0, n_per_image, c) =
            (g.row(img) * inv).replicate(n_per_image, 1);
      a->accumulate(da);
    };
  }
  return out;
}

Var add_block_rowmat(Tape& t, Var a, Var table, int n_images) {
  const int n = static_cast<int>(table->val.rows());
  require(a->val.rows() == static_cast<Eigen::Index>(n) * n_images &&
              a->val.cols() == table->val.cols(),
          "add_block_rowmat: shape mismatch");
  Mat out_val = a->val;
  const Eigen::Index c = a->val.cols();
  for (int img = 0; img < n_images; ++img)
    out_val.block(static_cast<Eigen::Index>(img) * n, 0, n, c) += table->val;
  Var out = t.alloc(std::move(out_val));
  if (wants_grad(t, {a, table})) {
    out->requires_grad = true;
    out->backward = [a, table, n, n_images, c](const Mat& g) {
      if (a->requires_grad) a->accumulate(g);
      if (table->requires_grad) {
        Mat dt = Mat::Zero(n, c);
        for (int img = 0; img < n_images; ++img)
          dt += g.block(static_cast<Eigen::Index>(img) * n, 0, n, c);
        table->accumulate(dt);
      }
    };
  }
  return out;
}

Var repeat_row(Tape& t, Var a, int n) {
  require(a->val.rows() == 1, "repeat_row: expected a single row");
  Var out = t.alloc(a->val.replicate(n, 1));
  if (wants_grad(t, {a})) {
    out->requires_grad = true;
    out->backward = [a](const Mat& g) { a->accumulate(g.colwise().sum()); };
  }
  return out;
}

Var gather_rows(Tape& t, Var a, std::vector<int> idx) {
  const Eigen::Index c = a->val.cols();
  Mat out_val(static_cast<Eigen::Index>(idx.size()), c);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    require(idx[i] >= 0 && idx[i] < a->val.rows(), "gather_rows: index ", idx[i],
            " out of range");
    out_val.row(static_cast<Eigen::Index>(i)) = a->val.row(idx[i]);
  }
  Var out = t.alloc(std::move(out_val));
  if (wants_grad(t, {a})) {
    out->requires_grad = true;
    auto ids = std::make_shared<std::vector<int>>(std::move(idx));
    out->backward = [a, ids](const Mat& g) {
      Mat da = Mat::Zero(a->val.rows(), a->val.cols());
      for (std::size_t i = 0; i < ids->size(); ++i)
        da.row((*ids)[i]) += g.row(static_cast<Eigen::Index>(i));
      a->accumulate(da);
    };
  }
  return out;
}

Var fold_rows(Tape& t, Var a, int k) {
  require(a->val.cols() == 1 && a->val.rows() % k == 0,
          "fold_rows: need (R*k) x 1 input");
  const Eigen::Index r = a->val.rows() / k;
  Mat out_val(r, k);
  for (Eigen::Index i = 0; i < r; ++i)
    for (int j = 0; j < k; ++j) out_val(i, j) = a->val(i * k + j, 0);
  Var out = t.alloc(std::move(out_val));
  if (wants_grad(t, {a})) {
    out->requires_grad = true;
    out->backward = [a, r, k](const Mat& g) {
      Mat da(a->val.rows(), 1);
      for (Eigen::Index i = 0; i < r; ++i)
        for (int j = 0; j < k; ++j) da(i * k + j, 0) = g(i, j);
      a->accumulate(da);
    };
  }
  return out;
}

Var mha(Tape& t, Var q, Var k, Var v, int n_images, int heads) {
  const int c = static_cast<int>(q->val.cols());
  require(k->val.cols() == c && v->val.cols() == c, "mha: channel mismatch");
  require(c % heads == 0, "mha: channels ", c, " not divisible by heads ", heads);
  require(q->val.rows() % n_images == 0 && k->val.rows() % n_images == 0,
          "mha: row counts not divisible by image count");
  require(k->val.rows() == v->val.rows(), "mha: k/v row mismatch");
  const int nq = static_cast<int>(q->val.rows()) / n_images;
  const int nkv = static_cast<int>(k->val.rows()) / n_images;
  const int ch = c / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(ch));

  Mat out_val(q->val.rows(), c);
  auto probs = std::make_shared<std::vector<Mat>>();
  probs->reserve(static_cast<std::size_t>(n_images) * heads);
  for (int img = 0; img < n_images; ++img) {
    for (int h = 0; h < heads; ++h) {
      auto qb = q->val.block(static_cast<Eigen::Index>(img) * nq, h * ch, nq, ch);
      auto kb = k->val.block(static_cast<Eigen::Index>(img) * nkv, h * ch, nkv, ch);
      auto vb = v->val.block(static_cast<Eigen::Index>(img) * nkv, h * ch, nkv, ch);
      Mat scores = (qb * kb.transpose()) * scale;
      Mat p = softmax_rows_val(scores);
      out_val.block(static_cast<Eigen::Index>(img) * nq, h * ch, nq, ch) = p * vb;
      probs->push_back(std::move(p));
    }
  }
  Var out = t.alloc(std::move(out_val));
  if (wants_grad(t, {q, k, v})) {
    out->requires_grad = true;
    out->backward = [q, k, v, probs, n_images, heads, nq, nkv, ch,
                     scale](const Mat& g) {
      Mat dq = Mat::Zero(q->val.rows(), q->val.cols());
      Mat dk = Mat::Zero(k->val.rows(), k->val.cols());
      Mat dv = Mat::Zero(v->val.rows(), v->val.cols());
      for (int img = 0; img < n_images; ++img) {
        for (int h = 0; h < heads; ++h) {
          const Mat& p = (*probs)[static_cast<std::size_t>(img) * heads + h];
          auto qb = q->val.block(static_cast<Eigen::Index>(img) * nq, h * ch, nq, ch);
          auto kb = k->val.block(static_cast<Eigen::Index>(img) * nkv, h * ch, nkv, ch);
          auto vb = v->val.block(static_cast<Eigen::Index>(img) * nkv, h * ch, nkv, ch);
          auto gb = g.block(static_cast<Eigen::Index>(img) * nq, h * ch, nq, ch);
          dv.block(static_cast<Eigen::Index>(img) * nkv, h * ch, nkv, ch) +=
              p.transpose() * gb;
          Mat dp = gb * vb.transpose();
          Mat gp = dp.cwiseProduct(p);
          Vec rs = gp.rowwise().sum();
          Mat ds = gp - p.cwiseProduct(rs.replicate(1, nkv));
          dq.block(static_cast<Eigen::Index>(img) * nq, h * ch, nq, ch) +=
              (ds * kb) * scale;
          dk.block(static_cast<Eigen::Index>(img) * nkv, h * ch, nkv, ch) +=
              (ds.transpose() * qb) * scale;
        }
      }
      if (q->requires_grad) q->accumulate(dq);
      if (k->requires_grad) k->accumulate(dk);
      if (v->requires_grad) v->accumulate(dv);
    };
  }
  return out;
}

}  // namespace graph
}  // namespace sketchkd
