#include "sketchkd/losses.hpp"

#include <cmath>

namespace sketchkd {
namespace losses {

double squared_distance(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "squared_distance: length mismatch ", a.size(),
          " vs ", b.size());
  return (a - b).squaredNorm();
}

double cross_modal_triplet(const Vec& f_s, const Vec& f_p, const Vec& f_n,
                           double m_cm) {
  double arg = m_cm + squared_distance(f_s, f_p) - squared_distance(f_s, f_n);
  return std::max(0.0, arg);
}

std::pair<double, double> intra_modal_triplets(const Vec& f_p, const Vec& f_pt,
                                               const Vec& f_n, const Vec& f_s,
                                               const Vec& f_sp, const Vec& f_sn,
                                               double m_im_p, double m_im_s) {
  double photo =
      std::max(0.0, m_im_p + squared_distance(f_p, f_pt) - squared_distance(f_p, f_n));
  double sketch =
      std::max(0.0, m_im_s + squared_distance(f_s, f_sp) - squared_distance(f_s, f_sn));
  return {photo, sketch};
}

LossBreakdown combined_training_loss(const BatchEmbeddings& batch,
                                     const Hyperparameters& hp,
                                     const UnlabelledEmbeddings* unlabelled) {
  const Eigen::Index b = batch.f_s.rows();
  require(b > 0, "combined_training_loss: empty batch");
  require(batch.f_p.rows() == b && batch.f_n.rows() == b &&
              batch.f_sp.rows() == b && batch.f_sn.rows() == b &&
              batch.f_pt.rows() == b,
          "combined_training_loss: row count mismatch");

  LossBreakdown out;
  for (Eigen::Index i = 0; i < b; ++i) {
    out.cm += cross_modal_triplet(batch.f_s.row(i), batch.f_p.row(i),
                                  batch.f_n.row(i), hp.m_cm);
    auto [photo, sketch] = intra_modal_triplets(
        batch.f_p.row(i), batch.f_pt.row(i), batch.f_n.row(i), batch.f_s.row(i),
        batch.f_sp.row(i), batch.f_sn.row(i), hp.m_im_p, hp.m_im_s);
    out.im_p += photo;
    out.im_s += sketch;
  }
  out.cm /= static_cast<double>(b);
  out.im_p /= static_cast<double>(b);
  out.im_s /= static_cast<double>(b);

  if (unlabelled) {
    const Eigen::Index bu = unlabelled->f_u.rows();
    require(bu > 0, "combined_training_loss: empty unlabelled batch");
    require(unlabelled->f_ut.rows() == bu && unlabelled->f_un.rows() == bu,
            "combined_training_loss: unlabelled row count mismatch");
    for (Eigen::Index i = 0; i < bu; ++i) {
      out.tri_u += std::max(0.0, hp.m_im_p +
                                     squared_distance(unlabelled->f_u.row(i),
                                                      unlabelled->f_ut.row(i)) -
                                     squared_distance(unlabelled->f_u.row(i),
                                                      unlabelled->f_un.row(i)));
    }
    out.tri_u /= static_cast<double>(bu);
    out.has_unlabelled = true;
  }

  out.total = out.cm + hp.lambda1 * out.im_p + hp.lambda2 * out.im_s;
  if (out.has_unlabelled) out.total += hp.lambda3 * out.tri_u;
  return out;
}

double contrastive_alternative(const Mat& f_a, const Mat& f_b,
                               const std::vector<int>& labels, double tau) {
  const Eigen::Index b = f_a.rows();
  require(b >= 2, "contrastive_alternative: batch must have >= 2 pairs");
  require(f_b.rows() == b && f_a.cols() == f_b.cols(),
          "contrastive_alternative: shape mismatch");
  require(static_cast<Eigen::Index>(labels.size()) == b,
          "contrastive_alternative: labels length mismatch");
  require(tau > 0.0, "contrastive_alternative: temperature must be > 0");

  // 2B L2-normalized views, pairs (i, i + B).
  const Eigen::Index n = 2 * b;
  Mat z(n, f_a.cols());
  z.topRows(b) = f_a;
  z.bottomRows(b) = f_b;
  for (Eigen::Index i = 0; i < n; ++i) {
    double nrm = z.row(i).norm();
    if (nrm > 0) z.row(i) /= nrm;
  }
  auto label_of = [&](Eigen::Index i) {
    return labels[static_cast<std::size_t>(i % b)];
  };
  Mat sim = z * z.transpose() / tau;

  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index pos = (i + b) % n;
    // Log-sum-exp over every other view that is not a same-instance duplicate.
    double mx = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      if (j != pos && label_of(j) == label_of(i)) continue;
      mx = std::max(mx, sim(i, j));
    }
    double denom = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      if (j != pos && label_of(j) == label_of(i)) continue;
      denom += std::exp(sim(i, j) - mx);
    }
    loss += -(sim(i, pos) - mx - std::log(denom));
  }
  return loss / static_cast<double>(n);
}

}  // namespace losses
}  // namespace sketchkd
