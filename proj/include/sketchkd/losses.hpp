#ifndef SKETCHKD_LOSSES_HPP_
#define SKETCHKD_LOSSES_HPP_

#include <optional>
#include <vector>

#include "sketchkd/common.hpp"
#include "sketchkd/config.hpp"

namespace sketchkd {
namespace losses {

// Raw (unweighted) per-batch triplet terms; `total` applies the loss weights.
struct LossBreakdown {
  double cm = 0.0;
  double im_p = 0.0;
  double im_s = 0.0;
  double tri_u = 0.0;
  bool has_unlabelled = false;
  double total = 0.0;
};

// delta(a, b) = ||a - b||^2
double squared_distance(const Vec& a, const Vec& b);

// max{0, m + delta(s, p) - delta(s, n)}
double cross_modal_triplet(const Vec& f_s, const Vec& f_p, const Vec& f_n,
                           double m_cm);

// Photo term: max{0, m_p + delta(p, p_aug) - delta(p, n)}.
// Sketch term: max{0, m_s + delta(s, s_pos) - delta(s, s_neg)}.
std::pair<double, double> intra_modal_triplets(const Vec& f_p, const Vec& f_pt,
                                               const Vec& f_n, const Vec& f_s,
                                               const Vec& f_sp, const Vec& f_sn,
                                               double m_im_p, double m_im_s);

// Row-aligned embedding matrices for one triplet batch: each B x d.
struct BatchEmbeddings {
  Mat f_s;       // anchor sketches
  Mat f_p;       // paired photos
  Mat f_n;       // negative photos
  Mat f_sp;      // sibling sketches
  Mat f_sn;      // negative sketches
  Mat f_pt;      // structurally augmented photos
};

// Photo-form triplet on the unlabelled pool (anchor / augmented / negative).
struct UnlabelledEmbeddings {
  Mat f_u;
  Mat f_ut;
  Mat f_un;
};

// Batch-mean of the combined objective:
// total = cm + lambda1 * im_p + lambda2 * im_s (+ lambda3 * tri_u).
LossBreakdown combined_training_loss(const BatchEmbeddings& batch,
                                     const Hyperparameters& hp,
                                     const UnlabelledEmbeddings* unlabelled = nullptr);

// Normalized-temperature contrastive objective over aligned view pairs
// (f_a[i], f_b[i]); labels mark which rows depict the same instance and are
// excluded from each other's denominators.
double contrastive_alternative(const Mat& f_a, const Mat& f_b,
                               const std::vector<int>& labels, double tau);

}  // namespace losses
}  // namespace sketchkd

#endif  // SKETCHKD_LOSSES_HPP_
