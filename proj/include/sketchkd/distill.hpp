#ifndef SKETCHKD_DISTILL_HPP_
#define SKETCHKD_DISTILL_HPP_

#include <map>
#include <string>
#include <vector>

#include "sketchkd/common.hpp"
#include "sketchkd/config.hpp"

namespace sketchkd {

class PvtBackbone;
struct Dataset;

namespace distill {

// Frozen teacher embeddings of the photo pool, indexed by photo id.
struct FeatureBank {
  std::vector<std::string> ids;  // unique
  Mat features;                  // N x d, row i belongs to ids[i]

  int size() const { return static_cast<int>(ids.size()); }
  int row_of(const std::string& id) const;  // -1 if absent
};

FeatureBank make_bank(std::vector<std::string> ids, Mat features);

// Embeds every pool photo with the (frozen) teacher. Deterministic.
FeatureBank build_bank(const PvtBackbone& teacher, const Dataset& ds,
                       const std::vector<int>& pool);

void save_bank(const FeatureBank& bank, const std::string& path);
FeatureBank load_bank(const std::string& path);

// Exact K nearest neighbours by squared distance; ties broken by ascending
// id. `teacher_dists` come out sorted non-decreasing.
struct NeighbourSet {
  std::string query_id;
  std::vector<std::string> neighbour_ids;
  Vec teacher_dists;
};

NeighbourSet knn(const FeatureBank& bank, const Vec& query, int k,
                 const std::string& exclude_id);

// p_j = exp(-d_j / tau) / sum_k exp(-d_k / tau), max-subtracted.
Vec similarity_distribution(const Vec& dists, double tau);

// KL(p_teacher || p_student) with 0 * ln(0/x) := 0.
double kl_consistency(const Vec& p_teacher, const Vec& p_student);

// ---------------------------------------------------------------------------
// Distillation loss over one step's queries, in feature space. The student
// side recomputes neighbour features live; here they arrive as a photo-id ->
// mu map so the same code serves both the spec-level wrapper and the tests.
// ---------------------------------------------------------------------------

struct DistillQueries {
  std::vector<std::string> labelled_photo_ids;
  // One sketch per labelled row; the teacher side uses the paired photo.
  std::vector<std::string> sketch_paired_photo_ids;
  std::vector<std::string> unlabelled_photo_ids;
};

struct StudentFeatures {
  std::map<std::string, Vec> photo_mu;  // covers queries and their neighbours
  std::vector<Vec> sketch_mu;           // aligned with sketch_paired_photo_ids
};

struct DistillBreakdown {
  double kl_pl = 0.0;
  double kl_sl = 0.0;
  double kl_pu = 0.0;
  double total = 0.0;  // kl_pl + lambda4 * kl_sl + lambda5 * kl_pu
};

DistillBreakdown distillation_components(const FeatureBank& bank,
                                         const DistillQueries& queries,
                                         const StudentFeatures& student,
                                         const Hyperparameters& hp);

// Spec-level convenience: runs the student to obtain mu features for the
// queried photos/sketches and their bank neighbours, then evaluates the
// components above. Value-only (no gradients).
DistillBreakdown distillation_loss(const PvtBackbone& student,
                                   const FeatureBank& bank, const Dataset& ds,
                                   const std::vector<int>& labelled_batch,
                                   const std::vector<std::pair<int, int>>& sketch_batch,
                                   const std::vector<int>& unlabelled_batch,
                                   const Hyperparameters& hp);

}  // namespace distill
}  // namespace sketchkd

#endif  // SKETCHKD_DISTILL_HPP_
