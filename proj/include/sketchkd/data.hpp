#ifndef SKETCHKD_DATA_HPP_
#define SKETCHKD_DATA_HPP_

#include <optional>
#include <string>
#include <vector>

#include "sketchkd/image.hpp"
#include "sketchkd/rng.hpp"

namespace sketchkd {

// One object: a photo plus zero or more sketches of it. Instances with no
// sketches form the unlabelled pool.
struct Instance {
  std::string instance_id;
  std::string class_id;
  Image photo;
  std::vector<Image> sketches;

  bool labelled() const { return !sketches.empty(); }
};

struct Dataset {
  int image_size = 0;
  std::vector<Instance> instances;  // sorted by instance_id

  std::vector<int> labelled_indices() const;
  std::vector<int> unlabelled_indices() const;
  int find(const std::string& instance_id) const;  // -1 if absent
  int sketch_count() const;
};

// ---------------------------------------------------------------------------
// Synthetic generation
// ---------------------------------------------------------------------------

struct SyntheticSpec {
  int n_instances = 16;       // labelled (with sketches)
  int n_classes = 4;
  int sketches_per_instance = 2;
  std::uint64_t seed = 0;
  int n_unlabelled = 0;       // photo-only instances appended after labelled
  int image_size = 32;
  double stroke_jitter_sigma = 0.01;  // sketch control-point noise, x image side
};

// Each instance composes 2-4 primitive shapes (ellipse / rectangle /
// triangle) with per-instance geometry and a per-class palette. Photos are
// filled, anti-aliased, lightly textured renders; sketches are jittered
// contour renders with no colour or texture. Deterministic given the spec.
Dataset generate_synthetic(const SyntheticSpec& spec);

Dataset generate_synthetic(int n_instances, int n_classes,
                           int sketches_per_instance, std::uint64_t seed);

// Jitter-free contour render of one instance's geometry (the sketch "ideal").
Image synthetic_contour_render(const SyntheticSpec& spec, int instance_index);

// ---------------------------------------------------------------------------
// Photo augmentation
// ---------------------------------------------------------------------------

// Rotation (uniform in +-45 deg) followed by a random perspective warp whose
// corners shift independently by up to +-10% of the side. Shape-only: no
// photometric change; out-of-frame pixels take the border-mean colour.
Image structural_augment(const Image& photo, Rng& rng);

// Deterministic core used by structural_augment and by tests.
Image structural_augment_with(const Image& photo, double angle_rad,
                              const std::array<double, 8>& corner_shifts);

// Photometric alternatives exercised by the augmentation ablation.
Image augment_color_distort(const Image& photo, Rng& rng);
Image augment_blur(const Image& photo, Rng& rng);
Image augment_sharpness(const Image& photo, Rng& rng);

using AugmentFn = Image (*)(const Image&, Rng&);

// ---------------------------------------------------------------------------
// Triplet sampling
// ---------------------------------------------------------------------------

// Row-aligned triplet references into a dataset. positive photo = anchor
// instance's photo; negative ids always differ from the anchor id.
struct TripletBatch {
  std::vector<int> anchor_instance;
  std::vector<int> anchor_sketch_idx;
  std::vector<int> negative_instance;
  std::vector<int> positive_sketch_idx;   // sibling sketch of the anchor
  std::vector<int> negsk_instance;        // instance of the negative sketch
  std::vector<int> negsk_sketch_idx;
  std::vector<Image> augmented_photo;     // augment(positive photo), per row

  std::size_t size() const { return anchor_instance.size(); }
};

// Photo-only triplets for teacher pre-training and the unlabelled branch:
// anchor photo, augmented positive, random other-instance negative.
struct PhotoTripletBatch {
  std::vector<int> anchor_instance;
  std::vector<int> negative_instance;
  std::vector<Image> augmented;

  std::size_t size() const { return anchor_instance.size(); }
};

// Uniform anchors over the labelled pool; negatives uniform over the other
// labelled instances.
TripletBatch sample_triplet_batch(const Dataset& ds, int batch_size, Rng& rng,
                                  AugmentFn augment = &structural_augment);

// Same, but with anchors fixed by the caller (epoch-ordered training).
TripletBatch triplets_for_anchors(const Dataset& ds,
                                  const std::vector<int>& pool,
                                  const std::vector<std::pair<int, int>>& anchors,
                                  Rng& rng, AugmentFn augment = &structural_augment);

PhotoTripletBatch photo_triplets_for_anchors(const Dataset& ds,
                                             const std::vector<int>& pool,
                                             const std::vector<int>& anchors,
                                             Rng& rng,
                                             AugmentFn augment = &structural_augment);

// ---------------------------------------------------------------------------
// Directory format
// ---------------------------------------------------------------------------
// root/<class_id>/photos/<instance_id>.png
// root/<class_id>/sketches/<instance_id>_<k>.png

struct LoadReport {
  int labelled = 0;
  int unlabelled = 0;
  int skipped = 0;
  std::vector<std::string> skipped_files;

  std::string to_text() const;
};

void save_dataset_directory(const Dataset& ds, const std::string& root);
Dataset load_directory(const std::string& root, int image_size,
                       LoadReport* report = nullptr);

}  // namespace sketchkd

#endif  // SKETCHKD_DATA_HPP_
