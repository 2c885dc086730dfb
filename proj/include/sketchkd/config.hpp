#ifndef SKETCHKD_CONFIG_HPP_
#define SKETCHKD_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "sketchkd/common.hpp"

namespace sketchkd {

// Every scalar knob of the training system in one validated record.
struct Hyperparameters {
  // Triplet margins and softmax temperature.
  double m_cm = 0.5;
  double m_im_s = 0.2;
  double m_im_p = 0.3;
  double tau = 0.01;
  // Loss weights: lambda1 photo intra-modal, lambda2 sketch intra-modal,
  // lambda3 unlabelled triplet, lambda4 sketch KL, lambda5 unlabelled KL,
  // lambda6 distillation total.
  double lambda1 = 0.8;
  double lambda2 = 0.2;
  double lambda3 = 0.4;
  double lambda4 = 0.4;
  double lambda5 = 0.7;
  double lambda6 = 0.5;
  // EMA decay and neighbour count.
  double beta = 0.999;
  int k = 5;
  // Backbone geometry.
  int levels = 4;
  std::vector<int> patch_strides = {4, 2, 2, 2};
  std::vector<int> channels = {64, 128, 320, 512};
  std::vector<int> heads = {1, 2, 5, 8};
  std::vector<int> sr_ratios = {8, 4, 2, 1};
  int d = 512;
  // Optimization.
  double lr = 1e-3;
  double weight_decay = 5e-2;
  int batch_size = 16;
  int epochs = 200;
  std::int64_t seed = 0;
  int image_size = 224;

  // Throws sk_error naming the first violated field.
  void validate() const;

  // Canonical key=value serialization (also the config-file format).
  std::string serialize() const;
  std::uint64_t hash() const { return fnv1a64(serialize()); }
};

// Full-scale profile matching the published training setup.
Hyperparameters paper_default_profile();

// Small CPU-friendly profile: 32x32 inputs, 3 levels, d=64.
Hyperparameters desk_profile();

// Parses a flat key=value file; unspecified keys keep the paper-default
// values. Validates before returning.
Hyperparameters load_config(const std::string& path);

void save_config(const Hyperparameters& hp, const std::string& path);

}  // namespace sketchkd

#endif  // SKETCHKD_CONFIG_HPP_
