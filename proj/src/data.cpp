#include "sketchkd/data.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace sketchkd {

namespace fs = std::filesystem;

std::vector<int> Dataset::labelled_indices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < instances.size(); ++i)
    if (instances[i].labelled()) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> Dataset::unlabelled_indices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < instances.size(); ++i)
    if (!instances[i].labelled()) out.push_back(static_cast<int>(i));
  return out;
}

int Dataset::find(const std::string& instance_id) const {
  for (std::size_t i = 0; i < instances.size(); ++i)
    if (instances[i].instance_id == instance_id) return static_cast<int>(i);
  return -1;
}

int Dataset::sketch_count() const {
  int n = 0;
  for (const auto& inst : instances) n += static_cast<int>(inst.sketches.size());
  return n;
}

// ---------------------------------------------------------------------------
// Synthetic shapes
// ---------------------------------------------------------------------------

namespace {

constexpr double kPi = std::numbers::pi;

struct Rgb {
  double r, g, b;
};

Rgb hsv_to_rgb(double h, double s, double v) {
  h = h - std::floor(h);
  double c = v * s;
  double hp = h * 6.0;
  double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1) { r = c; g = x; }
  else if (hp < 2) { r = x; g = c; }
  else if (hp < 3) { g = c; b = x; }
  else if (hp < 4) { g = x; b = c; }
  else if (hp < 5) { r = x; b = c; }
  else { r = c; b = x; }
  double m = v - c;
  return Rgb{r + m, g + m, b + m};
}

double class_hue(int class_index) {
  return std::fmod(0.61803398875 * (class_index + 1), 1.0);
}

struct Shape {
  enum Kind { kEllipse, kRect, kTriangle } kind;
  double cx, cy;        // centre, pixel units
  double a, b;          // half extents
  double rot;           // radians
  double tx0, ty0, tx1, ty1, tx2, ty2;  // triangle vertices (absolute)
  Rgb color;
};

struct Geometry {
  std::vector<Shape> shapes;
  Rgb background;
  std::uint64_t texture_seed;
};

// Geometry is derived from a per-instance named stream so instance i render
// does not depend on how many instances exist.
Geometry geometry_for_instance(const SyntheticSpec& spec, int index,
                               int class_index) {
  RngPool pool(spec.seed);
  Rng rng = pool.stream("gen.instance." + std::to_string(index));
  const double s = spec.image_size;
  Geometry geo;
  double hue = class_hue(class_index);
  geo.background = hsv_to_rgb(hue + uniform(rng, -0.02, 0.02), 0.12, 0.93);
  geo.texture_seed = rng();

  int n_shapes = uniform_int(rng, 2, 4);
  for (int i = 0; i < n_shapes; ++i) {
    Shape sh{};
    int kind = uniform_int(rng, 0, 2);
    sh.kind = static_cast<Shape::Kind>(kind);
    sh.cx = uniform(rng, 0.22, 0.78) * s;
    sh.cy = uniform(rng, 0.22, 0.78) * s;
    sh.a = uniform(rng, 0.10, 0.24) * s;
    sh.b = uniform(rng, 0.10, 0.24) * s;
    sh.rot = uniform(rng, 0.0, 2.0 * kPi);
    if (sh.kind == Shape::kTriangle) {
      double ang0 = uniform(rng, 0.0, 2.0 * kPi);
      double spread1 = uniform(rng, 1.6, 2.6);
      double spread2 = uniform(rng, 1.6, 2.6);
      double r0 = uniform(rng, 0.6, 1.0) * (sh.a + sh.b);
      double r1 = uniform(rng, 0.6, 1.0) * (sh.a + sh.b);
      double r2 = uniform(rng, 0.6, 1.0) * (sh.a + sh.b);
      sh.tx0 = sh.cx + r0 * std::cos(ang0);
      sh.ty0 = sh.cy + r0 * std::sin(ang0);
      sh.tx1 = sh.cx + r1 * std::cos(ang0 + spread1);
      sh.ty1 = sh.cy + r1 * std::sin(ang0 + spread1);
      sh.tx2 = sh.cx + r2 * std::cos(ang0 + spread1 + spread2);
      sh.ty2 = sh.cy + r2 * std::sin(ang0 + spread1 + spread2);
    }
    sh.color = hsv_to_rgb(hue + uniform(rng, -0.08, 0.08),
                          uniform(rng, 0.45, 0.9), uniform(rng, 0.35, 0.8));
    geo.shapes.push_back(sh);
  }
  return geo;
}

bool inside_shape(const Shape& sh, double x, double y) {
  switch (sh.kind) {
    case Shape::kEllipse: {
      double dx = x - sh.cx, dy = y - sh.cy;
      double c = std::cos(-sh.rot), sn = std::sin(-sh.rot);
      double lx = dx * c - dy * sn, ly = dx * sn + dy * c;
      double u = lx / sh.a, v = ly / sh.b;
      return u * u + v * v <= 1.0;
    }
    case Shape::kRect: {
      double dx = x - sh.cx, dy = y - sh.cy;
      double c = std::cos(-sh.rot), sn = std::sin(-sh.rot);
      double lx = dx * c - dy * sn, ly = dx * sn + dy * c;
      return std::abs(lx) <= sh.a && std::abs(ly) <= sh.b;
    }
    case Shape::kTriangle: {
      auto side = [](double x0, double y0, double x1, double y1, double px,
                     double py) {
        return (x1 - x0) * (py - y0) - (y1 - y0) * (px - x0);
      };
      double d0 = side(sh.tx0, sh.ty0, sh.tx1, sh.ty1, x, y);
      double d1 = side(sh.tx1, sh.ty1, sh.tx2, sh.ty2, x, y);
      double d2 = side(sh.tx2, sh.ty2, sh.tx0, sh.ty0, x, y);
      bool neg = (d0 < 0) || (d1 < 0) || (d2 < 0);
      bool pos = (d0 > 0) || (d1 > 0) || (d2 > 0);
      return !(neg && pos);
    }
  }
  return false;
}

// Closed polyline outline of a shape, used for contour strokes.
std::vector<std::pair<double, double>> shape_outline(const Shape& sh) {
  std::vector<std::pair<double, double>> pts;
  switch (sh.kind) {
    case Shape::kEllipse: {
      const int n = 28;
      for (int i = 0; i < n; ++i) {
        double t = 2.0 * kPi * i / n;
        double lx = sh.a * std::cos(t), ly = sh.b * std::sin(t);
        double c = std::cos(sh.rot), sn = std::sin(sh.rot);
        pts.emplace_back(sh.cx + lx * c - ly * sn, sh.cy + lx * sn + ly * c);
      }
      break;
    }
    case Shape::kRect: {
      const double corners[4][2] = {
          {-sh.a, -sh.b}, {sh.a, -sh.b}, {sh.a, sh.b}, {-sh.a, sh.b}};
      double c = std::cos(sh.rot), sn = std::sin(sh.rot);
      for (auto& cr : corners)
        pts.emplace_back(sh.cx + cr[0] * c - cr[1] * sn,
                         sh.cy + cr[0] * sn + cr[1] * c);
      break;
    }
    case Shape::kTriangle:
      pts = {{sh.tx0, sh.ty0}, {sh.tx1, sh.ty1}, {sh.tx2, sh.ty2}};
      break;
  }
  return pts;
}

double point_segment_dist2(double px, double py, double x0, double y0,
                           double x1, double y1) {
  double dx = x1 - x0, dy = y1 - y0;
  double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((px - x0) * dx + (py - y0) * dy) / len2 : 0.0;
  t = std::min(1.0, std::max(0.0, t));
  double qx = x0 + t * dx - px, qy = y0 + t * dy - py;
  return qx * qx + qy * qy;
}

constexpr int kSupersample = 3;

Image render_photo(const Geometry& geo, int size) {
  Image img(size, size);
  Rng tex_rng(geo.texture_seed);
  // Low-frequency texture field parameters.
  double fx = uniform(tex_rng, 0.5, 2.0) / size;
  double fy = uniform(tex_rng, 0.5, 2.0) / size;
  double phase = uniform(tex_rng, 0.0, 2.0 * kPi);
  const int ss = kSupersample;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      double acc[3] = {0, 0, 0};
      for (int sy = 0; sy < ss; ++sy) {
        for (int sx = 0; sx < ss; ++sx) {
          double px = x + (sx + 0.5) / ss;
          double py = y + (sy + 0.5) / ss;
          Rgb col = geo.background;
          for (auto it = geo.shapes.rbegin(); it != geo.shapes.rend(); ++it) {
            if (inside_shape(*it, px, py)) {
              col = it->color;
              break;
            }
          }
          double tex = 0.03 * std::sin(2.0 * kPi * (fx * px + fy * py) + phase);
          acc[0] += col.r + tex;
          acc[1] += col.g + tex;
          acc[2] += col.b + tex;
        }
      }
      for (int c = 0; c < 3; ++c) img.at(y, x, c) = acc[c] / (ss * ss);
    }
  }
  // Fine-grain noise on top of the smooth field.
  for (double& v : img.px) v += gaussian(tex_rng, 0.0, 0.012);
  img.clip();
  return img;
}

Image render_contour(const Geometry& geo, int size, double jitter_sigma,
                     Rng* jitter_rng) {
  Image img(size, size, 1.0);  // white background
  const double stroke_half = 0.65;  // ~1.3 px wide strokes
  const double ink = 0.08;
  std::vector<std::vector<std::pair<double, double>>> outlines;
  for (const auto& sh : geo.shapes) {
    auto pts = shape_outline(sh);
    if (jitter_sigma > 0.0 && jitter_rng) {
      for (auto& p : pts) {
        p.first += gaussian(*jitter_rng, 0.0, jitter_sigma * size);
        p.second += gaussian(*jitter_rng, 0.0, jitter_sigma * size);
      }
    }
    outlines.push_back(std::move(pts));
  }
  const int ss = kSupersample;
  const double r2 = stroke_half * stroke_half;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      double acc = 0.0;
      for (int sy = 0; sy < ss; ++sy) {
        for (int sx = 0; sx < ss; ++sx) {
          double px = x + (sx + 0.5) / ss;
          double py = y + (sy + 0.5) / ss;
          bool on_stroke = false;
          for (const auto& pts : outlines) {
            const std::size_t n = pts.size();
            for (std::size_t i = 0; i < n && !on_stroke; ++i) {
              const auto& p0 = pts[i];
              const auto& p1 = pts[(i + 1) % n];
              if (point_segment_dist2(px, py, p0.first, p0.second, p1.first,
                                      p1.second) <= r2)
                on_stroke = true;
            }
            if (on_stroke) break;
          }
          acc += on_stroke ? ink : 1.0;
        }
      }
      double v = acc / (ss * ss);
      for (int c = 0; c < 3; ++c) img.at(y, x, c) = v;
    }
  }
  return img;
}

std::string instance_name(int index) {
  std::ostringstream os;
  os << "inst" << std::setw(4) << std::setfill('0') << index;
  return os.str();
}

}  // namespace

Dataset generate_synthetic(const SyntheticSpec& spec) {
  require(spec.n_classes >= 1, "generate_synthetic: n_classes must be >= 1");
  require(spec.n_instances >= spec.n_classes,
          "generate_synthetic: need n_instances >= n_classes");
  require(spec.sketches_per_instance >= 2,
          "generate_synthetic: sketches_per_instance must be >= 2 "
          "(the sketch intra-modal triplet needs a sibling sketch)");
  require(spec.image_size >= 8, "generate_synthetic: image_size too small");

  RngPool pool(spec.seed);
  Dataset ds;
  ds.image_size = spec.image_size;
  const int total = spec.n_instances + spec.n_unlabelled;
  for (int i = 0; i < total; ++i) {
    const bool labelled = i < spec.n_instances;
    const int class_index = i % spec.n_classes;
    Geometry geo = geometry_for_instance(spec, i, class_index);
    Instance inst;
    inst.instance_id = instance_name(i);
    inst.class_id = "class" + std::to_string(class_index);
    inst.photo = render_photo(geo, spec.image_size);
    if (labelled) {
      for (int k = 0; k < spec.sketches_per_instance; ++k) {
        Rng jrng = pool.stream("gen.sketch." + std::to_string(i) + "." +
                               std::to_string(k));
        inst.sketches.push_back(render_contour(geo, spec.image_size,
                                               spec.stroke_jitter_sigma, &jrng));
      }
    }
    ds.instances.push_back(std::move(inst));
  }
  std::sort(ds.instances.begin(), ds.instances.end(),
            [](const Instance& a, const Instance& b) {
              return a.instance_id < b.instance_id;
            });
  return ds;
}

Dataset generate_synthetic(int n_instances, int n_classes,
                           int sketches_per_instance, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.n_instances = n_instances;
  spec.n_classes = n_classes;
  spec.sketches_per_instance = sketches_per_instance;
  spec.seed = seed;
  return generate_synthetic(spec);
}

Image synthetic_contour_render(const SyntheticSpec& spec, int instance_index) {
  const int total = spec.n_instances + spec.n_unlabelled;
  require(instance_index >= 0 && instance_index < total,
          "synthetic_contour_render: index out of range");
  Geometry geo = geometry_for_instance(spec, instance_index,
                                       instance_index % spec.n_classes);
  return render_contour(geo, spec.image_size, 0.0, nullptr);
}

// ---------------------------------------------------------------------------
// Augmentation
// ---------------------------------------------------------------------------

Image structural_augment_with(const Image& photo, double angle_rad,
                              const std::array<double, 8>& corner_shifts) {
  Homography rot = rotation_about_center(angle_rad, (photo.w - 1) * 0.5,
                                         (photo.h - 1) * 0.5);
  Homography persp = perspective_from_corner_shifts(photo.h, photo.w, corner_shifts);
  Homography h = compose(persp, rot);
  Image out = warp_homography(photo, h, border_mean_color(photo));
  out.clip();
  return out;
}

Image structural_augment(const Image& photo, Rng& rng) {
  double angle = uniform(rng, -kPi / 4.0, kPi / 4.0);
  std::array<double, 8> shifts;
  const double amp = 0.10 * photo.w;
  for (auto& sft : shifts) sft = uniform(rng, -amp, amp);
  return structural_augment_with(photo, angle, shifts);
}

Image augment_color_distort(const Image& photo, Rng& rng) {
  Image out = photo;
  for (int c = 0; c < 3; ++c) {
    double gain = uniform(rng, 0.6, 1.4);
    double bias = uniform(rng, -0.1, 0.1);
    for (int y = 0; y < out.h; ++y)
      for (int x = 0; x < out.w; ++x) out.at(y, x, c) = out.at(y, x, c) * gain + bias;
  }
  out.clip();
  return out;
}

namespace {

Image gaussian_blur(const Image& img, double sigma) {
  int radius = std::max(1, static_cast<int>(std::ceil(2.5 * sigma)));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[static_cast<std::size_t>(i + radius)] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    sum += kernel[static_cast<std::size_t>(i + radius)];
  }
  for (double& k : kernel) k /= sum;

  Image tmp(img.h, img.w), out(img.h, img.w);
  for (int y = 0; y < img.h; ++y)
    for (int x = 0; x < img.w; ++x)
      for (int c = 0; c < 3; ++c) {
        double acc = 0;
        for (int i = -radius; i <= radius; ++i) {
          int xx = std::min(img.w - 1, std::max(0, x + i));
          acc += kernel[static_cast<std::size_t>(i + radius)] * img.at(y, xx, c);
        }
        tmp.at(y, x, c) = acc;
      }
  for (int y = 0; y < img.h; ++y)
    for (int x = 0; x < img.w; ++x)
      for (int c = 0; c < 3; ++c) {
        double acc = 0;
        for (int i = -radius; i <= radius; ++i) {
          int yy = std::min(img.h - 1, std::max(0, y + i));
          acc += kernel[static_cast<std::size_t>(i + radius)] * tmp.at(yy, x, c);
        }
        out.at(y, x, c) = acc;
      }
  return out;
}

}  // namespace

Image augment_blur(const Image& photo, Rng& rng) {
  double sigma = uniform(rng, 0.5, 1.5);
  Image out = gaussian_blur(photo, sigma);
  out.clip();
  return out;
}

Image augment_sharpness(const Image& photo, Rng& rng) {
  double amount = uniform(rng, 0.5, 2.0);
  Image blurred = gaussian_blur(photo, 1.0);
  Image out = photo;
  for (std::size_t i = 0; i < out.px.size(); ++i)
    out.px[i] = photo.px[i] + amount * (photo.px[i] - blurred.px[i]);
  out.clip();
  return out;
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

namespace {

int pick_other(const std::vector<int>& pool, int exclude, Rng& rng) {
  int v;
  do {
    v = pool[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(pool.size()) - 1))];
  } while (v == exclude);
  return v;
}

}  // namespace

TripletBatch triplets_for_anchors(const Dataset& ds,
                                  const std::vector<int>& pool,
                                  const std::vector<std::pair<int, int>>& anchors,
                                  Rng& rng, AugmentFn augment) {
  require(pool.size() >= 2, "triplet sampling needs at least 2 instances");
  TripletBatch batch;
  for (auto [inst_idx, sketch_idx] : anchors) {
    const Instance& inst = ds.instances[static_cast<std::size_t>(inst_idx)];
    require(inst.labelled(), "triplet anchor must be a labelled instance");
    int neg = pick_other(pool, inst_idx, rng);
    // Sibling sketch: any other sketch of the same instance when one exists.
    int pos_sketch = sketch_idx;
    if (inst.sketches.size() >= 2) {
      do {
        pos_sketch = uniform_int(rng, 0, static_cast<int>(inst.sketches.size()) - 1);
      } while (pos_sketch == sketch_idx);
    }
    int negsk_inst = pick_other(pool, inst_idx, rng);
    const Instance& negsk = ds.instances[static_cast<std::size_t>(negsk_inst)];
    int negsk_idx = uniform_int(rng, 0, static_cast<int>(negsk.sketches.size()) - 1);

    batch.anchor_instance.push_back(inst_idx);
    batch.anchor_sketch_idx.push_back(sketch_idx);
    batch.negative_instance.push_back(neg);
    batch.positive_sketch_idx.push_back(pos_sketch);
    batch.negsk_instance.push_back(negsk_inst);
    batch.negsk_sketch_idx.push_back(negsk_idx);
    batch.augmented_photo.push_back(augment(inst.photo, rng));
  }
  return batch;
}

TripletBatch sample_triplet_batch(const Dataset& ds, int batch_size, Rng& rng,
                                  AugmentFn augment) {
  std::vector<int> pool = ds.labelled_indices();
  require(pool.size() >= 2, "sample_triplet_batch: dataset needs >= 2 labelled instances");
  std::vector<std::pair<int, int>> anchors;
  for (int i = 0; i < batch_size; ++i) {
    int inst = pool[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(pool.size()) - 1))];
    const auto& sketches = ds.instances[static_cast<std::size_t>(inst)].sketches;
    int sk = uniform_int(rng, 0, static_cast<int>(sketches.size()) - 1);
    anchors.emplace_back(inst, sk);
  }
  return triplets_for_anchors(ds, pool, anchors, rng, augment);
}

PhotoTripletBatch photo_triplets_for_anchors(const Dataset& ds,
                                             const std::vector<int>& pool,
                                             const std::vector<int>& anchors,
                                             Rng& rng, AugmentFn augment) {
  require(pool.size() >= 2, "photo triplet sampling needs at least 2 photos");
  PhotoTripletBatch batch;
  for (int inst_idx : anchors) {
    batch.anchor_instance.push_back(inst_idx);
    batch.negative_instance.push_back(pick_other(pool, inst_idx, rng));
    batch.augmented.push_back(
        augment(ds.instances[static_cast<std::size_t>(inst_idx)].photo, rng));
  }
  return batch;
}

// ---------------------------------------------------------------------------
// Directory format
// ---------------------------------------------------------------------------

std::string LoadReport::to_text() const {
  std::ostringstream os;
  os << "labelled = " << labelled << "\n";
  os << "unlabelled = " << unlabelled << "\n";
  os << "skipped = " << skipped << "\n";
  return os.str();
}

void save_dataset_directory(const Dataset& ds, const std::string& root) {
  fs::create_directories(root);
  for (const auto& inst : ds.instances) {
    fs::path cls = fs::path(root) / inst.class_id;
    fs::create_directories(cls / "photos");
    save_png(inst.photo, (cls / "photos" / (inst.instance_id + ".png")).string());
    if (!inst.sketches.empty()) {
      fs::create_directories(cls / "sketches");
      for (std::size_t k = 0; k < inst.sketches.size(); ++k)
        save_png(inst.sketches[k],
                 (cls / "sketches" /
                  (inst.instance_id + "_" + std::to_string(k) + ".png"))
                     .string());
    }
  }
}

Dataset load_directory(const std::string& root, int image_size,
                       LoadReport* report) {
  require(image_size >= 1, "load_directory: bad image_size");
  LoadReport local;
  Dataset ds;
  ds.image_size = image_size;
  if (!fs::exists(root)) {
    if (report) *report = local;
    return ds;
  }

  std::map<std::string, Instance> by_id;
  std::map<std::string, std::string> id_class;

  std::vector<fs::path> class_dirs;
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory()) class_dirs.push_back(e.path());
  std::sort(class_dirs.begin(), class_dirs.end());

  for (const auto& cls_dir : class_dirs) {
    const std::string class_id = cls_dir.filename().string();
    fs::path photos = cls_dir / "photos";
    if (fs::exists(photos)) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(photos))
        if (e.path().extension() == ".png") files.push_back(e.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) {
        std::string id = f.stem().string();
        auto prev = id_class.find(id);
        require(prev == id_class.end(),
                "load_directory: duplicate instance_id '", id, "' in classes '",
                prev == id_class.end() ? "" : prev->second, "' and '", class_id, "'");
        id_class[id] = class_id;
        Instance inst;
        inst.instance_id = id;
        inst.class_id = class_id;
        inst.photo = resize_bilinear(load_png(f.string()), image_size, image_size);
        by_id[id] = std::move(inst);
      }
    }
  }

  for (const auto& cls_dir : class_dirs) {
    fs::path sketches = cls_dir / "sketches";
    if (!fs::exists(sketches)) continue;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(sketches))
      if (e.path().extension() == ".png") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      std::string stem = f.stem().string();
      auto us = stem.rfind('_');
      std::string id = us == std::string::npos ? stem : stem.substr(0, us);
      auto it = by_id.find(id);
      if (it == by_id.end()) {
        ++local.skipped;
        local.skipped_files.push_back(f.string());
        continue;
      }
      it->second.sketches.push_back(
          resize_bilinear(load_png(f.string()), image_size, image_size));
    }
  }

  for (auto& [id, inst] : by_id) {
    if (inst.labelled())
      ++local.labelled;
    else
      ++local.unlabelled;
    ds.instances.push_back(std::move(inst));
  }
  // map iteration is already id-sorted
  if (report) *report = local;
  return ds;
}

}  // namespace sketchkd
