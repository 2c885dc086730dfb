#include "sketchkd/distill.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>

#include "sketchkd/backbone.hpp"
#include "sketchkd/data.hpp"

namespace sketchkd {
namespace distill {

int FeatureBank::row_of(const std::string& id) const {
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (ids[i] == id) return static_cast<int>(i);
  return -1;
}

FeatureBank make_bank(std::vector<std::string> ids, Mat features) {
  require(!ids.empty(), "feature bank: empty pool");
  require(static_cast<Eigen::Index>(ids.size()) == features.rows(),
          "feature bank: id/row count mismatch");
  require(features.allFinite(), "feature bank: non-finite feature rows");
  std::set<std::string> uniq(ids.begin(), ids.end());
  require(uniq.size() == ids.size(), "feature bank: duplicate photo ids");
  FeatureBank bank;
  bank.ids = std::move(ids);
  bank.features = std::move(features);
  return bank;
}

FeatureBank build_bank(const PvtBackbone& teacher, const Dataset& ds,
                       const std::vector<int>& pool) {
  require(!pool.empty(), "build_bank: empty photo pool");
  std::vector<std::string> ids;
  std::vector<const Image*> photos;
  for (int idx : pool) {
    ids.push_back(ds.instances[static_cast<std::size_t>(idx)].instance_id);
    photos.push_back(&ds.instances[static_cast<std::size_t>(idx)].photo);
  }
  Mat feats = teacher.embed_f(photos);
  return make_bank(std::move(ids), std::move(feats));
}

void save_bank(const FeatureBank& bank, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "save_bank: cannot open ", path);
  const char magic[8] = {'S', 'K', 'B', 'N', 'K', '0', '0', '1'};
  out.write(magic, 8);
  std::uint32_t n = static_cast<std::uint32_t>(bank.features.rows());
  std::uint32_t d = static_cast<std::uint32_t>(bank.features.cols());
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(&d), 4);
  for (const auto& id : bank.ids) {
    std::uint32_t len = static_cast<std::uint32_t>(id.size());
    out.write(reinterpret_cast<const char*>(&len), 4);
    out.write(id.data(), len);
  }
  std::vector<float> row(d);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < d; ++j)
      row[j] = static_cast<float>(bank.features(i, j));
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(sizeof(float) * d));
  }
  require(out.good(), "save_bank: write failed for ", path);
}

FeatureBank load_bank(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "load_bank: cannot open ", path);
  char magic[8];
  in.read(magic, 8);
  require(in.good() && std::memcmp(magic, "SKBNK001", 8) == 0,
          "load_bank: bad magic in ", path);
  std::uint32_t n = 0, d = 0;
  in.read(reinterpret_cast<char*>(&n), 4);
  in.read(reinterpret_cast<char*>(&d), 4);
  require(in.good() && n > 0 && d > 0, "load_bank: bad header in ", path);
  std::vector<std::string> ids(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint32_t len = 0;
    in.read(reinterpret_cast<char*>(&len), 4);
    require(in.good() && len < 4096, "load_bank: bad id length");
    ids[i].resize(len);
    in.read(ids[i].data(), len);
  }
  Mat feats(n, d);
  std::vector<float> row(d);
  for (std::uint32_t i = 0; i < n; ++i) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(sizeof(float) * d));
    require(in.good(), "load_bank: truncated feature rows");
    for (std::uint32_t j = 0; j < d; ++j) feats(i, j) = row[j];
  }
  return make_bank(std::move(ids), std::move(feats));
}

NeighbourSet knn(const FeatureBank& bank, const Vec& query, int k,
                 const std::string& exclude_id) {
  require(query.size() == bank.features.cols(), "knn: query dimension ",
          query.size(), " != bank dimension ", bank.features.cols());
  std::vector<std::pair<double, int>> cand;
  cand.reserve(bank.ids.size());
  for (int i = 0; i < bank.size(); ++i) {
    if (bank.ids[static_cast<std::size_t>(i)] == exclude_id) continue;
    double dist = (bank.features.row(i).transpose() - query).squaredNorm();
    cand.emplace_back(dist, i);
  }
  require(k >= 1 && static_cast<std::size_t>(k) <= cand.size(),
          "knn: K=", k, " too large for bank of ", bank.size(),
          " (self excluded)");
  std::sort(cand.begin(), cand.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return bank.ids[static_cast<std::size_t>(a.second)] <
           bank.ids[static_cast<std::size_t>(b.second)];
  });
  NeighbourSet out;
  out.query_id = exclude_id;
  out.teacher_dists.resize(k);
  for (int j = 0; j < k; ++j) {
    out.neighbour_ids.push_back(bank.ids[static_cast<std::size_t>(cand[static_cast<std::size_t>(j)].second)]);
    out.teacher_dists(j) = cand[static_cast<std::size_t>(j)].first;
  }
  return out;
}

Vec similarity_distribution(const Vec& dists, double tau) {
  require(tau > 0.0, "similarity_distribution: tau must be > 0");
  require(dists.size() >= 1, "similarity_distribution: empty distance vector");
  require(dists.allFinite(), "similarity_distribution: non-finite distances");
  Vec logits = -dists / tau;
  double m = logits.maxCoeff();
  Vec e = (logits.array() - m).exp();
  return e / e.sum();
}

double kl_consistency(const Vec& p_teacher, const Vec& p_student) {
  require(p_teacher.size() == p_student.size(), "kl_consistency: length mismatch");
  require(std::abs(p_teacher.sum() - 1.0) <= 1e-6,
          "kl_consistency: teacher distribution not normalized");
  require(std::abs(p_student.sum() - 1.0) <= 1e-6,
          "kl_consistency: student distribution not normalized");
  double kl = 0.0;
  for (Eigen::Index j = 0; j < p_teacher.size(); ++j) {
    if (p_teacher(j) <= 0.0) continue;  // 0 * ln(0/x) := 0
    require(p_student(j) > 0.0, "kl_consistency: zero student probability");
    kl += p_teacher(j) * std::log(p_teacher(j) / p_student(j));
  }
  return kl;
}

namespace {

int bank_row_checked(const FeatureBank& bank, const std::string& id) {
  int row = bank.row_of(id);
  require(row >= 0, "distillation: query id '", id, "' absent from the bank");
  return row;
}

const Vec& mu_of(const StudentFeatures& sf, const std::string& id) {
  auto it = sf.photo_mu.find(id);
  require(it != sf.photo_mu.end(),
          "distillation: neighbour id '", id,
          "' absent from the student feature set (bank/pool mismatch)");
  return it->second;
}

Vec student_dists(const StudentFeatures& sf, const Vec& query_mu,
                  const std::vector<std::string>& neighbour_ids) {
  Vec d(static_cast<Eigen::Index>(neighbour_ids.size()));
  for (std::size_t j = 0; j < neighbour_ids.size(); ++j)
    d(static_cast<Eigen::Index>(j)) =
        (query_mu - mu_of(sf, neighbour_ids[j])).squaredNorm();
  return d;
}

}  // namespace

DistillBreakdown distillation_components(const FeatureBank& bank,
                                         const DistillQueries& queries,
                                         const StudentFeatures& student,
                                         const Hyperparameters& hp) {
  require(!queries.labelled_photo_ids.empty(),
          "distillation_components: empty labelled batch");
  require(queries.sketch_paired_photo_ids.size() == student.sketch_mu.size(),
          "distillation_components: sketch query/feature mismatch");
  DistillBreakdown out;

  for (const auto& id : queries.labelled_photo_ids) {
    NeighbourSet ns = knn(bank, bank.features.row(bank_row_checked(bank, id)), hp.k, id);
    Vec p_t = similarity_distribution(ns.teacher_dists, hp.tau);
    Vec d_s = student_dists(student, mu_of(student, id), ns.neighbour_ids);
    out.kl_pl += kl_consistency(p_t, similarity_distribution(d_s, hp.tau));
  }
  out.kl_pl /= static_cast<double>(queries.labelled_photo_ids.size());

  if (!queries.sketch_paired_photo_ids.empty()) {
    for (std::size_t i = 0; i < queries.sketch_paired_photo_ids.size(); ++i) {
      const std::string& pid = queries.sketch_paired_photo_ids[i];
      NeighbourSet ns = knn(bank, bank.features.row(bank_row_checked(bank, pid)), hp.k, pid);
      Vec p_t = similarity_distribution(ns.teacher_dists, hp.tau);
      Vec d_s = student_dists(student, student.sketch_mu[i], ns.neighbour_ids);
      out.kl_sl += kl_consistency(p_t, similarity_distribution(d_s, hp.tau));
    }
    out.kl_sl /= static_cast<double>(queries.sketch_paired_photo_ids.size());
  }

  if (!queries.unlabelled_photo_ids.empty()) {
    for (const auto& id : queries.unlabelled_photo_ids) {
      NeighbourSet ns = knn(bank, bank.features.row(bank_row_checked(bank, id)), hp.k, id);
      Vec p_t = similarity_distribution(ns.teacher_dists, hp.tau);
      Vec d_s = student_dists(student, mu_of(student, id), ns.neighbour_ids);
      out.kl_pu += kl_consistency(p_t, similarity_distribution(d_s, hp.tau));
    }
    out.kl_pu /= static_cast<double>(queries.unlabelled_photo_ids.size());
  }

  out.total = out.kl_pl + hp.lambda4 * out.kl_sl + hp.lambda5 * out.kl_pu;
  return out;
}

DistillBreakdown distillation_loss(const PvtBackbone& student,
                                   const FeatureBank& bank, const Dataset& ds,
                                   const std::vector<int>& labelled_batch,
                                   const std::vector<std::pair<int, int>>& sketch_batch,
                                   const std::vector<int>& unlabelled_batch,
                                   const Hyperparameters& hp) {
  DistillQueries queries;
  std::set<std::string> needed_photos;
  for (int idx : labelled_batch) {
    const auto& id = ds.instances[static_cast<std::size_t>(idx)].instance_id;
    queries.labelled_photo_ids.push_back(id);
    needed_photos.insert(id);
  }
  for (auto [idx, sk] : sketch_batch) {
    (void)sk;
    const auto& id = ds.instances[static_cast<std::size_t>(idx)].instance_id;
    queries.sketch_paired_photo_ids.push_back(id);
    needed_photos.insert(id);
  }
  for (int idx : unlabelled_batch) {
    const auto& id = ds.instances[static_cast<std::size_t>(idx)].instance_id;
    queries.unlabelled_photo_ids.push_back(id);
    needed_photos.insert(id);
  }
  // Neighbour photos also pass through the student.
  auto add_neighbours = [&](const std::string& id) {
    NeighbourSet ns = knn(bank, bank.features.row(bank_row_checked(bank, id)), hp.k, id);
    for (const auto& nid : ns.neighbour_ids) needed_photos.insert(nid);
  };
  for (const auto& id : queries.labelled_photo_ids) add_neighbours(id);
  for (const auto& id : queries.sketch_paired_photo_ids) add_neighbours(id);
  for (const auto& id : queries.unlabelled_photo_ids) add_neighbours(id);

  StudentFeatures sf;
  {
    std::vector<std::string> ids(needed_photos.begin(), needed_photos.end());
    std::vector<const Image*> photos;
    for (const auto& id : ids) {
      int idx = ds.find(id);
      require(idx >= 0, "distillation_loss: photo id '", id,
              "' not present in the dataset (bank/pool mismatch)");
      photos.push_back(&ds.instances[static_cast<std::size_t>(idx)].photo);
    }
    Mat mu = student.embed_mu(photos);
    for (std::size_t i = 0; i < ids.size(); ++i)
      sf.photo_mu[ids[i]] = mu.row(static_cast<Eigen::Index>(i)).transpose();
  }
  {
    std::vector<const Image*> sketches;
    for (auto [idx, sk] : sketch_batch)
      sketches.push_back(
          &ds.instances[static_cast<std::size_t>(idx)].sketches[static_cast<std::size_t>(sk)]);
    if (!sketches.empty()) {
      Mat mu = student.embed_mu(sketches);
      for (Eigen::Index i = 0; i < mu.rows(); ++i)
        sf.sketch_mu.push_back(mu.row(i).transpose());
    }
  }
  return distillation_components(bank, queries, sf, hp);
}

}  // namespace distill
}  // namespace sketchkd
