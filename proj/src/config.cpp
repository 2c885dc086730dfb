#include "sketchkd/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

namespace sketchkd {

namespace {

std::string join_ints(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ",";
    os << v[i];
  }
  return os.str();
}

std::vector<int> parse_int_list(const std::string& s, const std::string& key) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      int v = std::stoi(item, &pos);
      require(pos == item.find_last_not_of(" \t") + 1 || item.substr(pos).find_first_not_of(" \t") == std::string::npos,
              "config: trailing junk in list entry '", item, "' for key ", key);
      out.push_back(v);
    } catch (const std::exception&) {
      fail("config: cannot parse integer '", item, "' for key ", key);
    }
  }
  require(!out.empty(), "config: empty list for key ", key);
  return out;
}

double parse_double(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    return v;
  } catch (const std::exception&) {
    fail("config: cannot parse number '", s, "' for key ", key);
  }
}

std::int64_t parse_int64(const std::string& s, const std::string& key) {
  try {
    return std::stoll(s);
  } catch (const std::exception&) {
    fail("config: cannot parse integer '", s, "' for key ", key);
  }
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

void Hyperparameters::validate() const {
  require(m_cm >= 0.0, "config invariant violated: m_cm must be >= 0");
  require(m_im_s >= 0.0, "config invariant violated: m_im_s must be >= 0");
  require(m_im_p >= 0.0, "config invariant violated: m_im_p must be >= 0");
  require(tau > 0.0, "config invariant violated: tau must be > 0");
  const double lambdas[6] = {lambda1, lambda2, lambda3, lambda4, lambda5, lambda6};
  for (int i = 0; i < 6; ++i)
    require(lambdas[i] >= 0.0, "config invariant violated: lambda", i + 1,
            " must be >= 0");
  require(beta >= 0.0 && beta < 1.0, "config invariant violated: beta must be in [0,1)");
  require(k >= 1, "config invariant violated: k must be >= 1");
  require(levels >= 1, "config invariant violated: levels must be >= 1");
  require(static_cast<int>(patch_strides.size()) == levels,
          "config invariant violated: patch_strides length ", patch_strides.size(),
          " != levels ", levels);
  require(static_cast<int>(channels.size()) == levels,
          "config invariant violated: channels length ", channels.size(),
          " != levels ", levels);
  require(static_cast<int>(heads.size()) == levels,
          "config invariant violated: heads length ", heads.size(), " != levels ",
          levels);
  require(static_cast<int>(sr_ratios.size()) == levels,
          "config invariant violated: sr_ratios length ", sr_ratios.size(),
          " != levels ", levels);
  long long stride_prod = 1;
  for (int s : patch_strides) {
    require(s >= 1, "config invariant violated: patch_strides entries must be >= 1");
    stride_prod *= s;
  }
  require(image_size >= 1, "config invariant violated: image_size must be >= 1");
  require(image_size % stride_prod == 0,
          "config invariant violated: image_size ", image_size,
          " not divisible by stride product ", stride_prod);
  for (int c : channels)
    require(c >= 1, "config invariant violated: channels entries must be >= 1");
  for (std::size_t i = 0; i < channels.size(); ++i) {
    require(heads[i] >= 1 && channels[i] % heads[i] == 0,
            "config invariant violated: channels[", i, "]=", channels[i],
            " not divisible by heads[", i, "]=", heads[i]);
    require(sr_ratios[i] >= 1,
            "config invariant violated: sr_ratios entries must be >= 1");
  }
  require(channels.back() == d, "config invariant violated: channels[last] ",
          channels.back(), " != d ", d);
  require(lr > 0.0, "config invariant violated: lr must be > 0");
  require(weight_decay >= 0.0, "config invariant violated: weight_decay must be >= 0");
  require(batch_size >= 1, "config invariant violated: batch_size must be >= 1");
  require(epochs >= 1, "config invariant violated: epochs must be >= 1");
}

std::string Hyperparameters::serialize() const {
  std::ostringstream os;
  os << "m_cm = " << fmt_double(m_cm) << "\n";
  os << "m_im_s = " << fmt_double(m_im_s) << "\n";
  os << "m_im_p = " << fmt_double(m_im_p) << "\n";
  os << "tau = " << fmt_double(tau) << "\n";
  os << "lambda1 = " << fmt_double(lambda1) << "\n";
  os << "lambda2 = " << fmt_double(lambda2) << "\n";
  os << "lambda3 = " << fmt_double(lambda3) << "\n";
  os << "lambda4 = " << fmt_double(lambda4) << "\n";
  os << "lambda5 = " << fmt_double(lambda5) << "\n";
  os << "lambda6 = " << fmt_double(lambda6) << "\n";
  os << "beta = " << fmt_double(beta) << "\n";
  os << "k = " << k << "\n";
  os << "levels = " << levels << "\n";
  os << "patch_strides = " << join_ints(patch_strides) << "\n";
  os << "channels = " << join_ints(channels) << "\n";
  os << "heads = " << join_ints(heads) << "\n";
  os << "sr_ratios = " << join_ints(sr_ratios) << "\n";
  os << "d = " << d << "\n";
  os << "lr = " << fmt_double(lr) << "\n";
  os << "weight_decay = " << fmt_double(weight_decay) << "\n";
  os << "batch_size = " << batch_size << "\n";
  os << "epochs = " << epochs << "\n";
  os << "seed = " << seed << "\n";
  os << "image_size = " << image_size << "\n";
  return os.str();
}

Hyperparameters paper_default_profile() {
  Hyperparameters hp;  // struct defaults are the paper profile
  hp.validate();
  return hp;
}

Hyperparameters desk_profile() {
  Hyperparameters hp;
  hp.levels = 3;
  hp.patch_strides = {4, 2, 2};
  hp.channels = {16, 32, 64};
  hp.heads = {2, 4, 8};
  hp.sr_ratios = {2, 2, 1};
  hp.d = 64;
  hp.image_size = 32;
  hp.beta = 0.99;  // shorter horizon suits desk-scale step counts
  hp.validate();
  return hp;
}

Hyperparameters load_config(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "config: cannot open ", path);
  Hyperparameters hp = paper_default_profile();

  std::map<std::string, std::function<void(const std::string&)>> setters = {
      {"m_cm", [&](const std::string& v) { hp.m_cm = parse_double(v, "m_cm"); }},
      {"m_im_s", [&](const std::string& v) { hp.m_im_s = parse_double(v, "m_im_s"); }},
      {"m_im_p", [&](const std::string& v) { hp.m_im_p = parse_double(v, "m_im_p"); }},
      {"tau", [&](const std::string& v) { hp.tau = parse_double(v, "tau"); }},
      {"lambda1", [&](const std::string& v) { hp.lambda1 = parse_double(v, "lambda1"); }},
      {"lambda2", [&](const std::string& v) { hp.lambda2 = parse_double(v, "lambda2"); }},
      {"lambda3", [&](const std::string& v) { hp.lambda3 = parse_double(v, "lambda3"); }},
      {"lambda4", [&](const std::string& v) { hp.lambda4 = parse_double(v, "lambda4"); }},
      {"lambda5", [&](const std::string& v) { hp.lambda5 = parse_double(v, "lambda5"); }},
      {"lambda6", [&](const std::string& v) { hp.lambda6 = parse_double(v, "lambda6"); }},
      {"beta", [&](const std::string& v) { hp.beta = parse_double(v, "beta"); }},
      {"k", [&](const std::string& v) { hp.k = static_cast<int>(parse_int64(v, "k")); }},
      {"levels", [&](const std::string& v) { hp.levels = static_cast<int>(parse_int64(v, "levels")); }},
      {"patch_strides", [&](const std::string& v) { hp.patch_strides = parse_int_list(v, "patch_strides"); }},
      {"channels", [&](const std::string& v) { hp.channels = parse_int_list(v, "channels"); }},
      {"heads", [&](const std::string& v) { hp.heads = parse_int_list(v, "heads"); }},
      {"sr_ratios", [&](const std::string& v) { hp.sr_ratios = parse_int_list(v, "sr_ratios"); }},
      {"d", [&](const std::string& v) { hp.d = static_cast<int>(parse_int64(v, "d")); }},
      {"lr", [&](const std::string& v) { hp.lr = parse_double(v, "lr"); }},
      {"weight_decay", [&](const std::string& v) { hp.weight_decay = parse_double(v, "weight_decay"); }},
      {"batch_size", [&](const std::string& v) { hp.batch_size = static_cast<int>(parse_int64(v, "batch_size")); }},
      {"epochs", [&](const std::string& v) { hp.epochs = static_cast<int>(parse_int64(v, "epochs")); }},
      {"seed", [&](const std::string& v) { hp.seed = parse_int64(v, "seed"); }},
      {"image_size", [&](const std::string& v) { hp.image_size = static_cast<int>(parse_int64(v, "image_size")); }},
  };

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    require(eq != std::string::npos, "config: line ", lineno, " of ", path,
            " is not 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    auto it = setters.find(key);
    require(it != setters.end(), "config: unknown key '", key, "' at line ", lineno);
    it->second(value);
  }
  hp.validate();
  return hp;
}

void save_config(const Hyperparameters& hp, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "config: cannot write ", path);
  out << hp.serialize();
  require(out.good(), "config: write failed for ", path);
}

}  // namespace sketchkd
