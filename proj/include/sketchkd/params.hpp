#ifndef SKETCHKD_PARAMS_HPP_
#define SKETCHKD_PARAMS_HPP_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "sketchkd/graph.hpp"

namespace sketchkd {

// Named learnable tensors. Nodes persist across tapes; gradients accumulate
// during backward passes and are cleared by the optimizer. std::map keeps the
// iteration order deterministic for optimizers, EMA, checkpoints and
// finite-difference sweeps.
class ParamStore {
 public:
  graph::Var add(const std::string& name, Mat init) {
    require(!params_.count(name), "duplicate parameter name: ", name);
    auto node = std::make_unique<graph::Node>();
    node->val = std::move(init);
    node->requires_grad = true;
    graph::Var v = node.get();
    params_.emplace(name, std::move(node));
    return v;
  }

  graph::Var get(const std::string& name) const {
    auto it = params_.find(name);
    require(it != params_.end(), "unknown parameter: ", name);
    return it->second.get();
  }

  bool has(const std::string& name) const { return params_.count(name) != 0; }

  void zero_grad() {
    for (auto& [name, node] : params_) node->grad.resize(0, 0);
  }

  std::size_t size() const { return params_.size(); }

  std::size_t scalar_count() const {
    std::size_t n = 0;
    for (const auto& [name, node] : params_) n += node->val.size();
    return n;
  }

  template <typename Fn>
  void for_each(Fn&& fn) {
    for (auto& [name, node] : params_) fn(name, *node);
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [name, node] : params_) fn(name, *node);
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    out.reserve(params_.size());
    for (const auto& [name, node] : params_) out.push_back(name);
    return out;
  }

 private:
  std::map<std::string, std::unique_ptr<graph::Node>> params_;
};

}  // namespace sketchkd

#endif  // SKETCHKD_PARAMS_HPP_
