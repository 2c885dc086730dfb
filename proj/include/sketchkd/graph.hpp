#ifndef SKETCHKD_GRAPH_HPP_
#define SKETCHKD_GRAPH_HPP_

#include <deque>
#include <functional>
#include <memory>
#include <vector>

#include "sketchkd/common.hpp"

namespace sketchkd {
namespace graph {

// Reverse-mode tape over dense double matrices. Nodes are created in
// topological order by construction; backward() walks the tape in reverse.
// Parameter nodes live outside the tape (see ParamStore) and just accumulate
// gradients; optimizers clear them between steps.

struct Node {
  Mat val;
  Mat grad;  // lazily sized on first accumulation
  bool requires_grad = false;
  std::function<void(const Mat&)> backward;  // nullptr for leaves

  void accumulate(const Mat& g) {
    if (grad.size() == 0) {
      grad = g;
    } else {
      grad += g;
    }
  }
};

using Var = Node*;

class Tape {
 public:
  explicit Tape(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}

  Var alloc(Mat val) {
    nodes_.push_back(std::make_unique<Node>());
    nodes_.back()->val = std::move(val);
    return nodes_.back().get();
  }

  Var constant(Mat val) { return alloc(std::move(val)); }

  bool grad_enabled() const { return grad_enabled_; }

  // Seeds d(root)/d(root) = 1 and accumulates gradients into every
  // requires_grad node reachable from it, parameters included.
  void backward(Var root) {
    require(root->val.rows() == 1 && root->val.cols() == 1,
            "backward root must be a 1x1 scalar node");
    require(grad_enabled_, "backward on a no-grad tape");
    root->accumulate(Mat::Ones(1, 1));
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
      Node* n = it->get();
      if (n->backward && n->grad.size() != 0) n->backward(n->grad);
    }
  }

  std::size_t size() const { return nodes_.size(); }

 private:
  std::deque<std::unique_ptr<Node>> nodes_;
  bool grad_enabled_;
};

// ---------------------------------------------------------------------------
// Elementwise / linear algebra ops
// ---------------------------------------------------------------------------

Var matmul(Tape& t, Var a, Var b);
Var add(Tape& t, Var a, Var b);
Var sub(Tape& t, Var a, Var b);
Var hadamard(Tape& t, Var a, Var b);
Var hadamard_const(Tape& t, Var a, const Mat& c);
Var scale(Tape& t, Var a, double c);
Var add_scalar(Tape& t, Var a, double c);
Var add_rowvec(Tape& t, Var a, Var row);      // row: 1 x C broadcast over rows
Var relu(Tape& t, Var a);                     // hinge; subgradient 0 at the kink
Var gelu(Tape& t, Var a);                     // exact erf form
Var log_elem(Tape& t, Var a);
Var softmax_rows(Tape& t, Var a);
Var log_softmax_rows(Tape& t, Var a);
Var layernorm_rows(Tape& t, Var a, Var gamma, Var beta, double eps = 1e-5);
Var sum_cols(Tape& t, Var a);                 // R x C -> R x 1
Var sum_all(Tape& t, Var a);                  // -> 1 x 1
Var mean_all(Tape& t, Var a);                 // -> 1 x 1
// Squared Euclidean distance per aligned row pair: R x d, R x d -> R x 1.
Var rowwise_sqdist(Tape& t, Var a, Var b);

// ---------------------------------------------------------------------------
// Block-structured ops. Batched token matrices are stored stacked: an
// (n_images * N) x C matrix holds N rows per image, image-major.
// ---------------------------------------------------------------------------

// Non-overlapping block x block patch extraction on a square token grid.
// Input (n_images * g^2) x C, rows in (y, x) raster order per image; output
// (n_images * (g/block)^2) x (C * block^2), flattened patch cell-major:
// column (dy*block + dx)*C + c.
Var space_to_depth(Tape& t, Var a, int n_images, int grid, int block);

// Per image, stack a's Na rows on top of b's Nb rows.
Var concat_blocks(Tape& t, Var a, int na, Var b, int nb, int n_images);

// Per image, keep rows [0, head) of each N-row block.
Var take_block_head(Tape& t, Var a, int n_per_image, int n_images, int head);
// Per image, keep rows [skip, N).
Var take_block_tail(Tape& t, Var a, int n_per_image, int n_images, int skip);

// Mean over each image's N rows: (n_images * N) x C -> n_images x C.
Var block_mean_rows(Tape& t, Var a, int n_per_image, int n_images);

// Add a shared N x C matrix (e.g. positional table) to every image block.
Var add_block_rowmat(Tape& t, Var a, Var table, int n_images);

// Replicate a 1 x C row n times -> n x C.
Var repeat_row(Tape& t, Var a, int n);

Var gather_rows(Tape& t, Var a, std::vector<int> idx);

// (R*k) x 1 column -> R x k, row-major fold.
Var fold_rows(Tape& t, Var a, int k);

// Multi-head attention core: per image and head,
// out = softmax(Q K^T / sqrt(C/heads)) V. q: (n_images*Nq) x C,
// k/v: (n_images*Nkv) x C, output (n_images*Nq) x C.
Var mha(Tape& t, Var q, Var k, Var v, int n_images, int heads);

}  // namespace graph
}  // namespace sketchkd

#endif  // SKETCHKD_GRAPH_HPP_
