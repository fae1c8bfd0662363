#pragma once

#include <span>
#include <string>
#include <vector>

#include "accmm/oracle.hpp"
#include "accmm/rng.hpp"

namespace accmm {

// Synthetic data-poisoning benchmark: n Gaussian feature rows a_i with labels
// b_i = 1 iff a_i'theta + nu_i > 0, theta = (1,...,1), nu_i ~ N(0, 1e-3), and
// a uniformly chosen corrupted subset of round(rate * n) samples.
struct PoisonDataset {
  int n = 0;
  int d = 0;
  std::vector<double> features;  // n x d, row-major
  std::vector<int> labels;       // 0/1
  std::vector<char> corrupted;   // size n
  std::vector<int> poisoned_ids;
  std::vector<int> clean_ids;

  std::span<const double> row(int i) const {
    return std::span<const double>(features).subspan(static_cast<std::size_t>(i) * d,
                                                     static_cast<std::size_t>(d));
  }
};

PoisonDataset gen_poisoning_data(int n, int d, RngStream& rng, double corruption_rate = 0.15);

void save_poisoning_csv(const PoisonDataset& ds, const std::string& path);
PoisonDataset load_poisoning_csv(const std::string& path);

// A batch with no member of one subset contributes nothing for that term;
// the flags report which terms were skipped.
struct BatchFlags {
  bool poisoned_empty = false;
  bool clean_empty = false;
};

// Attack objective value on a batch (ids drawn with replacement from the full
// index set): mean binary cross-entropy of g = sigmoid((x+a)'y) over the
// batch's poisoned members plus the same with x = 0 over its clean members.
// g is clamped to [1e-12, 1-1e-12] before the logs.
double poisoning_value(const PoisonDataset& ds, const Vec& x, const Vec& y,
                       std::span<const int> batch, BatchFlags* flags = nullptr);

struct PoisonGrads {
  Vec gx;
  Vec gy;
  BatchFlags flags;
};

// Exact partials of poisoning_value on the batch.
PoisonGrads poisoning_grads(const PoisonDataset& ds, const Vec& x, const Vec& y,
                            std::span<const int> batch);

// Population-exact value/gradients over the full subsets. Chunked kernels:
// parallel under OpenMP, byte-deterministic for any thread count.
double poisoning_full_value(const PoisonDataset& ds, const Vec& x, const Vec& y);
PoisonGrads poisoning_full_grads(const PoisonDataset& ds, const Vec& x, const Vec& y);

// Serial reference kernels (plain left-to-right accumulation), kept for
// testing the parallel path and for the kernel benchmark.
namespace ref {
double poisoning_full_value(const PoisonDataset& ds, const Vec& x, const Vec& y);
PoisonGrads poisoning_full_grads(const PoisonDataset& ds, const Vec& x, const Vec& y);
}  // namespace ref

// Minimax oracle over the dataset with the objective negated, so the
// attacker's max_x min_y problem becomes min over x / max over y as the
// descent-ascent methods expect. A sample's stochastic value is its own
// subset term scaled by n/|subset|, so the mean over uniformly drawn ids is
// exactly the full objective (the two subset means enter it with equal
// weight). Strong concavity in y holds only through the small y-ball, so tau
// is reported as unknown.
class PoisoningOracle final : public MinimaxOracle {
 public:
  explicit PoisoningOracle(PoisonDataset ds);

  int dim_x() const override { return ds_.d; }
  int dim_y() const override { return ds_.d; }
  int population_size() const override { return ds_.n; }
  double value(const Vec& x, const Vec& y, int sample_id) const override;

  bool has_grads() const override { return true; }
  Vec grad_x(const Vec& x, const Vec& y, int sample_id) const override;
  Vec grad_y(const Vec& x, const Vec& y, int sample_id) const override;

  bool has_full() const override { return true; }
  double full_value(const Vec& x, const Vec& y) const override;
  Vec full_grad_x(const Vec& x, const Vec& y) const override;
  Vec full_grad_y(const Vec& x, const Vec& y) const override;

  const PoisonDataset& dataset() const { return ds_; }
  double sample_weight(int sample_id) const;

 private:
  PoisonDataset ds_;
  double weight_poisoned_ = 0.0;
  double weight_clean_ = 0.0;
};

}  // namespace accmm
