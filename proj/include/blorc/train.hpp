#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "blorc/data.hpp"
#include "blorc/denoise.hpp"
#include "blorc/linalg.hpp"

namespace blorc {

enum class InitKind { kIdentity, kZeros, kRandomGaussian, kFromFile };

struct InitSpec {
  InitKind kind = InitKind::kIdentity;
  double scale = 0.1;      // kRandomGaussian: entries N(0, scale^2)
  Eigen::Index rows = 0;   // kZeros / kRandomGaussian: 0 means n
  std::filesystem::path path;  // kFromFile
};

enum class FailurePolicy { kSkipSample, kAbort };

struct TrainConfig {
  std::size_t batch_size = 100;
  int epochs = 750;
  double learning_rate = 1e-4;
  double sign_threshold = kDefaultSignThreshold;
  AdmmParams admm;
  std::uint64_t rng_seed = 0;
  InitSpec init;
  int validation_every = 1;
  FailurePolicy on_failure = FailurePolicy::kSkipSample;
  // Resuming: epochs run from start_epoch to epochs - 1. Shuffles depend only
  // on (rng_seed, epoch), so a resumed run replays the uninterrupted one.
  int start_epoch = 0;
  int checkpoint_every = 0;  // 0 disables checkpoints
  std::filesystem::path checkpoint_dir;

  void validate() const;  // throws InvalidInput
};

struct TrainLog {
  std::vector<int> epochs;
  std::vector<double> train_loss;  // mean sample loss seen during the epoch
  std::vector<std::pair<int, double>> val_loss;  // (epoch, loss)
  std::vector<double> elapsed_seconds;
  // Samples whose sign pattern had rows in [gamma/2, 2*gamma] or disagreed
  // with the solver's exact zero set.
  std::vector<std::size_t> boundary_warnings;
  std::vector<std::size_t> skipped_samples;
};

struct TrainResult {
  Matrix w;
  TrainLog log;
};

// Called after each epoch with (epoch, current W, log so far).
using EpochCallback = std::function<void(int, const Matrix&, const TrainLog&)>;

Matrix initial_transform(const InitSpec& init, Eigen::Index n, std::uint64_t seed);

// Minibatch gradient descent on the mean upper-level loss: per epoch, shuffle,
// and for each batch apply W <- W - alpha * (mean of per-sample gradients).
TrainResult blorc_train(const std::vector<TrainingPair>& dataset, const TrainConfig& config,
                        const std::vector<TrainingPair>* validation = nullptr,
                        const EpochCallback& on_epoch = {});

// Mean of 1/2 ||x*(W, y_t) - x_t||^2; each term from a fresh ADMM solve.
double evaluate_loss(const Matrix& w, const std::vector<TrainingPair>& pairs, const AdmmParams& params,
                     double beta = 1.0);

// CSV with header epoch,train_loss,val_loss,elapsed_s,boundary_warnings,skipped.
std::string format_train_log(const TrainLog& log);
void write_train_log(const std::filesystem::path& path, const TrainLog& log);

}  // namespace blorc
