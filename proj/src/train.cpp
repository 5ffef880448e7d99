#include "blorc/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include "blorc/errors.hpp"
#include "blorc/gradient.hpp"
#include "blorc/io.hpp"
#include "blorc/parallel.hpp"
#include "blorc/rng.hpp"

namespace blorc {

void TrainConfig::validate() const {
  if (batch_size < 1) throw InvalidInput("batch_size must be >= 1");
  if (epochs < 1) throw InvalidInput("epochs must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw InvalidInput("learning_rate must be positive");
  if (!(sign_threshold > 0.0)) throw InvalidInput("sign_threshold must be positive");
  if (validation_every < 1) throw InvalidInput("validation_every must be >= 1");
  if (start_epoch < 0 || start_epoch > epochs) throw InvalidInput("start_epoch must lie in [0, epochs]");
  if (checkpoint_every < 0) throw InvalidInput("checkpoint_every must be >= 0");
  if (checkpoint_every > 0 && checkpoint_dir.empty()) throw InvalidInput("checkpoint_every needs checkpoint_dir");
  if (init.kind == InitKind::kRandomGaussian && !(init.scale >= 0.0)) throw InvalidInput("init scale must be >= 0");
  if (init.rows < 0) throw InvalidInput("init rows must be >= 0");
  admm.validate();
}

Matrix initial_transform(const InitSpec& init, Eigen::Index n, std::uint64_t seed) {
  const Eigen::Index k = init.rows > 0 ? init.rows : n;
  switch (init.kind) {
    case InitKind::kIdentity:
      return Matrix::Identity(n, n);
    case InitKind::kZeros:
      return Matrix::Zero(k, n);
    case InitKind::kRandomGaussian: {
      auto gen = make_rng(seed, RngPurpose::kInit);
      std::normal_distribution<double> dist(0.0, 1.0);
      Matrix w(k, n);
      for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < n; ++j) w(i, j) = init.scale * dist(gen);
      return w;
    }
    case InitKind::kFromFile: {
      Matrix w = io::read_csv(init.path);
      if (w.cols() != n) throw InvalidInput("initial transform has " + std::to_string(w.cols()) +
                                            " columns, signals have length " + std::to_string(n));
      return w;
    }
  }
  throw InvalidInput("unknown init kind");
}

namespace {

std::filesystem::path checkpoint_path(const std::filesystem::path& dir, int epoch) {
  std::ostringstream name;
  name << "W_epoch_";
  name.width(4);
  name.fill('0');
  name << epoch << ".csv";
  return dir / name.str();
}

}  // namespace

TrainResult blorc_train(const std::vector<TrainingPair>& dataset, const TrainConfig& config,
                        const std::vector<TrainingPair>* validation, const EpochCallback& on_epoch) {
  config.validate();
  if (dataset.empty()) throw InvalidInput("blorc_train: empty dataset");
  const Eigen::Index n = validate_pairs(dataset);
  if (validation != nullptr && !validation->empty()) validate_pairs(*validation, n);

  TrainResult out;
  out.w = initial_transform(config.init, n, config.rng_seed);
  if (config.checkpoint_every > 0) std::filesystem::create_directories(config.checkpoint_dir);

  AdmmParams admm = config.admm;
  admm.sign_threshold = config.sign_threshold;

  const std::size_t m = dataset.size();
  std::vector<std::size_t> order(m);
  std::vector<std::optional<SampleGradient>> slots;
  const auto t0 = std::chrono::steady_clock::now();

  for (int epoch = config.start_epoch; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto gen = make_rng(config.rng_seed, RngPurpose::kShuffle, static_cast<std::uint64_t>(epoch));
    std::shuffle(order.begin(), order.end(), gen);

    double loss_sum = 0.0;
    std::size_t used = 0;
    std::size_t warnings = 0;
    std::size_t skipped = 0;
    for (std::size_t start = 0; start < m; start += config.batch_size) {
      const std::size_t count = std::min(config.batch_size, m - start);
      slots.assign(count, std::nullopt);
      parallel_for(count, [&](std::size_t b) {
        try {
          slots[b] = sample_gradient(out.w, dataset[order[start + b]], config.sign_threshold, admm);
        } catch (const ConvergenceError&) {
          if (config.on_failure == FailurePolicy::kAbort) throw;
        }
      });

      // Reduce in batch order so results do not depend on thread scheduling.
      Matrix grad = Matrix::Zero(out.w.rows(), out.w.cols());
      std::size_t batch_used = 0;
      for (std::size_t b = 0; b < count; ++b) {
        if (!slots[b]) {
          ++skipped;
          std::cerr << "warning: epoch " << epoch << ": ADMM did not converge on sample " << order[start + b]
                    << ", skipped\n";
          continue;
        }
        const SampleGradient& sg = *slots[b];
        grad += sg.grad_w;
        loss_sum += sg.loss;
        ++batch_used;
        if (sg.sign_pattern.ambiguous_rows > 0 || sg.misclassified_rows > 0) ++warnings;
      }
      used += batch_used;
      if (batch_used > 0) out.w -= (config.learning_rate / static_cast<double>(batch_used)) * grad;
    }

    out.log.epochs.push_back(epoch);
    out.log.train_loss.push_back(used > 0 ? loss_sum / static_cast<double>(used) : std::nan(""));
    out.log.boundary_warnings.push_back(warnings);
    out.log.skipped_samples.push_back(skipped);
    if (validation != nullptr && !validation->empty() && (epoch + 1) % config.validation_every == 0)
      out.log.val_loss.emplace_back(epoch, evaluate_loss(out.w, *validation, admm));
    out.log.elapsed_seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

    if (config.checkpoint_every > 0 &&
        ((epoch + 1) % config.checkpoint_every == 0 || epoch + 1 == config.epochs)) {
      io::write_csv(checkpoint_path(config.checkpoint_dir, epoch + 1), out.w);
      write_train_log(config.checkpoint_dir / "train_log.csv", out.log);
    }
    if (on_epoch) on_epoch(epoch, out.w, out.log);
  }
  return out;
}

double evaluate_loss(const Matrix& w, const std::vector<TrainingPair>& pairs, const AdmmParams& params,
                     double beta) {
  if (pairs.empty()) throw InvalidInput("evaluate_loss: no pairs");
  validate_pairs(pairs, w.cols());
  std::vector<double> losses(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) { losses[i] = sample_loss(w, pairs[i], params, beta); });
  return std::accumulate(losses.begin(), losses.end(), 0.0) / static_cast<double>(pairs.size());
}

std::string format_train_log(const TrainLog& log) {
  std::ostringstream os;
  os.precision(17);
  os << "epoch,train_loss,val_loss,elapsed_s,boundary_warnings,skipped\n";
  std::size_t v = 0;
  for (std::size_t i = 0; i < log.epochs.size(); ++i) {
    os << log.epochs[i] << ',' << log.train_loss[i] << ',';
    if (v < log.val_loss.size() && log.val_loss[v].first == log.epochs[i]) os << log.val_loss[v++].second;
    os << ',' << log.elapsed_seconds[i] << ',' << log.boundary_warnings[i] << ',' << log.skipped_samples[i] << '\n';
  }
  return os.str();
}

void write_train_log(const std::filesystem::path& path, const TrainLog& log) {
  io::write_file(path, format_train_log(log));
}

}  // namespace blorc
