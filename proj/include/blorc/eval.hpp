#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "blorc/data.hpp"
#include "blorc/denoise.hpp"
#include "blorc/linalg.hpp"
#include "blorc/train.hpp"

namespace blorc {

// 10 log10(peak^2 / MSE); +infinity when the inputs are identical.
double psnr(const Matrix& ref, const Matrix& estimate, double peak = 1.0);
double psnr(const Vector& ref, const Vector& estimate, double peak = 1.0);

struct EvalReport {
  std::string transform_id;
  double lambda = 1.0;  // scale applied to the transform (beta)
  double sigma = 0.0;
  std::vector<double> psnr;        // per sample; +inf marks exact reconstruction
  std::vector<double> noisy_psnr;  // per sample PSNR of the noisy input
  std::vector<double> loss;        // per sample 1/2 ||x* - x||^2
  double mean_psnr = 0.0;
  double mean_noisy_psnr = 0.0;
  double mean_loss = 0.0;

  std::size_t infinite_count() const;
};

// Denoises every y with admm_denoise(W, y, beta) in parallel.
EvalReport denoise_testset(const Matrix& w, double beta, const std::vector<TrainingPair>& pairs,
                           const AdmmParams& params, std::string transform_id = "W", double sigma = 0.0);

// Per-sample CSV (index,psnr,noisy_psnr,loss) followed by nothing else.
std::string format_report_csv(const EvalReport& report);
// Human-readable summary table for one or more reports.
std::string format_report_table(const std::vector<EvalReport>& reports);

// Extracts p x p patches, denoises each against W_stack (columns = p^2) and
// averages the overlaps back into an image.
Matrix denoise_image(const Matrix& w_stack, const Matrix& image_noisy, Eigen::Index p, Eigen::Index stride,
                     const AdmmParams& params, double beta = 1.0);

// Greedy matching: repeatedly pair the unmatched (W row, reference row) with
// the largest |normalized inner product|. Zero rows correlate 0. Returns the
// mean over reference rows (unmatched reference rows count as 0).
double filter_correlation(const Matrix& w, const Matrix& reference);

struct SweepDataSpec {
  SignalSpec signal;  // sigma is overwritten per sweep point
  std::size_t train_count = 200;
  std::size_t test_count = 20;
  std::uint64_t seed = 0;
};

struct SweepEntry {
  double sigma = 0.0;
  Matrix w;
  TrainLog log;
  EvalReport report;
};

// For each sigma: regenerate the data (same clean signals, noise scaled by
// sigma), train from base_config, evaluate on held-out pairs. When out_dir is
// non-empty, writes out_dir/sigma_<value>/{W.csv,train_log.csv,report.csv}.
std::vector<SweepEntry> noise_sweep(const std::vector<double>& sigmas, const TrainConfig& base_config,
                                    const SweepDataSpec& data, const std::filesystem::path& out_dir = {});

std::string sigma_dir_name(double sigma);

}  // namespace blorc
