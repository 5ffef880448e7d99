#include "blorc/eval.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "blorc/errors.hpp"
#include "blorc/io.hpp"
#include "blorc/parallel.hpp"

namespace blorc {

namespace {

double psnr_of(const double* a, const double* b, Eigen::Index count, double peak) {
  if (!(peak > 0.0)) throw InvalidInput("psnr: peak must be positive");
  if (count == 0) throw InvalidInput("psnr: empty input");
  double sse = 0.0;
  for (Eigen::Index i = 0; i < count; ++i) {
    const double d = a[i] - b[i];
    sse += d * d;
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / static_cast<double>(count);
  return 10.0 * std::log10(peak * peak / mse);
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

double psnr(const Matrix& ref, const Matrix& estimate, double peak) {
  if (ref.rows() != estimate.rows() || ref.cols() != estimate.cols()) throw InvalidInput("psnr: shape mismatch");
  return psnr_of(ref.data(), estimate.data(), ref.size(), peak);
}

double psnr(const Vector& ref, const Vector& estimate, double peak) {
  if (ref.size() != estimate.size()) throw InvalidInput("psnr: shape mismatch");
  return psnr_of(ref.data(), estimate.data(), ref.size(), peak);
}

std::size_t EvalReport::infinite_count() const {
  std::size_t c = 0;
  for (const double v : psnr) c += std::isinf(v) ? 1 : 0;
  return c;
}

EvalReport denoise_testset(const Matrix& w, double beta, const std::vector<TrainingPair>& pairs,
                           const AdmmParams& params, std::string transform_id, double sigma) {
  if (pairs.empty()) throw InvalidInput("denoise_testset: no pairs");
  validate_pairs(pairs, w.cols());
  EvalReport r;
  r.transform_id = std::move(transform_id);
  r.lambda = beta;
  r.sigma = sigma;
  r.psnr.resize(pairs.size());
  r.noisy_psnr.resize(pairs.size());
  r.loss.resize(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    const DenoiseResult d = admm_denoise(w, pairs[i].y_noisy, beta, params);
    r.psnr[i] = psnr(pairs[i].x_clean, d.x_star);
    r.noisy_psnr[i] = psnr(pairs[i].x_clean, pairs[i].y_noisy);
    r.loss[i] = 0.5 * (d.x_star - pairs[i].x_clean).squaredNorm();
  });
  r.mean_psnr = mean_of(r.psnr);
  r.mean_noisy_psnr = mean_of(r.noisy_psnr);
  r.mean_loss = mean_of(r.loss);
  return r;
}

std::string format_report_csv(const EvalReport& report) {
  std::ostringstream os;
  os.precision(17);
  os << "index,psnr,noisy_psnr,loss\n";
  for (std::size_t i = 0; i < report.psnr.size(); ++i)
    os << i << ',' << report.psnr[i] << ',' << report.noisy_psnr[i] << ',' << report.loss[i] << '\n';
  return os.str();
}

std::string format_report_table(const std::vector<EvalReport>& reports) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %10s %8s %8s %12s %12s %10s\n", "transform", "lambda", "sigma", "samples",
                "mean_psnr", "noisy_psnr", "mean_loss");
  os << line;
  for (const auto& r : reports) {
    std::snprintf(line, sizeof line, "%-24s %10.4g %8.4g %8zu %12.4f %12.4f %10.4g\n", r.transform_id.c_str(),
                  r.lambda, r.sigma, r.psnr.size(), r.mean_psnr, r.mean_noisy_psnr, r.mean_loss);
    os << line;
  }
  return os.str();
}

Matrix denoise_image(const Matrix& w_stack, const Matrix& image_noisy, Eigen::Index p, Eigen::Index stride,
                     const AdmmParams& params, double beta) {
  if (w_stack.cols() != p * p)
    throw InvalidInput("denoise_image: W_stack has " + std::to_string(w_stack.cols()) + " columns, expected p^2 = " +
                       std::to_string(p * p));
  auto [grid, patches] = extract_patches(image_noisy, p, stride);
  parallel_for(patches.size(), [&](std::size_t i) {
    patches[i] = admm_denoise(w_stack, patches[i], beta, params).x_star;
  });
  return aggregate_patches(grid, patches);
}

double filter_correlation(const Matrix& w, const Matrix& reference) {
  if (w.cols() != reference.cols()) throw InvalidInput("filter_correlation: column counts differ");
  const Eigen::Index kw = w.rows();
  const Eigen::Index kr = reference.rows();
  if (kr == 0) throw InvalidInput("filter_correlation: empty reference");

  Matrix corr = Matrix::Zero(kw, kr);
  for (Eigen::Index i = 0; i < kw; ++i) {
    const double ni = w.row(i).norm();
    if (ni == 0.0) continue;
    for (Eigen::Index j = 0; j < kr; ++j) {
      const double nj = reference.row(j).norm();
      if (nj == 0.0) continue;
      corr(i, j) = std::min(1.0, std::abs(w.row(i).dot(reference.row(j))) / (ni * nj));
    }
  }

  std::vector<bool> used_w(static_cast<std::size_t>(kw), false);
  std::vector<bool> used_r(static_cast<std::size_t>(kr), false);
  double total = 0.0;
  for (Eigen::Index m = 0; m < std::min(kw, kr); ++m) {
    double best = -1.0;
    Eigen::Index bi = 0;
    Eigen::Index bj = 0;
    for (Eigen::Index i = 0; i < kw; ++i) {
      if (used_w[static_cast<std::size_t>(i)]) continue;
      for (Eigen::Index j = 0; j < kr; ++j) {
        if (used_r[static_cast<std::size_t>(j)]) continue;
        if (corr(i, j) > best) {
          best = corr(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    used_w[static_cast<std::size_t>(bi)] = true;
    used_r[static_cast<std::size_t>(bj)] = true;
    total += best;
  }
  return total / static_cast<double>(kr);
}

std::string sigma_dir_name(double sigma) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "sigma_%g", sigma);
  return buf;
}

std::vector<SweepEntry> noise_sweep(const std::vector<double>& sigmas, const TrainConfig& base_config,
                                    const SweepDataSpec& data, const std::filesystem::path& out_dir) {
  if (sigmas.empty()) throw InvalidInput("noise_sweep: no sigma values");
  if (data.train_count == 0 || data.test_count == 0) throw InvalidInput("noise_sweep: empty train or test set");
  for (const double s : sigmas)
    if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidInput("noise_sweep: sigma must be finite and >= 0");
  base_config.validate();

  std::vector<SweepEntry> out;
  for (const double sigma : sigmas) {
    SignalSpec spec = data.signal;
    spec.sigma = sigma;
    const auto train = make_pairs(spec, data.train_count, data.seed, 0);
    const auto test = make_pairs(spec, data.test_count, data.seed, data.train_count);
    TrainResult tr = blorc_train(train, base_config);
    AdmmParams eval_params = base_config.admm;
    eval_params.sign_threshold = base_config.sign_threshold;
    SweepEntry e{sigma, std::move(tr.w), std::move(tr.log), {}};
    e.report = denoise_testset(e.w, 1.0, test, eval_params, "blorc", sigma);
    if (!out_dir.empty()) {
      const auto dir = out_dir / sigma_dir_name(sigma);
      std::filesystem::create_directories(dir);
      io::write_csv(dir / "W.csv", e.w);
      write_train_log(dir / "train_log.csv", e.log);
      io::write_file(dir / "report.csv", format_report_csv(e.report));
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace blorc
