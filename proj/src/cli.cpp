#include "blorc/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "blorc/baselines.hpp"
#include "blorc/data.hpp"
#include "blorc/errors.hpp"
#include "blorc/eval.hpp"
#include "blorc/gradient.hpp"
#include "blorc/io.hpp"
#include "blorc/parallel.hpp"
#include "blorc/train.hpp"

namespace blorc::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Raised for bad flags, bad config files and inconsistent parameters.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config;
  unsigned threads = 0;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "JSON file of option values; command-line flags take precedence");
  sub->add_option("--threads", c.threads, "Worker thread cap (0 = all cores)");
}

std::string json_scalar(const std::string& key, const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  throw UsageError("config key '" + key + "' must be a string, number, boolean or array of those");
}

// Keys may use '-' or '_'. A key only fills an option the command line left
// unset.
void apply_config(CLI::App* sub, const std::string& path) {
  json j;
  try {
    j = json::parse(io::read_file(path));
  } catch (const json::parse_error& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw UsageError("config " + path + ": top level must be an object");
  for (const auto& [key, value] : j.items()) {
    std::string name = key;
    std::replace(name.begin(), name.end(), '_', '-');
    if (name == "config") throw UsageError("config key 'config' is not allowed");
    CLI::Option* opt = sub->get_option_no_throw("--" + name);
    if (opt == nullptr) throw UsageError("unknown config key '" + key + "' for command " + sub->get_name());
    if (opt->count() > 0) continue;
    if (value.is_array()) {
      for (const auto& item : value) opt->add_result(json_scalar(key, item));
    } else {
      opt->add_result(json_scalar(key, value));
    }
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError("config key '" + key + "': " + e.what());
    }
  }
}

struct AdmmOpts {
  AdmmParams p;
  double tol = -1.0;
  bool fixed_rho = false;

  void add(CLI::App* sub) {
    sub->add_option("--rho", p.rho, "ADMM penalty parameter");
    sub->add_option("--max-iters", p.max_iters, "ADMM iteration budget");
    sub->add_option("--tol", tol, "ADMM primal and dual residual tolerance");
    sub->add_option("--sign-window", p.sign_stability_window, "Iterations the sign pattern must stay unchanged");
    sub->add_flag("--fixed-rho", fixed_rho, "Disable residual-balancing penalty updates");
  }
  AdmmParams params() const {
    AdmmParams out = p;
    if (tol > 0.0) out.primal_tol = out.dual_tol = tol;
    if (fixed_rho) out.adaptive_rho = false;
    out.validate();
    return out;
  }
};

SignalKind parse_kind(const std::string& kind) {
  if (kind == "piecewise") return SignalKind::kPiecewise;
  if (kind == "dct") return SignalKind::kDct;
  throw UsageError("unknown signal kind '" + kind + "' (expected piecewise or dct)");
}

double resolve_sigma(double sigma, double sigma255) {
  if (sigma255 >= 0.0) return sigma255 / 255.0;
  if (!(sigma >= 0.0)) throw UsageError("sigma must be >= 0");
  return sigma;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

// gen-data

struct GenDataOpts {
  Common common;
  std::string kind = "piecewise";
  Eigen::Index n = 64;
  std::size_t count = 4000;
  double sigma = 0.1;
  double sigma255 = -1.0;
  std::uint64_t seed = 0;
  std::string out;
  Eigen::Index min_parts = 2;
  Eigen::Index max_parts = 0;
  std::string image;
  Eigen::Index image_size = 64;
  Eigen::Index period = 8;
  Eigen::Index stripe_width = 3;
  bool diagonal = false;
  Eigen::Index patch = 8;
  Eigen::Index stride = 7;
};

void add_gen_data(CLI::App& app, GenDataOpts& o) {
  auto* sub = app.add_subcommand("gen-data", "Generate a synthetic training dataset");
  add_common(sub, o.common);
  sub->add_option("--kind", o.kind, "piecewise | dct | image-patches");
  sub->add_option("--n", o.n, "Signal length (1D kinds)");
  sub->add_option("--count", o.count, "Number of pairs (1D kinds)");
  sub->add_option("--sigma", o.sigma, "Noise standard deviation on the [0, 1] scale");
  sub->add_option("--sigma255", o.sigma255, "Noise standard deviation on the 0-255 scale (overrides --sigma)");
  sub->add_option("--seed", o.seed, "Root seed");
  sub->add_option("--out", o.out, "Output dataset directory");
  sub->add_option("--min-parts", o.min_parts, "Minimum pieces / harmonics per signal");
  sub->add_option("--max-parts", o.max_parts, "Maximum pieces / harmonics per signal (0 = max(min, n/8))");
  sub->add_option("--image", o.image, "Clean PGM image (image-patches; default: synthetic stripes)");
  sub->add_option("--image-size", o.image_size, "Side of the synthetic striped image");
  sub->add_option("--period", o.period, "Stripe period of the synthetic image");
  sub->add_option("--stripe-width", o.stripe_width, "Stripe width of the synthetic image");
  sub->add_flag("--diagonal", o.diagonal, "Diagonal instead of vertical stripes");
  sub->add_option("--patch", o.patch, "Patch side p (n = p^2)");
  sub->add_option("--stride", o.stride, "Patch stride");
}

void run_gen_data(const GenDataOpts& o) {
  require(!o.out.empty(), "gen-data: --out is required");
  const double sigma = resolve_sigma(o.sigma, o.sigma255);
  std::vector<TrainingPair> pairs;
  if (o.kind == "image-patches") {
    const Matrix clean = o.image.empty()
                             ? gen_striped_image(o.image_size, o.image_size, o.period, o.stripe_width, o.diagonal)
                             : io::load_pgm(o.image);
    const Matrix noisy = add_noise(clean, sigma, o.seed);
    const auto [grid, xs] = extract_patches(clean, o.patch, o.stride);
    const auto ys = extract_patches(noisy, o.patch, o.stride).second;
    for (std::size_t i = 0; i < xs.size(); ++i) pairs.push_back({xs[i], ys[i]});
    fs::create_directories(o.out);
    io::save_pgm(fs::path(o.out) / "clean.pgm", clean);
    io::write_csv(fs::path(o.out) / "noisy_image.csv", noisy);
  } else {
    SignalSpec spec;
    spec.kind = parse_kind(o.kind);
    spec.n = o.n;
    spec.min_parts = o.min_parts;
    spec.max_parts = o.max_parts;
    spec.sigma = sigma;
    require(o.count >= 1, "gen-data: --count must be >= 1");
    pairs = make_pairs(spec, o.count, o.seed);
  }
  io::write_dataset(o.out, pairs);
  std::cerr << "gen-data: wrote " << pairs.size() << " pairs (kind=" << o.kind
            << ", n=" << pairs.front().x_clean.size() << ", sigma=" << sigma << ") to " << o.out << "\n";
}

// train

struct TrainOpts {
  Common common;
  AdmmOpts admm;
  std::string data;
  std::string val;
  std::string out;
  std::size_t batch_size = TrainConfig{}.batch_size;
  int epochs = TrainConfig{}.epochs;
  double lr = TrainConfig{}.learning_rate;
  double gamma = TrainConfig{}.sign_threshold;
  std::string init = "identity";
  double init_scale = InitSpec{}.scale;
  Eigen::Index init_rows = 0;
  std::string init_file;
  int validation_every = 1;
  std::string on_failure = "skip";
  int checkpoint_every = 0;
  int start_epoch = 0;
  std::uint64_t seed = 0;
};

void add_train_options(CLI::App* sub, TrainOpts& o, bool with_data) {
  if (with_data) {
    sub->add_option("--data", o.data, "Training dataset directory");
    sub->add_option("--val", o.val, "Validation dataset directory");
    sub->add_option("--validation-every", o.validation_every, "Epochs between validation losses");
    sub->add_option("--on-failure", o.on_failure, "skip | abort when a sample's ADMM solve fails");
    sub->add_option("--checkpoint-every", o.checkpoint_every, "Epochs between W checkpoints (0 = off)");
    sub->add_option("--start-epoch", o.start_epoch, "First epoch to run (resume with --init file)");
  }
  sub->add_option("--out", o.out, "Output directory");
  sub->add_option("--batch-size", o.batch_size, "Minibatch size B");
  sub->add_option("--epochs", o.epochs, "Number of epochs E");
  sub->add_option("--lr", o.lr, "Learning rate alpha");
  sub->add_option("--gamma", o.gamma, "Sign threshold gamma");
  sub->add_option("--init", o.init, "identity | zeros | random | file");
  sub->add_option("--init-scale", o.init_scale, "Standard deviation of random initial entries");
  sub->add_option("--init-rows", o.init_rows, "Rows of a zeros/random initial W (0 = n)");
  sub->add_option("--init-file", o.init_file, "CSV initial W for --init file");
  sub->add_option("--seed", o.seed, "Root seed");
  o.admm.add(sub);
}

TrainConfig make_train_config(const TrainOpts& o) {
  TrainConfig c;
  c.batch_size = o.batch_size;
  c.epochs = o.epochs;
  c.learning_rate = o.lr;
  c.sign_threshold = o.gamma;
  c.admm = o.admm.params();
  c.rng_seed = o.seed;
  c.validation_every = o.validation_every;
  c.start_epoch = o.start_epoch;
  if (o.on_failure == "skip") {
    c.on_failure = FailurePolicy::kSkipSample;
  } else if (o.on_failure == "abort") {
    c.on_failure = FailurePolicy::kAbort;
  } else {
    throw UsageError("--on-failure must be skip or abort");
  }
  c.init.scale = o.init_scale;
  c.init.rows = o.init_rows;
  if (o.init == "identity") {
    c.init.kind = InitKind::kIdentity;
  } else if (o.init == "zeros") {
    c.init.kind = InitKind::kZeros;
  } else if (o.init == "random") {
    c.init.kind = InitKind::kRandomGaussian;
  } else if (o.init == "file") {
    require(!o.init_file.empty(), "--init file needs --init-file");
    c.init.kind = InitKind::kFromFile;
    c.init.path = o.init_file;
  } else {
    throw UsageError("unknown --init '" + o.init + "'");
  }
  if (o.checkpoint_every > 0) {
    require(!o.out.empty(), "--checkpoint-every needs --out");
    c.checkpoint_every = o.checkpoint_every;
    c.checkpoint_dir = fs::path(o.out) / "checkpoints";
  }
  try {
    c.validate();
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  return c;
}

void run_train(const TrainOpts& o) {
  require(!o.data.empty(), "train: --data is required");
  require(!o.out.empty(), "train: --out is required");
  const TrainConfig config = make_train_config(o);
  const auto data = io::read_dataset(o.data);
  if (data.empty()) throw UsageError("train: dataset " + o.data + " is empty");
  validate_pairs(data);
  std::vector<TrainingPair> val;
  if (!o.val.empty()) val = io::read_dataset(o.val);

  const TrainResult r = blorc_train(data, config, val.empty() ? nullptr : &val,
                                    [](int epoch, const Matrix&, const TrainLog& log) {
                                      std::cerr << "epoch " << epoch << " train_loss " << log.train_loss.back();
                                      if (!log.val_loss.empty() && log.val_loss.back().first == epoch)
                                        std::cerr << " val_loss " << log.val_loss.back().second;
                                      std::cerr << "\n";
                                    });
  fs::create_directories(o.out);
  io::write_csv(fs::path(o.out) / "W.csv", r.w);
  write_train_log(fs::path(o.out) / "train_log.csv", r.log);
  std::cerr << "train: wrote " << (fs::path(o.out) / "W.csv").string() << "\n";
}

// gradcheck

struct GradcheckOpts {
  Common common;
  AdmmOpts admm;
  std::string kind = "piecewise";
  Eigen::Index n = 36;
  std::size_t instances = 100;
  double step = 1e-6;
  double gamma = kDefaultSignThreshold;
  double sigma = 0.1;
  std::uint64_t seed = 0;
  std::string w;
  std::string out;
};

void add_gradcheck(CLI::App& app, GradcheckOpts& o) {
  auto* sub = app.add_subcommand("gradcheck", "Compare analytic gradients against central differences");
  add_common(sub, o.common);
  sub->add_option("--kind", o.kind, "piecewise | dct");
  sub->add_option("--n", o.n, "Signal length");
  sub->add_option("--instances", o.instances, "Number of random training pairs");
  sub->add_option("--step", o.step, "Central-difference step");
  sub->add_option("--gamma", o.gamma, "Sign threshold gamma");
  sub->add_option("--sigma", o.sigma, "Noise level of the random pairs");
  sub->add_option("--seed", o.seed, "Root seed");
  sub->add_option("--w", o.w, "CSV transform to check at (default identity)");
  sub->add_option("--out", o.out, "CSV report path");
  o.admm.add(sub);
}

void run_gradcheck(const GradcheckOpts& o) {
  require(!o.out.empty(), "gradcheck: --out is required");
  require(o.step > 0.0, "gradcheck: --step must be positive");
  SignalSpec spec;
  spec.kind = parse_kind(o.kind);
  spec.n = o.n;
  spec.sigma = o.sigma;
  const Matrix w = o.w.empty() ? Matrix(Matrix::Identity(o.n, o.n)) : io::read_csv(o.w);
  require(w.cols() == o.n, "gradcheck: W must have n columns");
  const AdmmParams params = o.admm.params();
  const AdmmParams fd = fd_admm_params();

  std::ostringstream csv;
  csv.precision(17);
  csv << "instance,n,seed,max_abs_err,blorc_time_ms,fd_time_ms,threshold_margin,misclassified_rows,excluded\n";
  double worst = 0.0;
  double time_sum = 0.0;
  std::size_t excluded = 0;
  for (std::size_t i = 0; i < o.instances; ++i) {
    const TrainingPair pair = make_pairs(spec, 1, o.seed, i).front();
    const GradientCheck c = gradient_check(w, pair, o.gamma, o.step, params, fd);
    csv << i << ',' << o.n << ',' << o.seed << ',' << c.max_abs_err << ',' << c.analytic_ms << ',' << c.fd_ms << ','
        << c.threshold_margin << ',' << c.misclassified_rows << ',' << (c.sign_boundary() ? 1 : 0) << '\n';
    time_sum += c.analytic_ms;
    if (c.sign_boundary()) {
      ++excluded;
    } else {
      worst = std::max(worst, c.max_abs_err);
    }
  }
  io::write_file(o.out, csv.str());
  std::cerr << "gradcheck: n=" << o.n << " instances=" << o.instances << " excluded=" << excluded
            << " max_abs_err=" << worst << " mean_blorc_ms=" << time_sum / static_cast<double>(o.instances) << "\n";
}

// denoise

struct DenoiseOpts {
  Common common;
  AdmmOpts admm;
  std::string w;
  std::string input;
  std::string out;
  double beta = 1.0;
  Eigen::Index patch = 0;
  Eigen::Index stride = 0;
};

void add_denoise(CLI::App& app, DenoiseOpts& o) {
  auto* sub = app.add_subcommand("denoise", "Denoise a signal (CSV) or an image (PGM) with a transform");
  add_common(sub, o.common);
  sub->add_option("--w", o.w, "CSV transform (W or a row-stacked W_stack)");
  sub->add_option("--input", o.input, "Noisy input: .csv vector or .pgm image");
  sub->add_option("--out", o.out, "Output path (.csv or .pgm)");
  sub->add_option("--beta", o.beta, "Regularization weight");
  sub->add_option("--patch", o.patch, "Patch side for images (0 = sqrt of W columns)");
  sub->add_option("--stride", o.stride, "Patch stride for images (0 = patch - 1)");
  o.admm.add(sub);
}

bool has_ext(const std::string& path, const char* ext) { return fs::path(path).extension() == ext; }

void run_denoise(const DenoiseOpts& o) {
  require(!o.w.empty() && !o.input.empty() && !o.out.empty(), "denoise: --w, --input and --out are required");
  require(o.beta > 0.0, "denoise: --beta must be positive");
  const Matrix w = io::read_csv(o.w);
  const AdmmParams params = o.admm.params();
  if (has_ext(o.input, ".pgm")) {
    Eigen::Index p = o.patch;
    if (p == 0) {
      p = static_cast<Eigen::Index>(std::lround(std::sqrt(static_cast<double>(w.cols()))));
      require(p * p == w.cols(), "denoise: W has " + std::to_string(w.cols()) + " columns, not a square patch");
    }
    require(w.cols() == p * p, "denoise: W columns do not match --patch squared");
    const Eigen::Index stride = o.stride > 0 ? o.stride : std::max<Eigen::Index>(1, p - 1);
    const Matrix img = io::load_pgm(o.input);
    const Matrix out = denoise_image(w, img, p, stride, params, o.beta);
    if (has_ext(o.out, ".csv")) {
      io::write_csv(o.out, out);
    } else {
      io::save_pgm(o.out, out);
    }
    std::cerr << "denoise: " << img.rows() << "x" << img.cols() << " image, p=" << p << ", stride=" << stride
              << " -> " << o.out << "\n";
  } else {
    const Vector y = io::read_vector_csv(o.input);
    require(y.size() == w.cols(), "denoise: input length " + std::to_string(y.size()) + " does not match W columns " +
                                      std::to_string(w.cols()));
    io::write_vector_csv(o.out, admm_denoise(w, y, o.beta, params).x_star);
    std::cerr << "denoise: length-" << y.size() << " signal -> " << o.out << "\n";
  }
}

// eval

struct EvalOpts {
  Common common;
  AdmmOpts admm;
  std::string data;
  std::string val;
  std::string train;
  std::vector<std::string> w;
  double beta = 1.0;
  bool tv = false;
  bool dct = false;
  bool unsupervised = false;
  GoldenSectionSpec gs;
  UnsupervisedParams unsup;
  std::uint64_t seed = 0;
  double sigma = 0.0;
  std::string out;
};

void add_eval(CLI::App& app, EvalOpts& o) {
  auto* sub = app.add_subcommand("eval", "Mean PSNR and loss of transforms on a test set");
  add_common(sub, o.common);
  sub->add_option("--data", o.data, "Test dataset directory");
  sub->add_option("--val", o.val, "Dataset used to tune baseline lambdas (default: --train, else --data)");
  sub->add_option("--train", o.train, "Training dataset (clean signals feed the unsupervised baseline)");
  sub->add_option("--w", o.w, "CSV transform(s) evaluated at --beta");
  sub->add_option("--beta", o.beta, "Regularization weight for --w transforms");
  sub->add_flag("--tv", o.tv, "Add the finite-difference baseline at its golden-section lambda");
  sub->add_flag("--dct", o.dct, "Add the DCT baseline at its golden-section lambda");
  sub->add_flag("--unsupervised", o.unsupervised, "Add the unsupervised orthogonal baseline");
  sub->add_option("--gs-lo", o.gs.lo, "Golden-section bracket low end");
  sub->add_option("--gs-hi", o.gs.hi, "Golden-section bracket high end");
  sub->add_option("--gs-tol", o.gs.tol, "Golden-section bracket width tolerance");
  sub->add_option("--gs-max-evals", o.gs.max_evals, "Golden-section evaluation budget");
  sub->add_option("--unsup-iters", o.unsup.iters, "Unsupervised ADMM iterations");
  sub->add_option("--unsup-rho", o.unsup.rho, "Unsupervised ADMM penalty");
  sub->add_option("--unsup-lambda", o.unsup.lambda, "Unsupervised soft-threshold weight");
  sub->add_option("--seed", o.seed, "Root seed");
  sub->add_option("--sigma", o.sigma, "Noise level recorded in the report");
  sub->add_option("--out", o.out, "Summary CSV path");
  o.admm.add(sub);
}

void run_eval(const EvalOpts& o) {
  require(!o.data.empty(), "eval: --data is required");
  require(!o.w.empty() || o.tv || o.dct || o.unsupervised, "eval: nothing to evaluate (give --w, --tv, --dct or --unsupervised)");
  const AdmmParams params = o.admm.params();
  const auto test = io::read_dataset(o.data);
  require(!test.empty(), "eval: test set is empty");
  const Eigen::Index n = validate_pairs(test);

  std::vector<TrainingPair> train;
  if (!o.train.empty()) train = io::read_dataset(o.train);
  std::vector<TrainingPair> val;
  if (!o.val.empty()) {
    val = io::read_dataset(o.val);
  } else if (!train.empty()) {
    val = train;
  } else if (o.tv || o.dct || o.unsupervised) {
    std::cerr << "eval: warning: tuning baseline lambdas on the test set (no --val or --train)\n";
    val = test;
  }

  std::vector<EvalReport> reports;
  for (const auto& path : o.w) {
    const Matrix w = io::read_csv(path);
    require(w.cols() == n, "eval: " + path + " has " + std::to_string(w.cols()) + " columns, signals have " +
                               std::to_string(n));
    reports.push_back(denoise_testset(w, o.beta, test, params, fs::path(path).filename().string(), o.sigma));
  }
  auto baseline = [&](const Matrix& w, const std::string& id) {
    const GoldenSectionResult g = golden_section_lambda(w, val, o.gs, params);
    reports.push_back(denoise_testset(w, g.x, test, params, id, o.sigma));
  };
  if (o.tv) baseline(finite_difference_matrix(n), "tv");
  if (o.dct) baseline(dct_matrix(n), "dct");
  if (o.unsupervised) {
    require(!train.empty(), "eval: --unsupervised needs --train");
    std::vector<Vector> clean;
    for (const auto& p : train) clean.push_back(p.x_clean);
    baseline(unsupervised_orthogonal_learn(clean, o.unsup, o.seed).w, "unsupervised");
  }

  std::cout << format_report_table(reports);
  if (!o.out.empty()) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "transform,lambda,sigma,samples,mean_psnr,noisy_psnr,mean_loss\n";
    for (const auto& r : reports)
      csv << r.transform_id << ',' << r.lambda << ',' << r.sigma << ',' << r.psnr.size() << ',' << r.mean_psnr << ','
          << r.mean_noisy_psnr << ',' << r.mean_loss << '\n';
    io::write_file(o.out, csv.str());
  }
}

// sweep-noise

struct SweepOpts {
  TrainOpts train;
  std::vector<double> sigmas{0.02, 0.05, 0.1, 0.2};
  std::string kind = "piecewise";
  Eigen::Index n = 32;
  std::size_t count = 200;
  std::size_t test_count = 20;
};

void add_sweep(CLI::App& app, SweepOpts& o) {
  auto* sub = app.add_subcommand("sweep-noise", "Train and evaluate one transform per noise level");
  add_common(sub, o.train.common);
  add_train_options(sub, o.train, false);
  sub->add_option("--sigmas", o.sigmas, "Noise levels")->delimiter(',');
  sub->add_option("--kind", o.kind, "piecewise | dct");
  sub->add_option("--n", o.n, "Signal length");
  sub->add_option("--count", o.count, "Training pairs per noise level");
  sub->add_option("--test-count", o.test_count, "Held-out pairs per noise level");
}

void run_sweep(const SweepOpts& o) {
  require(!o.train.out.empty(), "sweep-noise: --out is required");
  require(!o.sigmas.empty(), "sweep-noise: --sigmas is empty");
  const TrainConfig config = make_train_config(o.train);
  SweepDataSpec data;
  data.signal.kind = parse_kind(o.kind);
  data.signal.n = o.n;
  data.train_count = o.count;
  data.test_count = o.test_count;
  data.seed = o.train.seed;
  const auto entries = noise_sweep(o.sigmas, config, data, o.train.out);

  const Matrix fd = finite_difference_matrix(o.n);
  std::ostringstream csv;
  csv.precision(17);
  csv << "sigma,frobenius_norm,fd_correlation,final_train_loss,mean_psnr,noisy_psnr\n";
  for (const auto& e : entries) {
    csv << e.sigma << ',' << e.w.norm() << ',' << filter_correlation(e.w, fd) << ',' << e.log.train_loss.back() << ','
        << e.report.mean_psnr << ',' << e.report.mean_noisy_psnr << '\n';
    std::cerr << "sweep-noise: sigma=" << e.sigma << " |W|_F=" << e.w.norm()
              << " fd_corr=" << filter_correlation(e.w, fd) << " psnr=" << e.report.mean_psnr << "\n";
  }
  io::write_file(fs::path(o.train.out) / "summary.csv", csv.str());
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Bilevel learning of sparsifying analysis transforms", args.empty() ? "blorc" : args.front()};
  app.require_subcommand(1);

  GenDataOpts gen;
  add_gen_data(app, gen);
  TrainOpts train;
  {
    auto* sub = app.add_subcommand("train", "Learn a transform from a dataset by minibatch gradient descent");
    add_common(sub, train.common);
    add_train_options(sub, train, true);
  }
  GradcheckOpts grad;
  add_gradcheck(app, grad);
  DenoiseOpts den;
  add_denoise(app, den);
  EvalOpts ev;
  add_eval(app, ev);
  SweepOpts sweep;
  add_sweep(app, sweep);

  std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    const Common& common = name == "gen-data"    ? gen.common
                           : name == "train"     ? train.common
                           : name == "gradcheck" ? grad.common
                           : name == "denoise"   ? den.common
                           : name == "eval"      ? ev.common
                                                 : sweep.train.common;
    if (!common.config.empty()) apply_config(sub, common.config);
    set_max_threads(common.threads);

    if (name == "gen-data") run_gen_data(gen);
    else if (name == "train") run_train(train);
    else if (name == "gradcheck") run_gradcheck(grad);
    else if (name == "denoise") run_denoise(den);
    else if (name == "eval") run_eval(ev);
    else run_sweep(sweep);
  } catch (const UsageError& e) {
    std::cerr << name << ": error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidInput& e) {
    std::cerr << name << ": invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << name << ": failed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace blorc::cli
