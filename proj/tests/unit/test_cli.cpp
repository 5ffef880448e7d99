#include <gtest/gtest.h>

#include <filesystem>
#include <string>
#include <vector>

#include "blorc/cli.hpp"
#include "blorc/data.hpp"
#include "blorc/io.hpp"
#include "blorc/train.hpp"

using namespace blorc;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "blorc");
  return cli::run(args);
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("blorc_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string str(const fs::path& p) { return p.string(); }

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"no-such-command"}), 2);
  EXPECT_EQ(run({"gen-data", "--bogus"}), 2);
  EXPECT_EQ(run({"--help"}), 0);
}

TEST(Cli, GenDataIsReproducible) {
  const fs::path d = scratch("gen");
  for (const char* name : {"a", "b"})
    ASSERT_EQ(run({"gen-data", "--n", "12", "--count", "5", "--seed", "9", "--out", str(d / name)}), 0);
  for (const auto& entry : fs::directory_iterator(d / "a")) {
    const fs::path other = d / "b" / entry.path().filename();
    ASSERT_TRUE(fs::exists(other));
    EXPECT_EQ(io::read_file(entry.path()), io::read_file(other)) << entry.path();
  }
  const auto pairs = io::read_dataset(d / "a");
  ASSERT_EQ(pairs.size(), 5u);
  EXPECT_EQ(pairs[0].x_clean.size(), 12);
}

TEST(Cli, GenDataNoiselessAndImagePatches) {
  const fs::path d = scratch("gen0");
  ASSERT_EQ(run({"gen-data", "--kind", "dct", "--n", "8", "--count", "3", "--sigma", "0", "--out", str(d / "x")}), 0);
  for (const auto& p : io::read_dataset(d / "x")) EXPECT_EQ(p.x_clean, p.y_noisy);
  ASSERT_EQ(run({"gen-data", "--kind", "image-patches", "--image-size", "16", "--patch", "4", "--stride", "4",
                 "--sigma255", "25", "--out", str(d / "img")}),
            0);
  EXPECT_EQ(io::read_dataset(d / "img").size(), 16u);
  EXPECT_TRUE(fs::exists(d / "img" / "clean.pgm"));
  EXPECT_EQ(run({"gen-data", "--kind", "wavelets", "--out", str(d / "bad")}), 2);
}

TEST(Cli, TrainConfigResumeAndOverrides) {
  const fs::path d = scratch("train");
  ASSERT_EQ(run({"gen-data", "--n", "10", "--count", "20", "--seed", "3", "--out", str(d / "data")}), 0);
  io::write_file(d / "cfg.json", R"({"batch_size": 10, "epochs": 4, "lr": 0.05, "init": "identity"})");
  ASSERT_EQ(run({"train", "--config", str(d / "cfg.json"), "--data", str(d / "data"), "--epochs", "3",
                 "--checkpoint-every", "1", "--out", str(d / "full")}),
            0);
  const std::string log = io::read_file(d / "full" / "train_log.csv");
  EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 4);  // flag beat the config's 4 epochs
  EXPECT_TRUE(fs::exists(d / "full" / "checkpoints" / "W_epoch_0003.csv"));

  ASSERT_EQ(run({"train", "--config", str(d / "cfg.json"), "--data", str(d / "data"), "--epochs", "3", "--init",
                 "file", "--init-file", str(d / "full" / "checkpoints" / "W_epoch_0001.csv"), "--start-epoch", "1",
                 "--out", str(d / "resumed")}),
            0);
  EXPECT_EQ(io::read_csv(d / "full" / "W.csv"), io::read_csv(d / "resumed" / "W.csv"));

  io::write_file(d / "bad.json", R"({"batch_size": 10, "learning_rate_typo": 1})");
  EXPECT_EQ(run({"train", "--config", str(d / "bad.json"), "--data", str(d / "data"), "--out", str(d / "x")}), 2);
  io::write_file(d / "broken.json", "{");
  EXPECT_EQ(run({"train", "--config", str(d / "broken.json"), "--data", str(d / "data"), "--out", str(d / "x")}), 2);
  EXPECT_NE(run({"train", "--data", str(d / "missing"), "--out", str(d / "x")}), 0);
}

TEST(Cli, TrainZeroInitOnCleanDataHasZeroLoss) {
  const fs::path d = scratch("train0");
  ASSERT_EQ(run({"gen-data", "--n", "8", "--count", "6", "--sigma", "0", "--out", str(d / "data")}), 0);
  ASSERT_EQ(run({"train", "--data", str(d / "data"), "--init", "zeros", "--epochs", "2", "--batch-size", "3",
                 "--out", str(d / "o")}),
            0);
  EXPECT_EQ(io::read_csv(d / "o" / "W.csv"), Matrix::Zero(8, 8));
}

TEST(Cli, GradcheckReport) {
  const fs::path d = scratch("gc");
  ASSERT_EQ(run({"gradcheck", "--n", "6", "--instances", "3", "--gamma", "1e-4", "--out", str(d / "gc.csv")}), 0);
  const std::string csv = io::read_file(d / "gc.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "instance,n,seed,max_abs_err,blorc_time_ms,fd_time_ms,threshold_margin,misclassified_rows,excluded");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(Cli, DenoiseVectorAndImage) {
  const fs::path d = scratch("dn");
  io::write_csv(d / "I.csv", Matrix::Identity(4, 4));
  Vector y(4);
  y << 0.1, -2.0, 0.5, 3.0;
  io::write_vector_csv(d / "y.csv", y);
  ASSERT_EQ(run({"denoise", "--w", str(d / "I.csv"), "--input", str(d / "y.csv"), "--beta", "1", "--out",
                 str(d / "x.csv")}),
            0);
  const Vector x = io::read_vector_csv(d / "x.csv");
  Vector expect(4);
  expect << 0.0, -1.0, 0.0, 2.0;
  EXPECT_LE((x - expect).cwiseAbs().maxCoeff(), 1e-8);

  io::save_pgm(d / "img.pgm", gen_striped_image(10, 12, 4, 2));
  ASSERT_EQ(run({"denoise", "--w", str(d / "I.csv"), "--input", str(d / "img.pgm"), "--out", str(d / "o.pgm")}), 0);
  const Matrix out = io::load_pgm(d / "o.pgm");
  EXPECT_EQ(out.rows(), 10);
  EXPECT_EQ(out.cols(), 12);
  EXPECT_NE(run({"denoise", "--w", str(d / "nope.csv"), "--input", str(d / "y.csv"), "--out", str(d / "z.csv")}),
            0);
  io::write_csv(d / "I3.csv", Matrix::Identity(3, 3));
  EXPECT_EQ(run({"denoise", "--w", str(d / "I3.csv"), "--input", str(d / "y.csv"), "--out", str(d / "z.csv")}), 2);
}

TEST(Cli, EvalTable) {
  const fs::path d = scratch("eval");
  ASSERT_EQ(run({"gen-data", "--n", "12", "--count", "8", "--seed", "1", "--out", str(d / "train")}), 0);
  ASSERT_EQ(run({"gen-data", "--n", "12", "--count", "4", "--seed", "2", "--out", str(d / "test")}), 0);
  io::write_csv(d / "W.csv", Matrix::Identity(12, 12));
  ASSERT_EQ(run({"eval", "--data", str(d / "test"), "--train", str(d / "train"), "--w", str(d / "W.csv"), "--tv",
                 "--dct", "--unsupervised", "--unsup-iters", "20", "--out", str(d / "summary.csv")}),
            0);
  const std::string csv = io::read_file(d / "summary.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "transform,lambda,sigma,samples,mean_psnr,noisy_psnr,mean_loss");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST(Cli, SweepNoise) {
  const fs::path d = scratch("sweep");
  ASSERT_EQ(run({"sweep-noise", "--sigmas", "0.05,0.1", "--n", "8", "--count", "10", "--test-count", "3",
                 "--epochs", "2", "--batch-size", "5", "--out", str(d)}),
            0);
  EXPECT_TRUE(fs::exists(d / "sigma_0.05" / "W.csv"));
  EXPECT_TRUE(fs::exists(d / "sigma_0.1" / "report.csv"));
  const std::string csv = io::read_file(d / "summary.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}
