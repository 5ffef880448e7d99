#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "../oracles.hpp"
#include "blorc/baselines.hpp"
#include "blorc/data.hpp"
#include "blorc/errors.hpp"
#include "blorc/io.hpp"

using namespace blorc;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("blorc_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}
}  // namespace

TEST(PiecewiseConstant, SinglePieceIsConstantOne) {
  EXPECT_EQ(gen_piecewise_constant(9, 1, 4), Vector::Ones(9));
}

TEST(PiecewiseConstant, TwoPiecesHaveOneJump) {
  const Vector x = gen_piecewise_constant(8, 2, 17);
  const Vector d = finite_difference_matrix(8) * x;
  EXPECT_EQ((d.array() != 0.0).count(), 1);
  EXPECT_EQ(x, gen_piecewise_constant(8, 2, 17));
}

TEST(PiecewiseConstant, PeakIsExactlyOneAndLevelsInUnitInterval) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Vector x = gen_piecewise_constant(32, 1 + seed % 8, seed);
    EXPECT_EQ(x.maxCoeff(), 1.0);
    EXPECT_GT(x.minCoeff(), 0.0);
    EXPECT_EQ(((finite_difference_matrix(32) * x).array() != 0.0).count(),
              static_cast<Eigen::Index>(seed % 8));
  }
  EXPECT_THROW(gen_piecewise_constant(4, 5, 0), InvalidInput);
  EXPECT_THROW(gen_piecewise_constant(4, 0, 0), InvalidInput);
}

TEST(DctSparse, HarmonicCountAndPeak) {
  const Matrix c = dct_matrix(24);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Eigen::Index h = 1 + seed % 6;
    const Vector x = gen_dct_sparse(24, h, seed);
    EXPECT_NEAR(x.cwiseAbs().maxCoeff(), 1.0, 1e-15);
    EXPECT_EQ(((c * x).array().abs() > 1e-10).count(), h);
    EXPECT_EQ(x, gen_dct_sparse(24, h, seed));
  }
}

TEST(DctSparse, SingleDcHarmonicIsConstant) {
  // Find a seed whose only frequency is DC.
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Vector x = gen_dct_sparse(6, 1, seed);
    const Vector coeffs = dct_matrix(6) * x;
    if (std::abs(coeffs(0)) > 1e-10) {
      EXPECT_LE((x.array() - x(0)).abs().maxCoeff(), 1e-12);
      return;
    }
  }
  FAIL() << "no DC-only draw found";
}

TEST(AddNoise, ZeroSigmaIsIdentityAndSeedsReproduce) {
  const Vector x = Vector::LinSpaced(10, 0, 1);
  EXPECT_EQ(add_noise(x, 0.0, 3), x);
  EXPECT_EQ(add_noise(x, 0.2, 3), add_noise(x, 0.2, 3));
  EXPECT_NE(add_noise(x, 0.2, 3), add_noise(x, 0.2, 4));
  EXPECT_THROW(add_noise(x, -0.1, 3), InvalidInput);
}

TEST(AddNoise, SampleVarianceMatches) {
  const double sigma = 0.3;
  const Vector e = add_noise(Vector(Vector::Zero(100000)), sigma, 11);
  const double mean = e.mean();
  const double var = (e.array() - mean).square().sum() / static_cast<double>(e.size() - 1);
  EXPECT_NEAR(var, sigma * sigma, 0.05 * sigma * sigma);
}

TEST(MakePairs, IndependentOfBatchingAndNoiseLevel) {
  SignalSpec spec{SignalKind::kPiecewise, 16};
  const auto all = make_pairs(spec, 6, 9);
  const auto tail = make_pairs(spec, 3, 9, 3);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(all[3 + i].x_clean, tail[i].x_clean);
    EXPECT_EQ(all[3 + i].y_noisy, tail[i].y_noisy);
  }
  spec.sigma = 0.0;
  const auto clean = make_pairs(spec, 6, 9);
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(clean[i].x_clean, all[i].x_clean);
    EXPECT_EQ(clean[i].y_noisy, clean[i].x_clean);
  }
}

TEST(Patches, WholeImageSinglePatch) {
  std::mt19937_64 gen(1);
  const Matrix img = oracle::gaussian(8, 8, gen);
  const auto [grid, patches] = extract_patches(img, 8, 7);
  ASSERT_EQ(patches.size(), 1u);
  for (Eigen::Index r = 0; r < 8; ++r)
    for (Eigen::Index c = 0; c < 8; ++c) EXPECT_EQ(patches[0](r * 8 + c), img(r, c));
}

TEST(Patches, BorderFlushOrigins) {
  const PatchGrid g = make_patch_grid(9, 9, 8, 7);
  using O = std::pair<Eigen::Index, Eigen::Index>;
  EXPECT_EQ(g.origins, (std::vector<O>{{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
  EXPECT_EQ(patch_offsets(256, 8, 7).back(), 248);
  EXPECT_THROW(make_patch_grid(5, 5, 6, 1), InvalidInput);
  EXPECT_THROW(make_patch_grid(5, 5, 2, 0), InvalidInput);
}

TEST(Patches, RoundTripIsExact) {
  std::mt19937_64 gen(2);
  for (int t = 0; t < 10; ++t) {
    const Matrix img = oracle::gaussian(10 + t, 13 + 2 * t, gen);
    const Eigen::Index p = 2 + t % 5;
    const auto [grid, patches] = extract_patches(img, p, 1 + t % 4);
    EXPECT_EQ(aggregate_patches(grid, patches), img);
  }
}

TEST(Patches, ConstantPatchesAndSinglePatchPlacement) {
  const PatchGrid grid = make_patch_grid(7, 7, 3, 2);
  const std::vector<Vector> patches(grid.origins.size(), Vector::Constant(9, 0.3));
  EXPECT_EQ(aggregate_patches(grid, patches), Matrix::Constant(7, 7, 0.3));

  const PatchGrid one = make_patch_grid(3, 3, 3, 1);
  const Vector v = Vector::LinSpaced(9, 1, 9);
  const Matrix out = aggregate_patches(one, {v});
  EXPECT_EQ(out(0, 2), 3.0);
  EXPECT_EQ(out(2, 0), 7.0);
  EXPECT_THROW(aggregate_patches(grid, {}), InvalidInput);
}

TEST(Patches, OverlapsAreAveraged) {
  const PatchGrid grid = make_patch_grid(1, 3, 1, 1);
  // 1-pixel patches never overlap; use 2x2 patches on a 2x3 image instead.
  const PatchGrid g2 = make_patch_grid(2, 3, 2, 1);
  ASSERT_EQ(g2.origins.size(), 2u);
  const Matrix out = aggregate_patches(g2, {Vector::Constant(4, 1.0), Vector::Constant(4, 3.0)});
  EXPECT_DOUBLE_EQ(out(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(out(0, 1), 2.0);
  EXPECT_DOUBLE_EQ(out(1, 2), 3.0);
  EXPECT_EQ(grid.origins.size(), 3u);
}

TEST(StripedImage, Layout) {
  const Matrix img = gen_striped_image(4, 8, 4, 1);
  EXPECT_EQ(img(0, 0), 1.0);
  EXPECT_EQ(img(3, 4), 1.0);
  EXPECT_EQ(img(2, 1), 0.0);
  const Matrix diag = gen_striped_image(4, 4, 4, 1, true);
  EXPECT_EQ(diag(1, 3), 1.0);
  EXPECT_EQ(diag(1, 2), 0.0);
}

TEST(Csv, RoundTripIsBitExact) {
  std::mt19937_64 gen(3);
  const Matrix m = oracle::gaussian(5, 7, gen, 1e3);
  const fs::path dir = scratch("csv");
  io::write_csv(dir / "m.csv", m);
  EXPECT_EQ(io::read_csv(dir / "m.csv"), m);
  const Vector v = oracle::gaussian_vec(6, gen);
  io::write_vector_csv(dir / "v.csv", v);
  EXPECT_EQ(io::read_vector_csv(dir / "v.csv"), v);
  io::write_file(dir / "row.csv", "1,2,3\n");
  EXPECT_EQ(io::read_vector_csv(dir / "row.csv"), Vector::LinSpaced(3, 1, 3));
}

TEST(Csv, ParseErrorsCarryOffsets) {
  try {
    io::parse_csv("1,2\n3,x\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 6u);
  }
  EXPECT_THROW(io::parse_csv("1,2\n3\n"), ParseError);
}

TEST(Pgm, PlainAndBinaryRoundTrip) {
  const Matrix img = gen_striped_image(5, 6, 3, 1) * 0.5 + Matrix::Constant(5, 6, 0.2);
  const Matrix back = io::parse_pgm(io::format_pgm(img));
  EXPECT_LE((back - img).cwiseAbs().maxCoeff(), 0.5 / 255.0);
  const Matrix plain = io::parse_pgm("P2\n# comment\n3 2\n255\n0 128 255\n255 0 51\n");
  EXPECT_EQ(plain.rows(), 2);
  EXPECT_EQ(plain.cols(), 3);
  EXPECT_DOUBLE_EQ(plain(0, 2), 1.0);
  EXPECT_DOUBLE_EQ(plain(1, 2), 0.2);
  // writing quantized values and reading them back is exact
  EXPECT_EQ(io::parse_pgm(io::format_pgm(plain)), plain);
}

TEST(Pgm, MalformedHeaderReportsByteOffset) {
  try {
    io::parse_pgm("P7\n3 2\n255\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 0u);
  }
  try {
    io::parse_pgm("P2\n3 x\n255\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 5u);
  }
  EXPECT_THROW(io::parse_pgm("P2\n1 1\n65535\n0\n"), ParseError);
  EXPECT_THROW(io::parse_pgm("P5\n2 2\n255\n\x01"), ParseError);
}

TEST(Dataset, RoundTripAndPgmMembers) {
  const fs::path dir = scratch("dataset");
  const auto pairs = make_pairs(SignalSpec{SignalKind::kDct, 12}, 5, 1);
  io::write_dataset(dir, pairs);
  const auto back = io::read_dataset(dir);
  ASSERT_EQ(back.size(), pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    EXPECT_EQ(back[i].x_clean, pairs[i].x_clean);
    EXPECT_EQ(back[i].y_noisy, pairs[i].y_noisy);
  }

  const fs::path img = scratch("dataset_pgm");
  io::write_file(img / "index.txt", "a\n");
  io::write_file(img / "a_clean.pgm", "P2\n2 2\n255\n0 255\n255 0\n");
  io::write_file(img / "a_noisy.pgm", "P2\n2 2\n255\n10 245\n250 5\n");
  const auto imgs = io::read_dataset(img);
  ASSERT_EQ(imgs.size(), 1u);
  EXPECT_EQ(imgs[0].x_clean, Vector::Map(std::vector<double>{0, 1, 1, 0}.data(), 4));
}
