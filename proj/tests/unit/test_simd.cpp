#include <gtest/gtest.h>

#include <cstring>
#include <vector>

#include "defocus/psf.hpp"
#include "defocus/simd.hpp"
#include "support.hpp"

using namespace defocus;
using testing_support::rng;
using testing_support::uniform;

namespace {

struct ForceLevel {
  explicit ForceLevel(simd::Level level) { simd::force_level(level); }
  ~ForceLevel() { simd::force_level(std::nullopt); }
};

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST(Simd, ScalarAlwaysAvailableAndFirst) {
  const auto levels = simd::available_levels();
  ASSERT_FALSE(levels.empty());
  EXPECT_EQ(levels.front(), simd::Level::scalar);
  EXPECT_EQ(simd::name(simd::Level::scalar), "scalar");
  EXPECT_EQ(simd::name(simd::Level::avx2), "avx2");
  EXPECT_EQ(simd::name(simd::Level::neon), "neon");
}

TEST(Simd, ForceLevelRoundTrip) {
  for (auto level : simd::available_levels()) {
    ForceLevel guard(level);
    EXPECT_EQ(simd::active_level(), level);
    EXPECT_EQ(simd::active_kernels().level, level);
  }
}

TEST(Simd, UnavailableLevelIsRejected) {
  const auto levels = simd::available_levels();
  for (auto level : {simd::Level::avx2, simd::Level::neon}) {
    if (std::find(levels.begin(), levels.end(), level) == levels.end()) {
      EXPECT_ANY_THROW(simd::force_level(level));
    }
  }
  simd::force_level(std::nullopt);
}

TEST(Simd, CorrelateMatchesScalarBitForBit) {
  auto g = rng(20);
  const auto reference = simd::kernels_for(simd::Level::scalar);
  for (auto level : simd::available_levels()) {
    const auto fk = simd::kernels_for(level);
    for (std::size_t taps : {1u, 3u, 5u, 7u, 13u, 31u}) {
      for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 33u, 100u}) {
        std::vector<double> in(n + taps - 1), w(taps);
        for (double& v : in) v = uniform(g, -1, 1);
        for (double& v : w) v = uniform(g, 0, 1);
        std::vector<double> a(n), b(n);
        reference.correlate(in.data(), n, w.data(), taps, a.data());
        fk.correlate(in.data(), n, w.data(), taps, b.data());
        EXPECT_TRUE(bit_equal(a, b)) << simd::name(level) << " taps=" << taps << " n=" << n;
      }
    }
  }
}

TEST(Simd, CombineRowsMatchesScalarBitForBit) {
  auto g = rng(21);
  const auto reference = simd::kernels_for(simd::Level::scalar);
  for (auto level : simd::available_levels()) {
    const auto fk = simd::kernels_for(level);
    for (std::size_t taps : {1u, 3u, 9u, 25u}) {
      for (std::size_t n : {1u, 3u, 4u, 7u, 8u, 15u, 16u, 17u, 31u, 64u, 101u}) {
        std::vector<std::vector<double>> storage(taps, std::vector<double>(n));
        std::vector<const double*> rows(taps);
        for (std::size_t k = 0; k < taps; ++k) {
          for (double& v : storage[k]) v = uniform(g, -1, 1);
          rows[k] = storage[k].data();
        }
        // Repeated row pointers, as at clamped borders.
        if (taps > 2) rows[0] = rows[1];
        std::vector<double> w(taps);
        for (double& v : w) v = uniform(g, 0, 1);
        std::vector<double> a(n), b(n);
        reference.combine_rows(rows.data(), taps, w.data(), n, a.data());
        fk.combine_rows(rows.data(), taps, w.data(), n, b.data());
        EXPECT_TRUE(bit_equal(a, b)) << simd::name(level) << " taps=" << taps << " n=" << n;
      }
    }
  }
}

TEST(Simd, ConvolutionIdenticalAcrossLevels) {
  auto g = rng(22);
  const Image img = testing_support::random_image(g, 67, 45, 3);
  Image reference;
  {
    ForceLevel guard(simd::Level::scalar);
    reference = convolve(img, make_kernel(1.9));
  }
  for (auto level : simd::available_levels()) {
    ForceLevel guard(level);
    EXPECT_EQ(convolve(img, make_kernel(1.9)), reference) << simd::name(level);
  }
}
