#include <cmath>
#include <random>

#include "doctest.h"

#include "gridnav/metrics.hpp"

using namespace gridnav;

TEST_SUITE_BEGIN("metrics");

namespace {

IndexGrid grid_of(int w, int h, std::initializer_list<int> values) {
  IndexGrid g(w, h);
  int i = 0;
  for (int v : values) g.data()[i++] = v;
  return g;
}

ByteGrid mask_of(int w, int h, std::initializer_list<int> values) {
  ByteGrid g(w, h);
  int i = 0;
  for (int v : values) g.data()[i++] = static_cast<std::uint8_t>(v);
  return g;
}

// Independent two-pass union-find labelling for the instance oracle.
struct UnionFind {
  std::vector<int> parent;
  int find(int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

int count_components_8(const ByteGrid& mask) {
  const int w = mask.width(), h = mask.height();
  UnionFind uf;
  uf.parent.resize(w * h);
  for (int i = 0; i < w * h; ++i) uf.parent[i] = i;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (mask.at(y, x) == 0) continue;
      for (auto [dx, dy] : {std::pair{-1, 0}, {0, -1}, {-1, -1}, {1, -1}}) {
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || nx >= w || ny < 0) continue;
        if (mask.at(ny, nx) != 0) uf.unite(y * w + x, ny * w + nx);
      }
    }
  }
  int count = 0;
  for (int i = 0; i < w * h; ++i) {
    if (mask.data()[i] != 0 && uf.find(i) == i) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("miou of identical maps is one, of disjoint binary maps zero") {
  const IndexGrid a = grid_of(2, 2, {0, 1, 1, 0});
  CHECK(miou(a, a, 2) == doctest::Approx(1.0).epsilon(0));

  const IndexGrid b = grid_of(2, 2, {1, 0, 0, 1});
  CHECK(miou(b, a, 2) == doctest::Approx(0.0).epsilon(0));
}

TEST_CASE("miou matches the 7/12 hand computation") {
  const IndexGrid gt = grid_of(2, 2, {0, 0, 1, 1});
  const IndexGrid pred = grid_of(2, 2, {0, 1, 1, 1});
  CHECK(miou(pred, gt, 2) == doctest::Approx(7.0 / 12.0).epsilon(1e-15));
}

TEST_CASE("miou ignores classes absent from both maps") {
  const IndexGrid gt = grid_of(2, 1, {0, 1});
  const IndexGrid pred = grid_of(2, 1, {0, 1});
  CHECK(miou(pred, gt, 5) == doctest::Approx(1.0).epsilon(0));
}

TEST_CASE("miou is symmetric and permutation-stable") {
  std::mt19937 rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    IndexGrid a(6, 5), b(6, 5);
    for (auto& v : a.data()) v = static_cast<std::int32_t>(rng() % 3);
    for (auto& v : b.data()) v = static_cast<std::int32_t>(rng() % 3);
    CHECK(miou(a, b, 3) == doctest::Approx(miou(b, a, 3)).epsilon(1e-15));

    // Swap labels 0 and 2 in both maps; the mean cannot change.
    IndexGrid ap = a, bp = b;
    for (auto& v : ap.data()) v = v == 0 ? 2 : (v == 2 ? 0 : v);
    for (auto& v : bp.data()) v = v == 0 ? 2 : (v == 2 ? 0 : v);
    CHECK(miou(ap, bp, 3) == doctest::Approx(miou(a, b, 3)).epsilon(1e-12));
  }
}

TEST_CASE("miou range and error paths") {
  const IndexGrid a = grid_of(2, 1, {0, 1});
  CHECK_THROWS_AS(miou(a, grid_of(1, 1, {0}), 2), std::invalid_argument);
  CHECK_THROWS_AS(miou(a, grid_of(2, 1, {0, 7}), 2), std::out_of_range);
}

TEST_CASE("instance matching applies the strict 50% rule") {
  // One 2x2 gt instance; prediction A covers 3 of its own 4 px (success),
  // prediction B misses entirely (false positive).
  const ByteGrid gt = mask_of(8, 2, {1, 1, 0, 0, 0, 0, 0, 0,
                                     1, 1, 0, 0, 0, 0, 0, 0});
  const ByteGrid pred = mask_of(8, 2, {0, 1, 1, 0, 0, 0, 1, 1,
                                       0, 1, 1, 0, 0, 0, 1, 1});
  const FrameInstanceMatch match = match_instances(pred, gt);
  CHECK(match.gt_instances == 1);
  REQUIRE(match.predictions.size() == 2);
  CHECK(match.predictions[0].pixels == 4);
  CHECK(match.predictions[0].overlap == 2);
  CHECK_FALSE(match.predictions[0].success);  // exactly 50% is not enough
  CHECK_FALSE(match.predictions[0].false_positive);
  CHECK(match.predictions[1].overlap == 0);
  CHECK(match.predictions[1].false_positive);
}

TEST_CASE("odr counts successes over ground-truth instances") {
  FrameInstanceMatch all_good;
  all_good.gt_instances = 4;
  for (int i = 0; i < 4; ++i) all_good.predictions.push_back({4, 4, true, false});
  const FrameInstanceMatch frames1[1] = {all_good};
  CHECK(odr(frames1) == doctest::Approx(1.0).epsilon(0));

  FrameInstanceMatch half;
  half.gt_instances = 4;
  half.predictions.push_back({4, 3, true, false});
  half.predictions.push_back({4, 3, true, false});
  const FrameInstanceMatch frames2[1] = {half};
  CHECK(odr(frames2) == doctest::Approx(0.5).epsilon(0));

  FrameInstanceMatch none;
  none.gt_instances = 2;
  none.predictions.push_back({4, 0, false, true});
  const FrameInstanceMatch frames3[1] = {none};
  CHECK(odr(frames3) == doctest::Approx(0.0).epsilon(0));

  FrameInstanceMatch empty;
  const FrameInstanceMatch frames4[1] = {empty};
  CHECK_THROWS_AS(odr(frames4), std::domain_error);
}

TEST_CASE("nofp counts zero-overlap predictions per frame") {
  FrameInstanceMatch clean;
  clean.gt_instances = 1;
  clean.predictions.push_back({4, 4, true, false});
  const FrameInstanceMatch frames1[2] = {clean, clean};
  CHECK(nofp(frames1, 2) == doctest::Approx(0.0).epsilon(0));

  FrameInstanceMatch noisy;
  noisy.gt_instances = 1;
  for (int i = 0; i < 3; ++i) noisy.predictions.push_back({2, 0, false, true});
  const FrameInstanceMatch frames2[2] = {noisy, clean};
  CHECK(nofp(frames2, 2) == doctest::Approx(1.5).epsilon(0));

  FrameInstanceMatch one_fp;
  one_fp.predictions.push_back({1, 0, false, true});
  const FrameInstanceMatch frames3[2] = {one_fp, one_fp};
  CHECK(nofp(frames3, 2) == doctest::Approx(1.0).epsilon(0));

  CHECK_THROWS_AS(nofp(frames3, 0), std::domain_error);
}

TEST_CASE("odr and nofp agree with a from-scratch recount on random masks") {
  std::mt19937 rng(62);
  std::vector<FrameInstanceMatch> frames;
  std::uint64_t successes = 0, gt_total = 0, fps = 0;
  for (int f = 0; f < 12; ++f) {
    ByteGrid pred(16, 12, 0), gt(16, 12, 0);
    for (int b = 0; b < 3; ++b) {
      const int w = 1 + rng() % 4, h = 1 + rng() % 4;
      const int x = rng() % (16 - w), y = rng() % (12 - h);
      for (int yy = y; yy < y + h; ++yy) {
        for (int xx = x; xx < x + w; ++xx) {
          (b % 2 == 0 ? pred : gt).at(yy, xx) = 1;
        }
      }
    }
    const FrameInstanceMatch m = match_instances(pred, gt);
    CHECK(m.gt_instances == count_components_8(gt));
    gt_total += m.gt_instances;
    for (const auto& p : m.predictions) {
      successes += p.success ? 1 : 0;
      fps += p.false_positive ? 1 : 0;
      CHECK(p.success == (2 * p.overlap > p.pixels));
      CHECK(p.false_positive == (p.overlap == 0));
    }
    frames.push_back(m);
  }
  if (gt_total > 0) {
    CHECK(odr(frames) ==
          doctest::Approx(static_cast<double>(successes) / gt_total).epsilon(0));
  }
  CHECK(nofp(frames, 12) == doctest::Approx(static_cast<double>(fps) / 12.0).epsilon(0));
}

TEST_CASE("hausdorff handles the hand fixtures") {
  const std::vector<PointD> a{{0, 0}, {1, 1}, {2, 2}};
  CHECK(hausdorff(a, a) == 0.0);

  const std::vector<PointD> p{{0, 0}};
  const std::vector<PointD> q{{3, 4}};
  CHECK(hausdorff(p, q) == doctest::Approx(5.0).epsilon(0));

  std::vector<PointD> with_outlier = a;
  with_outlier.push_back({2, 12});  // 10 px beyond the path end
  CHECK(hausdorff(a, with_outlier) == doctest::Approx(10.0).epsilon(0));

  CHECK_THROWS_AS(hausdorff({}, a), std::invalid_argument);
}

TEST_CASE("hausdorff is a symmetric premetric with the triangle property") {
  std::mt19937 rng(63);
  const auto random_path = [&rng](int n) {
    std::vector<PointD> path;
    for (int i = 0; i < n; ++i) {
      path.push_back({static_cast<double>(rng() % 100) / 4.0,
                      static_cast<double>(rng() % 100) / 4.0});
    }
    return path;
  };
  for (int trial = 0; trial < 25; ++trial) {
    const auto a = random_path(1 + rng() % 8);
    const auto b = random_path(1 + rng() % 8);
    const auto c = random_path(1 + rng() % 8);
    const double ab = hausdorff(a, b);
    CHECK(ab >= 0.0);
    CHECK(ab == doctest::Approx(hausdorff(b, a)).epsilon(0));
    CHECK(hausdorff(a, c) <= ab + hausdorff(b, c) + 1e-12);
  }
}

TEST_CASE("densify caps the spacing and keeps endpoints") {
  const std::vector<PointD> path{{0, 0}, {10, 0}};
  const auto dense = densify(path, 1.0);
  CHECK(dense.front() == PointD{0, 0});
  CHECK(dense.back() == PointD{10, 0});
  for (std::size_t i = 1; i < dense.size(); ++i) {
    const double d = std::hypot(dense[i].x - dense[i - 1].x, dense[i].y - dense[i - 1].y);
    CHECK(d <= 1.0 + 1e-12);
  }
  CHECK_THROWS_AS(densify(path, 0.0), std::invalid_argument);
}

TEST_SUITE_END();
