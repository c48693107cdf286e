#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "bimod/error.hpp"
#include "bimod/eval.hpp"
#include "testkit.hpp"

using namespace bimod;

using testkit::direct_f1;
using testkit::direct_nmi;
using testkit::direct_purity;

TEST_SUITE("eval") {
  TEST_CASE("hand fixture: gold (a,a,b,b), pred (1,1,1,2)") {
    const std::vector<std::int64_t> gold = {0, 0, 1, 1}, pred = {1, 1, 1, 2};
    CHECK(std::abs(purity(pred, gold) - 0.75) <= 1e-9);
    const double expected = 3 * std::log(4.0 / 3) / std::sqrt((3 * std::log(4.0 / 3) + std::log(4.0)) * 4 * std::log(2.0));
    CHECK(std::abs(nmi(pred, gold) - expected) <= 1e-12);
  }

  TEST_CASE("hand fixture: F1 with gold (A,A,B,B), pred (A,B,B,B)") {
    const std::vector<std::string> gold = {"A", "A", "B", "B"}, pred = {"A", "B", "B", "B"}, classes = {"A", "B"};
    const auto s = f1_scores(pred, gold, classes);
    CHECK(std::abs(s.micro_f1 - 75.0) <= 1e-9);
    CHECK(std::abs(s.macro_f1 - 100.0 * (2.0 / 3 + 4.0 / 5) / 2) <= 1e-9);
    CHECK(std::abs(s.macro_f1 - 73.33) < 0.01);
    CHECK(s.per_class[0].true_positive == 1);
    CHECK(s.per_class[1].true_positive == 2);
  }

  TEST_CASE("perfect and degenerate labelings") {
    const std::vector<std::int64_t> gold = {0, 0, 1, 1, 2}, renamed = {7, 7, 3, 3, 9}, single = {1, 1, 1, 1, 1};
    CHECK(nmi(renamed, gold) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(purity(renamed, gold) == 1.0);
    CHECK(nmi(single, gold) == 0.0);
    CHECK(nmi(gold, single) == 0.0);
    const std::vector<std::string> g = {"x", "y"};
    const auto s = f1_scores(g, g, g);
    CHECK(s.micro_f1 == 100.0);
    CHECK(s.macro_f1 == 100.0);
  }

  TEST_CASE("errors") {
    const std::vector<std::int64_t> a = {0, 1}, b = {0};
    CHECK_THROWS_AS(nmi(a, b), DataError);
    CHECK_THROWS_AS(purity(a, b), DataError);
    const std::vector<std::string> classes = {"A"}, pred = {"Z"}, gold = {"A"};
    CHECK_THROWS_AS(f1_scores(pred, gold, classes), DataError);
  }

  TEST_CASE("class with no predictions scores F = 0") {
    const std::vector<std::string> gold = {"A", "C"}, pred = {"A", "A"}, classes = {"A", "C"};
    const auto s = f1_scores(pred, gold, classes);
    CHECK(s.per_class[1].f1 == 0.0);
    CHECK(s.macro_f1 == doctest::Approx(100.0 * (2.0 / 3) / 2));
  }

  TEST_CASE("random labelings match the direct formulas") {
    std::mt19937_64 rng(2718);
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 30)(rng);
      const auto k = std::uniform_int_distribution<std::int64_t>(1, 6)(rng);
      const auto c = std::uniform_int_distribution<std::int64_t>(1, 6)(rng);
      std::vector<std::int64_t> pred(n), gold(n);
      for (auto& x : pred) x = std::uniform_int_distribution<std::int64_t>(0, k - 1)(rng);
      for (auto& x : gold) x = std::uniform_int_distribution<std::int64_t>(0, c - 1)(rng);
      CHECK(std::abs(nmi(pred, gold) - direct_nmi(pred, gold)) <= 1e-10);
      CHECK(std::abs(purity(pred, gold) - direct_purity(pred, gold)) <= 1e-10);
      CHECK(std::abs(nmi(pred, gold) - nmi(gold, pred)) <= 1e-12);

      // Permuting ids changes nothing.
      std::vector<std::int64_t> perm(n);
      for (std::size_t i = 0; i < n; ++i) perm[i] = 100 - 3 * pred[i];
      CHECK(std::abs(nmi(perm, gold) - nmi(pred, gold)) <= 1e-12);
      CHECK(purity(perm, gold) == purity(pred, gold));

      // Purity is at least the majority-class share.
      std::map<std::int64_t, double> cls;
      for (auto g : gold) cls[g] += 1;
      double major = 0;
      for (const auto& [key, v] : cls) major = std::max(major, v);
      CHECK(purity(pred, gold) >= major / static_cast<double>(n) - 1e-15);

      std::vector<std::string> classes, sp(n), sg(n);
      for (std::int64_t i = 0; i < std::max(k, c); ++i) classes.push_back("c" + std::to_string(i));
      for (std::size_t i = 0; i < n; ++i) {
        sp[i] = classes[static_cast<std::size_t>(pred[i])];
        sg[i] = classes[static_cast<std::size_t>(gold[i])];
      }
      const auto s = f1_scores(sp, sg, classes);
      const auto [micro, macro] = direct_f1(sp, sg, classes);
      CHECK(std::abs(s.micro_f1 - micro) <= 1e-10);
      CHECK(std::abs(s.macro_f1 - macro) <= 1e-10);
      double correct = 0;
      for (std::size_t i = 0; i < n; ++i) correct += sp[i] == sg[i];
      CHECK(std::abs(s.micro_f1 - 100.0 * correct / static_cast<double>(n)) <= 1e-10);
      for (const auto& cs : s.per_class) {
        CHECK(cs.true_positive <= std::min(cs.gold, cs.predicted));
        CHECK(cs.f1 >= 0.0);
        CHECK(cs.f1 <= 1.0);
      }
    }
  }

  TEST_CASE("contingency margins") {
    const std::vector<std::int64_t> pred = {0, 1, 1, 2, 2, 2}, gold = {5, 5, 6, 6, 6, 7};
    const auto t = contingency(pred, gold);
    CHECK(t.total == 6);
    std::uint64_t rows = 0;
    for (std::size_t l = 0; l < t.n_classes(); ++l) {
      std::uint64_t r = 0;
      for (auto x : t.joint[l]) r += x;
      CHECK(r == t.class_count[l]);
      rows += r;
    }
    CHECK(rows == t.total);
    CHECK(encode_labels(std::vector<std::string>{"b", "a", "b"}) == std::vector<std::int64_t>{0, 1, 0});
  }
}
