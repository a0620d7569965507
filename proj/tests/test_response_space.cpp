#include <doctest.h>

#include <set>

#include "recourse/errors.hpp"
#include "recourse/response_space.hpp"
#include "support.hpp"

using namespace recourse;
using recourse::test::binary;
using recourse::test::fig1;

namespace {

// A child of cardinality k whose parents have `c` joint configurations
// (a root when c = 1).
CausalModel single_node(int k, int c) {
  if (c == 1) return CausalModel::create({{"Y", k}}, {{}});
  return CausalModel::create({{"P", c}, {"Y", k}}, {{}, {0}});
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

TEST_CASE("response counts") {
  const CausalModel m = fig1();
  CHECK(response_count(m, 0) == 2);
  CHECK(response_count(m, 1) == 4);
  CHECK(response_count(m, 2) == 16);
  const CausalModel t = CausalModel::create({{"P", 2}, {"Y", 3}}, {{}, {0}});
  CHECK(response_count(t, 1) == 9);
  CHECK(ResponseSpace(m).total() == 128);
}

TEST_CASE("response count overflow is a capacity error") {
  // A binary child of seven 2-state parents has 2^128 response functions.
  std::vector<std::vector<std::size_t>> parents(8);
  for (std::size_t j = 0; j < 7; ++j) parents[7].push_back(j);
  const CausalModel m = CausalModel::create(binary(8), parents);
  CHECK_THROWS_AS(response_count(m, 7), CapacityError);
}

TEST_CASE("response functions are distinct and exhaustive for K <= 3, C <= 4") {
  for (int k = 2; k <= 3; ++k) {
    for (int c = 1; c <= 4; ++c) {
      CAPTURE(k);
      CAPTURE(c);
      const CausalModel m = single_node(k, c);
      const std::size_t y = m.size() - 1;
      const std::uint64_t n = response_count(m, y);
      CHECK(n == ipow(k, c));
      std::set<std::vector<int>> tables;
      for (std::uint64_t r = 0; r < n; ++r) {
        std::vector<int> table;
        for (int pa = 0; pa < c; ++pa) {
          const int out = m.size() == 1 ? eval_response(m, y, r, {})
                                        : eval_response(m, y, r, std::vector<int>{pa});
          CHECK(out >= 0);
          CHECK(out < k);
          table.push_back(out);
        }
        tables.insert(table);
      }
      CHECK(tables.size() == n);
    }
  }
}

TEST_CASE("eval_response encoding for a binary child of a binary parent") {
  const CausalModel m = CausalModel::create(binary(2), {{}, {0}});
  for (int pa : {0, 1}) CHECK(eval_response(m, 1, 0, std::vector<int>{pa}) == 0);
  CHECK(eval_response(m, 1, 2, std::vector<int>{0}) == 0);
  CHECK(eval_response(m, 1, 2, std::vector<int>{1}) == 1);
  CHECK(eval_response(m, 1, 1, std::vector<int>{0}) == 1);
  CHECK(eval_response(m, 1, 1, std::vector<int>{1}) == 0);
  CHECK(eval_response(m, 0, 1, {}) == 1);
  CHECK_THROWS_AS(eval_response(m, 1, 4, std::vector<int>{0}), DomainError);
}

TEST_CASE("parent configurations are little-endian over ascending parents") {
  // X3 with parents X1, X2: digit index = x1 + 2 x2. r = 2^2 picks (x1=0, x2=1).
  const CausalModel m = fig1();
  CHECK(eval_response(m, 2, 4, std::vector<int>{0, 1}) == 1);
  CHECK(eval_response(m, 2, 4, std::vector<int>{1, 0}) == 0);
}

TEST_CASE("forward simulation examples") {
  const ResponseSpace fig(fig1());
  CHECK(forward_simulate(fig, std::vector<std::uint64_t>{1, 3, 15}) == Configuration{1, 1, 1});
  const ResponseSpace two(CausalModel::create(binary(2), {{}, {0}}));
  CHECK(forward_simulate(two, std::vector<std::uint64_t>{0, 2}, Action::make({{0, 1}})) ==
        Configuration{1, 1});
  CHECK(forward_simulate(two, std::vector<std::uint64_t>{0, 2}) == Configuration{0, 0});
}

TEST_CASE("joint index codec and cursor") {
  const ResponseSpace s(fig1());
  std::uint64_t seen = 0;
  for (auto cur = s.begin(); cur.valid(); cur.next()) {
    CHECK(cur.index() == seen);
    CHECK(s.decode(cur.index()) == cur.digits());
    CHECK(s.encode(cur.digits()) == cur.index());
    ++seen;
  }
  CHECK(seen == 128);
  CHECK(s.decode(1 + 2 * 3 + 8 * 15) == ResponseDigits{1, 3, 15});
}

TEST_CASE("every configuration has a constant-response witness") {
  const ResponseSpace s(CausalModel::create({{"A", 3}, {"B", 2}, {"C", 2}}, {{}, {0}, {0, 1}}));
  const CausalModel& m = s.model();
  std::set<Configuration> reached;
  for (auto cur = s.begin(); cur.valid(); cur.next()) reached.insert(s.simulate(cur.digits()));
  CHECK(reached.size() == m.configuration_count());
}

TEST_CASE("intervening on simulated values reproduces the simulation") {
  const ResponseSpace s(fig1());
  for (auto cur = s.begin(); cur.valid(); cur.next()) {
    const Configuration x = s.simulate(cur.digits());
    for (std::size_t i = 0; i < 3; ++i) {
      const Action a = Action::make({{i, x[i]}});
      CHECK(s.simulate(cur.digits(), &a) == x);
    }
    const Action both = Action::make({{0, x[0]}, {1, x[1]}});
    CHECK(s.simulate(cur.digits(), &both) == x);
  }
}
