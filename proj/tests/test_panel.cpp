#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sstream>

#include "doctest.h"
#include "ivxj/csv.hpp"
#include "ivxj/panel.hpp"

using namespace ivxj;

namespace {
IndividualSeries make_series(const std::string& id, int T, long long t0 = 0) {
  IndividualSeries ind;
  ind.id = id;
  for (int t = 0; t <= T; ++t) {
    ind.times.push_back(t0 + t);
    ind.y.push_back(0.1 * t);
  }
  ind.x.push_back(std::vector<double>(static_cast<std::size_t>(T) + 1, 1.0));
  for (int t = 0; t <= T; ++t)
    ind.x[0][static_cast<std::size_t>(t)] = 0.5 * t + (t % 3);
  return ind;
}
}  // namespace

TEST_CASE("validate accepts a well-formed unbalanced panel") {
  Panel p;
  p.individuals.push_back(make_series("a", 8));
  p.individuals.push_back(make_series("b", 12, 100));
  CHECK_NOTHROW(p.validate());
  CHECK(p.n() == 2);
  CHECK(p.k() == 1);
  CHECK(p.T_eff() == 12);
  CHECK(p.individuals[0].T() == 8);
}

TEST_CASE("validate rejects structural defects") {
  SUBCASE("empty panel") {
    Panel p;
    CHECK_THROWS_AS(p.validate(), InputError);
  }
  SUBCASE("interior time gap") {
    Panel p;
    p.individuals.push_back(make_series("a", 8));
    p.individuals[0].times[4] = 99;
    CHECK_THROWS_AS(p.validate(), InputError);
  }
  SUBCASE("non-increasing times") {
    Panel p;
    p.individuals.push_back(make_series("a", 8));
    p.individuals[0].times[3] = p.individuals[0].times[2];
    CHECK_THROWS_AS(p.validate(), InputError);
  }
  SUBCASE("length mismatch") {
    Panel p;
    p.individuals.push_back(make_series("a", 8));
    p.individuals[0].y.pop_back();
    CHECK_THROWS_AS(p.validate(), InputError);
  }
  SUBCASE("inconsistent regressor count") {
    Panel p;
    p.individuals.push_back(make_series("a", 8));
    p.individuals.push_back(make_series("b", 8));
    p.individuals[1].x.push_back(p.individuals[1].x[0]);
    CHECK_THROWS_AS(p.validate(), InputError);
  }
  SUBCASE("short individuals listed by id") {
    Panel p;
    p.individuals.push_back(make_series("longone", 20));
    p.individuals.push_back(make_series("tiny1", 3));
    p.individuals.push_back(make_series("tiny2", 4));
    try {
      p.validate(6);
      FAIL("expected InputError");
    } catch (const InputError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("tiny1") != std::string::npos);
      CHECK(msg.find("tiny2") != std::string::npos);
      CHECK(msg.find("longone") == std::string::npos);
    }
  }
}

TEST_CASE("demean_within subtracts the mean") {
  const auto out = demean_within({1.0, 2.0, 3.0, 6.0});
  CHECK(out[0] == doctest::Approx(-2.0));
  CHECK(out[3] == doctest::Approx(3.0));
  double s = 0.0;
  for (double v : out) s += v;
  CHECK(s == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("odd_even_sets") {
  const auto [O, E] = odd_even_sets(8);
  CHECK(O == std::vector<int>{3, 5, 7});
  CHECK(E == std::vector<int>{2, 4, 6});
  CHECK(O.size() == E.size());
  CHECK_THROWS_AS(odd_even_sets(7), InputError);  // odd-T rule applied upstream
  CHECK_THROWS_AS(odd_even_sets(4), InputError);
}

TEST_CASE("CSV round trip preserves the panel") {
  Panel p;
  p.individuals.push_back(make_series("alpha", 9));
  p.individuals.push_back(make_series("beta", 7, 42));
  p.individuals[1].x[0][3] = 1.25e-7;
  std::ostringstream os;
  write_panel_csv(p, os);
  std::istringstream is(os.str());
  const Panel q = read_panel_csv(is);
  REQUIRE(q.n() == 2);
  CHECK(q.individuals[0].id == "alpha");
  CHECK(q.individuals[1].times == p.individuals[1].times);
  CHECK(q.individuals[1].x[0][3] == p.individuals[1].x[0][3]);
  CHECK(q.individuals[0].y == p.individuals[0].y);
}

TEST_CASE("CSV schema violations") {
  SUBCASE("bad header") {
    std::istringstream is("id,time,value\na,0,1\n");
    CHECK_THROWS_AS(read_panel_csv(is), InputError);
  }
  SUBCASE("missing cell") {
    std::istringstream is("id,time,y,x1\na,0,1.0,\na,1,1.0,2.0\n");
    CHECK_THROWS_AS(read_panel_csv(is), InputError);
  }
  SUBCASE("non-numeric cell") {
    std::istringstream is("id,time,y,x1\na,0,1.0,abc\n");
    CHECK_THROWS_AS(read_panel_csv(is), InputError);
  }
  SUBCASE("duplicate time") {
    std::istringstream is("id,time,y,x1\na,0,1.0,1.0\na,0,2.0,2.0\n");
    CHECK_THROWS_AS(read_panel_csv(is), InputError);
  }
  SUBCASE("time gap") {
    std::istringstream is("id,time,y,x1\na,0,1.0,1.0\na,2,2.0,2.0\n");
    CHECK_THROWS_AS(read_panel_csv(is), InputError);
  }
  SUBCASE("no rows") {
    std::istringstream is("id,time,y,x1\n");
    CHECK_THROWS_AS(read_panel_csv(is), InputError);
  }
  SUBCASE("unsorted rows are sorted by time") {
    std::istringstream is("id,time,y,x1\na,1,1.5,2.0\na,0,1.0,1.0\na,2,2.0,3.0\n");
    const Panel p = read_panel_csv(is);
    CHECK(p.individuals[0].x[0] == std::vector<double>{1.0, 2.0, 3.0});
  }
}
