#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "spinweb/errors.hpp"
#include "spinweb/splitcore.hpp"
#include "spinweb/su2rep.hpp"
#include "spinweb/webgeo.hpp"

using namespace spinweb;
using namespace spinweb::geo;
using split::BitVector;
using split::Splitting;
using su2::Spin;
using su2::half;

namespace {

std::vector<BitVector> bits(const std::vector<std::string>& strings) {
  std::vector<BitVector> out;
  for (const auto& s : strings) out.emplace_back(s);
  return out;
}

ParamPolyline segment(Point a, Point b) {
  return ParamPolyline({a, b}, {0.0, 1.0});
}

/// Two paths agreeing on [0, 0.5] and forking afterwards.
EdgeTuple fork_tuple() {
  return {ParamPolyline({{0, 0}, {0.5, 0}, {1, 1}}, {0.0, 0.5, 1.0}),
          ParamPolyline({{0, 0}, {0.5, 0}, {1, -1}}, {0.0, 0.5, 1.0})};
}

bool contains_interval(const std::vector<Interval>& v, double lo, double hi) {
  for (const auto& iv : v)
    if (std::abs(iv.lo - lo) < 1e-12 && std::abs(iv.hi - hi) < 1e-12) return true;
  return false;
}

} // namespace

TEST_CASE("polyline validation and evaluation") {
  const ParamPolyline p({{0, 0}, {2, 0}, {2, 2}}, {0.0, 0.25, 1.0});
  CHECK(p.at(0.0) == Point{0, 0});
  CHECK(p.at(0.25) == Point{2, 0});
  CHECK(std::abs(p.at(0.625)[1] - 1.0) < 1e-15);
  CHECK(p.at(1.0) == Point{2, 2});

  CHECK_THROWS_AS(ParamPolyline({{0, 0}}, {0.0}), input_error);
  CHECK_THROWS_AS(ParamPolyline({{0, 0}, {1, 0}}, {0.0, 0.5}), input_error);
  CHECK_THROWS_AS(ParamPolyline({{0, 0}, {1, 0}}, {0.5, 1.0}), input_error);
  CHECK_THROWS_AS(ParamPolyline({{0, 0}, {1, 0}, {2, 0}}, {0.0, 0.0, 1.0}),
                  input_error);
  CHECK_THROWS_AS(ParamPolyline({{0, 0}, {0, 0}}, {0.0, 1.0}), input_error);
}

TEST_CASE("consistent parametrization check") {
  const ParamPolyline a = segment({0, 0}, {1, 0});
  CHECK(check_consistent({a, a}).ok);
  CHECK(check_consistent(fork_tuple()).ok);
  CHECK(check_consistent({segment({0, 0}, {1, 0}), segment({0, 1}, {1, 1})}).ok);

  // Same image, reparametrized: midpoint reached at different parameters.
  const ParamPolyline slow({{0, 0}, {0.5, 0}, {1, 0}}, {0.0, 0.25, 1.0});
  const ConsistencyReport rep = check_consistent({a, slow});
  CHECK_FALSE(rep.ok);
  REQUIRE_FALSE(rep.violations.empty());
  CHECK(rep.violations[0].i == 0);
  CHECK(rep.violations[0].j == 1);
  CHECK(std::abs(rep.violations[0].ti - rep.violations[0].tj) > kParamTol);
}

TEST_CASE("coincidence intervals") {
  const ParamPolyline a = segment({0, 0}, {1, 0});
  const auto full = coincidence_intervals({a, a}, 0, 1);
  REQUIRE(full.size() == 1);
  CHECK(contains_interval(full, 0.0, 1.0));

  const auto half_shared = coincidence_intervals(fork_tuple(), 0, 1);
  REQUIRE(half_shared.size() == 1);
  CHECK(contains_interval(half_shared, 0.0, 0.5));

  // An isolated transversal crossing is not a coincidence interval.
  const EdgeTuple crossing{segment({0, -1}, {1, 1}), segment({0, 1}, {1, -1})};
  CHECK(coincidence_intervals(crossing, 0, 1).empty());

  CHECK(coincidence_intervals({a, segment({0, 1}, {1, 2})}, 0, 1).empty());
}

TEST_CASE("decomposition of a fork") {
  const DecompositionResult d = decompose(fork_tuple(), {0.0, 1.0});
  REQUIRE(d.breakpoints.size() == 3);
  CHECK(d.breakpoints[0] == doctest::Approx(0.0));
  CHECK(d.breakpoints[1] == doctest::Approx(0.5));
  CHECK(d.breakpoints[2] == doctest::Approx(1.0));
  REQUIRE(d.pieces.size() == 2);
  // Shared piece: one distinct path; fork piece: two.
  CHECK(d.pieces[0].reduction == std::vector<std::size_t>{0});
  CHECK(d.pieces[0].splitting == Splitting(bits({"11"})));
  CHECK(d.pieces[1].reduction == std::vector<std::size_t>{0, 1});
  CHECK(d.pieces[1].splitting == split::max_splitting(2));
}

TEST_CASE("decomposition of disjoint and identical tuples") {
  const EdgeTuple disjoint{segment({0, 0}, {1, 0}), segment({0, 1}, {1, 1})};
  const DecompositionResult d = decompose(disjoint, {0.0, 1.0});
  CHECK(d.breakpoints.size() == 2);
  REQUIRE(d.pieces.size() == 1);
  CHECK(d.pieces[0].splitting == split::max_splitting(2));

  const ParamPolyline a = segment({0, 0}, {1, 0});
  const DecompositionResult same = decompose({a, a, a}, {0.0, 1.0});
  REQUIRE(same.pieces.size() == 1);
  CHECK(same.pieces[0].reduction == std::vector<std::size_t>{0});
  CHECK(same.pieces[0].splitting == Splitting(bits({"111"})));
}

TEST_CASE("path restriction") {
  const ParamPolyline p({{0, 0}, {0.5, 0}, {1, 1}}, {0.0, 0.5, 1.0});
  const ParamPolyline r = restrict_path(p, 0.5, 1.0);
  CHECK(r.params().front() == doctest::Approx(0.0));
  CHECK(r.params().back() == doctest::Approx(1.0));
  CHECK(r.at(0.0) == Point{0.5, 0});
  CHECK(std::abs(r.at(1.0)[1] - 1.0) < 1e-15);
  CHECK_THROWS_AS(restrict_path(p, 0.7, 0.7), input_error);
}

TEST_CASE("reduction and induced splitting") {
  const ParamPolyline g1 = segment({0, 0}, {1, 0});
  const ParamPolyline g2 = segment({0, 1}, {1, 1});
  const ParamPolyline g3 = segment({0, 2}, {1, 2});
  const ReductionResult r = reduction_and_splitting({g1, g2, g3, g2});
  CHECK(r.reduction == std::vector<std::size_t>{0, 1, 2});
  CHECK(r.splitting == Splitting(bits({"1000", "0101", "0010"})));

  CHECK(reduction_and_splitting({g1, g2, g3}).splitting == split::max_splitting(3));
  CHECK(reduction_and_splitting({g1, g1}).splitting == Splitting(bits({"11"})));
}

TEST_CASE("standard web geometry") {
  const Web w = standard_web(2);
  CHECK(w.n() == 4);
  CHECK(w.realized == 2);
  REQUIRE(w.tail.size() == 2);
  CHECK(w.tail[0] == Splitting(bits({"1100", "0011"})));
  CHECK(w.tail[1] == Splitting(bits({"1010", "0101"})));
  CHECK(check_consistent(w.paths).ok);
  validate_web(w); // no throw
  // All strands start at the common base.
  for (const auto& p : w.paths) CHECK(p.at(0.0) == w.paths[0].at(0.0));
}

TEST_CASE("regular set and splittings along the standard web") {
  const Web w = standard_web(2);
  const std::vector<Interval> regular = regular_set(w);
  REQUIRE_FALSE(regular.empty());
  double measure = 0.0;
  for (const auto& iv : regular) {
    CHECK(iv.hi > iv.lo);
    measure += iv.hi - iv.lo;
  }
  CHECK(measure > 0.5);
  CHECK(measure < 1.0 + 1e-12);

  // Reading midpoints along decreasing parameter alternates the two pairings
  // after collapsing repeats.
  std::vector<Splitting> seen;
  for (auto it = regular.rbegin(); it != regular.rend(); ++it) {
    const Splitting s = splitting_at(w, 0.5 * (it->lo + it->hi));
    if (seen.empty() || !(seen.back() == s)) seen.push_back(s);
  }
  std::vector<Splitting> nontrivial;
  for (const auto& s : seen)
    if (s.elements().size() == 2) nontrivial.push_back(s);
  REQUIRE(nontrivial.size() >= 4);
  const Splitting v1(bits({"1100", "0011"}));
  const Splitting v2(bits({"1010", "0101"}));
  for (std::size_t k = 0; k + 1 < nontrivial.size(); ++k)
    CHECK_FALSE(nontrivial[k] == nontrivial[k + 1]);
  CHECK((nontrivial[0] == v1 || nontrivial[0] == v2));
}

TEST_CASE("splitting at a regular parameter") {
  const ParamPolyline a = segment({0, 0}, {1, 0});
  Web pair{{a, a}, {Splitting(bits({"11"}))}, 1};
  CHECK(splitting_at(pair, 0.5) == Splitting(bits({"11"})));

  Web single{{a}, {Splitting(bits({"1"}))}, 1};
  const std::vector<Interval> reg = regular_set(single);
  REQUIRE(reg.size() == 1);
  CHECK(reg[0].lo == doctest::Approx(0.0));
  CHECK(reg[0].hi == doctest::Approx(1.0));
  CHECK(splitting_at(single, 0.5) == Splitting(bits({"1"})));
  CHECK_THROWS_AS(splitting_at(single, 0.0), input_error);
}

TEST_CASE("type sets and limit splittings") {
  const Web w = standard_web(2);
  const split::OrderedTypeSet types = types_set(w);
  CHECK(types == bits({"1100", "1010", "0101", "0011"}));
  CHECK(split::is_rich(types, 4));

  const std::vector<Splitting> limits = limit_splittings(w);
  REQUIRE(limits.size() == 2);
  CHECK(limits[0] == Splitting(bits({"1100", "0011"})));
  CHECK(limits[1] == Splitting(bits({"1010", "0101"})));
  CHECK(split::union_of(limits) == types);

  const ParamPolyline a = segment({0, 0}, {1, 0});
  Web single{{a}, {Splitting(bits({"1"}))}, 1};
  CHECK(types_set(single) == bits({"1"}));

  Web no_tail{{a}, {}, 0};
  CHECK_THROWS_AS(limit_splittings(no_tail), input_error);
}

TEST_CASE("weak degeneracy detection") {
  const SpinWeb halves(standard_web(2),
                       proj::RepTuple({half(), half(), half(), half()}));
  const DegeneracyReport yes = is_weakly_degenerate(halves);
  CHECK(yes.degenerate);
  REQUIRE(yes.witness.has_value());
  CHECK(*yes.witness == BitVector("1100"));
  REQUIRE(yes.tau.has_value());

  const SpinWeb mixed(standard_web(2),
                      proj::RepTuple({Spin{1}, Spin{2}, Spin{3}, Spin{4}}));
  CHECK_FALSE(is_weakly_degenerate(mixed).degenerate);

  const ParamPolyline a = segment({0, 0}, {1, 0});
  const SpinWeb lone(Web{{a}, {Splitting(bits({"1"}))}, 1},
                     proj::RepTuple({half()}));
  CHECK_FALSE(is_weakly_degenerate(lone).degenerate);
}

TEST_CASE("cylinder integrals in closed form") {
  const ParamPolyline e = segment({0, 0}, {1, 0});
  const ParamPolyline e2 = segment({0, 1}, {1, 1});

  // <g^1_1, g^1_1> over one edge equals 1/2.
  CylinderFunction f;
  f.n = 2;
  f.factors = {{0, half(), 1, 1, false}, {1, half(), 1, 1, true}};
  CHECK(std::abs(integrate_cylinder(f, {e, e}) - 0.5) < 1e-13);

  // Independent edges factorize into two vanishing first moments.
  CHECK(std::abs(integrate_cylinder(f, {e, e2})) < 1e-13);

  // Constant function integrates to one.
  CylinderFunction one;
  one.n = 2;
  CHECK(std::abs(integrate_cylinder(one, {e, e2}) - 1.0) < 1e-14);

  // A fork is not a hyph: the reduced paths overlap on [0, 0.5].
  CylinderFunction on_fork;
  on_fork.n = 2;
  on_fork.factors = {{0, half(), 1, 1, false}};
  CHECK_THROWS_AS(integrate_cylinder(on_fork, fork_tuple()), input_error);
}

TEST_CASE("cylinder integral matches a hand-reduced oracle") {
  const ParamPolyline g1 = segment({0, 0}, {1, 0});
  const ParamPolyline g2 = segment({0, 1}, {1, 1});
  const ParamPolyline g3 = segment({0, 2}, {1, 2});
  const EdgeTuple t{g1, g2, g3, g2};

  // f = a^1_1 conj(b^1_1) c^1_1 conj(d^1_1) with slots (g1, g2, g3, g2):
  // the g3 factor has zero mean, so the integral vanishes.
  CylinderFunction f;
  f.n = 4;
  f.factors = {{0, half(), 1, 1, false},
               {1, half(), 1, 1, true},
               {2, half(), 1, 1, false},
               {3, half(), 1, 1, true}};
  CHECK(std::abs(integrate_cylinder(f, t)) < 1e-13);

  // Drop the g3 factor: slots 1 and 3 share one variable, slot 0 another.
  // Integral = <g^1_1>_{slot0} * <conj(g^1_1) conj(g^1_1)>_{shared} = 0.
  CylinderFunction g;
  g.n = 4;
  g.factors = {{1, half(), 1, 1, true}, {3, half(), 1, 1, true}};
  CHECK(std::abs(integrate_cylinder(g, t)) < 1e-13);

  // |g^1_1|^2 on the shared variable, trivial elsewhere: exactly 1/2.
  CylinderFunction h;
  h.n = 4;
  h.factors = {{1, half(), 1, 1, false}, {3, half(), 1, 1, true}};
  CHECK(std::abs(integrate_cylinder(h, t) - 0.5) < 1e-13);

  // Spin-1 diagonal coefficient squared modulus: <|D^1_{11}|^2> = 1/3.
  CylinderFunction s1;
  s1.n = 4;
  s1.factors = {{0, Spin{2}, 1, 1, false}, {0, Spin{2}, 1, 1, true}};
  CHECK(std::abs(integrate_cylinder(s1, t) - 1.0 / 3.0) < 1e-12);
}

TEST_CASE("monte carlo estimates") {
  const ParamPolyline e = segment({0, 0}, {1, 0});
  const ParamPolyline e2 = segment({0, 1}, {1, 1});

  CylinderFunction f;
  f.n = 2;
  f.factors = {{0, half(), 1, 1, false}, {1, half(), 1, 1, true}};

  const McResult a = mc_cylinder_expect(f, {e, e}, 4000, 12345);
  const McResult b = mc_cylinder_expect(f, {e, e}, 4000, 12345);
  CHECK(a.estimate == b.estimate); // deterministic per seed
  CHECK(std::abs(a.estimate - 0.5) < 3.0 * a.stderr_est + 1e-9);
  CHECK(a.stderr_est > 0.0);

  // Constant integrand has zero variance.
  CylinderFunction one;
  one.n = 2;
  const McResult c = mc_cylinder_expect(one, {e, e2}, 200, 7);
  CHECK(std::abs(c.estimate - 1.0) < 1e-14);
  CHECK(c.stderr_est < 1e-14);

  CHECK_THROWS_AS(mc_cylinder_expect(f, {e, e}, 99, 1), input_error);
}

TEST_CASE("strong degeneracy series preconditions") {
  // L steps need at least 2(L+1) realized repetitions of the tail.
  const SpinWeb small(standard_web(1),
                      proj::RepTuple({half(), half(), half(), half()}));
  CHECK_THROWS_AS(strong_degeneracy_series(small, 1), input_error);

  const SpinWeb nondeg(standard_web(2),
                       proj::RepTuple({Spin{1}, Spin{2}, Spin{3}, Spin{4}}));
  CHECK_THROWS_AS(strong_degeneracy_series(nondeg, 0), input_error);

  const SpinWeb ok(standard_web(2),
                   proj::RepTuple({half(), half(), half(), half()}));
  const std::vector<double> s = strong_degeneracy_series(ok, 0, 1);
  REQUIRE(s.size() == 1);
  CHECK(s[0] <= 1.0 + 1e-12);
  CHECK(s[0] > 0.0);
}

TEST_CASE("json web parsing") {
  const std::string good = R"({
    "paths": [
      { "vertices": [[0,0],[0.5,0],[1,1]], "params": [0,0.5,1] },
      { "vertices": [[0,0],[0.5,0],[1,-1]], "params": [0,0.5,1] }
    ],
    "labels": ["1/2","1/2"],
    "tail": { "splittings": [["11"]], "realized": 1 }
  })";
  const SpinWeb sw = parse_web_json(good);
  CHECK(sw.web.n() == 2);
  CHECK(sw.labels == proj::RepTuple({half(), half()}));
  CHECK(sw.web.realized == 1);
  REQUIRE(sw.web.tail.size() == 1);
  CHECK(sw.web.tail[0] == Splitting(bits({"11"})));
  CHECK(sw.web.paths[0].at(0.5) == Point{0.5, 0});

  const auto message_of = [](const std::string& text) {
    try {
      parse_web_json(text);
    } catch (const input_error& err) {
      return std::string(err.what());
    }
    return std::string();
  };

  CHECK(message_of("not json at all") != "");
  CHECK(message_of(R"({"labels": [], "tail": {"splittings": [], "realized": 0}})")
            .find("paths") != std::string::npos);
  CHECK(message_of(R"({
    "paths": [{ "vertices": [[0,0],[1]], "params": [0,1] }],
    "labels": ["1/2"],
    "tail": { "splittings": [["1"]], "realized": 1 }
  })").find("paths[0].vertices[1]") != std::string::npos);
  CHECK(message_of(R"({
    "paths": [{ "vertices": [[0,0],[1,0]], "params": [0,1] }],
    "labels": ["1/2"],
    "tail": { "splittings": "oops", "realized": 1 }
  })").find("tail.splittings") != std::string::npos);
  CHECK(message_of(R"({
    "paths": [{ "vertices": [[0,0],[1,0]], "params": [0,1] }],
    "labels": ["1/2"],
    "tail": { "splittings": [["1"]], "realized": -3 }
  })").find("tail.realized") != std::string::npos);
}
