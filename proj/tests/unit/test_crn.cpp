#include <doctest.h>

#include "crnbatch/crn.hpp"
#include "crnbatch/errors.hpp"
#include "crnbatch/parser.hpp"

using namespace crnbatch;

TEST_CASE("propensity follows falling powers over r(A)!") {
  Crn crn = parse_crn("A + 3B -> C : 4.5");
  const Reaction& a = crn.reactions()[0];
  Configuration c(3);
  c[0] = 1;
  c[1] = 3;
  CHECK(propensity(c, Volume{1}, a) == doctest::Approx(4.5));
  c[1] = 2;
  CHECK(propensity(c, Volume{1}, a) == 0.0);
  c[1] = 5;  // 4.5 / 6 * 1 * 5 * 4 * 3 / v^3
  CHECK(propensity(c, Volume{2}, a) == doctest::Approx(4.5 / 6.0 * 60.0 / 8.0));
}

TEST_CASE("order-one propensity ignores the volume") {
  Crn crn = parse_crn("A -> B : 2.5");
  Configuration c(2);
  c[0] = 7;
  CHECK(propensity(c, Volume{1}, crn.reactions()[0]) == doctest::Approx(17.5));
  CHECK(propensity(c, Volume{1000}, crn.reactions()[0]) == doctest::Approx(17.5));
}

TEST_CASE("order-zero propensity scales with the volume") {
  Crn crn = parse_crn(" -> A : 3");
  Configuration c(1);
  CHECK(propensity(c, Volume{10}, crn.reactions()[0]) == doctest::Approx(30.0));
}

TEST_CASE("total propensity of the dimer") {
  Crn crn = parse_crn("2M <-> D : 1, 1");
  Configuration c = parse_config("M=100", crn);
  CHECK(total_propensity(c, Volume{100}, crn) == doctest::Approx(49.5));
  CHECK(total_propensity(c, Volume{100}, Crn{}) == 0.0);
}

TEST_CASE("apply subtracts reactants and adds products") {
  Crn crn = parse_crn("A + B -> C : 1\nA -> B + C : 1\nA + 3B -> C : 1");
  Configuration c = parse_config("A=1, B=1", crn);
  CHECK(apply(c, crn.reactions()[0]) == parse_config("C=1", crn));
  Configuration d = parse_config("A=1", crn);
  Configuration e = apply(d, crn.reactions()[1]);
  CHECK(e == parse_config("B=1, C=1", crn));
  CHECK(e.n() == d.n() + 1);
  CHECK_THROWS_AS(apply(parse_config("A=1, B=2", crn), crn.reactions()[2]), NotApplicable);
}

TEST_CASE("apply then reverse restores the configuration") {
  Crn crn = parse_crn("2A + B -> 3C : 1\n3C -> 2A + B : 1");
  Configuration c = parse_config("A=5, B=2, C=1", crn);
  CHECK(apply(apply(c, crn.reactions()[0]), crn.reactions()[1]) == c);
}

TEST_CASE("order and generativity") {
  CHECK(order_and_generativity(parse_crn("A + B -> C : 2\nC -> A + B : 3")).o == 2);
  CHECK(order_and_generativity(parse_crn("A + B -> C : 2\nC -> A + B : 3")).g == 1);
  auto og = order_and_generativity(parse_crn("A -> 2A : 1\nA -> : 1"));
  CHECK(og.o == 1);
  CHECK(og.g == 1);
  og = order_and_generativity(parse_crn("A + B -> C + D : 1"));
  CHECK(og.o == 2);
  CHECK(og.g == 0);
  CHECK_THROWS_AS(order_and_generativity(Crn{}), EmptyCrn);
}

TEST_CASE("reaction invariants") {
  CHECK_THROWS_AS(Reaction({}, {}, 0.0), NonPositiveRate);
  CHECK_THROWS_AS(Reaction({}, {}, -1.0), NonPositiveRate);
  Reaction r(make_multiset({{1, 1}, {0, 2}, {1, 1}}), {}, 1.0);
  CHECK(r.reactants == Multiset{{0, 2}, {1, 2}});
  CHECK(r.order() == 4);
  CHECK(r.generativity() == -4);
  CHECK_THROWS_AS(Volume{0.0}, InvalidParams);
}
