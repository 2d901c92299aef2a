// Acceptance gate: every numbered item of the verification suite must hold.
// Each test prints one line so the ctest log reads as a checklist; the same
// items back the `verify-paper` subcommand.

#include "tropica/verify.hpp"

#include <gtest/gtest.h>

#include <cstdint>
#include <iostream>

using tropica::verify::ItemResult;

namespace {

constexpr std::uint64_t kSeed = 0;

void check(const ItemResult& r) {
  std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << ": "
            << r.name << (r.note.empty() ? "" : " (" + r.note + ")") << "\n";
  EXPECT_TRUE(r.pass) << "criterion " << r.id << ": " << r.note;
}

}  // namespace

TEST(Acceptance, Criterion01Products) {
  check(tropica::verify::item_products(kSeed));
}

TEST(Acceptance, Criterion02CanonicalForms) {
  check(tropica::verify::item_canonical(kSeed));
}

TEST(Acceptance, Criterion03VarietyLaws) {
  check(tropica::verify::item_variety_laws(kSeed));
}

TEST(Acceptance, Criterion04ScalingPairs) {
  check(tropica::verify::item_scaling_pairs(kSeed));
}

TEST(Acceptance, Criterion05ChipFiring) {
  check(tropica::verify::item_chip_firing(kSeed));
}

TEST(Acceptance, Criterion06DivisorDegree) {
  check(tropica::verify::item_divisor_degree(kSeed));
}

TEST(Acceptance, Criterion07LineInstance) {
  check(tropica::verify::item_line_instance(kSeed));
}

TEST(Acceptance, Criterion08Compatibility) {
  check(tropica::verify::item_compatibility(kSeed));
}

TEST(Acceptance, Criterion09Functoriality) {
  check(tropica::verify::item_functoriality(kSeed));
}

TEST(Acceptance, Criterion10EvenSlopes) {
  check(tropica::verify::item_even_slopes(kSeed));
}

TEST(Acceptance, Criterion11SupInf) {
  check(tropica::verify::item_sup_inf(kSeed));
}

TEST(Acceptance, Criterion12ClosedCells) {
  check(tropica::verify::item_closed_cells(kSeed));
}

// The aggregate honors any seed: the laws are seed-independent.
TEST(Acceptance, SeedIndependence) {
  for (std::uint64_t seed : {std::uint64_t{42}, std::uint64_t{43}}) {
    for (const ItemResult& r : tropica::verify::run_all(seed))
      EXPECT_TRUE(r.pass) << "seed " << seed << ", criterion " << r.id << ": "
                          << r.note;
  }
}
