#include <gtest/gtest.h>

#include <set>

#include "oracles/oracles.hpp"
#include "pgm/core.hpp"
#include "pgm/meta_target.hpp"

using namespace pgm;

TEST(Catalog, TripleCensusMatchesTable) {
  const auto& triples = enumerate_viable_triples();
  const auto expected = oracle::all_triples();
  ASSERT_EQ(triples.size(), expected.size());
  std::set<oracle::TripleName> got;
  for (const auto& t : triples) got.insert(oracle::name_of(t));
  EXPECT_EQ(got, std::set<oracle::TripleName>(expected.begin(), expected.end()));
}

TEST(Catalog, CompatibilityAgreesOnFullProduct) {
  const auto expected = oracle::all_triples();
  const std::set<oracle::TripleName> table(expected.begin(), expected.end());
  for (auto r : kRelations)
    for (auto o : kObjects)
      for (auto a : kAttributes) {
        const Triple t{r, o, a};
        EXPECT_EQ(is_compatible(t), table.count(oracle::name_of(t)) == 1) << to_string(t);
      }
}

TEST(Catalog, ExamplesFromTheTable) {
  EXPECT_TRUE(is_compatible(RelationType::progression, ObjectType::shape, AttributeType::number));
  EXPECT_FALSE(is_compatible(RelationType::progression, ObjectType::line, AttributeType::type));
  EXPECT_TRUE(is_compatible(RelationType::XOR, ObjectType::shape, AttributeType::size));
  EXPECT_FALSE(is_compatible(RelationType::OR, ObjectType::line, AttributeType::size));
}

TEST(Catalog, CanonicalOrderAndIndex) {
  const auto& triples = enumerate_viable_triples();
  for (std::size_t i = 0; i < triples.size(); ++i) {
    EXPECT_EQ(triple_index(triples[i]), static_cast<int>(i));
    if (i > 0) {
      EXPECT_TRUE(triple_less(triples[i - 1], triples[i]));
    }
  }
  EXPECT_EQ(triple_index({RelationType::progression, ObjectType::line, AttributeType::type}), -1);
}

TEST(Catalog, PairCensusMatchesBruteForce) {
  const auto& pairs = enumerate_viable_triple_pairs();
  const auto expected = oracle::all_triple_pairs();
  ASSERT_EQ(pairs.size(), expected.size());
  std::set<std::pair<oracle::TripleName, oracle::TripleName>> got;
  for (const auto& p : pairs) {
    auto a = oracle::name_of(p.first), b = oracle::name_of(p.second);
    EXPECT_TRUE(triple_less(p.first, p.second));
    got.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
  }
  EXPECT_EQ(got, expected);
}

TEST(Catalog, AttributePairCensusMatchesBruteForce) {
  const auto& pairs = enumerate_viable_attribute_pairs();
  const auto expected = oracle::all_attribute_pairs();
  ASSERT_EQ(pairs.size(), expected.size());
  std::set<std::pair<std::string, std::string>> got;
  for (const auto& p : pairs) {
    auto x = std::string(to_string(p.first.object)) + "/" + std::string(to_string(p.first.attribute));
    auto y = std::string(to_string(p.second.object)) + "/" + std::string(to_string(p.second.attribute));
    EXPECT_LT(dimension_index(p.first), dimension_index(p.second));
    got.insert(x < y ? std::make_pair(x, y) : std::make_pair(y, x));
  }
  EXPECT_EQ(got, expected);
}

TEST(Catalog, ArityClasses) {
  EXPECT_EQ(classify_arity(RelationType::progression), Arity::unary);
  EXPECT_EQ(classify_arity(RelationType::XOR), Arity::binary);
  EXPECT_EQ(classify_arity(RelationType::OR), Arity::binary);
  EXPECT_EQ(classify_arity(RelationType::AND), Arity::binary);
  EXPECT_EQ(classify_arity(RelationType::consistent_union), Arity::ternary);
}

TEST(Catalog, NamesRoundTrip) {
  for (auto r : kRelations) EXPECT_EQ(parse_relation(to_string(r)), r);
  for (auto o : kObjects) EXPECT_EQ(parse_object(to_string(o)), o);
  for (auto a : kAttributes) EXPECT_EQ(parse_attribute(to_string(a)), a);
  EXPECT_FALSE(parse_relation("NAND").has_value());
}

TEST(Catalog, ValueDomainSizes) {
  EXPECT_EQ(value_domain({ObjectType::shape, AttributeType::size}).cardinality(), 10u);
  EXPECT_EQ(value_domain({ObjectType::shape, AttributeType::colour}).cardinality(), 10u);
  EXPECT_EQ(value_domain({ObjectType::shape, AttributeType::number}).cardinality(), 10u);
  EXPECT_EQ(value_domain({ObjectType::shape, AttributeType::position}).cardinality(), 9u);
  EXPECT_EQ(value_domain({ObjectType::shape, AttributeType::type}).cardinality(), 7u);
  EXPECT_EQ(value_domain({ObjectType::line, AttributeType::colour}).cardinality(), 10u);
  EXPECT_EQ(value_domain({ObjectType::line, AttributeType::type}).cardinality(), 6u);
  EXPECT_THROW(dimension_index({ObjectType::line, AttributeType::number}), std::invalid_argument);
}

TEST(Catalog, OrderedValuesIncrease) {
  for (std::size_t i = 1; i < kColourLevels; ++i) EXPECT_LT(colour_intensity(i - 1), colour_intensity(i));
  for (std::size_t i = 1; i < kSizeLevels; ++i) EXPECT_LT(size_scale(i - 1), size_scale(i));
  EXPECT_DOUBLE_EQ(colour_intensity(0), 0.0);
  EXPECT_DOUBLE_EQ(colour_intensity(9), 1.0);
}

TEST(Catalog, SlotsFormAThreeByThreeGrid) {
  std::set<std::pair<double, double>> seen;
  for (std::size_t s = 0; s < 9; ++s) {
    auto c = slot_coordinate(s);
    EXPECT_GT(c.x, 0.0);
    EXPECT_LT(c.x, 1.0);
    EXPECT_GT(c.y, 0.0);
    EXPECT_LT(c.y, 1.0);
    seen.insert({c.x, c.y});
  }
  EXPECT_EQ(seen.size(), 9u);
}

namespace {
const Triple kProgSize{RelationType::progression, ObjectType::shape, AttributeType::size};
const Triple kXorSize{RelationType::XOR, ObjectType::shape, AttributeType::size};
const Triple kProgNumber{RelationType::progression, ObjectType::shape, AttributeType::number};
const Triple kOrPosition{RelationType::OR, ObjectType::shape, AttributeType::position};
const Triple kAndLineType{RelationType::AND, ObjectType::line, AttributeType::type};
}  // namespace

TEST(StructureTest, CanonicalisesOrder) {
  Structure a({kAndLineType, kProgSize});
  Structure b({kProgSize, kAndLineType});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.triples().front(), kProgSize);
  EXPECT_TRUE(a.has_object(ObjectType::line));
  EXPECT_TRUE(a.has_dimension({ObjectType::shape, AttributeType::size}));
  EXPECT_EQ(a.find({ObjectType::line, AttributeType::type})->relation, RelationType::AND);
  EXPECT_EQ(a.find({ObjectType::line, AttributeType::colour}), nullptr);
}

TEST(StructureTest, RejectsInvalidSets) {
  EXPECT_THROW(Structure({}), InvalidStructure);
  EXPECT_THROW(Structure({kProgSize, kProgSize}), InvalidStructure);
  EXPECT_THROW(Structure({kProgNumber, kOrPosition}), InvalidStructure);
  EXPECT_THROW(Structure({Triple{RelationType::progression, ObjectType::line, AttributeType::type}}),
               InvalidStructure);
  const Triple five[] = {kProgSize,
                         {RelationType::OR, ObjectType::shape, AttributeType::colour},
                         {RelationType::OR, ObjectType::shape, AttributeType::type},
                         {RelationType::OR, ObjectType::line, AttributeType::colour},
                         kAndLineType};
  EXPECT_THROW(Structure(std::vector<Triple>(std::begin(five), std::end(five))), InvalidStructure);
  EXPECT_TRUE(Structure::violation(std::span<const Triple>(five, 4)) == std::nullopt);
}

TEST(StructureTest, NumberPositionCross) {
  EXPECT_TRUE(is_number_position_cross(kProgNumber, kOrPosition));
  EXPECT_TRUE(is_number_position_cross(kOrPosition, kProgNumber));
  EXPECT_FALSE(is_number_position_cross(kProgSize, kOrPosition));
}

TEST(MetaTargetTest, WorkedExample) {
  auto a = MetaTarget::parse("101000010000");
  auto b = MetaTarget::parse("100100010000");
  ASSERT_TRUE(a && b);
  EXPECT_EQ((*a | *b).to_string(), "101100010000");
}

TEST(MetaTargetTest, ParseRejectsBadInput) {
  EXPECT_FALSE(MetaTarget::parse("10100001000").has_value());
  EXPECT_FALSE(MetaTarget::parse("10100001000x").has_value());
}

TEST(MetaTargetTest, EveryTripleIsThreeHotAndMatchesOracle) {
  for (const auto& t : enumerate_viable_triples()) {
    auto m = encode_triple(t);
    EXPECT_EQ(m.count(), 3u);
    EXPECT_EQ(m.to_string(), oracle::meta_string({oracle::name_of(t)})) << to_string(t);
  }
}

TEST(MetaTargetTest, StructureEncodingIsUnionOfTriples) {
  Structure s({kXorSize, kAndLineType});
  std::vector<oracle::TripleName> names;
  for (const auto& t : s.triples()) names.push_back(oracle::name_of(t));
  EXPECT_EQ(encode_meta(s).to_string(), oracle::meta_string(names));
  // [XOR, line, colour] sets line, colour and XOR.
  Structure x({Triple{RelationType::XOR, ObjectType::line, AttributeType::colour}});
  EXPECT_EQ(encode_meta(x).to_string(), "011000001000");
}
