// Copyright 2026 The PPDR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "ppdr/dataset.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "ppdr/archive.h"
#include "ppdr/error.h"

namespace ppdr {
namespace {

Schema SmallSchema() {
  Schema s;
  s.columns = {{"age", ColumnKind::kNumeric, {}, {}},
               {"color", ColumnKind::kCategorical, {}, {}},
               {"y", ColumnKind::kLabel, {}, {}}};
  return s;
}

RawTable Parse(const std::string& text, const Schema& schema) {
  std::istringstream in(text);
  return ParseCsv(in, schema, "inline");
}

ErrorCode ParseError(const std::string& text, const Schema& schema) {
  try {
    Parse(text, schema);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "parse succeeded";
  return ErrorCode::kInvalidArgument;
}

TEST(LoadCsv, DropsRowsWithMissingValues) {
  const RawTable t = Parse("age,color,y\n1,red,a\n?,blue,b\n3,blue,a\n", SmallSchema());
  EXPECT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.dropped, 1u);
  EXPECT_EQ(t.source_rows, (std::vector<std::uint64_t>{0, 2}));
}

TEST(LoadCsv, ColumnSpecificMissingValues) {
  Schema s = SmallSchema();
  s.columns[1].missing_values = {"unknown"};
  const RawTable t = Parse("age,color,y\n1,unknown,a\n2,red,b\n", s);
  EXPECT_EQ(t.rows.size(), 1u);
}

TEST(LoadCsv, SemicolonDelimiterIsDetected) {
  const RawTable t = Parse("age;color;y\n1;red;a\n2;blue;b\n", SmallSchema());
  EXPECT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1][1], "blue");
}

TEST(LoadCsv, SchemaMismatches) {
  EXPECT_EQ(ParseError("age,color,y,extra\n1,red,a,0\n", SmallSchema()),
            ErrorCode::kSchemaMismatch);
  EXPECT_EQ(ParseError("age,y\n1,a\n", SmallSchema()), ErrorCode::kSchemaMismatch);
  EXPECT_EQ(ParseError("", SmallSchema()), ErrorCode::kSchemaMismatch);
  EXPECT_EQ(ParseError("age,color,y\n?,red,a\n", SmallSchema()),
            ErrorCode::kEmptyAfterDropping);
}

TEST(LoadCsv, MissingFileNamesPath) {
  try {
    LoadCsv("/nonexistent/ppdr/file.csv", SmallSchema());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFileNotFound);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/ppdr/file.csv"),
              std::string::npos);
  }
}

TEST(BinaryEncode, Widths) {
  EXPECT_EQ(BinaryWidth(2), 1);
  EXPECT_EQ(BinaryWidth(3), 2);
  EXPECT_EQ(BinaryWidth(4), 2);
  EXPECT_EQ(BinaryWidth(5), 3);
  EXPECT_EQ(BinaryWidth(16), 4);
  EXPECT_EQ(BinaryWidth(17), 5);
}

TEST(BinaryEncode, TwoCategoriesGiveOneColumn) {
  const LabeledDataset d =
      BinaryEncode(Parse("age,color,y\n1,red,a\n2,blue,b\n", SmallSchema()));
  EXPECT_EQ(d.cols(), 2);
  // Lexicographic codes: blue=0, red=1.
  EXPECT_EQ(d.features(0, 1), 1.0);
  EXPECT_EQ(d.features(1, 1), 0.0);
  EXPECT_EQ(d.target("y").classes, (std::vector<std::string>{"a", "b"}));
}

TEST(BinaryEncode, MostSignificantBitFirst) {
  const LabeledDataset d = BinaryEncode(
      Parse("age,color,y\n1,a,p\n1,b,p\n1,c,q\n1,d,q\n1,e,q\n", SmallSchema()));
  ASSERT_EQ(d.cols(), 4);
  // 'e' has code 4 = 100b.
  EXPECT_EQ(d.features(4, 1), 1.0);
  EXPECT_EQ(d.features(4, 2), 0.0);
  EXPECT_EQ(d.features(4, 3), 0.0);
  // 'd' has code 3 = 011b.
  EXPECT_EQ(d.features(3, 1), 0.0);
  EXPECT_EQ(d.features(3, 2), 1.0);
  EXPECT_EQ(d.features(3, 3), 1.0);
}

TEST(BinaryEncode, NumericLabelClassesSortNumerically) {
  const LabeledDataset d = BinaryEncode(
      Parse("age,color,y\n1,a,10\n1,b,9\n1,a,2\n", SmallSchema()));
  EXPECT_EQ(d.target("y").classes, (std::vector<std::string>{"2", "9", "10"}));
}

TEST(BinaryEncode, Errors) {
  auto code = [](const std::string& text) {
    try {
      BinaryEncode(Parse(text, SmallSchema()));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  EXPECT_EQ(code("age,color,y\n1,red,a\n2,red,b\n"), ErrorCode::kSingleCategoryColumn);
  EXPECT_EQ(code("age,color,y\nx,red,a\n2,blue,b\n"), ErrorCode::kSchemaMismatch);
}

LabeledDataset Grid(int lu, int lp, int per) {
  LabeledDataset d;
  const int n = lu * lp * per;
  d.features.resize(n, 2);
  Target u, p;
  for (int a = 0; a < lu; ++a) u.classes.push_back("u" + std::to_string(a));
  for (int b = 0; b < lp; ++b) p.classes.push_back("p" + std::to_string(b));
  int r = 0;
  for (int a = 0; a < lu; ++a) {
    for (int b = 0; b < lp; ++b) {
      for (int i = 0; i < per; ++i, ++r) {
        d.features(r, 0) = a;
        d.features(r, 1) = b * 100 + i;
        u.labels.push_back(a);
        p.labels.push_back(b);
        d.row_ids.push_back(static_cast<std::uint64_t>(r));
      }
    }
  }
  d.feature_names = {"f0", "f1"};
  d.targets.emplace("u", u);
  d.targets.emplace("p", p);
  return d;
}

TEST(BalancedSample, CountsPerCombinationAndDisjoint) {
  const LabeledDataset d = Grid(2, 3, 15);
  const DataSplits s = BalancedSample(d, "u", "p", {10, 4, 2, 4, 7});
  EXPECT_EQ(s.training.rows(), 24);
  EXPECT_EQ(s.testing.rows(), 12);
  EXPECT_EQ(s.adversary.rows(), 24);
  std::map<std::pair<int, int>, int> counts;
  for (std::size_t i = 0; i < s.testing.row_ids.size(); ++i) {
    ++counts[{s.testing.target("u").labels[i], s.testing.target("p").labels[i]}];
  }
  for (const auto& [k, v] : counts) EXPECT_EQ(v, 2);
  std::set<std::uint64_t> all;
  for (const auto* split : {&s.training, &s.testing, &s.adversary}) {
    all.insert(split->row_ids.begin(), split->row_ids.end());
  }
  EXPECT_EQ(all.size(), 60u);
}

TEST(BalancedSample, DeterministicUnderSeed) {
  const LabeledDataset d = Grid(2, 2, 20);
  const DataSplits a = BalancedSample(d, "u", "p", {10, 4, 2, 4, 3});
  const DataSplits b = BalancedSample(d, "u", "p", {10, 4, 2, 4, 3});
  const DataSplits c = BalancedSample(d, "u", "p", {10, 4, 2, 4, 4});
  EXPECT_EQ(a.training.row_ids, b.training.row_ids);
  EXPECT_NE(a.training.row_ids, c.training.row_ids);
}

TEST(BalancedSample, ShortCombinationIsNamed) {
  const LabeledDataset d = Grid(2, 2, 5);
  try {
    BalancedSample(d, "u", "p", {10, 4, 2, 4, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientSamples);
    EXPECT_NE(std::string(e.what()).find("u=u0"), std::string::npos);
  }
}

TEST(StratifiedFolds, EachClassSpreadEvenly) {
  std::vector<int> labels;
  for (int i = 0; i < 23; ++i) labels.push_back(0);
  for (int i = 0; i < 11; ++i) labels.push_back(1);
  const auto f = StratifiedFolds(labels, 2, 5, 9);
  for (int l = 0; l < 2; ++l) {
    std::vector<int> per(5, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == l) ++per[static_cast<std::size_t>(f[i])];
    }
    EXPECT_LE(*std::max_element(per.begin(), per.end()) -
                  *std::min_element(per.begin(), per.end()),
              1);
  }
  EXPECT_EQ(f, StratifiedFolds(labels, 2, 5, 9));
}

TEST(Standardizer, ZeroMeanUnitScaleAndConstantColumns) {
  linalg::Matrix x(4, 2);
  x << 1, 5, 2, 5, 3, 5, 4, 5;
  const Standardizer s = Standardizer::Fit(x);
  const linalg::Matrix z = s.Apply(x);
  EXPECT_NEAR(z.col(0).mean(), 0.0, 1e-15);
  EXPECT_NEAR(z.col(0).squaredNorm() / 4.0, 1.0, 1e-12);
  EXPECT_EQ(z.col(1).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Archive, RoundTripAndDigest) {
  const LabeledDataset d = Grid(2, 2, 10);
  DataSplits s = BalancedSample(d, "u", "p", {10, 4, 2, 4, 5});
  DatasetArchive a;
  a.dataset = "grid";
  a.utility_target = "u";
  a.privacy_target = "p";
  a.split_spec = {10, 4, 2, 4, 5};
  a.splits = {s.training, s.testing, s.adversary};
  const auto dir = std::filesystem::temp_directory_path() / "ppdr_archive_test";
  std::filesystem::remove_all(dir);
  WriteArchive(dir / "a", a);
  WriteArchive(dir / "b", a);
  EXPECT_EQ(ArchiveDigest(dir / "a"), ArchiveDigest(dir / "b"));
  const DatasetArchive back = ReadArchive(dir / "a");
  const LabeledDataset& t = back.split(SplitRole::kTesting);
  EXPECT_EQ(t.features, s.testing.features);
  EXPECT_EQ(t.row_ids, s.testing.row_ids);
  EXPECT_EQ(t.target("p").labels, s.testing.target("p").labels);
  std::filesystem::remove_all(dir);
}

TEST(Archive, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.125, 0.0}) {
    EXPECT_EQ(std::stod(FormatDouble(v)), v);
  }
  EXPECT_EQ(FormatDouble(0.5), "0.5");
}

}  // namespace
}  // namespace ppdr
