#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "helpers.hpp"
#include "supertrace/errors.hpp"
#include "supertrace/io.hpp"

namespace supertrace {
namespace {

using testing::rp;
namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("supertrace_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name, std::ios::binary) << text;
  }
  fs::path dir_;
};

std::string without_whitespace(std::string text) {
  std::erase_if(text, [](char c) { return c == ' ' || c == '\n'; });
  return text;
}

ErrorCode parse_error(std::string_view text) {
  try {
    parse_document(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for " << text;
  return ErrorCode::InvalidArgument;
}

// Documents ----------------------------------------------------------------

TEST(Documents, ShannonSystemRoundTrip) {
  const SystemDocument doc = to_document(builtin_system("shannon"));
  const std::string text = serialize(doc);
  const ParsedDocument back = parse_document(text);
  const auto* s = std::get_if<SystemDocument>(&back.value);
  ASSERT_NE(s, nullptr);
  EXPECT_EQ(s->structure, doc.structure);
  EXPECT_EQ(s->psis, doc.psis);
  EXPECT_EQ(serialize(*s), text);
}

TEST(Documents, StructureAndOperatorRoundTrip) {
  const AffineStructure a = build_oversampling_structure(2, 3);
  const ParsedDocument parsed = parse_document(serialize(a));
  const auto* back = std::get_if<AffineStructure>(&parsed.value);
  ASSERT_NE(back, nullptr);
  EXPECT_EQ(*back, a);
  for (const FiberOperator& t :
       {FiberOperator::identity(), FiberOperator::rank_one(special_fiber(1, 0, 0, {0.0, 1.0})),
        FiberOperator::elementary({0, 0}, {2, 1})}) {
    const std::string text = serialize(t);
    EXPECT_EQ(serialize(parse_document(text).value), text);
  }
}

TEST(Documents, StructureUsesOneBasedSigma) {
  const std::string text = serialize(build_oversampling_structure(2, 3));
  EXPECT_NE(text.find("\"sigma\""), std::string::npos);
  const std::string compact = without_whitespace(text);
  EXPECT_NE(compact.find("[2,1,3]"), std::string::npos) << compact;
}

TEST(Documents, RejectsBadRationalsAndUnknownFields) {
  const std::string base = serialize(builtin_system("shannon-scaling").psis()[0]);
  std::string bad = base;
  bad.replace(bad.find("\"-1\""), 4, "\"3/0\"");
  EXPECT_EQ(parse_error(bad), ErrorCode::RationalSyntaxError);
  std::string extra = base;
  extra.insert(extra.find('{') + 1, "\"colour\": 1,");
  EXPECT_EQ(parse_error(extra), ErrorCode::SchemaError);
  EXPECT_EQ(parse_error("{"), ErrorCode::SchemaError);
  EXPECT_EQ(parse_error(R"({"kind":"function","version":"2","label":"x","components":[]})"),
            ErrorCode::SchemaError);
}

TEST(Documents, SchemaErrorCarriesPath) {
  const std::string text =
      R"({"kind":"function","version":"1","label":"x","components":[{"breakpoints":["0","1"],"pieces":[{"value":[1,0],"phase":"0"}]}]})";
  try {
    parse_document(text);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SchemaError);
    EXPECT_NE(std::string(e.what()).find("components/0/pieces/0"), std::string::npos) << e.what();
  }
}

TEST(Documents, NonCanonicalSpectrumIsFlagged) {
  const std::string text =
      R"({"kind":"function","version":"1","label":"x","components":[{"breakpoints":["0","1","2"],"pieces":[{"value":[1,0],"mod":"0"},{"value":[1,0],"mod":"0"}]}]})";
  const ParsedDocument p = parse_document(text);
  EXPECT_TRUE(p.canonicalized);
  const auto& f = std::get<VectorFunction>(p.value);
  EXPECT_EQ(f.components[0].segments().size(), 1u);
}

// Reports ------------------------------------------------------------------

TEST(Reports, ResidualFormatting) {
  EXPECT_EQ(format_residual(0.0), "0.0e0");
  EXPECT_EQ(format_residual(1.5e-13), "1.5e-13");
  EXPECT_EQ(format_residual(1.0), "1.0e0");
}

TEST(Reports, JsonCarriesRequiredKeys) {
  const CheckReport r = check_strong_disjointness({shannon_spectrum()}, {half_shannon_spectrum()});
  const std::string json = report_json(r, "check-disjoint");
  for (const char* key : {"\"passed\"", "\"mode\"", "\"max_residual\"", "\"witness\"",
                          "\"cells_checked\"", "\"tolerance\""}) {
    EXPECT_NE(json.find(key), std::string::npos) << key;
  }
  const CheckReport ok = check_wavelet_scalar({shannon_spectrum()});
  EXPECT_NE(report_json(ok, "check-wavelet").find("\"witness\": null"), std::string::npos);
}

TEST(Reports, TextWitnessLine) {
  const CheckReport r = check_strong_disjointness({shannon_spectrum()}, {half_shannon_spectrum()});
  const std::string text = report_text(r, "check-disjoint");
  EXPECT_NE(text.find("eq offset-sum-cross, s=-1, xi in [1/1,3/2]·π"), std::string::npos) << text;
}

TEST(Reports, CsvDialect) {
  const std::string csv = to_csv({{rp(1, 3), {0.5, -1.0}}, {rp(-2), {1.0, 0.0}}});
  EXPECT_EQ(csv, "xi_num,xi_den,value_re,value_im\n1,3,0.5,-1\n-2,1,1,0\n");
}

TEST(Reports, CsvRowsMatchCellsOrGrid) {
  const CheckReport exact = check_wavelet_scalar({shannon_spectrum()});
  EXPECT_EQ(static_cast<long>(csv_rows(exact).size()), exact.cells_checked);
  CheckOptions grid;
  grid.mode = Mode::Grid;
  grid.grid_points = 200;
  const CheckReport g = check_ntf_translates({testing::vec(shannon_scaling_spectrum())},
                                             AffineStructure::classical(), rp(-1), rp(1), grid);
  EXPECT_EQ(csv_rows(g).size(), 200u);
  EXPECT_EQ(g.cells_checked, 200);
}

// Command line -------------------------------------------------------------

TEST_F(CliTest, BuiltinDocumentsParse) {
  for (const auto& name : builtin_names()) {
    const CliRun r = run({"--builtin", name});
    EXPECT_EQ(r.code, 0) << name;
    EXPECT_NO_THROW(parse_document(r.out)) << name;
  }
}

TEST_F(CliTest, ShannonCheckWavelet) {
  write("shannon.json", run({"--builtin", "shannon"}).out);
  const CliRun r = run({"check-wavelet", path("shannon.json"), "--mode", "exact"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("residual 0.0e0"), std::string::npos) << r.out;
}

TEST_F(CliTest, OversampleThenCheck) {
  write("shannon.json", run({"--builtin", "shannon"}).out);
  const CliRun o = run({"oversample", path("shannon.json"), "--N", "2", "--p", "3", "--out", path("super.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  const CliRun r = run({"check-wavelet", path("super.json")});
  EXPECT_EQ(r.code, 0) << r.out;
}

TEST_F(CliTest, CheckDisjointWitness) {
  write("shannon.json", run({"--builtin", "shannon"}).out);
  write("half.json", run({"--builtin", "half-shannon"}).out);
  const CliRun r = run({"check-disjoint", path("shannon.json"), path("half.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("eq offset-sum-cross, s=-1, xi in [1/1,3/2]·π"), std::string::npos) << r.out;
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({"check-wavelet", path("missing.json")}).code, 2);
  write("broken.json", "{\"kind\": \"system\"");
  EXPECT_EQ(run({"validate", path("broken.json")}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"check-wavelet", "builtin:shannon", "--mode", "fuzzy"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"oversample", "builtin:shannon", "--N", "2", "--p", "2"}).code, 2);
  // Exact evaluation of a modulated system is unsupported.
  const std::string modulated =
      R"({"kind":"function","version":"1","label":"m","components":[{"breakpoints":["-1","1"],"pieces":[{"value":[1,0],"mod":"1"}]}]})";
  write("mod.json", modulated);
  EXPECT_EQ(run({"check-ntf", path("mod.json")}).code, 3);
  EXPECT_EQ(run({"check-ntf", path("mod.json"), "--mode", "grid", "--grid-points", "64"}).code, 0);
  // A structure with a violated angle condition.
  write("bad.json", R"({"kind":"structure","version":"1","n":2,"N":2,"sigma":[1,2],"theta":["1/3","0"]})");
  const CliRun v = run({"validate", path("bad.json")});
  EXPECT_EQ(v.code, 1);
  EXPECT_NE(v.out.find("violation at k=1"), std::string::npos) << v.out;
}

TEST_F(CliTest, CsvAndReportFiles) {
  const CliRun r = run({"check-wavelet", "builtin:shannon", "--csv", path("s.csv"), "--report", path("s.json")});
  ASSERT_EQ(r.code, 0);
  const std::string csv = slurp(path("s.csv"));
  EXPECT_EQ(csv.rfind("xi_num,xi_den,value_re,value_im\n", 0), 0u);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  const long rows = std::count(csv.begin(), csv.end(), '\n') - 1;
  EXPECT_NE(r.out.find("cells " + std::to_string(rows) + "\n"), std::string::npos) << r.out;
  EXPECT_NE(slurp(path("s.json")).find("\"passed\": true"), std::string::npos);
}

TEST_F(CliTest, RemainingSubcommandsRun) {
  const std::vector<std::vector<std::string>> commands = {
      {"validate", "builtin:shannon"},
      {"check-ntf", "builtin:shannon-scaling", "--window", "-1", "1"},
      {"trace", "builtin:shannon-scaling"},
      {"dual-gramian", "builtin:shannon-scaling", "--row", "0", "1", "--col", "0", "1"},
      {"spectral", "builtin:shannon-scaling", "--component", "1"},
      {"spectral", "builtin:shannon", "--wavelet", "--epsilon", "1/1024"},
      {"dimension", "builtin:shannon-scaling"},
      {"dimension", "builtin:shannon", "--wavelet", "--grid-points", "32", "--seed", "5"},
      {"multiplicity", "builtin:shannon-scaling", "--xi", "1/2"},
      {"extract-qo", "builtin:shannon-scaling"},
      {"probe-limit", "builtin:shannon-scaling", "--xi", "100", "--m-max", "30"},
      {"probe-lower-bound", "builtin:shannon", "--alpha", "0", "--xi", "1/2", "--depth", "6"},
      {"offset-set", "--N", "3", "--p", "5", "--Q", "50"},
  };
  for (const auto& c : commands) {
    const CliRun r = run(c);
    EXPECT_EQ(r.code, 0) << c[0] << ": " << r.err << r.out;
  }
  const CliRun probe = run({"probe-limit", "builtin:shannon-scaling", "--xi", "100"});
  EXPECT_NE(probe.out.find("settled at m = 7"), std::string::npos) << probe.out;
}

TEST_F(CliTest, OutputIsDeterministic) {
  for (const auto& c : std::vector<std::vector<std::string>>{
           {"check-wavelet", "builtin:shannon"},
           {"dimension", "builtin:shannon", "--wavelet", "--grid-points", "64"},
           {"check-disjoint", "builtin:shannon", "builtin:half-shannon"}}) {
    std::vector<std::string> a = c, b = c;
    a.insert(a.end(), {"--csv", path("a.csv"), "--report", path("a.json")});
    b.insert(b.end(), {"--csv", path("b.csv"), "--report", path("b.json")});
    const CliRun ra = run(a), rb = run(b);
    EXPECT_EQ(ra.out, rb.out);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
    EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  }
}

}  // namespace
}  // namespace supertrace
