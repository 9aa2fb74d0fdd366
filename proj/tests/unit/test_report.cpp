#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "chest/report.hpp"

using namespace chest;
namespace fs = std::filesystem;

namespace {

std::vector<MetricsRecord> sample_records() {
  std::vector<MetricsRecord> out;
  for (const char* m : {"ls", "emdt", "denoise", "bml"}) {
    for (double snr : {10.0, -10.0, 0.0}) {
      MetricsRecord r;
      r.method = m;
      r.snr_db = snr;
      r.n_pilots = 32;
      r.trials = 500;
      r.nmse_empirical = 1.0 / 3.0 * (snr + 20);
      if (std::string(m) == "emdt") r.nmse_analytic = NmseBreakdown{0.3, 0.1, 0.2};
      out.push_back(r);
    }
  }
  return out;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Csv, HeaderRowCountAndOrder) {
  const auto rows = lines(format_csv(sample_records()));
  ASSERT_EQ(rows.size(), 13u);
  EXPECT_EQ(rows[0], kCsvHeader);
  EXPECT_EQ(rows[1].rfind("bml,-10,32,", 0), 0u);
  EXPECT_EQ(rows[12].rfind("ls,10,32,", 0), 0u);
}

TEST(Csv, NineSignificantDigitsAndEmptyFields) {
  const auto rows = lines(format_csv(sample_records()));
  EXPECT_EQ(rows[1], "bml,-10,32,3.33333333,,,,500");
  EXPECT_EQ(rows[7], "emdt,-10,32,3.33333333,0.1,0.2,,500");
  EXPECT_EQ(rows[9], "emdt,10,32,10,0.1,0.2,,500");
}

TEST(Csv, EmptyInputFailsWithoutCreatingFile) {
  const fs::path p = fs::temp_directory_path() / "chest_report_empty" / "out.csv";
  fs::remove_all(p.parent_path());
  EXPECT_THROW(emit_csv({}, p), std::invalid_argument);
  EXPECT_FALSE(fs::exists(p));
}

TEST(Csv, WritesIdenticalBytesTwice) {
  const fs::path dir = fs::temp_directory_path() / "chest_report_twice";
  emit_csv(sample_records(), dir / "a.csv");
  emit_csv(sample_records(), dir / "b.csv");
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  EXPECT_EQ(slurp(dir / "a.csv"), format_csv(sample_records()));
  fs::remove_all(dir);
}

TEST(Csv, UnwritablePathNamesThePath) {
  const fs::path blocker = fs::temp_directory_path() / "chest_report_blocker";
  { std::ofstream(blocker) << "x"; }
  try {
    emit_csv(sample_records(), blocker / "out.csv");
    FAIL() << "expected an error";
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("chest_report_blocker"), std::string::npos);
  }
  fs::remove(blocker);
}

TEST(Plot, SvgHasOnePolylinePerSeries) {
  const fs::path p = fs::temp_directory_path() / "chest_plot.svg";
  emit_plot(sample_records(), p, PlotMetric::nmse_db);
  const std::string svg = slurp(p);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  std::size_t count = 0;
  for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++count;
  EXPECT_EQ(count, 4u);
  EXPECT_NE(svg.find("NMSE [dB]"), std::string::npos);
  fs::remove(p);
}

TEST(EcdfCsv, EndsAtOneAndIsCapped) {
  std::vector<double> s;
  for (int i = 1; i <= 5000; ++i) s.push_back(i * 0.01);
  const std::vector<EcdfTable> tables{{"ls", -10.0, Ecdf(s)}, {"emdt", -10.0, Ecdf({1.0, 2.0})}};
  const auto rows = lines(format_ecdf_csv(tables, 100));
  EXPECT_EQ(rows[0], "method,snr_db,post_snr_db,cdf");
  EXPECT_EQ(rows.size(), 1u + 100u + 2u);
  EXPECT_EQ(rows[100], "ls,-10,16.9897,1");
  EXPECT_EQ(rows.back(), "emdt,-10,3.01029996,1");
}
