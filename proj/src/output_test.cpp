#include <gtest/gtest.h>

#include <cstdlib>
#include <string>

#include "degenwave/output.hpp"

using namespace degenwave;

namespace {

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST(Output, NumbersRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    const std::string s = format_number(x);
    EXPECT_EQ(std::strtod(s.c_str(), nullptr), x) << s;
  }
  EXPECT_EQ(format_number(0.5), "0.5");
}

TEST(Output, CsvLayout) {
  const Vector t{0.0, 0.5}, e{1.0, 0.25};
  EXPECT_EQ(csv_text({{"t", &t}, {"E", &e}}), "t,E\n0,1\n0.5,0.25\n");
  const Vector shorter{1.0};
  EXPECT_THROW(csv_text({{"t", &t}, {"E", &shorter}}), std::invalid_argument);
  EXPECT_THROW(csv_text({}), std::invalid_argument);
}

TEST(Output, SvgIsDeterministic) {
  PlotSeries a{"k=1", {0, 1, 2, 3}, {1, 0.8, 0.7, 0.65}};
  PlotSeries b{"k=2 <x>", {0, 1, 2, 3}, {1, 0.9, 0.85, 0.8}};
  PlotStyle st;
  st.title = "E(t)";
  const std::string s1 = render_svg({a, b}, st);
  EXPECT_EQ(s1, render_svg({a, b}, st));
  EXPECT_EQ(s1.rfind("<svg", 0), 0u);
  EXPECT_EQ(count(s1, "<polyline"), 2u);
  EXPECT_NE(s1.find("k=2 &lt;x&gt;"), std::string::npos);
  EXPECT_NE(s1.find("</svg>"), std::string::npos);
}

TEST(Output, LogLogSkipsNonPositiveSamples) {
  PlotSeries a{"E", {0, 1, 10, 100}, {1, 0.5, 0.05, 0.005}};
  PlotStyle st;
  st.loglog = true;
  const std::string s = render_svg({a}, st);
  EXPECT_NE(s.find("t (log)"), std::string::npos);
  // Three drawable points (t = 0 dropped).
  const auto p = s.find("points=\"");
  const auto q = s.find('"', p + 8);
  EXPECT_EQ(count(s.substr(p + 8, q - p - 8), ","), 3u);
}

TEST(Output, ConstantSeriesIsDrawnFlat) {
  PlotSeries a{"E", {0, 1, 2}, {1, 1, 1}};
  const std::string s = render_svg({a}, PlotStyle{});
  const auto p = s.find("points=\"") + 8;
  const auto pts = s.substr(p, s.find('"', p) - p);
  std::vector<std::string> ys;
  for (std::size_t i = 0; i < pts.size();) {
    const auto comma = pts.find(',', i);
    const auto space = pts.find(' ', comma);
    ys.push_back(pts.substr(comma + 1, space == std::string::npos ? std::string::npos : space - comma - 1));
    if (space == std::string::npos) break;
    i = space + 1;
  }
  ASSERT_EQ(ys.size(), 3u);
  EXPECT_EQ(ys[0], ys[1]);
  EXPECT_EQ(ys[1], ys[2]);
}

TEST(Output, LongSeriesAreReduced) {
  PlotSeries a{"E", Vector(100000), Vector(100000)};
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    a.x[i] = static_cast<double>(i);
    a.y[i] = 1.0 / (1.0 + static_cast<double>(i));
  }
  PlotStyle st;
  const std::string s = render_svg({a}, st);
  const auto p = s.find("points=\"") + 8;
  EXPECT_LE(count(s.substr(p, s.find('"', p) - p), ","), 2 * st.max_points + 2);
}

TEST(Output, NothingToDrawIsAnError) {
  EXPECT_THROW(render_svg({}, PlotStyle{}), std::invalid_argument);
  PlotSeries nan{"x", {0.0}, {std::numeric_limits<double>::quiet_NaN()}};
  EXPECT_THROW(render_svg({nan}, PlotStyle{}), std::invalid_argument);
}
