#include <catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "tfpl/report.hpp"

using namespace tfpl;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("parameter hash is stable and sensitive") {
  OperatorParams a;
  const std::string h = param_hash(a);
  CHECK(h.size() == 16);
  CHECK(h == param_hash(a));
  a.lambda = 1e-12;
  CHECK(h != param_hash(a));
}

TEST_CASE("diagnostics CSV") {
  DiagnosticsReport rep;
  rep.add(CheckRecord{"hopf_ratio", 0.1, 0.0, true, "pass", ""});
  rep.add(CheckRecord{"narrow,region", -1.0 / 3.0, -0.5, false, "say \"no\"", ""});
  const std::string csv = format_diagnostics_csv(rep, "abc");
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  CHECK(line == "check,param_hash,value,threshold,verdict");
  std::getline(is, line);
  CHECK(line == "hopf_ratio,abc,0.10000000000000001,0,pass");
  std::getline(is, line);
  CHECK(line == "\"narrow,region\",abc,-0.33333333333333331,-0.5,\"say \"\"no\"\"\"");
  CHECK_FALSE(rep.all_passed());
}

TEST_CASE("SVG output") {
  const std::string svg = svg_plot("t<1>", "x", "y", {PlotSeries{"a", {0, 1, 2}, {1, 0, 1}, false, true}});
  CHECK_THAT(svg, ContainsSubstring("<svg") && ContainsSubstring("polyline") && ContainsSubstring("t&lt;1&gt;"));
  CHECK_THAT(svg_plot("empty", "x", "y", {}), ContainsSubstring("</svg>"));

  const Field f = RadialField::sample(2, 8, [](double r) { return 1.0 - r; });
  CHECK_THAT(svg_profile(f, 0.5, 0.3), ContainsSubstring("c_hat d^s"));
}

TEST_CASE("text files") {
  const std::string path = "tfpl_report_test.txt";
  write_text_file(path, "hello\n");
  std::ifstream is(path);
  std::string s;
  std::getline(is, s);
  CHECK(s == "hello");
  std::remove(path.c_str());
  CHECK_THROWS_AS(write_text_file("/nonexistent/dir/x.txt", "x"), Error);
}
