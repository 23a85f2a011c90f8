// One test per acceptance criterion. A listener prints a single PASS/FAIL
// line for each, with its wall-clock time.

#include <gtest/gtest.h>

#include <chrono>
#include <cstdio>
#include <random>
#include <set>
#include <thread>

#include <httplib.h>

#include "ppmchart/analytics.hpp"
#include "ppmchart/chart_engine.hpp"
#include "ppmchart/cli.hpp"
#include "ppmchart/fixtures.hpp"
#include "ppmchart/log_io.hpp"
#include "ppmchart/renderer.hpp"
#include "ppmchart/replay_graph.hpp"
#include "ppmchart/service.hpp"
#include "ppmchart/taxonomy.hpp"
#include "support/operation_table.hpp"
#include "support/patterns.hpp"
#include "support/random_models.hpp"
#include "support/svg_scan.hpp"
#include "support/temp_dir.hpp"

using namespace ppmchart;

namespace {

using Clock = std::chrono::steady_clock;

class Budget {
 public:
  explicit Budget(double seconds) : limit_(seconds), start_(Clock::now()) {}
  ~Budget() {
    const double spent = std::chrono::duration<double>(Clock::now() - start_).count();
    EXPECT_LT(spent, limit_) << "time budget exceeded";
  }

 private:
  double limit_;
  Clock::time_point start_;
};

std::vector<Timeline> random_timelines(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> lines(0, 12);
  std::uniform_int_distribution<int> op(0, static_cast<int>(kOperationKindCount) - 1);
  std::vector<Timeline> out(lines(rng));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].element_id = "el" + std::to_string(i);
    const auto times = ppmtest::random_timeline(rng, 10);
    const auto first = static_cast<OperationKind>(op(rng));
    out[i].kind = element_of(first);
    for (Millis t : times) {
      auto kind = static_cast<OperationKind>(op(rng));
      if (out[i].dots.empty()) kind = first;
      out[i].dots.push_back(Dot{out[i].element_id, kind, t, t, default_style(kind), true, true});
    }
  }
  return out;
}

FilterSpec random_filter(std::mt19937_64& rng) {
  FilterSpec f;
  std::bernoulli_distribution pick(0.15);
  for (std::size_t k = 0; k < kElementKindCount; ++k)
    if (pick(rng)) f.hide_element_kinds.insert(static_cast<ElementKind>(k));
  for (std::size_t k = 0; k < kOperationKindCount; ++k) {
    if (pick(rng)) f.hide_operation_kinds.insert(static_cast<OperationKind>(k));
    if (pick(rng)) f.hide_elements_with_operation.insert(static_cast<OperationKind>(k));
  }
  return f;
}

std::set<std::pair<std::string, std::size_t>> visible_set(const std::vector<Timeline>& lines) {
  std::set<std::pair<std::string, std::size_t>> out;
  for (const auto& l : lines)
    for (std::size_t d = 0; d < l.dots.size(); ++d)
      if (l.dots[d].visible) out.emplace(l.element_id, d);
  return out;
}

class OneLinePerCriterion : public ::testing::EmptyTestEventListener {
  void OnTestPartResult(const ::testing::TestPartResult& r) override {
    if (r.failed()) std::fprintf(stderr, "  %s:%d: %s\n", r.file_name() ? r.file_name() : "?", r.line_number(), r.message());
  }
  void OnTestEnd(const ::testing::TestInfo& info) override {
    std::printf("%s %s (%lld ms)\n", info.result()->Passed() ? "PASS" : "FAIL", info.name(),
                static_cast<long long>(info.result()->elapsed_time()));
    std::fflush(stdout);
  }
};

}  // namespace

TEST(Acceptance, TaxonomyTotality) {
  Budget budget(1.0);
  ASSERT_EQ(std::size(ppmtest::kOperationTable), kOperationKindCount);
  std::set<std::string> names;
  for (const auto& row : ppmtest::kOperationTable) {
    const auto kind = operation_from_string(row.name);
    ASSERT_TRUE(kind.has_value()) << row.name;
    EXPECT_EQ(to_string(*kind), row.name);
    EXPECT_EQ(to_string(element_of(*kind)), row.element) << row.name;
    EXPECT_EQ(to_string(category_of(*kind)), row.category) << row.name;
    EXPECT_EQ(default_style(*kind).color.hex(), ppmtest::kColourHex.at(row.colour)) << row.name;
    EXPECT_EQ(to_string(default_style(*kind).shape), row.shape) << row.name;
    names.insert(row.name);
  }
  EXPECT_EQ(names.size(), kOperationKindCount);
  for (std::size_t k = 0; k < kOperationKindCount; ++k)
    EXPECT_TRUE(names.count(std::string(to_string(static_cast<OperationKind>(k)))));
}

TEST(Acceptance, ShortestPathOracle) {
  Budget budget(10.0);
  std::mt19937_64 rng(20101124);
  int checked = 0;
  for (int round = 0; round < 200; ++round) {
    const auto rg = ppmtest::random_graph(rng, 8, 14);
    auto len = [&](const ModelArc& a) { return static_cast<double>(rg.length.at(a.element_id)); };
    if (ppmtest::brute_start_set(rg.graph).empty()) {
      EXPECT_THROW(distance_from_start(rg.graph, len), OrderingUnavailable);
      continue;
    }
    const auto brute = ppmtest::brute_force_distances(rg);
    const auto order = distance_from_start(rg.graph, len);
    for (const auto& n : rg.graph.nodes()) {
      const long long b = brute.at(n.element_id);
      const double rank = *order.rank_of(n.element_id);
      if (b == ppmtest::kNoPath)
        EXPECT_EQ(rank, kUnranked) << n.element_id;
      else
        EXPECT_EQ(rank, static_cast<double>(b)) << n.element_id;
    }
    ++checked;
  }
  EXPECT_GT(checked, 150);
}

TEST(Acceptance, CreateOrderProperty) {
  Budget budget(5.0);
  std::mt19937_64 rng(20101124);
  for (int round = 0; round < 200; ++round) {
    const auto rg = ppmtest::random_graph(rng, 8, 14);
    auto len = [&](const ModelArc& a) { return static_cast<double>(rg.length.at(a.element_id)); };
    if (ppmtest::brute_start_set(rg.graph).empty()) continue;
    const auto order = create_order_from_start(rg.graph, len);
    const auto ids = order.ids();
    auto pos = [&](const std::string& id) { return std::find(ids.begin(), ids.end(), id) - ids.begin(); };
    for (const auto& a : rg.graph.arcs()) {
      if (*order.rank_of(a.element_id) == kUnranked) continue;
      EXPECT_GT(pos(a.element_id), pos(*a.source)) << a.element_id;
      EXPECT_GT(pos(a.element_id), pos(*a.target)) << a.element_id;
    }
    std::map<std::string, double> rank;
    for (const auto& e : order.elements) rank[e.element_id] = e.rank;
    EXPECT_EQ(ids, ppmtest::reference_stable_order(rg.graph.element_ids(), rank));
    EXPECT_EQ(rank, ppmtest::reference_ranks(rg, true));
  }
}

TEST(Acceptance, TransformProperties) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<Millis> window(1, 10 * kHourMs);
  for (int round = 0; round < 1000; ++round) {
    const auto times = ppmtest::random_timeline(rng, 40);
    const Millis w = window(rng);
    const auto rel = transform_times(times, TimeOption::RelativeTime, w);
    for (std::size_t i = 1; i < times.size(); ++i) ASSERT_EQ(rel[i] - rel[i - 1], times[i] - times[i - 1]);
    EXPECT_EQ(rel.front(), 0);
    const auto ratio = transform_times(times, TimeOption::RelativeRatio, w);
    EXPECT_LE(std::abs(ratio.front() - 0), 1);
    if (times.size() == 1 || times.front() == times.back()) {
      for (Millis t : ratio) EXPECT_EQ(t, 0);
    } else {
      EXPECT_LE(std::abs(ratio.back() - w), 1);
    }
    for (std::size_t i = 1; i < ratio.size(); ++i) EXPECT_LE(ratio[i - 1], ratio[i]);
    const std::vector<Millis> single{times.front()};
    EXPECT_EQ(transform_times(single, TimeOption::RelativeRatio, w), std::vector<Millis>{0});
    EXPECT_EQ(transform_times(single, TimeOption::RelativeTime, w), std::vector<Millis>{0});
  }
}

TEST(Acceptance, FilterInvariants) {
  Budget budget(5.0);
  std::mt19937_64 rng(11);
  for (int round = 0; round < 500; ++round) {
    const auto base = random_timelines(rng);
    const FilterSpec f = random_filter(rng);
    auto filtered = base;
    apply_filters(filtered, f);
    ASSERT_EQ(filtered.size(), base.size());
    for (std::size_t i = 0; i < base.size(); ++i) ASSERT_EQ(filtered[i].dots.size(), base[i].dots.size());

    FilterSpec wider = f;
    const FilterSpec extra = random_filter(rng);
    wider.hide_element_kinds.insert(extra.hide_element_kinds.begin(), extra.hide_element_kinds.end());
    wider.hide_operation_kinds.insert(extra.hide_operation_kinds.begin(), extra.hide_operation_kinds.end());
    wider.hide_elements_with_operation.insert(extra.hide_elements_with_operation.begin(),
                                              extra.hide_elements_with_operation.end());
    auto narrower = base;
    apply_filters(narrower, wider);
    const auto small = visible_set(narrower), large = visible_set(filtered);
    EXPECT_TRUE(std::includes(large.begin(), large.end(), small.begin(), small.end()));

    for (const auto& line : filtered) {
      const bool has_op = std::any_of(line.dots.begin(), line.dots.end(), [&](const Dot& d) {
        return f.hide_elements_with_operation.count(d.operation) > 0;
      });
      if (!has_op) continue;
      for (const auto& d : line.dots) EXPECT_FALSE(d.visible) << line.element_id;
    }
  }
}

TEST(Acceptance, RenderDeterminismGlyphsGolden) {
  Budget budget(2.0);
  const ChartModel chain = build_chart(fixtures::chain_log(), ChartConfig{});
  const std::string svg = render_svg(chain);
  EXPECT_EQ(svg, render_svg(build_chart(fixtures::chain_log(), ChartConfig{})));
  EXPECT_EQ(svg, ppmtest::slurp(std::string(PPMCHART_GOLDEN_DIR) + "/chain_default.svg"));
  EXPECT_EQ(ppmtest::dot_glyphs(svg).size(), chain.visible_dot_count());

  std::mt19937_64 rng(3);
  for (int round = 0; round < 30; ++round) {
    const EventLog log = ppmtest::random_log(rng);
    ChartConfig cfg;
    cfg.filters = random_filter(rng);
    const ChartModel chart = build_chart(log, cfg);
    const std::string out = render_svg(chart);
    EXPECT_EQ(out, render_svg(chart));
    EXPECT_EQ(ppmtest::dot_glyphs(out).size(), chart.visible_dot_count());
  }
}

TEST(Acceptance, FixtureScale) {
  struct Case {
    fixtures::SessionShape shape;
    std::size_t ops;
    std::size_t activities;
  };
  for (const auto& c : {Case{fixtures::preflight_shape(), 120, 13}, Case{fixtures::mortgage_shape(), 276, 27}}) {
    const auto session = fixtures::generate_session(c.shape);
    const std::string xes = write_log(session.log, LogFormat::Xes);
    {
      Budget budget(1.0);
      const auto parsed = parse_log(xes, LogFormat::Xes);
      EXPECT_TRUE(parsed.warnings.empty());
      const ChartModel chart = build_chart(parsed.log, ChartConfig{});
      const std::string svg = render_svg(chart);
      EXPECT_EQ(ppmtest::dot_glyphs(svg).size(), c.ops);
      const auto m = basic_metrics(parsed.log);
      EXPECT_EQ(m.total_operations, c.ops);
      EXPECT_EQ(m.total_operations, session.total_operations);
      EXPECT_EQ(m.category_counts, session.category_counts);
      std::size_t activities = 0;
      for (const auto& t : parsed.log.traces)
        activities += operation_from_string(t.events.front().name) == OperationKind::CreateActivity ? 1 : 0;
      EXPECT_EQ(activities, c.activities);
      EXPECT_EQ(session.activity_count, c.activities);
    }
  }
}

TEST(Acceptance, PatternDetectors) {
  Budget budget(5.0);
  const auto cases = ppmtest::patterns::all_cases();
  ASSERT_EQ(cases.size(), 12u);
  for (const auto& c : cases) {
    EXPECT_TRUE(c.detector(c.fires())) << c.name << " did not fire";
    EXPECT_FALSE(c.detector(c.negated())) << c.name << " fired on its negation";
  }
}

TEST(Acceptance, CliMatchesService) {
  ppmtest::TempDir dir;
  const std::string body = write_log(fixtures::generate_session(fixtures::mortgage_shape()).log, LogFormat::Xes);
  const std::string log_path = dir.write("mortgage.xes", body);
  const Json config = Json::parse(
      R"({"sort_by":"create-order-from-start","time_option":"relative-ratio","time_interval":"minutes",)"
      R"("filters":{"hide_operations":["MOVE_ACTIVITY"]}})");
  const std::string config_path = dir.write("config.json", config.dump());
  const std::string svg_path = (dir.path() / "out.svg").string();

  std::ostringstream out, err;
  const std::vector<std::string> args{"ppmchart", "render", log_path, "--config", config_path, "-o", svg_path};
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  ASSERT_EQ(cli::run(static_cast<int>(argv.size()), argv.data(), out, err), 0) << err.str();
  const std::string cli_svg = ppmtest::slurp(svg_path);

  auto svc = std::make_shared<service::Service>(std::make_shared<service::LogStore>());
  service::HttpServer server(svc);
  const int port = server.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread thread([&] { server.listen_after_bind(); });
  ASSERT_TRUE(server.wait_until_ready());
  httplib::Client client("127.0.0.1", port);
  const auto up = client.Post("/api/logs?format=xes&name=mortgage", body, "application/xml");
  ASSERT_TRUE(up);
  ASSERT_EQ(up->status, 201);
  const std::string id = Json::parse(up->body)["id"];
  const auto chart = client.Post("/api/logs/" + id + "/chart", Json{{"config", config}}.dump(), "application/json");
  server.stop();
  thread.join();
  ASSERT_TRUE(chart);
  ASSERT_EQ(chart->status, 200);
  EXPECT_FALSE(cli_svg.empty());
  EXPECT_EQ(cli_svg, chart->body);
}

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  auto& listeners = ::testing::UnitTest::GetInstance()->listeners();
  delete listeners.Release(listeners.default_result_printer());
  listeners.Append(new OneLinePerCriterion);
  const int rc = RUN_ALL_TESTS();
  const auto* unit = ::testing::UnitTest::GetInstance();
  std::printf("%d/%d criteria passed\n", unit->successful_test_count(), unit->total_test_count());
  return rc;
}
