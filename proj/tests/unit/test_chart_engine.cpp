#include <gtest/gtest.h>

#include <random>

#include "ppmchart/chart_engine.hpp"
#include "ppmchart/fixtures.hpp"
#include "support/random_models.hpp"

using namespace ppmchart;
using ppmtest::add_event;
using ppmtest::make_event;

namespace {

std::vector<Millis> transform(std::vector<Millis> t, TimeOption o, Millis window = kDefaultWindowMs) {
  return transform_times(t, o, window);
}

Timeline line(const std::string& id, std::vector<Millis> times, ElementKind kind = ElementKind::Activity,
              OperationKind op = OperationKind::MoveActivity) {
  Timeline l{id, kind, {}};
  for (Millis t : times) l.dots.push_back({id, op, t, t, default_style(op), true, true});
  return l;
}

std::vector<std::string> ids(const std::vector<Timeline>& lines) {
  std::vector<std::string> out;
  for (const auto& l : lines) out.push_back(l.element_id);
  return out;
}

Millis utc(int y, unsigned mo, unsigned d, int h, int mi, int s) {
  using namespace std::chrono;
  const auto days = sys_days{year{y} / month{mo} / day{d}}.time_since_epoch().count();
  return days * kDayMs + h * kHourMs + mi * kMinuteMs + s * kSecondMs;
}

}  // namespace

TEST(ChartConfig, Defaults) {
  const ChartConfig c;
  EXPECT_EQ(c.time_option, TimeOption::Actual);
  EXPECT_EQ(c.time_interval, TimeInterval::Hours);
  EXPECT_EQ(c.color_by, ColorBy::Operation);
  EXPECT_EQ(c.shape_by, ShapeBy::ModelElement);
  EXPECT_EQ(c.sort_by, SortBy::DistanceFromStart);
  EXPECT_FALSE(c.descending);
  EXPECT_EQ(c.window_ms, 3'600'000);
  EXPECT_TRUE(c.filters.empty());
  EXPECT_TRUE(c.style_overrides.empty());
  ChartConfig bad;
  bad.window_ms = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(ChartConfig, OptionVocabulary) {
  EXPECT_EQ(option_count<TimeOption>(), 3u);
  EXPECT_EQ(option_count<TimeInterval>(), 12u);
  EXPECT_EQ(option_count<SortBy>(), 8u);
  EXPECT_EQ(to_string(SortBy::CreateOrderFromStart), "create-order-from-start");
  EXPECT_EQ(option_from_string<TimeInterval>("half-hours"), TimeInterval::HalfHours);
  EXPECT_EQ(option_from_string<TimeOption>("relative-ratio"), TimeOption::RelativeRatio);
  EXPECT_FALSE(option_from_string<SortBy>("random"));
}

TEST(TransformTimes, Examples) {
  EXPECT_EQ(transform({5000, 8000}, TimeOption::RelativeTime), (std::vector<Millis>{0, 3000}));
  EXPECT_EQ(transform({5000, 8000, 11000}, TimeOption::RelativeRatio),
            (std::vector<Millis>{0, 1'800'000, 3'600'000}));
  EXPECT_EQ(transform({123456}, TimeOption::RelativeRatio), (std::vector<Millis>{0}));
  EXPECT_EQ(transform({123456}, TimeOption::RelativeTime), (std::vector<Millis>{0}));
  EXPECT_EQ(transform({5000, 8000}, TimeOption::Actual), (std::vector<Millis>{5000, 8000}));
  EXPECT_TRUE(transform({}, TimeOption::RelativeRatio).empty());
  // Rounds half up: 1/3 of 1000 ms.
  EXPECT_EQ(transform({0, 1, 3}, TimeOption::RelativeRatio, 1000), (std::vector<Millis>{0, 333, 1000}));
}

TEST(TransformTimes, RatioPreservesOrderAndProportion) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const auto t = ppmtest::random_timeline(rng);
    const auto r = transform(t, TimeOption::RelativeRatio);
    for (std::size_t k = 1; k < r.size(); ++k) EXPECT_LE(r[k - 1], r[k]);
    if (t.back() == t.front()) continue;
    for (std::size_t k = 0; k < r.size(); ++k) {
      const long double exact = static_cast<long double>(t[k] - t.front()) * kDefaultWindowMs /
                                static_cast<long double>(t.back() - t.front());
      EXPECT_LE(std::abs(static_cast<long double>(r[k]) - exact), 0.5L);
    }
  }
}

TEST(SortTimelines, ByKeys) {
  std::vector<Timeline> lines{line("x", {30}), line("y", {10}), line("z", {20})};
  sort_timelines(lines, SortBy::FirstOperation, false, nullptr);
  EXPECT_EQ(ids(lines), (std::vector<std::string>{"y", "z", "x"}));

  std::vector<Timeline> spans{line("a", {0, 0}), line("b", {0, 500}), line("c", {0, 100})};
  sort_timelines(spans, SortBy::Duration, false, nullptr);
  EXPECT_EQ(ids(spans), (std::vector<std::string>{"a", "c", "b"}));
  sort_timelines(spans, SortBy::Duration, true, nullptr);
  EXPECT_EQ(ids(spans), (std::vector<std::string>{"b", "c", "a"}));

  std::vector<Timeline> named{line("m", {1}), line("b", {2}), line("k", {3})};
  sort_timelines(named, SortBy::ModelElement, false, nullptr);
  EXPECT_EQ(ids(named), (std::vector<std::string>{"b", "k", "m"}));
  sort_timelines(named, SortBy::None, false, nullptr);
  EXPECT_EQ(ids(named), (std::vector<std::string>{"b", "k", "m"}));

  std::vector<Timeline> counted{line("p", {1, 2, 3}), line("q", {1}), line("r", {1, 2})};
  sort_timelines(counted, SortBy::NumberOfOperations, false, nullptr);
  EXPECT_EQ(ids(counted), (std::vector<std::string>{"q", "r", "p"}));

  std::vector<Timeline> last{line("p", {1, 50}), line("q", {40}), line("r", {2, 3})};
  sort_timelines(last, SortBy::LastOperation, false, nullptr);
  EXPECT_EQ(ids(last), (std::vector<std::string>{"r", "q", "p"}));
}

TEST(SortTimelines, DescendingKeepsTieOrder) {
  std::vector<Timeline> lines{line("a", {10}), line("b", {20}), line("c", {10}), line("d", {20})};
  sort_timelines(lines, SortBy::FirstOperation, true, nullptr);
  EXPECT_EQ(ids(lines), (std::vector<std::string>{"b", "d", "a", "c"}));
}

TEST(SortTimelines, StableAgainstReferenceOnRandomLogs) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<Millis> coarse(0, 4);
  for (int round = 0; round < 100; ++round) {
    std::vector<Timeline> lines;
    std::vector<std::pair<Millis, std::string>> reference;
    for (int i = 0; i < 12; ++i) {
      const Millis first = coarse(rng) * 1000;
      lines.push_back(line("l" + std::to_string(i), {first, first + coarse(rng)}));
      reference.emplace_back(first, "l" + std::to_string(i));
    }
    // Insertion sort as an independent stable reference.
    std::vector<std::pair<Millis, std::string>> sorted;
    for (const auto& r : reference) {
      auto pos = sorted.end();
      while (pos != sorted.begin() && (pos - 1)->first > r.first) --pos;
      sorted.insert(pos, r);
    }
    sort_timelines(lines, SortBy::FirstOperation, false, nullptr);
    for (std::size_t i = 0; i < lines.size(); ++i) EXPECT_EQ(lines[i].element_id, sorted[i].second);
  }
}

TEST(SortTimelines, GraphSortsFallBackWithNotice) {
  std::vector<Timeline> lines{line("x", {30}), line("y", {10})};
  const SortOutcome out = sort_timelines(lines, SortBy::DistanceFromStart, false, nullptr);
  EXPECT_EQ(out.applied, SortBy::FirstOperation);
  ASSERT_EQ(out.notices.size(), 1u);
  EXPECT_EQ(out.notices[0].code, "fallback: first-operation");
  EXPECT_EQ(ids(lines), (std::vector<std::string>{"y", "x"}));
}

TEST(ApplyFilters, Examples) {
  std::vector<Timeline> lines{
      line("a", {1, 2, 3}, ElementKind::Activity),
      line("e1", {1, 2}, ElementKind::Edge, OperationKind::CreateEdge),
      line("e2", {4}, ElementKind::Edge, OperationKind::CreateEdge),
  };
  lines[0].dots[0].operation = OperationKind::CreateActivity;
  lines[0].dots[2].operation = OperationKind::DeleteActivity;

  auto visible = [](const std::vector<Timeline>& ls) {
    std::vector<int> out;
    for (const auto& l : ls)
      for (const auto& d : l.dots) out.push_back(d.visible ? 1 : 0);
    return out;
  };
  apply_filters(lines, {});
  EXPECT_EQ(visible(lines), (std::vector<int>{1, 1, 1, 1, 1, 1}));
  apply_filters(lines, {.hide_element_kinds = {ElementKind::Edge}, .hide_operation_kinds = {}, .hide_elements_with_operation = {}});
  EXPECT_EQ(visible(lines), (std::vector<int>{1, 1, 1, 0, 0, 0}));
  apply_filters(lines, {.hide_element_kinds = {}, .hide_operation_kinds = {}, .hide_elements_with_operation = {OperationKind::DeleteActivity}});
  EXPECT_EQ(visible(lines), (std::vector<int>{0, 0, 0, 1, 1, 1}));
  apply_filters(lines, {.hide_element_kinds = {}, .hide_operation_kinds = {OperationKind::MoveActivity}, .hide_elements_with_operation = {}});
  EXPECT_EQ(visible(lines), (std::vector<int>{1, 0, 1, 1, 1, 1}));
  EXPECT_EQ(lines.size(), 3u);
}

TEST(Gridlines, Examples) {
  const auto ms = gridlines(0, 100, TimeInterval::L10);
  EXPECT_EQ(ms, (std::vector<Millis>{0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100}));
  EXPECT_EQ(gridlines(7, 1000, TimeInterval::L500), (std::vector<Millis>{7, 507, 1007}));

  const Millis t0 = utc(2010, 11, 24, 12, 34, 56);
  EXPECT_EQ(gridlines(t0, kHourMs, TimeInterval::Hours), (std::vector<Millis>{utc(2010, 11, 24, 13, 0, 0)}));
  EXPECT_EQ(gridlines(t0, kHourMs, TimeInterval::HalfHours),
            (std::vector<Millis>{utc(2010, 11, 24, 13, 0, 0), utc(2010, 11, 24, 13, 30, 0)}));
  EXPECT_EQ(gridlines(t0, 5 * kSecondMs, TimeInterval::Seconds).size(), 6u);
  EXPECT_TRUE(gridlines(t0, kHourMs, TimeInterval::Months).empty());
  const Millis eom = utc(2010, 11, 30, 23, 30, 0);
  EXPECT_EQ(gridlines(eom, kHourMs, TimeInterval::Months), (std::vector<Millis>{utc(2010, 12, 1, 0, 0, 0)}));
  EXPECT_EQ(gridlines(eom, 40 * kDayMs, TimeInterval::Years), (std::vector<Millis>{utc(2011, 1, 1, 0, 0, 0)}));
  // 2010-11-29 was a Monday.
  EXPECT_EQ(gridlines(t0, 7 * kDayMs, TimeInterval::Weeks), (std::vector<Millis>{utc(2010, 11, 29, 0, 0, 0)}));
  EXPECT_EQ(gridlines(t0, 2 * kDayMs, TimeInterval::Days),
            (std::vector<Millis>{utc(2010, 11, 25, 0, 0, 0), utc(2010, 11, 26, 0, 0, 0)}));
  // A boundary exactly at t0 is included.
  EXPECT_EQ(gridlines(utc(2010, 11, 24, 13, 0, 0), kMinuteMs, TimeInterval::Minutes).size(), 2u);
}

TEST(BuildChart, EmptyLogHasLegend) {
  const ChartModel chart = build_chart(EventLog{}, ChartConfig{});
  EXPECT_TRUE(chart.timelines.empty());
  EXPECT_EQ(chart.legend.size(), 26u);
}

TEST(BuildChart, DefaultConfigUsesDistanceOrder) {
  const ChartModel chart = build_chart(fixtures::chain_log(), ChartConfig{});
  EXPECT_EQ(ids(chart.timelines), (std::vector<std::string>{"s", "e1", "a", "e2", "t"}));
  EXPECT_TRUE(chart.notices.empty());
  EXPECT_EQ(chart.t0, fixtures::kSessionEpoch);
  EXPECT_EQ(chart.visible_dot_count(), 7u);
  EXPECT_EQ(chart.gridline_times, (std::vector<Millis>{fixtures::kSessionEpoch, fixtures::kSessionEpoch + kHourMs}));
}

TEST(BuildChart, UniformStyleWhenCodingOff) {
  ChartConfig c;
  c.color_by = ColorBy::None;
  c.shape_by = ShapeBy::None;
  const ChartModel chart = build_chart(fixtures::generate_session(fixtures::preflight_shape()).log, c);
  for (const auto& l : chart.timelines)
    for (const auto& d : l.dots) EXPECT_EQ(d.style, (DotStyle{palette::kMidGrey, Shape::Circle}));
}

TEST(BuildChart, StyleOverrides) {
  ChartConfig c;
  c.style_overrides[OperationKind::CreateActivity] = {Rgb{1, 2, 3}, Shape::Diamond};
  const ChartModel chart = build_chart(fixtures::chain_log(), c);
  EXPECT_EQ(chart.timelines[2].dots[0].style, (DotStyle{Rgb{1, 2, 3}, Shape::Diamond}));
  EXPECT_EQ(chart.legend[2].style, (DotStyle{Rgb{1, 2, 3}, Shape::Diamond}));
}

TEST(BuildChart, PositionFreeLogUsesUnitLengths) {
  EventLog log = fixtures::chain_log();
  for (auto& t : log.traces)
    for (auto& ev : t.events) ev.position.reset();
  const ChartModel chart = build_chart(log, ChartConfig{});
  ASSERT_EQ(chart.notices.size(), 1u);
  EXPECT_EQ(chart.notices[0].code, "fallback: unit-length");
  EXPECT_EQ(ids(chart.timelines), (std::vector<std::string>{"s", "e1", "a", "e2", "t"}));
}

TEST(BuildChart, ReplayFailureFallsBack) {
  EventLog log = fixtures::chain_log();
  add_event(log, make_event("s", OperationKind::CreateStartEvent, 10));
  const ChartModel chart = build_chart(log, ChartConfig{});
  ASSERT_EQ(chart.notices.size(), 2u);
  EXPECT_EQ(chart.notices[0].code, "replay-failed");
  EXPECT_EQ(chart.notices[1].code, "fallback: first-operation");
}

TEST(BuildChart, OutOfWindowDotsStayInModel) {
  ChartConfig c;
  c.window_ms = 2500;
  const ChartModel chart = build_chart(fixtures::chain_log(), c);
  std::size_t in = 0, out = 0;
  for (const auto& l : chart.timelines)
    for (const auto& d : l.dots) (d.in_window ? in : out)++;
  EXPECT_EQ(in, 3u);
  EXPECT_EQ(out, 4u);
}

TEST(BuildChart, TooManyGridlinesBecomeNotice) {
  ChartConfig c;
  c.time_interval = TimeInterval::L1;
  const ChartModel chart = build_chart(fixtures::chain_log(), c);
  EXPECT_TRUE(chart.gridline_times.empty());
  ASSERT_FALSE(chart.notices.empty());
  EXPECT_EQ(chart.notices.back().code, "gridlines-omitted");
}

TEST(BuildChart, VisibleSetIndependentOfSort) {
  const EventLog log = fixtures::generate_session(fixtures::mortgage_shape()).log;
  ChartConfig c;
  c.filters.hide_operation_kinds = {OperationKind::MoveActivity};
  c.filters.hide_element_kinds = {ElementKind::XorGateway};
  std::optional<std::multiset<std::tuple<std::string, OperationKind, Millis>>> first;
  for (std::size_t s = 0; s < option_count<SortBy>(); ++s) {
    c.sort_by = static_cast<SortBy>(s);
    const ChartModel chart = build_chart(log, c);
    std::multiset<std::tuple<std::string, OperationKind, Millis>> seen;
    for (const auto& l : chart.timelines)
      for (const auto& d : l.dots)
        if (d.visible) seen.emplace(d.element_id, d.operation, d.t_actual);
    if (!first) first = seen;
    EXPECT_EQ(seen, *first) << to_string(c.sort_by);
    EXPECT_EQ(chart, build_chart(log, c));
  }
}
