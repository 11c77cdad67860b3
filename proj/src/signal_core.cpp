#include "medresp/signal_core.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>

#include "medresp/error.hpp"

namespace medresp {

std::string_view to_string(AccelTest test) noexcept {
  return test == AccelTest::balance ? "balance" : "gait";
}

std::string_view to_string(Label label) noexcept {
  switch (label) {
    case Label::baseline: return "baseline";
    case Label::treatment: return "treatment";
    case Label::unlabeled: return "unlabeled";
  }
  return "unlabeled";
}

Label parse_label(std::string_view text) {
  if (text == "baseline") return Label::baseline;
  if (text == "treatment") return Label::treatment;
  if (text == "unlabeled") return Label::unlabeled;
  throw InputError("unknown label '" + std::string(text) + "'");
}

namespace {

constexpr std::int64_t kMicrosPerDay = 86'400'000'000LL;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

int read_int(std::string_view text, std::size_t pos, std::size_t len) {
  if (pos + len > text.size()) throw InputError("truncated timestamp");
  int value = 0;
  const char* first = text.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + len, value);
  if (ec != std::errc{} || ptr != first + len) {
    throw InputError("malformed timestamp '" + std::string(text) + "'");
  }
  return value;
}

void expect_char(std::string_view text, std::size_t pos, char c) {
  if (pos >= text.size() || (text[pos] != c && !(c == 'T' && text[pos] == 't'))) {
    throw InputError("malformed timestamp '" + std::string(text) + "'");
  }
}

}  // namespace

std::int64_t Timestamp::local_day() const noexcept {
  return floor_div(utc_micros + std::int64_t{offset_minutes} * 60'000'000LL, kMicrosPerDay);
}

Timestamp parse_rfc3339(std::string_view text) {
  using namespace std::chrono;
  const int year = read_int(text, 0, 4);
  expect_char(text, 4, '-');
  const int month = read_int(text, 5, 2);
  expect_char(text, 7, '-');
  const int day = read_int(text, 8, 2);
  expect_char(text, 10, 'T');
  const int hour = read_int(text, 11, 2);
  expect_char(text, 13, ':');
  const int minute = read_int(text, 14, 2);
  expect_char(text, 16, ':');
  const int second = read_int(text, 17, 2);

  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok() || hour > 23 || minute > 59 || second > 60) {
    throw InputError("timestamp out of range '" + std::string(text) + "'");
  }

  std::size_t pos = 19;
  std::int64_t micros = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == start) throw InputError("malformed fraction in '" + std::string(text) + "'");
    double frac = 0.0;
    double scale = 0.1;
    for (std::size_t i = start; i < pos; ++i, scale *= 0.1) frac += (text[i] - '0') * scale;
    micros = std::llround(frac * 1e6);
  }

  int offset = 0;
  if (pos < text.size() && (text[pos] == 'Z' || text[pos] == 'z')) {
    ++pos;
  } else if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    const int sign = text[pos] == '-' ? -1 : 1;
    const int oh = read_int(text, pos + 1, 2);
    expect_char(text, pos + 3, ':');
    const int om = read_int(text, pos + 4, 2);
    if (oh > 23 || om > 59) throw InputError("bad UTC offset in '" + std::string(text) + "'");
    offset = sign * (oh * 60 + om);
    pos += 6;
  } else {
    throw InputError("timestamp lacks UTC offset '" + std::string(text) + "'");
  }
  if (pos != text.size()) throw InputError("trailing characters in timestamp '" + std::string(text) + "'");

  const std::int64_t days = sys_days{ymd}.time_since_epoch().count();
  const std::int64_t local_micros =
      days * kMicrosPerDay + (std::int64_t{hour} * 3600 + minute * 60 + second) * 1'000'000LL + micros;
  return Timestamp{local_micros - std::int64_t{offset} * 60'000'000LL, offset};
}

std::string format_rfc3339(const Timestamp& ts) {
  using namespace std::chrono;
  const std::int64_t local = ts.utc_micros + std::int64_t{ts.offset_minutes} * 60'000'000LL;
  const std::int64_t days = floor_div(local, kMicrosPerDay);
  std::int64_t rem = local - days * kMicrosPerDay;
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  const int hour = static_cast<int>(rem / 3'600'000'000LL);
  rem %= 3'600'000'000LL;
  const int minute = static_cast<int>(rem / 60'000'000LL);
  rem %= 60'000'000LL;
  const int second = static_cast<int>(rem / 1'000'000LL);
  const int micros = static_cast<int>(rem % 1'000'000LL);

  char buf[64];
  int n = std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                        static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), hour,
                        minute, second);
  std::string out(buf, static_cast<std::size_t>(n));
  if (micros != 0) {
    n = std::snprintf(buf, sizeof buf, ".%06d", micros);
    while (buf[n - 1] == '0') --n;
    out.append(buf, static_cast<std::size_t>(n));
  }
  if (ts.offset_minutes == 0) {
    out += 'Z';
  } else {
    const int abs_off = std::abs(ts.offset_minutes);
    n = std::snprintf(buf, sizeof buf, "%c%02d:%02d", ts.offset_minutes < 0 ? '-' : '+', abs_off / 60,
                      abs_off % 60);
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

double quantize_seconds(double seconds) noexcept {
  return static_cast<double>(std::llround(seconds * 1e6)) / 1e6;
}

namespace {

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw InputError(std::string("non-finite value in ") + what);
  }
}

}  // namespace

AccelSeries::AccelSeries(AccelTest test, std::vector<double> t, std::vector<double> x,
                         std::vector<double> y, std::vector<double> z)
    : test_(test), t_(std::move(t)), x_(std::move(x)), y_(std::move(y)), z_(std::move(z)) {
  normalize();
}

AccelSeries::AccelSeries(AccelTest test, std::span<const TimedSample> samples) : test_(test) {
  t_.reserve(samples.size());
  x_.reserve(samples.size());
  y_.reserve(samples.size());
  z_.reserve(samples.size());
  for (const auto& s : samples) {
    t_.push_back(s.t);
    x_.push_back(s.x);
    y_.push_back(s.y);
    z_.push_back(s.z);
  }
  normalize();
}

void AccelSeries::normalize() {
  if (t_.size() != x_.size() || t_.size() != y_.size() || t_.size() != z_.size()) {
    throw InputError("acceleration arrays t/x/y/z differ in length");
  }
  if (t_.size() < 2) throw InputError("acceleration series needs at least 2 samples");
  check_finite(t_, "acceleration time");
  check_finite(x_, "acceleration x");
  check_finite(y_, "acceleration y");
  check_finite(z_, "acceleration z");
  for (double& ti : t_) {
    if (ti < 0.0) throw InputError("negative acceleration timestamp");
    ti = quantize_seconds(ti);
  }
  for (std::size_t i = 1; i < t_.size(); ++i) {
    if (!(t_[i] > t_[i - 1])) {
      throw InputError("acceleration timestamps not strictly increasing at sample " +
                       std::to_string(i));
    }
  }
}

SphericalSeries to_spherical(const AccelSeries& series) {
  SphericalSeries out;
  const std::size_t n = series.size();
  out.t.assign(series.t().begin(), series.t().end());
  out.r.resize(n);
  out.theta.resize(n);
  out.phi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = series.x()[i];
    const double y = series.y()[i];
    const double z = series.z()[i];
    const double r = std::sqrt(x * x + y * y + z * z);
    out.r[i] = r;
    out.theta[i] = r > 0.0 ? std::acos(std::clamp(z / r, -1.0, 1.0)) : 0.0;
    double phi = (x == 0.0 && y == 0.0) ? 0.0 : std::atan2(y, x);
    // atan2 may return -pi for y == -0.0; fold onto the half-open range.
    if (phi <= -std::numbers::pi) phi = std::numbers::pi;
    out.phi[i] = phi;
  }
  return out;
}

AudioRecording::AudioRecording(int sample_rate, std::vector<double> samples,
                               std::optional<std::string> source)
    : sample_rate_(sample_rate), samples_(std::move(samples)), source_(std::move(source)) {
  if (sample_rate_ <= 0) throw InputError("audio sample_rate must be positive");
  if (samples_.empty()) throw InputError("audio recording is empty");
  check_finite(samples_, "audio samples");
}

TapSession::TapSession(std::vector<TapEvent> events) : events_(std::move(events)) {
  for (std::size_t i = 0; i < events_.size(); ++i) {
    auto& e = events_[i];
    if (!std::isfinite(e.press) || !std::isfinite(e.release)) throw InputError("non-finite tap time");
    e.press = quantize_seconds(e.press);
    e.release = quantize_seconds(e.release);
    if (!(e.press < e.release)) {
      throw InputError("tap event " + std::to_string(i) + " has press >= release");
    }
    if (i > 0) {
      const auto& prev = events_[i - 1];
      if (e.press < prev.press) throw InputError("tap events not ordered by press time");
      if (e.press < prev.release) throw InputError("tap events overlap at event " + std::to_string(i));
    }
  }
}

ReactionSession::ReactionSession(std::vector<ReactionTrial> trials) : trials_(std::move(trials)) {
  for (std::size_t i = 0; i < trials_.size(); ++i) {
    auto& tr = trials_[i];
    if (!std::isfinite(tr.stimulus)) throw InputError("non-finite stimulus time");
    tr.stimulus = quantize_seconds(tr.stimulus);
    if (tr.press.has_value() != tr.release.has_value()) {
      throw InputError("reaction trial " + std::to_string(i) + " has press without release");
    }
    if (tr.press) {
      if (!std::isfinite(*tr.press) || !std::isfinite(*tr.release)) {
        throw InputError("non-finite reaction time");
      }
      tr.press = quantize_seconds(*tr.press);
      tr.release = quantize_seconds(*tr.release);
      if (!(tr.stimulus <= *tr.press && *tr.press < *tr.release)) {
        throw InputError("reaction trial " + std::to_string(i) +
                         " violates stimulus <= press < release");
      }
    }
    if (i > 0 && tr.stimulus < trials_[i - 1].stimulus) {
      throw InputError("reaction trials not ordered by stimulus time");
    }
  }
}

void validate(const ActiveTestInstance& instance) {
  if (instance.participant_id.empty()) throw InputError("participant_id is empty");
  if (!instance.has_any_test()) throw InputError("instance carries none of the five tests");
  if (instance.balance && instance.balance->test() != AccelTest::balance) {
    throw InputError("balance payload tagged as gait");
  }
  if (instance.gait && instance.gait->test() != AccelTest::gait) {
    throw InputError("gait payload tagged as balance");
  }
}

std::vector<InstancePair> pair_instances(std::span<const ActiveTestInstance> instances,
                                         const PairingWindow& window) {
  if (!(window.min_minutes < window.max_minutes)) {
    throw ContractError("pairing window requires min < max");
  }
  std::map<std::pair<std::string, std::int64_t>, std::vector<const ActiveTestInstance*>> groups;
  for (const auto& inst : instances) {
    groups[{inst.participant_id, inst.started_at.local_day()}].push_back(&inst);
  }

  const auto min_us = static_cast<std::int64_t>(std::llround(window.min_minutes * 60e6));
  const auto max_us = static_cast<std::int64_t>(std::llround(window.max_minutes * 60e6));

  std::vector<InstancePair> pairs;
  for (auto& [key, group] : groups) {
    std::stable_sort(group.begin(), group.end(), [](const auto* a, const auto* b) {
      return a->started_at.utc_micros < b->started_at.utc_micros;
    });
    const ActiveTestInstance* first = group.front();
    for (std::size_t i = 1; i < group.size(); ++i) {
      const std::int64_t gap = group[i]->started_at.utc_micros - first->started_at.utc_micros;
      if (gap > max_us) break;
      if (gap >= min_us) {
        InstancePair pair{*first, *group[i]};
        pair.baseline.label = Label::baseline;
        pair.treatment.label = Label::treatment;
        pairs.push_back(std::move(pair));
        break;
      }
    }
  }
  return pairs;
}

}  // namespace medresp
