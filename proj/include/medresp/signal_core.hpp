#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace medresp {

enum class AccelTest { balance, gait };
enum class Label { baseline, treatment, unlabeled };
enum class Button { left, right };

std::string_view to_string(AccelTest test) noexcept;
std::string_view to_string(Label label) noexcept;
Label parse_label(std::string_view text);

/// An instant together with the UTC offset of the device that recorded it.
/// The offset defines the participant-local calendar day used for pairing.
struct Timestamp {
  std::int64_t utc_micros = 0;  // since 1970-01-01T00:00:00Z
  int offset_minutes = 0;

  /// Days since the epoch in the recording device's local time.
  std::int64_t local_day() const noexcept;

  friend bool operator==(const Timestamp&, const Timestamp&) = default;
};

/// Accepts "YYYY-MM-DDTHH:MM:SS[.ffffff](Z|+HH:MM|-HH:MM)". Fractions finer
/// than a microsecond are rounded.
Timestamp parse_rfc3339(std::string_view text);
std::string format_rfc3339(const Timestamp& ts);

/// Rounds a time in seconds to microsecond resolution.
double quantize_seconds(double seconds) noexcept;

struct TimedSample {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Tri-axial acceleration with irregular timestamps (seconds since test start).
/// Construction quantizes timestamps to microseconds and enforces finite
/// values, strictly increasing time and positive duration.
class AccelSeries {
 public:
  AccelSeries(AccelTest test, std::vector<double> t, std::vector<double> x,
              std::vector<double> y, std::vector<double> z);
  AccelSeries(AccelTest test, std::span<const TimedSample> samples);

  AccelTest test() const noexcept { return test_; }
  std::size_t size() const noexcept { return t_.size(); }
  double duration() const noexcept { return t_.back() - t_.front(); }

  std::span<const double> t() const noexcept { return t_; }
  std::span<const double> x() const noexcept { return x_; }
  std::span<const double> y() const noexcept { return y_; }
  std::span<const double> z() const noexcept { return z_; }

  TimedSample sample(std::size_t i) const { return {t_[i], x_[i], y_[i], z_[i]}; }

  friend bool operator==(const AccelSeries&, const AccelSeries&) = default;

 private:
  void normalize();

  AccelTest test_;
  std::vector<double> t_, x_, y_, z_;
};

/// Spherical view of an AccelSeries: radial distance, polar angle in [0, pi],
/// azimuth in (-pi, pi].
struct SphericalSeries {
  std::vector<double> t;
  std::vector<double> r;
  std::vector<double> theta;
  std::vector<double> phi;
};

SphericalSeries to_spherical(const AccelSeries& series);

class AudioRecording {
 public:
  AudioRecording(int sample_rate, std::vector<double> samples,
                 std::optional<std::string> source = std::nullopt);

  int sample_rate() const noexcept { return sample_rate_; }
  std::span<const double> samples() const noexcept { return samples_; }
  double duration() const noexcept {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }
  /// Path of the WAV file the samples were loaded from, if any.
  const std::optional<std::string>& source() const noexcept { return source_; }

  /// Compares rate and samples only; the source path is provenance.
  friend bool operator==(const AudioRecording& a, const AudioRecording& b) {
    return a.sample_rate_ == b.sample_rate_ && a.samples_ == b.samples_;
  }

 private:
  int sample_rate_;
  std::vector<double> samples_;
  std::optional<std::string> source_;
};

struct TapEvent {
  double press = 0.0;
  double release = 0.0;
  Button button = Button::left;
  friend bool operator==(const TapEvent&, const TapEvent&) = default;
};

class TapSession {
 public:
  explicit TapSession(std::vector<TapEvent> events);
  std::span<const TapEvent> events() const noexcept { return events_; }
  friend bool operator==(const TapSession&, const TapSession&) = default;

 private:
  std::vector<TapEvent> events_;
};

/// A reaction trial. press/release are absent when the participant did not
/// respond.
struct ReactionTrial {
  double stimulus = 0.0;
  std::optional<double> press;
  std::optional<double> release;
  bool responded() const noexcept { return press.has_value(); }
  friend bool operator==(const ReactionTrial&, const ReactionTrial&) = default;
};

class ReactionSession {
 public:
  explicit ReactionSession(std::vector<ReactionTrial> trials);
  std::span<const ReactionTrial> trials() const noexcept { return trials_; }
  friend bool operator==(const ReactionSession&, const ReactionSession&) = default;

 private:
  std::vector<ReactionTrial> trials_;
};

/// One session of active tests.
struct ActiveTestInstance {
  std::string participant_id;
  Timestamp started_at;
  Label label = Label::unlabeled;
  std::optional<AudioRecording> voice;
  std::optional<AccelSeries> balance;
  std::optional<AccelSeries> gait;
  std::optional<TapSession> dexterity;
  std::optional<ReactionSession> reaction;

  bool has_any_test() const noexcept {
    return voice || balance || gait || dexterity || reaction;
  }
  bool has_all_tests() const noexcept {
    return voice && balance && gait && dexterity && reaction;
  }

  friend bool operator==(const ActiveTestInstance&, const ActiveTestInstance&) = default;
};

/// Throws InputError when the instance violates its invariants.
void validate(const ActiveTestInstance& instance);

struct PairingWindow {
  double min_minutes = 30.0;
  double max_minutes = 180.0;
};

struct InstancePair {
  ActiveTestInstance baseline;
  ActiveTestInstance treatment;
};

/// Groups instances by participant and local calendar day. Within a group the
/// earliest instance is the baseline; the first later instance starting within
/// the window (inclusive) after it is the treatment. All other instances of
/// the group are dropped. Output is ordered by participant id, then day, and
/// carries overwritten labels.
std::vector<InstancePair> pair_instances(std::span<const ActiveTestInstance> instances,
                                         const PairingWindow& window);

}  // namespace medresp
