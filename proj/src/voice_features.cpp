#include "medresp/voice_features.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "medresp/error.hpp"
#include "medresp/spectral.hpp"
#include "medresp/stats.hpp"

namespace medresp {

std::vector<AudioFrame> frame_audio(const AudioRecording& audio, std::size_t n_frames) {
  const auto samples = audio.samples();
  if (n_frames == 0) throw ContractError("frame_audio: n_frames must be positive");
  if (samples.size() < n_frames) {
    throw ContractError("frame_audio: " + std::to_string(samples.size()) + " samples cannot fill " +
                        std::to_string(n_frames) + " frames");
  }
  const std::size_t len = samples.size() / n_frames;
  std::vector<AudioFrame> frames(n_frames);
  for (std::size_t f = 0; f < n_frames; ++f) {
    const auto part = samples.subspan(f * len, len);
    frames[f].samples.assign(part.begin(), part.end());
    double sq = 0.0;
    for (double s : part) sq += s * s;
    frames[f].rms = std::sqrt(sq / static_cast<double>(len));
  }
  return frames;
}

namespace {

VoicedRun longest_run(const std::vector<VoicedFrame>& frames) {
  VoicedRun best;
  std::size_t i = 0;
  while (i < frames.size()) {
    if (!frames[i].voiced) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < frames.size() && frames[j].voiced) ++j;
    if (j - i > best.length) best = {i, j - i};
    i = j;
  }
  return best;
}

}  // namespace

VoicedTrack tag_voiced(std::span<const AudioFrame> frames, int sample_rate, const VoiceBand& band) {
  if (frames.size() < 4) throw ContractError("tag_voiced: needs at least 4 frames");
  if (sample_rate <= 0) throw ContractError("tag_voiced: sample_rate must be positive");

  std::vector<double> amps;
  amps.reserve(frames.size());
  for (const auto& f : frames) amps.push_back(f.rms);
  std::vector<double> sorted = amps;
  std::sort(sorted.begin(), sorted.end());
  const double q1 = quantile_sorted(sorted, 0.25);

  VoicedTrack track;
  track.frame_duration = static_cast<double>(frames.front().samples.size()) / sample_rate;
  track.frames.resize(frames.size());
  std::size_t voiced = 0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    track.frames[i].amp = amps[i];
    track.frames[i].voiced = amps[i] > q1;
    voiced += track.frames[i].voiced;
  }
  if (voiced == 0) {
    track.inclusive_fallback = true;
    for (auto& f : track.frames) f.voiced = f.amp >= q1;
  }
  track.run = longest_run(track.frames);

  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (!track.frames[i].voiced) continue;
    track.frames[i].f0 = dominant_frequency(frames[i].samples, sample_rate, band.lo_hz, band.hi_hz).frequency;
  }
  return track;
}

std::vector<double> polyfit(std::span<const double> x, std::span<const double> y, int degree) {
  if (x.size() != y.size()) throw ContractError("polyfit: x and y differ in length");
  if (degree < 0 || x.size() < static_cast<std::size_t>(degree) + 1) {
    throw ContractError("polyfit: not enough points for degree " + std::to_string(degree));
  }
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd design(n, degree + 1);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double p = 1.0;
    for (int k = 0; k <= degree; ++k, p *= x[static_cast<std::size_t>(i)]) design(i, k) = p;
    rhs(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(rhs);
  return {coef.data(), coef.data() + coef.size()};
}

namespace {

void add_track_features(FeatureVector& out, std::vector<std::string>& flags, const std::string& name,
                        std::span<const double> track) {
  const std::size_t n = track.size();
  const std::string prefix = "voice_" + name + "_";
  double mean = 0.0;
  for (double v : track) mean += v;
  mean /= static_cast<double>(n);
  double sd = 0.0;
  if (n >= 2) sd = descriptive_stats(track).std;

  double d = 0.0;
  if (n >= kDfaMinLength) {
    d = dfa(track);
  } else {
    flags.push_back("voice:" + name + "_DFA_short");
  }

  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
  std::vector<double> lin{mean, 0.0};
  std::vector<double> quad{mean, 0.0, 0.0};
  if (n >= 2) lin = polyfit(x, track, 1);
  if (n >= 3) {
    quad = polyfit(x, track, 2);
  } else {
    quad = {lin[0], lin[1], 0.0};
    flags.push_back("voice:" + name + "_fit_short");
  }

  out.add(prefix + "mean", mean);
  out.add(prefix + "std", sd);
  out.add(prefix + "DFA", d);
  out.add(prefix + "lin_c0", lin[0]);
  out.add(prefix + "lin_c1", lin[1]);
  out.add(prefix + "quad_c0", quad[0]);
  out.add(prefix + "quad_c1", quad[1]);
  out.add(prefix + "quad_c2", quad[2]);
}

}  // namespace

VoiceResult extract_voice_features(const AudioRecording& audio, const VoiceOptions& options) {
  const auto frames = frame_audio(audio, options.n_frames);
  VoiceResult result;
  result.track = tag_voiced(frames, audio.sample_rate(), options.band);
  const VoicedRun run = result.track.run;

  if (run.length == 0) {
    result.flags.push_back("voice:empty_run");
    for (const auto& suffix : voice_feature_suffixes()) result.features.add("voice_" + suffix, 0.0);
    return result;
  }

  std::vector<double> amp, f0;
  for (std::size_t i = run.start; i < run.start + run.length; ++i) {
    amp.push_back(result.track.frames[i].amp);
    f0.push_back(result.track.frames[i].f0);
  }

  result.features.add("voice_Len", static_cast<double>(run.length) * result.track.frame_duration);
  add_track_features(result.features, result.flags, "AMP", amp);
  add_track_features(result.features, result.flags, "F0", f0);

  const std::size_t frame_len = frames.front().samples.size();
  const auto voiced_samples = audio.samples().subspan(run.start * frame_len, run.length * frame_len);
  const double dominant =
      dominant_frequency(voiced_samples, audio.sample_rate(), options.band.lo_hz, options.band.hi_hz, 1).frequency;
  result.features.add("voice_F0", dominant);
  return result;
}

}  // namespace medresp
