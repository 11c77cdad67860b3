#pragma once

#include <span>
#include <string>
#include <vector>

#include "medresp/registry.hpp"
#include "medresp/signal_core.hpp"

namespace medresp {

struct AudioFrame {
  std::vector<double> samples;
  double rms = 0.0;
};

/// Splits the recording into `n_frames` contiguous frames of equal length;
/// trailing samples that do not fill a frame are dropped.
std::vector<AudioFrame> frame_audio(const AudioRecording& audio, std::size_t n_frames = 40);

/// Phonation band searched for the fundamental.
struct VoiceBand {
  double lo_hz = 50.0;
  double hi_hz = 500.0;
};

struct VoicedFrame {
  double amp = 0.0;  // RMS
  double f0 = 0.0;   // Hz; 0 for unvoiced frames
  bool voiced = false;
};

struct VoicedRun {
  std::size_t start = 0;
  std::size_t length = 0;
};

struct VoicedTrack {
  double frame_duration = 0.0;
  std::vector<VoicedFrame> frames;
  VoicedRun run;
  /// True when no frame exceeded the first quartile and '>=' was used.
  bool inclusive_fallback = false;
};

/// A frame is voiced when its RMS is strictly above the first quartile of all
/// frame RMS values (falling back to '>=' if that selects nothing). The
/// longest voiced run wins, earliest on ties. Requires at least 4 frames.
VoicedTrack tag_voiced(std::span<const AudioFrame> frames, int sample_rate, const VoiceBand& band = {});

/// Least-squares polynomial coefficients c0 + c1 x + ... for the given degree.
std::vector<double> polyfit(std::span<const double> x, std::span<const double> y, int degree);

struct VoiceOptions {
  std::size_t n_frames = 40;
  VoiceBand band;
};

struct VoiceResult {
  FeatureVector features;
  VoicedTrack track;
  /// Quality notes such as "voice:empty_run" or "voice:F0_DFA_short".
  std::vector<std::string> flags;
};

/// voice_Len, mean/std/DFA and linear and quadratic fit coefficients of the
/// amplitude and F0 tracks over the longest voiced run, and voice_F0, the
/// dominant frequency of the concatenated run: 18 features.
VoiceResult extract_voice_features(const AudioRecording& audio, const VoiceOptions& options = {});

}  // namespace medresp
