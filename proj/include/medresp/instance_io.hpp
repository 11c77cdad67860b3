#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "medresp/signal_core.hpp"

namespace medresp {

/// A JSONL line that could not be turned into a valid instance.
struct RejectedLine {
  std::size_t line = 0;  // 1-based
  std::string reason;
};

struct InstanceReadResult {
  std::vector<ActiveTestInstance> instances;
  std::vector<RejectedLine> rejected;
};

/// Parses one JSON object in the instance format. WAV paths in the voice
/// payload are resolved against `base_dir`. Throws InputError.
ActiveTestInstance parse_instance(std::string_view json_line,
                                  const std::filesystem::path& base_dir = {});

/// Reads a JSONL stream. Blank lines are skipped; bad lines are collected in
/// `rejected` and never abort the read.
InstanceReadResult read_instances(std::istream& in, const std::filesystem::path& base_dir = {});
InstanceReadResult read_instances_file(const std::filesystem::path& path);

struct InstanceWriteOptions {
  /// Write audio as inline sample arrays even when a WAV source is known.
  bool inline_audio = true;
  /// Directory that relative WAV references are written against.
  std::filesystem::path output_dir;
};

std::string serialize_instance(const ActiveTestInstance& instance,
                               const InstanceWriteOptions& options = {});

void write_instances(std::ostream& out, std::span<const ActiveTestInstance> instances,
                     const InstanceWriteOptions& options = {});

/// 16-bit mono PCM WAV. Multi-channel or non-PCM files are rejected.
AudioRecording read_wav(const std::filesystem::path& path);
void write_wav(const std::filesystem::path& path, const AudioRecording& audio);

}  // namespace medresp
