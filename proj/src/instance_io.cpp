#include "medresp/instance_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "medresp/error.hpp"

namespace medresp {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::vector<double> number_array(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_array()) {
    throw InputError(std::string("missing numeric array '") + key + "'");
  }
  std::vector<double> out;
  out.reserve(it->size());
  for (const auto& v : *it) {
    if (!v.is_number()) throw InputError(std::string("non-numeric entry in '") + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

double number_field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw InputError(std::string("missing numeric field '") + key + "'");
  }
  return it->get<double>();
}

AccelSeries parse_accel(const json& payload, AccelTest test) {
  if (!payload.is_object()) throw InputError(std::string(to_string(test)) + " payload is not an object");
  try {
    return AccelSeries(test, number_array(payload, "t"), number_array(payload, "x"),
                       number_array(payload, "y"), number_array(payload, "z"));
  } catch (const InputError& e) {
    throw InputError(std::string(to_string(test)) + ": " + e.what());
  }
}

AudioRecording parse_audio(const json& payload, const fs::path& base_dir) {
  if (payload.is_string()) {
    fs::path p = payload.get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    return read_wav(p);
  }
  if (!payload.is_object()) throw InputError("voice payload must be an object or a WAV path");
  const auto rate = payload.find("sample_rate");
  if (rate == payload.end() || !rate->is_number_integer()) {
    throw InputError("voice: missing integer 'sample_rate'");
  }
  return AudioRecording(rate->get<int>(), number_array(payload, "samples"));
}

TapSession parse_taps(const json& payload) {
  const auto events = payload.find("events");
  if (!payload.is_object() || events == payload.end() || !events->is_array()) {
    throw InputError("dexterity: missing 'events' array");
  }
  std::vector<TapEvent> out;
  for (const auto& e : *events) {
    if (!e.is_object()) throw InputError("dexterity: event is not an object");
    TapEvent ev;
    ev.press = number_field(e, "press");
    ev.release = number_field(e, "release");
    const auto b = e.find("button");
    if (b == e.end() || !b->is_string()) throw InputError("dexterity: missing 'button'");
    const auto name = b->get<std::string>();
    if (name == "L") {
      ev.button = Button::left;
    } else if (name == "R") {
      ev.button = Button::right;
    } else {
      throw InputError("dexterity: button must be \"L\" or \"R\"");
    }
    out.push_back(ev);
  }
  return TapSession(std::move(out));
}

ReactionSession parse_reaction(const json& payload) {
  const auto trials = payload.find("trials");
  if (!payload.is_object() || trials == payload.end() || !trials->is_array()) {
    throw InputError("reaction: missing 'trials' array");
  }
  std::vector<ReactionTrial> out;
  for (const auto& tr : *trials) {
    if (!tr.is_object()) throw InputError("reaction: trial is not an object");
    ReactionTrial trial;
    trial.stimulus = number_field(tr, "stimulus");
    const auto press = tr.find("press");
    const auto release = tr.find("release");
    if (press != tr.end() && !press->is_null()) {
      if (!press->is_number()) throw InputError("reaction: 'press' is not a number");
      trial.press = press->get<double>();
    }
    if (release != tr.end() && !release->is_null()) {
      if (!release->is_number()) throw InputError("reaction: 'release' is not a number");
      trial.release = release->get<double>();
    }
    out.push_back(trial);
  }
  return ReactionSession(std::move(out));
}

json accel_json(const AccelSeries& s) {
  return json{{"t", s.t()}, {"x", s.x()}, {"y", s.y()}, {"z", s.z()}};
}

}  // namespace

ActiveTestInstance parse_instance(std::string_view json_line, const fs::path& base_dir) {
  json obj;
  try {
    obj = json::parse(json_line);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw InputError("line is not a JSON object");

  ActiveTestInstance inst;
  const auto pid = obj.find("participant_id");
  if (pid == obj.end() || !pid->is_string()) throw InputError("missing string 'participant_id'");
  inst.participant_id = pid->get<std::string>();

  const auto started = obj.find("started_at");
  if (started == obj.end() || !started->is_string()) throw InputError("missing string 'started_at'");
  inst.started_at = parse_rfc3339(started->get<std::string>());

  const auto label = obj.find("label");
  if (label == obj.end() || !label->is_string()) throw InputError("missing string 'label'");
  inst.label = parse_label(label->get<std::string>());

  if (auto it = obj.find("voice"); it != obj.end() && !it->is_null()) inst.voice = parse_audio(*it, base_dir);
  if (auto it = obj.find("balance"); it != obj.end() && !it->is_null()) {
    inst.balance = parse_accel(*it, AccelTest::balance);
  }
  if (auto it = obj.find("gait"); it != obj.end() && !it->is_null()) inst.gait = parse_accel(*it, AccelTest::gait);
  if (auto it = obj.find("dexterity"); it != obj.end() && !it->is_null()) inst.dexterity = parse_taps(*it);
  if (auto it = obj.find("reaction"); it != obj.end() && !it->is_null()) inst.reaction = parse_reaction(*it);

  validate(inst);
  return inst;
}

InstanceReadResult read_instances(std::istream& in, const fs::path& base_dir) {
  InstanceReadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    try {
      result.instances.push_back(parse_instance(line, base_dir));
    } catch (const Error& e) {
      result.rejected.push_back({line_no, e.what()});
    } catch (const std::exception& e) {
      result.rejected.push_back({line_no, e.what()});
    }
  }
  return result;
}

InstanceReadResult read_instances_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return read_instances(in, path.parent_path());
}

std::string serialize_instance(const ActiveTestInstance& inst, const InstanceWriteOptions& options) {
  json obj;
  obj["participant_id"] = inst.participant_id;
  obj["started_at"] = format_rfc3339(inst.started_at);
  obj["label"] = std::string(to_string(inst.label));
  if (inst.voice) {
    const auto& src = inst.voice->source();
    if (!options.inline_audio && src) {
      std::error_code ec;
      fs::path rel = fs::relative(fs::absolute(*src), fs::absolute(options.output_dir), ec);
      obj["voice"] = (ec || rel.empty()) ? fs::absolute(*src).string() : rel.generic_string();
    } else {
      obj["voice"] = json{{"sample_rate", inst.voice->sample_rate()}, {"samples", inst.voice->samples()}};
    }
  }
  if (inst.balance) obj["balance"] = accel_json(*inst.balance);
  if (inst.gait) obj["gait"] = accel_json(*inst.gait);
  if (inst.dexterity) {
    json events = json::array();
    for (const auto& e : inst.dexterity->events()) {
      events.push_back({{"press", e.press}, {"release", e.release}, {"button", e.button == Button::left ? "L" : "R"}});
    }
    obj["dexterity"] = json{{"events", std::move(events)}};
  }
  if (inst.reaction) {
    json trials = json::array();
    for (const auto& tr : inst.reaction->trials()) {
      json t{{"stimulus", tr.stimulus}};
      if (tr.press) {
        t["press"] = *tr.press;
        t["release"] = *tr.release;
      }
      trials.push_back(std::move(t));
    }
    obj["reaction"] = json{{"trials", std::move(trials)}};
  }
  return obj.dump();
}

void write_instances(std::ostream& out, std::span<const ActiveTestInstance> instances,
                     const InstanceWriteOptions& options) {
  for (const auto& inst : instances) out << serialize_instance(inst, options) << '\n';
}

// ---------------------------------------------------------------------------
// WAV

namespace {

std::uint32_t le32(const unsigned char* p) {
  return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) | (std::uint32_t{p[2]} << 16) |
         (std::uint32_t{p[3]} << 24);
}

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                              static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  out.write(b.data(), 4);
}

void put16(std::ostream& out, std::uint16_t v) {
  const std::array<char, 2> b{static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF)};
  out.write(b.data(), 2);
}

}  // namespace

AudioRecording read_wav(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open WAV file " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto fail = [&](const std::string& why) { throw InputError("WAV " + path.string() + ": " + why); };

  if (bytes.size() < 12 || std::string(bytes.begin(), bytes.begin() + 4) != "RIFF" ||
      std::string(bytes.begin() + 8, bytes.begin() + 12) != "WAVE") {
    fail("not a RIFF/WAVE file");
  }
  bool have_fmt = false;
  int sample_rate = 0;
  std::vector<double> samples;
  bool have_data = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string id(bytes.begin() + static_cast<long>(pos), bytes.begin() + static_cast<long>(pos) + 4);
    const std::uint32_t size = le32(&bytes[pos + 4]);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) fail("truncated chunk '" + id + "'");
    if (id == "fmt ") {
      if (size < 16) fail("short fmt chunk");
      const std::uint16_t format = le16(&bytes[body]);
      const std::uint16_t channels = le16(&bytes[body + 2]);
      sample_rate = static_cast<int>(le32(&bytes[body + 4]));
      const std::uint16_t bits = le16(&bytes[body + 14]);
      if (format != 1) fail("only PCM encoding is supported");
      if (channels != 1) fail("expected mono audio, found " + std::to_string(channels) + " channels");
      if (bits != 16) fail("expected 16-bit samples, found " + std::to_string(bits));
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) fail("data chunk precedes fmt chunk");
      const std::size_t n = size / 2;
      samples.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        samples[i] = static_cast<std::int16_t>(le16(&bytes[body + 2 * i])) / 32768.0;
      }
      have_data = true;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt || !have_data) fail("missing fmt or data chunk");
  return AudioRecording(sample_rate, std::move(samples), fs::absolute(path).string());
}

void write_wav(const fs::path& path, const AudioRecording& audio) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write WAV file " + path.string());
  const auto n = static_cast<std::uint32_t>(audio.samples().size());
  const auto rate = static_cast<std::uint32_t>(audio.sample_rate());
  out.write("RIFF", 4);
  put32(out, 36 + 2 * n);
  out.write("WAVEfmt ", 8);
  put32(out, 16);
  put16(out, 1);
  put16(out, 1);
  put32(out, rate);
  put32(out, rate * 2);
  put16(out, 2);
  put16(out, 16);
  out.write("data", 4);
  put32(out, 2 * n);
  for (double v : audio.samples()) {
    const long q = std::clamp(std::lround(v * 32768.0), -32768L, 32767L);
    put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  if (!out) throw InputError("failed writing WAV file " + path.string());
}

}  // namespace medresp
