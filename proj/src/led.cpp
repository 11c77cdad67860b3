#include "medresp/led.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "medresp/csv.hpp"
#include "medresp/error.hpp"

namespace medresp {

namespace {

constexpr const char* kDefaultTable =
    "drug,factor,rule\n"
    "levodopa,1,plain\n"
    "levodopa_cr,0.75,plain\n"
    "duodopa,1.11,plain\n"
    "entacapone,0.33,multiplies_levodopa\n"
    "tolcapone,0.5,multiplies_levodopa\n"
    "pramipexole,100,plain\n"
    "ropinirole,20,plain\n"
    "rotigotine,30,plain\n"
    "selegiline_oral,10,plain\n"
    "selegiline_sublingual,80,plain\n"
    "rasagiline,100,plain\n"
    "amantadine,1,plain\n"
    "apomorphine,10,plain\n"
    "bromocriptine,10,plain\n"
    "pergolide,100,plain\n"
    "cabergoline,80,plain\n"
    "lisuride,100,plain\n";

bool blank(const std::vector<std::string>& row) { return row.size() == 1 && row[0].empty(); }

double non_negative(const std::string& text, const char* what, std::size_t line) {
  double v;
  try {
    v = parse_double(text);
  } catch (const Error&) {
    throw InputError(std::string("line ") + std::to_string(line) + ": bad " + what + " '" + text + "'");
  }
  if (!std::isfinite(v) || v < 0.0) {
    throw InputError(std::string("line ") + std::to_string(line) + ": " + what + " must be finite and >= 0");
  }
  return v;
}

}  // namespace

LedTable read_led_table(std::istream& in) {
  const auto rows = read_csv(in);
  if (rows.empty() || rows[0] != std::vector<std::string>{"drug", "factor", "rule"}) {
    throw InputError("LED table header must be drug,factor,rule");
  }
  LedTable table;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (blank(rows[r])) continue;
    if (rows[r].size() != 3) throw InputError("LED table line " + std::to_string(r + 1) + " needs 3 fields");
    const auto& drug = rows[r][0];
    if (drug.empty()) throw InputError("LED table line " + std::to_string(r + 1) + " has an empty drug");
    LedEntry e;
    e.factor = non_negative(rows[r][1], "factor", r + 1);
    if (rows[r][2] == "plain") {
      e.rule = LedRule::plain;
    } else if (rows[r][2] == "multiplies_levodopa") {
      e.rule = LedRule::multiplies_levodopa;
    } else {
      throw InputError("LED table line " + std::to_string(r + 1) + ": unknown rule '" + rows[r][2] + "'");
    }
    if (!table.emplace(drug, e).second) throw InputError("LED table lists '" + drug + "' twice");
  }
  return table;
}

LedTable read_led_table_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return read_led_table(in);
}

const LedTable& default_led_table() {
  static const LedTable table = [] {
    std::istringstream in(kDefaultTable);
    return read_led_table(in);
  }();
  return table;
}

double daily_led(std::span<const RegimenItem> regimen, const LedTable& table) {
  double plain = 0.0;
  double levodopa = 0.0;
  double comt_factor = 0.0;
  for (const auto& item : regimen) {
    const auto it = table.find(item.drug);
    if (it == table.end()) throw ContractError("unknown drug '" + item.drug + "' in LED table");
    if (!(item.dose_mg >= 0.0) || !(item.times_per_day >= 0.0) || !std::isfinite(item.dose_mg) ||
        !std::isfinite(item.times_per_day)) {
      throw ContractError("dose and frequency of '" + item.drug + "' must be finite and >= 0");
    }
    const double daily = item.dose_mg * item.times_per_day;
    if (it->second.rule == LedRule::plain) {
      plain += daily * it->second.factor;
      if (item.drug.rfind("levodopa", 0) == 0) levodopa += daily;
    } else {
      comt_factor += it->second.factor;
    }
  }
  return plain + comt_factor * levodopa;
}

Regimens read_regimens(std::istream& in) {
  const auto rows = read_csv(in);
  if (rows.empty() || rows[0] != std::vector<std::string>{"participant_id", "drug", "dose_mg", "times_per_day"}) {
    throw InputError("regimen header must be participant_id,drug,dose_mg,times_per_day");
  }
  Regimens out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (blank(rows[r])) continue;
    if (rows[r].size() != 4) throw InputError("regimen line " + std::to_string(r + 1) + " needs 4 fields");
    const auto& id = rows[r][0];
    if (id.empty()) throw InputError("regimen line " + std::to_string(r + 1) + " has an empty participant_id");
    if (!out.items.count(id)) out.order.push_back(id);
    auto& list = out.items[id];
    // A participant listed with an empty drug has no medication.
    if (rows[r][1].empty()) continue;
    list.push_back({rows[r][1], non_negative(rows[r][2], "dose_mg", r + 1),
                    non_negative(rows[r][3], "times_per_day", r + 1)});
  }
  return out;
}

Regimens read_regimens_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return read_regimens(in);
}

void write_regimens(std::ostream& out, const Regimens& regimens) {
  write_csv_row(out, {"participant_id", "drug", "dose_mg", "times_per_day"});
  for (const auto& id : regimens.order) {
    const auto& items = regimens.items.at(id);
    if (items.empty()) write_csv_row(out, {id, "", "", ""});
    for (const auto& item : items) {
      write_csv_row(out, {id, item.drug, format_double(item.dose_mg), format_double(item.times_per_day)});
    }
  }
}

}  // namespace medresp
