#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace medresp {

enum class LedRule {
  plain,                // dose * times_per_day * factor
  multiplies_levodopa,  // factor * daily levodopa of the same regimen
};

struct LedEntry {
  double factor = 0.0;
  LedRule rule = LedRule::plain;
};

using LedTable = std::map<std::string, LedEntry>;

/// CSV with header drug,factor,rule. Drug names are case-sensitive.
LedTable read_led_table(std::istream& in);
LedTable read_led_table_file(const std::filesystem::path& path);
/// Built-in conversion factors, identical to data/led_table.csv.
const LedTable& default_led_table();

struct RegimenItem {
  std::string drug;
  double dose_mg = 0.0;
  double times_per_day = 0.0;
};

/// Daily levodopa equivalent dose in mg. COMT-inhibitor rows add their
/// factor times the summed daily dose of plain rows whose drug name starts
/// with "levodopa"; their own dose is not used. Unknown drugs throw
/// ContractError naming the drug.
double daily_led(std::span<const RegimenItem> regimen, const LedTable& table);

/// CSV with header participant_id,drug,dose_mg,times_per_day. Participants
/// keep their first-appearance order.
struct Regimens {
  std::vector<std::string> order;
  std::map<std::string, std::vector<RegimenItem>> items;
};

Regimens read_regimens(std::istream& in);
Regimens read_regimens_file(const std::filesystem::path& path);
void write_regimens(std::ostream& out, const Regimens& regimens);

}  // namespace medresp
