#include "treeca/verdict.hpp"

#include <sstream>

namespace treeca {

namespace {
// Patterns over alphabets above 10 use commas between letters; switch the pattern
// separator so the list stays unambiguous.
std::string join_witness(const std::vector<std::string>& parts) {
  bool commas = false;
  for (const auto& p : parts) commas = commas || p.find(',') != std::string::npos;
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += commas ? ";" : ",";
    out += parts[i];
  }
  return out;
}
}  // namespace

std::string_view to_string(Status s) {
  switch (s) {
    case Status::certified:
      return "certified";
    case Status::refuted:
      return "refuted";
    case Status::bounded_evidence:
      return "bounded-evidence";
  }
  return "?";
}

std::optional<std::string> Verdict::get(std::string_view key) const {
  for (const auto& [k, v] : detail)
    if (k == key) return v;
  return std::nullopt;
}

std::string Verdict::serialize() const {
  std::ostringstream out;
  out << "verdict: " << to_string(status) << "\n";
  out << "bound: " << bound << "\n";
  if (!witness.empty()) {
    out << "witness: " << join_witness(witness) << "\n";
  }
  if (!detail.empty()) {
    out << "detail:";
    for (const auto& [k, v] : detail) out << " " << k << "=" << v;
    out << "\n";
  }
  return out.str();
}

std::string Verdict::to_record() const {
  std::ostringstream out;
  out << "verdict=" << to_string(status) << " bound=" << bound;
  if (!witness.empty()) {
    out << " witness=" << join_witness(witness);
  }
  for (const auto& [k, v] : detail) out << " " << k << "=" << v;
  return out.str();
}

}  // namespace treeca
