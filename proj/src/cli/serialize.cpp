#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "bhsi/cli.hpp"

namespace bhsi::cli {

double round_significant(double v, int digits) {
  if (digits < 1 || digits > 17) {
    throw ArgumentError("digits must be in [1, 17]");
  }
  if (digits == 17 || !std::isfinite(v) || v == 0.0) {
    return v;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*e", digits - 1, v);
  return std::strtod(buf, nullptr);
}

namespace {

void round_tree(Json& j, int digits) {
  if (j.is_number_float()) {
    j = round_significant(j.get<double>(), digits);
  } else if (j.is_structured()) {
    for (auto& child : j) {
      round_tree(child, digits);
    }
  }
}

Json ledger_json(const LedgerRow& row) {
  Json j;
  j["interpretation"] = std::string(to_string(row.interpretation));
  j["collapses"] = row.collapses;
  j["worlds"] = row.worlds;
  if (row.alternate_worlds) {
    j["alternate_worlds"] = *row.alternate_worlds;
  }
  j["observer_copies"] = row.observer_copies;
  j["environment_dimension"] = row.environment_dimension;
  j["unitary"] = row.unitary;
  j["information_preserved"] = row.information_preserved;
  return j;
}

Json record_json(const MeasurementRecord& r) {
  Json j;
  j["trial"] = r.trial;
  j["outcome"] = r.outcome;
  j["weight"] = r.weight;
  j["order"] = r.order;
  return j;
}

Json state_json(const std::string& stage, const StateVector& s) {
  Json subsystems = Json::array();
  for (const auto& sub : s.space().subsystems()) {
    subsystems.push_back({{"id", sub.id}, {"dim", sub.dim}, {"role", std::string(to_string(sub.role))}});
  }
  Json amps = Json::array();
  for (Eigen::Index i = 0; i < s.amplitudes().size(); ++i) {
    amps.push_back(Json::array({s.amplitudes()[i].real(), s.amplitudes()[i].imag()}));
  }
  return {{"stage", stage}, {"subsystems", std::move(subsystems)}, {"amplitudes", std::move(amps)}};
}

// Scalars go through the JSON number formatter so both formats print
// identical digits.
std::string csv_cell(const Json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) {
      return s;
    }
    std::string quoted = "\"";
    for (char c : s) {
      quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return quoted + "\"";
  }
  if (v.is_null()) {
    return "";
  }
  return v.dump();
}

void csv_row(std::ostringstream& os, std::initializer_list<Json> cells) {
  bool first = true;
  for (const auto& c : cells) {
    os << (first ? "" : ",") << csv_cell(c);
    first = false;
  }
  os << '\n';
}

void csv_key_values(std::ostringstream& os, const std::string& section, const Json& object) {
  os << "# section," << section << '\n';
  os << "key,value\n";
  for (const auto& [k, v] : object.items()) {
    csv_row(os, {k, v});
  }
}

std::string to_csv(const Json& j) {
  std::ostringstream os;
  csv_key_values(os, "meta", {{"schema", j["schema"]}, {"scenario", j["scenario"]}, {"seed", j["seed"]}});
  csv_key_values(os, "config", j["config"]);
  for (const auto& [name, f] : j["frequencies"].items()) {
    os << "# section,frequencies." << name << '\n';
    const bool with_expected = f.contains("expected");
    os << (with_expected ? "label,count,frequency,expected\n" : "label,count,frequency\n");
    for (std::size_t k = 0; k < f["labels"].size(); ++k) {
      if (with_expected) {
        csv_row(os, {f["labels"][k], f["counts"][k], f["frequencies"][k], f["expected"][k]});
      } else {
        csv_row(os, {f["labels"][k], f["counts"][k], f["frequencies"][k]});
      }
    }
  }
  csv_key_values(os, "statistics", j["statistics"]);
  os << "# section,ledger\n";
  os << "interpretation,collapses,worlds,alternate_worlds,observer_copies,environment_dimension,unitary,"
        "information_preserved\n";
  for (const auto& row : j["ledger"]) {
    csv_row(os, {row["interpretation"], row["collapses"], row["worlds"], row.value("alternate_worlds", Json()),
                 row["observer_copies"], row["environment_dimension"], row["unitary"], row["information_preserved"]});
  }
  if (j.contains("records")) {
    for (const auto& [name, recs] : j["records"].items()) {
      os << "# section,records." << name << '\n';
      os << "trial,outcome,weight,order\n";
      for (const auto& r : recs) {
        csv_row(os, {r["trial"], r["outcome"], r["weight"], r["order"]});
      }
    }
  }
  return os.str();
}

}  // namespace

Json to_json(const ScenarioReport& report, bool records, int digits) {
  Json j;
  j["schema"] = kSchema;
  j["scenario"] = report.scenario;
  j["seed"] = report.seed;
  j["config"] = report.config;

  Json freqs = Json::object();
  for (const auto& f : report.frequencies) {
    Json section;
    section["labels"] = f.labels;
    section["counts"] = f.table.counts();
    section["frequencies"] = f.table.frequencies();
    if (!f.expected.empty()) {
      section["expected"] = f.expected;
    }
    freqs[f.name] = std::move(section);
  }
  j["frequencies"] = std::move(freqs);
  j["statistics"] = report.statistics;

  Json ledger = Json::array();
  for (const auto& row : report.ledger) {
    ledger.push_back(ledger_json(row));
  }
  j["ledger"] = std::move(ledger);

  if (!report.stages.empty()) {
    Json stages = Json::array();
    for (const auto& st : report.stages) {
      stages.push_back(state_json(st.stage, st.state));
    }
    j["stages"] = std::move(stages);
  }
  if (records) {
    Json recs = Json::object();
    for (const auto& section : report.records) {
      Json list = Json::array();
      for (const auto& r : section.records) {
        list.push_back(record_json(r));
      }
      recs[section.name] = std::move(list);
    }
    j["records"] = std::move(recs);
  }
  round_tree(j, digits);
  return j;
}

std::string serialize(const ScenarioReport& report, const SerializeOptions& opts) {
  const Json j = to_json(report, opts.records, opts.digits);
  if (opts.format == Format::Csv) {
    return to_csv(j);
  }
  return j.dump(2) + "\n";
}

}  // namespace bhsi::cli
