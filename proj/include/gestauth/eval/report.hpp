#pragma once

#include <map>
#include <string>

#include "gestauth/eval/experiment.hpp"
#include "json.hpp"

namespace gestauth::eval {

/// Named tables: summary, passwords, roc_points, pr_points, attacks, ks,
/// timings. Undefined metrics are null.
nlohmann::json report_to_json(const EvalReport& report);

/// One CSV document per table, keyed by table name. Undefined metrics are
/// empty cells.
std::map<std::string, std::string> report_tables_csv(const EvalReport& report);

/// Writes report.json and <table>.csv into `dir`, creating it if needed.
void write_report(const std::string& dir, const EvalReport& report);

}  // namespace gestauth::eval
