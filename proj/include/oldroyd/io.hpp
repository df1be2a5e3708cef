// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "oldroyd/littlewood_paley.hpp"
#include "oldroyd/monitor.hpp"

namespace oldroyd {

// field-v1: one JSON header line, then little-endian f64 physical values,
// component-major, each component row-major over the grid.
struct Snapshot {
  int d = 2;
  int n = 0;
  Scalar period = kTwoPi;
  std::string kind;  // scalar | velocity | stress
  int components = 0;
  std::vector<PhysicalArray> values;
};

template <FieldKind K>
Snapshot make_snapshot(const Field<K>& f);

template <FieldKind K>
Field<K> snapshot_field(const Snapshot& snap, const GridPtr& grid);

// Grid matching the snapshot header.
GridPtr snapshot_grid(const Snapshot& snap);

void write_snapshot(const std::string& path, const Snapshot& snap);
Snapshot read_snapshot(const std::string& path);

template <FieldKind K>
void write_field(const std::string& path, const Field<K>& f) {
  write_snapshot(path, make_snapshot(f));
}

// Ledger CSV: JSON header line, column-name line, then one row per sample.
void write_ledger(const std::string& path, const EnergyLedger& ledger);
EnergyLedger read_ledger(const std::string& path);
nlohmann::json ledger_header_json(const LedgerHeader& h);

struct NormReport {
  std::string norm_kind;  // besov | hybrid | chemin-lerner
  Scalar s = 0;
  Scalar p = 2;
  Scalar r = 2;
  std::optional<Scalar> rho;
  Scalar value = 0;
  std::optional<Scalar> low_part;
  std::optional<Scalar> high_part;
  int q_min = 0;
  int q_max = 0;
};

nlohmann::json to_json(const NormReport& r);
nlohmann::json to_json(const BoundReport& r);

// JSON cannot carry infinities; they are written as the string "inf".
nlohmann::json json_number(Scalar x);

void write_json(const std::string& path, const nlohmann::json& j);

// Joins `dir` and `name`, creating `dir` if needed.
std::string output_path(const std::string& dir, const std::string& name);

}  // namespace oldroyd
