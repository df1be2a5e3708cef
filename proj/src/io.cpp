// SPDX-License-Identifier: Apache-2.0
#include "oldroyd/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oldroyd/spectral.hpp"

namespace oldroyd {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

template <FieldKind K>
Snapshot make_snapshot(const Field<K>& f) {
  static_assert(K != FieldKind::SkewTensor, "spin fields have no snapshot kind");
  Snapshot s;
  s.d = f.dim();
  s.n = f.grid().n();
  s.period = f.grid().period();
  s.kind = kind_name(K);
  s.components = f.components();
  s.values = to_physical(f);
  return s;
}

GridPtr snapshot_grid(const Snapshot& snap) { return make_grid(snap.d, snap.n, snap.period); }

template <FieldKind K>
Field<K> snapshot_field(const Snapshot& snap, const GridPtr& grid) {
  if (snap.kind != kind_name(K)) throw IoError("snapshot holds a " + snap.kind + " field, expected " + kind_name(K));
  if (grid->dim() != snap.d || grid->n() != snap.n || grid->period() != snap.period)
    throw IoError("snapshot grid does not match");
  return from_physical<K>(grid, snap.values);
}

void write_snapshot(const std::string& path, const Snapshot& snap) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const nlohmann::json header = {{"schema", "field-v1"}, {"d", snap.d},         {"n", snap.n},
                                 {"period", snap.period}, {"kind", snap.kind}, {"components", snap.components}};
  out << header.dump() << '\n';
  for (const auto& v : snap.values)
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(Scalar)));
  if (!out) throw IoError("write failed: " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("missing snapshot header: " + path);
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad snapshot header: " + std::string(e.what()));
  }
  if (h.value("schema", "") != "field-v1") throw IoError("unknown snapshot schema in " + path);
  Snapshot s;
  try {
    s.d = h.at("d").get<int>();
    s.n = h.at("n").get<int>();
    s.period = h.at("period").get<Scalar>();
    s.kind = h.at("kind").get<std::string>();
    s.components = h.at("components").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError("incomplete snapshot header: " + std::string(e.what()));
  }
  if (s.d < 2 || s.d > 3 || s.n < 1 || s.components < 1 || s.components > 6) throw IoError("invalid snapshot header");
  Index size = 1;
  for (int i = 0; i < s.d; ++i) size *= s.n;
  for (int c = 0; c < s.components; ++c) {
    PhysicalArray v(size);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(size * sizeof(Scalar)));
    if (in.gcount() != static_cast<std::streamsize>(size * sizeof(Scalar))) throw IoError("truncated snapshot: " + path);
    s.values.push_back(std::move(v));
  }
  if (in.peek() != std::char_traits<char>::eof()) throw IoError("trailing bytes in snapshot: " + path);
  return s;
}

nlohmann::json json_number(Scalar x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

namespace {

std::string format_double(Scalar x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

nlohmann::json ledger_header_json(const LedgerHeader& h) {
  return {{"schema", "ledger-v1"},
          {"s", h.s},
          {"d", h.d},
          {"n", h.n},
          {"dt", h.dt},
          {"params", {{"re", h.params.re}, {"we", h.params.we}, {"omega", h.params.omega}, {"alpha", h.params.alpha}}},
          {"kappa1", h.kappas.kappa1},
          {"kappa2", h.kappas.kappa2},
          {"kappa3", h.kappas.kappa3}};
}

void write_ledger(const std::string& path, const EnergyLedger& ledger) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << ledger_header_json(ledger.header).dump() << '\n';
  const auto& cols = ledger_columns();
  for (size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const LedgerRow& r : ledger.rows) {
    const auto v = row_values(r);
    for (size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << format_double(v[i]);
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

EnergyLedger read_ledger(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  EnergyLedger led;
  try {
    if (!std::getline(in, line)) throw IoError("empty ledger");
    const auto h = nlohmann::json::parse(line);
    if (h.value("schema", "") != "ledger-v1") throw IoError("unknown ledger schema");
    led.header.s = h.at("s").get<Scalar>();
    led.header.d = h.at("d").get<int>();
    led.header.n = h.at("n").get<int>();
    led.header.dt = h.at("dt").get<Scalar>();
    const auto& p = h.at("params");
    led.header.params = {p.at("re").get<Scalar>(), p.at("we").get<Scalar>(), p.at("omega").get<Scalar>(),
                         p.at("alpha").get<Scalar>()};
    led.header.kappas = {h.at("kappa1").get<Scalar>(), h.at("kappa2").get<Scalar>(), h.at("kappa3").get<Scalar>()};
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad ledger header: " + std::string(e.what()));
  }
  if (!std::getline(in, line)) throw IoError("ledger lacks a column line");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<Scalar> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(std::strtod(cell.c_str(), nullptr));
    led.rows.push_back(row_from_values(v));
  }
  return led;
}

nlohmann::json to_json(const NormReport& r) {
  nlohmann::json j = {{"norm_kind", r.norm_kind}, {"s", r.s},         {"p", json_number(r.p)},
                      {"r", json_number(r.r)},    {"value", r.value}, {"q_range", {r.q_min, r.q_max}}};
  if (r.rho) j["rho"] = json_number(*r.rho);
  if (r.low_part) j["low_part"] = *r.low_part;
  if (r.high_part) j["high_part"] = *r.high_part;
  return j;
}

nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json j = {{"E0", r.E0}, {"max_ratio", json_number(r.max_ratio)}, {"threshold", r.threshold}, {"pass", r.pass}};
  j["first_violation"] = r.first_violation ? nlohmann::json(*r.first_violation) : nlohmann::json(nullptr);
  return j;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

std::string output_path(const std::string& dir, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
  return (std::filesystem::path(dir) / name).string();
}

#define OLDROYD_IO_INSTANTIATE(K)                                      \
  template Snapshot make_snapshot(const Field<K>&);                    \
  template Field<K> snapshot_field(const Snapshot&, const GridPtr&);

OLDROYD_IO_INSTANTIATE(FieldKind::Scalar)
OLDROYD_IO_INSTANTIATE(FieldKind::Vector)
OLDROYD_IO_INSTANTIATE(FieldKind::SymTensor)

#undef OLDROYD_IO_INSTANTIATE

}  // namespace oldroyd
