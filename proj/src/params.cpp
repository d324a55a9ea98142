// Copyright 2026 The mecwpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mecwpt/params.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "mecwpt/error.hpp"

namespace mecwpt {

double SystemParams::nu() const {
  if (pilot_fraction > 0.0) return pilot_fraction;
  return 1.0 - static_cast<double>(n_users) / (bandwidth * latency);
}

double SystemParams::mec_freq() const {
  if (freq_mec > 0.0) return freq_mec;
  return 24.0 * 3.4e9 / static_cast<double>(n_users);
}

namespace {

enum class Unit { kNone, kCount, kTime, kFreq, kPower, kEnergy, kCap, kBits,
                  kLength, kDecibel };

struct Field {
  const char* key;
  std::array<const char*, 3> aliases;
  Unit unit;
  double SystemParams::*real = nullptr;
  int SystemParams::*count = nullptr;
};

#define MECWPT_REAL(k, a0, a1, a2, u, m) \
  Field{k, {a0, a1, a2}, u, &SystemParams::m, nullptr}
#define MECWPT_INT(k, a0, a1, a2, m) \
  Field{k, {a0, a1, a2}, Unit::kCount, nullptr, &SystemParams::m}

const std::array kFields = {
    MECWPT_INT("n_antennas", "N", nullptr, nullptr, n_antennas),
    MECWPT_INT("n_users", "K", nullptr, nullptr, n_users),
    MECWPT_INT("n_cells", "L", nullptr, nullptr, n_cells),
    MECWPT_REAL("bandwidth", "B", nullptr, nullptr, Unit::kFreq, bandwidth),
    MECWPT_REAL("latency", "T_d", nullptr, nullptr, Unit::kTime, latency),
    MECWPT_REAL("weight", "w", nullptr, nullptr, Unit::kNone, weight),
    MECWPT_REAL("gap_ul", "Gamma1", nullptr, nullptr, Unit::kNone, gap_ul),
    MECWPT_REAL("gap_dl", "Gamma2", nullptr, nullptr, Unit::kNone, gap_dl),
    MECWPT_REAL("result_ratio", "mu", nullptr, nullptr, Unit::kNone,
                result_ratio),
    MECWPT_REAL("pilot_fraction", "nu", nullptr, nullptr, Unit::kNone,
                pilot_fraction),
    MECWPT_REAL("efficiency", "xi", nullptr, nullptr, Unit::kNone, efficiency),
    MECWPT_REAL("kappa_user", "kappa_i", nullptr, nullptr, Unit::kCap,
                kappa_user),
    MECWPT_REAL("kappa_mec", "kappa_m", nullptr, nullptr, Unit::kCap,
                kappa_mec),
    MECWPT_REAL("cycles_user", "c_i", nullptr, nullptr, Unit::kNone,
                cycles_user),
    MECWPT_REAL("cycles_mec", "d_m", nullptr, nullptr, Unit::kNone,
                cycles_mec),
    MECWPT_REAL("freq_user", "f_u", nullptr, nullptr, Unit::kFreq, freq_user),
    MECWPT_REAL("freq_mec", "f_m", nullptr, nullptr, Unit::kFreq, freq_mec),
    MECWPT_REAL("p_user_max", "p_max", nullptr, nullptr, Unit::kPower,
                p_user_max),
    MECWPT_REAL("p_ap_max", "P", nullptr, nullptr, Unit::kPower, p_ap_max),
    MECWPT_REAL("noise_ul", "sigma_r2", nullptr, nullptr, Unit::kPower,
                noise_ul),
    MECWPT_REAL("noise_dl", "sigma_k2", nullptr, nullptr, Unit::kPower,
                noise_dl),
    MECWPT_REAL("pathloss_exp", nullptr, nullptr, nullptr, Unit::kNone,
                pathloss_exp),
    MECWPT_REAL("shadow_std_db", "shadow_std", nullptr, nullptr,
                Unit::kDecibel, shadow_std_db),
    MECWPT_REAL("chan_gain_scale", nullptr, nullptr, nullptr, Unit::kNone,
                chan_gain_scale),
    MECWPT_REAL("eps1", nullptr, nullptr, nullptr, Unit::kNone, eps1),
    MECWPT_REAL("eps2", nullptr, nullptr, nullptr, Unit::kNone, eps2),
    MECWPT_INT("p2_max_iters", nullptr, nullptr, nullptr, p2_max_iters),
    MECWPT_INT("p3_max_iters", nullptr, nullptr, nullptr, p3_max_iters),
    MECWPT_INT("outer_max_iters", nullptr, nullptr, nullptr, outer_max_iters),
    MECWPT_REAL("area_side", "area", nullptr, nullptr, Unit::kLength,
                area_side),
    MECWPT_REAL("task_min", "u_min", nullptr, nullptr, Unit::kBits, task_min),
    MECWPT_REAL("task_max", "u_max", nullptr, nullptr, Unit::kBits, task_max),
    MECWPT_REAL("request_min", "e_min", nullptr, nullptr, Unit::kEnergy,
                request_min),
    MECWPT_REAL("request_max", "e_max", nullptr, nullptr, Unit::kEnergy,
                request_max),
};

#undef MECWPT_REAL
#undef MECWPT_INT

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

const Field* find_field(std::string_view key) {
  for (const auto& f : kFields) {
    if (key == f.key) return &f;
    for (const char* a : f.aliases)
      if (a != nullptr && key == a) return &f;
  }
  return nullptr;
}

// Returns the SI multiplier for a unit suffix, or NaN if it does not belong
// to the quantity kind. Decibel-power units are handled by the caller.
double unit_scale(Unit kind, std::string_view u) {
  struct Entry {
    Unit kind;
    const char* name;
    double scale;
  };
  static constexpr Entry kTable[] = {
      {Unit::kTime, "s", 1.0},        {Unit::kTime, "ms", 1e-3},
      {Unit::kTime, "us", 1e-6},      {Unit::kFreq, "Hz", 1.0},
      {Unit::kFreq, "kHz", 1e3},      {Unit::kFreq, "MHz", 1e6},
      {Unit::kFreq, "GHz", 1e9},      {Unit::kPower, "W", 1.0},
      {Unit::kPower, "mW", 1e-3},     {Unit::kPower, "uW", 1e-6},
      {Unit::kEnergy, "J", 1.0},      {Unit::kEnergy, "mJ", 1e-3},
      {Unit::kEnergy, "uJ", 1e-6},    {Unit::kEnergy, "nJ", 1e-9},
      {Unit::kCap, "F", 1.0},         {Unit::kCap, "nF", 1e-9},
      {Unit::kCap, "pF", 1e-12},      {Unit::kCap, "fF", 1e-15},
      {Unit::kBits, "bit", 1.0},      {Unit::kBits, "bits", 1.0},
      {Unit::kBits, "kbit", 1e3},     {Unit::kBits, "Mbit", 1e6},
      {Unit::kBits, "Gbit", 1e9},     {Unit::kLength, "m", 1.0},
      {Unit::kLength, "km", 1e3},     {Unit::kDecibel, "dB", 1.0},
      {Unit::kCount, "", 1.0},
  };
  for (const auto& e : kTable)
    if (e.kind == kind && u == e.name) return e.scale;
  return std::nan("");
}

double parse_value(Unit kind, std::string_view text, int line) {
  text = trim(text);
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr == first)
    throw ParseError(line, "expected a number, got '" + std::string(text) + "'");
  const auto unit = trim(std::string_view(ptr, static_cast<size_t>(last - ptr)));
  if (unit.empty()) return v;
  if (kind == Unit::kPower && (unit == "dBm" || unit == "dBW")) {
    const double watts = std::pow(10.0, v / 10.0);
    return unit == "dBm" ? watts * 1e-3 : watts;
  }
  const double scale = unit_scale(kind, unit);
  if (std::isnan(scale))
    throw ParseError(line, "unit '" + std::string(unit) +
                               "' not valid for this key");
  return v * scale;
}

}  // namespace

void apply_setting(SystemParams& params, std::string_view key,
                   std::string_view value, int line) {
  key = trim(key);
  const Field* f = find_field(key);
  if (f == nullptr)
    throw ParseError(line, "unknown key '" + std::string(key) + "'");
  const double v = parse_value(f->unit, value, line);
  if (f->count != nullptr) {
    if (v != std::floor(v) || std::abs(v) > 1e9)
      throw ParseError(line, "key '" + std::string(key) + "' expects an integer");
    params.*(f->count) = static_cast<int>(v);
  } else {
    params.*(f->real) = v;
  }
}

SystemParams load_params(std::string_view config_text) {
  SystemParams p;
  int line_no = 0;
  while (!config_text.empty()) {
    ++line_no;
    const auto nl = config_text.find('\n');
    std::string_view line = config_text.substr(0, nl);
    config_text = nl == std::string_view::npos ? std::string_view{}
                                               : config_text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(line_no, "expected 'key = value'");
    apply_setting(p, line.substr(0, eq), line.substr(eq + 1), line_no);
  }
  validate(p);
  return p;
}

void validate(const SystemParams& p) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ValidationError(what);
  };
  require(p.n_antennas >= 1, "N >= 1");
  require(p.n_users >= 1, "K >= 1");
  require(p.n_cells >= 1, "L >= 1");
  require(p.n_antennas >= p.n_users, "N >= K");
  require(p.bandwidth > 0, "B > 0");
  require(p.latency > 0, "T_d > 0");
  require(p.weight >= 0 && p.weight <= 1, "0 <= w <= 1");
  require(p.gap_ul >= 1 && p.gap_dl >= 1, "Gamma1, Gamma2 >= 1");
  require(p.result_ratio > 0, "mu > 0");
  require(p.pilot_fraction >= 0 && p.pilot_fraction <= 1, "0 < nu <= 1");
  require(p.nu() > 0 && p.nu() <= 1, "0 < nu <= 1");
  require(p.efficiency > 0 && p.efficiency <= 1, "0 < xi <= 1");
  require(p.kappa_user > 0 && p.kappa_mec > 0, "kappa > 0");
  require(p.cycles_user > 0 && p.cycles_mec > 0, "cycles per bit > 0");
  require(p.freq_user > 0, "f_u > 0");
  require(p.freq_mec >= 0, "f_m > 0");
  require(p.p_user_max > 0 && p.p_ap_max > 0, "powers > 0");
  require(p.noise_ul > 0 && p.noise_dl > 0, "noise powers > 0");
  require(p.pathloss_exp > 0, "pathloss_exp > 0");
  require(p.shadow_std_db >= 0, "shadow_std_db >= 0");
  require(p.chan_gain_scale > 0 && p.chan_gain_scale <= 1,
          "0 < chan_gain_scale <= 1");
  require(p.eps1 > 0 && p.eps2 > 0, "tolerances > 0");
  require(p.p2_max_iters >= 1 && p.p3_max_iters >= 1 && p.outer_max_iters >= 1,
          "iteration caps >= 1");
  require(p.area_side > 0, "area_side > 0");
  require(p.task_min > 0 && p.task_max >= p.task_min, "0 < task_min <= task_max");
  require(p.request_min >= 0 && p.request_max >= p.request_min,
          "0 <= request_min <= request_max");
}

std::string serialize(const SystemParams& p) {
  std::string out;
  char buf[128];
  for (const auto& f : kFields) {
    if (f.count != nullptr)
      std::snprintf(buf, sizeof buf, "%s = %d\n", f.key, p.*(f.count));
    else
      std::snprintf(buf, sizeof buf, "%s = %.17g\n", f.key, p.*(f.real));
    out += buf;
  }
  return out;
}

}  // namespace mecwpt
