#pragma once

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lotsize/core.hpp"
#include "lotsize/demand.hpp"
#include "lotsize/instance.hpp"

namespace lotsize {

namespace detail {

inline std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

struct KvLine {
  int number = 0;
  std::string key;
  std::vector<std::string> values;
};

/// Splits a stream into key/value lines.  Blank lines and lines starting
/// with '#' are skipped; the first token of a line is the key, the rest are
/// whitespace-separated values.
inline std::vector<KvLine> read_kv_lines(std::istream& in) {
  std::vector<KvLine> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::istringstream ls(line);
    KvLine kv;
    kv.number = number;
    if (!(ls >> kv.key) || kv.key[0] == '#') continue;
    std::string tok;
    while (ls >> tok) kv.values.push_back(tok);
    out.push_back(std::move(kv));
  }
  return out;
}

inline double parse_double(const KvLine& kv, const std::string& tok) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != tok.size())
    throw validation_error("line " + std::to_string(kv.number) + ": field '" +
                           kv.key + "': '" + tok + "' is not a number");
  return v;
}

inline int parse_int(const KvLine& kv, const std::string& tok) {
  const double v = parse_double(kv, tok);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw validation_error("line " + std::to_string(kv.number) + ": field '" +
                           kv.key + "': '" + tok + "' is not an integer");
  return i;
}

inline double single_double(const KvLine& kv) {
  if (kv.values.size() != 1)
    throw validation_error("line " + std::to_string(kv.number) + ": field '" +
                           kv.key + "' takes exactly one value");
  return parse_double(kv, kv.values[0]);
}

inline std::vector<double> double_series(const KvLine& kv) {
  if (kv.values.empty())
    throw validation_error("line " + std::to_string(kv.number) + ": field '" +
                           kv.key + "' needs at least one value");
  std::vector<double> out;
  for (const auto& tok : kv.values) out.push_back(parse_double(kv, tok));
  return out;
}

} // namespace detail

/// Parses the line-oriented instance format.  Keys: id, horizon, demand
/// (poisson | normal | empirical), rates, means, sigmas, cv, pmf (one line
/// per period), K, z, h, b, x0, qmax, partitions.  Unknown keys and series
/// whose length disagrees with the horizon are rejected with the offending
/// line number.
inline Instance parse_instance(std::istream& in,
                               const std::string& name = "instance") {
  int horizon = 0;
  std::string kind;
  std::vector<double> rates, means, sigmas;
  double cv = -1;
  std::vector<std::vector<double>> pmfs;
  Instance inst;
  bool seen_k = false, seen_h = false, seen_b = false;

  for (const auto& kv : detail::read_kv_lines(in)) {
    auto fail = [&](const std::string& what) {
      throw validation_error(name + ", line " + std::to_string(kv.number) +
                             ": " + what);
    };
    if (kv.key == "id") {
      if (kv.values.size() != 1) fail("field 'id' takes exactly one value");
      inst.id = kv.values[0];
    } else if (kv.key == "horizon") {
      horizon = detail::parse_int(kv, kv.values.size() == 1 ? kv.values[0] : "");
      if (horizon < 1) fail("horizon must be >= 1");
    } else if (kv.key == "demand") {
      if (kv.values.size() != 1 ||
          (kv.values[0] != "poisson" && kv.values[0] != "normal" &&
           kv.values[0] != "empirical"))
        fail("demand must be poisson, normal or empirical");
      kind = kv.values[0];
    } else if (kv.key == "rates") {
      rates = detail::double_series(kv);
    } else if (kv.key == "means") {
      means = detail::double_series(kv);
    } else if (kv.key == "sigmas") {
      sigmas = detail::double_series(kv);
    } else if (kv.key == "cv") {
      cv = detail::single_double(kv);
    } else if (kv.key == "pmf") {
      pmfs.push_back(detail::double_series(kv));
    } else if (kv.key == "K") {
      inst.costs.K = detail::single_double(kv);
      seen_k = true;
    } else if (kv.key == "z") {
      inst.costs.z = detail::single_double(kv);
    } else if (kv.key == "h") {
      inst.costs.h = detail::single_double(kv);
      seen_h = true;
    } else if (kv.key == "b") {
      inst.costs.b = detail::single_double(kv);
      seen_b = true;
    } else if (kv.key == "x0") {
      if (kv.values.size() != 1) fail("field 'x0' takes exactly one value");
      inst.x0 = detail::parse_int(kv, kv.values[0]);
    } else if (kv.key == "qmax") {
      if (kv.values.size() != 1) fail("field 'qmax' takes exactly one value");
      inst.qmax = detail::parse_int(kv, kv.values[0]);
    } else if (kv.key == "partitions") {
      if (kv.values.size() != 1)
        fail("field 'partitions' takes exactly one value");
      inst.partitions = detail::parse_int(kv, kv.values[0]);
    } else {
      fail("unknown field '" + kv.key + "'");
    }
  }

  std::string msg;
  if (horizon < 1) msg += "missing or invalid horizon\n";
  if (kind.empty()) msg += "missing demand kind\n";
  if (!seen_k || !seen_h || !seen_b) msg += "missing cost field (K, h or b)\n";
  auto check_len = [&](const std::vector<double>& v, const char* what) {
    if (static_cast<int>(v.size()) != horizon)
      msg += std::string(what) + " series has " + std::to_string(v.size()) +
             " entries, horizon is " + std::to_string(horizon) + "\n";
  };
  if (kind == "poisson") {
    check_len(rates, "rates");
    if (!means.empty() || !sigmas.empty() || cv >= 0 || !pmfs.empty())
      msg += "poisson demand takes only a rates series\n";
  } else if (kind == "normal") {
    check_len(means, "means");
    if (!rates.empty() || !pmfs.empty())
      msg += "normal demand takes means plus sigmas or cv\n";
    if (sigmas.empty() == (cv < 0))
      msg += "normal demand needs exactly one of sigmas or cv\n";
    else if (!sigmas.empty())
      check_len(sigmas, "sigmas");
  } else if (!kind.empty()) {
    if (static_cast<int>(pmfs.size()) != horizon)
      msg += "pmf lines count " + std::to_string(pmfs.size()) +
             ", horizon is " + std::to_string(horizon) + "\n";
    if (!rates.empty() || !means.empty() || !sigmas.empty() || cv >= 0)
      msg += "empirical demand takes only pmf lines\n";
  }
  if (!msg.empty()) throw validation_error(name + ":\n" + msg);

  if (kind == "poisson")
    inst.demand = DemandModel::poisson(std::move(rates));
  else if (kind == "normal")
    inst.demand = sigmas.empty()
                      ? DemandModel::normal_cv(std::move(means), cv)
                      : DemandModel::normal(std::move(means), std::move(sigmas));
  else
    inst.demand = DemandModel::empirical(std::move(pmfs));
  inst.validate();
  return inst;
}

inline void save_instance(const Instance& inst, std::ostream& out) {
  out << "id " << inst.id << "\n";
  out << "horizon " << inst.horizon() << "\n";
  out << "demand " << to_string(inst.demand.kind()) << "\n";
  auto series = [&](const char* key, const std::vector<double>& v) {
    out << key;
    for (double x : v) out << ' ' << detail::format_number(x);
    out << "\n";
  };
  switch (inst.demand.kind()) {
    case DemandKind::poisson:
      series("rates", inst.demand.rates());
      break;
    case DemandKind::normal:
      series("means", inst.demand.means());
      series("sigmas", inst.demand.sigmas());
      break;
    case DemandKind::empirical:
      for (const auto& pmf : inst.demand.pmfs()) series("pmf", pmf);
      break;
  }
  out << "K " << detail::format_number(inst.costs.K) << "\n";
  out << "z " << detail::format_number(inst.costs.z) << "\n";
  out << "h " << detail::format_number(inst.costs.h) << "\n";
  out << "b " << detail::format_number(inst.costs.b) << "\n";
  out << "x0 " << inst.x0 << "\n";
  if (inst.qmax >= 0) out << "qmax " << inst.qmax << "\n";
  if (inst.partitions > 0) out << "partitions " << inst.partitions << "\n";
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open instance file: " + path);
  return parse_instance(in, path);
}

inline void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot write instance file: " + path);
  save_instance(inst, out);
}

/// Policy files share the key/value shape: kind, s series, level series.
inline PolicyParams parse_policy(std::istream& in,
                                 const std::string& name = "policy") {
  PolicyParams pol;
  bool seen_kind = false;
  for (const auto& kv : detail::read_kv_lines(in)) {
    auto fail = [&](const std::string& what) {
      throw validation_error(name + ", line " + std::to_string(kv.number) +
                             ": " + what);
    };
    if (kv.key == "kind") {
      if (kv.values.size() != 1) fail("field 'kind' takes exactly one value");
      if (kv.values[0] == "sS")
        pol.kind = PolicyKind::sS;
      else if (kv.values[0] == "sQt")
        pol.kind = PolicyKind::sQt;
      else if (kv.values[0] == "sQ")
        pol.kind = PolicyKind::sQ;
      else
        fail("kind must be sS, sQt or sQ");
      seen_kind = true;
    } else if (kv.key == "s") {
      for (const auto& tok : kv.values)
        pol.s.push_back(tok == "never" ? never_order
                                       : detail::parse_int(kv, tok));
    } else if (kv.key == "level") {
      for (const auto& tok : kv.values)
        pol.level.push_back(detail::parse_int(kv, tok));
    } else {
      fail("unknown field '" + kv.key + "'");
    }
  }
  if (!seen_kind) throw validation_error(name + ": missing policy kind");
  pol.validate();
  return pol;
}

inline void save_policy(const PolicyParams& pol, std::ostream& out) {
  out << "kind " << to_string(pol.kind) << "\n";
  out << "s";
  for (int s : pol.s) {
    if (s == never_order)
      out << " never";
    else
      out << ' ' << s;
  }
  out << "\nlevel";
  for (int v : pol.level) out << ' ' << v;
  out << "\n";
}

inline PolicyParams load_policy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open policy file: " + path);
  return parse_policy(in, path);
}

inline void save_policy(const PolicyParams& pol, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot write policy file: " + path);
  save_policy(pol, out);
}

/// Quotes a CSV field per RFC 4180 when it contains a comma, quote or
/// newline; quotes inside the field are doubled.
inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline void write_csv_row(std::ostream& out,
                          const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(fields[i]);
  }
  out << "\r\n";
}

} // namespace lotsize
