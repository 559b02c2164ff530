#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "alqhd/errors.hpp"
#include "alqhd/expr.hpp"
#include "alqhd/rng.hpp"

namespace alqhd {

// ---------------------------------------------------------------------------
// Case data (MATPOWER version-2 subset)
// ---------------------------------------------------------------------------

struct Bus {
  int id = 0;
  int type = 1;  // 1 = PQ, 2 = PV, 3 = reference
  double pd = 0, qd = 0;  // MW / MVAr load
  double gs = 0, bs = 0;  // shunt conductance / susceptance
  int area = 1;
  double vm = 1, va = 0;
  double base_kv = 0;
  int zone = 1;
  double vmax = 1.1, vmin = 0.9;
};

struct GenCost {
  double startup = 0, shutdown = 0;
  std::vector<double> coeffs;  // polynomial, highest degree first

  /// (a, b, c) of a*P^2 + b*P + c in MW units; lower-degree data zero-pads.
  std::array<double, 3> quadratic() const {
    std::array<double, 3> abc{0, 0, 0};
    for (std::size_t i = 0; i < coeffs.size(); ++i) abc[3 - coeffs.size() + i] = coeffs[i];
    return abc;
  }
};

struct Generator {
  int bus = 0;
  double pg = 0, qg = 0;
  double qmax = 0, qmin = 0;
  double vg = 1, mbase = 100;
  int status = 1;
  double pmax = 0, pmin = 0;
  GenCost cost;
};

struct Branch {
  int from = 0, to = 0;
  double r = 0, x = 0, b = 0;
  double rate_a = 0, rate_b = 0, rate_c = 0;
  double ratio = 0;  // 0 means nominal tap 1
  double shift_deg = 0;
  int status = 1;
};

struct PowerCase {
  std::string name;
  double base_mva = 100;
  std::vector<Bus> buses;
  std::vector<Generator> generators;
  std::vector<Branch> branches;
  bool has_gencost = false;

  std::size_t bus_position(int id) const {
    for (std::size_t i = 0; i < buses.size(); ++i)
      if (buses[i].id == id) return i;
    throw IndexOutOfRangeError("PowerCase: no bus with id " + std::to_string(id));
  }
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct RawRow {
  std::size_t line_no = 0;
  std::vector<double> values;
};

inline std::vector<double> parse_numbers(const std::string& text, std::size_t line_no,
                                         const std::string& where) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == ','))
      ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && text[end] != ' ' && text[end] != '\t' && text[end] != ',') ++end;
    const std::string tok = text.substr(pos, end - pos);
    char* stop = nullptr;
    const double v = std::strtod(tok.c_str(), &stop);
    if (stop != tok.c_str() + tok.size())
      throw ParseError("line " + std::to_string(line_no) + ": bad number '" + tok + "' in " +
                       where);
    out.push_back(v);
    pos = end;
  }
  return out;
}

inline double require_column(const RawRow& row, std::size_t col, const std::string& matrix,
                             std::size_t row_idx, std::size_t need) {
  if (row.values.size() < need)
    throw ParseError("line " + std::to_string(row.line_no) + ": " + matrix + " row " +
                     std::to_string(row_idx + 1) + " has " + std::to_string(row.values.size()) +
                     " columns, expected at least " + std::to_string(need));
  return row.values[col];
}

}  // namespace detail

/// Parse a MATPOWER version-2 function file. Only the consumed columns are
/// retained (bus 13, gen 10, branch 11, polynomial gencost); '%' comments,
/// blank lines, and one-or-many rows per line are all accepted. Errors carry
/// the 1-based source line.
inline PowerCase parse_case(const std::string& text) {
  PowerCase pc;
  std::map<std::string, std::vector<detail::RawRow>> matrices;
  bool saw_version = false;

  std::string matrix;       // currently open mpc.<matrix> = [ ... ];
  std::string pending_row;  // row fragment accumulated across lines

  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;

    const std::size_t cmt = line.find('%');
    if (cmt != std::string::npos) line = line.substr(0, cmt);
    line = detail::trim(line);
    if (line.empty()) {
      if (pos > text.size()) break;
      continue;
    }

    if (!matrix.empty()) {
      // inside a matrix: rows separated by ';', terminated by ']'
      std::string chunk = line;
      while (!chunk.empty()) {
        const std::size_t stop = chunk.find_first_of(";]");
        if (stop == std::string::npos) {
          pending_row += " " + chunk;
          chunk.clear();
          break;
        }
        pending_row += " " + chunk.substr(0, stop);
        const std::string row = detail::trim(pending_row);
        pending_row.clear();
        if (!row.empty())
          matrices[matrix].push_back(
              {line_no, detail::parse_numbers(row, line_no, "mpc." + matrix)});
        if (chunk[stop] == ']') {
          matrix.clear();
          chunk.clear();  // ignore the trailing ';' of '];'
        } else {
          chunk = detail::trim(chunk.substr(stop + 1));
        }
      }
      if (pos > text.size()) break;
      continue;
    }

    if (line.rfind("function", 0) == 0) {
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw ParseError("line " + std::to_string(line_no) + ": malformed function header");
      pc.name = detail::trim(line.substr(eq + 1));
      if (!pc.name.empty() && pc.name.back() == ';') pc.name.pop_back();
    } else if (line.rfind("mpc.version", 0) == 0) {
      const std::size_t q1 = line.find('\'');
      const std::size_t q2 = q1 == std::string::npos ? std::string::npos : line.find('\'', q1 + 1);
      if (q2 == std::string::npos)
        throw ParseError("line " + std::to_string(line_no) + ": malformed mpc.version");
      const std::string v = line.substr(q1 + 1, q2 - q1 - 1);
      if (v != "2")
        throw UnsupportedVersionError("line " + std::to_string(line_no) + ": case version '" + v +
                                      "' is not supported (need '2')");
      saw_version = true;
    } else if (line.rfind("mpc.baseMVA", 0) == 0) {
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw ParseError("line " + std::to_string(line_no) + ": malformed mpc.baseMVA");
      std::string rhs = detail::trim(line.substr(eq + 1));
      if (!rhs.empty() && rhs.back() == ';') rhs = detail::trim(rhs.substr(0, rhs.size() - 1));
      const auto vals = detail::parse_numbers(rhs, line_no, "mpc.baseMVA");
      if (vals.size() != 1)
        throw ParseError("line " + std::to_string(line_no) + ": mpc.baseMVA needs one number");
      pc.base_mva = vals[0];
    } else if (line.rfind("mpc.", 0) == 0) {
      const std::size_t eq = line.find('=');
      const std::size_t br = line.find('[');
      if (eq == std::string::npos || br == std::string::npos)
        throw ParseError("line " + std::to_string(line_no) + ": expected 'mpc.<name> = [' here");
      matrix = detail::trim(line.substr(4, eq - 4));
      std::string rest = detail::trim(line.substr(br + 1));
      if (!rest.empty()) {
        // data (and possibly the closing bracket) on the same line
        pending_row.clear();
        std::string chunk = rest;
        while (!chunk.empty()) {
          const std::size_t stop = chunk.find_first_of(";]");
          if (stop == std::string::npos) {
            pending_row += " " + chunk;
            break;
          }
          pending_row += " " + chunk.substr(0, stop);
          const std::string row = detail::trim(pending_row);
          pending_row.clear();
          if (!row.empty())
            matrices[matrix].push_back(
                {line_no, detail::parse_numbers(row, line_no, "mpc." + matrix)});
          if (chunk[stop] == ']') {
            matrix.clear();
            break;
          }
          chunk = detail::trim(chunk.substr(stop + 1));
        }
      }
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": unrecognized statement '" + line +
                       "'");
    }
    if (pos > text.size()) break;
  }
  if (!matrix.empty()) throw ParseError("mpc." + matrix + " is missing its closing ']'");
  if (!saw_version) throw UnsupportedVersionError("case file does not declare mpc.version = '2'");
  for (const char* need : {"bus", "gen", "branch"})
    if (matrices.find(need) == matrices.end())
      throw ParseError(std::string("case file has no mpc.") + need + " matrix");

  std::size_t idx = 0;
  for (const auto& row : matrices["bus"]) {
    Bus b;
    b.id = static_cast<int>(detail::require_column(row, 0, "mpc.bus", idx, 13));
    b.type = static_cast<int>(row.values[1]);
    b.pd = row.values[2];
    b.qd = row.values[3];
    b.gs = row.values[4];
    b.bs = row.values[5];
    b.area = static_cast<int>(row.values[6]);
    b.vm = row.values[7];
    b.va = row.values[8];
    b.base_kv = row.values[9];
    b.zone = static_cast<int>(row.values[10]);
    b.vmax = row.values[11];
    b.vmin = row.values[12];
    for (const Bus& prev : pc.buses)
      if (prev.id == b.id)
        throw ParseError("line " + std::to_string(row.line_no) + ": duplicate bus id " +
                         std::to_string(b.id));
    pc.buses.push_back(b);
    ++idx;
  }

  idx = 0;
  for (const auto& row : matrices["gen"]) {
    Generator g;
    g.bus = static_cast<int>(detail::require_column(row, 0, "mpc.gen", idx, 10));
    g.pg = row.values[1];
    g.qg = row.values[2];
    g.qmax = row.values[3];
    g.qmin = row.values[4];
    g.vg = row.values[5];
    g.mbase = row.values[6];
    g.status = static_cast<int>(row.values[7]);
    g.pmax = row.values[8];
    g.pmin = row.values[9];
    bool found = false;
    for (const Bus& b : pc.buses) found = found || b.id == g.bus;
    if (!found)
      throw ParseError("line " + std::to_string(row.line_no) + ": mpc.gen row " +
                       std::to_string(idx + 1) + " references unknown bus " +
                       std::to_string(g.bus));
    pc.generators.push_back(g);
    ++idx;
  }

  idx = 0;
  for (const auto& row : matrices["branch"]) {
    Branch br;
    br.from = static_cast<int>(detail::require_column(row, 0, "mpc.branch", idx, 11));
    br.to = static_cast<int>(row.values[1]);
    br.r = row.values[2];
    br.x = row.values[3];
    br.b = row.values[4];
    br.rate_a = row.values[5];
    br.rate_b = row.values[6];
    br.rate_c = row.values[7];
    br.ratio = row.values[8];
    br.shift_deg = row.values[9];
    br.status = static_cast<int>(row.values[10]);
    for (int end : {br.from, br.to}) {
      bool found = false;
      for (const Bus& b : pc.buses) found = found || b.id == end;
      if (!found)
        throw ParseError("line " + std::to_string(row.line_no) + ": mpc.branch row " +
                         std::to_string(idx + 1) + " references unknown bus " +
                         std::to_string(end));
    }
    pc.branches.push_back(br);
    ++idx;
  }

  if (auto it = matrices.find("gencost"); it != matrices.end()) {
    pc.has_gencost = true;
    if (it->second.size() != pc.generators.size())
      throw ParseError("mpc.gencost has " + std::to_string(it->second.size()) +
                       " rows but mpc.gen has " + std::to_string(pc.generators.size()));
    idx = 0;
    for (const auto& row : it->second) {
      const int model = static_cast<int>(detail::require_column(row, 0, "mpc.gencost", idx, 4));
      if (model != 2)
        throw ParseError("line " + std::to_string(row.line_no) +
                         ": only polynomial cost model 2 is supported");
      GenCost c;
      c.startup = row.values[1];
      c.shutdown = row.values[2];
      const std::size_t ncost = static_cast<std::size_t>(row.values[3]);
      if (ncost < 1 || ncost > 3)
        throw ParseError("line " + std::to_string(row.line_no) +
                         ": cost polynomial must have 1 to 3 coefficients");
      if (row.values.size() < 4 + ncost)
        throw ParseError("line " + std::to_string(row.line_no) + ": mpc.gencost row " +
                         std::to_string(idx + 1) + " declares " + std::to_string(ncost) +
                         " coefficients but has " + std::to_string(row.values.size() - 4));
      c.coeffs.assign(row.values.begin() + 4, row.values.begin() + 4 + ncost);
      pc.generators[idx].cost = std::move(c);
      ++idx;
    }
  }
  return pc;
}

/// Serialize back to a version-2 case body; parse_case(write_case(pc)) is the
/// identity on every consumed column.
inline std::string write_case(const PowerCase& pc) {
  std::string out;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
    out += '\t';
  };
  auto integer = [&](int v) {
    std::snprintf(buf, sizeof buf, "%d", v);
    out += buf;
    out += '\t';
  };
  out += "function mpc = " + (pc.name.empty() ? std::string("case") : pc.name) + "\n";
  out += "mpc.version = '2';\n";
  std::snprintf(buf, sizeof buf, "%.17g", pc.base_mva);
  out += "mpc.baseMVA = " + std::string(buf) + ";\n";

  out += "mpc.bus = [\n";
  for (const Bus& b : pc.buses) {
    out += '\t';
    integer(b.id), integer(b.type);
    num(b.pd), num(b.qd), num(b.gs), num(b.bs);
    integer(b.area);
    num(b.vm), num(b.va), num(b.base_kv);
    integer(b.zone);
    num(b.vmax), num(b.vmin);
    out += ";\n";
  }
  out += "];\n";

  out += "mpc.gen = [\n";
  for (const Generator& g : pc.generators) {
    out += '\t';
    integer(g.bus);
    num(g.pg), num(g.qg), num(g.qmax), num(g.qmin), num(g.vg), num(g.mbase);
    integer(g.status);
    num(g.pmax), num(g.pmin);
    out += ";\n";
  }
  out += "];\n";

  out += "mpc.branch = [\n";
  for (const Branch& br : pc.branches) {
    out += '\t';
    integer(br.from), integer(br.to);
    num(br.r), num(br.x), num(br.b), num(br.rate_a), num(br.rate_b), num(br.rate_c);
    num(br.ratio), num(br.shift_deg);
    integer(br.status);
    out += ";\n";
  }
  out += "];\n";

  if (pc.has_gencost) {
    out += "mpc.gencost = [\n";
    for (const Generator& g : pc.generators) {
      out += "\t2\t";
      num(g.cost.startup), num(g.cost.shutdown);
      integer(static_cast<int>(g.cost.coeffs.size()));
      for (double c : g.cost.coeffs) num(c);
      out += ";\n";
    }
    out += "];\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subgraph extraction
// ---------------------------------------------------------------------------

enum class SeedRule { MaxGeneration, BusId };

/// Grow a connected bus set of the requested size breadth-first from the
/// seed, visiting neighbors in ascending bus-id order, then renumber the
/// survivors densely (ascending old id -> 1..n) keeping interior branches,
/// attached generators, and loads.
inline PowerCase extract_subgraph(const PowerCase& pc, std::size_t target_n,
                                  SeedRule rule = SeedRule::MaxGeneration, int seed_bus = -1) {
  if (target_n < 1 || target_n > pc.buses.size())
    throw InvalidArgumentError("extract_subgraph: target size " + std::to_string(target_n) +
                               " outside 1.." + std::to_string(pc.buses.size()));

  std::map<int, std::set<int>> adj;
  for (const Bus& b : pc.buses) adj[b.id];
  for (const Branch& br : pc.branches) {
    if (br.status == 0) continue;
    adj[br.from].insert(br.to);
    adj[br.to].insert(br.from);
  }

  int seed = 0;
  if (rule == SeedRule::BusId) {
    bool found = false;
    for (const Bus& b : pc.buses) found = found || b.id == seed_bus;
    if (!found)
      throw InvalidArgumentError("extract_subgraph: seed bus " + std::to_string(seed_bus) +
                                 " does not exist");
    seed = seed_bus;
  } else {
    std::map<int, double> capacity;
    for (const Bus& b : pc.buses) capacity[b.id] = 0.0;
    for (const Generator& g : pc.generators)
      if (g.status != 0) capacity[g.bus] += g.pmax;
    seed = pc.buses.front().id;
    double best = -1.0;
    for (const auto& [id, cap] : capacity)
      if (cap > best || (cap == best && id < seed)) best = cap, seed = id;
  }

  std::set<int> selected{seed};
  std::deque<int> frontier{seed};
  while (selected.size() < target_n) {
    if (frontier.empty())
      throw DisconnectedError("extract_subgraph: component around bus " + std::to_string(seed) +
                              " has only " + std::to_string(selected.size()) +
                              " buses, needed " + std::to_string(target_n));
    const int u = frontier.front();
    frontier.pop_front();
    for (int v : adj[u]) {  // std::set iterates ascending
      if (selected.count(v)) continue;
      selected.insert(v);
      frontier.push_back(v);
      if (selected.size() == target_n) break;
    }
  }

  std::map<int, int> renumber;  // old id -> dense 1-based id, ascending old ids
  int next = 1;
  for (int id : selected) renumber[id] = next++;

  PowerCase sub;
  sub.name = pc.name + "_sub" + std::to_string(target_n);
  sub.base_mva = pc.base_mva;
  sub.has_gencost = pc.has_gencost;
  for (const Bus& b : pc.buses)
    if (selected.count(b.id)) {
      Bus nb = b;
      nb.id = renumber[b.id];
      sub.buses.push_back(nb);
    }
  std::sort(sub.buses.begin(), sub.buses.end(),
            [](const Bus& a, const Bus& b) { return a.id < b.id; });
  for (const Generator& g : pc.generators)
    if (selected.count(g.bus)) {
      Generator ng = g;
      ng.bus = renumber[g.bus];
      sub.generators.push_back(ng);
    }
  for (const Branch& br : pc.branches)
    if (selected.count(br.from) && selected.count(br.to)) {
      Branch nb = br;
      nb.from = renumber[br.from];
      nb.to = renumber[br.to];
      sub.branches.push_back(nb);
    }
  return sub;
}

// ---------------------------------------------------------------------------
// Bus admittance matrix
// ---------------------------------------------------------------------------

struct Ybus {
  std::size_t n = 0;
  std::vector<std::complex<double>> a;  // row-major dense

  explicit Ybus(std::size_t size = 0) : n(size), a(size * size) {}

  std::complex<double>& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  const std::complex<double>& at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

/// Standard pi-model with complex tap t = ratio * exp(i*shift):
/// Y_ff = (y + i b/2)/|t|^2, Y_ft = -y/conj(t), Y_tf = -y/t, Y_tt = y + i b/2,
/// with series y = 1/(r + ix); bus shunts Gs + iBs add onto the diagonal.
/// Out-of-service branches are skipped.
inline Ybus build_ybus(const PowerCase& pc) {
  Ybus y(pc.buses.size());
  for (const Branch& br : pc.branches) {
    if (br.status == 0) continue;
    if (br.r == 0.0 && br.x == 0.0)
      throw ZeroImpedanceBranchError("build_ybus: branch " + std::to_string(br.from) + "-" +
                                     std::to_string(br.to) + " has zero impedance");
    const std::size_t f = pc.bus_position(br.from);
    const std::size_t t = pc.bus_position(br.to);
    const std::complex<double> ys = 1.0 / std::complex<double>(br.r, br.x);
    const std::complex<double> half_b(0.0, br.b / 2.0);
    const double ratio = br.ratio == 0.0 ? 1.0 : br.ratio;
    const double shift = br.shift_deg * M_PI / 180.0;
    const std::complex<double> tap = std::polar(ratio, shift);
    y.at(f, f) += (ys + half_b) / (ratio * ratio);
    y.at(f, t) += -ys / std::conj(tap);
    y.at(t, f) += -ys / tap;
    y.at(t, t) += ys + half_b;
  }
  for (std::size_t i = 0; i < pc.buses.size(); ++i)
    y.at(i, i) += std::complex<double>(pc.buses[i].gs, pc.buses[i].bs);
  return y;
}

// ---------------------------------------------------------------------------
// ACOPF model
// ---------------------------------------------------------------------------

struct AcopfVariable {
  std::string name;
  double lower = 0, upper = 0;
};

/// Symbolic ACOPF over the registry [V per bus | theta per non-reference bus |
/// (Pg, Qg) per in-service generator], all in per-unit. The reference angle is
/// fixed to zero by substitution, so it never appears as a variable.
struct AcopfModel {
  std::size_t n_buses = 0;
  std::size_t ref = 0;                    // position of the reference bus
  std::vector<std::size_t> gen_positions; // in-service generators, case order
  std::vector<AcopfVariable> variables;
  SeparableExpr objective;                 // generation cost
  std::vector<SeparableExpr> p_residuals;  // per bus: P(V,theta) - sum Pg + Pd
  std::vector<SeparableExpr> q_residuals;
  std::size_t n = 0;  // variables.size()

  std::size_t v_index(std::size_t bus) const { return bus; }
  std::size_t theta_index(std::size_t bus) const {
    if (bus == ref) throw IndexOutOfRangeError("AcopfModel: reference angle is not a variable");
    return n_buses + (bus < ref ? bus : bus - 1);
  }
  std::size_t pg_index(std::size_t g) const { return 2 * n_buses - 1 + 2 * g; }
  std::size_t qg_index(std::size_t g) const { return 2 * n_buses - 1 + 2 * g + 1; }
};

namespace detail {

enum class Trig { Cos, Sin };

/// Append coeff * V_i V_j trig_i(theta_i) trig_j(theta_j); sin at the
/// reference bus kills the term, cos there drops to the constant 1.
inline void add_flow_term(SeparableExpr& e, const AcopfModel& m, double coeff, std::size_t i,
                          std::size_t j, Trig ti, Trig tj) {
  if (coeff == 0.0) return;
  if (i == m.ref && ti == Trig::Sin) return;
  if (j == m.ref && tj == Trig::Sin) return;
  std::vector<TermFactor> factors;
  factors.push_back({m.v_index(i), Factor::power(1)});
  factors.push_back({m.v_index(j), Factor::power(1)});
  if (i != m.ref)
    factors.push_back(
        {m.theta_index(i), ti == Trig::Cos ? Factor::cosine(1.0) : Factor::sine(1.0)});
  if (j != m.ref)
    factors.push_back(
        {m.theta_index(j), tj == Trig::Cos ? Factor::cosine(1.0) : Factor::sine(1.0)});
  std::sort(factors.begin(), factors.end(),
            [](const TermFactor& a, const TermFactor& b) { return a.var < b.var; });
  e.add_term(coeff, std::move(factors));
}

}  // namespace detail

/// Build the symbolic model. Injections follow the polar power-flow form
///   P_i = sum_j V_i V_j (G_ij cos th_ij + B_ij sin th_ij)
///   Q_i = sum_j V_i V_j (G_ij sin th_ij - B_ij cos th_ij)
/// with every trig-of-difference split into pure products so each residual
/// term touches at most four variables.
inline AcopfModel build_acopf(const PowerCase& pc, const Ybus& y) {
  if (y.n != pc.buses.size())
    throw DimensionMismatchError("build_acopf: admittance size does not match bus count");
  AcopfModel m;
  m.n_buses = pc.buses.size();

  // reference: first type-3 bus, else the bus carrying the most capacity
  m.ref = m.n_buses;
  for (std::size_t i = 0; i < pc.buses.size(); ++i)
    if (pc.buses[i].type == 3) {
      m.ref = i;
      break;
    }
  if (m.ref == m.n_buses) {
    std::vector<double> cap(m.n_buses, 0.0);
    for (const Generator& g : pc.generators)
      if (g.status != 0) cap[pc.bus_position(g.bus)] += g.pmax;
    m.ref = 0;
    for (std::size_t i = 1; i < cap.size(); ++i)
      if (cap[i] > cap[m.ref]) m.ref = i;
  }

  for (std::size_t g = 0; g < pc.generators.size(); ++g)
    if (pc.generators[g].status != 0) m.gen_positions.push_back(g);

  const double base = pc.base_mva;
  for (const Bus& b : pc.buses)
    m.variables.push_back({"V" + std::to_string(b.id), b.vmin, b.vmax});
  for (std::size_t i = 0; i < pc.buses.size(); ++i)
    if (i != m.ref)
      m.variables.push_back({"th" + std::to_string(pc.buses[i].id), -M_PI, M_PI});
  for (std::size_t g : m.gen_positions) {
    const Generator& gen = pc.generators[g];
    m.variables.push_back({"Pg" + std::to_string(g + 1), gen.pmin / base, gen.pmax / base});
    m.variables.push_back({"Qg" + std::to_string(g + 1), gen.qmin / base, gen.qmax / base});
  }
  m.n = m.variables.size();

  // generation cost in per-unit decision variables: a (P b)^2 + b (P b) + c
  m.objective = SeparableExpr(m.n);
  for (std::size_t k = 0; k < m.gen_positions.size(); ++k) {
    const auto abc = pc.generators[m.gen_positions[k]].cost.quadratic();
    const std::size_t pv = m.pg_index(k);
    if (abc[0] != 0.0) m.objective.add_term(abc[0] * base * base, {{pv, Factor::power(2)}});
    if (abc[1] != 0.0) m.objective.add_term(abc[1] * base, {{pv, Factor::power(1)}});
    if (abc[2] != 0.0) m.objective.add_constant(abc[2]);
  }

  m.p_residuals.assign(m.n_buses, SeparableExpr(m.n));
  m.q_residuals.assign(m.n_buses, SeparableExpr(m.n));
  using detail::Trig;
  for (std::size_t i = 0; i < m.n_buses; ++i) {
    SeparableExpr& p = m.p_residuals[i];
    SeparableExpr& q = m.q_residuals[i];
    for (std::size_t j = 0; j < m.n_buses; ++j) {
      const double G = y.at(i, j).real(), B = y.at(i, j).imag();
      if (G == 0.0 && B == 0.0) continue;
      if (i == j) {
        if (G != 0.0) p.add_term(G, {{m.v_index(i), Factor::power(2)}});
        if (B != 0.0) q.add_term(-B, {{m.v_index(i), Factor::power(2)}});
        continue;
      }
      // cos(th_i - th_j) = cos cos + sin sin; sin(th_i - th_j) = sin cos - cos sin
      detail::add_flow_term(p, m, G, i, j, Trig::Cos, Trig::Cos);
      detail::add_flow_term(p, m, G, i, j, Trig::Sin, Trig::Sin);
      detail::add_flow_term(p, m, B, i, j, Trig::Sin, Trig::Cos);
      detail::add_flow_term(p, m, -B, i, j, Trig::Cos, Trig::Sin);
      detail::add_flow_term(q, m, G, i, j, Trig::Sin, Trig::Cos);
      detail::add_flow_term(q, m, -G, i, j, Trig::Cos, Trig::Sin);
      detail::add_flow_term(q, m, -B, i, j, Trig::Cos, Trig::Cos);
      detail::add_flow_term(q, m, -B, i, j, Trig::Sin, Trig::Sin);
    }
    if (pc.buses[i].pd != 0.0) p.add_constant(pc.buses[i].pd / base);
    if (pc.buses[i].qd != 0.0) q.add_constant(pc.buses[i].qd / base);
    for (std::size_t k = 0; k < m.gen_positions.size(); ++k) {
      if (pc.bus_position(pc.generators[m.gen_positions[k]].bus) != i) continue;
      p.add_term(-1.0, {{m.pg_index(k), Factor::power(1)}});
      q.add_term(-1.0, {{m.qg_index(k), Factor::power(1)}});
    }
    collect_terms(p);
    collect_terms(q);
  }
  return m;
}

/// objective + mu * sum over residuals of residual^2, squared symbolically;
/// cross terms between two four-variable monomials stay within width 8.
inline SeparableExpr penalized_objective(const AcopfModel& m, double mu,
                                         std::size_t max_term_width = 8) {
  if (!(mu > 0.0)) throw InvalidArgumentError("penalized_objective: mu must be positive");
  SeparableExpr out = m.objective;
  out.dim = m.n;
  for (const auto* family : {&m.p_residuals, &m.q_residuals}) {
    for (const SeparableExpr& r : *family) {
      if (r.terms.empty()) continue;
      SeparableExpr sq = multiply(r, r, max_term_width);
      for (Term& t : sq.terms) {
        t.coeff *= mu;
        out.terms.push_back(std::move(t));
      }
    }
  }
  collect_terms(out);
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic grids (scaling series)
// ---------------------------------------------------------------------------

/// Deterministic ring-plus-chords grid: every bus carries a load, every third
/// bus a generator, chords drawn from a counter RNG. Useful for size sweeps
/// where no real case data is bundled.
inline PowerCase generate_synthetic_case(std::size_t n_buses, std::uint64_t seed,
                                         std::size_t chords = SIZE_MAX) {
  if (n_buses < 1) throw InvalidArgumentError("generate_synthetic_case: need at least one bus");
  if (chords == SIZE_MAX) chords = n_buses / 4;
  CounterRng rng(seed);
  PowerCase pc;
  pc.name = "synth" + std::to_string(n_buses);
  pc.base_mva = 100;
  pc.has_gencost = true;

  for (std::size_t i = 1; i <= n_buses; ++i) {
    Bus b;
    b.id = static_cast<int>(i);
    b.type = i == 1 ? 3 : 1;
    b.pd = 15.0 + 50.0 * rng.next_unit();
    b.qd = 0.35 * b.pd;
    b.base_kv = 230;
    pc.buses.push_back(b);
  }
  for (std::size_t i = 1; i <= n_buses; ++i) {
    if (i != 1 && (i - 1) % 3 != 0) continue;
    Generator g;
    g.bus = static_cast<int>(i);
    g.qmax = 150;
    g.qmin = -150;
    g.pmax = 100.0 + 200.0 * rng.next_unit();
    g.pmin = 0;
    g.cost.coeffs = {0.02 + 0.1 * rng.next_unit(), 5.0 + 20.0 * rng.next_unit(), 0.0};
    if (i != 1) pc.buses[i - 1].type = 2;
    pc.generators.push_back(g);
  }

  auto make_branch = [&](int f, int t) {
    Branch br;
    br.from = f;
    br.to = t;
    br.r = 0.01 + 0.03 * rng.next_unit();
    br.x = 0.04 + 0.12 * rng.next_unit();
    br.b = 0.02 * rng.next_unit();
    br.rate_a = br.rate_b = br.rate_c = 250;
    pc.branches.push_back(br);
  };
  for (std::size_t i = 1; i < n_buses; ++i)
    make_branch(static_cast<int>(i), static_cast<int>(i + 1));
  if (n_buses >= 3) make_branch(static_cast<int>(n_buses), 1);

  std::set<std::pair<int, int>> have;
  for (const Branch& br : pc.branches)
    have.insert({std::min(br.from, br.to), std::max(br.from, br.to)});
  std::size_t added = 0, attempts = 0;
  while (added < chords && attempts < 20 * (chords + 1)) {
    ++attempts;
    const int a = static_cast<int>(rng.below(n_buses)) + 1;
    const int b = static_cast<int>(rng.below(n_buses)) + 1;
    if (a == b) continue;
    const auto key = std::make_pair(std::min(a, b), std::max(a, b));
    if (have.count(key)) continue;
    have.insert(key);
    make_branch(a, b);
    ++added;
  }
  return pc;
}

}  // namespace alqhd
