#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "alqhd/errors.hpp"
#include "alqhd/expr.hpp"

namespace alqhd {

/// One-hot register layout: variable j owns a contiguous block of
/// resolution(j) qubits, blocks are laid out in variable order.
struct QubitLayout {
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> sizes;

  static QubitLayout from_resolutions(std::span<const std::size_t> res) {
    QubitLayout layout;
    layout.offsets.reserve(res.size());
    layout.sizes.assign(res.begin(), res.end());
    std::size_t off = 0;
    for (std::size_t r : res) {
      if (r == 0) throw DimensionMismatchError("QubitLayout: zero-size register");
      layout.offsets.push_back(off);
      off += r;
    }
    return layout;
  }

  std::size_t variables() const noexcept { return sizes.size(); }

  std::size_t total_qubits() const noexcept {
    return sizes.empty() ? 0 : offsets.back() + sizes.back();
  }

  std::size_t qubit(std::size_t var, std::size_t level) const {
    if (var >= sizes.size() || level >= sizes[var])
      throw IndexOutOfRangeError("QubitLayout: (variable, level) outside layout");
    return offsets[var] + level;
  }

  /// Variable owning a flat qubit index.
  std::size_t variable_of(std::size_t qubit) const {
    if (qubit >= total_qubits()) throw IndexOutOfRangeError("QubitLayout: qubit out of range");
    std::size_t lo = 0, hi = offsets.size();
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (offsets[mid] <= qubit)
        lo = mid;
      else
        hi = mid;
    }
    return lo;
  }
};

/// Diagonal Hamiltonian as a sum of Z-strings: term (support S, c) stands for
/// c * prod_{q in S} Z_q; the empty support is the identity component. The
/// ordered map keeps every traversal, and hence serialization, canonical.
struct ZStringHamiltonian {
  std::map<std::vector<std::size_t>, double> terms;

  std::size_t size() const noexcept { return terms.size(); }

  double coefficient(const std::vector<std::size_t>& support) const {
    auto it = terms.find(support);
    return it == terms.end() ? 0.0 : it->second;
  }

  ZStringHamiltonian& add(std::vector<std::size_t> support, double c) {
    terms[std::move(support)] += c;
    return *this;
  }

  ZStringHamiltonian& operator+=(const ZStringHamiltonian& other) {
    for (const auto& [s, c] : other.terms) terms[s] += c;
    return *this;
  }

  ZStringHamiltonian& operator*=(double a) {
    for (auto& [s, c] : terms) c *= a;
    return *this;
  }

  void prune(double tol) {
    for (auto it = terms.begin(); it != terms.end();) {
      if (std::fabs(it->second) < tol)
        it = terms.erase(it);
      else
        ++it;
    }
  }
};

/// Encoder knobs. Strings with |coefficient| below prune_tol are dropped
/// after like-term collection; terms touching more than max_term_width
/// variables are rejected up front.
struct EncodeConfig {
  double prune_tol = 1e-12;
  std::size_t max_term_width = 6;
};

namespace detail {

/// Accumulator with a packed 128-bit key for supports of at most 8 qubits
/// (each index < 2^16). Value-order of accumulation is the deterministic
/// expansion order; the final ordered map restores canonical term order.
class StringAccumulator {
 public:
  void add(std::span<const std::size_t> support, double c) {
    Key k{};
    for (std::size_t i = 0; i < support.size(); ++i) {
      if (support[i] + 1 > 0xFFFF)
        throw IndexOutOfRangeError("encoder: qubit index beyond packed-key range");
      k[i] = static_cast<std::uint16_t>(support[i] + 1);  // 0 marks "unused"
    }
    acc_[k] += c;
  }

  ZStringHamiltonian finish(double prune_tol) && {
    ZStringHamiltonian h;
    for (const auto& [k, c] : acc_) {
      if (std::fabs(c) < prune_tol) continue;
      std::vector<std::size_t> support;
      for (std::uint16_t q : k)
        if (q != 0) support.push_back(static_cast<std::size_t>(q - 1));
      h.terms.emplace(std::move(support), c);
    }
    return h;
  }

 private:
  using Key = std::array<std::uint16_t, 8>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::uint64_t a = 0, b = 0;
      std::memcpy(&a, k.data(), 8);
      std::memcpy(&b, k.data() + 4, 8);
      std::uint64_t h = a * 0x9e3779b97f4a7c15ull;
      h ^= b + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h ^= h >> 29;
      h *= 0xbf58476d1ce4e5b9ull;
      return static_cast<std::size_t>(h ^ (h >> 32));
    }
  };
  std::unordered_map<Key, double, KeyHash> acc_;
};

}  // namespace detail

/// Encode a univariate function given by its grid values: f(x_j) maps to
/// sum_k values[k] * n_{j,k} with n = (I - Z)/2, i.e. an identity component
/// sum(values)/2 and one single-qubit Z per level with weight -values[k]/2.
inline ZStringHamiltonian encode_univariate(std::span<const double> values, std::size_t var,
                                            const QubitLayout& layout,
                                            const EncodeConfig& cfg = {}) {
  if (var >= layout.variables())
    throw IndexOutOfRangeError("encode_univariate: variable outside layout");
  if (values.size() != layout.sizes[var])
    throw MissingGridError("encode_univariate: value count does not match register size");
  ZStringHamiltonian h;
  double id = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    id += 0.5 * values[k];
    h.terms[{layout.qubit(var, k)}] = -0.5 * values[k];
  }
  h.terms[{}] = id;
  h.prune(cfg.prune_tol);
  return h;
}

/// Encode a separable expression over per-variable grids. Every term
/// c * prod_j phi_j(x_j) expands distributively: each variable contributes
/// either its identity component sum_k phi_j(g_jk)/2 or one of its level
/// strings -phi_j(g_jk)/2 Z_{j,k}, so a width-w term yields at most
/// prod (r_j + 1) strings before like-term collection.
inline ZStringHamiltonian encode_expr(const SeparableExpr& expr,
                                      const std::vector<std::vector<double>>& grids,
                                      const QubitLayout& layout, const EncodeConfig& cfg = {}) {
  if (grids.size() != expr.dim || layout.variables() != expr.dim)
    throw MissingGridError("encode_expr: need one grid per expression variable");
  for (std::size_t j = 0; j < grids.size(); ++j)
    if (grids[j].size() != layout.sizes[j])
      throw MissingGridError("encode_expr: grid size does not match register of variable " +
                             std::to_string(j));
  if (cfg.max_term_width > 8)
    throw TermTooWideError("encode_expr: width cap beyond 8 is not supported");

  detail::StringAccumulator acc;
  std::vector<std::size_t> support;
  support.reserve(cfg.max_term_width);

  // per-factor grid values, recomputed per term (terms rarely share factors)
  std::vector<std::vector<double>> values;
  for (const Term& term : expr.terms) {
    if (term.factors.size() > cfg.max_term_width)
      throw TermTooWideError("encode_expr: term touches " + std::to_string(term.factors.size()) +
                             " variables, cap is " + std::to_string(cfg.max_term_width));
    values.assign(term.factors.size(), {});
    for (std::size_t i = 0; i < term.factors.size(); ++i) {
      const TermFactor& tf = term.factors[i];
      values[i].resize(grids[tf.var].size());
      for (std::size_t k = 0; k < values[i].size(); ++k) values[i][k] = tf.fn(grids[tf.var][k]);
    }

    // depth-first expansion over (identity | level k) choices per factor
    struct Frame {
      std::size_t option;  // 0 = identity, 1 + k = level k
    };
    std::vector<Frame> stack(term.factors.size(), Frame{0});
    std::size_t depth = 0;
    std::vector<double> coeff_stack(term.factors.size() + 1);
    coeff_stack[0] = term.coeff;
    support.clear();

    if (term.factors.empty()) {
      acc.add({}, term.coeff);
      continue;
    }

    // iterative cartesian product; coeff_stack[d] is the partial coefficient
    // before factor d chooses
    while (true) {
      if (depth == term.factors.size()) {
        acc.add(support, coeff_stack[depth]);
        // backtrack to the next option
        while (depth > 0) {
          --depth;
          if (!support.empty() && stack[depth].option > 0 &&
              support.back() == layout.qubit(term.factors[depth].var, stack[depth].option - 1))
            support.pop_back();
          ++stack[depth].option;
          if (stack[depth].option <= values[depth].size()) break;
          stack[depth].option = 0;
        }
        if (depth == 0 && stack[0].option == 0) break;  // wrapped around: done
      }
      // descend with the current option of factor `depth`
      const std::size_t opt = stack[depth].option;
      double mult;
      if (opt == 0) {
        double id = 0.0;
        for (double v : values[depth]) id += 0.5 * v;
        mult = id;
      } else {
        mult = -0.5 * values[depth][opt - 1];
        support.push_back(layout.qubit(term.factors[depth].var, opt - 1));
      }
      coeff_stack[depth + 1] = coeff_stack[depth] * mult;
      ++depth;
    }
  }
  return std::move(acc).finish(cfg.prune_tol);
}

/// Value of the diagonal on the one-hot basis state selecting level
/// assignment[j] in block j: Z_q contributes -1 exactly when q is the
/// selected qubit of its block.
inline double diagonal_on_onehot(const ZStringHamiltonian& h, std::span<const std::size_t> assignment,
                                 const QubitLayout& layout) {
  if (assignment.size() != layout.variables())
    throw DimensionMismatchError("diagonal_on_onehot: assignment size does not match layout");
  for (std::size_t j = 0; j < assignment.size(); ++j)
    if (assignment[j] >= layout.sizes[j])
      throw IndexOutOfRangeError("diagonal_on_onehot: level " + std::to_string(assignment[j]) +
                                 " outside register " + std::to_string(j));
  double total = 0.0;
  for (const auto& [support, c] : h.terms) {
    double v = c;
    for (std::size_t q : support) {
      const std::size_t var = layout.variable_of(q);
      v *= (q == layout.offsets[var] + assignment[var]) ? -1.0 : 1.0;
    }
    total += v;
  }
  return total;
}

/// Histogram of term locality: weight-k count per k, identity included at 0.
inline std::map<std::size_t, std::size_t> locality_histogram(const ZStringHamiltonian& h) {
  std::map<std::size_t, std::size_t> hist;
  for (const auto& [support, c] : h.terms) ++hist[support.size()];
  return hist;
}

/// One line per term: coefficient, a tab, comma-separated qubit indices
/// (empty for the identity). 17 significant digits round-trip doubles
/// exactly; map order keeps output canonical.
inline std::string serialize(const ZStringHamiltonian& h) {
  std::string out;
  char buf[64];
  for (const auto& [support, c] : h.terms) {
    std::snprintf(buf, sizeof buf, "%.17g", c);
    out += buf;
    out += '\t';
    for (std::size_t i = 0; i < support.size(); ++i) {
      if (i) out += ',';
      std::snprintf(buf, sizeof buf, "%zu", support[i]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

inline ZStringHamiltonian deserialize(const std::string& text) {
  ZStringHamiltonian h;
  std::size_t line_no = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError("line " + std::to_string(line_no) + ": expected <coefficient>\\t<indices>");
    char* end = nullptr;
    const double c = std::strtod(line.c_str(), &end);
    if (end != line.c_str() + tab)
      throw ParseError("line " + std::to_string(line_no) + ": bad coefficient '" +
                       line.substr(0, tab) + "'");
    std::vector<std::size_t> support;
    std::size_t pos = tab + 1;
    while (pos < line.size()) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      const std::string tok = line.substr(pos, comma - pos);
      if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("line " + std::to_string(line_no) + ": bad qubit index '" + tok + "'");
      support.push_back(static_cast<std::size_t>(std::strtoull(tok.c_str(), nullptr, 10)));
      pos = comma + 1;
    }
    h.terms[std::move(support)] += c;
  }
  return h;
}

}  // namespace alqhd
