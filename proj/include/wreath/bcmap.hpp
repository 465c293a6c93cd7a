#pragma once

// Both sides of the assembly map for F wr F_n at finite truncations.
//
// Each side is Z X with X = Min F^(F_n) (analytic) or F^^(F_n) (topological).
// psi(m_1, ..., m_n) = sum_j m_j - a_j m_j gives
//   K_0 = coker psi = Z[canonical representatives],
//   K_1 = ker psi   = Z 1_p + ... + Z 1_p,
// and the assembly map acts label-wise by mu_F.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wreath/exact.hpp"
#include "wreath/freegroup.hpp"
#include "wreath/grouprep.hpp"
#include "wreath/intlin.hpp"
#include "wreath/orbits.hpp"

namespace wreath {

enum class Side { analytic, topological };

inline const char* to_string(Side s) {
  return s == Side::analytic ? "analytic" : "topological";
}

inline const LabelSet& labels_for(const FiniteGroupSpec& spec, Side side) {
  return side == Side::analytic ? spec.min_projections() : spec.dual();
}

/// Signals a broken internal invariant, never a mathematical outcome.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Default ceiling on truncation size (basis configurations).
inline constexpr std::uint64_t kDefaultBasisLimit = 100'000;

/// Z X restricted to configurations supported in ball(rank, radius).
class TruncatedModule {
 public:
  TruncatedModule(const FiniteGroupSpec& spec, Side side, int rank, int radius,
                  std::uint64_t limit = kDefaultBasisLimit)
      : group_(spec.name()),
        labels_(labels_for(spec, side)),
        side_(side),
        rank_(rank),
        radius_(radius) {
    if (rank < 1) throw std::invalid_argument("rank must be >= 1");
    if (radius < 0) throw std::invalid_argument("radius must be >= 0");
    basis_ = enumerate_configs(labels_.size(), rank, radius, limit);
    sort_for_report(basis_, labels_);
    index_.reserve(basis_.size());
    for (std::size_t i = 0; i < basis_.size(); ++i) index_.emplace(basis_[i], i);
  }

  const std::string& group() const { return group_; }
  const LabelSet& labels() const { return labels_; }
  Side side() const { return side_; }
  int rank() const { return rank_; }
  int radius() const { return radius_; }
  const std::vector<Config>& basis() const { return basis_; }

  std::optional<std::size_t> index_of(const Config& c) const {
    auto it = index_.find(c);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Domain coordinate of (block j, basis element k), j in 1..rank.
  std::size_t column(int block, std::size_t k) const {
    return static_cast<std::size_t>(block - 1) * basis_.size() + k;
  }

 private:
  std::string group_;
  LabelSet labels_;
  Side side_;
  int rank_;
  int radius_;
  std::vector<Config> basis_;
  std::unordered_map<Config, std::size_t, ConfigHash> index_;
};

/// Matrix of psi from n copies of the radius-r module into the radius-(r+1)
/// module. Rows carry codomain configurations: the domain basis first, in
/// basis order, then translates in order of first appearance. Codomain
/// configurations never hit by psi are omitted unless the full codomain is
/// requested; they only add zero rows.
struct PsiMatrix {
  IntMatrix matrix;
  std::vector<Config> row_configs;
  std::uint64_t codomain_size = 0;  // |basis(r + 1)|, saturating

  std::size_t row_of(const Config& c) const {
    auto it = row_index.find(c);
    if (it == row_index.end()) {
      throw InvariantViolation("configuration outside the psi codomain");
    }
    return it->second;
  }

  std::unordered_map<Config, std::size_t, ConfigHash> row_index;
};

inline PsiMatrix psi_matrix(const TruncatedModule& m, bool full_codomain = false) {
  PsiMatrix psi;
  psi.codomain_size = config_count(m.labels().size(), m.rank(), m.radius() + 1);
  auto add_row = [&](const Config& c) {
    auto [it, fresh] = psi.row_index.emplace(c, psi.row_configs.size());
    if (fresh) psi.row_configs.push_back(c);
    return it->second;
  };
  if (full_codomain) {
    auto codomain = enumerate_configs(m.labels().size(), m.rank(), m.radius() + 1);
    sort_for_report(codomain, m.labels());
    for (const auto& c : codomain) add_row(c);
  } else {
    for (const auto& c : m.basis()) add_row(c);
  }
  const std::size_t n = m.basis().size();
  std::vector<SparseVector> columns(static_cast<std::size_t>(m.rank()) * n);
  for (int j = 1; j <= m.rank(); ++j) {
    const Word a = Word::generator(m.rank(), j);
    for (std::size_t k = 0; k < n; ++k) {
      const Config& f = m.basis()[k];
      const Config moved = translate(a, f);
      if (moved == f) continue;  // only 1_p is fixed
      auto& col = columns[m.column(j, k)];
      col.emplace_back(add_row(f), 1);
      col.emplace_back(add_row(moved), -1);
    }
  }
  psi.matrix = IntMatrix::from_columns(psi.row_configs.size(), std::move(columns));
  return psi;
}

/// Kernel of the truncated psi and its comparison with the span of the n
/// indicator vectors of 1_p.
struct KernelCertificate {
  bool holds = false;
  std::size_t kernel_rank = 0;
  std::vector<IntVector> kernel;
  /// change_of_basis[i][j]: coefficient of indicator j in kernel vector i;
  /// unimodular when the kernel is exactly their span.
  std::vector<std::vector<Integer>> change_of_basis;
  std::string detail;
};

inline KernelCertificate verify_kernel_lemma(const TruncatedModule& m,
                                             const PsiMatrix& psi) {
  KernelCertificate cert;
  cert.kernel = kernel_basis(psi.matrix);
  cert.kernel_rank = cert.kernel.size();
  const auto rank = static_cast<std::size_t>(m.rank());
  const std::size_t unit = *m.index_of(Config{});
  std::vector<std::size_t> indicator;
  for (int j = 1; j <= m.rank(); ++j) indicator.push_back(m.column(j, unit));

  if (cert.kernel_rank != rank) {
    cert.detail = "kernel rank " + std::to_string(cert.kernel_rank) +
                  ", expected " + std::to_string(rank);
    return cert;
  }
  std::vector<bool> is_indicator(psi.matrix.cols(), false);
  for (std::size_t c : indicator) is_indicator[c] = true;
  for (std::size_t i = 0; i < cert.kernel.size(); ++i) {
    for (std::size_t c = 0; c < cert.kernel[i].size(); ++c) {
      if (cert.kernel[i][c] != 0 && !is_indicator[c]) {
        cert.detail = "kernel vector " + std::to_string(i) +
                      " has support off the 1_p indicators (column " +
                      std::to_string(c) + ")";
        return cert;
      }
    }
    std::vector<Integer> row;
    for (std::size_t c : indicator) row.push_back(cert.kernel[i][c]);
    cert.change_of_basis.push_back(std::move(row));
  }
  const auto snf = smith_decompose(IntMatrix::from_dense(cert.change_of_basis),
                                   {false, false});
  const bool unimodular =
      snf.rank() == rank &&
      std::all_of(snf.pivots.begin(), snf.pivots.end(),
                  [](const SmithPivot& p) { return p.value == 1; });
  if (!unimodular) {
    cert.detail = "kernel is a proper sublattice of the indicator span";
    return cert;
  }
  cert.holds = true;
  cert.detail = "ker psi = span of the " + std::to_string(rank) +
                " indicators of 1_p";
  return cert;
}

inline KernelCertificate verify_kernel_lemma(const TruncatedModule& m) {
  return verify_kernel_lemma(m, psi_matrix(m));
}

/// w in the psi domain with psi(w) = x - canon(x), built by telescoping along
/// the translation word carrying canon(x) to x.
inline IntVector telescoping_witness(const TruncatedModule& m, const Config& x) {
  const Canonical canon = canonicalize(x, m.rank());
  IntVector w(static_cast<std::size_t>(m.rank()) * m.basis().size());
  const auto letters = canon.shift.letters();
  auto coordinate = [&](int block, const Config& c) {
    auto k = m.index_of(c);
    if (!k) {
      throw InvariantViolation("telescoping witness leaves the truncation at " +
                               serialize(c, m.labels()));
    }
    return m.column(block, *k);
  };
  // y_k = canon, y_{t-1} = s_t . y_t, y_0 = x
  Config y = canon.config;
  for (std::size_t t = letters.size(); t > 0; --t) {
    const Generator s = letters[t - 1];
    const Config previous = translate(Word::identity(m.rank()).times(s), y);
    if (s.sign > 0) {
      // a_j y - y = -(y - a_j y)
      w[coordinate(s.index, y)] -= 1;
    } else {
      // a_j^-1 y - y = m - a_j m with m = a_j^-1 y
      w[coordinate(s.index, previous)] += 1;
    }
    y = previous;
  }
  if (y != x) throw InvariantViolation("telescoping path does not reach x");
  return w;
}

/// Checks psi(w) = x - canon(x) through the explicit matrix.
inline bool check_witness(const TruncatedModule& m, const PsiMatrix& psi,
                          const Config& x, const IntVector& w) {
  IntVector target(psi.matrix.rows());
  const Config c = canonicalize(x, m.rank()).config;
  target[psi.row_of(x)] += 1;
  target[psi.row_of(c)] -= 1;
  return psi.matrix.apply(w) == target;
}

struct KGroupReport {
  Side side = Side::analytic;
  std::string group;
  int rank = 1;
  int radius = 0;
  std::vector<Config> k0_basis;
  std::size_t k1_rank = 0;
  std::vector<std::string> k1_generator_names;
  std::vector<Integer> torsion;
  std::size_t witnesses_checked = 0;
  LabelSet labels;
};

struct ReportOptions {
  /// Non-canonical configurations given a telescoping witness; all if unset.
  std::optional<std::size_t> witness_sample;
  std::uint64_t seed = 0;
};

/// K_0 side: canonical basis, constructive coinvariance, torsion check.
inline KGroupReport k0_report(const FiniteGroupSpec& spec, Side side, int rank,
                              int radius, const ReportOptions& opt = {}) {
  const TruncatedModule m(spec, side, rank, radius);
  const PsiMatrix psi = psi_matrix(m);
  KGroupReport r;
  r.side = side;
  r.group = spec.name();
  r.rank = rank;
  r.radius = radius;
  r.labels = m.labels();
  r.k0_basis = enumerate_canonical(m.labels(), rank, radius);

  std::vector<const Config*> targets;
  for (const auto& x : m.basis())
    if (!is_canonical(x)) targets.push_back(&x);
  if (opt.witness_sample && *opt.witness_sample < targets.size()) {
    std::mt19937_64 rng(opt.seed);
    std::shuffle(targets.begin(), targets.end(), rng);
    targets.resize(*opt.witness_sample);
  }
  for (const Config* x : targets) {
    if (!check_witness(m, psi, *x, telescoping_witness(m, *x))) {
      throw InvariantViolation("witness fails for " + serialize(*x, m.labels()));
    }
    ++r.witnesses_checked;
  }
  r.torsion = cokernel_invariants(psi.matrix).torsion;
  if (!r.torsion.empty()) {
    throw InvariantViolation("torsion in coker psi for " + spec.name());
  }
  return r;
}

inline std::vector<std::string> k1_generator_names(Side side, int rank) {
  std::vector<std::string> names;
  for (int i = 1; i <= rank; ++i)
    names.push_back((side == Side::analytic ? "u" : "v") + std::to_string(i));
  return names;
}

/// K_1 side: rank of ker psi with generator i matched to the i-th indicator.
inline KGroupReport k1_report(const FiniteGroupSpec& spec, Side side, int rank,
                              int radius) {
  const TruncatedModule m(spec, side, rank, radius);
  const auto cert = verify_kernel_lemma(m);
  if (cert.kernel_rank != static_cast<std::size_t>(rank)) {
    throw InvariantViolation("ker psi has rank " +
                             std::to_string(cert.kernel_rank) + ", expected " +
                             std::to_string(rank));
  }
  KGroupReport r;
  r.side = side;
  r.group = spec.name();
  r.rank = rank;
  r.radius = radius;
  r.labels = m.labels();
  r.k1_rank = cert.kernel_rank;
  r.k1_generator_names = k1_generator_names(side, rank);
  return r;
}

/// Both degrees in one report.
inline KGroupReport k_report(const FiniteGroupSpec& spec, Side side, int rank,
                             int radius, const ReportOptions& opt = {}) {
  KGroupReport r = k0_report(spec, side, rank, radius, opt);
  const KGroupReport k1 = k1_report(spec, side, rank, radius);
  r.k1_rank = k1.k1_rank;
  r.k1_generator_names = k1.k1_generator_names;
  return r;
}

/// mu_B: apply mu_F label by label on the support.
inline Config apply_mu(const FiniteGroupSpec& spec, const Config& pi) {
  std::vector<Config::Entry> out;
  out.reserve(pi.size());
  for (const auto& [w, l] : pi.entries()) out.emplace_back(w, mu_F(spec, l));
  Config image = Config::from_entries(std::move(out));
  if (image.size() != pi.size()) {
    throw InvariantViolation("mu_F sent a non-trivial irrep to the basepoint");
  }
  return image;
}

struct AssemblyReport {
  std::vector<std::pair<Config, Config>> degree0;  // topological -> analytic
  std::vector<std::pair<std::string, std::string>> degree1;  // v_i -> u_i
  bool bijective = false;
  std::size_t topological_size = 0;
  std::size_t analytic_size = 0;
};

inline AssemblyReport assembly_map(const FiniteGroupSpec& spec, int rank,
                                   int radius) {
  const auto top = enumerate_canonical(spec.dual(), rank, radius);
  const auto ana = enumerate_canonical(spec.min_projections(), rank, radius);
  AssemblyReport r;
  r.topological_size = top.size();
  r.analytic_size = ana.size();
  std::unordered_set<Config, ConfigHash> targets(ana.begin(), ana.end());
  std::unordered_set<Config, ConfigHash> hit;
  bool ok = top.size() == ana.size();
  for (const auto& pi : top) {
    Config image = apply_mu(spec, pi);
    if (image.support() != pi.support()) {
      throw InvariantViolation("assembly map changed a support");
    }
    ok = ok && targets.contains(image) && hit.insert(image).second;
    r.degree0.emplace_back(pi, std::move(image));
  }
  r.bijective = ok && hit.size() == targets.size();
  const auto v = k1_generator_names(Side::topological, rank);
  const auto u = k1_generator_names(Side::analytic, rank);
  for (int i = 0; i < rank; ++i) r.degree1.emplace_back(v[i], u[i]);
  return r;
}

/// tau(c) = product of the traces of the Min F labels on the support;
/// tau(1_{p_F}) = 1.
inline Rational trace_of(const FiniteGroupSpec& spec, const Config& c) {
  Rational t(1);
  for (const auto& [w, l] : c.entries()) t *= spec.trace(l);
  return t;
}

/// Configurations with at most max_support entries inside ball(rank, radius).
inline std::vector<Config> enumerate_sparse_configs(std::size_t label_count,
                                                    int rank, int radius,
                                                    std::size_t max_support) {
  const auto points = ball(rank, radius);
  std::vector<Config> out;
  std::vector<Config::Entry> current;
  std::function<void(std::size_t)> extend = [&](std::size_t start) {
    out.push_back(Config::from_entries(current));
    if (current.size() == max_support) return;
    for (std::size_t i = start; i < points.size(); ++i) {
      for (Label l = 1; l < label_count; ++l) {
        current.emplace_back(points[i], l);
        extend(i + 1);
        current.pop_back();
      }
    }
  };
  extend(0);
  return out;
}

struct TraceReport {
  int support_bound = 0;
  std::vector<std::pair<Config, Rational>> table;
  Rational generated;  // subgroup generated = generated * Z
  Rational predicted;  // 1 / |F|^support_bound
  bool holds = false;
  LabelSet labels;
};

/// Trace image of the canonical K_0 generators with at most support_bound
/// non-basepoint entries. Every label multiset of that size is realised by
/// some canonical configuration inside ball(rank, support_bound).
inline TraceReport trace_image(const FiniteGroupSpec& spec, int support_bound,
                               int rank = 1) {
  if (support_bound < 0) throw std::invalid_argument("support bound must be >= 0");
  TraceReport r;
  r.support_bound = support_bound;
  r.labels = spec.min_projections();
  auto configs = enumerate_sparse_configs(r.labels.size(), rank, support_bound,
                                          static_cast<std::size_t>(support_bound));
  std::erase_if(configs, [](const Config& c) { return !is_canonical(c); });
  sort_for_report(configs, r.labels);
  r.generated = Rational(0);
  for (auto& c : configs) {
    const Rational t = trace_of(spec, c);
    r.generated = rational_gcd(r.generated, t);
    r.table.emplace_back(std::move(c), t);
  }
  Integer power = 1;
  for (int i = 0; i < support_bound; ++i) power *= spec.order();
  r.predicted = Rational(1, power);
  r.holds = r.generated == r.predicted;
  return r;
}

// ---- report output ---------------------------------------------------------

inline nlohmann::ordered_json to_json(const KGroupReport& r,
                                      const FiniteGroupSpec& spec) {
  nlohmann::ordered_json j;
  j["side"] = to_string(r.side);
  j["group"] = r.group;
  j["n"] = r.rank;
  j["radius"] = r.radius;
  auto basis = nlohmann::ordered_json::array();
  auto trace = nlohmann::ordered_json::object();
  for (const auto& c : r.k0_basis) {
    const std::string key = serialize(c, r.labels);
    basis.push_back(key);
    const Rational t = r.side == Side::analytic ? trace_of(spec, c)
                                                : trace_of(spec, apply_mu(spec, c));
    trace[key] = to_string(t);
  }
  j["basis"] = std::move(basis);
  j["k1_rank"] = r.k1_rank;
  j["k1_generators"] = r.k1_generator_names;
  auto torsion = nlohmann::ordered_json::array();
  for (const auto& t : r.torsion) torsion.push_back(t.str());
  j["torsion"] = std::move(torsion);
  j["trace"] = std::move(trace);
  return j;
}

inline std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_csv_header(std::ostream& os) {
  os << "side,group,n,radius,k1_rank,torsion,basis,trace\n";
}

/// One row per basis element.
inline void write_csv(std::ostream& os, const KGroupReport& r,
                      const FiniteGroupSpec& spec) {
  std::string torsion;
  for (const auto& t : r.torsion) torsion += (torsion.empty() ? "" : " ") + t.str();
  for (const auto& c : r.k0_basis) {
    const Rational t = r.side == Side::analytic ? trace_of(spec, c)
                                                : trace_of(spec, apply_mu(spec, c));
    os << to_string(r.side) << ',' << csv_quote(r.group) << ',' << r.rank << ','
       << r.radius << ',' << r.k1_rank << ',' << csv_quote(torsion) << ','
       << csv_quote(serialize(c, r.labels)) << ',' << to_string(t) << '\n';
  }
}

inline nlohmann::ordered_json to_json(const TraceReport& r,
                                      const std::string& group) {
  nlohmann::ordered_json j;
  j["group"] = group;
  j["support_bound"] = r.support_bound;
  auto table = nlohmann::ordered_json::object();
  for (const auto& [c, t] : r.table) table[serialize(c, r.labels)] = to_string(t);
  j["trace"] = std::move(table);
  j["generated"] = to_string(r.generated);
  j["predicted"] = to_string(r.predicted);
  j["holds"] = r.holds;
  return j;
}

inline void write_csv(std::ostream& os, const TraceReport& r,
                      const std::string& group) {
  os << "group,support_bound,config,trace\n";
  for (const auto& [c, t] : r.table) {
    os << csv_quote(group) << ',' << r.support_bound << ','
       << csv_quote(serialize(c, r.labels)) << ',' << to_string(t) << '\n';
  }
  os << csv_quote(group) << ',' << r.support_bound << ",generated,"
     << to_string(r.generated) << '\n';
}

}  // namespace wreath
