// Copyright 2026 The nmk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nmk/nmf.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "nmk/entropy.hpp"
#include "nmk/error.hpp"

namespace nmk {
namespace {

constexpr double kDropWeight = 1e-14;

bool is_reserved(const std::string& label) {
  return label == kAPrime || label == kBPrime || label == kEPrime || label == kFlag;
}

std::vector<std::size_t> group_positions(const RegisterLayout& target, Party p,
                                         std::optional<std::size_t> extra) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target.registers()[i].party == p) out.push_back(i);
  }
  if (extra) out.push_back(*extra);
  return out;
}

// Precomputed index sets for the entropy of one marginal of a pure vector.
struct MarginalPlan {
  std::vector<long> keep;
  std::vector<long> rest;

  MarginalPlan(const RegisterLayout& layout, const std::vector<std::size_t>& positions)
      : keep(subsystem_offsets(layout, positions)),
        rest(subsystem_offsets(layout, complement_positions(layout, positions))) {}

  RVec spectrum(const CVec& v) const {
    const long nk = static_cast<long>(keep.size());
    const long nr = static_cast<long>(rest.size());
    CMat m(nk, nr);
    for (long t = 0; t < nr; ++t)
      for (long i = 0; i < nk; ++i) m(i, t) = v(keep[i] + rest[t]);
    if (nk <= nr) return hermitian_eigenvalues(m * m.adjoint());
    return hermitian_eigenvalues(m.adjoint() * m);
  }

  double entropy(const CVec& v) const { return spectrum_entropy(spectrum(v)); }
};

// Positions of the groups inside target + A' + B' + E'.
struct Groups {
  std::vector<std::size_t> a, b, e, aa, bb, ee, ap, bp, ep;
};

Groups groups_of(const RegisterLayout& target) {
  const std::size_t t = target.size();
  Groups g;
  g.a = group_positions(target, Party::Alice, std::nullopt);
  g.b = group_positions(target, Party::Bob, std::nullopt);
  g.e = group_positions(target, Party::Eve, std::nullopt);
  g.aa = group_positions(target, Party::Alice, t);
  g.bb = group_positions(target, Party::Bob, t + 1);
  g.ee = group_positions(target, Party::Eve, t + 2);
  g.ap = {t};
  g.bp = {t + 1};
  g.ep = {t + 2};
  return g;
}

std::vector<std::size_t> join(std::initializer_list<const std::vector<std::size_t>*> parts) {
  std::vector<std::size_t> out;
  for (const auto* p : parts) out.insert(out.end(), p->begin(), p->end());
  std::sort(out.begin(), out.end());
  return out;
}

RegisterLayout extension_layout(const RegisterLayout& target, const ExtDims& ext) {
  return target.concat(RegisterLayout({{kAPrime, ext.a, Party::Alice},
                                       {kBPrime, ext.b, Party::Bob},
                                       {kEPrime, ext.e, Party::Eve}}));
}

// S(AB|E) of the target state.
double conditional_abe(const DensityState& rho) {
  const auto g = party_groups(rho.layout());
  Labels abe = g.a;
  abe.insert(abe.end(), g.b.begin(), g.b.end());
  abe.insert(abe.end(), g.e.begin(), g.e.end());
  return entropy(rho, abe) - entropy(rho, g.e);
}

// Purification of rho as a d x r matrix.
CMat purification_matrix(const DensityState& rho) {
  const PureState psi = purify(rho, "R");
  const long d = rho.dim();
  const long r = psi.amplitudes().size() / d;
  CMat m(d, r);
  for (long x = 0; x < d; ++x)
    for (long i = 0; i < r; ++i) m(x, i) = psi.amplitudes()(x * r + i);
  return m;
}

// Members sum_k p_k phi_k produced by W applied to the reference.
std::vector<WitnessMember> members_from(const CMat& psi, const CMat& w, const ExtDims& ext) {
  const long d = psi.rows();
  const long e = ext.ext();
  const long k = ext.k;
  const CMat v = psi * w.transpose();
  std::vector<WitnessMember> members;
  double total = 0.0;
  for (long kk = 0; kk < k; ++kk) {
    CVec amp(d * e);
    for (long x = 0; x < d; ++x)
      for (long j = 0; j < e; ++j) amp(x * e + j) = v(x, j * k + kk);
    const double weight = amp.squaredNorm();
    if (weight <= kDropWeight) continue;
    amp /= std::sqrt(weight);
    members.push_back({weight, std::move(amp)});
    total += weight;
  }
  for (auto& m : members) m.weight /= total;
  return members;
}

// Ensemble part of the objective, used as the optimizer cost.
class CostModel {
 public:
  CostModel(const DensityState& rho, const ExtDims& ext)
      : ext_(ext),
        psi_(purification_matrix(rho)),
        layout_(extension_layout(rho.layout(), ext)),
        groups_(groups_of(rho.layout())),
        aa_(layout_, groups_.aa),
        bb_(layout_, groups_.bb),
        apbp_(layout_, join({&groups_.ap, &groups_.bp})),
        s_ab_given_e_(conditional_abe(rho)) {}

  long rank() const { return psi_.cols(); }
  const CMat& psi() const { return psi_; }

  double operator()(const CMat& w) const {
    double sum = 0.0;
    for (const auto& m : members_from(psi_, w, ext_)) {
      sum += m.weight * (aa_.entropy(m.amplitudes) + bb_.entropy(m.amplitudes) -
                         apbp_.entropy(m.amplitudes));
    }
    return 0.5 * (s_ab_given_e_ + sum);
  }

 private:
  ExtDims ext_;
  CMat psi_;
  RegisterLayout layout_;
  Groups groups_;
  MarginalPlan aa_, bb_, apbp_;
  double s_ab_given_e_;
};

Witness relabel_target(const Witness& w, const std::string& suffix) {
  std::vector<Register> regs = w.target().registers();
  for (auto& r : regs) r.label += suffix;
  return Witness(RegisterLayout(std::move(regs)), w.ext(), w.members());
}

long index_pad(long j, const ExtDims& from, const ExtDims& to) {
  const long e = j % from.e;
  const long b = (j / from.e) % from.b;
  const long a = j / (from.e * from.b);
  return (a * to.b + b) * to.e + e;
}

}  // namespace

// --- Witness ----------------------------------------------------------------

Witness::Witness(RegisterLayout target, ExtDims ext, std::vector<WitnessMember> members)
    : target_(std::move(target)), ext_(ext), members_(std::move(members)) {
  for (const auto& r : target_.registers()) {
    if (is_reserved(r.label)) {
      throw Error(Errc::LayoutClash, "target register '" + r.label + "' uses a reserved label");
    }
    if (r.party == Party::Reference) {
      throw Error(Errc::LayoutMismatch,
                  "target register '" + r.label + "' must belong to Alice, Bob or Eve");
    }
  }
  if (ext_.a < 1 || ext_.b < 1 || ext_.e < 1 || ext_.k < 1) {
    throw Error(Errc::BadDims, "extension dimensions must be positive");
  }
  if (members_.empty()) throw Error(Errc::BadEnsemble, "witness without members");
  if (static_cast<long>(members_.size()) > ext_.k) {
    throw Error(Errc::BadEnsemble, "more members than flag values");
  }
  const long dim = target_.total_dim() * ext_.ext();
  if (dim > dimension_budget()) {
    throw Error(Errc::BudgetExceeded, "witness member dimension " + std::to_string(dim) +
                                          " exceeds the budget");
  }
  double total = 0.0;
  for (const auto& m : members_) {
    if (m.amplitudes.size() != dim) {
      throw Error(Errc::DimensionMismatch, "member amplitude vector has the wrong size");
    }
    if (!(m.weight >= 0.0)) throw Error(Errc::BadEnsemble, "negative member weight");
    if (std::abs(m.amplitudes.norm() - 1.0) > 1e-8) {
      throw Error(Errc::BadEnsemble, "member is not normalized");
    }
    total += m.weight;
  }
  if (std::abs(total - 1.0) > tol::kProbability) {
    throw Error(Errc::BadEnsemble, "weights sum to " + std::to_string(total));
  }
}

RegisterLayout Witness::member_layout() const { return extension_layout(target_, ext_); }

PureState Witness::member_state(std::size_t k) const {
  return PureState(member_layout(), members_.at(k).amplitudes);
}

DensityState Witness::reduced() const {
  const RegisterLayout layout = member_layout();
  std::vector<std::size_t> pos(target_.size());
  for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = i;
  CMat rho = CMat::Zero(target_.total_dim(), target_.total_dim());
  for (const auto& m : members_) rho += m.weight * pure_marginal(layout, m.amplitudes, pos);
  return DensityState::trusted(target_, std::move(rho));
}

DensityState Witness::realize() const {
  const RegisterLayout layout =
      member_layout().concat(RegisterLayout({{kFlag, ext_.k, Party::Reference}}));
  const long d = target_.total_dim() * ext_.ext();
  const long k = ext_.k;
  if (d * k > dimension_budget()) {
    throw Error(Errc::BudgetExceeded, "flagged witness state exceeds the budget");
  }
  CMat m = CMat::Zero(d * k, d * k);
  for (std::size_t kk = 0; kk < members_.size(); ++kk) {
    const CVec& v = members_[kk].amplitudes;
    for (long j = 0; j < d; ++j)
      for (long i = 0; i < d; ++i)
        m(i * k + static_cast<long>(kk), j * k + static_cast<long>(kk)) =
            members_[kk].weight * v(i) * std::conj(v(j));
  }
  return DensityState::trusted(layout, std::move(m));
}

double Witness::objective() const {
  const RegisterLayout layout = member_layout();
  const Groups g = groups_of(target_);

  // Subsets including K: block diagonal, spectrum {p_k * lambda}.
  auto flagged = [&](const std::vector<std::size_t>& pos) {
    const MarginalPlan plan(layout, pos);
    std::vector<double> weighted;
    for (const auto& m : members_) {
      const RVec ev = plan.spectrum(m.amplitudes);
      for (Eigen::Index i = 0; i < ev.size(); ++i) weighted.push_back(m.weight * ev(i));
    }
    return spectrum_entropy(
        Eigen::Map<const RVec>(weighted.data(), static_cast<long>(weighted.size())));
  };
  // Subsets without K: the mixture of member marginals.
  auto mixed = [&](const std::vector<std::size_t>& pos) {
    CMat acc;
    for (const auto& m : members_) {
      const CMat part = pure_marginal(layout, m.amplitudes, pos);
      if (acc.size() == 0) acc = m.weight * part;
      else acc += m.weight * part;
    }
    return matrix_entropy(acc);
  };

  const auto aa = join({&g.aa});
  const auto bb = join({&g.bb});
  const auto aabb = join({&g.aa, &g.bb});
  const double i1 = flagged(aa) + flagged(bb) - flagged(aabb) - flagged({});

  const auto abe = join({&g.a, &g.b, &g.e});
  const auto eep = join({&g.e, &g.ep});
  const auto abeep = join({&g.a, &g.b, &g.e, &g.ep});
  const double i2 = mixed(abe) + flagged(eep) - flagged(abeep) - mixed(g.e);
  return 0.5 * (i1 + i2);
}

FormationTerms formation_terms(const Witness& w) {
  const RegisterLayout layout = w.member_layout();
  const Groups g = groups_of(w.target());
  const MarginalPlan aa(layout, g.aa), bb(layout, g.bb), apbp(layout, join({&g.ap, &g.bp}));
  double sum = 0.0;
  for (const auto& m : w.members()) {
    sum += m.weight *
           (aa.entropy(m.amplitudes) + bb.entropy(m.amplitudes) - apbp.entropy(m.amplitudes));
  }
  const double s = conditional_abe(w.reduced());
  return {s, sum, 0.5 * (s + sum)};
}

Witness witness_from_isometry(const DensityState& rho, const CMat& w, const ExtDims& ext) {
  const CMat psi = purification_matrix(rho);
  const long r = psi.cols();
  const long dd = ext.ext() * ext.k;
  if (dd < r) {
    throw Error(Errc::DimensionTooSmall, "a'b'e'k = " + std::to_string(dd) +
                                             " is below rank " + std::to_string(r));
  }
  if (w.rows() != dd || w.cols() != r) {
    throw Error(Errc::DimensionMismatch, "isometry must be " + std::to_string(dd) + "x" +
                                             std::to_string(r));
  }
  if (max_abs(w.adjoint() * w - CMat::Identity(r, r)) > 1e-9) {
    throw Error(Errc::InvalidChannel, "W is not an isometry");
  }
  return Witness(rho.layout(), ext, members_from(psi, w, ext));
}

std::vector<Witness> baseline_witnesses(const DensityState& rho) {
  const long r = purification_matrix(rho).cols();
  const CMat id = CMat::Identity(r, r);
  return {witness_from_isometry(rho, id, {1, r, 1, 1}),
          witness_from_isometry(rho, id, {r, 1, 1, 1})};
}

Witness markov_witness(const MarkovComponents& c) {
  c.validate();
  const long n = static_cast<long>(c.entries.size());
  const long a = c.dim_a, b = c.dim_b, el = c.dim_el, er = c.dim_er;
  const long ap = a * el, bp = b * er;
  auto purification = [](const CMat& rho) {
    const Eigh e = eigh(rho);
    CMat p = CMat::Zero(rho.rows(), rho.rows());
    for (Eigen::Index i = 0; i < e.values.size(); ++i) {
      if (e.values(i) > 0.0) p.col(i) = std::sqrt(e.values(i)) * e.vectors.col(i);
    }
    return CMat(p / p.norm());
  };
  const RegisterLayout target = abe_layout(a, b, n * el * er);
  std::vector<WitnessMember> members;
  double total = 0.0;
  for (long k = 0; k < n; ++k) {
    const auto& en = c.entries[static_cast<std::size_t>(k)];
    if (en.p <= 0.0) continue;
    const CMat ps = purification(en.sigma.matrix());
    const CMat pt = purification(en.tau.matrix());
    CVec amp = CVec::Zero(target.total_dim() * ap * bp);
    for (long x = 0; x < a; ++x)
      for (long y = 0; y < b; ++y)
        for (long l = 0; l < el; ++l)
          for (long r = 0; r < er; ++r) {
            const long t = (x * b + y) * n * el * er + (k * el + l) * er + r;
            for (long i = 0; i < ap; ++i)
              for (long j = 0; j < bp; ++j)
                amp((t * ap + i) * bp + j) = ps(x * el + l, i) * pt(y * er + r, j);
          }
    members.push_back({en.p, std::move(amp)});
    total += en.p;
  }
  for (auto& m : members) m.weight /= total;
  return Witness(target, {ap, bp, 1, n}, std::move(members));
}

NmfEstimate estimate_nmf(const DensityState& rho, const NmfConfig& config) {
  const auto g = party_groups(rho.layout());
  const double lower = m_i(rho, g.a, g.b, g.e);

  std::vector<std::pair<NmfCandidate, Witness>> pool;
  {
    auto base = baseline_witnesses(rho);
    pool.push_back({{"baseline_b_purifies", base[0].objective()}, base[0]});
    pool.push_back({{"baseline_a_purifies", base[1].objective()}, base[1]});
  }
  for (std::size_t i = 0; i < config.seeds.size(); ++i) {
    const Witness& s = config.seeds[i];
    if (!s.target().same_shape(rho.layout()) ||
        trace_distance(s.reduced(), rho) > 1e-8) {
      throw Error(Errc::LayoutMismatch, "seed witness " + std::to_string(i) +
                                            " does not reproduce the target state");
    }
    pool.push_back({{"seed_" + std::to_string(i), s.objective()}, s});
  }
  auto best_so_far = [&] {
    double b = pool.front().first.objective;
    for (const auto& p : pool) b = std::min(b, p.first.objective);
    return b;
  };

  std::vector<NmfTraceEntry> trace;
  bool exhausted = false;
  const long d = rho.dim();
  const long r = purification_matrix(rho).cols();

  std::vector<ExtDims> stages{config.ext};
  if (config.escalate && config.ext.a == 1 && config.ext.b == 1 && config.ext.e == 1) {
    stages.push_back({2, 2, 2, config.ext.k});
  }
  for (std::size_t st = 0; st < stages.size(); ++st) {
    if (best_so_far() - lower <= config.tol) break;
    ExtDims ext = stages[st];
    if (ext.k <= 0) ext.k = r;
    const long dd = ext.ext() * ext.k;
    if (dd < r) {
      if (st == 0) {
        throw Error(Errc::DimensionTooSmall, "a'b'e'k = " + std::to_string(dd) +
                                                 " is below rank " + std::to_string(r));
      }
      continue;
    }
    if (d * dd > dimension_budget()) {
      if (st == 0) {
        throw Error(Errc::BudgetExceeded, "witness dimension " + std::to_string(d * dd) +
                                              " exceeds the budget of " +
                                              std::to_string(dimension_budget()));
      }
      continue;
    }
    const CostModel cost(rho, ext);
    SearchConfig search = config.search;
    search.target = lower + 1e-10;
    if (st > 0) search.restarts = std::max(1, config.search.restarts / 4);
    const auto results = minimize_over_isometries(
        [&](const CMat& w) { return cost(w); }, dd, r, search, st);
    for (const auto& res : results) {
      trace.push_back({static_cast<int>(st), res.restart_id, res.objective, res.iterations,
                       res.exhausted, ext});
      exhausted = exhausted || res.exhausted;
    }
    const auto& best = results[best_restart(results)];
    Witness w = witness_from_isometry(rho, best.w, ext);
    pool.push_back({{"optimized_stage" + std::to_string(st), w.objective()}, std::move(w)});
  }

  std::size_t bi = 0;
  for (std::size_t i = 1; i < pool.size(); ++i) {
    if (pool[i].first.objective < pool[bi].first.objective) bi = i;
  }
  std::vector<NmfCandidate> candidates;
  for (const auto& p : pool) candidates.push_back(p.first);
  NmfEstimate out{lower, pool[bi].first.objective, pool[bi].second, pool[bi].first.name,
                  std::move(candidates), std::move(trace), exhausted,
                  entropy(rho, g.a), entropy(rho, g.b)};
  return out;
}

double continuity_bound(double eps, long dim_a, long dim_b) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw Error(Errc::BadRange, "epsilon must lie in [0, 1]");
  }
  if (dim_a < 1 || dim_b < 1) throw Error(Errc::BadDims, "dimensions must be positive");
  const double s = std::sqrt(eps);
  return 4.0 * s * std::log2(static_cast<double>(dim_a * dim_b)) +
         3.0 * (1.0 + s) * binary_entropy(s / (1.0 + s));
}

Witness witness_tensor(const Witness& w1, const Witness& w2) {
  for (const auto& r : w2.target().registers()) {
    if (w1.target().contains(r.label)) {
      throw Error(Errc::LayoutClash, "register '" + r.label + "' appears in both witnesses");
    }
  }
  const ExtDims e1 = w1.ext(), e2 = w2.ext();
  auto tagged = [](const RegisterLayout& target, const ExtDims& e, const std::string& s) {
    return target.concat(RegisterLayout({{kAPrime + s, e.a, Party::Alice},
                                         {kBPrime + s, e.b, Party::Bob},
                                         {kEPrime + s, e.e, Party::Eve}}));
  };
  const RegisterLayout joint = tagged(w1.target(), e1, "#1").concat(tagged(w2.target(), e2, "#2"));
  Labels order = w1.target().labels();
  for (const auto& l : w2.target().labels()) order.push_back(l);
  for (const auto& p : {kAPrime, kBPrime, kEPrime}) {
    order.push_back(p + "#1");
    order.push_back(p + "#2");
  }
  std::vector<WitnessMember> members;
  for (const auto& m1 : w1.members()) {
    for (const auto& m2 : w2.members()) {
      const CVec v = kron(m1.amplitudes, m2.amplitudes).col(0);
      const PureState s = reorder(PureState(joint, v), order);
      members.push_back({m1.weight * m2.weight, s.amplitudes()});
    }
  }
  return Witness(w1.target().concat(w2.target()),
                 {e1.a * e2.a, e1.b * e2.b, e1.e * e2.e, e1.k * e2.k}, std::move(members));
}

Witness witness_mix(const std::vector<MixPart>& parts, const std::string& m_label) {
  if (parts.empty()) throw Error(Errc::BadEnsemble, "nothing to mix");
  const RegisterLayout& target = parts.front().witness.target();
  if (target.contains(m_label)) {
    throw Error(Errc::LayoutClash, "label '" + m_label + "' already used by the target");
  }
  ExtDims big{1, 1, 1, 0};
  double total = 0.0;
  for (const auto& p : parts) {
    if (!(p.witness.target() == target)) {
      throw Error(Errc::LayoutClash, "mixed witnesses must share the target layout");
    }
    if (!(p.weight >= 0.0)) throw Error(Errc::BadEnsemble, "negative mixing weight");
    total += p.weight;
    big.a = std::max(big.a, p.witness.ext().a);
    big.b = std::max(big.b, p.witness.ext().b);
    big.e = std::max(big.e, p.witness.ext().e);
    big.k += p.witness.ext().k;
  }
  if (std::abs(total - 1.0) > tol::kProbability) {
    throw Error(Errc::BadEnsemble, "mixing weights sum to " + std::to_string(total));
  }
  const long nm = static_cast<long>(parts.size());
  const long dt = target.total_dim();
  const long ext = big.ext();
  std::vector<WitnessMember> members;
  for (long m = 0; m < nm; ++m) {
    const auto& part = parts[static_cast<std::size_t>(m)];
    if (part.weight <= 0.0) continue;
    const ExtDims& small = part.witness.ext();
    for (const auto& mem : part.witness.members()) {
      CVec amp = CVec::Zero(dt * nm * ext);
      for (long t = 0; t < dt; ++t)
        for (long j = 0; j < small.ext(); ++j)
          amp((t * nm + m) * ext + index_pad(j, small, big)) = mem.amplitudes(t * small.ext() + j);
      members.push_back({part.weight * mem.weight, std::move(amp)});
    }
  }
  return Witness(target.concat(RegisterLayout({{m_label, nm, Party::Eve}})), big,
                 std::move(members));
}

Witness witness_retag(const Witness& w, const std::string& label, Party p) {
  return Witness(w.target().with_party(label, p), w.ext(), w.members());
}

Witness witness_regroup(const Witness& w, const std::string& label) {
  if (w.target().at(label).party != Party::Alice) {
    throw Error(Errc::LayoutMismatch, "register '" + label + "' is not in Alice's group");
  }
  return witness_retag(w, label, Party::Eve);
}

Witness witness_move_to_alice(const Witness& w, const std::string& label) {
  if (w.target().at(label).party != Party::Eve) {
    throw Error(Errc::LayoutMismatch, "register '" + label + "' is not in Eve's group");
  }
  return witness_retag(w, label, Party::Alice);
}

Witness witness_apply_eve_isometry(const Witness& w, const CMat& v, const Labels& on,
                                   const RegisterLayout& out) {
  for (const auto& l : on) {
    if (w.target().at(l).party != Party::Eve) {
      throw Error(Errc::LayoutMismatch, "register '" + l + "' is not Eve's");
    }
  }
  if (max_abs(v.adjoint() * v - CMat::Identity(v.cols(), v.cols())) > 1e-9) {
    throw Error(Errc::InvalidChannel, "V is not an isometry");
  }
  std::vector<Register> regs = out.registers();
  for (auto& r : regs) r.party = Party::Eve;
  const RegisterLayout eve_out(std::move(regs));
  std::vector<WitnessMember> members;
  RegisterLayout new_target;
  for (std::size_t k = 0; k < w.members().size(); ++k) {
    const PureState s = apply_operator(w.member_state(k), v, on, eve_out);
    new_target = s.layout().without({kAPrime, kBPrime, kEPrime});
    members.push_back({w.members()[k].weight, s.amplitudes()});
  }
  return Witness(new_target, w.ext(), std::move(members));
}

Witness witness_apply_local(const Witness& w, const ChannelMap& c, const Labels& on,
                            const RegisterLayout& out, Party p) {
  if (p != Party::Alice && p != Party::Bob) {
    throw Error(Errc::BadParams, "local transport is for Alice or Bob");
  }
  for (const auto& l : on) {
    if (w.target().at(l).party != p) {
      throw Error(Errc::LayoutMismatch, "register '" + l + "' is not held by " +
                                            std::string(to_string(p)));
    }
  }
  const std::string env = "~env";
  const long n = static_cast<long>(c.kraus().size());
  std::vector<Register> regs = out.registers();
  for (auto& r : regs) r.party = p;
  regs.push_back({env, n, p});
  const RegisterLayout out_env(std::move(regs));
  const CMat v = c.stinespring();

  ExtDims ext = w.ext();
  std::vector<WitnessMember> members;
  RegisterLayout new_target;
  for (std::size_t k = 0; k < w.members().size(); ++k) {
    const PureState s = apply_operator(w.member_state(k), v, on, out_env);
    new_target = s.layout().without({env, kAPrime, kBPrime, kEPrime});
    Labels order = new_target.labels();
    if (p == Party::Alice) {
      order.insert(order.end(), {kAPrime, env, kBPrime, kEPrime});
    } else {
      order.insert(order.end(), {kAPrime, kBPrime, env, kEPrime});
    }
    members.push_back({w.members()[k].weight, reorder(s, order).amplitudes()});
  }
  if (p == Party::Alice) ext.a *= n;
  else ext.b *= n;
  return Witness(new_target, ext, std::move(members));
}

TensorPowerBracket tensor_power_bracket(const DensityState& rho, const NmfConfig& config) {
  if (rho.dim() * rho.dim() > 64) {
    throw Error(Errc::BudgetExceeded, "two-copy bracket is limited to total dimension 64");
  }
  const NmfEstimate single = estimate_nmf(rho, config);
  auto relabel = [&](const std::string& s) {
    std::vector<Register> regs = rho.layout().registers();
    for (auto& r : regs) r.label += s;
    return rho.relabeled(RegisterLayout(std::move(regs)));
  };
  const DensityState two = tensor(relabel("_1"), relabel("_2"));
  NmfConfig cfg = config;
  cfg.seeds = {witness_tensor(relabel_target(single.best, "_1"),
                              relabel_target(single.best, "_2"))};
  const NmfEstimate pair = estimate_nmf(two, cfg);
  return {single.lower_bits, single.upper_bits, 0.5 * pair.upper_bits};
}

}  // namespace nmk
