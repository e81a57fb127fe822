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

#include "nmk/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "nmk/entropy.hpp"
#include "nmk/error.hpp"

namespace nmk {
namespace {

constexpr double kClassicalTol = 1e-9;

void require_party(const RegisterLayout& layout, const std::string& label, Party p) {
  const Party held = layout.at(label).party;
  if (held != p) {
    throw Error(Errc::LayoutMismatch, "register '" + label + "' is held by " +
                                          std::string(to_string(held)) + ", not " +
                                          std::string(to_string(p)));
  }
}

void require_party(const RegisterLayout& layout, const Labels& labels, Party p) {
  for (const auto& l : labels) require_party(layout, l, p);
}

RegisterLayout owned_by(const RegisterLayout& out, Party p) {
  std::vector<Register> regs = out.registers();
  for (auto& r : regs) r.party = p;
  return RegisterLayout(std::move(regs));
}

std::string suffix(Party p) {
  switch (p) {
    case Party::Alice: return ".A";
    case Party::Bob: return ".B";
    case Party::Eve: return ".E";
    case Party::Reference: return ".R";
  }
  return ".R";
}

std::string fresh_message(const RegisterLayout& layout, const std::string& wanted) {
  auto taken = [&](const std::string& m) {
    for (const auto& r : layout.registers()) {
      if (r.label.rfind(m + ".", 0) == 0) return true;
    }
    return false;
  };
  if (!wanted.empty()) return wanted;
  for (int i = 0;; ++i) {
    const std::string m = "m" + std::to_string(i);
    if (!taken(m)) return m;
  }
}

// Moves `labels` to the end of the layout, preserving relative order.
DensityState move_to_end(const DensityState& s, const Labels& labels) {
  Labels order;
  for (const auto& l : s.layout().labels()) {
    if (std::find(labels.begin(), labels.end(), l) == labels.end()) order.push_back(l);
  }
  order.insert(order.end(), labels.begin(), labels.end());
  return reorder(s, order);
}

// Sender measures `on`; every receiver (sender included) gets a copy of the
// outcome in a fresh register.
DensityState measure_and_copy(const DensityState& s, Party sender, const Labels& on,
                              const std::vector<CMat>& measurement,
                              const std::string& message, const std::vector<Party>& receivers) {
  if (measurement.empty()) throw Error(Errc::InvalidChannel, "empty measurement");
  require_party(s.layout(), on, sender);
  const long n = static_cast<long>(measurement.size());
  const long d = on.empty() ? 1 : s.layout().dim_of(on);
  for (const auto& m : measurement) {
    if (m.rows() != d || m.cols() != d) {
      throw Error(Errc::DimensionMismatch, "measurement operators must be " +
                                               std::to_string(d) + "x" + std::to_string(d));
    }
  }
  std::vector<Register> out_regs;
  for (const auto& l : on) out_regs.push_back(s.layout().at(l));
  Labels copies;
  for (Party p : receivers) {
    out_regs.push_back({message + suffix(p), n, p});
    copies.push_back(message + suffix(p));
  }
  const RegisterLayout out(std::move(out_regs));
  const long c = static_cast<long>(receivers.size());
  long ncopies = 1;
  for (long i = 0; i < c; ++i) ncopies *= n;
  std::vector<CMat> kraus;
  for (long m = 0; m < n; ++m) {
    long diag = 0;
    for (long i = 0; i < c; ++i) diag = diag * n + m;
    CMat k = CMat::Zero(d * ncopies, d);
    for (long x = 0; x < d; ++x) k.row(x * ncopies + diag) = measurement[m].row(x);
    kraus.push_back(std::move(k));
  }
  const DensityState after = apply_channel(s, ChannelMap(std::move(kraus)), on, out);
  return move_to_end(after, copies);
}

bool is_classical(const DensityState& s, const std::string& label) {
  const long d = s.layout().at(label).dim;
  const DensityState dephased =
      apply_channel(s, ChannelMap::dephase(d), {label}, s.layout().subset({label}));
  return trace_distance(dephased, s) <= kClassicalTol;
}

DensityState eve_copy(const DensityState& s, const std::string& source,
                      const std::string& message, Party receiver) {
  require_party(s.layout(), source, Party::Eve);
  if (!is_classical(s, source)) {
    throw Error(Errc::IrreversibleEveOp,
                "register '" + source + "' is not classical; Eve can only announce "
                                        "classical data");
  }
  const long d = s.layout().at(source).dim;
  CMat v = CMat::Zero(d * d, d);
  for (long x = 0; x < d; ++x) v(x * d + x, x) = 1.0;
  const std::string copy = message + suffix(receiver);
  const RegisterLayout out({s.layout().at(source), {copy, d, receiver}});
  return move_to_end(apply_channel(s, ChannelMap({v}), {source}, out), {copy});
}

DensityState retag(const DensityState& s, const std::string& reg, Party from, Party to) {
  require_party(s.layout(), reg, from);
  return s.with_party(reg, to);
}

DensityState local_op(const DensityState& s, const Step& step, Party p) {
  if (!step.discard.empty()) {
    require_party(s.layout(), step.discard, p);
    return partial_trace(s, s.layout().without(step.discard).labels());
  }
  if (!step.channel) throw Error(Errc::InvalidChannel, "local step without a channel");
  require_party(s.layout(), step.on, p);
  return apply_channel(s, *step.channel, step.on, owned_by(step.out, p));
}

}  // namespace

std::string_view to_string(StepKind k) {
  switch (k) {
    case StepKind::LocalA: return "LocalA";
    case StepKind::LocalB: return "LocalB";
    case StepKind::ReversibleE: return "ReversibleE";
    case StepKind::QuantumToE: return "QuantumToE";
    case StepKind::QuantumFromE: return "QuantumFromE";
    case StepKind::BroadcastA: return "BroadcastA";
    case StepKind::BroadcastB: return "BroadcastB";
    case StepKind::ClassicalAE: return "ClassicalAE";
    case StepKind::ClassicalBE: return "ClassicalBE";
    case StepKind::SecretAB: return "SecretAB";
    case StepKind::QuantumAB: return "QuantumAB";
  }
  return "LocalA";
}

StepKind step_kind_from_string(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(StepKind::QuantumAB); ++i) {
    const auto k = static_cast<StepKind>(i);
    if (to_string(k) == s) return k;
  }
  throw Error(Errc::ParseError, "unknown step kind '" + std::string(s) + "'");
}

std::string_view to_string(Route r) {
  switch (r) {
    case Route::AToE: return "A->E";
    case Route::EToA: return "E->A";
    case Route::BToE: return "B->E";
    case Route::EToB: return "E->B";
    case Route::AToB: return "A->B";
    case Route::BToA: return "B->A";
  }
  return "A->E";
}

Route route_from_string(std::string_view s) {
  std::string up(s);
  std::transform(up.begin(), up.end(), up.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  for (int i = 0; i <= static_cast<int>(Route::BToA); ++i) {
    const auto r = static_cast<Route>(i);
    if (to_string(r) == up) return r;
  }
  throw Error(Errc::ParseError, "unknown route '" + std::string(s) + "'");
}

std::string_view to_string(ScriptClass c) {
  switch (c) {
    case ScriptClass::Omega: return "Omega";
    case ScriptClass::OmegaStar: return "OmegaStar";
    case ScriptClass::OmegaQ: return "OmegaQ";
    case ScriptClass::NonFree: return "NonFree";
  }
  return "NonFree";
}

Scenario apply_step(const Scenario& sc, const Step& step) {
  const DensityState& s = sc.state;
  CostLedger ledger = sc.ledger;
  auto done = [&](DensityState next) { return Scenario{std::move(next), ledger}; };

  switch (step.kind) {
    case StepKind::LocalA:
      return done(local_op(s, step, Party::Alice));
    case StepKind::LocalB:
      return done(local_op(s, step, Party::Bob));
    case StepKind::ReversibleE: {
      if (!step.discard.empty()) {
        if (!step.bypass) {
          throw Error(Errc::IrreversibleEveOp, "Eve cannot discard registers in a free step");
        }
        return done(local_op(s, step, Party::Eve));
      }
      if (!step.channel) throw Error(Errc::InvalidChannel, "ReversibleE without a channel");
      if (!step.bypass) {
        if (!step.channel->has_inverse()) {
          throw Error(Errc::IrreversibleEveOp, "Eve's channel declares no inverse");
        }
        const double err = step.channel->inverse_error();
        if (!(err <= tol::kInverse)) {
          throw Error(Errc::IrreversibleEveOp,
                      "declared inverse fails (max deviation " + std::to_string(err) + ")");
        }
      }
      return done(local_op(s, step, Party::Eve));
    }
    case StepKind::QuantumToE: {
      const Party from = s.layout().at(step.reg).party;
      if (from != Party::Alice && from != Party::Bob) {
        throw Error(Errc::LayoutMismatch, "QuantumToE moves an Alice or Bob register");
      }
      return done(s.with_party(step.reg, Party::Eve));
    }
    case StepKind::QuantumFromE: {
      if (step.to != Party::Alice && step.to != Party::Bob) {
        throw Error(Errc::BadParams, "QuantumFromE sends to Alice or Bob");
      }
      DensityState next = retag(s, step.reg, Party::Eve, step.to);
      ledger.qc_bits += std::log2(static_cast<double>(s.layout().at(step.reg).dim));
      return done(std::move(next));
    }
    case StepKind::QuantumAB: {
      if (step.route == Route::AToB) return done(retag(s, step.reg, Party::Alice, Party::Bob));
      if (step.route == Route::BToA) return done(retag(s, step.reg, Party::Bob, Party::Alice));
      throw Error(Errc::BadParams, "QuantumAB needs route A->B or B->A");
    }
    case StepKind::BroadcastA:
    case StepKind::BroadcastB: {
      const Party sender = step.kind == StepKind::BroadcastA ? Party::Alice : Party::Bob;
      return done(measure_and_copy(s, sender, step.on, step.measurement,
                                   fresh_message(s.layout(), step.message),
                                   {Party::Alice, Party::Bob, Party::Eve}));
    }
    case StepKind::ClassicalAE:
    case StepKind::ClassicalBE: {
      const bool alice = step.kind == StepKind::ClassicalAE;
      const Party party = alice ? Party::Alice : Party::Bob;
      const Route up = alice ? Route::AToE : Route::BToE;
      const Route down = alice ? Route::EToA : Route::EToB;
      const std::string msg = fresh_message(s.layout(), step.message);
      if (step.route == up) {
        return done(measure_and_copy(s, party, step.on, step.measurement, msg,
                                     {party, Party::Eve}));
      }
      if (step.route == down) {
        DensityState next = eve_copy(s, step.source, msg, party);
        ledger.cdown_bits += std::log2(static_cast<double>(s.layout().at(step.source).dim));
        return done(std::move(next));
      }
      throw Error(Errc::BadParams, "route " + std::string(to_string(step.route)) +
                                       " does not fit " + std::string(to_string(step.kind)));
    }
    case StepKind::SecretAB: {
      const std::string msg = fresh_message(s.layout(), step.message);
      if (step.route == Route::AToB) {
        return done(measure_and_copy(s, Party::Alice, step.on, step.measurement, msg,
                                     {Party::Alice, Party::Bob}));
      }
      if (step.route == Route::BToA) {
        return done(measure_and_copy(s, Party::Bob, step.on, step.measurement, msg,
                                     {Party::Bob, Party::Alice}));
      }
      throw Error(Errc::BadParams, "SecretAB needs route A->B or B->A");
    }
  }
  throw Error(Errc::BadParams, "unknown step kind");
}

ScriptClass classify_script(const std::vector<Step>& steps) {
  bool cdown = false, quantum_down = false;
  for (const auto& st : steps) {
    switch (st.kind) {
      case StepKind::SecretAB:
      case StepKind::QuantumAB:
        return ScriptClass::NonFree;
      case StepKind::ReversibleE:
        if (st.bypass) return ScriptClass::NonFree;
        break;
      case StepKind::QuantumFromE:
        quantum_down = true;
        break;
      case StepKind::ClassicalAE:
      case StepKind::ClassicalBE:
        if (st.route == Route::EToA || st.route == Route::EToB) cdown = true;
        break;
      default:
        break;
    }
  }
  if (cdown && quantum_down) return ScriptClass::NonFree;
  if (cdown) return ScriptClass::OmegaStar;
  if (quantum_down) return ScriptClass::OmegaQ;
  return ScriptClass::Omega;
}

ScriptRun run_script(const Scenario& sc, const std::vector<Step>& steps) {
  ScriptRun run{sc, {}, classify_script(steps)};
  double mi = m_i_parties(sc.state);
  for (const auto& st : steps) {
    Scenario next = apply_step(run.final, st);
    const double after = m_i_parties(next.state);
    CostLedger delta{next.ledger.qc_bits - run.final.ledger.qc_bits,
                     next.ledger.cdown_bits - run.final.ledger.cdown_bits};
    run.records.push_back({st.kind, mi, after, delta});
    run.final = std::move(next);
    mi = after;
  }
  return run;
}

DilutionCost dilution_conversion_cost(const std::vector<long>& mu, long l) {
  if (l < 1) throw Error(Errc::BadRange, "l must be a positive integer");
  if (mu.empty()) throw Error(Errc::BadMu, "no rounds");
  DilutionCost out{{}, 0.0, 0.0};
  double cdown = 0.0;
  for (long m : mu) {
    if (m < 2) throw Error(Errc::BadMu, "every mu must be at least 2, got " + std::to_string(m));
    cdown += std::log2(static_cast<double>(m));
    // Exact integer ceil(sqrt(m^l)) while m^l fits in 126 bits.
    unsigned __int128 power = 1;
    bool exact = true;
    for (long i = 0; i < l && exact; ++i) {
      if (power > (static_cast<unsigned __int128>(1) << 120) / static_cast<unsigned>(m)) {
        exact = false;
      }
      power *= static_cast<unsigned>(m);
    }
    double bits;
    if (exact) {
      auto root = static_cast<unsigned __int128>(std::sqrt(static_cast<long double>(power)));
      while (root * root < power) ++root;
      while (root > 0 && (root - 1) * (root - 1) >= power) --root;
      bits = std::log2(static_cast<long double>(root));
    } else {
      // Relative effect of the ceiling is below 2^-60 here.
      bits = 0.5 * static_cast<double>(l) * std::log2(static_cast<double>(m));
    }
    out.per_step_bits.push_back(bits);
    out.total_bits += bits;
  }
  out.lemma6_bound = (0.5 * static_cast<double>(l) + 1.0) * cdown;
  return out;
}

DensityState dummy_state(long dim) {
  if (dim < 1) throw Error(Errc::BadParams, "dummy dimension must be positive");
  return basis_state(abe_layout(dim, dim, dim), {0, 0, 0});
}

namespace {

// Channel on [X(dd), J(n)] -> [X(dx), J(n), Y(dy)] preparing rho_j on XY when
// J = j, whatever X held before.
ChannelMap controlled_preparation(const std::vector<CMat>& rhos, long dd, long dx, long dy) {
  const long n = static_cast<long>(rhos.size());
  std::vector<CMat> kraus;
  for (long j = 0; j < n; ++j) {
    const Eigh e = eigh(rhos[static_cast<std::size_t>(j)]);
    double total = 0.0;
    for (Eigen::Index i = 0; i < e.values.size(); ++i) {
      if (e.values(i) > tol::kRank) total += e.values(i);
    }
    for (Eigen::Index i = 0; i < e.values.size(); ++i) {
      if (e.values(i) <= tol::kRank) continue;
      const double w = std::sqrt(e.values(i) / total);
      for (long x = 0; x < dd; ++x) {
        CMat k = CMat::Zero(dx * n * dy, dd * n);
        for (long a = 0; a < dx; ++a)
          for (long y = 0; y < dy; ++y)
            k((a * n + j) * dy + y, x * n + j) = w * e.vectors(a * dy + y, i);
        kraus.push_back(std::move(k));
      }
    }
  }
  return ChannelMap(std::move(kraus));
}

}  // namespace

std::vector<Step> markov_preparation_script(const MarkovComponents& c, long dd) {
  c.validate();
  const long n = static_cast<long>(c.entries.size());
  std::vector<Step> steps;

  Step draw;
  draw.kind = StepKind::LocalA;
  std::vector<CMat> draw_kraus;
  for (long j = 0; j < n; ++j) {
    CMat k = CMat::Zero(n, 1);
    k(j, 0) = std::sqrt(c.entries[static_cast<std::size_t>(j)].p);
    draw_kraus.push_back(k);
  }
  draw.channel = ChannelMap(std::move(draw_kraus));
  draw.out = RegisterLayout({{"J", n, Party::Alice}});
  steps.push_back(draw);

  Step broadcast;
  broadcast.kind = StepKind::BroadcastA;
  broadcast.on = {"J"};
  broadcast.message = "J";
  for (long j = 0; j < n; ++j) {
    CMat proj = CMat::Zero(n, n);
    proj(j, j) = 1.0;
    broadcast.measurement.push_back(proj);
  }
  steps.push_back(broadcast);

  std::vector<CMat> sigmas, taus;
  for (const auto& en : c.entries) {
    sigmas.push_back(en.sigma.matrix());
    taus.push_back(en.tau.matrix());
  }
  Step prep_a;
  prep_a.kind = StepKind::LocalA;
  prep_a.on = {"A", "J"};
  prep_a.channel = controlled_preparation(sigmas, dd, c.dim_a, c.dim_el);
  prep_a.out = RegisterLayout({{"A", c.dim_a, Party::Alice}, {"J", n, Party::Alice},
                               {"EL", c.dim_el, Party::Alice}});
  steps.push_back(prep_a);

  Step prep_b;
  prep_b.kind = StepKind::LocalB;
  prep_b.on = {"B", "J.B"};
  prep_b.channel = controlled_preparation(taus, dd, c.dim_b, c.dim_er);
  prep_b.out = RegisterLayout({{"B", c.dim_b, Party::Bob}, {"J.B", n, Party::Bob},
                               {"ER", c.dim_er, Party::Bob}});
  steps.push_back(prep_b);

  for (const char* r : {"EL", "ER"}) {
    Step send;
    send.kind = StepKind::QuantumToE;
    send.reg = r;
    steps.push_back(send);
  }

  Step drop_a;
  drop_a.kind = StepKind::LocalA;
  drop_a.discard = {"J", "J.A"};
  steps.push_back(drop_a);
  Step drop_b;
  drop_b.kind = StepKind::LocalB;
  drop_b.discard = {"J.B"};
  steps.push_back(drop_b);

  // |e0, j, l, r> -> |j, l, r>|e0>
  const long inner = n * c.dim_el * c.dim_er;
  CMat perm = CMat::Zero(dd * inner, dd * inner);
  for (long e0 = 0; e0 < dd; ++e0)
    for (long t = 0; t < inner; ++t) perm(t * dd + e0, e0 * inner + t) = 1.0;
  Step eve;
  eve.kind = StepKind::ReversibleE;
  eve.on = {"E", "J.E", "EL", "ER"};
  eve.channel = ChannelMap::unitary(perm);
  eve.out = RegisterLayout({{"E", inner, Party::Eve}, {"E_anc", dd, Party::Eve}});
  steps.push_back(eve);
  return steps;
}

}  // namespace nmk
