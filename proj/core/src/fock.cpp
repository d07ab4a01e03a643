#include "qcorr/fock.hpp"

#include <algorithm>
#include <cmath>

namespace qcorr {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

void check_state(const FockBasisState& s, const ModeRegistry& reg) {
  if (s.occ.size() != reg.size())
    throw UnknownMode("basis state length does not match registry");
  int total = 0;
  for (std::size_t i = 0; i < s.occ.size(); ++i) {
    if (s.occ[i] > reg.level_cap(i))
      throw TruncationOverflow("occupation " + std::to_string(s.occ[i]) +
                               " exceeds cap of mode " + reg.mode(i).label.str());
    if (reg.counts_toward_cap(i)) total += s.occ[i];
  }
  if (total > reg.max_excitations())
    throw TruncationOverflow("state carries " + std::to_string(total) +
                             " excitations, cap is " +
                             std::to_string(reg.max_excitations()));
}

}  // namespace

int total_excitations(const FockBasisState& s, const ModeRegistry& reg) {
  int total = 0;
  for (std::size_t i = 0; i < s.occ.size(); ++i)
    if (reg.counts_toward_cap(i)) total += s.occ[i];
  return total;
}

FockKet FockKet::vacuum(RegistryPtr reg) {
  FockKet k(std::move(reg));
  FockBasisState vac;
  vac.occ.assign(k.reg_->size(), 0);
  k.amp_.emplace(std::move(vac), cplx(1.0, 0.0));
  return k;
}

FockKet FockKet::basis(RegistryPtr reg,
                       const std::vector<std::pair<ModeLabel, int>>& occupations) {
  FockKet k(std::move(reg));
  FockBasisState s;
  s.occ.assign(k.reg_->size(), 0);
  for (const auto& [label, n] : occupations) {
    const std::size_t i = k.reg_->index_of(label);
    if (n < 0) throw TruncationOverflow("negative occupation for " + label.str());
    s.occ[i] = static_cast<std::uint16_t>(s.occ[i] + n);
  }
  check_state(s, *k.reg_);
  k.amp_.emplace(std::move(s), cplx(1.0, 0.0));
  return k;
}

cplx FockKet::amplitude(const FockBasisState& s) const {
  auto it = amp_.find(s);
  return it == amp_.end() ? cplx(0.0, 0.0) : it->second;
}

std::vector<FockBasisState> FockKet::support() const {
  std::vector<FockBasisState> out;
  out.reserve(amp_.size());
  for (const auto& [s, a] : amp_) out.push_back(s);
  return out;
}

double FockKet::norm() const {
  double n2 = 0.0;
  for (const auto& [s, a] : amp_) n2 += std::norm(a);
  return std::sqrt(n2);
}

FockKet FockKet::normalized() const {
  const double n = norm();
  if (n < 1e-150) throw ZeroState("cannot normalize a zero ket");
  return scaled(1.0 / n);
}

cplx FockKet::inner(const FockKet& rhs) const {
  if (!reg_->same_modes(*rhs.reg_))
    throw UnknownMode("inner product between different registries");
  // Iterate the smaller support.
  const FockKet* a = this;
  const FockKet* b = &rhs;
  cplx acc(0.0, 0.0);
  if (a->amp_.size() > b->amp_.size()) std::swap(a, b);
  for (const auto& [s, av] : a->amp_) {
    auto it = b->amp_.find(s);
    if (it == b->amp_.end()) continue;
    // <this|rhs>: conjugate taken on this ket's amplitude.
    acc += (a == this) ? std::conj(av) * it->second : std::conj(it->second) * av;
  }
  return acc;
}

FockKet FockKet::scaled(cplx factor) const {
  FockKet out(reg_);
  for (const auto& [s, a] : amp_) {
    const cplx v = a * factor;
    if (v != cplx(0.0, 0.0)) out.amp_.emplace(s, v);
  }
  return out;
}

FockKet FockKet::plus(const FockKet& rhs) const {
  if (!reg_->same_modes(*rhs.reg_))
    throw UnknownMode("sum of kets over different registries");
  FockKet out = *this;
  for (const auto& [s, a] : rhs.amp_) {
    auto [it, fresh] = out.amp_.emplace(s, a);
    if (!fresh) {
      it->second += a;
      if (it->second == cplx(0.0, 0.0)) out.amp_.erase(it);
    }
  }
  return out;
}

void FockKet::accumulate(FockBasisState s, cplx amp) {
  if (amp == cplx(0.0, 0.0)) return;
  check_state(s, *reg_);
  auto [it, fresh] = amp_.emplace(std::move(s), amp);
  if (!fresh) {
    it->second += amp;
    if (it->second == cplx(0.0, 0.0)) amp_.erase(it);
  }
}

FockKet FockKet::extended(RegistryPtr super) const {
  std::vector<std::size_t> where(reg_->size());
  for (std::size_t i = 0; i < reg_->size(); ++i)
    where[i] = super->index_of(reg_->mode(i).label);
  FockKet out(super);
  for (const auto& [s, a] : amp_) {
    FockBasisState t;
    t.occ.assign(super->size(), 0);
    for (std::size_t i = 0; i < where.size(); ++i) t.occ[where[i]] = s.occ[i];
    check_state(t, *super);
    out.amp_.emplace(std::move(t), a);
  }
  return out;
}

double FockKet::number_expectation(std::size_t mode) const {
  if (mode >= reg_->size()) throw UnknownMode("mode index out of range");
  double acc = 0.0;
  for (const auto& [s, a] : amp_) acc += s.occ[mode] * std::norm(a);
  return acc;
}

FockKet tensor(const FockKet& a, const FockKet& b) {
  auto super = ModeRegistry::merged(*a.registry(), *b.registry());
  FockKet ea = a.extended(super);
  FockKet eb = b.extended(super);
  FockKet out(super);
  for (const auto& [sa, va] : ea.amplitudes()) {
    for (const auto& [sb, vb] : eb.amplitudes()) {
      FockBasisState s;
      s.occ.resize(super->size());
      for (std::size_t i = 0; i < super->size(); ++i)
        s.occ[i] = static_cast<std::uint16_t>(sa.occ[i] + sb.occ[i]);
      out.accumulate(std::move(s), va * vb);
    }
  }
  return out;
}

double fidelity(const FockKet& a, const FockKet& b) {
  return std::norm(a.inner(b));
}

FockKet unit_ket(RegistryPtr reg, const FockBasisState& s) {
  FockKet out = FockKet::vacuum(std::move(reg)).scaled(0.0);
  out.accumulate(s, cplx(1.0, 0.0));
  return out;
}

FockKet apply_creation_substitution(const FockKet& in, const SubstitutionTable& table) {
  const auto& reg = *in.registry();
  for (const auto& [m, image] : table) {
    if (m >= reg.size()) throw UnknownMode("substituted mode index out of range");
    for (const auto& term : image)
      for (std::size_t k : term.modes)
        if (k >= reg.size()) throw UnknownMode("target mode index out of range");
  }

  FockKet out = FockKet::vacuum(in.registry());
  out = out.scaled(0.0);  // empty accumulator

  using Poly = std::map<std::vector<std::uint16_t>, cplx>;
  for (const auto& [state, amp] : in.amplitudes()) {
    // Peel the substituted quanta off; |n> = adag^n / sqrt(n!) |0>.
    std::vector<std::uint16_t> base = state.occ;
    cplx pref = amp;
    std::vector<std::pair<std::size_t, int>> expansions;
    for (const auto& [m, image] : table) {
      const int n = base[m];
      if (n == 0) continue;
      pref /= std::sqrt(factorial(n));
      base[m] = 0;
      expansions.emplace_back(m, n);
    }

    Poly poly;
    poly.emplace(std::move(base), pref);
    for (const auto& [m, n] : expansions) {
      const auto& image = table.at(m);
      for (int rep = 0; rep < n; ++rep) {
        Poly next;
        for (const auto& [occ, c] : poly) {
          for (const auto& term : image) {
            if (term.coeff == cplx(0.0, 0.0)) continue;
            cplx c2 = c * term.coeff;
            std::vector<std::uint16_t> occ2 = occ;
            for (std::size_t k : term.modes) {
              c2 *= std::sqrt(static_cast<double>(occ2[k]) + 1.0);
              ++occ2[k];
            }
            auto [it, fresh] = next.emplace(std::move(occ2), c2);
            if (!fresh) it->second += c2;
          }
        }
        poly.swap(next);
      }
    }

    for (auto& [occ, c] : poly)
      out.accumulate(FockBasisState{occ}, c);
  }
  return out;
}

FockKet apply_annihilators(const FockKet& in,
                           const std::vector<std::pair<std::size_t, cplx>>& sum) {
  FockKet out = FockKet::vacuum(in.registry()).scaled(0.0);
  for (const auto& [state, amp] : in.amplitudes()) {
    for (const auto& [m, c] : sum) {
      if (m >= state.occ.size()) throw UnknownMode("annihilated mode index out of range");
      if (state.occ[m] == 0 || c == cplx(0.0, 0.0)) continue;
      FockBasisState t = state;
      const double n = t.occ[m];
      --t.occ[m];
      out.accumulate(std::move(t), amp * c * std::sqrt(n));
    }
  }
  return out;
}

cplx vacuum_amplitude(const FockKet& in) {
  FockBasisState vac;
  vac.occ.assign(in.registry()->size(), 0);
  return in.amplitude(vac);
}

std::pair<double, FockKet> project_total_counts(
    const FockKet& in,
    const std::vector<std::pair<std::vector<std::size_t>, int>>& constraints) {
  FockKet kept = FockKet::vacuum(in.registry()).scaled(0.0);
  double weight = 0.0;
  for (const auto& [state, amp] : in.amplitudes()) {
    bool match = true;
    for (const auto& [modes, want] : constraints) {
      int total = 0;
      for (std::size_t m : modes) total += state.occ[m];
      if (total != want) { match = false; break; }
    }
    if (!match) continue;
    weight += std::norm(amp);
    kept.accumulate(state, amp);
  }
  if (weight < 1e-300) return {0.0, kept};
  return {weight, kept.scaled(1.0 / std::sqrt(weight))};
}

namespace {
void enumerate_rec(const ModeRegistry& reg, std::size_t mode, int budget,
                   FockBasisState& cur, std::vector<FockBasisState>& out) {
  if (mode == reg.size()) {
    out.push_back(cur);
    return;
  }
  const bool counted = reg.counts_toward_cap(mode);
  const int cap = std::min(reg.level_cap(mode), counted ? budget : reg.level_cap(mode));
  for (int n = 0; n <= cap; ++n) {
    cur.occ[mode] = static_cast<std::uint16_t>(n);
    enumerate_rec(reg, mode + 1, counted ? budget - n : budget, cur, out);
  }
  cur.occ[mode] = 0;
}
}  // namespace

std::vector<FockBasisState> enumerate_basis(const ModeRegistry& reg) {
  std::vector<FockBasisState> out;
  FockBasisState cur;
  cur.occ.assign(reg.size(), 0);
  enumerate_rec(reg, 0, reg.max_excitations(), cur, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace qcorr
