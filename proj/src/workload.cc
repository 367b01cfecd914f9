// Copyright 2026 The srmc Authors.
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

#include "srmc/workload.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "srmc/error.h"

namespace srmc {

const char* role_name(Role r) {
  switch (r) {
    case Role::kSender:
      return "sender";
    case Role::kReceiver:
      return "receiver";
    case Role::kBoth:
      return "both";
  }
  return "?";
}

const char* distribution_name(SizeDistribution d) {
  return d == SizeDistribution::kWve ? "wve" : "uniform";
}

SizeDistribution parse_distribution(const std::string& s) {
  if (s == "wve" || s == "WVE") return SizeDistribution::kWve;
  if (s == "uniform" || s == "Uniform") return SizeDistribution::kUniform;
  throw InvalidArgument("unknown distribution '" + s + "'");
}

std::vector<std::uint32_t> sample_tenant_sizes(std::size_t count,
                                               std::uint64_t seed,
                                               const TenantSizeParams& p) {
  Rng rng(seed);
  std::vector<std::uint32_t> sizes(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = (static_cast<double>(i) + rng.uniform()) /
                     static_cast<double>(count);
    const double x = p.theta * -std::log1p(-u);
    const double v = std::floor(p.min + x + 0.5);
    sizes[i] = v >= p.max ? p.max : static_cast<std::uint32_t>(v);
  }
  rng.shuffle(sizes);
  return sizes;
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

WveDistribution::WveDistribution() {
  const std::uint32_t n = kMaxSize - kMinGroupSize + 1;
  cdf_.resize(n);
  const double log_lo = std::log(kTailLo), log_hi = std::log(kTailHi);
  for (std::uint32_t k = 0; k < n; ++k) {
    // size <= 5 + k  <=>  Y < k + 1.
    const double y = static_cast<double>(k) + 1.0;
    const double body = normal_cdf((std::log(y) - kMu) / kSigma);
    const double tail =
        std::clamp((std::log(y) - log_lo) / (log_hi - log_lo), 0.0, 1.0);
    cdf_[k] = (1.0 - kTailWeight) * body + kTailWeight * tail;
  }
  cdf_[n - 1] = 1.0;
}

const WveDistribution& WveDistribution::Get() {
  static const WveDistribution d;
  return d;
}

double WveDistribution::cdf(std::uint32_t s) const {
  if (s < kMinGroupSize) return 0.0;
  if (s >= kMaxSize) return 1.0;
  return cdf_[s - kMinGroupSize];
}

std::uint32_t WveDistribution::sample(std::uint32_t tenant_size,
                                      Rng& rng) const {
  const std::uint32_t top = std::min(tenant_size, kMaxSize) - kMinGroupSize;
  const double u = rng.uniform() * cdf_[top];
  auto it = std::upper_bound(cdf_.begin(), cdf_.begin() + top + 1, u);
  const auto k = static_cast<std::uint32_t>(
      std::min<std::ptrdiff_t>(it - cdf_.begin(), top));
  return kMinGroupSize + k;
}

std::uint32_t sample_group_size(SizeDistribution dist,
                                std::uint32_t tenant_size, Rng& rng) {
  if (tenant_size < kMinGroupSize) {
    throw InvalidArgument("tenant size " + std::to_string(tenant_size) +
                          " below minimum group size");
  }
  if (dist == SizeDistribution::kUniform) {
    return static_cast<std::uint32_t>(rng.between(kMinGroupSize, tenant_size));
  }
  return WveDistribution::Get().sample(tenant_size, rng);
}

std::vector<std::uint32_t> sample_group_sizes(SizeDistribution dist,
                                              std::uint32_t tenant_size,
                                              std::size_t n,
                                              std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint32_t> out(n);
  for (auto& s : out) s = sample_group_size(dist, tenant_size, rng);
  return out;
}

std::vector<std::uint64_t> apportion(std::span<const std::uint32_t> weights,
                                     std::uint64_t total,
                                     std::uint32_t min_weight) {
  std::vector<std::uint64_t> out(weights.size(), 0);
  unsigned __int128 sum = 0;
  for (std::uint32_t w : weights) {
    if (w >= min_weight) sum += w;
  }
  if (sum == 0) {
    if (total > 0) throw InvalidArgument("no tenant can own a group");
    return out;
  }
  std::vector<std::pair<std::uint64_t, std::size_t>> rem;
  std::uint64_t given = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < min_weight) continue;
    const unsigned __int128 num =
        static_cast<unsigned __int128>(total) * weights[i];
    out[i] = static_cast<std::uint64_t>(num / sum);
    rem.emplace_back(static_cast<std::uint64_t>(num % sum), i);
    given += out[i];
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
    return a.first > b.first;
  });
  for (std::size_t i = 0; given < total; ++i, ++given) {
    ++out[rem[i].second];
  }
  return out;
}

std::vector<Member> sample_members(const Tenant& tenant, std::uint32_t size,
                                   Rng& rng) {
  if (size > tenant.size) {
    throw InvalidArgument("group larger than tenant");
  }
  thread_local std::vector<std::uint8_t> chosen;
  if (chosen.size() < tenant.size) chosen.resize(tenant.size, 0);
  std::vector<std::uint32_t> picks;
  picks.reserve(size);
  // Floyd's algorithm.
  for (std::uint32_t j = tenant.size - size; j < tenant.size; ++j) {
    auto t = static_cast<std::uint32_t>(rng.below(j + 1));
    if (chosen[t]) t = j;
    chosen[t] = 1;
    picks.push_back(t);
  }
  std::sort(picks.begin(), picks.end());
  std::vector<Member> members(size);
  for (std::uint32_t i = 0; i < size; ++i) {
    chosen[picks[i]] = 0;
    members[i].vm = tenant.first_vm + picks[i];
    members[i].role = static_cast<Role>(1 + rng.below(3));
  }
  if (!members.empty()) {
    if (std::none_of(members.begin(), members.end(),
                     [](const Member& m) { return can_receive(m.role); })) {
      members.back().role = Role::kBoth;
    }
    if (std::none_of(members.begin(), members.end(),
                     [](const Member& m) { return can_send(m.role); })) {
      members.front().role = Role::kBoth;
    }
  }
  return members;
}

GroupCatalog::GroupCatalog(const Placement& placement,
                           std::uint64_t total_groups, SizeDistribution dist,
                           std::uint64_t seed)
    : placement_(&placement), seed_(seed) {
  std::vector<std::uint32_t> weights;
  for (const Tenant& t : placement.tenants()) weights.push_back(t.size);
  const auto counts = apportion(weights, total_groups);
  tenant_.reserve(total_groups);
  for (std::size_t t = 0; t < counts.size(); ++t) {
    tenant_.insert(tenant_.end(), counts[t], static_cast<TenantId>(t));
  }
  Rng order(mix_seed(seed, 0x6f72646572ull));
  order.shuffle(tenant_);
  size_.resize(tenant_.size());
  for (std::size_t g = 0; g < tenant_.size(); ++g) {
    Rng rng(mix_seed(seed, g, 0));
    size_[g] = sample_group_size(dist, placement.tenant(tenant_[g]).size, rng);
  }
}

GroupSpec GroupCatalog::materialize(std::uint32_t g) const {
  GroupSpec spec;
  spec.id = g;
  spec.tenant = tenant_.at(g);
  Rng rng(mix_seed(seed_, g, 1));
  spec.members = sample_members(placement_->tenant(spec.tenant), size_[g], rng);
  return spec;
}

std::vector<GroupSpec> assign_groups(const Placement& placement,
                                     std::uint64_t total_groups,
                                     SizeDistribution dist,
                                     std::uint64_t seed) {
  GroupCatalog catalog(placement, total_groups, dist, seed);
  std::vector<GroupSpec> out;
  out.reserve(catalog.size());
  for (std::uint32_t g = 0; g < catalog.size(); ++g) {
    out.push_back(catalog.materialize(g));
  }
  return out;
}

void apply_membership(std::vector<Member>& members, const ChurnEvent& ev) {
  auto it = std::lower_bound(
      members.begin(), members.end(), ev.vm,
      [](const Member& m, VmId v) { return m.vm < v; });
  const bool present = it != members.end() && it->vm == ev.vm;
  if (ev.kind == ChurnKind::kJoin) {
    if (present) {
      throw InvalidArgument("join of existing member vm " +
                            std::to_string(ev.vm));
    }
    members.insert(it, Member{ev.vm, ev.role});
  } else {
    if (!present) {
      throw InvalidArgument("leave of non-member vm " + std::to_string(ev.vm));
    }
    members.erase(it);
  }
}

std::vector<ChurnEvent> generate_churn(
    std::span<const std::uint32_t> group_sizes,
    const std::function<GroupSpec(std::uint32_t)>& materialize,
    const Placement& placement, std::size_t n_events, std::uint64_t seed) {
  if (group_sizes.empty()) throw InvalidArgument("no groups");
  std::vector<std::uint64_t> cum(group_sizes.size());
  std::uint64_t acc = 0;
  for (std::size_t g = 0; g < group_sizes.size(); ++g) {
    acc += group_sizes[g];
    cum[g] = acc;
  }
  Rng rng(seed);
  struct Live {
    TenantId tenant;
    std::vector<Member> members;
  };
  std::unordered_map<std::uint32_t, Live> live;
  std::vector<ChurnEvent> events;
  events.reserve(n_events);
  for (std::size_t i = 0; i < n_events; ++i) {
    const std::uint64_t x = rng.below(acc);
    const auto g = static_cast<std::uint32_t>(
        std::upper_bound(cum.begin(), cum.end(), x) - cum.begin());
    auto found = live.find(g);
    if (found == live.end()) {
      GroupSpec spec = materialize(g);
      found = live.emplace(g, Live{spec.tenant, std::move(spec.members)}).first;
    }
    Live& st = found->second;
    const Tenant& tenant = placement.tenant(st.tenant);
    bool join = rng.below(2) == 0;
    if (st.members.size() <= kMinGroupSize) join = true;
    if (st.members.size() >= tenant.size) join = false;
    ChurnEvent ev;
    ev.group = g;
    if (join) {
      ev.kind = ChurnKind::kJoin;
      const std::uint32_t free = tenant.size -
                                 static_cast<std::uint32_t>(st.members.size());
      // The k-th VM of the tenant that is not a member.
      std::uint32_t k = static_cast<std::uint32_t>(rng.below(free));
      VmId vm = tenant.first_vm;
      for (const Member& m : st.members) {
        if (m.vm - vm > k) break;
        k -= m.vm - vm;
        vm = m.vm + 1;
      }
      ev.vm = vm + k;
      ev.role = static_cast<Role>(1 + rng.below(3));
    } else {
      ev.kind = ChurnKind::kLeave;
      const auto& m = st.members[rng.below(st.members.size())];
      ev.vm = m.vm;
      ev.role = m.role;
    }
    apply_membership(st.members, ev);
    events.push_back(ev);
  }
  return events;
}

std::vector<ChurnEvent> generate_churn(std::span<const GroupSpec> groups,
                                       const Placement& placement,
                                       std::size_t n_events,
                                       std::uint64_t seed) {
  std::vector<std::uint32_t> sizes;
  sizes.reserve(groups.size());
  for (const auto& g : groups) {
    sizes.push_back(static_cast<std::uint32_t>(g.members.size()));
  }
  return generate_churn(
      sizes, [&](std::uint32_t g) { return groups[g]; }, placement, n_events,
      seed);
}

std::vector<ChurnEvent> generate_churn(const GroupCatalog& catalog,
                                       std::size_t n_events,
                                       std::uint64_t seed) {
  return generate_churn(
      catalog.sizes(),
      [&](std::uint32_t g) { return catalog.materialize(g); },
      catalog.placement(), n_events, seed);
}

}  // namespace srmc
