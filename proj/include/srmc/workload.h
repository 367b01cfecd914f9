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

#ifndef SRMC_WORKLOAD_H_
#define SRMC_WORKLOAD_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "srmc/placement.h"
#include "srmc/rng.h"

namespace srmc {

inline constexpr std::uint32_t kMinGroupSize = 5;

enum class Role : std::uint8_t { kSender = 1, kReceiver = 2, kBoth = 3 };

inline bool can_send(Role r) {
  return static_cast<std::uint8_t>(r) & static_cast<std::uint8_t>(Role::kSender);
}
inline bool can_receive(Role r) {
  return static_cast<std::uint8_t>(r) &
         static_cast<std::uint8_t>(Role::kReceiver);
}
const char* role_name(Role r);

struct Member {
  VmId vm = 0;
  Role role = Role::kBoth;

  friend bool operator==(const Member&, const Member&) = default;
};

struct GroupSpec {
  std::uint32_t id = 0;
  TenantId tenant = 0;
  // Sorted by vm.
  std::vector<Member> members;
};

enum class SizeDistribution : std::uint8_t { kWve, kUniform };

const char* distribution_name(SizeDistribution d);
SizeDistribution parse_distribution(const std::string& s);

// Shifted exponential: min + round(theta * Exp(1)), capped at max.
struct TenantSizeParams {
  std::uint32_t min = 10;
  double theta = 168.7705;
  std::uint32_t max = 5000;
};

// Stratified draw (one uniform per equal-probability stratum, then
// shuffled) so small tenant counts still match the target mean closely.
std::vector<std::uint32_t> sample_tenant_sizes(std::size_t count,
                                               std::uint64_t seed,
                                               const TenantSizeParams& p = {});

// Group-size law modelled on the WVE trace summary: 5 + floor(Y) where Y is
// a log-normal body mixed with a log-uniform tail on [100, 1000]. Fitted to
// mean 60, 80% below 61 and 0.6% above 700, so tenants of 1000 or more VMs
// all see the same law. Smaller tenants get it truncated to [5, T].
class WveDistribution {
 public:
  static constexpr double kMu = 3.6768646;
  static constexpr double kSigma = 0.36265650;
  static constexpr double kTailWeight = 0.03812168;
  static constexpr double kTailLo = 100.0;
  static constexpr double kTailHi = 1000.0;
  static constexpr std::uint32_t kMaxSize = 5000;

  static const WveDistribution& Get();

  // P(size <= s), untruncated.
  double cdf(std::uint32_t s) const;
  std::uint32_t sample(std::uint32_t tenant_size, Rng& rng) const;

 private:
  WveDistribution();
  // cdf_[k] = P(size <= 5 + k).
  std::vector<double> cdf_;
};

std::uint32_t sample_group_size(SizeDistribution dist,
                                std::uint32_t tenant_size, Rng& rng);

std::vector<std::uint32_t> sample_group_sizes(SizeDistribution dist,
                                              std::uint32_t tenant_size,
                                              std::size_t n,
                                              std::uint64_t seed);

// Largest-remainder apportionment of `total` proportional to `weights`;
// ties go to the lower index. Entries with weight below `min_weight` get 0.
std::vector<std::uint64_t> apportion(std::span<const std::uint32_t> weights,
                                     std::uint64_t total,
                                     std::uint32_t min_weight = kMinGroupSize);

// Lazily materialised group set: sizes and owners are fixed up front,
// members are drawn from a per-group stream on demand.
class GroupCatalog {
 public:
  GroupCatalog(const Placement& placement, std::uint64_t total_groups,
               SizeDistribution dist, std::uint64_t seed);

  std::size_t size() const { return tenant_.size(); }
  TenantId tenant_of(std::uint32_t g) const { return tenant_[g]; }
  std::uint32_t size_of(std::uint32_t g) const { return size_[g]; }
  std::span<const std::uint32_t> sizes() const { return size_; }
  GroupSpec materialize(std::uint32_t g) const;
  const Placement& placement() const { return *placement_; }

 private:
  const Placement* placement_;
  std::uint64_t seed_;
  std::vector<TenantId> tenant_;
  std::vector<std::uint32_t> size_;
};

std::vector<GroupSpec> assign_groups(const Placement& placement,
                                     std::uint64_t total_groups,
                                     SizeDistribution dist,
                                     std::uint64_t seed);

// Members of `size` distinct VMs of `tenant` with uniform roles, fixed up so
// at least one member can send and one can receive.
std::vector<Member> sample_members(const Tenant& tenant, std::uint32_t size,
                                   Rng& rng);

enum class ChurnKind : std::uint8_t { kJoin, kLeave };

struct ChurnEvent {
  std::uint32_t group = 0;
  ChurnKind kind = ChurnKind::kJoin;
  VmId vm = 0;
  Role role = Role::kBoth;

  friend bool operator==(const ChurnEvent&, const ChurnEvent&) = default;
};

// Groups are picked with probability proportional to their initial size.
// Join or leave is a fair coin; groups at the minimum size always join and
// groups holding every tenant VM always leave.
std::vector<ChurnEvent> generate_churn(
    std::span<const std::uint32_t> group_sizes,
    const std::function<GroupSpec(std::uint32_t)>& materialize,
    const Placement& placement, std::size_t n_events, std::uint64_t seed);

std::vector<ChurnEvent> generate_churn(std::span<const GroupSpec> groups,
                                       const Placement& placement,
                                       std::size_t n_events,
                                       std::uint64_t seed);

std::vector<ChurnEvent> generate_churn(const GroupCatalog& catalog,
                                       std::size_t n_events,
                                       std::uint64_t seed);

// Applies an event to a member list. Throws InvalidArgument when the event
// is not valid for the current membership.
void apply_membership(std::vector<Member>& members, const ChurnEvent& ev);

}  // namespace srmc

#endif  // SRMC_WORKLOAD_H_
