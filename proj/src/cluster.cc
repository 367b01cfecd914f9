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

#include "srmc/cluster.h"

#include <algorithm>

#include "srmc/error.h"
#include "srmc/min_k_union.h"

namespace srmc {

void EncodingConfig::validate() const {
  if (leaf.k_max < 1 || spine.k_max < 1) {
    throw InvalidArgument("K_max must be >= 1");
  }
}

std::size_t LayerEncoding::num_switches() const {
  std::size_t n = s_rules.size() + default_ids.size();
  for (const auto& p : p_rules) n += p.ids.size();
  return n;
}

LayerClusters cluster_p_rules(std::span<const SwitchBitmap> inputs,
                              const LayerLimits& limits, std::uint32_t r,
                              bool inject_union_off_by_one) {
  LayerClusters out;
  std::vector<std::size_t> unassigned(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) unassigned[i] = i;
  std::size_t k_cap = limits.k_max;
  while (!unassigned.empty() && out.p_rules.size() < limits.h_max) {
    const std::size_t k = std::min(k_cap, unassigned.size());
    const auto chosen = approx_min_k_union(k, inputs, unassigned);
    PortBitmap u = inputs[chosen.front()].bitmap;
    const std::size_t end =
        inject_union_off_by_one && chosen.size() > 1 ? chosen.size() - 1
                                                     : chosen.size();
    for (std::size_t i = 1; i < end; ++i) u |= inputs[chosen[i]].bitmap;
    std::size_t sum = 0;
    bool ok = true;
    for (std::size_t i : chosen) {
      const std::size_t d = inputs[i].bitmap.hamming(u);
      if (d > r) ok = false;
      sum += d;
    }
    if (ok && sum <= r) {
      SharedRule rule;
      rule.bitmap = u;
      for (std::size_t i : chosen) rule.ids.push_back(inputs[i].id);
      out.p_rules.push_back(std::move(rule));
      std::vector<std::size_t> rest;
      rest.reserve(unassigned.size() - chosen.size());
      std::set_difference(unassigned.begin(), unassigned.end(), chosen.begin(),
                          chosen.end(), std::back_inserter(rest));
      unassigned.swap(rest);
    } else {
      k_cap = k - 1;
    }
  }
  for (std::size_t i : unassigned) out.leftovers.push_back(inputs[i]);
  return out;
}

SRuleLedger::SRuleLedger(std::uint32_t num_leaves, std::uint32_t num_pods,
                         std::uint32_t f_max)
    : f_max_(f_max), leaf_(num_leaves, 0), spine_(num_pods, 0) {}

std::vector<std::uint32_t>& SRuleLedger::table(Layer layer) {
  if (layer == Layer::kLeaf) return leaf_;
  if (layer == Layer::kSpine) return spine_;
  throw InvalidArgument("s-rules live on leaf and spine switches only");
}

const std::vector<std::uint32_t>& SRuleLedger::table(Layer layer) const {
  return const_cast<SRuleLedger*>(this)->table(layer);
}

bool SRuleLedger::try_reserve(Layer layer, std::uint32_t id) {
  auto& t = table(layer);
  if (t.at(id) >= f_max_) return false;
  ++t[id];
  return true;
}

void SRuleLedger::release(Layer layer, std::uint32_t id) {
  auto& t = table(layer);
  if (t.at(id) == 0) {
    throw InvariantViolation("s-rule release on empty switch");
  }
  --t[id];
}

std::uint32_t SRuleLedger::occupancy(Layer layer, std::uint32_t id) const {
  return table(layer).at(id);
}

LayerEncoding assign_overflow(LayerClusters&& clusters, Layer layer,
                              SRuleLedger& ledger) {
  LayerEncoding enc;
  enc.p_rules = std::move(clusters.p_rules);
  for (auto& sb : clusters.leftovers) {
    if (ledger.try_reserve(layer, sb.id)) {
      enc.s_rules.push_back(std::move(sb));
    } else {
      if (!enc.default_bitmap) {
        enc.default_bitmap = sb.bitmap;
      } else {
        *enc.default_bitmap |= sb.bitmap;
      }
      enc.default_ids.push_back(sb.id);
    }
  }
  return enc;
}

LayerEncoding cluster_layer(std::span<const SwitchBitmap> inputs,
                            const LayerLimits& limits, std::uint32_t r,
                            Layer layer, SRuleLedger& ledger) {
  return assign_overflow(cluster_p_rules(inputs, limits, r), layer, ledger);
}

}  // namespace srmc
