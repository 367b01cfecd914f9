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

#include "srmc/experiment.h"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <set>
#include <sstream>

#include "srmc/dataplane.h"
#include "srmc/encode.h"
#include "srmc/error.h"
#include "srmc/failover.h"
#include "srmc/oracle.h"
#include "srmc/rng.h"
#include "srmc/wire.h"

namespace srmc {
namespace {

using Clock = std::chrono::steady_clock;

double micros(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::micro>(b - a).count();
}

// Runs body(i) for i in [begin, end), in parallel when asked. Exceptions
// are caught per index and handed to on_error in index order.
template <typename Body>
void for_range(ExecMode mode, std::size_t begin, std::size_t end, Body body,
               std::vector<std::string>* errors) {
  const auto n = static_cast<std::ptrdiff_t>(end - begin);
  if (errors) errors->assign(end - begin, {});
  auto run = [&](std::ptrdiff_t k) {
    try {
      body(begin + static_cast<std::size_t>(k));
    } catch (const std::exception& e) {
      if (errors) (*errors)[static_cast<std::size_t>(k)] = e.what();
    }
  };
  if (mode == ExecMode::kParallel) {
#pragma omp parallel for schedule(dynamic, 16) num_threads(worker_count())
    for (std::ptrdiff_t k = 0; k < n; ++k) run(k);
  } else {
    for (std::ptrdiff_t k = 0; k < n; ++k) run(k);
  }
}

HostId pick_sender(const MulticastTree& tree, std::uint64_t seed) {
  return tree.senders[mix_seed(seed, tree.group, 0x5e4d) %
                      tree.senders.size()];
}

struct GroupRow {
  bool covered = false;
  bool leaf_default = false;
  bool spine_default = false;
  bool has_srules = false;
  bool simulated = false;
  std::uint64_t packets = 0;
  std::uint64_t header_bytes = 0;
  std::uint64_t ideal = 0;
  std::uint64_t unicast = 0;
  std::uint64_t overlay = 0;
  std::uint64_t spurious = 0;
  std::uint64_t max_header = 0;
  std::string violation;
};

std::string describe(std::uint32_t g, HostId s, const std::string& what) {
  return "group " + std::to_string(g) + " sender H" + std::to_string(s) +
         ": " + what;
}

// Checks one simulated packet; returns an empty string when clean.
std::string check_packet(const DeliveryReport& rep, const EncodingConfig& cfg,
                         std::size_t header_size) {
  if (!rep.missing.empty()) {
    return "receiver H" + std::to_string(rep.missing.front()) + " missed";
  }
  if (!rep.duplicates.empty()) {
    return "host H" + std::to_string(rep.duplicates.front()) +
           " received duplicates";
  }
  if (rep.revisits) return "packet looped";
  if (cfg.r == 0 && cfg.f_max == kUnbounded && !rep.spurious.empty()) {
    return "spurious delivery to H" + std::to_string(rep.spurious.front()) +
           " with R=0";
  }
  if (header_size > cfg.header_budget_bytes) {
    return "header of " + std::to_string(header_size) +
           " bytes exceeds the budget";
  }
  return {};
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << v;
  return os.str();
}

std::string provenance(std::uint32_t p, SizeDistribution d, std::uint32_t r,
                       std::uint64_t seed) {
  return std::to_string(p) + "," + distribution_name(d) + "," +
         std::to_string(r) + "," + std::to_string(seed);
}

const char* kProvenanceHeader = "placement,distribution,r,seed";

}  // namespace

int worker_count() {
  if (const char* env = std::getenv("SRMC_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
}

Workload::Workload(const ScenarioConfig& cfg, std::uint32_t p,
                   SizeDistribution d)
    : topo(cfg.topology),
      placement_p(p),
      distribution(d),
      group_seed(cfg.group_seed(p, d)) {
  TenantSizeParams tp;
  tp.min = cfg.tenant_min;
  tp.theta = cfg.tenant_scale;
  tp.max = cfg.tenant_max;
  const auto sizes = sample_tenant_sizes(cfg.tenants, cfg.tenant_seed(), tp);
  PlacementConfig pc;
  pc.max_per_leaf = p;
  pc.seed = cfg.placement_seed(p);
  pc.host_capacity = cfg.host_capacity;
  placement = place_tenants(topo, sizes, pc);
  catalog = std::make_unique<GroupCatalog>(placement, cfg.groups, d,
                                           group_seed);
}

OccupancyStats occupancy_stats(std::vector<std::uint64_t> v) {
  OccupancyStats s;
  s.switches = v.size();
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  for (auto x : v) s.total += x;
  s.mean = static_cast<double>(s.total) / static_cast<double>(v.size());
  // Nearest rank.
  const auto rank = static_cast<std::size_t>(
      std::ceil(0.95 * static_cast<double>(v.size())));
  s.p95 = v[std::max<std::size_t>(rank, 1) - 1];
  s.max = v.back();
  return s;
}

double InstallResult::overhead(std::uint64_t payload) const {
  const double ideal = static_cast<double>(ideal_packets * payload);
  if (ideal == 0) return 0;
  const double total = static_cast<double>(packets * payload + header_bytes);
  return total / ideal - 1.0;
}

double InstallResult::unicast_overhead() const {
  return ideal_packets ? static_cast<double>(unicast_packets) /
                                 static_cast<double>(ideal_packets) -
                             1.0
                       : 0;
}

double InstallResult::overlay_overhead() const {
  return ideal_packets ? static_cast<double>(overlay_packets) /
                                 static_cast<double>(ideal_packets) -
                             1.0
                       : 0;
}

InstallResult run_install(const Workload& w, const EncodingConfig& cfg,
                          const InstallOptions& opt, InstallState* state) {
  cfg.validate();
  const Topology& topo = w.topo;
  const WireLayout layout = WireLayout::For(topo, cfg);
  const std::uint32_t n = w.num_groups();
  SRuleLedger ledger(topo, cfg.f_max);
  if (opt.keep_state && state) state->holdings.assign(n, {});

  InstallResult res;
  res.placement_p = w.placement_p;
  res.distribution = w.distribution;
  res.r = cfg.r;
  res.seed = w.group_seed;
  res.groups = n;

  std::vector<float> latency(n, 0.0f);
  struct Slot {
    MulticastTree tree;
    GroupClusters clusters;
    GroupEncoding enc;
  };
  const std::size_t chunk = std::max<std::uint32_t>(opt.chunk, 1);
  std::vector<Slot> slots;
  std::vector<GroupRow> rows;
  std::vector<std::string> errors;

  auto note = [&](std::uint32_t g, const std::string& what) {
    if (res.violations++ == 0) {
      res.first_violation = "group " + std::to_string(g) + ": " + what;
    }
  };

  for (std::size_t base = 0; base < n; base += chunk) {
    const std::size_t end = std::min<std::size_t>(base + chunk, n);
    const std::size_t m = end - base;
    slots.assign(m, {});
    rows.assign(m, {});

    for_range(
        opt.mode, base, end,
        [&](std::size_t g) {
          Slot& s = slots[g - base];
          const GroupSpec spec = w.catalog->materialize(
              static_cast<std::uint32_t>(g));
          const auto t0 = Clock::now();
          s.tree = compute_tree(topo, w.placement, spec);
          s.clusters = cluster_group(s.tree, cfg);
          latency[g] = static_cast<float>(micros(t0, Clock::now()));
        },
        &errors);
    for (std::size_t i = 0; i < m; ++i) {
      if (!errors[i].empty()) {
        note(static_cast<std::uint32_t>(base + i), errors[i]);
      }
    }

    // Reservations follow group id order.
    for (std::size_t i = 0; i < m; ++i) {
      Slot& s = slots[i];
      const auto t0 = Clock::now();
      s.enc = resolve_overflow(std::move(s.clusters), ledger);
      latency[base + i] += static_cast<float>(micros(t0, Clock::now()));
      if (opt.keep_state && state) state->holdings[base + i] =
          holdings_of(s.enc);
    }

    for_range(
        opt.mode, base, end,
        [&](std::size_t g) {
          const Slot& s = slots[g - base];
          GroupRow& row = rows[g - base];
          row.covered = s.enc.covered();
          row.leaf_default = s.enc.leaf.default_bitmap.has_value();
          row.spine_default = s.enc.spine.default_bitmap.has_value();
          row.has_srules =
              !s.enc.leaf.s_rules.empty() || !s.enc.spine.s_rules.empty();
          if (!opt.simulate || s.tree.senders.empty() ||
              !s.tree.has_receivers()) {
            return;
          }
          const HostId src = pick_sender(s.tree, w.group_seed);
          const PacketHeader h = build_header(topo, s.tree, s.enc, src);
          const auto bytes = encode_header(h, layout);
          GroupSRules rules(topo, s.enc, s.tree.group);
          ForwardContext ctx{&topo, &layout, &rules, nullptr, s.tree.group,
                             src};
          const DeliveryReport rep =
              simulate_packet(ctx, bytes, s.tree.receivers);
          row.simulated = true;
          row.packets = rep.link_packets;
          row.header_bytes = rep.header_bytes;
          row.spurious = rep.spurious.size();
          row.max_header = bytes.size();
          row.ideal = baseline_packets(topo, s.tree, src, Baseline::kIdeal);
          row.unicast =
              baseline_packets(topo, s.tree, src, Baseline::kUnicast);
          row.overlay =
              baseline_packets(topo, s.tree, src, Baseline::kOverlay);
          if (auto v = check_packet(rep, cfg, bytes.size()); !v.empty()) {
            row.violation = describe(s.tree.group, src, v);
          }
        },
        &errors);

    for (std::size_t i = 0; i < m; ++i) {
      const GroupRow& row = rows[i];
      if (!errors[i].empty()) {
        note(static_cast<std::uint32_t>(base + i), errors[i]);
      }
      if (!row.violation.empty() && res.violations++ == 0) {
        res.first_violation = row.violation;
      }
      res.covered += row.covered;
      res.leaf_default_groups += row.leaf_default;
      res.spine_default_groups += row.spine_default;
      res.s_rule_groups += row.has_srules;
      if (row.simulated) {
        ++res.groups_simulated;
        res.packets += row.packets;
        res.header_bytes += row.header_bytes;
        res.ideal_packets += row.ideal;
        res.unicast_packets += row.unicast;
        res.overlay_packets += row.overlay;
        res.spurious += row.spurious;
        res.max_header_bytes = std::max(res.max_header_bytes, row.max_header);
      }
    }
  }

  const auto leaf_occ = ledger.leaf_occupancy();
  res.leaf_srules = occupancy_stats({leaf_occ.begin(), leaf_occ.end()});
  std::vector<std::uint64_t> spine_occ;
  spine_occ.reserve(topo.num_spines());
  for (std::uint32_t p = 0; p < topo.num_pods(); ++p) {
    for (std::uint32_t j = 0; j < topo.spec().spines_per_pod; ++j) {
      spine_occ.push_back(ledger.occupancy(Layer::kSpine, p));
    }
  }
  res.spine_srules = occupancy_stats(std::move(spine_occ));

  if (n > 0) {
    std::vector<float> sorted(latency);
    std::sort(sorted.begin(), sorted.end());
    double sum = 0, sq = 0;
    for (float x : sorted) {
      sum += x;
      sq += static_cast<double>(x) * x;
    }
    LatencyStats& l = res.latency;
    l.samples = n;
    l.mean_us = sum / n;
    l.stddev_us = std::sqrt(std::max(0.0, sq / n - l.mean_us * l.mean_us));
    auto pct = [&](double q) {
      const auto rank =
          static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
      return static_cast<double>(sorted[std::max<std::size_t>(rank, 1) - 1]);
    };
    l.p50_us = pct(0.50);
    l.p95_us = pct(0.95);
    l.p99_us = pct(0.99);
    l.max_us = sorted.back();
  }
  if (state) state->ledger = std::move(ledger);
  return res;
}

ChurnResult run_churn(const ScenarioConfig& cfg, ExecMode mode) {
  const ChurnSchedule& cs = cfg.churn;
  Workload w(cfg, cs.placement, cs.distribution);
  const EncodingConfig ec = cfg.encoding(w.topo, cs.r);

  InstallOptions opt;
  opt.mode = mode;
  opt.simulate = false;
  opt.keep_state = true;
  InstallState st;
  run_install(w, ec, opt, &st);

  Controller ctl(w.topo, w.placement, ec);
  const GroupCatalog* catalog = w.catalog.get();
  ctl.adopt([catalog](std::uint32_t g) { return catalog->materialize(g); },
            std::move(st.holdings), std::move(st.ledger));
  ctl.set_cache_limit(1u << 16);

  const auto events = generate_churn(*w.catalog, cs.events, cs.seed);
  UpdateLog log(w.topo);
  ChurnResult res;
  res.placement_p = cs.placement;
  res.distribution = cs.distribution;
  res.r = cs.r;
  res.seed = cs.seed;
  for (const ChurnEvent& ev : events) {
    const std::size_t before = ctl.group(ev.group).spec.members.size();
    const UpdateDiff d = ctl.apply_event(ev);
    log.record(d, ev.kind, before);
    res.total_hypervisor_updates += d.hypervisors.size();
    res.total_leaf_updates += d.leaves.size();
    res.total_spine_updates += d.spines.size();

    const GroupState& gs = ctl.group(ev.group);
    if (gs.tree.senders.empty() || !gs.tree.has_receivers()) continue;
    const HostId src = pick_sender(gs.tree, cs.seed);
    const DeliveryReport rep = ctl.simulate(ev.group, src);
    if (!rep.missing.empty() || !rep.duplicates.empty()) {
      if (res.violations++ == 0) {
        res.first_violation =
            describe(ev.group, src, "post-event delivery incomplete");
      }
    }
  }
  res.events = log.events();
  res.join = log.normalized(ChurnKind::kJoin);
  res.leave = log.normalized(ChurnKind::kLeave);
  res.all = log.normalized_all();
  res.rates = update_rate_report(log, cs.events_per_second);
  return res;
}

TraversalCounts count_traversals(const Workload& w, ExecMode mode) {
  const Topology& topo = w.topo;
  const std::uint32_t n = w.num_groups();
  TraversalCounts out;
  out.spines.assign(topo.num_spines(), 0);
  out.cores.assign(topo.num_cores(), 0);
  const std::size_t chunk = 8192;
  std::vector<std::vector<std::uint8_t>> sp, co;
  for (std::size_t base = 0; base < n; base += chunk) {
    const std::size_t end = std::min<std::size_t>(base + chunk, n);
    sp.assign(end - base, {});
    co.assign(end - base, {});
    for_range(
        mode, base, end,
        [&](std::size_t g) {
          auto& s = sp[g - base];
          auto& c = co[g - base];
          s.assign(topo.num_spines(), 0);
          c.assign(topo.num_cores(), 0);
          const MulticastTree tree = compute_tree(
              topo, w.placement,
              w.catalog->materialize(static_cast<std::uint32_t>(g)));
          if (tree.has_receivers()) mark_traversed(topo, tree, s, c);
        },
        nullptr);
    for (std::size_t i = 0; i < end - base; ++i) {
      for (std::size_t k = 0; k < sp[i].size(); ++k) out.spines[k] += sp[i][k];
      for (std::size_t k = 0; k < co[i].size(); ++k) out.cores[k] += co[i][k];
    }
  }
  return out;
}

std::vector<FailureResult> run_failures(const ScenarioConfig& cfg,
                                        ExecMode mode) {
  const FailureSchedule& fs = cfg.failure;
  Workload w(cfg, fs.placement, fs.distribution);
  const Topology& topo = w.topo;
  const EncodingConfig ec = cfg.encoding(topo, fs.r);
  const WireLayout layout = WireLayout::For(topo, ec);

  InstallOptions opt;
  opt.mode = mode;
  opt.simulate = false;
  opt.keep_state = true;
  InstallState st;
  run_install(w, ec, opt, &st);

  std::vector<SwitchRef> targets = fs.switches;
  if (targets.empty()) {
    const TraversalCounts tc = count_traversals(w, mode);
    const auto s = std::max_element(tc.spines.begin(), tc.spines.end());
    const auto c = std::max_element(tc.cores.begin(), tc.cores.end());
    targets.push_back(
        {Layer::kSpine,
         static_cast<std::uint32_t>(std::distance(tc.spines.begin(), s))});
    targets.push_back(
        {Layer::kCore,
         static_cast<std::uint32_t>(std::distance(tc.cores.begin(), c))});
  }

  const std::uint32_t n = w.num_groups();
  std::vector<FailureResult> out;
  for (const SwitchRef& sw : targets) {
    FailureSet failures(topo);
    failures.fail(sw);
    FailureResult fr;
    fr.placement_p = fs.placement;
    fr.distribution = fs.distribution;
    fr.r = fs.r;
    fr.seed = w.group_seed;
    FailureReport& rep = fr.report;
    rep.failed = sw;
    rep.groups_total = n;
    std::vector<std::uint64_t> per_hv(topo.num_hosts(), 0);
    const std::size_t chunk = 8192;
    std::vector<GroupFailureOutcome> outcomes;
    std::vector<std::string> errors;
    for (std::size_t base = 0; base < n; base += chunk) {
      const std::size_t end = std::min<std::size_t>(base + chunk, n);
      outcomes.assign(end - base, {});
      for_range(
          mode, base, end,
          [&](std::size_t g) {
            const MulticastTree tree = compute_tree(
                topo, w.placement,
                w.catalog->materialize(static_cast<std::uint32_t>(g)));
            if (!tree.has_receivers()) return;
            const GroupEncoding enc =
                rebuild_encoding(cluster_group(tree, ec), st.holdings[g]);
            outcomes[g - base] = analyze_group_failure(
                topo, layout, tree, enc, failures, sw, fs.max_senders);
          },
          &errors);
      for (std::size_t i = 0; i < end - base; ++i) {
        if (!errors[i].empty()) {
          ++rep.delivery_failures;
          continue;
        }
        const GroupFailureOutcome& o = outcomes[i];
        if (!o.impacted) continue;
        ++rep.impacted_groups;
        rep.partitioned_groups += o.partitioned;
        rep.unreachable_receivers += o.unreachable_receivers;
        rep.delivery_failures += o.delivery_failure;
        rep.duplicate_deliveries += o.duplicates;
        rep.senders_simulated += o.senders_simulated;
        rep.senders_rerouted += o.rerouted.size();
        for (HostId h : o.rerouted) ++per_hv[h];
      }
    }
    std::uint64_t touched = 0, sum = 0;
    for (HostId h = 0; h < per_hv.size(); ++h) {
      if (per_hv[h] == 0) continue;
      rep.diff.hypervisors.push_back(h);
      ++touched;
      sum += per_hv[h];
      rep.max_hypervisor_updates =
          std::max(rep.max_hypervisor_updates, per_hv[h]);
    }
    if (touched) {
      rep.mean_hypervisor_updates =
          static_cast<double>(sum) / static_cast<double>(touched);
    }
    out.push_back(std::move(fr));
  }
  return out;
}

namespace {

// Returns a description of the first broken property of one layer.
std::string check_layer(const std::vector<SwitchBitmap>& inputs,
                        const LayerEncoding& enc, const LayerLimits& lim,
                        std::uint32_t r, std::uint32_t f_max,
                        const char* name) {
  const std::string layer(name);
  if (enc.p_rules.size() > lim.h_max) return layer + " p-rules over H_max";
  if (f_max == 0 && !enc.s_rules.empty()) {
    return layer + " s-rules with F_max=0";
  }
  std::set<std::uint32_t> seen;
  auto input_of = [&](std::uint32_t id) -> const PortBitmap* {
    for (const auto& sb : inputs) {
      if (sb.id == id) return &sb.bitmap;
    }
    return nullptr;
  };
  for (const SharedRule& rule : enc.p_rules) {
    if (rule.ids.empty() || rule.ids.size() > lim.k_max) {
      return layer + " p-rule size outside [1, K_max]";
    }
    std::uint64_t spurious = 0;
    PortBitmap uni;
    for (std::uint32_t id : rule.ids) {
      const PortBitmap* b = input_of(id);
      if (!b) return layer + " p-rule names switch " + std::to_string(id) +
                     " outside the tree";
      if (!seen.insert(id).second) {
        return layer + " switch " + std::to_string(id) + " encoded twice";
      }
      if (!b->is_subset_of(rule.bitmap)) {
        return layer + " p-rule bitmap drops ports of switch " +
               std::to_string(id);
      }
      spurious += b->hamming(rule.bitmap);
      uni = uni.width() ? (uni | *b) : *b;
    }
    if (spurious > r) {
      return layer + " p-rule spurious bits " + std::to_string(spurious) +
             " exceed R=" + std::to_string(r);
    }
    if (!(uni == rule.bitmap)) return layer + " p-rule bitmap is not the union";
  }
  for (const SwitchBitmap& s : enc.s_rules) {
    const PortBitmap* b = input_of(s.id);
    if (!b || !(*b == s.bitmap)) return layer + " s-rule is not exact";
    if (!seen.insert(s.id).second) return layer + " switch encoded twice";
  }
  if (enc.default_bitmap) {
    PortBitmap uni;
    for (std::uint32_t id : enc.default_ids) {
      const PortBitmap* b = input_of(id);
      if (!b) return layer + " default names a switch outside the tree";
      if (!seen.insert(id).second) return layer + " switch encoded twice";
      uni = uni.width() ? (uni | *b) : *b;
    }
    if (!(uni == *enc.default_bitmap)) {
      return layer + " default bitmap is not the union";
    }
  }
  if (seen.size() != inputs.size()) return layer + " switch left unencoded";
  return {};
}

}  // namespace

VerifyResult run_verify(const ScenarioConfig& cfg,
                        void (*cfg_hook)(EncodingConfig&)) {
  const TopologySpec& ts = cfg.topology;
  if (ts.num_pods > 2 || ts.leaves_per_pod > 4 || ts.hosts_per_leaf > 4) {
    throw ConfigError(
        "verify needs at most 2 pods, 4 leaves per pod and 4 hosts per leaf",
        0);
  }
  VerifyResult vr;
  auto fail = [&](const std::string& where, const std::string& what) {
    if (!vr.ok) return;
    vr.ok = false;
    vr.message = where + ": " + what;
  };

  for (std::uint32_t p : cfg.placements) {
    for (SizeDistribution d : cfg.distributions) {
      Workload w(cfg, p, d);
      const Topology& topo = w.topo;
      for (std::uint32_t r : cfg.r_values) {
        EncodingConfig ec = cfg.encoding(topo, r);
        if (cfg_hook) cfg_hook(ec);
        const WireLayout layout = WireLayout::For(topo, ec);
        SRuleLedger ledger(topo, ec.f_max);
        ++vr.cells;
        const std::string cell =
            "reproduce with placement=" + std::to_string(p) +
            " distribution=" + distribution_name(d) +
            " r=" + std::to_string(r) + " seed=" + std::to_string(cfg.seed);
        for (std::uint32_t g = 0; g < w.num_groups() && vr.ok; ++g) {
          const GroupSpec spec = w.catalog->materialize(g);
          const MulticastTree tree = compute_tree(topo, w.placement, spec);
          const GroupEncoding enc = encode_layers(tree, ec, ledger);
          ++vr.groups_checked;
          const std::string where = cell + " group=" + std::to_string(g);
          if (auto m = check_layer(tree.leaf_layer, enc.leaf, ec.leaf, r,
                                   ec.f_max, "leaf");
              !m.empty()) {
            fail(where, m);
            break;
          }
          if (auto m = check_layer(tree.spine_layer, enc.spine, ec.spine, r,
                                   ec.f_max, "spine");
              !m.empty()) {
            fail(where, m);
            break;
          }
          GroupSRules rules(topo, enc, g);
          for (HostId s : tree.senders) {
            const std::string at = where + " sender=H" + std::to_string(s);
            const PacketHeader h = build_header(topo, tree, enc, s);
            const auto bytes = encode_header(h, layout);
            ++vr.headers_round_tripped;
            if (!(decode_header(bytes, layout) == h)) {
              fail(at, "header does not round-trip");
              break;
            }
            if (bytes.size() > ec.header_budget_bytes) {
              fail(at, "header exceeds the budget");
              break;
            }
            std::vector<std::uint8_t> cur = bytes;
            for (std::size_t k = 0; k < kNumSections && !cur.empty(); ++k) {
              const auto sec = static_cast<Section>(k);
              if (!(present_sections(cur) & (1u << k))) continue;
              auto next = pop_layers(cur, layout, sec);
              if (next.size() >= cur.size()) {
                fail(at, "pop did not shrink the header");
                break;
              }
              cur = std::move(next);
            }
            if (!tree.has_receivers()) continue;
            ForwardContext ctx{&topo, &layout, &rules, nullptr, g, s};
            const DeliveryReport rep =
                simulate_packet(ctx, bytes, tree.receivers);
            ++vr.packets_checked;
            if (auto v = check_packet(rep, ec, bytes.size()); !v.empty()) {
              fail(at, v);
              break;
            }
            if (rep.delivered != reference_delivery(topo, tree, enc, s)) {
              fail(at, "delivery differs from the reference set model");
              break;
            }
          }
          if (!vr.ok) break;
          if (!cfg.failure.enabled) continue;
          std::vector<SwitchRef> targets = cfg.failure.switches;
          if (targets.empty()) {
            for (std::uint32_t i = 0; i < topo.num_spines(); ++i) {
              targets.push_back({Layer::kSpine, i});
            }
            for (std::uint32_t i = 0; i < topo.num_cores(); ++i) {
              targets.push_back({Layer::kCore, i});
            }
          }
          for (const SwitchRef& sw : targets) {
            FailureSet fs(topo);
            fs.fail(sw);
            const GroupFailureOutcome o = analyze_group_failure(
                topo, layout, tree, enc, fs, sw, kUnbounded);
            ++vr.failures_checked;
            vr.partitions += o.partitioned;
            if (o.delivery_failure) {
              fail(where + " failed=" + switch_name(sw),
                   "post-failover delivery missed a reachable receiver");
              break;
            }
          }
        }
        for (std::uint32_t l = 0; l < topo.num_leaves(); ++l) {
          if (ledger.occupancy(Layer::kLeaf, l) > ec.f_max) {
            fail(cell, "leaf occupancy exceeds F_max");
          }
        }
      }
    }
  }
  return vr;
}

void write_coverage_csv(std::ostream& os,
                        const std::vector<InstallResult>& rows) {
  os << kCsvSchema << " coverage\n"
     << kProvenanceHeader
     << ",groups,covered,coverage,leaf_default_groups,spine_default_groups,"
        "s_rule_groups,violations\n";
  for (const auto& r : rows) {
    os << provenance(r.placement_p, r.distribution, r.r, r.seed) << ","
       << r.groups << "," << r.covered << "," << fmt(r.coverage()) << ","
       << r.leaf_default_groups << "," << r.spine_default_groups << ","
       << r.s_rule_groups << "," << r.violations << "\n";
  }
}

void write_srules_csv(std::ostream& os,
                      const std::vector<InstallResult>& rows) {
  os << kCsvSchema << " srules\n"
     << kProvenanceHeader << ",layer,switches,total,mean,p95,max\n";
  for (const auto& r : rows) {
    const std::string prov =
        provenance(r.placement_p, r.distribution, r.r, r.seed);
    auto line = [&](const char* layer, const OccupancyStats& s) {
      os << prov << "," << layer << "," << s.switches << "," << s.total << ","
         << fmt(s.mean, 4) << "," << s.p95 << "," << s.max << "\n";
    };
    line("leaf", r.leaf_srules);
    line("spine", r.spine_srules);
  }
}

void write_overhead_csv(std::ostream& os,
                        const std::vector<InstallResult>& rows,
                        const std::vector<std::uint32_t>& payloads) {
  os << kCsvSchema << " overhead\n"
     << kProvenanceHeader
     << ",payload,groups_simulated,packets,header_bytes,ideal_packets,"
        "unicast_packets,overlay_packets,spurious,max_header_bytes,"
        "overhead,unicast_overhead,overlay_overhead\n";
  for (const auto& r : rows) {
    for (std::uint32_t payload : payloads) {
      os << provenance(r.placement_p, r.distribution, r.r, r.seed) << ","
         << payload << "," << r.groups_simulated << "," << r.packets << ","
         << r.header_bytes << "," << r.ideal_packets << ","
         << r.unicast_packets << "," << r.overlay_packets << ","
         << r.spurious << "," << r.max_header_bytes << ","
         << fmt(r.overhead(payload)) << "," << fmt(r.unicast_overhead())
         << "," << fmt(r.overlay_overhead()) << "\n";
    }
  }
}

void write_latency_csv(std::ostream& os,
                       const std::vector<InstallResult>& rows) {
  os << kCsvSchema << " latency\n"
     << kProvenanceHeader
     << ",workers,samples,mean_us,stddev_us,p50_us,p95_us,p99_us,max_us\n";
  for (const auto& r : rows) {
    const LatencyStats& l = r.latency;
    os << provenance(r.placement_p, r.distribution, r.r, r.seed) << ","
       << worker_count() << "," << l.samples << "," << fmt(l.mean_us, 3)
       << "," << fmt(l.stddev_us, 3) << "," << fmt(l.p50_us, 3) << ","
       << fmt(l.p95_us, 3) << "," << fmt(l.p99_us, 3) << ","
       << fmt(l.max_us, 3) << "\n";
  }
}

void write_updates_csv(std::ostream& os, const std::vector<ChurnResult>& rows) {
  os << kCsvSchema << " updates\n"
     << kProvenanceHeader
     << ",kind,events,hypervisor_per_member,leaf_per_member,"
        "spine_per_member,events_per_second,hypervisor_rate_mean,"
        "hypervisor_rate_max,leaf_rate_mean,leaf_rate_max,spine_rate_mean,"
        "spine_rate_max,violations\n";
  for (const auto& r : rows) {
    const std::string prov =
        provenance(r.placement_p, r.distribution, r.r, r.seed);
    auto line = [&](const char* kind, const UpdateLog::Normalized& n) {
      const UpdateRateReport& q = r.rates;
      os << prov << "," << kind << "," << n.events << ","
         << fmt(n.hypervisor) << "," << fmt(n.leaf) << "," << fmt(n.spine)
         << "," << fmt(q.events_per_second, 1) << ","
         << fmt(q.hypervisor.mean, 3) << "," << fmt(q.hypervisor.max, 3)
         << "," << fmt(q.leaf.mean, 3) << "," << fmt(q.leaf.max, 3) << ","
         << fmt(q.spine.mean, 3) << "," << fmt(q.spine.max, 3) << ","
         << r.violations << "\n";
    };
    line("join", r.join);
    line("leave", r.leave);
    line("all", r.all);
  }
}

void write_failures_csv(std::ostream& os,
                        const std::vector<FailureResult>& rows) {
  os << kCsvSchema << " failures\n"
     << kProvenanceHeader
     << ",failed,groups,impacted,impacted_fraction,partitioned,"
        "unreachable_receivers,senders_rerouted,senders_simulated,"
        "delivery_failures,hypervisors_updated,hypervisor_updates_mean,"
        "hypervisor_updates_max\n";
  for (const auto& r : rows) {
    const FailureReport& f = r.report;
    const double frac = f.groups_total
                            ? static_cast<double>(f.impacted_groups) /
                                  static_cast<double>(f.groups_total)
                            : 0;
    os << provenance(r.placement_p, r.distribution, r.r, r.seed) << ","
       << switch_name(f.failed) << "," << f.groups_total << ","
       << f.impacted_groups << "," << fmt(frac) << "," << f.partitioned_groups
       << "," << f.unreachable_receivers << "," << f.senders_rerouted << ","
       << f.senders_simulated << "," << f.delivery_failures << ","
       << f.diff.hypervisors.size() << "," << fmt(f.mean_hypervisor_updates, 3)
       << "," << f.max_hypervisor_updates << "\n";
  }
}

}  // namespace srmc
