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

#include "srmc/controller.h"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "srmc/error.h"
#include "srmc/rng.h"

namespace srmc {

namespace {

template <typename T>
void merge_sorted(std::vector<T>& into, const std::vector<T>& from) {
  std::vector<T> out;
  out.reserve(into.size() + from.size());
  std::set_union(into.begin(), into.end(), from.begin(), from.end(),
                 std::back_inserter(out));
  into.swap(out);
}

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  std::uint64_t s = h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
  return splitmix64(s);
}

std::uint64_t hash_bitmap(std::uint64_t h, const PortBitmap& b) {
  h = hash_combine(h, b.width());
  for (std::size_t w = 0; w < b.num_words(); ++w) h = hash_combine(h, b.word(w));
  return h;
}

std::uint64_t hash_rule(std::uint64_t h, const PRule& r) {
  h = hash_combine(h, static_cast<std::uint64_t>(r.kind) * 2 + r.multipath);
  h = hash_combine(h, r.ids.size());
  for (std::uint32_t id : r.ids) h = hash_combine(h, id);
  return hash_bitmap(h, r.bitmap);
}

std::uint64_t hash_layer(const LayerEncoding& l) {
  std::uint64_t h = 0x6c61796572ull;
  for (const SharedRule& s : l.p_rules) {
    h = hash_combine(h, s.ids.size());
    for (std::uint32_t id : s.ids) h = hash_combine(h, id);
    h = hash_bitmap(h, s.bitmap);
  }
  if (l.default_bitmap) h = hash_bitmap(hash_combine(h, 0xdef), *l.default_bitmap);
  return h;
}

// Receiver structure of a tree, indexed for per-sender header digests.
class SenderView {
 public:
  SenderView(const Topology& topo, const MulticastTree& tree,
             const GroupEncoding& enc)
      : topo_(topo),
        pods_(topo.num_pods()),
        spine_digest_(hash_layer(enc.spine)),
        leaf_digest_(hash_layer(enc.leaf)) {
    for (HostId r : tree.receivers) {
      const std::uint32_t l = topo.leaf_of_host(r);
      const std::uint32_t p = topo.pod_of_leaf(l);
      auto& lb = leaf_rx_[l];
      if (lb.width() == 0) lb = PortBitmap(topo.spec().hosts_per_leaf);
      lb.set(topo.host_port(r));
      auto& pb = pod_rx_[p];
      if (pb.width() == 0) pb = PortBitmap(topo.spec().leaves_per_pod);
      pb.set(topo.leaf_index_in_pod(l));
      pods_.set(p);
    }
    receivers_ = &tree.receivers;
  }

  std::uint64_t digest(HostId s, const UpstreamRules* up) const {
    const std::uint32_t sl = topo_.leaf_of_host(s);
    const std::uint32_t sp = topo_.pod_of_leaf(sl);
    PortBitmap local(topo_.spec().hosts_per_leaf);
    if (auto it = leaf_rx_.find(sl); it != leaf_rx_.end()) local = it->second;
    local.reset(topo_.host_port(s));
    PortBitmap pod_leaves(topo_.spec().leaves_per_pod);
    if (auto it = pod_rx_.find(sp); it != pod_rx_.end()) pod_leaves = it->second;
    pod_leaves.reset(topo_.leaf_index_in_pod(sl));
    PortBitmap other_pods = pods_;
    other_pods.reset(sp);
    const int apex = other_pods.any() ? 2 : pod_leaves.any() ? 1 : 0;

    std::uint64_t h = hash_combine(0x68647200ull, static_cast<std::uint64_t>(apex));
    if (up) {
      h = hash_rule(h, up->leaf);
      if (up->spine && apex > 0) h = hash_rule(h, *up->spine);
    } else {
      h = hash_bitmap(h, local);
      if (apex > 0) h = hash_bitmap(h, pod_leaves);
    }
    if (apex == 2) {
      h = hash_bitmap(h, other_pods);
      h = hash_combine(h, spine_digest_);
    }
    if (apex > 0) h = hash_combine(h, leaf_digest_);
    return h;
  }

 private:
  const Topology& topo_;
  std::map<std::uint32_t, PortBitmap> leaf_rx_;
  std::map<std::uint32_t, PortBitmap> pod_rx_;
  PortBitmap pods_;
  std::uint64_t spine_digest_;
  std::uint64_t leaf_digest_;
  const std::vector<HostId>* receivers_ = nullptr;
};

std::vector<std::pair<HostId, HypervisorEntry>> hypervisor_entries(
    const Topology& topo, const MulticastTree& tree, const GroupEncoding& enc,
    const FailureSet& failures) {
  SenderView view(topo, tree, enc);
  std::optional<FailoverPlanner> planner;
  if (failures.any()) planner.emplace(topo, tree, failures);
  std::vector<std::pair<HostId, HypervisorEntry>> out;
  out.reserve(tree.members.size());
  for (const HostMember& m : tree.members) {
    HypervisorEntry e;
    e.sends = can_send(m.role);
    e.receives = can_receive(m.role);
    if (e.sends) {
      if (planner && !planner->multipath_kept(m.host)) {
        const FailoverResult fr = planner->plan(m.host);
        e.header_digest = view.digest(m.host, &fr.rules);
      } else {
        e.header_digest = view.digest(m.host, nullptr);
      }
    }
    out.emplace_back(m.host, e);
  }
  return out;
}

// Up to n entries of v, evenly spaced, first included.
std::vector<HostId> spread(const std::vector<HostId>& v, std::uint32_t n) {
  if (v.size() <= n) return v;
  std::vector<HostId> out;
  out.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    out.push_back(v[static_cast<std::size_t>(
        static_cast<std::uint64_t>(i) * v.size() / n)]);
  }
  return out;
}

std::map<SwitchRef, PortBitmap> install_map(const Topology& topo,
                                            const GroupEncoding& enc) {
  std::map<SwitchRef, PortBitmap> m;
  for (auto& i : s_rule_installs(topo, enc)) m.emplace(i.sw, i.bitmap);
  return m;
}

void diff_installs(const std::map<SwitchRef, PortBitmap>& before,
                   const std::map<SwitchRef, PortBitmap>& after,
                   UpdateDiff& d) {
  auto note = [&](SwitchRef s) {
    (s.layer == Layer::kLeaf ? d.leaves : d.spines).push_back(s.index);
  };
  for (const auto& [sw, b] : before) {
    auto it = after.find(sw);
    if (it == after.end() || !(it->second == b)) note(sw);
  }
  for (const auto& [sw, b] : after) {
    if (!before.count(sw)) note(sw);
  }
  std::sort(d.leaves.begin(), d.leaves.end());
  std::sort(d.spines.begin(), d.spines.end());
}

void release_layer(SRuleLedger& ledger, Layer layer, const LayerEncoding& l) {
  for (const SwitchBitmap& s : l.s_rules) ledger.release(layer, s.id);
}

}  // namespace

std::uint64_t header_digest(const Topology& topo, const WireLayout&,
                            const MulticastTree& tree, const GroupEncoding& enc,
                            HostId source, const UpstreamRules* upstream) {
  return SenderView(topo, tree, enc).digest(source, upstream);
}

void UpdateDiff::merge(const UpdateDiff& o) {
  merge_sorted(hypervisors, o.hypervisors);
  merge_sorted(leaves, o.leaves);
  merge_sorted(spines, o.spines);
}

std::vector<SRuleHolding> holdings_of(const GroupEncoding& enc) {
  std::vector<SRuleHolding> out;
  for (const auto& s : enc.leaf.s_rules) out.push_back({Layer::kLeaf, s.id});
  for (const auto& s : enc.spine.s_rules) out.push_back({Layer::kSpine, s.id});
  return out;
}

GroupEncoding rebuild_encoding(GroupClusters&& clusters,
                               const std::vector<SRuleHolding>& holdings) {
  auto rebuild = [&](LayerClusters&& c, Layer layer) {
    LayerEncoding enc;
    enc.p_rules = std::move(c.p_rules);
    for (auto& sb : c.leftovers) {
      const bool held = std::find(holdings.begin(), holdings.end(),
                                  SRuleHolding{layer, sb.id}) != holdings.end();
      if (held) {
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
  };
  GroupEncoding out;
  out.leaf = rebuild(std::move(clusters.leaf), Layer::kLeaf);
  out.spine = rebuild(std::move(clusters.spine), Layer::kSpine);
  return out;
}

Controller::Controller(const Topology& topo, const Placement& placement,
                       const EncodingConfig& cfg)
    : topo_(&topo),
      placement_(&placement),
      cfg_(cfg),
      layout_(WireLayout::For(topo, cfg)),
      ledger_(topo, cfg.f_max),
      failures_(topo) {
  cfg_.validate();
}

bool Controller::has_group(std::uint32_t g) const {
  return live_.count(g) > 0 || compact_.count(g) > 0 ||
         (source_ && g < holdings_.size());
}

void Controller::set_cache_limit(std::size_t n) {
  cache_limit_ = std::max<std::size_t>(n, 1);
  evict(static_cast<std::uint32_t>(-1));
}

GroupState& Controller::expand(std::uint32_t g, GroupState&& st) {
  GroupState& out = live_.emplace(g, std::move(st)).first->second;
  order_.push_back(g);
  evict(g);
  return out;
}

void Controller::evict(std::uint32_t keep) {
  while (live_.size() > cache_limit_ && !order_.empty()) {
    const std::uint32_t g = order_.front();
    order_.pop_front();
    if (g == keep) {
      order_.push_back(g);
      continue;
    }
    auto it = live_.find(g);
    if (it == live_.end()) continue;
    compact_.emplace(g, Compact{std::move(it->second.spec),
                                holdings_of(it->second.enc)});
    live_.erase(it);
  }
}

void Controller::refresh_hypervisors(GroupState& st) {
  st.hypervisors = hypervisor_entries(*topo_, st.tree, st.enc, failures_);
}

UpdateDiff Controller::install_group(const GroupSpec& group) {
  if (has_group(group.id)) {
    throw InvalidArgument("group " + std::to_string(group.id) +
                          " already installed");
  }
  GroupState st;
  st.spec = group;
  st.tree = compute_tree(*topo_, *placement_, group);
  st.enc = encode_layers(st.tree, cfg_, ledger_);
  refresh_hypervisors(st);
  UpdateDiff d;
  for (const auto& [h, e] : st.hypervisors) d.hypervisors.push_back(h);
  diff_installs({}, install_map(*topo_, st.enc), d);
  expand(group.id, std::move(st));
  return d;
}

void Controller::adopt(std::function<GroupSpec(std::uint32_t)> source,
                       std::vector<std::vector<SRuleHolding>> holdings,
                       SRuleLedger ledger) {
  source_ = std::move(source);
  holdings_ = std::move(holdings);
  ledger_ = std::move(ledger);
}

GroupState& Controller::state(std::uint32_t g) {
  if (auto it = live_.find(g); it != live_.end()) return it->second;
  GroupState st;
  std::vector<SRuleHolding> holdings;
  if (auto it = compact_.find(g); it != compact_.end()) {
    st.spec = std::move(it->second.spec);
    holdings = std::move(it->second.holdings);
    compact_.erase(it);
  } else if (source_ && g < holdings_.size()) {
    st.spec = source_(g);
    holdings.swap(holdings_[g]);
  } else {
    throw InvalidArgument("unknown group " + std::to_string(g));
  }
  st.tree = compute_tree(*topo_, *placement_, st.spec);
  st.enc = rebuild_encoding(cluster_group(st.tree, cfg_), holdings);
  refresh_hypervisors(st);
  return expand(g, std::move(st));
}

const GroupState& Controller::group(std::uint32_t g) { return state(g); }

UpdateDiff Controller::apply_event(const ChurnEvent& ev) {
  GroupState& st = state(ev.group);
  if (ev.kind == ChurnKind::kJoin &&
      (ev.vm >= placement_->num_vms() ||
       placement_->tenant_of(ev.vm) != st.spec.tenant)) {
    throw InvalidArgument("vm " + std::to_string(ev.vm) +
                          " is not a VM of the group's tenant");
  }
  std::vector<Member> members = st.spec.members;
  apply_membership(members, ev);

  const auto old_hv = st.hypervisors;
  const auto old_installs = install_map(*topo_, st.enc);
  MulticastTree tree = compute_tree(
      *topo_, *placement_, GroupSpec{st.spec.id, st.spec.tenant, members});
  if (tree.leaf_layer != st.tree.leaf_layer) {
    release_layer(ledger_, Layer::kLeaf, st.enc.leaf);
    st.enc.leaf = assign_overflow(
        cluster_p_rules(tree.leaf_layer, cfg_.leaf, cfg_.r,
                        cfg_.inject_union_off_by_one),
        Layer::kLeaf, ledger_);
  }
  if (tree.spine_layer != st.tree.spine_layer) {
    release_layer(ledger_, Layer::kSpine, st.enc.spine);
    st.enc.spine = assign_overflow(
        cluster_p_rules(tree.spine_layer, cfg_.spine, cfg_.r,
                        cfg_.inject_union_off_by_one),
        Layer::kSpine, ledger_);
  }
  st.spec.members = std::move(members);
  st.tree = std::move(tree);
  refresh_hypervisors(st);

  UpdateDiff d;
  std::size_t i = 0, j = 0;
  const auto& nh = st.hypervisors;
  while (i < old_hv.size() || j < nh.size()) {
    if (j == nh.size() || (i < old_hv.size() && old_hv[i].first < nh[j].first)) {
      d.hypervisors.push_back(old_hv[i++].first);
    } else if (i == old_hv.size() || nh[j].first < old_hv[i].first) {
      d.hypervisors.push_back(nh[j++].first);
    } else {
      if (!(old_hv[i].second == nh[j].second)) {
        d.hypervisors.push_back(nh[j].first);
      }
      ++i;
      ++j;
    }
  }
  diff_installs(old_installs, install_map(*topo_, st.enc), d);
  return d;
}

DeliveryReport Controller::simulate(std::uint32_t g, HostId source,
                                    const FailureSet* failures,
                                    const UpstreamRules* upstream) {
  const GroupState& st = state(g);
  GroupSRules rules(*topo_, st.enc, g);
  std::optional<FailoverResult> fr;
  if (!failures && failures_.any()) {
    failures = &failures_;
    if (!upstream) {
      FailoverPlanner planner(*topo_, st.tree, failures_);
      if (!planner.multipath_kept(source)) {
        fr = planner.plan(source);
        upstream = &fr->rules;
      }
    }
  }
  return simulate_group(*topo_, st.tree, st.enc, rules, layout_, source,
                        failures, upstream);
}

FailureReport Controller::apply_failure(SwitchRef failed,
                                        std::uint32_t max_senders) {
  if (failed.layer != Layer::kSpine && failed.layer != Layer::kCore) {
    throw InvalidArgument("only spine and core failures are modeled");
  }
  std::vector<std::uint32_t> ids;
  for (const auto& [g, st] : live_) ids.push_back(g);
  for (const auto& [g, c] : compact_) ids.push_back(g);
  for (std::uint32_t g = 0; source_ && g < holdings_.size(); ++g) {
    ids.push_back(g);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  const FailureSet prior = failures_;
  failures_.fail(failed);

  FailureReport rep;
  rep.failed = failed;
  rep.groups_total = ids.size();
  std::map<HostId, std::uint64_t> per_hv;
  for (std::uint32_t g : ids) {
    GroupState& st = state(g);
    const GroupFailureOutcome o = analyze_group_failure(
        *topo_, layout_, st.tree, st.enc, failures_, failed, max_senders);
    if (!o.impacted) continue;
    ++rep.impacted_groups;
    rep.partitioned_groups += o.partitioned;
    rep.unreachable_receivers += o.unreachable_receivers;
    rep.delivery_failures += o.delivery_failure;
    rep.duplicate_deliveries += o.duplicates;
    rep.senders_simulated += o.senders_simulated;
    rep.senders_rerouted += o.rerouted.size();
    const auto before = hypervisor_entries(*topo_, st.tree, st.enc, prior);
    refresh_hypervisors(st);
    for (std::size_t i = 0; i < before.size(); ++i) {
      if (!(before[i].second == st.hypervisors[i].second)) {
        ++per_hv[before[i].first];
      }
    }
  }
  for (const auto& [h, n] : per_hv) {
    rep.diff.hypervisors.push_back(h);
    rep.max_hypervisor_updates = std::max(rep.max_hypervisor_updates, n);
    rep.mean_hypervisor_updates += static_cast<double>(n);
  }
  if (!per_hv.empty()) {
    rep.mean_hypervisor_updates /= static_cast<double>(per_hv.size());
  }
  return rep;
}

std::string Controller::dump(std::uint32_t g) {
  const GroupState& st = state(g);
  std::ostringstream os;
  os << "group " << g << " tenant " << st.spec.tenant << " members "
     << st.spec.members.size() << "\n";
  for (const auto& [h, e] : st.hypervisors) {
    os << "hypervisor H" << h << (e.sends ? " send" : "")
       << (e.receives ? " recv" : "");
    if (e.sends) {
      const auto bytes = encode_header(
          build_header(*topo_, st.tree, st.enc, h), layout_);
      os << " header " << bytes.size() << "B";
    }
    os << "\n";
  }
  auto layer = [&](const char* name, const LayerEncoding& l) {
    for (const auto& p : l.p_rules) {
      os << name << " p-rule";
      for (auto id : p.ids) os << " " << id;
      os << " " << p.bitmap.to_string() << "\n";
    }
    for (const auto& s : l.s_rules) {
      os << name << " s-rule " << s.id << " " << s.bitmap.to_string() << "\n";
    }
    if (l.default_bitmap) {
      os << name << " default";
      for (auto id : l.default_ids) os << " " << id;
      os << " " << l.default_bitmap->to_string() << "\n";
    }
  };
  layer("spine", st.enc.spine);
  layer("leaf", st.enc.leaf);
  return os.str();
}

bool tree_traverses(const Topology& topo, const MulticastTree& tree,
                    SwitchRef sw) {
  std::vector<std::uint8_t> spines(topo.num_spines(), 0);
  std::vector<std::uint8_t> cores(topo.num_cores(), 0);
  mark_traversed(topo, tree, spines, cores);
  if (sw.layer == Layer::kSpine) return spines.at(sw.index) != 0;
  if (sw.layer == Layer::kCore) return cores.at(sw.index) != 0;
  return false;
}

GroupFailureOutcome analyze_group_failure(const Topology& topo,
                                          const WireLayout& layout,
                                          const MulticastTree& tree,
                                          const GroupEncoding& enc,
                                          const FailureSet& failures,
                                          SwitchRef failed,
                                          std::uint32_t max_senders) {
  GroupFailureOutcome o;
  if (!tree.has_receivers() || !tree_traverses(topo, tree, failed)) return o;
  o.impacted = true;
  FailoverPlanner planner(topo, tree, failures);
  std::set<HostId> unreachable;
  for (HostId s : tree.senders) {
    if (!planner.multipath_kept(s)) o.rerouted.push_back(s);
  }
  GroupSRules rules(topo, enc, tree.group);
  for (HostId s : spread(tree.senders, max_senders)) {
    const FailoverResult fr = planner.plan(s);
    unreachable.insert(fr.unreachable.begin(), fr.unreachable.end());
    const DeliveryReport rep =
        simulate_group(topo, tree, enc, rules, layout, s, &failures,
                       fr.multipath_kept ? nullptr : &fr.rules);
    ++o.senders_simulated;
    o.duplicates += rep.duplicates.size();
    for (HostId m : rep.missing) {
      if (!std::binary_search(fr.unreachable.begin(), fr.unreachable.end(),
                              m)) {
        o.delivery_failure = true;
        break;
      }
    }
  }
  o.partitioned = !unreachable.empty();
  o.unreachable_receivers = unreachable.size();
  return o;
}

void mark_traversed(const Topology& topo, const MulticastTree& tree,
                    std::vector<std::uint8_t>& spines,
                    std::vector<std::uint8_t>& cores) {
  const std::uint32_t planes = topo.spec().spines_per_pod;
  const std::uint32_t cpp = topo.cores_per_plane();
  std::vector<std::uint32_t> rx_pods;
  for (HostId r : tree.receivers) {
    const std::uint32_t p = topo.pod_of_host(r);
    if (rx_pods.empty() || rx_pods.back() != p) rx_pods.push_back(p);
  }
  rx_pods.erase(std::unique(rx_pods.begin(), rx_pods.end()), rx_pods.end());
  for (HostId s : tree.senders) {
    const Layer apex = sender_apex(topo, tree, s);
    if (apex == Layer::kLeaf) continue;
    const std::uint32_t sl = topo.leaf_of_host(s);
    const std::uint32_t sp = topo.pod_of_leaf(sl);
    // Same hash as the data plane with every uplink alive.
    const std::uint64_t hl = mix_seed(
        tree.group, s, (static_cast<std::uint64_t>(Layer::kLeaf) << 32) | sl);
    const auto plane = static_cast<std::uint32_t>(hl % planes);
    const std::uint32_t spine = topo.spine(sp, plane);
    spines[spine] = 1;
    if (apex != Layer::kCore) continue;
    const std::uint64_t hs = mix_seed(
        tree.group, s,
        (static_cast<std::uint64_t>(Layer::kSpine) << 32) | spine);
    cores[topo.core(plane, static_cast<std::uint32_t>(hs % cpp))] = 1;
    for (std::uint32_t p : rx_pods) {
      if (p != sp) spines[topo.spine(p, plane)] = 1;
    }
  }
}

UpdateLog::UpdateLog(const Topology& topo)
    : hv_(topo.num_hosts(), 0),
      leaf_(topo.num_leaves(), 0),
      spine_(topo.num_spines(), 0) {}

void UpdateLog::record(const UpdateDiff& d, ChurnKind kind,
                       std::size_t group_size) {
  for (HostId h : d.hypervisors) ++hv_[h];
  for (std::uint32_t l : d.leaves) ++leaf_[l];
  for (std::uint32_t s : d.spines) ++spine_[s];
  ++events_;
  Sums& s = sums_[kind == ChurnKind::kJoin ? 0 : 1];
  const double n = group_size == 0 ? 1.0 : static_cast<double>(group_size);
  s.hv += static_cast<double>(d.hypervisors.size()) / n;
  s.leaf += static_cast<double>(d.leaves.size()) / n;
  s.spine += static_cast<double>(d.spines.size()) / n;
  ++s.n;
}

UpdateLog::Normalized UpdateLog::normalized(ChurnKind kind) const {
  const Sums& s = sums_[kind == ChurnKind::kJoin ? 0 : 1];
  Normalized out;
  out.events = s.n;
  if (s.n == 0) return out;
  const double n = static_cast<double>(s.n);
  out.hypervisor = s.hv / n;
  out.leaf = s.leaf / n;
  out.spine = s.spine / n;
  return out;
}

UpdateLog::Normalized UpdateLog::normalized_all() const {
  Normalized out;
  out.events = sums_[0].n + sums_[1].n;
  if (out.events == 0) return out;
  const double n = static_cast<double>(out.events);
  out.hypervisor = (sums_[0].hv + sums_[1].hv) / n;
  out.leaf = (sums_[0].leaf + sums_[1].leaf) / n;
  out.spine = (sums_[0].spine + sums_[1].spine) / n;
  return out;
}

UpdateRateReport update_rate_report(const UpdateLog& log,
                                    double events_per_second) {
  UpdateRateReport r;
  r.events_per_second = events_per_second;
  auto stats = [&](std::span<const std::uint64_t> counts, double limit) {
    RateStats s;
    s.threshold = limit;
    if (log.events() == 0 || events_per_second <= 0) {
      s.headroom = 0;
      return s;
    }
    const double seconds =
        static_cast<double>(log.events()) / events_per_second;
    double sum = 0;
    std::uint64_t n = 0, mx = 0;
    for (std::uint64_t c : counts) {
      if (c == 0) continue;
      sum += static_cast<double>(c);
      ++n;
      mx = std::max(mx, c);
    }
    if (n > 0) s.mean = sum / static_cast<double>(n) / seconds;
    s.max = static_cast<double>(mx) / seconds;
    s.headroom = s.max > 0 ? limit / s.max : 0;
    return s;
  };
  r.hypervisor = stats(log.hypervisor_counts(), kHypervisorUpdateLimit);
  r.leaf = stats(log.leaf_counts(), kSwitchUpdateLimit);
  r.spine = stats(log.spine_counts(), kSwitchUpdateLimit);
  return r;
}

}  // namespace srmc
