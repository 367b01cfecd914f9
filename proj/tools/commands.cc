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

#include "commands.h"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "srmc/config.h"
#include "srmc/encode.h"
#include "srmc/error.h"
#include "srmc/experiment.h"
#include "srmc/fig3.h"
#include "srmc/wire.h"

namespace srmc::cli {
namespace {

std::string ids_str(const char* prefix, const std::vector<std::uint32_t>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ",";
    s += prefix + std::to_string(ids[i]);
  }
  return s;
}

void print_layer(std::ostream& out, const char* layer, const char* prefix,
                 const LayerEncoding& l) {
  for (const SharedRule& r : l.p_rules) {
    out << "  " << layer << " p-rule  " << ids_str(prefix, r.ids) << " "
        << r.bitmap.to_string() << "\n";
  }
  for (const SwitchBitmap& s : l.s_rules) {
    out << "  " << layer << " s-rule  " << prefix << s.id << " "
        << s.bitmap.to_string() << "\n";
  }
  if (l.default_bitmap) {
    out << "  " << layer << " default " << ids_str(prefix, l.default_ids)
        << " " << l.default_bitmap->to_string() << "\n";
  }
}

ScenarioConfig load(const ExperimentOptions& opt) {
  ScenarioConfig cfg = ScenarioConfig::Load(opt.config);
  if (!opt.output_dir.empty()) cfg.output_dir = opt.output_dir;
  return cfg;
}

void open_out(std::ofstream& f, const std::string& dir,
              const std::string& name) {
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / name;
  f.open(path);
  if (!f) throw Error("cannot write " + path.string());
}

std::string pct(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << 100.0 * v << "%";
  return os.str();
}

std::string num(double v, int prec = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << v;
  return os.str();
}

void print_churn(std::ostream& out, const ChurnResult& c) {
  out << "churn P=" << c.placement_p << " "
      << distribution_name(c.distribution) << " R=" << c.r << ": "
      << c.events << " events\n";
  auto line = [&](const char* kind, const UpdateLog::Normalized& n) {
    out << "  " << kind << " (" << n.events
        << "): per member hypervisor=" << num(n.hypervisor)
        << " leaf=" << num(n.leaf) << " spine=" << num(n.spine) << "\n";
  };
  line("join ", c.join);
  line("leave", c.leave);
  const UpdateRateReport& r = c.rates;
  out << "  at " << r.events_per_second << " events/s: hypervisor "
      << num(r.hypervisor.mean, 2) << " (" << num(r.hypervisor.max, 2)
      << "), leaf " << num(r.leaf.mean, 2) << " (" << num(r.leaf.max, 2)
      << "), spine " << num(r.spine.mean, 2) << " (" << num(r.spine.max, 2)
      << ") updates/s mean (max)\n";
  if (c.violations) {
    out << "  " << c.violations << " violations, first: "
        << c.first_violation << "\n";
  }
}

void print_failure(std::ostream& out, const FailureResult& f) {
  const FailureReport& r = f.report;
  out << "fail " << switch_name(r.failed) << ": impacted "
      << r.impacted_groups << "/" << r.groups_total << " ("
      << pct(static_cast<double>(r.impacted_groups) /
             static_cast<double>(std::max<std::uint64_t>(r.groups_total, 1)))
      << "), partitioned " << r.partitioned_groups << ", senders rerouted "
      << r.senders_rerouted << ", simulated " << r.senders_simulated
      << ", delivery failures " << r.delivery_failures << "\n";
}

std::vector<HostMember> parse_group(const std::string& spec,
                                    const Topology& topo) {
  std::vector<HostMember> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty() && (item[0] == 'H' || item[0] == 'h')) item.erase(0, 1);
    Role role = Role::kBoth;
    if (const auto colon = item.find(':'); colon != std::string::npos) {
      const std::string r = item.substr(colon + 1);
      if (r == "s") {
        role = Role::kSender;
      } else if (r == "r") {
        role = Role::kReceiver;
      } else if (r == "b") {
        role = Role::kBoth;
      } else {
        throw InvalidArgument("bad role '" + r + "'");
      }
      item.resize(colon);
    }
    HostId h = 0;
    auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), h);
    if (ec != std::errc() || p != item.data() + item.size() || item.empty()) {
      throw InvalidArgument("bad host '" + item + "'");
    }
    if (h >= topo.num_hosts()) {
      throw InvalidArgument("host " + std::to_string(h) + " out of range");
    }
    out.push_back({h, role});
  }
  if (out.empty()) throw InvalidArgument("empty group");
  return out;
}

}  // namespace

int cmd_example_fig3(std::ostream& out) {
  const Fig3Example ex;
  const Topology& topo = ex.topo;
  const MulticastTree& tree = ex.tree;
  out << "topology " << topo.spec().to_string() << "\n"
      << "sender H" << ex.sender << ", " << tree.receivers.size()
      << " receivers\n";

  const std::size_t d1 = physical_content_bits(topo, tree, ex.sender);
  SRuleLedger l2(topo, kUnbounded);
  const GroupEncoding e2 =
      encode_layers(tree, Fig3Example::unshared_config(), l2);
  const std::size_t d2 =
      logical_content_bits(topo, build_header(topo, tree, e2, ex.sender));
  const EncodingConfig c3 = Fig3Example::shared_config(2);
  SRuleLedger l3(topo, kUnbounded);
  const GroupEncoding e3 = encode_layers(tree, c3, l3);
  const PacketHeader h3 = build_header(topo, tree, e3, ex.sender);
  const std::size_t d3 = logical_content_bits(topo, h3);
  out << "D1=" << d1 << " bits, D2=" << d2 << " bits, D3(R=2)=" << d3
      << " bits\n";

  bool ok = d1 == 161 && d2 == 83 && d3 == 62;
  struct Mode {
    std::uint32_t r;
    std::uint32_t f_max;
  };
  for (const Mode m : {Mode{2, kUnbounded}, Mode{0, 1}, Mode{0, 0}}) {
    SRuleLedger ledger(topo, m.f_max);
    const GroupEncoding e =
        encode_layers(tree, Fig3Example::shared_config(m.r, m.f_max), ledger);
    out << "R=" << m.r << " F_max="
        << (m.f_max == kUnbounded ? std::string("unbounded")
                                  : std::to_string(m.f_max))
        << "\n";
    print_layer(out, "spine", "P", e.spine);
    print_layer(out, "leaf ", "L", e.leaf);
  }
  const auto bytes = encode_header(h3, WireLayout::For(topo, c3));
  out << "wire header R=2: " << bytes.size() << " bytes\n"
      << hex_dump(bytes, WireLayout::For(topo, c3));

  auto rule = [](std::vector<std::uint32_t> ids, const char* bits) {
    return SharedRule{std::move(ids), PortBitmap::FromString(bits)};
  };
  ok = ok && e3.spine.p_rules == std::vector{rule({2, 3}, "11")} &&
       e3.leaf.p_rules == std::vector{rule({0, 6}, "00011111"),
                                      rule({5, 7}, "11110001")};
  out << (ok ? "matches the worked example\n"
             : "MISMATCH with the worked example\n");
  return ok ? kOk : kInvariantFailure;
}

int cmd_experiment(const ExperimentOptions& opt, std::ostream& out) {
  const ScenarioConfig cfg = load(opt);
  const ExecMode mode = opt.serial ? ExecMode::kSerial : ExecMode::kParallel;
  std::vector<InstallResult> rows;
  std::uint64_t violations = 0;
  for (std::uint32_t p : cfg.placements) {
    for (SizeDistribution d : cfg.distributions) {
      const Workload w(cfg, p, d);
      for (std::uint32_t r : cfg.r_values) {
        InstallOptions io;
        io.mode = mode;
        InstallResult res = run_install(w, cfg.encoding(w.topo, r), io);
        out << "P=" << p << " " << distribution_name(d) << " R=" << r
            << ": coverage " << pct(res.coverage()) << ", leaf s-rules mean "
            << num(res.leaf_srules.mean, 2) << " p95 " << res.leaf_srules.p95
            << " max " << res.leaf_srules.max << ", overhead@1500 "
            << pct(res.overhead(1500)) << " (unicast "
            << pct(res.unicast_overhead()) << ", overlay "
            << pct(res.overlay_overhead()) << "), latency mean "
            << num(res.latency.mean_us, 2) << " us\n";
        if (res.violations) {
          out << "  " << res.violations
              << " violations, first: " << res.first_violation << "\n";
        }
        violations += res.violations;
        rows.push_back(std::move(res));
      }
    }
  }
  std::vector<ChurnResult> churn;
  if (cfg.churn.events > 0) {
    churn.push_back(run_churn(cfg, mode));
    print_churn(out, churn.back());
    violations += churn.back().violations;
  }
  std::ofstream f;
  open_out(f, cfg.output_dir, "coverage.csv");
  write_coverage_csv(f, rows);
  f.close();
  open_out(f, cfg.output_dir, "srules.csv");
  write_srules_csv(f, rows);
  f.close();
  open_out(f, cfg.output_dir, "overhead.csv");
  write_overhead_csv(f, rows, cfg.payloads);
  f.close();
  open_out(f, cfg.output_dir, "latency.csv");
  write_latency_csv(f, rows);
  f.close();
  open_out(f, cfg.output_dir, "updates.csv");
  write_updates_csv(f, churn);
  f.close();
  if (cfg.failure.enabled) {
    const auto fails = run_failures(cfg, mode);
    for (const auto& fr : fails) {
      print_failure(out, fr);
      violations += fr.report.delivery_failures;
    }
    open_out(f, cfg.output_dir, "failures.csv");
    write_failures_csv(f, fails);
  }
  out << "wrote " << cfg.output_dir << "\n";
  return violations ? kInvariantFailure : kOk;
}

int cmd_verify(const std::string& config, bool mutate, std::ostream& out) {
  const ScenarioConfig cfg = ScenarioConfig::Load(config);
  auto hook = +[](EncodingConfig& c) { c.inject_union_off_by_one = true; };
  const VerifyResult v = run_verify(cfg, mutate ? hook : nullptr);
  out << "cells " << v.cells << ", groups " << v.groups_checked
      << ", packets " << v.packets_checked << ", headers "
      << v.headers_round_tripped << ", failure cases " << v.failures_checked
      << ", partitions " << v.partitions << "\n";
  if (!v.ok) {
    out << "FAIL " << v.message << "\n";
    return kInvariantFailure;
  }
  out << "PASS\n";
  return kOk;
}

int cmd_churn(const ExperimentOptions& opt, std::ostream& out) {
  ScenarioConfig cfg = load(opt);
  if (cfg.churn.events == 0) throw ConfigError("[churn] events is zero", 0);
  const ChurnResult c = run_churn(
      cfg, opt.serial ? ExecMode::kSerial : ExecMode::kParallel);
  print_churn(out, c);
  std::ofstream f;
  open_out(f, cfg.output_dir, "updates.csv");
  write_updates_csv(f, {c});
  return c.violations ? kInvariantFailure : kOk;
}

int cmd_fail(const ExperimentOptions& opt, std::ostream& out) {
  const ScenarioConfig cfg = load(opt);
  const auto fails = run_failures(
      cfg, opt.serial ? ExecMode::kSerial : ExecMode::kParallel);
  std::uint64_t bad = 0;
  for (const auto& fr : fails) {
    print_failure(out, fr);
    bad += fr.report.delivery_failures;
  }
  std::ofstream f;
  open_out(f, cfg.output_dir, "failures.csv");
  write_failures_csv(f, fails);
  return bad ? kInvariantFailure : kOk;
}

int cmd_encode(const EncodeOptions& opt, std::ostream& out) {
  TopologySpec spec;
  EncodingConfig ec;
  std::optional<ScenarioConfig> sc;
  if (!opt.config.empty()) {
    sc = ScenarioConfig::Load(opt.config);
    spec = sc->topology;
  } else if (opt.topology == "fig3") {
    spec = TopologySpec::Fig3();
  } else if (opt.topology == "fabric") {
    spec = TopologySpec::Fabric();
  } else {
    throw InvalidArgument("unknown topology '" + opt.topology + "'");
  }
  const Topology topo(spec);
  if (sc) {
    ec = sc->encoding(topo, opt.r);
  } else if (opt.topology == "fig3") {
    ec = Fig3Example::shared_config(opt.r);
  } else {
    ec = config_for_budget(topo, 325, opt.r);
  }
  const auto members = parse_group(opt.group, topo);
  const MulticastTree tree = compute_tree(topo, 0, members);
  if (tree.senders.empty()) throw InvalidArgument("group has no sender");
  HostId src = tree.senders.front();
  if (opt.sender >= 0) {
    src = static_cast<HostId>(opt.sender);
    if (!std::binary_search(tree.senders.begin(), tree.senders.end(), src)) {
      throw InvalidArgument("H" + std::to_string(src) + " is not a sender");
    }
  }
  SRuleLedger ledger(topo, ec.f_max);
  const GroupEncoding enc = encode_layers(tree, ec, ledger);
  const WireLayout layout = WireLayout::For(topo, ec);
  const auto bytes = encode_header(build_header(topo, tree, enc, src), layout);
  out << "sender H" << src << ", " << bytes.size() << " bytes\n";
  print_layer(out, "spine", "P", enc.spine);
  print_layer(out, "leaf ", "L", enc.leaf);
  if (opt.hex) out << hex_dump(bytes, layout);
  return kOk;
}

}  // namespace srmc::cli
