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

#include "srmc/config.h"

#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "srmc/encode.h"
#include "srmc/error.h"
#include "srmc/rng.h"

namespace srmc {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
      return false;
    }
  }
  return true;
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = v.find(',', pos);
    out.push_back(trim(v.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::uint64_t to_u64(std::string_view s, const ConfigEntry& e) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || s.empty()) {
    throw ConfigError("'" + e.key + "' expects an unsigned integer, got '" +
                          std::string(s) + "'",
                      static_cast<int>(e.line));
  }
  return v;
}

std::uint32_t to_u32(std::string_view s, const ConfigEntry& e) {
  const std::uint64_t v = to_u64(s, e);
  if (v > 0xffffffffull) {
    throw ConfigError("'" + e.key + "' is out of range",
                      static_cast<int>(e.line));
  }
  return static_cast<std::uint32_t>(v);
}

double to_double(std::string_view s, const ConfigEntry& e) {
  try {
    std::size_t used = 0;
    const std::string str(s);
    const double v = std::stod(str, &used);
    if (used != str.size() || !(v >= 0)) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("'" + e.key + "' expects a non-negative number",
                      static_cast<int>(e.line));
  }
}

std::vector<std::uint32_t> to_u32_list(const ConfigEntry& e) {
  std::vector<std::uint32_t> out;
  for (auto item : split_list(e.value)) out.push_back(to_u32(item, e));
  return out;
}

std::uint32_t to_positive(std::string_view s, const ConfigEntry& e) {
  const std::uint32_t v = to_u32(s, e);
  if (v == 0) {
    throw ConfigError("'" + e.key + "' must be positive",
                      static_cast<int>(e.line));
  }
  return v;
}

std::vector<std::uint32_t> to_positive_list(const ConfigEntry& e) {
  std::vector<std::uint32_t> out;
  for (auto item : split_list(e.value)) out.push_back(to_positive(item, e));
  return out;
}

SizeDistribution to_dist(std::string_view s, const ConfigEntry& e) {
  try {
    return parse_distribution(std::string(s));
  } catch (const Error&) {
    throw ConfigError("unknown distribution '" + std::string(s) + "'",
                      static_cast<int>(e.line));
  }
}

std::uint32_t to_capacity(const ConfigEntry& e) {
  if (e.value == "unbounded") return kUnbounded;
  return to_u32(e.value, e);
}

template <typename T>
std::string join(const std::vector<T>& v,
                 const std::function<std::string(const T&)>& f) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += f(v[i]);
  }
  return s;
}

std::string num(std::uint64_t v) { return std::to_string(v); }

std::string capacity_str(std::uint32_t v) {
  return v == kUnbounded ? "unbounded" : num(v);
}

std::string double_str(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

}  // namespace

std::vector<ConfigEntry> parse_config_text(std::string_view text) {
  std::vector<ConfigEntry> out;
  std::string section;
  std::set<std::pair<std::string, std::string>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const int ln = static_cast<int>(line_no);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section", ln);
      const auto name = trim(line.substr(1, line.size() - 2));
      if (!valid_name(name)) throw ConfigError("bad section name", ln);
      section = std::string(name);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("expected 'key = value'", ln);
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!valid_name(key)) throw ConfigError("bad key", ln);
    if (value.empty()) {
      throw ConfigError("missing value for '" + std::string(key) + "'", ln);
    }
    if (!seen.emplace(section, std::string(key)).second) {
      throw ConfigError("duplicate key '" + std::string(key) + "'", ln);
    }
    out.push_back({section, std::string(key), std::string(value), line_no});
  }
  return out;
}

SwitchRef parse_switch_name(std::string_view s) {
  if (s.size() < 2) throw InvalidArgument("bad switch name");
  Layer layer;
  switch (s.front()) {
    case 'L': layer = Layer::kLeaf; break;
    case 'S': layer = Layer::kSpine; break;
    case 'C': layer = Layer::kCore; break;
    default: throw InvalidArgument("bad switch name '" + std::string(s) + "'");
  }
  std::uint32_t idx = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data() + 1, end, idx);
  if (ec != std::errc() || p != end) {
    throw InvalidArgument("bad switch name '" + std::string(s) + "'");
  }
  return {layer, idx};
}

ScenarioConfig ScenarioConfig::Parse(std::string_view text) {
  ScenarioConfig c;
  bool shape_given = false;
  using Setter = std::function<void(const ConfigEntry&)>;
  const std::map<std::pair<std::string, std::string>, Setter> setters = {
      {{"", "name"}, [&](const ConfigEntry& e) { c.name = e.value; }},
      {{"topology", "preset"},
       [&](const ConfigEntry& e) {
         if (e.value == "fabric") {
           c.topology = TopologySpec::Fabric();
         } else if (e.value == "fig3") {
           c.topology = TopologySpec::Fig3();
         } else {
           throw ConfigError("unknown preset '" + e.value + "'",
                             static_cast<int>(e.line));
         }
       }},
      {{"topology", "pods"},
       [&](const ConfigEntry& e) {
         shape_given = true;
         c.topology.num_pods = to_u32(e.value, e);
       }},
      {{"topology", "spines_per_pod"},
       [&](const ConfigEntry& e) {
         shape_given = true;
         c.topology.spines_per_pod = to_u32(e.value, e);
       }},
      {{"topology", "leaves_per_pod"},
       [&](const ConfigEntry& e) {
         shape_given = true;
         c.topology.leaves_per_pod = to_u32(e.value, e);
       }},
      {{"topology", "hosts_per_leaf"},
       [&](const ConfigEntry& e) {
         shape_given = true;
         c.topology.hosts_per_leaf = to_u32(e.value, e);
       }},
      {{"topology", "cores"},
       [&](const ConfigEntry& e) {
         shape_given = true;
         c.topology.cores = to_u32(e.value, e);
       }},
      {{"workload", "tenants"},
       [&](const ConfigEntry& e) { c.tenants = to_u32(e.value, e); }},
      {{"workload", "groups"},
       [&](const ConfigEntry& e) { c.groups = to_u64(e.value, e); }},
      {{"workload", "placement"},
       [&](const ConfigEntry& e) { c.placements = to_positive_list(e); }},
      {{"workload", "distribution"},
       [&](const ConfigEntry& e) {
         c.distributions.clear();
         for (auto d : split_list(e.value)) {
           c.distributions.push_back(to_dist(d, e));
         }
       }},
      {{"workload", "seed"},
       [&](const ConfigEntry& e) { c.seed = to_u64(e.value, e); }},
      {{"workload", "host_capacity"},
       [&](const ConfigEntry& e) { c.host_capacity = to_u32(e.value, e); }},
      {{"workload", "tenant_min"},
       [&](const ConfigEntry& e) { c.tenant_min = to_u32(e.value, e); }},
      {{"workload", "tenant_scale"},
       [&](const ConfigEntry& e) { c.tenant_scale = to_double(e.value, e); }},
      {{"workload", "tenant_max"},
       [&](const ConfigEntry& e) { c.tenant_max = to_u32(e.value, e); }},
      {{"encoding", "r"},
       [&](const ConfigEntry& e) { c.r_values = to_u32_list(e); }},
      {{"encoding", "header_budget"},
       [&](const ConfigEntry& e) { c.header_budget = to_u32(e.value, e); }},
      {{"encoding", "leaf_rules"},
       [&](const ConfigEntry& e) {
         if (e.value == "auto") {
           c.leaf_rules.reset();
         } else {
           c.leaf_rules = to_u32(e.value, e);
         }
       }},
      {{"encoding", "spine_rules"},
       [&](const ConfigEntry& e) { c.spine_rules = to_u32(e.value, e); }},
      {{"encoding", "leaf_k_max"},
       [&](const ConfigEntry& e) { c.leaf_k_max = to_u32(e.value, e); }},
      {{"encoding", "spine_k_max"},
       [&](const ConfigEntry& e) { c.spine_k_max = to_u32(e.value, e); }},
      {{"encoding", "f_max"},
       [&](const ConfigEntry& e) { c.f_max = to_capacity(e); }},
      {{"traffic", "payloads"},
       [&](const ConfigEntry& e) { c.payloads = to_u32_list(e); }},
      {{"churn", "events"},
       [&](const ConfigEntry& e) { c.churn.events = to_u64(e.value, e); }},
      {{"churn", "placement"},
       [&](const ConfigEntry& e) { c.churn.placement = to_positive(e.value, e); }},
      {{"churn", "distribution"},
       [&](const ConfigEntry& e) {
         c.churn.distribution = to_dist(e.value, e);
       }},
      {{"churn", "r"},
       [&](const ConfigEntry& e) { c.churn.r = to_u32(e.value, e); }},
      {{"churn", "seed"},
       [&](const ConfigEntry& e) { c.churn.seed = to_u64(e.value, e); }},
      {{"churn", "events_per_second"},
       [&](const ConfigEntry& e) {
         c.churn.events_per_second = to_double(e.value, e);
       }},
      {{"failure", "enabled"},
       [&](const ConfigEntry& e) {
         if (e.value != "true" && e.value != "false") {
           throw ConfigError("'enabled' expects true or false",
                             static_cast<int>(e.line));
         }
         c.failure.enabled = e.value == "true";
       }},
      {{"failure", "placement"},
       [&](const ConfigEntry& e) {
         c.failure.placement = to_positive(e.value, e);
       }},
      {{"failure", "distribution"},
       [&](const ConfigEntry& e) {
         c.failure.distribution = to_dist(e.value, e);
       }},
      {{"failure", "r"},
       [&](const ConfigEntry& e) { c.failure.r = to_u32(e.value, e); }},
      {{"failure", "switches"},
       [&](const ConfigEntry& e) {
         c.failure.switches.clear();
         if (e.value == "worst") return;
         for (auto s : split_list(e.value)) {
           SwitchRef ref;
           try {
             ref = parse_switch_name(s);
           } catch (const Error& err) {
             throw ConfigError(err.what(), static_cast<int>(e.line));
           }
           if (ref.layer == Layer::kLeaf) {
             throw ConfigError("only spines and cores can fail",
                               static_cast<int>(e.line));
           }
           c.failure.switches.push_back(ref);
         }
       }},
      {{"failure", "max_senders"},
       [&](const ConfigEntry& e) {
         c.failure.max_senders = to_u32(e.value, e);
       }},
      {{"output", "dir"},
       [&](const ConfigEntry& e) { c.output_dir = e.value; }},
  };

  for (const ConfigEntry& e : parse_config_text(text)) {
    auto it = setters.find({e.section, e.key});
    if (it == setters.end()) {
      const std::string where =
          e.section.empty() ? "" : " in [" + e.section + "]";
      throw ConfigError("unknown key '" + e.key + "'" + where,
                        static_cast<int>(e.line));
    }
    if (e.key == "preset" && shape_given) {
      throw ConfigError("preset must come before explicit topology keys",
                        static_cast<int>(e.line));
    }
    it->second(e);
  }
  c.validate();
  return c;
}

ScenarioConfig ScenarioConfig::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return Parse(ss.str());
}

void ScenarioConfig::validate() const {
  try {
    topology.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what(), 0);
  }
  if (tenants == 0) throw ConfigError("tenants must be positive", 0);
  if (placements.empty() || distributions.empty() || r_values.empty() ||
      payloads.empty()) {
    throw ConfigError("lists must not be empty", 0);
  }
  for (auto p : placements) {
    if (p == 0) throw ConfigError("placement must be positive", 0);
  }
  if (churn.placement == 0 || failure.placement == 0) {
    throw ConfigError("placement must be positive", 0);
  }
  if (leaf_k_max == 0 || spine_k_max == 0) {
    throw ConfigError("k_max must be positive", 0);
  }
  if (host_capacity == 0) throw ConfigError("host_capacity must be positive", 0);
  if (tenant_min == 0 || tenant_max < tenant_min || !(tenant_scale >= 0)) {
    throw ConfigError("tenant sizes need 0 < tenant_min <= tenant_max", 0);
  }
  std::vector<std::uint32_t> all_p = placements;
  if (churn.events > 0) all_p.push_back(churn.placement);
  if (failure.enabled) all_p.push_back(failure.placement);
  for (auto p : all_p) {
    if (p > topology.hosts_per_leaf) {
      throw ConfigError("placement " + std::to_string(p) +
                            " exceeds hosts_per_leaf",
                        0);
    }
  }
  try {
    config_for_budget(Topology(topology), header_budget, 0, leaf_k_max,
                      spine_k_max, spine_rules);
  } catch (const Error& e) {
    throw ConfigError(e.what(), 0);
  }
  for (const SwitchRef& s : failure.switches) {
    const bool ok =
        (s.layer == Layer::kSpine && s.index < topology.num_pods *
                                                   topology.spines_per_pod) ||
        (s.layer == Layer::kCore && s.index < topology.cores);
    if (!ok) {
      throw ConfigError("failure switch " + switch_name(s) +
                            " is not a spine or core of the topology",
                        0);
    }
  }
}

std::uint64_t ScenarioConfig::tenant_seed() const {
  return mix_seed(seed, 1, 0);
}

std::uint64_t ScenarioConfig::placement_seed(std::uint32_t p) const {
  return mix_seed(seed, 2, p);
}

std::uint64_t ScenarioConfig::group_seed(std::uint32_t p,
                                         SizeDistribution d) const {
  return mix_seed(seed, 3, (std::uint64_t{p} << 8) | static_cast<unsigned>(d));
}

EncodingConfig ScenarioConfig::encoding(const Topology& topo,
                                        std::uint32_t r) const {
  EncodingConfig cfg = config_for_budget(topo, header_budget, r, leaf_k_max,
                                         spine_k_max, spine_rules);
  if (leaf_rules) cfg.leaf.h_max = *leaf_rules;
  cfg.f_max = f_max;
  cfg.validate();
  return cfg;
}

std::string ScenarioConfig::to_string() const {
  std::ostringstream os;
  const std::function<std::string(const std::uint32_t&)> u32 =
      [](const std::uint32_t& v) { return num(v); };
  const std::function<std::string(const SizeDistribution&)> dist =
      [](const SizeDistribution& d) { return std::string(distribution_name(d)); };
  const std::function<std::string(const SwitchRef&)> sw =
      [](const SwitchRef& s) { return switch_name(s); };
  os << "name = " << name << "\n\n";
  os << "[topology]\n"
     << "pods = " << topology.num_pods << "\n"
     << "spines_per_pod = " << topology.spines_per_pod << "\n"
     << "leaves_per_pod = " << topology.leaves_per_pod << "\n"
     << "hosts_per_leaf = " << topology.hosts_per_leaf << "\n"
     << "cores = " << topology.cores << "\n\n";
  os << "[workload]\n"
     << "tenants = " << tenants << "\n"
     << "groups = " << groups << "\n"
     << "placement = " << join(placements, u32) << "\n"
     << "distribution = " << join(distributions, dist) << "\n"
     << "seed = " << seed << "\n"
     << "host_capacity = " << host_capacity << "\n"
     << "tenant_min = " << tenant_min << "\n"
     << "tenant_scale = " << double_str(tenant_scale) << "\n"
     << "tenant_max = " << tenant_max << "\n\n";
  os << "[encoding]\n"
     << "r = " << join(r_values, u32) << "\n"
     << "header_budget = " << header_budget << "\n"
     << "leaf_rules = " << (leaf_rules ? num(*leaf_rules) : "auto") << "\n"
     << "spine_rules = " << spine_rules << "\n"
     << "leaf_k_max = " << leaf_k_max << "\n"
     << "spine_k_max = " << spine_k_max << "\n"
     << "f_max = " << capacity_str(f_max) << "\n\n";
  os << "[traffic]\n"
     << "payloads = " << join(payloads, u32) << "\n\n";
  os << "[churn]\n"
     << "events = " << churn.events << "\n"
     << "placement = " << churn.placement << "\n"
     << "distribution = " << distribution_name(churn.distribution) << "\n"
     << "r = " << churn.r << "\n"
     << "seed = " << churn.seed << "\n"
     << "events_per_second = " << double_str(churn.events_per_second)
     << "\n\n";
  os << "[failure]\n"
     << "enabled = " << (failure.enabled ? "true" : "false") << "\n"
     << "placement = " << failure.placement << "\n"
     << "distribution = " << distribution_name(failure.distribution) << "\n"
     << "r = " << failure.r << "\n"
     << "switches = "
     << (failure.switches.empty() ? "worst" : join(failure.switches, sw))
     << "\n"
     << "max_senders = " << failure.max_senders << "\n\n";
  os << "[output]\n"
     << "dir = " << output_dir << "\n";
  return os.str();
}

}  // namespace srmc
