// Copyright 2026 the rxngraph authors
// SPDX-License-Identifier: Apache-2.0
//
// Flat TOML-style config files: `key = value` lines, '#' comments, strings,
// numbers, booleans, and [int, ...] arrays. Every key mirrors a CLI flag.

#ifndef RXNGRAPH_CONFIG_HPP
#define RXNGRAPH_CONFIG_HPP

#include <charconv>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rxngraph/errors.hpp"
#include "rxngraph/gnn.hpp"

namespace rxngraph {

struct ConfigValue {
  std::string raw;  // trimmed, quotes stripped for strings
  bool was_string = false;

  double as_number(const std::string& key) const {
    try {
      std::size_t used = 0;
      const double v = std::stod(raw, &used);
      if (used != raw.size()) throw std::invalid_argument(raw);
      return v;
    } catch (const std::exception&) {
      throw InputError("config: key '" + key + "' is not a number: " + raw);
    }
  }
  long as_int(const std::string& key) const {
    const double v = as_number(key);
    const long n = static_cast<long>(v);
    if (static_cast<double>(n) != v)
      throw InputError("config: key '" + key + "' is not an integer: " + raw);
    return n;
  }
  bool as_bool(const std::string& key) const {
    if (raw == "true") return true;
    if (raw == "false") return false;
    throw InputError("config: key '" + key + "' is not a boolean: " + raw);
  }
  std::vector<int> as_int_list(const std::string& key) const {
    std::string s = raw;
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
      throw InputError("config: key '" + key + "' is not a list: " + raw);
    s = s.substr(1, s.size() - 2);
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto b = item.find_first_not_of(" \t");
      if (b == std::string::npos) continue;
      const auto e = item.find_last_not_of(" \t");
      try {
        out.push_back(std::stoi(item.substr(b, e - b + 1)));
      } catch (const std::exception&) {
        throw InputError("config: bad list entry in '" + key + "': " + item);
      }
    }
    return out;
  }
};

using ConfigMap = std::map<std::string, ConfigValue>;

inline ConfigMap parse_config_text(std::string_view text) {
  ConfigMap out;
  std::size_t line_no = 0, start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    ++line_no;
    // strip comments outside quotes
    bool in_quote = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_quote = !in_quote;
      if (line[i] == '#' && !in_quote) {
        line.resize(i);
        break;
      }
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (!line.empty()) {
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw InputError("config line " + std::to_string(line_no) + ": expected key = value");
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      if (key.empty() || value.empty())
        throw InputError("config line " + std::to_string(line_no) + ": empty key or value");
      ConfigValue cv;
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
        cv.raw = value.substr(1, value.size() - 2);
        cv.was_string = true;
      } else {
        cv.raw = value;
      }
      out[key] = cv;
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

inline ConfigMap load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

inline LayerKind layer_kind_from_string(const std::string& s) {
  if (s == "rgat") return LayerKind::Rgat;
  if (s == "rgcn") return LayerKind::Rgcn;
  throw InputError("config: unknown layer_kind '" + s + "'");
}

inline ReadoutKind readout_from_string(const std::string& s) {
  if (s == "concat") return ReadoutKind::Concat;
  if (s == "subtract") return ReadoutKind::Subtract;
  throw InputError("config: unknown readout '" + s + "'");
}

inline TaskKind task_from_string(const std::string& s) {
  if (s == "classify") return TaskKind::Classify;
  if (s == "regress") return TaskKind::Regress;
  if (s == "embed") return TaskKind::Embed;
  throw InputError("config: unknown task '" + s + "'");
}

inline const char* layer_kind_name(LayerKind k) {
  return k == LayerKind::Rgat ? "rgat" : "rgcn";
}
inline const char* readout_name(ReadoutKind k) {
  return k == ReadoutKind::Concat ? "concat" : "subtract";
}
inline const char* task_name(TaskKind t) {
  switch (t) {
    case TaskKind::Classify: return "classify";
    case TaskKind::Regress: return "regress";
    case TaskKind::Embed: return "embed";
  }
  return "?";
}

// Applies recognized keys onto a ModelConfig; unknown keys are errors.
inline void apply_config(ModelConfig& cfg, const ConfigMap& map) {
  for (const auto& [key, v] : map) {
    if (key == "layer_kind") cfg.layer_kind = layer_kind_from_string(v.raw);
    else if (key == "layers") cfg.layers = static_cast<int>(v.as_int(key));
    else if (key == "dim") cfg.dim = static_cast<int>(v.as_int(key));
    else if (key == "readout") cfg.readout = readout_from_string(v.raw);
    else if (key == "head_dims") cfg.head_dims = v.as_int_list(key);
    else if (key == "task") cfg.task = task_from_string(v.raw);
    else if (key == "classes") cfg.classes = static_cast<int>(v.as_int(key));
    else if (key == "share_relation_weights") cfg.share_relation_weights = v.as_bool(key);
    else if (key == "attention_heads") cfg.attention_heads = static_cast<int>(v.as_int(key));
    else if (key == "leaky_slope") cfg.leaky_slope = v.as_number(key);
    else if (key == "lr") cfg.lr = v.as_number(key);
    else if (key == "lr_decay") cfg.lr_decay = v.as_number(key);
    else if (key == "l2") cfg.l2 = v.as_number(key);
    else if (key == "epochs") cfg.epochs = static_cast<int>(v.as_int(key));
    else if (key == "batch_size") cfg.batch_size = static_cast<int>(v.as_int(key));
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(v.as_int(key));
    else throw InputError("config: unknown key '" + key + "'");
  }
}

}  // namespace rxngraph

#endif  // RXNGRAPH_CONFIG_HPP
