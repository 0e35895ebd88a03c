// Copyright 2026 The Foresight Authors.
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

#include "fopo/config.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "fopo/check.h"

namespace fopo {

std::string FormatDouble(double v) {
  char buf[64];
  // max_digits10 == 17 round-trips every finite double.
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double ParseDouble(const std::string& s) {
  FOPO_CHECK(!s.empty());
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  FOPO_CHECK(end == s.c_str() + s.size());
  return v;
}

void KeyValueConfig::Set(const std::string& key, const std::string& value) {
  FOPO_CHECK(!key.empty());
  entries_[key] = value;
}

bool KeyValueConfig::Has(const std::string& key) const {
  return entries_.count(key) > 0;
}

const std::string& KeyValueConfig::Get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) FatalError("config key not found: " + key);
  return it->second;
}

KeyValueConfig KeyValueConfig::Parse(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // Trim trailing carriage return and surrounding whitespace.
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    size_t start = line.find_first_not_of(' ');
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    size_t eq = line.find('=', start);
    if (eq == std::string::npos) {
      FatalError("config line " + std::to_string(line_no) +
                 " is not key=value: " + line);
    }
    std::string key = line.substr(start, eq - start);
    while (!key.empty() && key.back() == ' ') key.pop_back();
    cfg.Set(key, line.substr(eq + 1));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::Load(const std::string& path) {
  return Parse(ReadFileOrDie(path));
}

std::string KeyValueConfig::Serialize() const {
  std::string out;
  for (const auto& [key, value] : entries_) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  return out;
}

void KeyValueConfig::Save(const std::string& path) const {
  WriteFileOrDie(path, Serialize());
}

namespace {

// Single description table driving both FromKeyValue and ToKeyValue, so the
// two cannot drift apart and unknown-key detection is complete.
struct FieldBinding {
  enum Kind { kString, kDouble, kInt, kUint64, kBool } kind;
  const char* key;
  void* ptr;
};

std::vector<FieldBinding> Bindings(RunSettings& s) {
  return {
      {FieldBinding::kString, "game", &s.game},
      {FieldBinding::kString, "algo", &s.algo},
      {FieldBinding::kUint64, "seed", &s.seed},
      {FieldBinding::kString, "out_dir", &s.out_dir},
      {FieldBinding::kInt, "workers", &s.workers},
      {FieldBinding::kBool, "hidden", &s.hidden},
      {FieldBinding::kInt, "hidden_dim", &s.hidden_dim},
      {FieldBinding::kDouble, "alpha", &s.alpha},
      {FieldBinding::kDouble, "pretrain_alpha", &s.pretrain_alpha},
      {FieldBinding::kDouble, "beta", &s.beta},
      {FieldBinding::kDouble, "pretrain_beta", &s.pretrain_beta},
      {FieldBinding::kDouble, "eta", &s.eta},
      {FieldBinding::kDouble, "clip_epsilon", &s.clip_epsilon},
      {FieldBinding::kInt, "group_size", &s.group_size},
      {FieldBinding::kInt, "batch_size", &s.batch_size},
      {FieldBinding::kInt, "pretrain_batch", &s.pretrain_batch},
      {FieldBinding::kInt, "epochs", &s.epochs},
      {FieldBinding::kDouble, "grad_norm_cap", &s.grad_norm_cap},
      {FieldBinding::kString, "foresight_direction", &s.foresight_direction},
      {FieldBinding::kString, "group_norm", &s.group_norm},
      {FieldBinding::kDouble, "reward_gamma", &s.reward_gamma},
      {FieldBinding::kDouble, "reward_epsilon", &s.reward_epsilon},
      {FieldBinding::kDouble, "decay_delta", &s.decay_delta},
      {FieldBinding::kString, "reward_turn_unit", &s.reward_turn_unit},
      {FieldBinding::kInt, "phases", &s.phases},
      {FieldBinding::kInt, "episodes_per_phase", &s.episodes_per_phase},
      {FieldBinding::kInt, "checkpoint_every", &s.checkpoint_every},
      {FieldBinding::kInt, "keep_last", &s.keep_last},
      {FieldBinding::kDouble, "entropy_floor", &s.entropy_floor},
      {FieldBinding::kBool, "halt_on_collapse", &s.halt_on_collapse},
      {FieldBinding::kInt, "pretrain_epochs", &s.pretrain_epochs},
      {FieldBinding::kInt, "pretrain_pairs", &s.pretrain_pairs},
      {FieldBinding::kInt, "rl_pairs", &s.rl_pairs},
      {FieldBinding::kInt, "pretrain_count", &s.pretrain_count},
      {FieldBinding::kInt, "rl_count", &s.rl_count},
      {FieldBinding::kInt, "min_features", &s.min_features},
      {FieldBinding::kInt, "max_features", &s.max_features},
      {FieldBinding::kInt, "min_objects", &s.min_objects},
      {FieldBinding::kInt, "max_objects", &s.max_objects},
      {FieldBinding::kInt, "taboo_words", &s.taboo_words},
      {FieldBinding::kInt, "taboo_cues", &s.taboo_cues},
      {FieldBinding::kInt, "taboo_max_turns", &s.taboo_max_turns},
      {FieldBinding::kInt, "taboo_top_k", &s.taboo_top_k},
      {FieldBinding::kDouble, "taboo_guess_threshold",
       &s.taboo_guess_threshold},
      {FieldBinding::kInt, "eval_episodes", &s.eval_episodes},
      {FieldBinding::kString, "instances", &s.instances},
      {FieldBinding::kString, "chains", &s.chains},
      {FieldBinding::kString, "init_checkpoint", &s.init_checkpoint},
      {FieldBinding::kString, "checkpoint", &s.checkpoint},
      {FieldBinding::kString, "checkpoint_dir", &s.checkpoint_dir},
  };
}

bool ParseBool(const std::string& v) {
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  FatalError("not a boolean config value: " + v);
}

int64_t ParseInt(const std::string& v) {
  int64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  FOPO_CHECK(ec == std::errc() && ptr == v.data() + v.size());
  return out;
}

uint64_t ParseUint64(const std::string& v) {
  uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  FOPO_CHECK(ec == std::errc() && ptr == v.data() + v.size());
  return out;
}

}  // namespace

RunSettings RunSettings::FromKeyValue(const KeyValueConfig& kv) {
  RunSettings s;
  auto bindings = Bindings(s);
  std::map<std::string, const FieldBinding*> by_key;
  for (const auto& b : bindings) by_key[b.key] = &b;
  for (const auto& [key, value] : kv.entries()) {
    if (key == "schema" || key == "command") continue;  // manifest tags
    auto it = by_key.find(key);
    if (it == by_key.end()) FatalError("unknown config key: " + key);
    const FieldBinding& b = *it->second;
    switch (b.kind) {
      case FieldBinding::kString:
        *static_cast<std::string*>(b.ptr) = value;
        break;
      case FieldBinding::kDouble:
        *static_cast<double*>(b.ptr) = ParseDouble(value);
        break;
      case FieldBinding::kInt:
        *static_cast<int*>(b.ptr) = static_cast<int>(ParseInt(value));
        break;
      case FieldBinding::kUint64:
        *static_cast<uint64_t*>(b.ptr) = ParseUint64(value);
        break;
      case FieldBinding::kBool:
        *static_cast<bool*>(b.ptr) = ParseBool(value);
        break;
    }
  }
  return s;
}

KeyValueConfig RunSettings::ToKeyValue() const {
  KeyValueConfig kv;
  kv.Set("schema", "fopo-run v1");
  // Bindings takes a mutable reference; serialization only reads.
  auto& self = const_cast<RunSettings&>(*this);
  for (const auto& b : Bindings(self)) {
    switch (b.kind) {
      case FieldBinding::kString:
        kv.Set(b.key, *static_cast<std::string*>(b.ptr));
        break;
      case FieldBinding::kDouble:
        kv.Set(b.key, FormatDouble(*static_cast<double*>(b.ptr)));
        break;
      case FieldBinding::kInt:
        kv.Set(b.key, std::to_string(*static_cast<int*>(b.ptr)));
        break;
      case FieldBinding::kUint64:
        kv.Set(b.key, std::to_string(*static_cast<uint64_t*>(b.ptr)));
        break;
      case FieldBinding::kBool:
        kv.Set(b.key, *static_cast<bool*>(b.ptr) ? "1" : "0");
        break;
    }
  }
  return kv;
}

std::string ReadFileOrDie(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) FatalError("cannot open file for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFileOrDie(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) FatalError("cannot open file for writing: " + path);
  out << contents;
  if (!out) FatalError("write failed: " + path);
}

std::vector<std::string> SplitString(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace fopo
