// Model file format: structured text, or JSON when the input starts with '{'.
#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <sstream>
#include <string>

#include "semantics.hpp"

namespace cn4k {

struct ModelFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParsedModel {
  Model model;
  std::optional<FrameClass> declared_class;
};

namespace detail {

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

// "(a,b)" -> pair of world names
inline std::pair<std::string, std::string> parse_pair_token(const std::string& tok) {
  if (tok.size() < 5 || tok.front() != '(' || tok.back() != ')')
    throw ModelFormatError("bad relation pair '" + tok + "', expected (a,b)");
  std::string inner = tok.substr(1, tok.size() - 2);
  size_t comma = inner.find(',');
  if (comma == std::string::npos)
    throw ModelFormatError("bad relation pair '" + tok + "', expected (a,b)");
  return {trim(inner.substr(0, comma)), trim(inner.substr(comma + 1))};
}

// Copies missing relations along the class equalities; complains if a needed
// source is missing too.
inline void apply_class_shorthand(std::optional<Rel>& bp, std::optional<Rel>& bn,
                                  std::optional<Rel>& dp, std::optional<Rel>& dn,
                                  FrameClass cls) {
  auto fill = [](std::optional<Rel>& dst, const std::optional<Rel>& src) {
    if (!dst && src) dst = *src;
  };
  switch (cls) {
    case FrameClass::General:
      break;
    case FrameClass::PM:
      fill(dp, bp);
      fill(bp, dp);
      fill(dn, bn);
      fill(bn, dn);
      break;
    case FrameClass::YV:
      fill(bn, bp);
      fill(bp, bn);
      fill(dn, dp);
      fill(dp, dn);
      break;
    case FrameClass::Join:
      fill(dn, bp);
      fill(bp, dn);
      fill(bn, dp);
      fill(dp, bn);
      break;
    case FrameClass::Mono: {
      std::optional<Rel> any = bp ? bp : bn ? bn : dp ? dp : dn;
      fill(bp, any);
      fill(bn, any);
      fill(dp, any);
      fill(dn, any);
      break;
    }
  }
}

inline ParsedModel parse_model_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(std::string("bad JSON: ") + e.what());
  }
  ParsedModel out;
  Frame& fr = out.model.frame;
  if (!j.contains("worlds") || !j["worlds"].is_array())
    throw ModelFormatError("missing 'worlds' array");
  for (const auto& w : j["worlds"]) fr.world_names.push_back(w.get<std::string>());
  int n = fr.n();
  if (n == 0) throw ModelFormatError("empty world list");
  if (n > kMaxWorlds) throw ModelFormatError("too many worlds");
  std::optional<FrameClass> cls;
  if (j.contains("class")) {
    cls = parse_frame_class(j["class"].get<std::string>());
    if (!cls) throw ModelFormatError("unknown class '" + j["class"].get<std::string>() + "'");
  }
  out.declared_class = cls;
  auto read_rel = [&](const char* key) -> std::optional<Rel> {
    if (!j.contains(key)) return std::nullopt;
    Rel r(n);
    for (const auto& pr : j[key]) {
      if (!pr.is_array() || pr.size() != 2)
        throw ModelFormatError(std::string(key) + ": expected [from, to] pairs");
      int a = fr.world_index(pr[0].get<std::string>());
      int b = fr.world_index(pr[1].get<std::string>());
      if (a < 0 || b < 0) throw ModelFormatError(std::string(key) + ": unknown world in pair");
      r.add(a, b);
    }
    return r;
  };
  std::optional<Rel> leq = read_rel("leq");
  if (!leq) throw ModelFormatError("missing 'leq'");
  std::optional<Rel> bp = read_rel("r_box_pos"), bn = read_rel("r_box_neg"),
                     dp = read_rel("r_dia_pos"), dn = read_rel("r_dia_neg");
  if (cls) apply_class_shorthand(bp, bn, dp, dn, *cls);
  if (!bp || !bn || !dp || !dn)
    throw ModelFormatError("missing accessibility relation (give all four or a class shorthand)");
  fr.leq = *leq;
  fr.r_box_pos = *bp;
  fr.r_box_neg = *bn;
  fr.r_dia_pos = *dp;
  fr.r_dia_neg = *dn;
  auto read_val = [&](const char* key, std::map<std::string, uint32_t>& dst) {
    if (!j.contains(key)) return;
    for (const auto& [var, worlds] : j[key].items()) {
      uint32_t mask = 0;
      for (const auto& w : worlds) {
        int i = fr.world_index(w.get<std::string>());
        if (i < 0) throw ModelFormatError(std::string(key) + ": unknown world for '" + var + "'");
        mask |= 1u << i;
      }
      dst[var] = mask;
    }
  };
  read_val("v_pos", out.model.v_pos);
  read_val("v_neg", out.model.v_neg);
  return out;
}

inline ParsedModel parse_model_text(const std::string& text) {
  ParsedModel out;
  Frame& fr = out.model.frame;
  std::optional<Rel> leq, bp, bn, dp, dn;
  std::optional<FrameClass> cls;
  struct PendingVal {
    bool pos;
    std::string var;
    std::vector<std::string> worlds;
  };
  std::vector<PendingVal> vals;
  std::vector<std::pair<std::string, std::string>> pending[5]; // leq, bp, bn, dp, dn
  bool seen[5] = {false, false, false, false, false};

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw ModelFormatError("line " + std::to_string(lineno) + ": expected 'key: value'");
    std::string key = trim(line.substr(0, colon));
    std::string value = trim(line.substr(colon + 1));
    if (key == "worlds") {
      for (const std::string& w : split_ws(value)) fr.world_names.push_back(w);
    } else if (key == "class") {
      cls = parse_frame_class(value);
      if (!cls) throw ModelFormatError("line " + std::to_string(lineno) + ": unknown class '" + value + "'");
    } else if (key == "leq" || key == "r_box_pos" || key == "r_box_neg" || key == "r_dia_pos" ||
               key == "r_dia_neg") {
      int slot = key == "leq" ? 0 : key == "r_box_pos" ? 1 : key == "r_box_neg" ? 2
                 : key == "r_dia_pos" ? 3 : 4;
      seen[slot] = true;
      for (const std::string& tok : split_ws(value)) pending[slot].push_back(parse_pair_token(tok));
    } else if (key.rfind("v_pos", 0) == 0 || key.rfind("v_neg", 0) == 0) {
      PendingVal pv;
      pv.pos = key[2] == 'p';
      pv.var = trim(key.substr(5));
      if (pv.var.empty())
        throw ModelFormatError("line " + std::to_string(lineno) + ": expected 'v_pos <var>: worlds'");
      pv.worlds = split_ws(value);
      vals.push_back(std::move(pv));
    } else {
      throw ModelFormatError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  int n = fr.n();
  if (n == 0) throw ModelFormatError("missing or empty 'worlds'");
  if (n > kMaxWorlds) throw ModelFormatError("too many worlds");
  auto build_rel = [&](int slot) -> std::optional<Rel> {
    if (!seen[slot]) return std::nullopt;
    Rel r(n);
    for (const auto& [a, b] : pending[slot]) {
      int ia = fr.world_index(a), ib = fr.world_index(b);
      if (ia < 0 || ib < 0) throw ModelFormatError("unknown world in pair (" + a + "," + b + ")");
      r.add(ia, ib);
    }
    return r;
  };
  leq = build_rel(0);
  bp = build_rel(1);
  bn = build_rel(2);
  dp = build_rel(3);
  dn = build_rel(4);
  if (!leq) throw ModelFormatError("missing 'leq'");
  out.declared_class = cls;
  if (cls) apply_class_shorthand(bp, bn, dp, dn, *cls);
  if (!bp || !bn || !dp || !dn)
    throw ModelFormatError("missing accessibility relation (give all four or a class shorthand)");
  fr.leq = *leq;
  fr.r_box_pos = *bp;
  fr.r_box_neg = *bn;
  fr.r_dia_pos = *dp;
  fr.r_dia_neg = *dn;
  for (const auto& pv : vals) {
    uint32_t mask = 0;
    for (const std::string& w : pv.worlds) {
      int i = fr.world_index(w);
      if (i < 0) throw ModelFormatError("unknown world '" + w + "' in valuation of '" + pv.var + "'");
      mask |= 1u << i;
    }
    (pv.pos ? out.model.v_pos : out.model.v_neg)[pv.var] = mask;
  }
  return out;
}

} // namespace detail

inline ParsedModel parse_model(const std::string& text) {
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    if (c == '{') return detail::parse_model_json(text);
    break;
  }
  return detail::parse_model_text(text);
}

inline std::string render_model(const Model& m) {
  std::ostringstream out;
  const Frame& fr = m.frame;
  out << "worlds:";
  for (const auto& w : fr.world_names) out << " " << w;
  out << "\n";
  auto rel_line = [&](const char* key, const Rel& r) {
    out << key << ":";
    for (auto [a, b] : r.pairs()) out << " (" << fr.world_names[a] << "," << fr.world_names[b] << ")";
    out << "\n";
  };
  rel_line("leq", fr.leq);
  rel_line("r_box_pos", fr.r_box_pos);
  rel_line("r_box_neg", fr.r_box_neg);
  rel_line("r_dia_pos", fr.r_dia_pos);
  rel_line("r_dia_neg", fr.r_dia_neg);
  auto val_lines = [&](const char* key, const std::map<std::string, uint32_t>& v) {
    for (const auto& [var, mask] : v) {
      out << key << " " << var << ":";
      for (int i = 0; i < fr.n(); ++i)
        if ((mask >> i) & 1u) out << " " << fr.world_names[i];
      out << "\n";
    }
  };
  val_lines("v_pos", m.v_pos);
  val_lines("v_neg", m.v_neg);
  return out.str();
}

inline nlohmann::json model_to_json(const Model& m) {
  const Frame& fr = m.frame;
  nlohmann::json j;
  j["worlds"] = fr.world_names;
  auto rel_json = [&](const Rel& r) {
    nlohmann::json arr = nlohmann::json::array();
    for (auto [a, b] : r.pairs())
      arr.push_back({fr.world_names[a], fr.world_names[b]});
    return arr;
  };
  j["leq"] = rel_json(fr.leq);
  j["r_box_pos"] = rel_json(fr.r_box_pos);
  j["r_box_neg"] = rel_json(fr.r_box_neg);
  j["r_dia_pos"] = rel_json(fr.r_dia_pos);
  j["r_dia_neg"] = rel_json(fr.r_dia_neg);
  auto val_json = [&](const std::map<std::string, uint32_t>& v) {
    nlohmann::json obj = nlohmann::json::object();
    for (const auto& [var, mask] : v) {
      nlohmann::json arr = nlohmann::json::array();
      for (int i = 0; i < fr.n(); ++i)
        if ((mask >> i) & 1u) arr.push_back(fr.world_names[i]);
      obj[var] = arr;
    }
    return obj;
  };
  j["v_pos"] = val_json(m.v_pos);
  j["v_neg"] = val_json(m.v_neg);
  return j;
}

} // namespace cn4k
