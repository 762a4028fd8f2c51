// Proof certificate JSON: a tree of nodes carrying sequent, rule name,
// principal occurrence, and children.
#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

#include "sequent.hpp"

namespace cn4k {

struct CertificateFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParsedCertificate {
  ProofTree root;
  std::optional<LogicId> logic;
};

namespace detail {

inline ProofTree node_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw CertificateFormatError(where + ": node must be an object");
  ProofTree t;
  if (!j.contains("sequent") || !j["sequent"].is_object())
    throw CertificateFormatError(where + ": missing sequent object");
  const nlohmann::json& js = j["sequent"];
  if (!js.contains("antecedent") || !js["antecedent"].is_array())
    throw CertificateFormatError(where + ": sequent needs an antecedent array");
  if (!js.contains("succedent") || !js["succedent"].is_string())
    throw CertificateFormatError(where + ": sequent needs a succedent string");
  try {
    for (const nlohmann::json& a : js["antecedent"]) {
      if (!a.is_string()) throw CertificateFormatError(where + ": antecedent entries are strings");
      t.seq.antecedent.push_back(parse(a.get<std::string>()));
    }
    t.seq.succedent = parse(js["succedent"].get<std::string>());
  } catch (const ParseError& e) {
    throw CertificateFormatError(where + ": " + e.what());
  }
  if (!j.contains("rule") || !j["rule"].is_string())
    throw CertificateFormatError(where + ": missing rule name");
  auto r = parse_rule(j["rule"].get<std::string>());
  if (!r) throw CertificateFormatError(where + ": unknown rule '" +
                                       j["rule"].get<std::string>() + "'");
  t.rule = *r;
  if (j.contains("principal") && !j["principal"].is_null()) {
    const nlohmann::json& jp = j["principal"];
    if (jp.is_number_integer()) {
      t.principal = jp.get<int>();
      if (t.principal < -1 || t.principal >= static_cast<int>(t.seq.antecedent.size()))
        throw CertificateFormatError(where + ": principal index out of range");
    } else if (jp.is_string()) {
      Fml f;
      try {
        f = parse(jp.get<std::string>());
      } catch (const ParseError& e) {
        throw CertificateFormatError(where + ": principal: " + e.what());
      }
      t.principal = index_of(t.seq.antecedent, f);
      if (t.principal < 0)
        throw CertificateFormatError(where + ": principal formula " + render(f) +
                                     " not in antecedent");
    } else {
      throw CertificateFormatError(where + ": principal must be an index or a formula string");
    }
  }
  if (j.contains("children")) {
    if (!j["children"].is_array())
      throw CertificateFormatError(where + ": children must be an array");
    int i = 0;
    for (const nlohmann::json& c : j["children"]) {
      t.children.push_back(node_from_json(c, where + "." + std::to_string(i)));
      ++i;
    }
  }
  return t;
}

inline nlohmann::json node_to_json(const ProofTree& t) {
  nlohmann::json j;
  nlohmann::json ante = nlohmann::json::array();
  for (Fml f : t.seq.antecedent) ante.push_back(render(f));
  j["sequent"] = {{"antecedent", std::move(ante)}, {"succedent", render(t.seq.succedent)}};
  j["rule"] = rule_name(t.rule);
  if (t.principal >= 0) j["principal"] = t.principal;
  nlohmann::json kids = nlohmann::json::array();
  for (const ProofTree& c : t.children) kids.push_back(node_to_json(c));
  j["children"] = std::move(kids);
  return j;
}

} // namespace detail

// Accepts either a bare node object or {"logic": ..., "root": node}.
inline ParsedCertificate parse_certificate(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw CertificateFormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw CertificateFormatError("certificate must be a JSON object");
  ParsedCertificate out;
  const nlohmann::json* root = &j;
  if (j.contains("root")) {
    root = &j["root"];
    if (j.contains("logic")) {
      if (!j["logic"].is_string())
        throw CertificateFormatError("logic must be a string");
      auto l = parse_logic(j["logic"].get<std::string>());
      if (!l) throw CertificateFormatError("unknown logic '" + j["logic"].get<std::string>() + "'");
      out.logic = *l;
    }
  }
  out.root = detail::node_from_json(*root, "root");
  return out;
}

inline nlohmann::json certificate_to_json(const ProofTree& t,
                                          std::optional<LogicId> logic = std::nullopt) {
  nlohmann::json j;
  if (logic) j["logic"] = logic_name(*logic);
  j["root"] = detail::node_to_json(t);
  return j;
}

inline std::string render_certificate(const ProofTree& t,
                                      std::optional<LogicId> logic = std::nullopt) {
  return certificate_to_json(t, logic).dump(2) + "\n";
}

} // namespace cn4k
