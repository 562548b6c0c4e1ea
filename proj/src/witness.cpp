#include "ramsey/jsonio.hpp"

#include <sstream>

namespace ramsey {

nlohmann::json int_to_json(const Int& v) {
  if (fits_i64(v)) return to_i64(v);
  return v.str();
}

Int int_from_json(const nlohmann::json& j) {
  if (j.is_string()) return Int(j.get<std::string>());
  return Int(j.get<std::int64_t>());
}

nlohmann::json witness_to_json(const Witness& w) {
  nlohmann::json j;
  j["a"] = int_to_json(w.a);
  if (w.beta) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::uint32_t e : w.beta->elems()) arr.push_back(e);
    j["beta"] = arr;
  }
  if (w.d) j["d"] = int_to_json(*w.d);
  nlohmann::json audit = nlohmann::json::array();
  for (const AuditEntry& e : w.audit) {
    nlohmann::json je;
    je["poly"] = e.poly_id;
    je["frag"] = e.frag_id;
    je["point"] = int_to_json(e.point);
    je["value"] = int_to_json(e.value);
    audit.push_back(je);
  }
  j["audit"] = audit;
  j["verified"] = w.verified;
  return j;
}

Witness witness_from_json(const nlohmann::json& j) {
  Witness w;
  w.a = int_from_json(j.at("a"));
  if (j.contains("beta")) {
    std::vector<std::uint32_t> elems;
    for (const auto& e : j.at("beta")) elems.push_back(e.get<std::uint32_t>());
    w.beta = FinSet(elems);
  }
  if (j.contains("d")) w.d = int_from_json(j.at("d"));
  if (j.contains("audit")) {
    for (const auto& je : j.at("audit")) {
      AuditEntry e;
      e.poly_id = je.at("poly").get<int>();
      e.frag_id = je.at("frag").get<int>();
      e.point = int_from_json(je.at("point"));
      e.value = int_from_json(je.at("value"));
      w.audit.push_back(std::move(e));
    }
  }
  w.verified = j.value("verified", false);
  return w;
}

std::string params_digest(const std::string& canonical) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

std::string record_line(const std::string& op, const std::string& digest,
                        nlohmann::json payload, double elapsed_ms, bool stable) {
  nlohmann::json j;
  j["op"] = op;
  j["params"] = digest;
  for (auto& [key, value] : payload.items()) j[key] = value;
  j["elapsed_ms"] = stable ? 0.0 : elapsed_ms;
  return j.dump();
}

}  // namespace ramsey
