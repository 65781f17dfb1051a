#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "orbdiam/diameter.hpp"
#include "orbdiam/errors.hpp"
#include "orbdiam/group.hpp"
#include "orbdiam/witness.hpp"

namespace orbdiam {

using Json = nlohmann::ordered_json;

enum class ExitCode : int {
  success = 0,
  usage = 1,
  parse_error = 2,
  cap_exceeded = 3,
  reducible = 4,
  not_applicable = 5,
  theorem_violation = 6,
  budget_exceeded = 7,
  no_solution = 8,
};

// Instance file: { "label": str, "p": int, "d": int, "generators": [[[..]..]..] }
// Entries must already be reduced into [0, p).
inline AffineInstance parse_instance(const Json& doc) {
  try {
    if (!doc.is_object()) throw ParseError("instance must be a JSON object");
    AffineInstance inst;
    inst.label = doc.value("label", std::string{});
    const auto p = doc.at("p").get<std::int64_t>();
    const auto d = doc.at("d").get<std::int64_t>();
    if (p < 2 || p > kMaxPrime || !is_prime(static_cast<std::uint64_t>(p))) {
      throw ParseError("p=" + std::to_string(p) + " is not a supported prime");
    }
    if (d < 1 || d > 64) throw ParseError("d=" + std::to_string(d) + " out of range");
    inst.p = static_cast<std::uint32_t>(p);
    inst.d = static_cast<std::size_t>(d);
    try {
      VectorSpace probe(inst.p, inst.d);
    } catch (const CapExceeded& e) {
      throw ParseError(std::string("instance too large: ") + e.what());
    }
    const auto& gens = doc.at("generators");
    if (!gens.is_array() || gens.empty()) throw ParseError("generators must be a nonempty array");
    for (const auto& g : gens) {
      if (!g.is_array() || g.size() != inst.d) throw ParseError("each generator must have d rows");
      std::vector<Residue> entries;
      for (const auto& row : g) {
        if (!row.is_array() || row.size() != inst.d) throw ParseError("each generator row must have d entries");
        for (const auto& x : row) {
          const auto v = x.get<std::int64_t>();
          if (v < 0 || v >= p) throw ParseError("matrix entry " + std::to_string(v) + " outside [0, p)");
          entries.push_back(static_cast<Residue>(v));
        }
      }
      inst.generators.emplace_back(inst.p, inst.d, std::move(entries));
    }
    inst.validate();
    return inst;
  } catch (const ParseError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed instance: ") + e.what());
  } catch (const Error& e) {
    throw ParseError(std::string("invalid instance: ") + e.what());
  }
}

inline AffineInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
  return parse_instance(doc);
}

inline Json matrix_json(const FpMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) rows.push_back(m.row(i).coords());
  return rows;
}

inline Json instance_json(const AffineInstance& inst) {
  Json gens = Json::array();
  for (const auto& g : inst.generators) gens.push_back(matrix_json(g));
  return Json{{"label", inst.label}, {"p", inst.p}, {"d", inst.d}, {"generators", std::move(gens)}};
}

inline Json diameter_json(const DiameterReport& r, const VectorSpace& space) {
  Json orbits = Json::array();
  for (const auto& row : r.per_orbit) {
    Json o{{"id", row.orbit_id},
           {"representative", space.decode(row.representative)},
           {"size", row.size},
           {"directed_diameter", row.directed}};
    if (row.undirected) o["undirected_diameter"] = *row.undirected;
    orbits.push_back(std::move(o));
  }
  Json out{{"method", to_string(r.method)},
           {"zero_orbit", Json{{"size", 1}, {"excluded", true}}},
           {"orbit_count", r.per_orbit.size()},
           {"orbits", std::move(orbits)},
           {"overall_directed_diameter", r.overall_directed}};
  if (r.overall_undirected) out["overall_undirected_diameter"] = *r.overall_undirected;
  out["trivial_bound"] = trivial_diameter_bound(r.p, r.d);
  return out;
}

inline Json witness_json(const DecompositionWitness& w, const VectorSpace& space, std::uint64_t bound) {
  Json summands = Json::array();
  for (auto s : w.summands) summands.push_back(space.decode(s));
  return Json{{"target", w.target.coords()},
              {"orbit", w.orbit_id},
              {"branch", to_string(w.branch)},
              {"summands", std::move(summands)},
              {"length", w.length()},
              {"bound", bound},
              {"verified", w.verified}};
}

inline Json certification_json(const CertificationReport& r, const VectorSpace& space, const CertifyOptions& opt) {
  Json per_orbit = Json::array();
  for (const auto& row : r.per_orbit) {
    per_orbit.push_back(Json{{"id", row.orbit_id},
                             {"targets_checked", row.targets_checked},
                             {"max_witness_length", row.max_length}});
  }
  Json out{{"status", "verified"},
           {"branch", to_string(r.branch)},
           {"element", matrix_json(r.element)},
           {"k", r.k},
           {"m", r.m ? Json(*r.m) : Json(nullptr)},
           {"bound", r.bound},
           {"branch_bound", r.branch_bound},
           {"targets", r.exhaustive ? "all" : "sample"},
           {"targets_per_orbit", r.targets_per_orbit}};
  if (!r.exhaustive) out["seed"] = opt.seed;
  out["max_witness_length"] = r.max_length;
  out["verified"] = r.verified;
  out["per_orbit"] = std::move(per_orbit);
  if (r.longest) out["longest_witness"] = witness_json(*r.longest, space, r.bound);
  return out;
}

inline Json not_applicable_json(const std::string& reason) {
  return Json{{"status", "not_applicable"}, {"reason", reason}, {"verified", false}};
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace orbdiam
