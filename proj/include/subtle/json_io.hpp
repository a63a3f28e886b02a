#pragma once

// JSON encodings of library values. Uses the vendored nlohmann/json.

#include "json.hpp"

#include "subtle/formsf2.hpp"
#include "subtle/hilbert.hpp"
#include "subtle/spaces.hpp"

namespace subtle {

/// {"p": .., "q": ..}
inline nlohmann::json to_json(Bidegree d) { return {{"p", d.p}, {"q", d.q}}; }

/// {"numerator": [[coeff, p, q]...], "denominator": [[p, q]...]}
inline nlohmann::json to_json(const HilbertSeries& hs) {
  nlohmann::json num = nlohmann::json::array();
  for (auto [k, c] : hs.numerator().coefficients()) num.push_back({c, k.first, k.second});
  nlohmann::json den = nlohmann::json::array();
  for (auto d : hs.denominator()) den.push_back({d.p, d.q});
  return {{"numerator", num}, {"denominator", den}};
}

/// [[dim, p, q]...], sorted by (p, q).
inline nlohmann::json to_json(const std::vector<HilbertSeries::Entry>& expansion) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : expansion) out.push_back({e.dim, e.p, e.q});
  return out;
}

inline nlohmann::json to_json(const Presentation& pres) {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : pres.ring.generators())
    gens.push_back({{"name", g.name}, {"p", g.degree.p}, {"q", g.degree.q}});
  nlohmann::json rels = nlohmann::json::array();
  for (const auto& r : pres.relations.elements()) rels.push_back(to_string(r));
  nlohmann::json out{{"family", std::string(to_string(pres.family))},
                     {"generators", gens},
                     {"relations", rels}};
  out["n"] = pres.n ? nlohmann::json(*pres.n) : nlohmann::json(nullptr);
  out["k"] = pres.k ? nlohmann::json(*pres.k) : nlohmann::json(nullptr);
  return out;
}

/// Rows of 0/1.
inline nlohmann::json to_json(const BilinearFormF2& b) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : b.rows()) {
    nlohmann::json r = nlohmann::json::array();
    for (auto v : row) r.push_back(static_cast<int>(v));
    out.push_back(std::move(r));
  }
  return out;
}

inline nlohmann::json to_json(const Subspace& w) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : w.basis()) out.push_back(v);
  return out;
}

}  // namespace subtle
