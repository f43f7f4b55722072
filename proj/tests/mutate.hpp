#pragma once

// Single-field certificate mutator used by the tamper tests.

#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "trisketch/certificate.hpp"
#include "trisketch/verifier.hpp"

namespace fx {

using nlohmann::json;

struct MutationStats {
  std::size_t applied = 0;      // mutations that changed canonical content
  std::size_t schema = 0;       // rejected while parsing
  std::size_t rejected = 0;     // rejected by the verifier
  std::size_t accepted = 0;     // tamper accepted: must stay zero
  std::size_t no_change = 0;
  std::string first_accepted;   // description of the first accepted tamper
};

inline void collect_leaves(json& j, std::vector<json*>& leaves, std::vector<json*>& arrays) {
  if (j.is_object()) {
    for (auto& [k, v] : j.items()) {
      if (k == "schema") continue;
      collect_leaves(v, leaves, arrays);
    }
  } else if (j.is_array()) {
    if (!j.empty()) arrays.push_back(&j);
    for (auto& v : j) collect_leaves(v, leaves, arrays);
  } else {
    leaves.push_back(&j);
  }
}

inline std::string mutate_string(const std::string& s, std::mt19937_64& rng) {
  if (s.empty()) return "0";
  std::string out = s;
  const bool decimal = s.find_first_not_of("0123456789") == std::string::npos;
  const bool bits = s == "-" || s.find_first_not_of("01") == std::string::npos;
  const bool hex = s.size() == 64 && s.find_first_not_of("0123456789abcdef") == std::string::npos;
  if (decimal && !bits) {
    unsigned long long v = std::stoull(s);
    switch (rng() % 3) {
      case 0: return std::to_string(v + 1);
      case 1: return std::to_string(v == 0 ? 1 : v - 1);
      default: return std::to_string(rng() % (v + 2));
    }
  }
  if (bits) {
    if (s == "-") return rng() & 1 ? "0" : "1";
    switch (rng() % 3) {
      case 0: {
        std::size_t k = rng() % s.size();
        out[k] = out[k] == '0' ? '1' : '0';
        return out;
      }
      case 1: return s.size() == 1 ? "-" : s.substr(0, s.size() - 1);
      default: return s + (rng() & 1 ? "1" : "0");
    }
  }
  if (hex) {
    std::size_t k = rng() % 64;
    static const char* digits = "0123456789abcdef";
    char c;
    do c = digits[rng() % 16];
    while (c == out[k]);
    out[k] = c;
    return out;
  }
  std::size_t k = rng() % s.size();
  out[k] = static_cast<char>(out[k] == 'a' ? 'b' : 'a');
  return out;
}

inline void mutate_leaf(json& leaf, std::mt19937_64& rng) {
  if (leaf.is_boolean()) {
    leaf = !leaf.get<bool>();
  } else if (leaf.is_number_unsigned()) {
    auto v = leaf.get<std::uint64_t>();
    switch (rng() % 3) {
      case 0: leaf = v + 1; break;
      case 1: leaf = v == 0 ? 1 : v - 1; break;
      default: leaf = rng() % (v + 3); break;
    }
  } else if (leaf.is_string()) {
    leaf = mutate_string(leaf.get<std::string>(), rng);
  } else if (leaf.is_null()) {
    leaf = rng() % 4;
  }
}

/// Applies `count` random single-field mutations to `cert` and verifies each
/// against `g`. One in eight mutations deletes or duplicates an array item.
inline MutationStats fuzz_certificate(const trisketch::OrientedGraph& g, const trisketch::Certificate& cert,
                                      std::size_t count, std::uint64_t seed) {
  using namespace trisketch;
  MutationStats st;
  const std::string original = serialize(cert);
  const json base = json::parse(original);
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < count; ++k) {
    json doc = base;
    std::vector<json*> leaves, arrays;
    collect_leaves(doc, leaves, arrays);
    if (rng() % 8 == 0 && !arrays.empty()) {
      json& arr = *arrays[rng() % arrays.size()];
      const std::size_t at = rng() % arr.size();
      if (rng() & 1) arr.erase(at);
      else arr.insert(arr.begin() + static_cast<std::ptrdiff_t>(at), arr[at]);
    } else {
      mutate_leaf(*leaves[rng() % leaves.size()], rng);
    }
    const std::string text = doc.dump(1) + "\n";
    if (text == original) {
      ++st.no_change;
      continue;
    }
    Certificate parsed;
    try {
      parsed = deserialize(text);
    } catch (const SchemaError&) {
      ++st.applied;
      ++st.schema;
      continue;
    }
    if (serialize(parsed) == original) {
      ++st.no_change;
      continue;
    }
    ++st.applied;
    const VerifyVerdict v = verify_no(g, parsed);
    if (v.accepted()) {
      ++st.accepted;
      if (st.first_accepted.empty()) st.first_accepted = describe(v) + " after mutation " + std::to_string(k);
    } else {
      ++st.rejected;
    }
  }
  return st;
}

}  // namespace fx
