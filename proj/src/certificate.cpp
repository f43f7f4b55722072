#include "trisketch/certificate.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "json.hpp"

namespace trisketch {

using json = nlohmann::json;

namespace {

std::string dec(FieldElement f) { return std::to_string(f.value); }

json triple_json(const SparseTriple& t) { return json::array({dec(t.a), dec(t.b), dec(t.c)}); }

json arc_json(const Arc& a) { return json::array({a.from, a.to}); }

json witness_json(const Witness& w) { return {{"arc", arc_json(w.arc)}, {"slot", w.slot}}; }

json key_json(const ShouldCheckKey& k) {
  return {{"layer", k.layer}, {"anchor", k.anchor}, {"prefix", k.prefix.to_string()}, {"group", k.group},
          {"beta", k.beta}};
}

json params_json(const Params& p) {
  auto opt = [](const std::optional<std::uint32_t>& v) { return v ? json(*v) : json(nullptr); };
  return {{"n", p.n},          {"c_M", p.c_M},         {"c_B", p.c_B},
          {"c_T", p.c_T},      {"c_R", p.c_R},         {"c_G", p.c_G},
          {"c_k", p.c_k},      {"kappa", p.kappa},     {"C0", p.C0},
          {"prime", std::to_string(p.prime)},          {"coin_mode", std::string(to_string(p.coin_mode))},
          {"layers", opt(p.layers)},                   {"groups", opt(p.groups)},
          {"buckets", opt(p.buckets)},                 {"keep_log2", opt(p.keep_log2)},
          {"class_gate", p.class_gate},                {"preset", p.preset}};
}

json seeds_json(const SeedsRecord& s) {
  return {{"master_seed", master_seed_hex(s.master_seed)},
          {"prf", s.prf},
          {"scan_order", s.scan_order},
          {"params", params_json(s.params)}};
}

/// Strict reader: every access carries its field path into SchemaError.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& what) const { throw SchemaError(path_, what); }

  Reader field(const char* name) const {
    if (!j_.is_object()) fail("expected object");
    auto it = j_.find(name);
    if (it == j_.end()) throw SchemaError(join(name), "missing field");
    return Reader(*it, join(name));
  }
  Reader at(std::size_t k) const { return Reader(j_.at(k), path_ + "[" + std::to_string(k) + "]"); }

  void expect_keys(std::initializer_list<const char*> names) const {
    if (!j_.is_object()) fail("expected object");
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (std::none_of(names.begin(), names.end(), [&](const char* n) { return it.key() == n; }))
        throw SchemaError(join(it.key().c_str()), "unknown field");
    }
    for (const char* n : names)
      if (!j_.contains(n)) throw SchemaError(join(n), "missing field");
  }
  std::size_t array_size(std::optional<std::size_t> exact = std::nullopt) const {
    if (!j_.is_array()) fail("expected array");
    if (exact && j_.size() != *exact) fail("expected array of length " + std::to_string(*exact));
    return j_.size();
  }
  std::uint64_t u64(std::uint64_t max = ~std::uint64_t{0}) const {
    if (!j_.is_number_unsigned()) fail("expected unsigned integer");
    auto v = j_.get<std::uint64_t>();
    if (v > max) fail("value out of range");
    return v;
  }
  std::uint32_t u32() const { return static_cast<std::uint32_t>(u64(0xffffffffu)); }
  bool boolean() const {
    if (!j_.is_boolean()) fail("expected boolean");
    return j_.get<bool>();
  }
  std::string str() const {
    if (!j_.is_string()) fail("expected string");
    return j_.get<std::string>();
  }
  /// Canonical decimal string (no sign, no leading zeros).
  std::uint64_t decimal(std::uint64_t bound) const {
    std::string s = str();
    if (s.empty() || (s.size() > 1 && s[0] == '0')) fail("non-canonical decimal");
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) fail("expected decimal string");
    if (v >= bound) fail("value not reduced modulo P");
    return v;
  }
  std::optional<std::uint32_t> opt_u32() const {
    if (j_.is_null()) return std::nullopt;
    return u32();
  }
  const std::string& path() const { return path_; }

 private:
  std::string join(const char* name) const { return path_.empty() ? name : path_ + "." + name; }
  const json& j_;
  std::string path_;
};

Params read_params(const Reader& r) {
  r.expect_keys({"n", "c_M", "c_B", "c_T", "c_R", "c_G", "c_k", "kappa", "C0", "prime", "coin_mode", "layers",
                 "groups", "buckets", "keep_log2", "class_gate", "preset"});
  Params p;
  p.n = r.field("n").u64();
  p.c_M = r.field("c_M").u32();
  p.c_B = r.field("c_B").u32();
  p.c_T = r.field("c_T").u32();
  p.c_R = r.field("c_R").u32();
  p.c_G = r.field("c_G").u32();
  p.c_k = r.field("c_k").u32();
  p.kappa = r.field("kappa").u32();
  p.C0 = r.field("C0").u32();
  p.prime = r.field("prime").decimal(std::uint64_t{1} << 63);
  try {
    p.coin_mode = coin_mode_from_string(r.field("coin_mode").str());
  } catch (const ParamError& e) {
    r.field("coin_mode").fail(e.what());
  }
  p.layers = r.field("layers").opt_u32();
  p.groups = r.field("groups").opt_u32();
  p.buckets = r.field("buckets").opt_u32();
  p.keep_log2 = r.field("keep_log2").opt_u32();
  p.class_gate = r.field("class_gate").boolean();
  p.preset = r.field("preset").str();
  if (p.preset != "full" && p.preset != "reduced") r.field("preset").fail("unknown preset");
  try {
    p.validate();
  } catch (const std::exception& e) {
    r.fail(e.what());
  }
  return p;
}

SeedsRecord read_seeds(const Reader& r) {
  r.expect_keys({"master_seed", "prf", "scan_order", "params"});
  SeedsRecord s;
  std::string hex = r.field("master_seed").str();
  if (hex.size() != 64 || hex.find_first_not_of("0123456789abcdef") != std::string::npos)
    r.field("master_seed").fail("expected 64 lowercase hex digits");
  s.master_seed = parse_master_seed(hex);
  s.prf = r.field("prf").str();
  if (s.prf != kPrfName) r.field("prf").fail("unsupported PRF");
  s.scan_order = r.field("scan_order").str();
  if (s.scan_order != kScanOrder) r.field("scan_order").fail("unsupported scan order");
  s.params = read_params(r.field("params"));
  return s;
}

SparseTriple read_triple(const Reader& r, std::uint64_t P) {
  r.array_size(3);
  return {FieldElement{r.at(0).decimal(P)}, FieldElement{r.at(1).decimal(P)}, FieldElement{r.at(2).decimal(P)}};
}

Arc read_arc(const Reader& r, std::uint64_t n) {
  r.array_size(2);
  Arc a{static_cast<Vertex>(r.at(0).u64(n - 1)), static_cast<Vertex>(r.at(1).u64(n - 1))};
  return a;
}

Witness read_witness(const Reader& r, std::uint64_t n, std::uint32_t group) {
  r.expect_keys({"arc", "slot"});
  return {read_arc(r.field("arc"), n), r.field("slot").u64(), group};
}

Prefix read_prefix(const Reader& r) {
  try {
    return Prefix::from_string(r.str());
  } catch (const std::invalid_argument&) {
    r.fail("expected prefix bitstring or \"-\"");
  }
}

ShouldCheckKey read_key(const Reader& r, std::uint64_t n) {
  r.expect_keys({"layer", "anchor", "prefix", "group", "beta"});
  return {r.field("layer").u32(), static_cast<Vertex>(r.field("anchor").u64(n - 1)), read_prefix(r.field("prefix")),
          r.field("group").u32(), r.field("beta").u32()};
}

}  // namespace

std::string to_string(const ShouldCheckKey& k) {
  std::ostringstream os;
  os << "(i=" << k.layer << ",x=" << k.anchor << ",r=" << k.prefix.length << ",b=" << k.prefix.to_string()
     << ",t=" << k.group << ",beta=" << k.beta << ")";
  return os.str();
}

Certificate emit_certificate(const SketchState& state, const QueryResult& result, const SeedBundle& s) {
  if (!(state.seeds() == s.record())) throw TraceMismatch("sketch and seeds disagree");
  const PrimeField& F = s.field();
  Certificate cert;
  cert.seeds = s.record();

  std::set<std::tuple<std::uint32_t, Vertex, std::uint64_t>> referenced;
  for (const auto& [key, cls] : state.classes()) {
    ClassLogEntry entry{key, cls.sigma, F.one_sparse_test(cls.sigma).has_value(), {}};
    // Group-major, registration order within a group (the query's order).
    std::vector<CollisionEntry> ordered(cls.collisions.begin(), cls.collisions.end());
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const CollisionEntry& a, const CollisionEntry& b) { return a.group < b.group; });
    for (const auto& c : ordered) {
      entry.collisions.push_back({c.group, c.j, c.j_star, c.wit_v, c.wit_w, true});
      referenced.insert({key.layer, key.anchor, c.wit_v.slot});
      referenced.insert({key.layer, key.anchor, c.wit_w.slot});
    }
    cert.class_logs.push_back(std::move(entry));
  }

  for (const auto& [layer, anchor, sidx] : referenced) {
    SparseTriple t = state.slot(layer, anchor, sidx);
    auto decoded = F.one_sparse_test(t);
    cert.slot_logs.push_back({layer, anchor, sidx, t, decoded.has_value(), decoded.value_or(FieldElement{})});
  }

  for (const TraceEntry& te : result.trace) {
    const ClassState* cls = state.find_class(te.key);
    if (!cls || std::find(cls->collisions.begin(), cls->collisions.end(), te.collision) == cls->collisions.end())
      throw TraceMismatch("trace entry does not match a registered collision");
    if (!te.reached_adjacency()) continue;
    const auto& c = te.collision;
    ShouldCheckKey key{te.key.layer, te.key.anchor, te.key.prefix, c.group, std::min(c.j, c.j_star)};
    cert.adj_logs.push_back({key, s.id_hash(c.wit_v.arc.to), s.id_hash(c.wit_w.arc.to), c.wit_v.arc, c.wit_w.arc,
                             te.verdict == GateVerdict::Confirmed});
  }
  std::sort(cert.adj_logs.begin(), cert.adj_logs.end(),
            [](const AdjLogEntry& a, const AdjLogEntry& b) { return a.key < b.key; });

  if (result.outcome) {
    const auto& tri = *result.outcome;
    bool confirmed_in_trace = std::any_of(result.trace.begin(), result.trace.end(), [&](const TraceEntry& te) {
      return te.verdict == GateVerdict::Confirmed && te.key.anchor == tri.x() && te.collision.wit_v.arc.to == tri.v() &&
             te.collision.wit_w.arc.to == tri.w();
    });
    if (!confirmed_in_trace) throw TraceMismatch("outcome triangle not confirmed by the trace");
    cert.outcome = TriangleClaim{tri.x(), tri.v(), tri.w()};
  }
  return cert;
}

std::string serialize_seeds(const SeedsRecord& s) { return seeds_json(s).dump(1) + "\n"; }

std::string serialize(const Certificate& c) {
  json j;
  j["schema"] = std::string(kCertSchema);
  j["seeds"] = seeds_json(c.seeds);

  json classes = json::array();
  for (const auto& e : c.class_logs) {
    json colls = json::array();
    for (const auto& r : e.collisions) {
      colls.push_back({{"group", r.group},
                       {"j", r.j},
                       {"j_star", r.j_star},
                       {"wit_v", witness_json(r.wit_v)},
                       {"wit_w", witness_json(r.wit_w)},
                       {"paired_once", r.paired_once}});
    }
    classes.push_back({{"layer", e.key.layer},
                       {"anchor", e.key.anchor},
                       {"prefix", e.key.prefix.to_string()},
                       {"sigma", triple_json(e.sigma)},
                       {"pass_class", e.pass_class},
                       {"collisions", std::move(colls)}});
  }
  j["class_logs"] = std::move(classes);

  json slots = json::array();
  for (const auto& e : c.slot_logs) {
    slots.push_back({{"layer", e.layer},
                     {"anchor", e.anchor},
                     {"slot", e.slot},
                     {"triple", triple_json(e.triple)},
                     {"pass_slot", e.pass_slot},
                     {"decoded", dec(e.decoded)}});
  }
  j["slot_logs"] = std::move(slots);

  json adj = json::array();
  for (const auto& e : c.adj_logs) {
    adj.push_back({{"key", key_json(e.key)},
                   {"fingerprint_v", dec(e.fingerprint_v)},
                   {"fingerprint_w", dec(e.fingerprint_w)},
                   {"arc_v", arc_json(e.arc_v)},
                   {"arc_w", arc_json(e.arc_w)},
                   {"adjacent", e.adjacent}});
  }
  j["adj_logs"] = std::move(adj);

  if (c.outcome) {
    j["outcome"] = {{"result", "YES"}, {"triangle", json::array({c.outcome->x, c.outcome->v, c.outcome->w})}};
  } else {
    j["outcome"] = {{"result", "NO"}};
  }
  return j.dump(1) + "\n";
}

Certificate deserialize(std::string_view bytes) {
  json j;
  try {
    j = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("not valid JSON: ") + e.what());
  }
  Reader root(j, "");
  if (!j.is_object()) root.fail("expected object");
  std::string schema = root.field("schema").str();
  if (schema != kCertSchema) root.field("schema").fail("unsupported schema version \"" + schema + "\"");
  root.expect_keys({"schema", "seeds", "class_logs", "slot_logs", "adj_logs", "outcome"});

  Certificate c;
  c.seeds = read_seeds(root.field("seeds"));
  const std::uint64_t n = c.seeds.params.n;
  const std::uint64_t P = c.seeds.params.prime;

  Reader classes = root.field("class_logs");
  for (std::size_t k = 0, sz = classes.array_size(); k < sz; ++k) {
    Reader e = classes.at(k);
    e.expect_keys({"layer", "anchor", "prefix", "sigma", "pass_class", "collisions"});
    ClassLogEntry entry;
    entry.key = {e.field("layer").u32(), static_cast<Vertex>(e.field("anchor").u64(n - 1)),
                 read_prefix(e.field("prefix"))};
    entry.sigma = read_triple(e.field("sigma"), P);
    entry.pass_class = e.field("pass_class").boolean();
    Reader colls = e.field("collisions");
    for (std::size_t q = 0, cs = colls.array_size(); q < cs; ++q) {
      Reader r = colls.at(q);
      r.expect_keys({"group", "j", "j_star", "wit_v", "wit_w", "paired_once"});
      CollisionRecord rec;
      rec.group = r.field("group").u32();
      rec.j = r.field("j").u32();
      rec.j_star = r.field("j_star").u32();
      rec.wit_v = read_witness(r.field("wit_v"), n, rec.group);
      rec.wit_w = read_witness(r.field("wit_w"), n, rec.group);
      rec.paired_once = r.field("paired_once").boolean();
      entry.collisions.push_back(rec);
    }
    if (!c.class_logs.empty() && !ClassOrder{}(c.class_logs.back().key, entry.key))
      e.fail("class logs not in canonical order or duplicated");
    c.class_logs.push_back(std::move(entry));
  }

  Reader slots = root.field("slot_logs");
  for (std::size_t k = 0, sz = slots.array_size(); k < sz; ++k) {
    Reader e = slots.at(k);
    e.expect_keys({"layer", "anchor", "slot", "triple", "pass_slot", "decoded"});
    SlotLogEntry s{e.field("layer").u32(), static_cast<Vertex>(e.field("anchor").u64(n - 1)),
                   e.field("slot").u64(),  read_triple(e.field("triple"), P),
                   e.field("pass_slot").boolean(), FieldElement{e.field("decoded").decimal(P)}};
    if (!c.slot_logs.empty()) {
      const auto& prev = c.slot_logs.back();
      if (std::tie(prev.layer, prev.anchor, prev.slot) >= std::tie(s.layer, s.anchor, s.slot))
        e.fail("slot logs not in canonical order or duplicated");
    }
    c.slot_logs.push_back(s);
  }

  Reader adj = root.field("adj_logs");
  for (std::size_t k = 0, sz = adj.array_size(); k < sz; ++k) {
    Reader e = adj.at(k);
    e.expect_keys({"key", "fingerprint_v", "fingerprint_w", "arc_v", "arc_w", "adjacent"});
    AdjLogEntry a{read_key(e.field("key"), n),
                  FieldElement{e.field("fingerprint_v").decimal(P)},
                  FieldElement{e.field("fingerprint_w").decimal(P)},
                  read_arc(e.field("arc_v"), n),
                  read_arc(e.field("arc_w"), n),
                  e.field("adjacent").boolean()};
    if (!c.adj_logs.empty() && !(c.adj_logs.back().key < a.key))
      e.fail("adjacency logs not in canonical order or duplicated");
    c.adj_logs.push_back(a);
  }

  Reader out = root.field("outcome");
  std::string verdict = out.field("result").str();
  if (verdict == "NO") {
    out.expect_keys({"result"});
  } else if (verdict == "YES") {
    out.expect_keys({"result", "triangle"});
    Reader t = out.field("triangle");
    t.array_size(3);
    c.outcome = TriangleClaim{static_cast<Vertex>(t.at(0).u64(n - 1)), static_cast<Vertex>(t.at(1).u64(n - 1)),
                              static_cast<Vertex>(t.at(2).u64(n - 1))};
  } else {
    out.field("result").fail("expected \"YES\" or \"NO\"");
  }

  // One key per registered collision; duplicates are not a canonical certificate.
  std::set<ShouldCheckKey> seen;
  for (std::size_t k = 0; k < c.class_logs.size(); ++k) {
    const auto& e = c.class_logs[k];
    for (std::size_t q = 0; q < e.collisions.size(); ++q) {
      const auto& r = e.collisions[q];
      ShouldCheckKey key{e.key.layer, e.key.anchor, e.key.prefix, r.group, std::min(r.j, r.j_star)};
      if (!seen.insert(key).second)
        throw SchemaError("class_logs[" + std::to_string(k) + "].collisions[" + std::to_string(q) + "]",
                          "duplicate coverage key " + to_string(key));
    }
  }
  return c;
}

std::set<ShouldCheckKey> log_pairs(const Certificate& c) {
  std::set<ShouldCheckKey> out;
  for (const auto& e : c.class_logs) {
    for (const auto& r : e.collisions)
      out.insert({e.key.layer, e.key.anchor, e.key.prefix, r.group, std::min(r.j, r.j_star)});
  }
  return out;
}

}  // namespace trisketch
